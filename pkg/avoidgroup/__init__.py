"""
avoidgroup, a workbench for the groups generated by pattern-avoiding permutations.

Importing the package points Prefect at `avoidgroup_config.toml` (unless
PREFECT__USER_CONFIG_PATH is already set) and prepares the verdict store location.
"""

import os
import sys
from pathlib import Path

project_root = Path(__file__).resolve().parent.parent
ROOT_DIR = str(project_root)
AVOIDGROUP_CONFIG_PATH = str(project_root / "avoidgroup_config.toml")
TEMPLATES_DIR = str(project_root / "templates")
PYTHONPATH = str(
    project_root
    / ".venv"
    / "lib"
    / f"python{sys.version_info.major}.{sys.version_info.minor}"
    / "site-packages"
)

# prefect reads its user config once, at import time
os.environ.setdefault("PREFECT__USER_CONFIG_PATH", AVOIDGROUP_CONFIG_PATH)

import prefect  # noqa

_store_settings = prefect.config.get("avoidgroup", {})
DB_DIR = project_root / "database"
DB_DIR.mkdir(parents=True, exist_ok=True)
DB_PATH = str(DB_DIR / _store_settings.get("db_file", "avoidgroup.sqlite"))

from .api import run_report_flow, run_scan_flow, run_scenario_flow  # noqa
