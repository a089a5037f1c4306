"""
avoidgroup._utils

Avoidgroup utilities Module.

Contains helper functions for settings lookup, run configuration, text parsing and
report encoding.
"""

from typing import Any, List, Tuple

import jsonpickle
import prefect
from prefect.run_configs import LocalRun

from . import AVOIDGROUP_CONFIG_PATH, PYTHONPATH, ROOT_DIR


def get_setting(path: str, default: Any) -> Any:
    """
    Read a dotted key below the [avoidgroup] section of the Prefect user config.

    Args:
       - path (str): A dotted key, e.g. "enumeration.member_limit"
       - default (Any): The value returned when the config file or key is missing

    Returns:
       - Any: The configured value or the provided default
    """
    node = prefect.config.get("avoidgroup")
    for key in path.split("."):
        if node is None or not hasattr(node, "get"):
            return default
        node = node.get(key)
    return default if node is None else node


def get_local_run_config() -> LocalRun:
    """
    Return a LocalRun configuration to attach to a flow.

    Returns:
       - prefect.run_configs.LocalRun: The local run configuration to be applied to a flow
    """
    return LocalRun(
        working_dir=ROOT_DIR,
        env={
            "PREFECT__USER_CONFIG_PATH": AVOIDGROUP_CONFIG_PATH,
            "PYTHONPATH": PYTHONPATH,
        },
    )


def parse_n_range(n_from: int, n_to: int) -> Tuple[int, int]:
    """
    Validate an inclusive range of lengths.

    Raises:
       - ValueError: If the range is empty or starts below zero
    """
    if n_from < 0 or n_to < n_from:
        raise ValueError(f"Invalid length range [{n_from}, {n_to}].")
    return n_from, n_to


def split_pattern_text(text: str) -> List[str]:
    """Split "132, 231, 4 1 2 3" into its comma separated pattern tokens."""
    return [token.strip() for token in text.split(",") if token.strip()]


def encode_json(payload: Any) -> str:
    """Encode a plain dict/list payload; key order is kept as built."""
    return jsonpickle.encode(payload, unpicklable=False, indent=2)
