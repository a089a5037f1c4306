"""
avoidgroup.api

This module defines the public API for the avoidgroup project.

avoidgroup consists of three Prefect flows: the scenario flow runs the machine checks
of a registered scenario; the scan flow examines a family of pattern sets up to
symmetry; and the report flow renders the verdicts kept in the verdict store. The
scenario and scan flows load every verdict they compute into the store.

Each `run` function builds its flow, attaches the local run configuration and
executes it in the current python process. It returns the report produced by the
flow rather than the flow state.
"""
from typing import Any, Dict, List, Optional

from prefect import Flow

from . import _utils, flows
from .types import ScanReport, ScenarioReport
from .verify import get_scenario


def _run_for_result(flow: Flow, task_name: str, parameters: Dict[str, Any]) -> Any:
    """
    Execute a flow locally and return the result of one of its tasks.

    Raises:
       - RuntimeError: if the flow run did not finish successfully
    """
    flow.run_config = _utils.get_local_run_config()
    state = flow.run(parameters=parameters)
    if not state.is_successful():
        raise RuntimeError(f"Flow <{flow.name}> failed: {state.message}")
    (result_task,) = flow.get_tasks(name=task_name)
    return state.result[result_task].result


def run_scenario_flow(
    scenario_id: str = None, n_max: Optional[int] = None, out: Optional[str] = None
) -> ScenarioReport:
    """
    Create a scenario flow and execute it locally.

    Args:
       - scenario_id (str): The registered scenario to run
       - n_max (int, optional): Skip checks at lengths above this
       - out (str, optional): A file to write the JSON report to

    Returns:
       - ScenarioReport: The report of the run, passing or not

    Raises:
       - ValueError: if the `scenario_id` keyword argument is not provided
       - UnknownScenarioError: if no scenario has this id
    """
    flow = flows.get_scenario_flow(scenario_id=scenario_id)
    get_scenario(scenario_id)
    parameters = {"n_max": n_max, "out": out}

    return _run_for_result(flow, "assemble_scenario_report", parameters)


def run_scan_flow(
    pattern_lengths: List[int] = None,
    subset_size: int = None,
    n_from: int = None,
    n_to: int = None,
    exclude_psi: bool = False,
    classify_all: bool = False,
    family_name: str = None,
    out: Optional[str] = None,
) -> ScanReport:
    """
    Create a scan flow for a family of pattern sets and execute it locally.

    Args:
       - pattern_lengths ([int]): The lengths of the patterns to draw from
       - subset_size (int): The number of patterns in every set
       - n_from (int): The first length to classify at
       - n_to (int): The last length to classify at
       - exclude_psi (bool, optional): Leave the decreasing patterns out of the pool
       - classify_all (bool, optional): Classify certified orbits too
       - family_name (str, optional): The store key of the family
       - out (str, optional): A file to write the JSON report to

    Returns:
       - ScanReport: One record per orbit

    Raises:
       - ValueError: if a family or range argument is not provided
    """
    required = {
        "pattern_lengths": pattern_lengths,
        "subset_size": subset_size,
        "n_from": n_from,
        "n_to": n_to,
    }
    missing = [name for name, value in required.items() if value is None]
    if missing:
        raise ValueError(f"Scan arguments must be provided: {', '.join(missing)}")
    flow = flows.get_scan_flow(family_name=family_name)
    parameters = dict(
        required, exclude_psi=exclude_psi, classify_all=classify_all, out=out
    )

    return _run_for_result(flow, "assemble_scan_report", parameters)


def run_report_flow(patterns: str = None, out: Optional[str] = None) -> str:
    """
    Create a verdict report flow and execute it locally.

    Args:
       - patterns (str): The pattern set whose stored verdicts are reported
       - out (str, optional): A file to write the Markdown report to

    Returns:
       - str: The rendered Markdown report

    Raises:
       - ValueError: if the `patterns` keyword argument is not provided
    """
    if patterns is None:
        raise ValueError("A pattern set must be provided for the report")
    flow = flows.get_report_flow()

    return _run_for_result(
        flow, "render_verdict_report", {"patterns": patterns, "out": out}
    )

