"""
avoidgroup.flows

This module contains all available Prefect Flows to use with avoidgroup.
"""

from prefect import Flow, unmapped
from prefect.core import Parameter

from . import DB_PATH, sql, tasks


def get_scenario_flow(scenario_id: str = None, flow_name: str = None) -> Flow:
    """
    Create a flow that runs every check of a registered scenario and loads the
    computed verdicts into the verdict store.

    Args:
       - scenario_id (str): The registered scenario to run
       - flow_name (str, optional): An optional name to be applied to the flow

    Returns:
       - prefect.Flow: The created Prefect flow ready to be run

    Raises:
       - ValueError: if the `scenario_id` keyword argument is not provided
    """

    if not scenario_id:
        raise ValueError("A scenario id must be provided for the flow")

    verdict_insertmany = tasks.SQLiteExecuteMany(db=DB_PATH)
    flow_name = flow_name or f"Avoidgroup Scenario <{scenario_id}>"
    with Flow(name=flow_name) as scenario_flow:
        n_max = Parameter(name="n_max", default=None)
        out = Parameter(name="out", default=None)
        db_exists = tasks.create_verdict_database()
        checks = tasks.expand_scenario_checks(scenario_id, n_max)
        results = tasks.evaluate_check.map(checks)
        report = tasks.assemble_scenario_report(scenario_id, n_max, results)
        json_report = tasks.save_json_report(report, out)  # noqa
        verdict_records = tasks.extract_verdict_rows(report)
        verdicts_load_state = verdict_insertmany(  # noqa
            query=sql.insert_or_replace_verdict,
            data=verdict_records,
            upstream_tasks=[db_exists],
        )

    return scenario_flow


def get_scan_flow(family_name: str = None, flow_name: str = None) -> Flow:
    """
    Create a flow that scans a family of pattern sets up to symmetry.

    Orbits are examined one task each; the orbit statuses and every classification
    verdict are loaded into the verdict store.

    Args:
       - family_name (str, optional): The store key of the scanned family; derived
         from the family parameters when not provided
       - flow_name (str, optional): An optional name to be applied to the flow

    Returns:
       - prefect.Flow: The created Prefect flow ready to be run
    """

    store_insertmany = tasks.SQLiteExecuteMany(db=DB_PATH)
    flow_name = flow_name or f"Avoidgroup Scan <{family_name or 'family'}>"
    with Flow(name=flow_name) as scan_flow:
        pattern_lengths = Parameter(name="pattern_lengths", default=[3])
        subset_size = Parameter(name="subset_size", default=3)
        exclude_psi = Parameter(name="exclude_psi", default=False)
        n_from = Parameter(name="n_from", default=4)
        n_to = Parameter(name="n_to", default=8)
        classify_all = Parameter(name="classify_all", default=False)
        out = Parameter(name="out", default=None)
        db_exists = tasks.create_verdict_database()
        family = tasks.derive_family(pattern_lengths, subset_size, exclude_psi)
        n_range = tasks.make_n_range(n_from, n_to)
        dominator = tasks.prepare_dominator(n_range)
        orbits = tasks.compute_orbits(family)
        records = tasks.examine_orbit.map(
            members=orbits,
            n_range=unmapped(n_range),
            classify_all=unmapped(classify_all),
            dominator=unmapped(dominator),
        )
        report = tasks.assemble_scan_report(family, n_range, records)
        json_report = tasks.save_json_report(report, out)  # noqa
        orbit_records = tasks.extract_orbit_rows(report, family_name)
        orbits_load_state = store_insertmany(  # noqa
            query=sql.insert_or_replace_scan_orbit,
            data=orbit_records,
            upstream_tasks=[db_exists],
        )
        verdict_records = tasks.extract_scan_verdict_rows(report)
        verdicts_load_state = store_insertmany(  # noqa
            query=sql.insert_or_replace_verdict,
            data=verdict_records,
            upstream_tasks=[db_exists],
        )

    return scan_flow


def get_report_flow(flow_name: str = None) -> Flow:
    """
    Get a flow that renders the stored verdicts of a pattern set as Markdown.

    Args:
       - flow_name (str, optional): An optional name to be applied to the flow

    Returns:
       - prefect.Flow: The created Prefect flow ready to be run
    """
    flow_name = flow_name or "Avoidgroup Verdict Report"
    with Flow(name=flow_name) as report_flow:
        patterns = Parameter(name="patterns", default="")
        out = Parameter(name="out", default=None)
        db_exists = tasks.create_verdict_database()
        rows = tasks.select_verdicts(patterns, upstream_tasks=[db_exists])
        report_text = tasks.render_verdict_report(patterns, rows)
        saved_report = tasks.save_text_report(report_text, out)  # noqa

    return report_flow
