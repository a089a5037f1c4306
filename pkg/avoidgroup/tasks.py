"""
avoidgroup.tasks

Contains all tasks used in this project's flows.
"""

import sqlite3
from contextlib import closing
from typing import Any, Dict, List, Optional, Sequence, Tuple, cast

import jinja2
import prefect
from prefect import Task, task
from prefect.utilities.tasks import defaults_from_attrs

from . import DB_PATH, TEMPLATES_DIR, scans, sql, verify
from ._utils import encode_json, parse_n_range
from .avoidance import PatternSet
from .classify import Verdict
from .types import (
    Check,
    CheckResult,
    OrbitRecord,
    ScanReport,
    ScenarioReport,
    VerdictRow,
)

VERDICT_REPORT_TEMPLATE = "verdict_report.md.jinja2"


class SQLiteExecuteMany(Task):
    """
    Task for executing one statement against many rows of a SQLite file database.

    The transaction is committed as soon as every row has been executed.

    Args:
      - db (str, optional): the location of the database file
      - query (str, optional): the optional _default_ query to execute at runtime;
        can also be provided as a keyword to `run`, which takes precedence over this
        default
      - data ([Tuple]): list of values to be used with the query
      - **kwargs (optional): additional keyword arguments to pass to the standard
        Task initialization

    Raises:
      - ValueError: if query parameter is None or a blank string
      - DatabaseError: if exception occurs when executing the query
    """

    def __init__(
        self,
        db: str = None,
        query: str = None,
        data: List[Tuple] = None,
        **kwargs: Any,
    ):
        self.db = db
        self.query = query
        self.data = data
        super().__init__(**kwargs)

    @defaults_from_attrs("db", "query", "data")
    def run(
        self,
        db: str = None,
        query: str = None,
        data: list = None,
    ) -> int:
        """
        Task run method. Executes the query once per row of `data`.

        Args:
           - db (str, optional): the location of the database file
           - query (str, optional): query to execute against database
           - data (List[tuple], optional): list of values to use in the query

        Returns:
           - int: The number of rows handed to the database

        Raises:
           - ValueError: if `db` is not provided at either initialization or runtime
           - ValueError: if `query` is None or empty string
           - ValueError: if `data` is not provided at either initialization or runtime
             Note: Passing an empty list as `data` is allowed.
        """
        if not db:
            raise ValueError("A database connection string must be provided")

        if not query:
            raise ValueError("A query string must be provided")

        if data is None:
            raise ValueError("A data list must be provided")

        db = cast(str, db)
        query = cast(str, query)
        with closing(sqlite3.connect(db)) as conn, closing(conn.cursor()) as cursor:
            cursor.executemany(query, data)
            conn.commit()
        return len(data)


@task
def create_verdict_database(db: str = DB_PATH) -> None:
    """
    Create the verdict store schema.

    Every table is created with CREATE TABLE IF NOT EXISTS, so the task can run
    against an existing database.
    """
    create_db_script = f"""
    {sql.create_verdicts_table}
    {sql.create_scan_orbits_table}
    """
    with closing(sqlite3.connect(db)) as conn, closing(conn.cursor()) as c:
        c.executescript(create_db_script)
        conn.commit()


@task
def expand_scenario_checks(scenario_id: str, n_max: Optional[int] = None) -> List[Check]:
    checks = verify.expand_scenario_checks(scenario_id, n_max)
    logger = prefect.context.get("logger")
    logger.info(f"Scenario {scenario_id}: {len(checks)} checks to run")
    return checks


@task
def evaluate_check(check: Check) -> CheckResult:
    return verify.evaluate_check(check)


@task
def assemble_scenario_report(
    scenario_id: str, n_max: Optional[int], results: List[CheckResult]
) -> ScenarioReport:
    return verify.assemble_scenario_report(scenario_id, n_max, results)


@task
def save_json_report(report: Any, out: Optional[str] = None) -> str:
    """
    Encode a report as JSON and write it to `out` when a path is given.

    Args:
      - report (Any): Any report object with a `to_dict` method
      - out (str, optional): The file to write

    Returns:
      - str: The encoded report
    """
    text = encode_json(report.to_dict())
    if out:
        with open(out, "w") as f:
            f.write(text + "\n")
        logger = prefect.context.get("logger")
        logger.info(f"Report written to {out}")
    return text


def _verdict_row(patterns: str, verdict: Verdict, source: str) -> Tuple:
    group_class = verdict.group_class
    fp = group_class.fingerprint
    return VerdictRow(
        patterns=patterns,
        n=verdict.n,
        kind=group_class.kind.value,
        label=group_class.label,
        group_order=str(group_class.order),
        fingerprint=None if fp is None else encode_json(fp.to_dict()),
        source=source,
    ).as_tuple()


@task
def extract_verdict_rows(report: ScenarioReport) -> List[Tuple]:
    """Return a store row for every check of the report that computed a verdict."""
    return [
        _verdict_row(
            PatternSet.parse(r.check.patterns).key,
            Verdict(r.check.n, r.verdict),
            f"verify:{report.scenario_id}",
        )
        for r in report.results
        if r.verdict is not None and r.check.n is not None
    ]


@task
def derive_family(
    pattern_lengths: Sequence[int], subset_size: int, exclude_psi: bool = False
) -> scans.PatternFamily:
    """
    Build the family of pattern sets to scan.

    Raises:
      - ValueError: If no pattern length is given or a length or size is negative
    """
    if not pattern_lengths:
        raise ValueError("At least one pattern length must be provided")
    if subset_size < 0 or any(k < 1 for k in pattern_lengths):
        raise ValueError(
            f"Invalid family: lengths {list(pattern_lengths)}, subset size {subset_size}"
        )
    return scans.PatternFamily(
        pattern_lengths=tuple(sorted(set(pattern_lengths))),
        subset_size=subset_size,
        exclude_psi=exclude_psi,
    )


@task
def make_n_range(n_from: int, n_to: int) -> Tuple[int, int]:
    return parse_n_range(n_from, n_to)


@task
def prepare_dominator(n_range: Tuple[int, int]) -> scans.Dominator:
    return scans.Dominator(n_range)


@task
def compute_orbits(family: scans.PatternFamily) -> List[List[PatternSet]]:
    orbits = scans.compute_orbits(family)
    logger = prefect.context.get("logger")
    logger.info(f"Family {family.to_dict()}: {len(orbits)} orbits to examine")
    return orbits


@task
def examine_orbit(
    members: List[PatternSet],
    n_range: Tuple[int, int],
    classify_all: bool = False,
    dominator: Optional[scans.Dominator] = None,
) -> OrbitRecord:
    return scans.examine_orbit(members, n_range, classify_all, None, dominator)


@task
def assemble_scan_report(
    family: scans.PatternFamily, n_range: Tuple[int, int], records: List[OrbitRecord]
) -> ScanReport:
    report = scans.assemble_scan_report(family, n_range, records)
    logger = prefect.context.get("logger")
    logger.info(
        f"Scanned {report.set_count} sets: {len(report.exceptional)} exceptional, "
        f"{report.statement}"
    )
    return report


def family_key(family: Dict) -> str:
    """A short store key for a family, e.g. "S4 choose 4, no psi"."""
    lengths = "+".join(f"S{k}" for k in family["pattern_lengths"])
    psi = ", no psi" if family["exclude_psi"] else ""
    return f"{lengths} choose {family['subset_size']}{psi}"


@task
def extract_orbit_rows(
    report: ScanReport, family_name: Optional[str] = None
) -> List[Tuple]:
    family = family_name or family_key(report.family)
    return [
        (
            family,
            o.representative,
            encode_json(list(o.members)),
            o.status,
            None if o.certificate is None else encode_json(o.certificate.to_dict()),
        )
        for o in report.orbits
    ]


@task
def extract_scan_verdict_rows(report: ScanReport) -> List[Tuple]:
    """Return a store row for every verdict computed while classifying orbits."""
    return [
        _verdict_row(o.representative, v, "scan")
        for o in report.orbits
        if o.stability is not None
        for v in o.stability.verdicts
    ]


@task
def select_verdicts(patterns: str, db: str = DB_PATH) -> List[VerdictRow]:
    """
    Select the stored verdicts of a pattern set, ordered by length.

    Args:
      - patterns (str): The pattern set, in any order or spacing
      - db (str, optional): The location of the database file

    Returns:
      - List[VerdictRow]: The stored rows, empty if nothing was stored
    """
    key = PatternSet.parse(patterns).key
    with closing(sqlite3.connect(db)) as conn, closing(conn.cursor()) as c:
        c.execute(sql.select_verdicts, (key,))
        rows = c.fetchall()
    return [VerdictRow(*row) for row in rows]


@task
def render_verdict_report(
    patterns: str, rows: List[VerdictRow], templates_dir: str = TEMPLATES_DIR
) -> str:
    """Render the Jinja2 Markdown template listing the stored verdicts."""
    template_loader = jinja2.FileSystemLoader(searchpath=templates_dir)
    template_env = jinja2.Environment(loader=template_loader)
    report_template = template_env.get_template(VERDICT_REPORT_TEMPLATE)
    lengths = [row.n for row in rows]
    return report_template.render(
        patterns=PatternSet.parse(patterns).key,
        rows=rows,
        n_range=(min(lengths), max(lengths)) if lengths else None,
        labels=sorted({row.label for row in rows}),
    )


@task
def save_text_report(text: str, out: Optional[str] = None) -> str:
    if out:
        with open(out, "w") as f:
            f.write(text)
    return text
