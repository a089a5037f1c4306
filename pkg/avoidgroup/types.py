from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from .classify import GroupClass, StabilityReport


@dataclass(frozen=True)
class Check:
    """
    A single machine check of a scenario.

    `kind` selects the evaluator, `claim` names the statement it exercises and
    `params` carries evaluator specific inputs.
    """

    kind: str
    patterns: str
    n: Optional[int]
    expected: str
    claim: str
    params: Tuple[Tuple[str, Any], ...] = ()

    def param(self, key: str, default: Any = None) -> Any:
        return dict(self.params).get(key, default)

    @property
    def repro(self) -> str:
        n = "" if self.n is None else f" --n {self.n}"
        if self.kind in ("classify", "order"):
            return f'avoidgroup classify{n} --patterns "{self.patterns}"'
        if self.kind == "count":
            return f'avoidgroup enumerate{n} --patterns "{self.patterns}" --count-only'
        return f'avoidgroup verify --scenario {self.param("scenario", "all")}'


@dataclass(frozen=True)
class Scenario:
    id: str
    description: str
    claims: Tuple[str, ...]
    checks: Tuple[Check, ...]
    unverified: Tuple[str, ...] = ()

    @property
    def n_range(self) -> Optional[Tuple[int, int]]:
        ns = [c.n for c in self.checks if c.n is not None]
        return (min(ns), max(ns)) if ns else None


@dataclass(frozen=True)
class CheckResult:
    check: Check
    actual: str
    passed: bool
    verdict: Optional[GroupClass] = None
    error: Optional[str] = None
    note: Optional[str] = None

    def to_dict(self) -> Dict:
        out: Dict[str, Any] = {
            "kind": self.check.kind,
            "patterns": self.check.patterns,
            "n": self.check.n,
            "expected": self.check.expected,
            "actual": self.actual,
            "pass": self.passed,
            "claim": self.check.claim,
            "repro": self.check.repro,
        }
        if self.error:
            out["error"] = self.error
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class ScenarioReport:
    scenario_id: str
    description: str
    n_max: Optional[int]
    results: Tuple[CheckResult, ...]
    unverified: Tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[CheckResult]:
        return [r for r in self.results if not r.passed]

    def to_dict(self) -> Dict:
        return {
            "scenario": self.scenario_id,
            "description": self.description,
            "config": {"n_max": self.n_max},
            "checks": [r.to_dict() for r in self.results],
            "summary": {
                "checks": len(self.results),
                "passed": len(self.results) - len(self.failures),
                "failed": len(self.failures),
                "pass": self.passed,
                "unverified": list(self.unverified),
            },
        }


@dataclass(frozen=True)
class Certificate:
    """Every generator of a standard generating family avoids one image of the set."""

    family: str
    assignments: Tuple[Tuple[str, str], ...]  # (generator in cycle form, image name)
    degree: int

    def to_dict(self) -> Dict:
        return {
            "family": self.family,
            "degree": self.degree,
            "assignments": [{"generator": g, "image": i} for g, i in self.assignments],
        }


@dataclass(frozen=True)
class OrbitRecord:
    representative: str
    members: Tuple[str, ...]
    status: str
    candidate: bool
    certificate: Optional[Certificate] = None
    dominated_by: Optional[str] = None
    stability: Optional[StabilityReport] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict:
        out: Dict[str, Any] = {
            "representative": self.representative,
            "members": list(self.members),
            "status": self.status,
            "candidate": self.candidate,
        }
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.dominated_by is not None:
            out["dominated_by"] = self.dominated_by
        if self.stability is not None:
            out["verdicts"] = self.stability.to_dict()
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass(frozen=True)
class ScanReport:
    family: Dict
    n_range: Tuple[int, int]
    orbits: Tuple[OrbitRecord, ...]
    candidate_count: int
    set_count: int

    @property
    def exceptional(self) -> List[str]:
        return [o.representative for o in self.orbits if o.status == "exceptional"]

    def count(self, status: str) -> int:
        return sum(1 for o in self.orbits if o.status == status)

    @property
    def statement(self) -> str:
        a, b = self.n_range
        return f"verified on [{a}, {b}]"

    def to_dict(self) -> Dict:
        return {
            "family": self.family,
            "n_range": list(self.n_range),
            "orbits": [o.to_dict() for o in self.orbits],
            "exceptional": self.exceptional,
            "summary": {
                "sets": str(self.set_count),
                "orbits": str(len(self.orbits)),
                "candidates": str(self.candidate_count),
                "certified": str(self.count("certified")),
                "dominated": str(self.count("dominated")),
                "exceptional": str(self.count("exceptional")),
                "statement": self.statement,
            },
        }


@dataclass(frozen=True)
class ProbeRow:
    n: int
    order: int
    fixed_points: Tuple[int, ...]
    swapped_blocks: Tuple[Tuple[int, int], ...]

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "order": str(self.order),
            "fixed_points": list(self.fixed_points),
            "swapped_blocks": [list(b) for b in self.swapped_blocks],
        }


@dataclass
class VerdictRow:
    """A row of the Verdicts table."""

    patterns: str
    n: int
    kind: str
    label: str
    group_order: str
    fingerprint: Optional[str]
    source: str = field(default="classify")

    def as_tuple(self) -> Tuple:
        return (
            self.patterns,
            self.n,
            self.kind,
            self.label,
            self.group_order,
            self.fingerprint,
            self.source,
        )
