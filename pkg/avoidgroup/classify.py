"""
avoidgroup.classify

Contains the classifier that names the isomorphism type of a computed group, the
structural fingerprints it relies on, the registry of named reference groups and the
stability summary over a range of lengths.
"""

import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from prefect.utilities.logging import get_logger

from . import avoidance, groups
from ._utils import get_setting, parse_n_range
from .perms import (
    Parity,
    Permutation,
    compose,
    cycle_perm,
    inverse,
    order_of,
    parity,
    transposition,
)

logger = get_logger("avoidgroup.classify")


class DuplicateReferenceError(ValueError):
    """Raised when a reference id is registered twice."""


class FrozenRegistryError(ValueError):
    """Raised when a reference is registered on a frozen registry."""


class GroupKind(str, Enum):
    TRIVIAL = "Trivial"
    CYCLIC = "Cyclic"
    KLEIN_FOUR = "KleinFour"
    DIHEDRAL = "Dihedral"
    SYMMETRIC = "Symmetric"
    ALTERNATING = "Alternating"
    NAMED = "Named"
    OTHER = "Other"


@dataclass(frozen=True)
class Fingerprint:
    order: int
    element_order_histogram: Tuple[Tuple[int, int], ...]
    center_order: int
    conjugacy_class_count: int

    @property
    def abelian(self) -> bool:
        return self.center_order == self.order

    def to_dict(self) -> Dict:
        return {
            "order": str(self.order),
            "element_order_histogram": {
                str(k): str(v) for k, v in self.element_order_histogram
            },
            "center_order": str(self.center_order),
            "conjugacy_class_count": str(self.conjugacy_class_count),
            "abelian": self.abelian,
        }


@dataclass(frozen=True)
class GroupClass:
    """
    A classification verdict.

    `param` is the m of Cyclic(m), Dihedral(m), Symmetric(m) and Alternating(m), or
    the reference id of Named. `partial` marks verdicts reached without enumerating
    the group; `ambiguous` lists further references with the same fingerprint.
    """

    kind: GroupKind
    order: int
    param: Optional[Union[int, str]] = None
    fingerprint: Optional[Fingerprint] = None
    partial: bool = False
    ambiguous: Tuple[str, ...] = ()

    def __post_init__(self):
        m = self.param
        laws = {
            GroupKind.TRIVIAL: lambda: self.order == 1,
            GroupKind.CYCLIC: lambda: isinstance(m, int) and self.order == m >= 1,
            GroupKind.KLEIN_FOUR: lambda: self.order == 4,
            GroupKind.DIHEDRAL: lambda: isinstance(m, int)
            and m >= 3
            and self.order == 2 * m,
            GroupKind.SYMMETRIC: lambda: isinstance(m, int)
            and m >= 0
            and self.order == factorial(m),
            GroupKind.ALTERNATING: lambda: isinstance(m, int)
            and m >= 3
            and self.order == factorial(m) // 2,
            GroupKind.NAMED: lambda: isinstance(m, str) and self.order >= 1,
            GroupKind.OTHER: lambda: self.order >= 1,
        }
        if not laws[self.kind]():
            raise ValueError(f"{self.label} cannot have order {self.order}.")

    @property
    def label(self) -> str:
        if self.kind in (GroupKind.TRIVIAL, GroupKind.KLEIN_FOUR, GroupKind.OTHER):
            return self.kind.value
        return f"{self.kind.value}({self.param})"

    @property
    def is_abelian(self) -> Optional[bool]:
        if self.kind in (GroupKind.TRIVIAL, GroupKind.CYCLIC, GroupKind.KLEIN_FOUR):
            return True
        if self.fingerprint is not None:
            return self.fingerprint.abelian
        return None

    def isomorphism_key(self) -> str:
        """
        The canonical isomorphism type, identifying the small coincidences
        S_1 = Trivial, S_2 = Z_2, A_3 = Z_3, D_3 = S_3 and a named symmetric reference
        with the symmetric group itself.
        """
        m = self.param
        if self.kind == GroupKind.SYMMETRIC and isinstance(m, int):
            if m <= 1:
                return GroupKind.TRIVIAL.value
            if m == 2:
                return "Cyclic(2)"
        if self.kind == GroupKind.CYCLIC and m == 1:
            return GroupKind.TRIVIAL.value
        if self.kind == GroupKind.ALTERNATING and m == 3:
            return "Cyclic(3)"
        if self.kind == GroupKind.DIHEDRAL and m == 3:
            return "Symmetric(3)"
        if self.kind == GroupKind.NAMED and isinstance(m, str) and m.startswith("sym:"):
            return f"Symmetric({m[4:]})"
        if self.kind == GroupKind.OTHER:
            return f"Other[{self.order}]"
        return self.label

    def signature(self) -> Tuple:
        """Isomorphism key, refined by the fingerprint for Named and Other verdicts."""
        if self.kind in (GroupKind.NAMED, GroupKind.OTHER):
            return (self.isomorphism_key(), self.fingerprint)
        return (self.isomorphism_key(),)

    def to_dict(self) -> Dict:
        out = {
            "kind": self.kind.value,
            "params": [] if self.param is None else [str(self.param)],
            "label": self.label,
            "order": str(self.order),
        }
        if self.fingerprint is not None:
            out["fingerprint"] = self.fingerprint.to_dict()
        if self.partial:
            out["partial"] = True
        if self.ambiguous:
            out["ambiguous"] = list(self.ambiguous)
        return out


_EXPECTATION_RE = re.compile(r"^\s*(\w+)\s*(?:\(\s*([^)]*?)\s*\))?\s*$")


def _eval_param(text: str, n: int) -> int:
    # "n", "n-1", "n+2" or a plain integer
    match = re.fullmatch(r"n\s*([+-])\s*(\d+)", text)
    if text == "n":
        return n
    if match:
        sign = 1 if match.group(1) == "+" else -1
        return n + sign * int(match.group(2))
    return int(text)


def parse_expectation(text: str, n: int) -> str:
    """
    Turn an expected verdict such as "Dihedral(n)" or "Named(g1152)" into the
    isomorphism key it denotes at length n.

    Raises:
       - ValueError: If the text does not name a kind
    """
    match = _EXPECTATION_RE.match(text)
    if not match:
        raise ValueError(f"Cannot parse expectation <{text}>.")
    try:
        kind = GroupKind(match.group(1))
    except ValueError as e:
        raise ValueError(f"Unknown group kind in expectation <{text}>.") from e
    raw = match.group(2)
    if kind == GroupKind.NAMED:
        return GroupClass(kind, 1, raw).isomorphism_key()
    if kind == GroupKind.OTHER:
        return f"Other[{int(raw)}]" if raw else "Other"
    if kind in (GroupKind.TRIVIAL, GroupKind.KLEIN_FOUR):
        return kind.value
    m = _eval_param(raw or "", n)
    order = {
        GroupKind.CYCLIC: m,
        GroupKind.DIHEDRAL: 2 * m,
        GroupKind.SYMMETRIC: factorial(m) if m >= 0 else 0,
        GroupKind.ALTERNATING: factorial(m) // 2 if m >= 0 else 0,
    }[kind]
    return GroupClass(kind, order, m).isomorphism_key()


def _conjugacy_class_count(
    elems: Sequence[Permutation], generators: Sequence[Permutation]
) -> int:
    # classes are the orbits of conjugation by the generators
    inverses = [inverse(x) for x in generators]
    seen = set()
    count = 0
    for e in elems:
        if e in seen:
            continue
        count += 1
        seen.add(e)
        frontier = [e]
        while frontier:
            y = frontier.pop()
            for x, xi in zip(generators, inverses):
                z = compose(compose(xi, y), x)
                if z not in seen:
                    seen.add(z)
                    frontier.append(z)
    return count


def fingerprint(g: groups.GroupHandle, cap: Optional[int] = None) -> Fingerprint:
    """
    Compute the structural fingerprint of g from a full listing of its elements.

    Args:
       - g (GroupHandle): The group
       - cap (int, optional): Largest order to enumerate. Defaults to
         `classifier.fingerprint_cap`

    Returns:
       - Fingerprint: Order, element order histogram, center order and class count

    Raises:
       - ElementCapExceeded: If the group is larger than the cap
    """
    cap = cap or get_setting("classifier.fingerprint_cap", 10 ** 5)
    return _fingerprint_of(g, groups.elements(g, cap))


def _fingerprint_of(g: groups.GroupHandle, elems: Sequence[Permutation]) -> Fingerprint:
    histogram = Counter(order_of(e) for e in elems)
    center = sum(
        1 for e in elems if all(compose(e, x) == compose(x, e) for x in g.generators)
    )
    return Fingerprint(
        order=g.order,
        element_order_histogram=tuple(sorted(histogram.items())),
        center_order=center,
        conjugacy_class_count=_conjugacy_class_count(elems, g.generators),
    )


@dataclass
class _Reference:
    ref_id: str
    factory: Callable[[], groups.GroupHandle]
    _handle: Optional[groups.GroupHandle] = field(default=None, repr=False)
    _fingerprint: Optional[Fingerprint] = field(default=None, repr=False)

    @property
    def handle(self) -> groups.GroupHandle:
        if self._handle is None:
            self._handle = self.factory()
        return self._handle

    @property
    def fingerprint(self) -> Fingerprint:
        if self._fingerprint is None:
            self._fingerprint = fingerprint(self.handle)
        return self._fingerprint


class ReferenceRegistry:
    """
    Named reference groups, built lazily from explicit generators the first time a
    group of the same order needs to be matched.
    """

    def __init__(self):
        self._entries: Dict[str, _Reference] = {}
        self._frozen = False

    def __contains__(self, ref_id: str) -> bool:
        return ref_id in self._entries

    @property
    def ids(self) -> List[str]:
        return list(self._entries)

    @property
    def frozen(self) -> bool:
        return self._frozen

    def freeze(self) -> "ReferenceRegistry":
        self._frozen = True
        return self

    def copy(self) -> "ReferenceRegistry":
        """
        An unfrozen registry holding the same references. Handles and fingerprints
        built so far are shared.
        """
        other = ReferenceRegistry()
        other._entries = dict(self._entries)
        return other

    def register_factory(
        self, ref_id: str, factory: Callable[[], groups.GroupHandle]
    ) -> None:
        if self._frozen:
            raise FrozenRegistryError(
                f"Cannot register <{ref_id}>: the registry is frozen, extend a copy()."
            )
        if ref_id in self._entries:
            raise DuplicateReferenceError(
                f"Reference <{ref_id}> is already registered."
            )
        self._entries[ref_id] = _Reference(ref_id=ref_id, factory=factory)

    def register_reference(
        self, ref_id: str, generators: Sequence[Permutation], degree: int
    ) -> None:
        """
        Register a named group given by explicit generators.

        Raises:
           - DuplicateReferenceError: If ref_id is already registered
           - FrozenRegistryError: If the registry is frozen
        """
        gens = tuple(generators)
        self.register_factory(ref_id, lambda: groups.build_group(gens, degree))

    def handle(self, ref_id: str) -> groups.GroupHandle:
        return self._entries[ref_id].handle

    def fingerprint_of(self, ref_id: str) -> Fingerprint:
        return self._entries[ref_id].fingerprint

    def matches(
        self, fp: Fingerprint, exclude_prefix: Optional[str] = None
    ) -> List[str]:
        """Every reference id whose fingerprint equals fp, in registration order."""
        out = []
        for ref_id, entry in self._entries.items():
            if exclude_prefix and ref_id.startswith(exclude_prefix):
                continue
            # orders are cheap, fingerprints are not
            if entry.handle.order != fp.order:
                continue
            if entry.fingerprint == fp:
                out.append(ref_id)
        return out

    def match_named(self, fp: Fingerprint) -> Optional[str]:
        found = self.matches(fp)
        return found[0] if found else None


_S3XS3_2 = ("(1,6,3,4,2,5)", "(1,6,2,5)(3,4)")


@lru_cache(maxsize=None)
def default_registry() -> ReferenceRegistry:
    """
    The shipped references: `s3xs3:2` of order 72 in S_6, `g1152` generated by
    S_8(123, 132, 213, 4312), and `sym:3` ... `sym:6`.

    The returned registry is shared and frozen. To add references, pass an extended
    `default_registry().copy()` to `classify`.
    """
    registry = ReferenceRegistry()
    registry.register_factory("s3xs3:2", lambda: groups.group_from_cycles(_S3XS3_2, 6))
    registry.register_factory(
        "g1152",
        lambda: avoidance.group_of_avoiders(
            8, avoidance.PatternSet.parse("123, 132, 213, 4312")
        ),
    )
    for k in range(3, 7):
        registry.register_reference(
            f"sym:{k}",
            [transposition(1, 2, k), cycle_perm(range(1, k + 1), k)],
            k,
        )
    return registry.freeze()


def match_named(fp: Fingerprint) -> Optional[str]:
    return default_registry().match_named(fp)


def _is_dihedral(elems: Sequence[Permutation], m: int) -> bool:
    rotations = [e for e in elems if order_of(e) == m]
    involutions = [e for e in elems if order_of(e) == 2]
    for r in rotations:
        r_inv = inverse(r)
        if any(compose(compose(s, r), s) == r_inv for s in involutions):
            return True
    return False


def _is_full_symmetric(g: groups.GroupHandle) -> bool:
    n = g.degree
    return groups.is_member(g, transposition(1, 2, n)) and groups.is_member(
        g, cycle_perm(range(1, n + 1), n)
    )


def classify(
    g: groups.GroupHandle,
    registry: Optional[ReferenceRegistry] = None,
    cap: Optional[int] = None,
) -> GroupClass:
    """
    Name the isomorphism type of g; the first matching rule wins.

    Symmetric and alternating groups of full degree are recognized from the order,
    generator parities and membership without enumerating. Everything else is
    decided on the enumerated elements and their fingerprint; groups above the cap
    are reported as a partial Other.

    Args:
       - g (GroupHandle): The group to classify
       - registry (ReferenceRegistry, optional): Named references to match against.
         Defaults to `default_registry()`
       - cap (int, optional): Largest order to enumerate. Defaults to
         `classifier.fingerprint_cap`

    Returns:
       - GroupClass: The verdict
    """
    registry = registry or default_registry()
    cap = cap or get_setting("classifier.fingerprint_cap", 10 ** 5)
    n, size = g.degree, g.order
    if size == 1:
        return GroupClass(GroupKind.TRIVIAL, 1)
    if n >= 3 and size == factorial(n) and _is_full_symmetric(g):
        return GroupClass(GroupKind.SYMMETRIC, size, n)
    if (
        n >= 4
        and size == factorial(n) // 2
        and all(parity(x) == Parity.EVEN for x in g.generators)
    ):
        return GroupClass(GroupKind.ALTERNATING, size, n)
    if size > cap:
        logger.info(f"Group of order {size} is above the fingerprint cap {cap}")
        return GroupClass(GroupKind.OTHER, size, partial=True)

    elems = groups.elements(g, cap)
    fp = _fingerprint_of(g, elems)
    histogram = dict(fp.element_order_histogram)
    if histogram.get(size):
        return GroupClass(GroupKind.CYCLIC, size, size)
    if size == 4:
        return GroupClass(GroupKind.KLEIN_FOUR, 4)
    for m in range(3, 7):
        ref_id = f"sym:{m}"
        if (
            size == factorial(m)
            and ref_id in registry
            and registry.fingerprint_of(ref_id) == fp
        ):
            return GroupClass(GroupKind.SYMMETRIC, size, m)
    if size % 2 == 0 and size // 2 >= 3 and _is_dihedral(elems, size // 2):
        return GroupClass(GroupKind.DIHEDRAL, size, size // 2)
    named = registry.matches(fp, exclude_prefix="sym:")
    if named:
        if len(named) > 1:
            logger.warning(f"Fingerprint matches several references: {named}")
        return GroupClass(
            GroupKind.NAMED, size, named[0], fp, ambiguous=tuple(named[1:])
        )
    return GroupClass(GroupKind.OTHER, size, fingerprint=fp)


def classify_avoiders(
    n: int, T: "avoidance.PatternSet", registry: Optional[ReferenceRegistry] = None
) -> GroupClass:
    """Classify <S_n(T)>."""
    return classify(avoidance.group_of_avoiders(n, T), registry)


@dataclass(frozen=True)
class Verdict:
    n: int
    group_class: GroupClass

    def to_dict(self) -> Dict:
        return {"n": self.n, **self.group_class.to_dict()}


@dataclass(frozen=True)
class StabilityReport:
    """
    Verdicts of <S_n(T)> over a finite range of n and how far they agree.

    Nothing here is a claim about lengths beyond the tested range.
    """

    patterns: str
    n_range: Tuple[int, int]
    verdicts: Tuple[Verdict, ...]
    constant_suffix_start: int
    stabilized: bool
    kind_constant: bool
    window: int

    @property
    def statement(self) -> str:
        a, b = self.n_range
        if self.constant_suffix_start == a:
            return f"constant on tested range [{a}, {b}]"
        return f"not constant on tested range [{a}, {b}]"

    def to_dict(self) -> Dict:
        return {
            "patterns": self.patterns,
            "n_range": list(self.n_range),
            "verdicts": [v.to_dict() for v in self.verdicts],
            "stability": {
                "constant_suffix_start": self.constant_suffix_start,
                "stabilized": self.stabilized,
                "kind_constant": self.kind_constant,
                "window": self.window,
                "statement": self.statement,
            },
        }


def classify_sequence(
    T: "avoidance.PatternSet",
    n_range: Tuple[int, int],
    registry: Optional[ReferenceRegistry] = None,
    window: Optional[int] = None,
) -> StabilityReport:
    """
    Classify <S_n(T)> for every n of an inclusive range and summarize stability.

    Args:
       - T (PatternSet): The patterns to avoid
       - n_range (Tuple[int, int]): Inclusive range of lengths
       - registry (ReferenceRegistry, optional): Named references
       - window (int, optional): How many top-of-range values must agree before the
         sequence is called stabilized. Defaults to `classifier.stability_window`

    Returns:
       - StabilityReport: The verdicts and the largest constant suffix
    """
    a, b = parse_n_range(*n_range)
    window = window or get_setting("classifier.stability_window", 3)
    verdicts = tuple(
        Verdict(n, classify_avoiders(n, T, registry)) for n in range(a, b + 1)
    )
    signatures = [v.group_class.signature() for v in verdicts]
    start = len(verdicts) - 1
    while start > 0 and signatures[start - 1] == signatures[-1]:
        start -= 1
    kinds = {v.group_class.kind for v in verdicts}
    report = StabilityReport(
        patterns=T.key,
        n_range=(a, b),
        verdicts=verdicts,
        constant_suffix_start=a + start,
        stabilized=len(verdicts) - start >= window,
        kind_constant=len(kinds) == 1,
        window=window,
    )
    logger.info(f"S_n({T.key}) over [{a}, {b}]: {report.statement}")
    return report
