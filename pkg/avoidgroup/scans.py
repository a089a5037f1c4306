"""
avoidgroup.scans

Contains the exhaustive pattern set scans: the standard generating families and their
pattern unions, the symmetry orbits of a family of pattern sets, certificates of
generation, domination by smaller sets, the case filters re-derived from the generator
criterion and the fixed point probe.
"""

from dataclasses import dataclass
from itertools import combinations, product
from math import factorial
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from prefect.utilities.logging import get_logger

from . import groups
from ._utils import get_setting, parse_n_range
from .avoidance import (
    MemberLimitExceeded,
    PatternSet,
    contains_psi,
    group_of_avoiders,
    symmetry_images,
)
from .classify import ReferenceRegistry, classify_sequence
from .perms import (
    Permutation,
    all_permutations,
    contains,
    cycle_perm,
    decreasing,
    format_cycles,
    identity,
    patterns_of,
    sort_key,
    transposition,
)
from .types import Certificate, OrbitRecord, ProbeRow, ScanReport

logger = get_logger("avoidgroup.scans")

CERTIFIED = "certified"
DOMINATED = "dominated"
EXCEPTIONAL = "exceptional"

_ALL_IMAGES = ("id", "r", "c", "rc", "inv", "r-inv", "c-inv", "rc-inv")
_PSI_IMAGES = ("id", "inv", "rc", "rc-inv")


def _full_cycle(n: int) -> Permutation:
    return cycle_perm(range(1, n + 1), n)


GENERATING_FAMILIES: Dict[str, Callable[[int], List[Permutation]]] = {
    "A": lambda n: [transposition(1, n, n), _full_cycle(n)],
    "B": lambda n: [transposition(i, i + 1, n) for i in range(1, n)],
    "C": lambda n: [transposition(1, 2, n), _full_cycle(n)],
    "D": lambda n: [transposition(n - 1, n, n), _full_cycle(n)],
}


def generator_pattern_sets(k: int) -> Dict[str, FrozenSet[Permutation]]:
    """
    The patterns of length k contained in the generators of each standard generating
    family. These sets no longer change once n is at least 2k+1, which is the degree
    used here.
    """
    n = 2 * k + 1
    return {
        name: frozenset().union(*(patterns_of(g, k) for g in family(n)))
        for name, family in GENERATING_FAMILIES.items()
    }


def _family_unions(lengths: Sequence[int]) -> Dict[str, FrozenSet[Permutation]]:
    unions: Dict[str, FrozenSet[Permutation]] = {
        name: frozenset() for name in GENERATING_FAMILIES
    }
    for k in sorted(set(lengths)):
        for name, patterns in generator_pattern_sets(k).items():
            unions[name] = unions[name] | patterns
    return unions


@dataclass(frozen=True)
class PatternFamily:
    """All pattern sets of a given size drawn from S_k for the given lengths k."""

    pattern_lengths: Tuple[int, ...]
    subset_size: int
    exclude_psi: bool = False

    def pool(self) -> List[Permutation]:
        out = []
        for k in sorted(set(self.pattern_lengths)):
            out.extend(
                p
                for p in all_permutations(k)
                if not (self.exclude_psi and p == decreasing(k))
            )
        return out

    def members(self) -> Iterator[PatternSet]:
        if not self.pattern_lengths or self.subset_size < 0:
            return
        for subset in combinations(self.pool(), self.subset_size):
            yield PatternSet(subset)

    def to_dict(self) -> Dict:
        return {
            "pattern_lengths": list(self.pattern_lengths),
            "subset_size": self.subset_size,
            "exclude_psi": self.exclude_psi,
        }


def _image_map(T: PatternSet) -> Dict[str, PatternSet]:
    return {img.name: img.image for img in symmetry_images(T)}


def _preserving_names(T: PatternSet) -> Tuple[str, ...]:
    return _PSI_IMAGES if contains_psi(T) else _ALL_IMAGES


def is_candidate(T: PatternSet, image_names: Optional[Sequence[str]] = None) -> bool:
    """
    Decide whether every considered image of T meets the pattern union of every
    standard generating family. A set failing this is already known to generate S_n.

    Args:
       - T (PatternSet): The pattern set
       - image_names (Sequence[str], optional): The images to test. Defaults to the
         images that keep the generated group up to conjugation

    Returns:
       - bool: True if no family is avoided by any of the images
    """
    if not len(T):
        return False
    unions = _family_unions([p.n for p in T])
    images = _image_map(T)
    names = image_names or _preserving_names(T)
    return all(
        images[name].patterns & union
        for name in names
        for union in unions.values()
    )


def _certificate_pools(T: PatternSet) -> List[Tuple[str, ...]]:
    # the avoiders of all images in one pool lie in the same group
    if contains_psi(T):
        return [("id", "inv"), ("rc", "rc-inv")]
    return [_ALL_IMAGES]


def certify(T: PatternSet) -> Optional[Certificate]:
    """
    Look for a standard generating family each of whose generators avoids one image
    of T from a common pool. Such a family lies in <S_n(T)> (or a conjugate of it),
    so the group is S_n.

    Returns:
       - Certificate or None: The family with the image chosen for every generator
    """
    if not len(T):
        return None
    n = 2 * T.max_length + 1
    images = _image_map(T)
    for pool in _certificate_pools(T):
        for name, family in GENERATING_FAMILIES.items():
            assignments = []
            for g in family(n):
                chosen = next(
                    (
                        image_name
                        for image_name in pool
                        if not any(
                            contains(g, tau) for tau in images[image_name].patterns
                        )
                    ),
                    None,
                )
                if chosen is None:
                    break
                assignments.append((format_cycles(g), chosen))
            else:
                return Certificate(
                    family=name, assignments=tuple(assignments), degree=n
                )
    return None


def dominating_sets(T: PatternSet) -> List[PatternSet]:
    """
    Sets T' below T in the sub-pattern order: every pattern is kept or replaced by one
    of its patterns one entry shorter, and all but at most one are shortened.
    """
    options = []
    for tau in T:
        shorter = sorted(patterns_of(tau, tau.n - 1), key=sort_key) if tau.n > 1 else []
        options.append([(tau, False)] + [(s, True) for s in shorter])
    need = max(1, len(T) - 1)
    seen = set()
    out = []
    for choice in product(*options):
        if sum(1 for _, short in choice if short) < need:
            continue
        candidate = PatternSet(p for p, _ in choice)
        if candidate.key not in seen:
            seen.add(candidate.key)
            out.append(candidate)
    return sorted(out, key=lambda s: s.sort_key)


class Dominator:
    """Finds a smaller pattern set already known to generate S_n, caching results."""

    def __init__(self, n_range: Tuple[int, int], window: Optional[int] = None):
        self.window = window or get_setting("verifier.domination_window", 2)
        a, b = n_range
        self.top = list(range(max(a, b - self.window + 1), b + 1))
        self._certified: Dict[str, bool] = {}
        self._generating: Dict[str, bool] = {}

    def _is_certified(self, T: PatternSet) -> bool:
        if T.key not in self._certified:
            self._certified[T.key] = certify(T) is not None
        return self._certified[T.key]

    def _generates_on_top(self, T: PatternSet) -> bool:
        if T.key not in self._generating:
            self._generating[T.key] = all(
                group_of_avoiders(n, T).order == factorial(n) for n in self.top
            )
        return self._generating[T.key]

    def dominated_by(self, T: PatternSet) -> Optional[PatternSet]:
        smaller = dominating_sets(T)
        for T2 in smaller:
            if self._is_certified(T2):
                return T2
        for T2 in smaller:
            if self._generates_on_top(T2):
                return T2
        return None


def orbit(T: PatternSet) -> List[PatternSet]:
    """
    The symmetry orbit of T, sorted: all eight images when no image contains a
    decreasing pattern, otherwise the four that keep the group up to conjugation.
    """
    images = _image_map(T)
    if any(contains_psi(image) for image in images.values()):
        names = _PSI_IMAGES
    else:
        names = _ALL_IMAGES
    unique = {images[name].key: images[name] for name in names}
    return sorted(unique.values(), key=lambda s: s.sort_key)


def scan(
    family: PatternFamily,
    n_range: Tuple[int, int],
    classify_all: bool = False,
    registry: Optional[ReferenceRegistry] = None,
) -> ScanReport:
    """
    Scan a family of pattern sets up to symmetry.

    Every orbit is certified, dominated by a smaller generating set or left
    exceptional. Exceptional and dominated orbits are classified over the range,
    certified ones only with `classify_all`.

    Args:
       - family (PatternFamily): The pattern sets to scan
       - n_range (Tuple[int, int]): Inclusive range of lengths for classification
       - classify_all (bool, optional): Classify certified orbits too
       - registry (ReferenceRegistry, optional): Named references for classification

    Returns:
       - ScanReport: One record per orbit, ordered by representative
    """
    a, b = parse_n_range(*n_range)
    orbits = compute_orbits(family)
    dominator = Dominator((a, b))
    records = [
        examine_orbit(members, (a, b), classify_all, registry, dominator)
        for members in orbits
    ]
    report = assemble_scan_report(family, (a, b), records)
    logger.info(
        f"Scanned {report.set_count} sets in {len(records)} orbits: "
        f"{len(report.exceptional)} exceptional, {report.statement}"
    )
    return report


def compute_orbits(family: PatternFamily) -> List[List[PatternSet]]:
    """Partition the family into symmetry orbits, each listed representative first."""
    members = {T.key: T for T in family.members()}
    seen = set()
    out = []
    for T in sorted(members.values(), key=lambda s: s.sort_key):
        if T.key in seen:
            continue
        orb = [S for S in orbit(T) if S.key in members]
        seen.update(S.key for S in orb)
        out.append(orb)
    return out


def examine_orbit(
    members: List[PatternSet],
    n_range: Tuple[int, int],
    classify_all: bool = False,
    registry: Optional[ReferenceRegistry] = None,
    dominator: Optional[Dominator] = None,
) -> OrbitRecord:
    """Certify, look for domination and classify a single orbit."""
    rep = members[0]
    dominator = dominator or Dominator(n_range)
    candidate = is_candidate(rep)
    certificate = certify(rep)
    dominating = None
    if certificate is not None:
        status = CERTIFIED
    else:
        dominating = dominator.dominated_by(rep)
        status = DOMINATED if dominating is not None else EXCEPTIONAL
    stability, error = None, None
    if status != CERTIFIED or classify_all:
        try:
            stability = classify_sequence(rep, n_range, registry)
        except (MemberLimitExceeded, groups.ElementCapExceeded) as e:
            logger.warning(f"Classification of {rep} stopped: {e}")
            error = str(e)
    logger.debug(f"Orbit of {rep}: {status}")
    return OrbitRecord(
        representative=rep.key,
        members=tuple(m.key for m in members),
        status=status,
        candidate=candidate,
        certificate=certificate,
        dominated_by=None if dominating is None else dominating.key,
        stability=stability,
        error=error,
    )


def assemble_scan_report(
    family: PatternFamily, n_range: Tuple[int, int], records: Sequence[OrbitRecord]
) -> ScanReport:
    records = sorted(records, key=lambda r: PatternSet.parse(r.representative).sort_key)
    return ScanReport(
        family=family.to_dict(),
        n_range=n_range,
        orbits=tuple(records),
        candidate_count=sum(len(r.members) for r in records if r.candidate),
        set_count=sum(len(r.members) for r in records),
    )


def _sorted_sets(sets) -> List[PatternSet]:
    return sorted(sets, key=lambda s: s.sort_key)


def case_one_sets() -> List[PatternSet]:
    """
    Three patterns of length 3 and one of length 4 avoiding them, with no decreasing
    pattern, whose eight images all meet every generating family.
    """
    threes = [p for p in all_permutations(3) if p != decreasing(3)]
    fours = [p for p in all_permutations(4) if p != decreasing(4)]
    out = []
    for triple in combinations(threes, 3):
        for tau in fours:
            if any(contains(tau, s) for s in triple):
                continue
            T = PatternSet(triple + (tau,))
            if is_candidate(T, _ALL_IMAGES):
                out.append(T)
    return _sorted_sets(out)


def psi4_case_sets() -> List[PatternSet]:
    """Three patterns of length 3 other than 123 next to 4321, meeting every family."""
    psi4 = decreasing(4)
    threes = [p for p in all_permutations(3) if p != identity(3)]
    out = []
    for triple in combinations(threes, 3):
        if any(contains(psi4, s) for s in triple):
            continue
        T = PatternSet(triple + (psi4,))
        if is_candidate(T, ("id",)):
            out.append(T)
    return _sorted_sets(out)


def psi3_case_sets() -> List[PatternSet]:
    """
    321, two further patterns of length 3 other than 123 and a pattern of length 4
    other than 1234 and 4321 avoiding them, where T and its inverse meet every family.
    """
    others = [Permutation.parse(s) for s in ("132", "213", "231", "312")]
    psi3 = decreasing(3)
    fours = [p for p in all_permutations(4) if p not in (identity(4), decreasing(4))]
    out = []
    for pair in combinations(others, 2):
        triple = (psi3,) + pair
        for tau in fours:
            if any(contains(tau, s) for s in triple):
                continue
            T = PatternSet(triple + (tau,))
            if is_candidate(T, ("id", "inv")):
                out.append(T)
    return _sorted_sets(out)


def four_of_four_candidates() -> List[PatternSet]:
    """Four patterns of length 4 other than 4321 whose eight images meet every family."""
    family = PatternFamily(pattern_lengths=(4,), subset_size=4, exclude_psi=True)
    return _sorted_sets(T for T in family.members() if is_candidate(T, _ALL_IMAGES))


def fixed_point_probe(T: PatternSet, n_range: Tuple[int, int]) -> List[ProbeRow]:
    """
    Report the points fixed by <S_n(T)> and the 2-blocks it swaps, for each n of the
    range. Only generator orbits are needed, so no element listing takes place.
    """
    a, b = parse_n_range(*n_range)
    rows = []
    for n in range(a, b + 1):
        g = group_of_avoiders(n, T)
        rows.append(
            ProbeRow(
                n=n,
                order=g.order,
                fixed_points=tuple(groups.fixed_points(g)),
                swapped_blocks=tuple(groups.swapped_blocks(g)),
            )
        )
    return rows
