"""
avoidgroup.verify

Contains the scenario registry, which ties every reproduced statement about groups
generated by pattern avoiding permutations to machine checks, the check evaluators
and `run_scenario`.
"""

from dataclasses import replace
from functools import lru_cache
from itertools import chain, combinations
from math import factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

from prefect.utilities.logging import get_logger

from . import groups
from .avoidance import (
    MemberLimitExceeded,
    PatternSet,
    count_avoiders,
    enumerate_avoiders,
    es_empty_bound,
    group_of_avoiders,
    image,
    is_subgroup_set,
    iter_avoiders,
)
from .classify import (
    GroupClass,
    ReferenceRegistry,
    classify_avoiders,
    classify_sequence,
    parse_expectation,
)
from .grids import (
    PegPermutation,
    bounded_class_check,
    grid_union,
    structure_form_check,
)
from .perms import decreasing
from .scans import (
    GENERATING_FAMILIES,
    PatternFamily,
    case_one_sets,
    fixed_point_probe,
    four_of_four_candidates,
    generator_pattern_sets,
    psi3_case_sets,
    psi4_case_sets,
    scan,
)
from .types import Check, CheckResult, Scenario, ScenarioReport

logger = get_logger("avoidgroup.verify")


class UnknownScenarioError(ValueError):
    pass


class ScenarioFailed(AssertionError):
    pass


CLAIMS: Dict[str, str] = {
    "subgroup-complement": "S_n(S_k minus G) is a subgroup of S_n for every G <= S_k",
    "inclusion": "T within T' gives <S_n(T')> within <S_n(T)>",
    "sub-pattern": "sigma_i below tau_i gives <S_n(sigma)> within <S_n(tau)>",
    "inverse-closure": "<S_n(T)> = <S_n(T^-1)> = <S_n(T) u S_n(T^-1)>",
    "rc-conjugacy": "<S_n(T^rc)> is the conjugate of <S_n(T)> by psi_n",
    "psi-free-union": "without decreasing patterns the r, c and rc images add nothing",
    "generating-families": "the standard transposition families generate S_n",
    "generator-criterion": "missing a generating family's patterns forces S_n",
    "symmetric-quotient-family": "<S_n(132, 231, 321, k12..k-1)> is S_(k-1) for n >= k",
    "three-of-three": "groups generated by avoiders of three patterns of length 3",
    "small-sets": "groups generated by avoiders of at most three patterns",
    "four-of-three": "groups for four or five patterns of length 3",
    "three-three-one-four": "groups for three patterns of length 3 and one of length 4",
    "three-three-one-four-rest": "every other 3+1 set gives S_n or the trivial group",
    "four-of-four": "four patterns of length 4 without 4321 give S_n but for two sets",
    "semidirect-product": "the order 72 group splits over N of order 36",
    "abelian-limit": "an eventually constant abelian group is Z_2 or Z_2 x Z_2",
    "bounded-classes": "bounded classes are unions of pegs with at most one label",
    "structure-theorem": "constant groups force 123[t, id, s] or 321[s, psi, t] forms",
}

ABELIAN_LIMITS = frozenset({"Trivial", "Cyclic(2)", "KleinFour"})

# the order 72 group of degree 6, its normal subgroup and complement
SEMIDIRECT_G = ("(1,6,3,4,2,5)", "(1,6,2,5)(3,4)")
SEMIDIRECT_N = ("(4,6,5)", "(2,3)(4,5)", "(1,3,2)(4,5,6)", "(1,6,3,4,2,5)")
SEMIDIRECT_H = ("(5,6)",)

FOUR_OF_FOUR_EXCEPTIONS = ("1234, 1432, 3214, 4312", "1234, 1432, 3214, 4231")

# (patterns, expectation, first n, last n)
THREE_THREE_ONE_FOUR: Tuple[Tuple[str, str, int, int], ...] = (
    ("123, 132, 213, 4231", "Dihedral(4)", 4, 9),
    ("132, 213, 231, 4123", "Dihedral(4)", 4, 9),
    ("132, 231, 312, 3214", "Dihedral(4)", 4, 9),
    ("123, 132, 231, 3214", "Named(s3xs3:2)", 6, 9),
    ("132, 213, 231, 1234", "Named(s3xs3:2)", 6, 9),
    ("123, 231, 312, 1432", "Dihedral(n)", 3, 9),
    ("123, 231, 312, 2143", "Dihedral(n)", 3, 9),
    ("132, 213, 231, 4312", "Dihedral(n)", 3, 9),
    ("132, 231, 312, 2134", "Dihedral(n)", 3, 9),
    ("132, 213, 321, 2341", "Cyclic(n)", 3, 9),
    ("132, 213, 321, 3412", "Cyclic(n)", 3, 9),
    ("132, 231, 312, 4321", "Symmetric(3)", 4, 9),
    ("132, 231, 321, 4123", "Symmetric(3)", 4, 9),
    ("231, 312, 321, 1243", "Symmetric(4)", 4, 9),
    ("231, 312, 321, 2134", "Symmetric(4)", 4, 9),
    ("231, 312, 321, 1324", "KleinFour", 4, 8),
    ("123, 132, 213, 4312", "Named(g1152)", 8, 10),
)

FOUR_OF_THREE: Tuple[Tuple[str, str, int, int], ...] = (
    ("123, 132, 213, 321", "Trivial", 5, 8),
    ("123, 231, 321, 2413", "Trivial", 5, 8),
    ("213, 231, 312, 321", "Cyclic(2)", 5, 8),
    ("132, 231, 312, 321", "Cyclic(2)", 5, 8),
    ("132, 213, 231, 312", "Cyclic(2)", 5, 8),
    ("123, 132, 213, 231", "Dihedral(4)", 5, 8),
    ("123, 132, 213, 312", "Dihedral(4)", 5, 8),
    ("132, 213, 312, 321", "Cyclic(n)", 4, 8),
    ("132, 213, 231, 321", "Cyclic(n)", 4, 8),
    ("123, 213, 231, 312", "Dihedral(n)", 4, 8),
    ("123, 132, 231, 312", "Dihedral(n)", 4, 8),
    ("123, 132, 213, 231, 312", "Cyclic(2)", 5, 8),
    ("132, 213, 231, 312, 321", "Trivial", 5, 8),
)


def _params(**kwargs) -> Tuple[Tuple[str, object], ...]:
    return tuple(sorted(kwargs.items()))


def _over(
    kind: str,
    patterns: str,
    expected: Callable[[int], str],
    claim: str,
    ns: Iterable[int],
    **params,
) -> List[Check]:
    return [
        Check(kind, patterns, n, expected(n), claim, _params(**params)) for n in ns
    ]


def _classify_over(
    patterns: str, expectation: str, claim: str, a: int, b: int
) -> List[Check]:
    return _over("classify", patterns, lambda n: expectation, claim, range(a, b + 1))


def _subset_texts(pool: Sequence[str], size: int) -> List[str]:
    return [", ".join(c) for c in combinations(pool, size)]


def _scenario(
    scenario_id: str,
    description: str,
    claims: Sequence[str],
    checks: Sequence[Check],
    unverified: Sequence[str] = (),
) -> Scenario:
    tagged = tuple(
        replace(c, params=tuple(sorted(c.params + (("scenario", scenario_id),))))
        for c in checks
    )
    return Scenario(
        id=scenario_id,
        description=description,
        claims=tuple(claims),
        checks=tagged,
        unverified=tuple(unverified),
    )


def _generating_sk() -> Scenario:
    checks: List[Check] = []
    for k in (3, 4, 5):
        tau = " ".join(str(x) for x in [k] + list(range(1, k)))
        patterns = f"132, 231, 321, {tau}"
        claim = "symmetric-quotient-family"
        checks += _classify_over(patterns, f"Symmetric({k - 1})", claim, k, 9)
        checks += _over("count", patterns, lambda n: str(k - 1), claim, [9])
    return _scenario(
        "generating-sk",
        "Avoiders of 132, 231, 321 and k12..k-1 generate a copy of S_(k-1)",
        ["symmetric-quotient-family"],
        checks,
    )


def _three_of_three() -> Scenario:
    claim = "three-of-three"
    checks: List[Check] = []
    for text in _subset_texts(["123", "132", "213", "231", "312", "321"], 3):
        T = PatternSet.parse(text)
        if {"123", "321"} <= {p.compact() for p in T}:
            checks += _classify_over(text, "Trivial", claim, 5, 8)
        elif text == "132, 213, 321":
            checks += _classify_over(text, "Cyclic(n)", claim, 3, 9)
            checks += _over("order", text, str, claim, range(3, 10))
        elif text == "123, 231, 312":
            checks += _classify_over(text, "Dihedral(n)", claim, 3, 9)
            checks += _over("order", text, lambda n: str(2 * n), claim, range(3, 10))
            checks += _over("count", text, str, claim, range(3, 10))
        else:
            checks += _classify_over(text, "Symmetric(n)", claim, 3, 8)
    return _scenario(
        "three-of-three",
        "All twenty sets of three patterns of length 3",
        [claim],
        checks,
    )


def _le_three_patterns() -> Scenario:
    claim = "small-sets"
    checks: List[Check] = []
    for text, bound in (("123, 321", 4), ("12, 21", 1), ("1234, 321", 6)):
        checks.append(Check("es-bound", text, None, str(bound), claim))
        last = bound + 4 if text == "123, 321" else bound + 2
        checks += _over("count", text, lambda n: "0", claim, range(bound + 1, last + 1))
        checks += _classify_over(text, "Trivial", claim, bound + 1, bound + 1)
    for text in (
        "132",
        "123, 231",
        "132, 213, 4321",
        "231, 312, 1234",
        "2143, 3412",
        "123, 2413, 3142",
    ):
        checks += _classify_over(text, "Symmetric(n)", claim, 5, 8)
    return _scenario(
        "le-three-patterns",
        "Sets of at most three patterns: Erdos-Szekeres emptiness and S_n",
        [claim],
        checks,
    )


def _four_of_three() -> Scenario:
    claim = "four-of-three"
    checks: List[Check] = []
    for text, expectation, a, b in FOUR_OF_THREE:
        checks += _classify_over(text, expectation, claim, a, b)
    return _scenario(
        "four-of-three",
        "Sets of four and five patterns of length 3",
        [claim],
        checks,
    )


def _three_three_one_four() -> Scenario:
    claim = "three-three-one-four"
    rest = "three-three-one-four-rest"
    checks: List[Check] = []
    for text, expectation, a, b in THREE_THREE_ONE_FOUR:
        checks += _classify_over(text, expectation, claim, a, b)
    checks += _over("order", "123, 132, 231, 3214", lambda n: "72", claim, range(6, 10))
    checks += _over("order", "123, 132, 213, 4312", lambda n: "1152", claim, [8, 9, 10])
    checks += [
        Check("case-count", "", None, "26", rest, _params(case="case-one")),
        Check(
            "case-sets",
            "",
            None,
            "132, 213, 312, 4321; 132, 213, 231, 4321; "
            "132, 231, 312, 4321; 213, 231, 312, 4321",
            rest,
            _params(case="psi4"),
        ),
        Check("case-count", "", None, "14", rest, _params(case="psi3", advisory=True)),
    ]
    for text in (
        "132, 231, 312, 1234",
        "123, 132, 231, 4312",
        "123, 213, 231, 4312",
        "132, 213, 312, 4321",
        "213, 312, 321, 1243",
    ):
        checks += _classify_over(text, "Symmetric(n)", rest, 6, 9)
    return _scenario(
        "three-three-one-four",
        "Three patterns of length 3 and one of length 4 avoiding them",
        [claim, rest],
        checks,
    )


def _four_of_four() -> Scenario:
    claim = "four-of-four"
    exceptional = "1234, 1432, 3214, 3421; 1234, 1432, 3214, 4231"
    checks: List[Check] = []
    checks += _over(
        "count", FOUR_OF_FOUR_EXCEPTIONS[0], lambda n: "145", claim, range(9, 13)
    )
    checks.append(
        Check(
            "case-sets",
            "",
            None,
            "1234, 3214, 3421, 4312; 1234, 1324, 3421, 4312; "
            "1234, 1432, 3421, 4312; 1234, 1432, 3214, 4312; "
            "1234, 1432, 3214, 3421; 1234, 1432, 3214, 4231",
            claim,
            _params(case="four-of-four"),
        )
    )
    checks.append(
        Check(
            "scan-exceptional",
            "",
            9,
            exceptional,
            claim,
            _params(lengths=(4,), subset_size=4, exclude_psi=True, n_from=5),
        )
    )
    checks.append(
        Check(
            "fixed-points",
            FOUR_OF_FOUR_EXCEPTIONS[0],
            11,
            "none",
            claim,
        )
    )
    return _scenario(
        "four-of-four",
        "Four patterns of length 4 without 4321",
        [claim],
        checks,
        unverified=(
            "non-generation of S_n by the two exceptional sets for n > 20",
            "erratum: the derived fixed point 6 at n = 11 does not hold, "
            "the group at n = 11 has no fixed points",
        ),
    )


def _generator_pattern_sets() -> Scenario:
    listed = {
        3: {
            "A": "123, 231, 312, 321",
            "B": "123, 132, 213",
            "C": "123, 213, 231",
            "D": "123, 132, 231",
        },
        4: {
            "A": "1234, 2341, 4123, 4231",
            "B": "1234, 1243, 1324, 2134",
            "C": "1234, 2134, 2341",
            "D": "1234, 1243, 2341",
        },
    }
    checks: List[Check] = []
    for k, families in listed.items():
        for name, text in families.items():
            checks.append(
                Check(
                    "generator-patterns",
                    "",
                    None,
                    text,
                    "generator-criterion",
                    _params(k=k, family=name),
                )
            )
    for name in GENERATING_FAMILIES:
        checks += _over(
            "family-generates",
            "",
            lambda n: str(factorial(n)),
            "generating-families",
            range(3, 10),
            family=name,
        )
    for text in ("132, 213", "231, 312, 321", "132, 312, 321", "213, 312, 321"):
        checks += _classify_over(text, "Symmetric(n)", "generator-criterion", 4, 8)
    return _scenario(
        "generator-pattern-sets",
        "Patterns of the standard generating families of S_n",
        ["generating-families", "generator-criterion"],
        checks,
    )


def _subgroup_lemma() -> Scenario:
    complements = (
        "132, 213, 231, 312, 321",
        "132, 231, 312, 321",
        "213, 231, 312, 321",
        "132, 213, 231, 312",
        "132, 213, 321",
        "",
    )
    checks: List[Check] = []
    for text in complements:
        checks += _over(
            "subgroup", text, lambda n: "true", "subgroup-complement", range(4, 8)
        )
    return _scenario(
        "subgroup-lemma",
        "Avoiders of the complement of a subgroup of S_3 form a group",
        ["subgroup-complement"],
        checks,
    )


def _abelian_scan() -> Scenario:
    pool = ["123", "132", "213", "231", "312", "321"]
    texts = [text for size in range(7) for text in _subset_texts(pool, size)]
    texts += [row[0] for row in THREE_THREE_ONE_FOUR]
    checks = [
        Check(
            "abelian-stable",
            text,
            9,
            " | ".join(sorted(ABELIAN_LIMITS)),
            "abelian-limit",
            _params(n_from=6),
        )
        for text in texts
    ]
    return _scenario(
        "abelian-scan",
        "Abelian groups that stay constant on the tested range",
        ["abelian-limit"],
        checks,
        unverified=("constancy for every n beyond the tested range",),
    )


def _semidirect_72() -> Scenario:
    claim = "semidirect-product"
    checks = [
        Check("cycles-order", "", None, "72", claim, _params(generators=SEMIDIRECT_G)),
        Check("cycles-order", "", None, "36", claim, _params(generators=SEMIDIRECT_N)),
        Check("cycles-order", "", None, "2", claim, _params(generators=SEMIDIRECT_H)),
        Check("semidirect", "", None, "true", claim),
    ]
    return _scenario(
        "semidirect-72",
        "The order 72 group as a semidirect product inside S_6",
        [claim],
        checks,
    )


def _symmetry_lemmas() -> Scenario:
    n = 6
    checks = [
        Check(
            "subgroup-of",
            "132, 213, 321",
            n,
            "true",
            "inclusion",
            _params(within="132, 213"),
        ),
        Check(
            "subgroup-of",
            "123, 231, 312, 1432",
            n,
            "true",
            "inclusion",
            _params(within="123, 231, 312"),
        ),
        Check(
            "subgroup-of",
            "123, 213, 312, 3421",
            n,
            "true",
            "sub-pattern",
            _params(within="1234, 3214, 3421, 4312"),
        ),
        Check(
            "subgroup-of",
            "123, 231, 312",
            n,
            "true",
            "sub-pattern",
            _params(within="1234, 2341, 3412"),
        ),
    ]
    for text in (
        "132, 213, 231",
        "123, 231, 312",
        "132, 213, 321",
        "123, 132, 231, 3214",
        "231, 312, 321, 1324",
        "2143, 3412",
    ):
        for relation in ("inverse", "inverse-union"):
            checks.append(
                Check(
                    "same-group",
                    text,
                    n,
                    "true",
                    "inverse-closure",
                    _params(relation=relation),
                )
            )
        checks.append(
            Check(
                "same-group",
                text,
                n,
                "true",
                "rc-conjugacy",
                _params(relation="rc-conjugate"),
            )
        )
    psi_free = ("132, 213, 231", "123, 231, 312", "123, 132, 231, 3214", "2143, 3412")
    for text in psi_free:
        checks.append(
            Check(
                "same-group",
                text,
                n,
                "true",
                "psi-free-union",
                _params(relation="psi-free-union"),
            )
        )
    return _scenario(
        "symmetry-lemmas",
        "Inclusion, sub-pattern and symmetry identities as element set equalities",
        [
            "inclusion",
            "sub-pattern",
            "inverse-closure",
            "rc-conjugacy",
            "psi-free-union",
        ],
        checks,
    )


def _bounded_classes() -> Scenario:
    bounded = "bounded-classes"
    structure = "structure-theorem"
    checks = [
        Check("grid-bounded", "", None, "D=3", bounded, _params(pegs="4-213")),
        Check("grid-bounded", "", None, "D=3", bounded, _params(pegs="213+, 2+1")),
        Check("grid-bounded", "", None, "unbounded", bounded, _params(pegs="1-2-")),
    ]
    checks += _over(
        "grid-equal",
        "123, 132, 231, 3214",
        lambda n: "true",
        bounded,
        range(4, 10),
        pegs="4-213",
    )
    checks += _over(
        "grid-equal",
        "132, 312, 321, 2314",
        lambda n: "true",
        bounded,
        range(3, 10),
        pegs="213+, 2+1",
    )
    checks += _over(
        "count", "132, 312, 321, 2314", lambda n: "3", bounded, range(3, 10)
    )
    checks += _over(
        "grid-equal",
        "123, 231, 312",
        lambda n: "true",
        bounded,
        range(3, 10),
        pegs="1-2-",
    )
    for text in ("123, 132, 231, 3214", "231, 312, 321, 1324", "123, 132, 213, 4231"):
        checks += _over("structure-forms", text, lambda n: "true", structure, [9])
    return _scenario(
        "bounded-classes",
        "Bounded permutation classes as grid classes and their monotone core",
        [bounded, structure],
        checks,
    )


@lru_cache(maxsize=None)
def registered_scenarios() -> Dict[str, Scenario]:
    builders = (
        _generating_sk,
        _three_of_three,
        _le_three_patterns,
        _four_of_three,
        _three_three_one_four,
        _four_of_four,
        _generator_pattern_sets,
        _subgroup_lemma,
        _abelian_scan,
        _semidirect_72,
        _symmetry_lemmas,
        _bounded_classes,
    )
    scenarios = [build() for build in builders]
    return {s.id: s for s in scenarios}


def get_scenario(scenario_id: str) -> Scenario:
    """
    Look up a registered scenario.

    Raises:
       - UnknownScenarioError: If no scenario has this id
    """
    scenarios = registered_scenarios()
    if scenario_id not in scenarios:
        raise UnknownScenarioError(
            f"Unknown scenario <{scenario_id}>, expected one of {sorted(scenarios)}."
        )
    return scenarios[scenario_id]


def audit_claims() -> List[str]:
    """
    List the problems of the scenario metadata: claims covered by no scenario or by
    several, unknown claims, checks citing a claim outside their scenario and claims
    of a scenario that no check exercises.
    """
    problems = []
    owners: Dict[str, List[str]] = {claim: [] for claim in CLAIMS}
    for scenario in registered_scenarios().values():
        exercised = {c.claim for c in scenario.checks}
        for claim in scenario.claims:
            if claim not in CLAIMS:
                problems.append(f"{scenario.id}: unknown claim <{claim}>")
                continue
            owners[claim].append(scenario.id)
            if claim not in exercised:
                problems.append(f"{scenario.id}: claim <{claim}> has no check")
        for claim in sorted(exercised - set(scenario.claims)):
            problems.append(f"{scenario.id}: check cites foreign claim <{claim}>")
    for claim, ids in owners.items():
        if len(ids) != 1:
            problems.append(f"claim <{claim}> covered by {len(ids)} scenarios {ids}")
    return problems


# Evaluators return (actual, passed, verdict)
_Outcome = Tuple[str, bool, Optional[GroupClass]]
_Registry = Optional[ReferenceRegistry]


def _patterns(check: Check, key: Optional[str] = None) -> PatternSet:
    return PatternSet.parse(check.param(key) if key else check.patterns)


def _pegs(check: Check) -> List[PegPermutation]:
    return [PegPermutation.parse(t.strip()) for t in check.param("pegs").split(",")]


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _set_keys(text: str) -> Set[str]:
    return {PatternSet.parse(t).key for t in text.split(";") if t.strip()}


def _evaluate_classify(check: Check, registry: _Registry) -> _Outcome:
    verdict = classify_avoiders(check.n, _patterns(check), registry)
    expected = parse_expectation(check.expected, check.n)
    return verdict.label, verdict.isomorphism_key() == expected, verdict


def _evaluate_order(check: Check, registry: _Registry) -> _Outcome:
    actual = str(group_of_avoiders(check.n, _patterns(check)).order)
    return actual, actual == check.expected, None


def _evaluate_count(check: Check, registry: _Registry) -> _Outcome:
    actual = str(count_avoiders(check.n, _patterns(check)))
    return actual, actual == check.expected, None


def _evaluate_subgroup(check: Check, registry: _Registry) -> _Outcome:
    actual = _flag(is_subgroup_set(check.n, _patterns(check)))
    return actual, actual == check.expected, None


def _evaluate_es_bound(check: Check, registry: _Registry) -> _Outcome:
    actual = str(es_empty_bound(_patterns(check)))
    return actual, actual == check.expected, None


def _evaluate_abelian(check: Check, registry: _Registry) -> _Outcome:
    report = classify_sequence(
        _patterns(check), (check.param("n_from"), check.n), registry
    )
    last = report.verdicts[-1].group_class
    stable = report.constant_suffix_start == report.n_range[0]
    if not (stable and last.is_abelian is True):
        return "not abelian and constant", True, last
    actual = last.isomorphism_key()
    return actual, actual in ABELIAN_LIMITS, last


def _evaluate_generator_patterns(
    check: Check, registry: _Registry
) -> _Outcome:
    patterns = generator_pattern_sets(check.param("k"))[check.param("family")]
    actual = PatternSet(patterns).key
    return actual, actual == PatternSet.parse(check.expected).key, None


def _evaluate_family(check: Check, registry: _Registry) -> _Outcome:
    family = GENERATING_FAMILIES[check.param("family")]
    actual = str(groups.build_group(family(check.n), check.n).order)
    return actual, actual == check.expected, None


def _evaluate_cycles_order(
    check: Check, registry: _Registry
) -> _Outcome:
    g = groups.group_from_cycles(check.param("generators"), check.param("degree", 6))
    actual = str(g.order)
    return actual, actual == check.expected, None


def _evaluate_semidirect(check: Check, registry: _Registry) -> _Outcome:
    g, N, H = (
        groups.group_from_cycles(gens, 6)
        for gens in (SEMIDIRECT_G, SEMIDIRECT_N, SEMIDIRECT_H)
    )
    actual = _flag(groups.semidirect_check(g, N, H))
    return actual, actual == check.expected, None


def _union_group(n: int, sets: Sequence[PatternSet]) -> groups.GroupHandle:
    return groups.build_group(chain.from_iterable(iter_avoiders(n, T) for T in sets), n)


def _evaluate_same_group(
    check: Check, registry: _Registry
) -> _Outcome:
    n, T = check.n, _patterns(check)
    relation = check.param("relation")
    g = group_of_avoiders(n, T)
    if relation == "inverse":
        h = group_of_avoiders(n, image(T, "inv"))
    elif relation == "inverse-union":
        h = _union_group(n, [T, image(T, "inv")])
    elif relation == "rc-conjugate":
        g = groups.conjugate_group(g, decreasing(n))
        h = group_of_avoiders(n, image(T, "rc"))
    elif relation == "psi-free-union":
        h = _union_group(n, [image(T, name) for name in ("id", "r", "c", "rc")])
    else:
        raise ValueError(f"Unknown group relation <{relation}>.")
    actual = _flag(groups.same_group(g, h))
    return actual, actual == check.expected, None


def _evaluate_subgroup_of(
    check: Check, registry: _Registry
) -> _Outcome:
    small = group_of_avoiders(check.n, _patterns(check))
    big = group_of_avoiders(check.n, _patterns(check, "within"))
    actual = _flag(all(groups.is_member(big, x) for x in small.generators))
    return actual, actual == check.expected, None


def _evaluate_scan(check: Check, registry: _Registry) -> _Outcome:
    family = PatternFamily(
        pattern_lengths=tuple(check.param("lengths")),
        subset_size=check.param("subset_size"),
        exclude_psi=check.param("exclude_psi", False),
    )
    report = scan(family, (check.param("n_from"), check.n), registry=registry)
    actual = "; ".join(report.exceptional)
    return actual, _set_keys(actual) == _set_keys(check.expected), None


_CASES: Dict[str, Callable[[], List[PatternSet]]] = {
    "case-one": case_one_sets,
    "psi4": psi4_case_sets,
    "psi3": psi3_case_sets,
    "four-of-four": four_of_four_candidates,
}


def _evaluate_case_count(
    check: Check, registry: _Registry
) -> _Outcome:
    actual = str(len(_CASES[check.param("case")]()))
    return actual, actual == check.expected, None


def _evaluate_case_sets(
    check: Check, registry: _Registry
) -> _Outcome:
    actual = "; ".join(T.key for T in _CASES[check.param("case")]())
    return actual, _set_keys(actual) == _set_keys(check.expected), None


def _evaluate_grid_equal(
    check: Check, registry: _Registry
) -> _Outcome:
    avoiders = set(enumerate_avoiders(check.n, _patterns(check)).members)
    actual = _flag(avoiders == set(grid_union(_pegs(check), check.n)))
    return actual, actual == check.expected, None


def _evaluate_grid_bounded(
    check: Check, registry: _Registry
) -> _Outcome:
    report = bounded_class_check(_pegs(check))
    if not report.bounded:
        actual = "unbounded"
    elif not report.constant_verified:
        actual = "not constant"
    else:
        actual = f"D={report.D}"
    return actual, actual == check.expected, None


def _evaluate_structure(check: Check, registry: _Registry) -> _Outcome:
    members = enumerate_avoiders(check.n, _patterns(check)).members
    actual = _flag(all(structure_form_check(p) is not None for p in members))
    return actual, actual == check.expected, None


def _evaluate_fixed_points(
    check: Check, registry: _Registry
) -> _Outcome:
    row = fixed_point_probe(_patterns(check), (check.n, check.n))[0]
    actual = " ".join(str(x) for x in row.fixed_points) or "none"
    return actual, set(check.expected.split()) <= set(actual.split()), None


EVALUATORS: Dict[str, Callable[[Check, _Registry], _Outcome]] = {
    "classify": _evaluate_classify,
    "order": _evaluate_order,
    "count": _evaluate_count,
    "subgroup": _evaluate_subgroup,
    "es-bound": _evaluate_es_bound,
    "abelian-stable": _evaluate_abelian,
    "generator-patterns": _evaluate_generator_patterns,
    "family-generates": _evaluate_family,
    "cycles-order": _evaluate_cycles_order,
    "semidirect": _evaluate_semidirect,
    "same-group": _evaluate_same_group,
    "subgroup-of": _evaluate_subgroup_of,
    "scan-exceptional": _evaluate_scan,
    "case-count": _evaluate_case_count,
    "case-sets": _evaluate_case_sets,
    "grid-equal": _evaluate_grid_equal,
    "grid-bounded": _evaluate_grid_bounded,
    "structure-forms": _evaluate_structure,
    "fixed-points": _evaluate_fixed_points,
}


def expand_scenario_checks(
    scenario_id: str, n_max: Optional[int] = None
) -> List[Check]:
    """
    Return the checks of a scenario, dropping those above `n_max`.

    Raises:
       - UnknownScenarioError: If no scenario has this id
    """
    scenario = get_scenario(scenario_id)
    return [c for c in scenario.checks if n_max is None or c.n is None or c.n <= n_max]


def evaluate_check(
    check: Check, registry: Optional[ReferenceRegistry] = None
) -> CheckResult:
    """
    Run a single check.

    Resource caps do not abort the scenario: the check fails with the error recorded.
    An advisory check never fails; a mismatch is recorded as a note instead.

    Args:
       - check (Check): The check to run
       - registry (ReferenceRegistry, optional): Named references for classification

    Returns:
       - CheckResult: Expected against actual, with the verdict when one was computed

    Raises:
       - ValueError: If the check kind has no evaluator
    """
    evaluator = EVALUATORS.get(check.kind)
    if evaluator is None:
        raise ValueError(f"No evaluator for check kind <{check.kind}>.")
    try:
        actual, passed, verdict = evaluator(check, registry)
    except (MemberLimitExceeded, groups.ElementCapExceeded) as e:
        logger.warning(f"Check {check.kind} on <{check.patterns}> stopped: {e}")
        return CheckResult(check=check, actual="error", passed=False, error=str(e))
    note = None
    if not passed and check.param("advisory", False):
        note = f"expected {check.expected}, found {actual}"
        logger.warning(f"Advisory check {check.kind} differs: {note}")
        passed = True
    return CheckResult(
        check=check, actual=actual, passed=passed, verdict=verdict, note=note
    )


def _failure_message(scenario_id: str, result: CheckResult) -> str:
    check = result.check
    n = "" if check.n is None else f" at n = {check.n}"
    return (
        f"Scenario {scenario_id}: {check.kind} check on <{check.patterns}>{n} "
        f"expected {check.expected}, found {result.actual}. "
        f"Reproduce with: {check.repro}"
    )


def assemble_scenario_report(
    scenario_id: str, n_max: Optional[int], results: Sequence[CheckResult]
) -> ScenarioReport:
    scenario = get_scenario(scenario_id)
    report = ScenarioReport(
        scenario_id=scenario.id,
        description=scenario.description,
        n_max=n_max,
        results=tuple(results),
        unverified=scenario.unverified,
    )
    if report.failures:
        logger.error(_failure_message(scenario_id, report.failures[0]))
    logger.info(
        f"Scenario {scenario_id}: {len(results) - len(report.failures)} of "
        f"{len(results)} checks passed"
    )
    return report


def run_scenario(
    scenario_id: str,
    n_max: Optional[int] = None,
    raise_on_failure: bool = False,
    registry: Optional[ReferenceRegistry] = None,
) -> ScenarioReport:
    """
    Run every check of a registered scenario.

    Args:
       - scenario_id (str): The scenario id
       - n_max (int, optional): Skip checks at lengths above this
       - raise_on_failure (bool, optional): Stop at the first mismatch
       - registry (ReferenceRegistry, optional): Named references for classification

    Returns:
       - ScenarioReport: One result per check, in registration order

    Raises:
       - UnknownScenarioError: If no scenario has this id
       - ScenarioFailed: If `raise_on_failure` is set and a check mismatches; the
         message carries the reproduction command line
    """
    checks = expand_scenario_checks(scenario_id, n_max)
    results = []
    for check in checks:
        result = evaluate_check(check, registry)
        if not result.passed and raise_on_failure:
            message = _failure_message(scenario_id, result)
            logger.error(message)
            raise ScenarioFailed(message)
        results.append(result)
    return assemble_scenario_report(scenario_id, n_max, results)
