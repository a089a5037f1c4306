from itertools import chain, combinations
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avoidgroup import avoidance, perms
from avoidgroup.avoidance import PatternSet
from avoidgroup.perms import Permutation, all_permutations

S3 = all_permutations(3)
SUBSETS_OF_S3 = [
    PatternSet(c) for c in chain.from_iterable(combinations(S3, k) for k in range(7))
]


def pattern_sets(max_length=4, max_size=3):
    pool = [p for k in range(1, max_length + 1) for p in all_permutations(k)]
    return st.lists(st.sampled_from(pool), max_size=max_size).map(PatternSet)


class TestPatternSet:
    def test__parse__canonical_key__sorts_by_length_then_lexicographic(self):
        T = PatternSet.parse("321, 12, 4 1 2 3")

        assert T.key == "1 2, 3 2 1, 4 1 2 3"
        assert str(T) == "{12, 321, 4123}"

    def test__parse__empty_text__gives_empty_set(self):
        T = PatternSet.parse("")

        assert len(T) == 0
        assert T.key == ""
        assert T.max_length == 0

    def test__parse__malformed_pattern__raises_ValueError(self):
        with pytest.raises(ValueError):
            PatternSet.parse("132, 1x3")

    def test__equality__ignores_input_order(self):
        assert PatternSet.parse("231, 132") == PatternSet.parse("132,231")

    def test__normalized__drops_patterns_containing_others(self):
        T = PatternSet.parse("12, 123, 21")

        assert T.normalized() == PatternSet.parse("12, 21")


class TestSymmetries:
    def test__image__inverse_of_231__is_312(self):
        assert avoidance.image(PatternSet.parse("231"), "inv") == PatternSet.parse("312")

    def test__image__unknown_name__raises_ValueError(self):
        with pytest.raises(ValueError, match="Unknown symmetry"):
            avoidance.image(PatternSet.parse("12"), "rot")

    def test__symmetry_images__with_decreasing_pattern__keeps_only_safe_images(self):
        images = avoidance.symmetry_images(PatternSet.parse("321, 132"))
        preserving = {img.name for img in images if img.group_preserving}

        assert preserving == {"id", "inv", "rc", "rc-inv"}

    def test__symmetry_images__without_decreasing_pattern__all_preserve(self):
        images = avoidance.symmetry_images(PatternSet.parse("132, 213"))

        assert len(images) == 8
        assert all(img.group_preserving for img in images)

    def test__es_empty_bound__takes_product_of_shortened_lengths(self):
        assert avoidance.es_empty_bound(PatternSet.parse("123, 321")) == 4
        assert avoidance.es_empty_bound(PatternSet.parse("12, 21")) == 1
        assert avoidance.es_empty_bound(PatternSet.parse("1234, 321")) == 6

    def test__es_empty_bound__without_monotone_pair__is_None(self):
        assert avoidance.es_empty_bound(PatternSet.parse("123, 132")) is None


class TestEnumeration:
    def test__count_avoiders__single_pattern_of_length_three__is_catalan(self):
        assert avoidance.count_avoiders(5, PatternSet.parse("123")) == 42
        assert avoidance.count_avoiders(6, PatternSet.parse("231")) == 132

    def test__count_avoiders__pair_of_length_three__is_power_of_two(self):
        assert avoidance.count_avoiders(6, PatternSet.parse("123, 132")) == 32

    def test__count_avoiders__empty_set__is_factorial(self):
        assert avoidance.count_avoiders(5, PatternSet()) == factorial(5)

    def test__count_avoiders__past_es_bound__is_zero(self):
        assert avoidance.count_avoiders(5, PatternSet.parse("123, 321")) == 0
        assert avoidance.count_avoiders(4, PatternSet.parse("123, 321")) > 0

    def test__enumerate_avoiders__length_zero__has_the_empty_permutation(self):
        avoiders = avoidance.enumerate_avoiders(0, PatternSet.parse("123"))

        assert avoiders.members == (Permutation(()),)

    def test__enumerate_avoiders__empty_pattern__has_no_members(self):
        T = PatternSet([Permutation(())])

        assert len(avoidance.enumerate_avoiders(3, T)) == 0
        assert avoidance.count_avoiders(3, T) == 0

    def test__enumerate_avoiders__over_member_limit__raises_MemberLimitExceeded(self):
        with pytest.raises(avoidance.MemberLimitExceeded, match="member limit of 3"):
            avoidance.enumerate_avoiders(3, PatternSet(), member_limit=3)

    def test__iter_avoiders__negative_length__raises_ValueError(self):
        with pytest.raises(ValueError, match="non-negative"):
            list(avoidance.iter_avoiders(-1, PatternSet()))

    def test__iter_avoiders__unknown_strategy__raises_ValueError(self):
        with pytest.raises(ValueError, match="Unknown enumeration strategy"):
            list(avoidance.iter_avoiders(3, PatternSet(), strategy="random"))

    def test__iter_avoiders__prefix_strategy__is_lexicographic(self):
        words = list(avoidance.iter_avoiders(5, PatternSet.parse("132"), "prefix"))

        assert words == sorted(words)

    @settings(max_examples=60, deadline=None)
    @given(T=pattern_sets(), n=st.integers(0, 6))
    def test__enumerate_avoiders__both_strategies__match_brute_force(
        self, T, n, oracle_avoiders
    ):
        expected = sorted(oracle_avoiders(n, T.patterns))

        for strategy in avoidance.STRATEGIES:
            found = avoidance.enumerate_avoiders(n, T, strategy=strategy)
            assert list(found.members) == expected


class TestGroupOfAvoiders:
    def test__group_of_avoiders__no_patterns__is_symmetric_group(self):
        assert avoidance.group_of_avoiders(5, PatternSet()).order == 120

    def test__group_of_avoiders__three_rotations__is_dihedral_order(self):
        g = avoidance.group_of_avoiders(6, PatternSet.parse("123, 231, 312"))

        assert g.order == 12

    def test__group_of_avoiders__cyclic_triple__has_order_n(self):
        g = avoidance.group_of_avoiders(7, PatternSet.parse("132, 213, 321"))

        assert g.order == 7

    def test__group_of_avoiders__empty_class__is_trivial(self):
        g = avoidance.group_of_avoiders(6, PatternSet.parse("123, 321"))

        assert g.order == 1

    @settings(max_examples=25, deadline=None)
    @given(T=pattern_sets(max_length=3), n=st.integers(1, 5))
    def test__group_of_avoiders__matches_brute_force_closure(
        self, T, n, oracle_avoiders, oracle_closure
    ):
        gens = oracle_avoiders(n, T.patterns)

        assert avoidance.group_of_avoiders(n, T).order == len(oracle_closure(gens, n))

    def test__is_subgroup_set__avoiding_all_but_identity__is_subgroup(self):
        T = PatternSet.parse("132, 213, 231, 312, 321")

        assert avoidance.is_subgroup_set(5, T)

    def test__is_subgroup_set__empty_class__is_not_subgroup(self):
        assert not avoidance.is_subgroup_set(3, PatternSet.parse("12, 21"))

    def test__is_subgroup_set__catalan_class__is_not_subgroup(self):
        assert not avoidance.is_subgroup_set(4, PatternSet.parse("123"))


@pytest.fixture(scope="module")
def s3_contents(oracle_contains):
    """Per n <= 7, each permutation of S_n with the length-3 patterns it contains."""
    return {
        n: {
            p: frozenset(tau for tau in S3 if oracle_contains(p, tau))
            for p in all_permutations(n)
        }
        for n in range(8)
    }


class TestAvoiderLaws:
    @pytest.mark.parametrize("n", range(8))
    def test__enumerate_avoiders__every_subset_of_S3__matches_brute_force(
        self, n, s3_contents
    ):
        for T in SUBSETS_OF_S3:
            expected = sorted(
                p for p, inside in s3_contents[n].items() if not inside & T.patterns
            )

            for strategy in avoidance.STRATEGIES:
                found = avoidance.enumerate_avoiders(n, T, strategy=strategy)
                assert list(found.members) == expected, (T.key, strategy)

    @settings(max_examples=50, deadline=None)
    @given(
        T=st.sets(st.sampled_from(all_permutations(4))).map(PatternSet),
        n=st.integers(4, 6),
    )
    def test__enumerate_avoiders__subsets_of_S4__match_brute_force(
        self, T, n, oracle_avoiders
    ):
        expected = sorted(oracle_avoiders(n, T.patterns))

        for strategy in avoidance.STRATEGIES:
            found = avoidance.enumerate_avoiders(n, T, strategy)
            assert list(found.members) == expected

    @pytest.mark.parametrize(
        "name, fn",
        [
            ("inv", perms.inverse),
            ("r", perms.reverse),
            ("c", perms.complement),
            ("rc", perms.reverse_complement),
        ],
    )
    def test__enumerate_avoiders__symmetry_image__maps_the_avoider_set(self, name, fn):
        for T in SUBSETS_OF_S3:
            for n in range(7):
                avoiders = avoidance.enumerate_avoiders(n, T).members
                imaged = avoidance.enumerate_avoiders(n, avoidance.image(T, name))

                assert set(imaged.members) == {fn(p) for p in avoiders}

    def test__enumerate_avoiders__larger_pattern_set__avoider_set_shrinks(self):
        n = 5
        avoiders = {
            T: set(avoidance.enumerate_avoiders(n, T).members) for T in SUBSETS_OF_S3
        }

        for T in SUBSETS_OF_S3:
            for bigger in SUBSETS_OF_S3:
                if T.patterns <= bigger.patterns:
                    assert avoiders[bigger] <= avoiders[T]

    @pytest.mark.parametrize("n", range(1, 7))
    def test__enumerate_avoiders__is_closed_under_patterns(self, n):
        for T in SUBSETS_OF_S3:
            shorter = set(avoidance.enumerate_avoiders(n - 1, T).members)

            for p in avoidance.enumerate_avoiders(n, T):
                assert perms.patterns_of(p, n - 1) <= shorter

    @pytest.mark.parametrize(
        "r, s", [(r, s) for r in range(1, 5) for s in range(1, 5) if (r, s) != (4, 4)]
    )
    def test__es_empty_bound__is_the_last_nonempty_length(self, r, s, oracle_avoiders):
        T = PatternSet([perms.identity(r), perms.decreasing(s)])
        bound = avoidance.es_empty_bound(T)

        assert bound == (r - 1) * (s - 1)
        assert oracle_avoiders(bound, T.patterns)
        assert oracle_avoiders(bound + 1, T.patterns) == []
        assert avoidance.count_avoiders(bound, T) == len(
            oracle_avoiders(bound, T.patterns)
        )
        assert avoidance.count_avoiders(bound + 1, T) == 0
