import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avoidgroup import perms
from avoidgroup.perms import Permutation


def permutation_of_length(min_n=0, max_n=7):
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.permutations(list(range(1, n + 1)))
    ).map(lambda w: Permutation(tuple(w)))


class TestPermutation:
    def test__parse__compact_and_spaced_forms__are_equal(self):
        assert Permutation.parse("4231") == Permutation.parse("4 2 3 1")

    def test__parse__multi_digit_entries__needs_spaces(self):
        p = Permutation.parse("10 1 2 3 4 5 6 7 8 9")

        assert p.n == 10
        assert p(1) == 10

    def test__parse__repeated_entry__raises_ValueError(self):
        with pytest.raises(ValueError, match="Cannot parse"):
            Permutation.parse("1 1 2")

    def test__parse__zero_entry__raises_ValueError(self):
        with pytest.raises(ValueError, match="Cannot parse"):
            Permutation.parse("102")

    def test__init__with_non_permutation__raises_ValueError(self):
        with pytest.raises(ValueError, match="is not a permutation"):
            Permutation((1, 3))

    def test__empty_word__is_identity_of_length_zero(self):
        p = Permutation(())

        assert p.n == 0
        assert p.is_identity()

    def test__ordering__is_lexicographic(self):
        assert Permutation.parse("132") < Permutation.parse("213")

    def test__compact__falls_back_to_spaces_past_nine(self):
        assert Permutation.parse("312").compact() == "312"
        assert " " in perms.identity(10).compact()


class TestCompose:
    def test__compose__applies_right_argument_first(self):
        p = Permutation.parse("231")
        q = Permutation.parse("213")

        r = perms.compose(p, q)

        assert all(r(i) == p(q(i)) for i in range(1, 4))
        assert r == Permutation.parse("321")

    def test__compose__with_different_degrees__raises_DegreeMismatchError(self):
        with pytest.raises(perms.DegreeMismatchError):
            perms.compose(perms.identity(3), perms.identity(4))

    @given(p=permutation_of_length(1, 8))
    def test__compose__with_inverse__gives_identity(self, p):
        assert perms.compose(p, perms.inverse(p)).is_identity()
        assert perms.compose(perms.inverse(p), p).is_identity()

    @given(p=permutation_of_length(0, 8))
    def test__reverse_complement__is_conjugation_by_decreasing(self, p):
        psi = perms.decreasing(p.n)

        conjugate = perms.compose(psi, perms.compose(p, psi))

        assert perms.reverse_complement(p) == conjugate


class TestCycles:
    def test__parse_cycles__six_cycle__gives_one_line_word(self):
        p = perms.parse_cycles("(1,6,3,4,2,5)", 6)

        assert p == Permutation.parse("654213")

    def test__format_cycles__round_trips_the_six_cycle(self):
        p = Permutation.parse("654213")

        assert perms.format_cycles(p) == "(1,6,3,4,2,5)"

    def test__format_cycles__identity__prints_empty_cycle(self):
        assert perms.format_cycles(perms.identity(4)) == "()"

    def test__parse_cycles__overlapping_cycles__raises_ValueError(self):
        with pytest.raises(ValueError, match="Overlapping cycles"):
            perms.parse_cycles("(1,2)(2,3)", 3)

    def test__parse_cycles__point_outside_degree__raises_ValueError(self):
        with pytest.raises(ValueError, match="outside"):
            perms.parse_cycles("(1,7)", 6)

    def test__parse_cycles__malformed_text__raises_ValueError(self):
        with pytest.raises(ValueError, match="Cannot parse"):
            perms.parse_cycles("1,2", 3)

    @given(p=permutation_of_length(0, 9))
    def test__to_cycles__from_cycles__recovers_permutation(self, p):
        assert perms.from_cycles(perms.to_cycles(p)) == p

    def test__order_of__disjoint_cycles__is_lcm_of_lengths(self):
        p = perms.parse_cycles("(1,2)(3,4,5)", 5)

        assert perms.order_of(p) == 6

    def test__parity__transposition_odd_three_cycle_even(self):
        assert perms.parity(perms.transposition(1, 2, 4)) == perms.Parity.ODD
        assert perms.parity(perms.cycle_perm((1, 2, 3), 4)) == perms.Parity.EVEN


class TestContainment:
    def test__standardize__keeps_relative_order(self):
        assert perms.standardize((5, 2, 9)) == (2, 1, 3)

    def test__contains__decreasing_subsequence__is_found(self):
        assert perms.contains(Permutation.parse("4231"), Permutation.parse("321"))

    def test__contains__identity_avoids_descent(self):
        assert not perms.contains(perms.identity(4), Permutation.parse("21"))

    def test__contains__empty_pattern__is_always_contained(self):
        assert perms.contains(Permutation.parse("21"), Permutation(()))

    def test__contains__longer_pattern__is_never_contained(self):
        assert not perms.contains(Permutation.parse("12"), Permutation.parse("123"))

    def test__contains_at__anchored_entry__respects_position(self):
        p = Permutation.parse("2413")

        assert perms.contains_at(p, Permutation.parse("12"), position=1, entry=1)
        assert not perms.contains_at(p, Permutation.parse("21"), position=1, entry=2)

    def test__patterns_of__lists_every_subpattern(self):
        found = perms.patterns_of(Permutation.parse("132"), 2)

        assert found == {Permutation.parse("12"), Permutation.parse("21")}

    def test__patterns_of__length_out_of_range__raises_ValueError(self):
        with pytest.raises(ValueError):
            perms.patterns_of(Permutation.parse("12"), 3)

    def test__all_permutations__are_lexicographic(self):
        s3 = perms.all_permutations(3)

        assert len(s3) == 6
        assert s3 == sorted(s3)
        assert s3[0] == perms.identity(3)
        assert s3[-1] == perms.decreasing(3)

    @settings(max_examples=200)
    @given(p=permutation_of_length(0, 7), tau=permutation_of_length(0, 4))
    def test__contains__agrees_with_brute_force(self, p, tau, oracle_contains):
        assert perms.contains(p, tau) == oracle_contains(p, tau)


class TestSymmetryLaws:
    def test__compose__is_associative_over_S4(self, all_perms):
        s4 = all_perms(4)

        for p in s4:
            for q in s4:
                pq = perms.compose(p, q)
                for r in s4:
                    assert perms.compose(pq, r) == perms.compose(p, perms.compose(q, r))

    def test__compose__identity_is_two_sided_over_S4(self, all_perms):
        e = perms.identity(4)

        for p in all_perms(4):
            assert perms.compose(e, p) == p
            assert perms.compose(p, e) == p

    @pytest.mark.parametrize("n", range(0, 7))
    def test__symmetries__are_involutions(self, n, all_perms):
        for p in all_perms(n):
            assert perms.reverse(perms.reverse(p)) == p
            assert perms.complement(perms.complement(p)) == p
            assert perms.reverse_complement(perms.reverse_complement(p)) == p
            assert perms.inverse(perms.inverse(p)) == p

    def test__inverse_of_reverse__is_complement_of_inverse_over_S5(self, all_perms):
        for p in all_perms(5):
            assert perms.inverse(perms.reverse(p)) == perms.complement(perms.inverse(p))


class TestContainmentLaws:
    @pytest.mark.parametrize("n", range(0, 7))
    def test__contains__is_reflexive(self, n, all_perms):
        assert all(perms.contains(p, p) for p in all_perms(n))

    def test__contains__is_transitive_over_S5_S4_S3(self, all_perms):
        s4_by_s3 = {
            sigma: [tau for tau in all_perms(3) if perms.contains(sigma, tau)]
            for sigma in all_perms(4)
        }

        for p in all_perms(5):
            for sigma, below in s4_by_s3.items():
                if not perms.contains(p, sigma):
                    continue
                for tau in below:
                    assert perms.contains(p, tau)

    @pytest.mark.parametrize("n", range(0, 8))
    def test__patterns_of__matches_index_subsets(self, n, all_perms):
        for p in all_perms(n):
            by_length = {k: set() for k in range(n + 1)}
            for mask in range(1 << n):
                values = [p.word[i] for i in range(n) if mask >> i & 1]
                ranks = sorted(values)
                word = tuple(ranks.index(v) + 1 for v in values)
                by_length[len(word)].add(Permutation(word))

            for k in range(n + 1):
                assert perms.patterns_of(p, k) == by_length[k]
