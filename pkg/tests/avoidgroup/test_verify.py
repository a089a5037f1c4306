import pytest

from avoidgroup import groups, scans, verify
from avoidgroup._utils import encode_json
from avoidgroup.classify import classify_avoiders
from avoidgroup.types import Check


def failing(check, registry):
    return "false", False, None


class TestRegistry:
    def test__audit_claims__every_claim_has_one_scenario(self):
        assert verify.audit_claims() == []

    def test__registered_scenarios__ids_match_keys(self):
        scenarios = verify.registered_scenarios()

        assert "semidirect-72" in scenarios
        assert all(s.id == key for key, s in scenarios.items())

    def test__get_scenario__unknown_id__raises_UnknownScenarioError(self):
        with pytest.raises(verify.UnknownScenarioError, match="Unknown scenario"):
            verify.get_scenario("no-such-scenario")

    def test__UnknownScenarioError__is_a_ValueError(self):
        assert issubclass(verify.UnknownScenarioError, ValueError)

    def test__expand_scenario_checks__n_max__drops_longer_checks(self):
        checks = verify.expand_scenario_checks("three-of-three", n_max=5)

        assert checks
        assert all(c.n is None or c.n <= 5 for c in checks)
        assert len(checks) < len(verify.get_scenario("three-of-three").checks)

    def test__checks__are_tagged_with_their_scenario(self):
        for check in verify.get_scenario("semidirect-72").checks:
            assert check.param("scenario") == "semidirect-72"


class TestEvaluateCheck:
    def test__evaluate_check__unknown_kind__raises_ValueError(self):
        check = Check("bogus", "123", 4, "x", "small-sets")

        with pytest.raises(ValueError, match="No evaluator"):
            verify.evaluate_check(check)

    def test__evaluate_check__classify__records_verdict(self):
        check = Check("classify", "123, 231, 312", 5, "Dihedral(n)", "three-of-three")

        result = verify.evaluate_check(check)

        assert result.passed
        assert result.actual == "Dihedral(5)"
        assert result.verdict.label == "Dihedral(5)"

    def test__evaluate_check__wrong_expectation__fails(self):
        check = Check("order", "132, 213, 321", 5, "10", "three-of-three")

        result = verify.evaluate_check(check)

        assert not result.passed
        assert result.actual == "5"

    def test__evaluate_check__advisory_mismatch__passes_with_note(self):
        check = Check(
            "fixed-points", "", 5, "3", "four-of-four", (("advisory", True),)
        )

        result = verify.evaluate_check(check)

        assert result.passed
        assert result.note == "expected 3, found none"

    def test__evaluate_check__resource_cap__fails_with_error(self, mocker):
        def capped(check, registry):
            raise groups.ElementCapExceeded("too many elements")

        mocker.patch.dict(verify.EVALUATORS, {"order": capped})
        check = Check("order", "123", 5, "120", "small-sets")

        result = verify.evaluate_check(check)

        assert not result.passed
        assert result.actual == "error"
        assert result.to_dict()["error"] == "too many elements"


class TestRunScenario:
    def test__run_scenario__semidirect_72__passes(self):
        report = verify.run_scenario("semidirect-72")

        assert report.passed
        assert len(report.results) == 4
        assert report.to_dict()["summary"]["failed"] == 0

    def test__run_scenario__generator_pattern_sets__passes_up_to_n_max(self):
        report = verify.run_scenario("generator-pattern-sets", n_max=5)

        assert report.passed
        assert report.n_max == 5
        assert report.to_dict()["config"] == {"n_max": 5}

    def test__run_scenario__subgroup_lemma__passes(self):
        assert verify.run_scenario("subgroup-lemma", n_max=6).passed

    def test__run_scenario__failing_check__is_reported(self, mocker):
        mocker.patch.dict(verify.EVALUATORS, {"semidirect": failing})

        report = verify.run_scenario("semidirect-72")

        assert not report.passed
        assert [r.check.kind for r in report.failures] == ["semidirect"]

    def test__run_scenario__raise_on_failure__raises_ScenarioFailed(self, mocker):
        mocker.patch.dict(verify.EVALUATORS, {"semidirect": failing})

        with pytest.raises(verify.ScenarioFailed, match="avoidgroup verify --scenario"):
            verify.run_scenario("semidirect-72", raise_on_failure=True)

    def test__run_scenario__unknown_id__raises_UnknownScenarioError(self):
        with pytest.raises(verify.UnknownScenarioError):
            verify.run_scenario("bogus")


class TestScenarioClaims:
    @pytest.mark.parametrize(
        "scenario_id, n_max",
        [
            ("three-of-three", None),
            ("four-of-three", None),
            ("three-three-one-four", None),
            ("four-of-four", 10),
            ("abelian-scan", None),
            ("bounded-classes", None),
        ],
    )
    def test__run_scenario__passes(self, scenario_id, n_max):
        report = verify.run_scenario(scenario_id, n_max=n_max)

        assert report.passed, [r.to_dict() for r in report.failures]

    def test__four_of_four__fixed_points_at_eleven__are_none(self):
        (check,) = [
            c
            for c in verify.get_scenario("four-of-four").checks
            if c.kind == "fixed-points"
        ]

        result = verify.evaluate_check(check)

        assert check.n == 11
        assert result.passed
        assert result.actual == "none"
        assert result.note is None

    def test__four_of_four__lists_the_fixed_point_erratum(self):
        unverified = verify.get_scenario("four-of-four").unverified

        assert any(item.startswith("erratum") for item in unverified)

    def test__run_scenario__twice__gives_identical_json(self):
        first = encode_json(verify.run_scenario("three-of-three", n_max=6).to_dict())
        second = encode_json(verify.run_scenario("three-of-three", n_max=6).to_dict())

        assert first == second


class TestScanOrbits:
    def test__orbit_members__classify_like_their_representative(self):
        family = scans.PatternFamily(pattern_lengths=(3,), subset_size=3)
        orbits = [orb for orb in scans.compute_orbits(family) if len(orb) > 1][:5]

        assert len(orbits) == 5
        for orb in orbits:
            for n in range(4, 8):
                expected = classify_avoiders(n, orb[0]).signature()
                for T in orb[1:]:
                    assert classify_avoiders(n, T).signature() == expected, T.key

    def test__scan__twice__gives_identical_json(self):
        family = scans.PatternFamily(pattern_lengths=(3,), subset_size=3)

        first = encode_json(scans.scan(family, (4, 6)).to_dict())
        second = encode_json(scans.scan(family, (4, 6)).to_dict())

        assert first == second
