import json
import pathlib
import tempfile

import pytest

from avoidgroup import cli


def run(capsys, argv):
    code = cli.main(argv)
    return code, json.loads(capsys.readouterr().out)


class TestParser:
    def test__main__without_command__exits_with_2(self):
        with pytest.raises(SystemExit) as e:
            cli.main([])

        assert e.value.code == 2

    def test__main__missing_required_option__exits_with_2(self):
        with pytest.raises(SystemExit) as e:
            cli.main(["classify", "--patterns", "123"])

        assert e.value.code == 2

    def test__main__malformed_patterns__exits_with_2(self, capsys):
        with pytest.raises(SystemExit) as e:
            cli.main(["classify", "--n", "5", "--patterns", "1x3"])

        assert e.value.code == 2
        assert "avoidgroup" in capsys.readouterr().err

    def test__main__empty_range__exits_with_2(self):
        with pytest.raises(SystemExit) as e:
            cli.main(["probe", "--n-from", "6", "--n-to", "4", "--patterns", "123"])

        assert e.value.code == 2


class TestCommands:
    def test__enumerate__count_only(self, capsys):
        code, out = run(
            capsys, ["enumerate", "--n", "5", "--patterns", "123", "--count-only"]
        )

        assert code == 0
        assert out == {"n": 5, "patterns": "1 2 3", "count": "42"}

    def test__enumerate__lists_members(self, capsys):
        _, out = run(capsys, ["enumerate", "--n", "3", "--patterns", "132, 213, 321"])

        assert out["count"] == "3"
        assert len(out["members"]) == 3

    def test__classify__dihedral_set(self, capsys):
        code, out = run(
            capsys, ["classify", "--n", "6", "--patterns", "123, 231, 312"]
        )

        assert code == 0
        assert out["label"] == "Dihedral(6)"
        assert out["order"] == "12"

    def test__group__order_only(self, capsys):
        _, out = run(
            capsys, ["group", "--n", "5", "--patterns", "132, 213, 321", "--order-only"]
        )

        assert out == {"n": 5, "patterns": "1 3 2, 2 1 3, 3 2 1", "order": "5"}

    def test__group__export_cas__writes_generators(self, capsys):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = pathlib.Path(tmpdir).joinpath("gens.txt")

            _, out = run(
                capsys,
                ["group", "--n", "4", "--patterns", "", "--export-cas", str(path)],
            )

            lines = path.read_text().splitlines()
            assert lines == out["generators"]
            assert out["order"] == "24"

    def test__grid__member_with_witness(self, capsys):
        _, out = run(
            capsys,
            ["grid", "--peg", "3+1-24-", "--member", "45621387", "--witness"],
        )

        assert out["member"] is True
        assert out["witness"] == ["1 2 3", "2 1", "1", "2 1"]

    def test__grid__section__bounded_peg_has_three_members(self, capsys):
        _, out = run(capsys, ["grid", "--peg", "4-213", "--section", "6"])

        assert out["count"] == "3"
        assert len(out["members"]) == 3

    def test__classify_range__writes_out_file(self, capsys):
        with tempfile.TemporaryDirectory() as tmpdir:
            path = pathlib.Path(tmpdir).joinpath("range.json")

            code = cli.main(
                [
                    "classify-range",
                    "--n-from",
                    "5",
                    "--n-to",
                    "6",
                    "--patterns",
                    "123, 321",
                    "--out",
                    str(path),
                ]
            )

            assert code == 0
            assert capsys.readouterr().out == ""
            assert json.loads(path.read_text())["patterns"] == "1 2 3, 3 2 1"


class TestVerify:
    def test__verify__passing_scenario__exits_with_0(self, capsys, mocker):
        report = mocker.Mock(passed=True)
        report.to_dict.return_value = {"scenario": "semidirect-72"}
        run_flow = mocker.patch("avoidgroup.cli.api.run_scenario_flow", return_value=report)

        code, out = run(capsys, ["verify", "--scenario", "semidirect-72"])

        assert code == 0
        assert out == {"scenario": "semidirect-72"}
        run_flow.assert_called_once_with("semidirect-72", n_max=None)

    def test__verify__failing_scenario__exits_with_1(self, capsys, mocker):
        report = mocker.Mock(passed=False)
        report.to_dict.return_value = {}
        mocker.patch("avoidgroup.cli.api.run_scenario_flow", return_value=report)

        code, _ = run(capsys, ["verify", "--scenario", "semidirect-72", "--n-max", "6"])

        assert code == 1

    def test__verify__all__summarizes_every_scenario(self, capsys, mocker):
        report = mocker.Mock(passed=True, scenario_id="x")
        report.to_dict.return_value = {}
        mocker.patch("avoidgroup.cli.api.run_scenario_flow", return_value=report)

        code, out = run(capsys, ["verify", "--scenario", "all"])

        assert code == 0
        assert out["summary"]["failed"] == []
        assert out["summary"]["scenarios"] == len(out["scenarios"])

    def test__verify__unknown_scenario__exits_with_2(self):
        with pytest.raises(SystemExit) as e:
            cli.main(["verify", "--scenario", "bogus"])

        assert e.value.code == 2

    def test__verify__failed_flow__exits_with_1(self, capsys, mocker):
        mocker.patch(
            "avoidgroup.cli.api.run_scenario_flow",
            side_effect=RuntimeError("Flow <x> failed"),
        )

        assert cli.main(["verify", "--scenario", "semidirect-72"]) == 1
        assert "Flow <x> failed" in capsys.readouterr().err
