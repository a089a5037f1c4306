import pytest

from avoidgroup import api, verify


@pytest.fixture()
def fake_flow(mocker):
    result_task = mocker.Mock()
    report = mocker.Mock()
    state = mocker.Mock()
    state.is_successful.return_value = True
    state.result = {result_task: mocker.Mock(result=report)}
    flow = mocker.Mock()
    flow.name = "Fake Flow"
    flow.run.return_value = state
    flow.get_tasks.return_value = [result_task]
    yield flow, report


class TestRunScenarioFlow:
    def test__run_scenario_flow__without_scenario__raises_ValueError(self):
        with pytest.raises(ValueError, match="A scenario id must be provided"):
            api.run_scenario_flow()

    def test__run_scenario_flow__unknown_scenario__raises_UnknownScenarioError(self):
        with pytest.raises(verify.UnknownScenarioError):
            api.run_scenario_flow("no-such-scenario")

    def test__run_scenario_flow__returns_report_of_the_run(self, mocker, fake_flow):
        flow, report = fake_flow
        mocker.patch("avoidgroup.api.flows.get_scenario_flow", return_value=flow)

        result = api.run_scenario_flow("semidirect-72", n_max=5)

        assert result is report
        flow.run.assert_called_once_with(parameters={"n_max": 5, "out": None})
        flow.get_tasks.assert_called_once_with(name="assemble_scenario_report")
        assert flow.run_config is not None

    def test__run_scenario_flow__failed_run__raises_RuntimeError(
        self, mocker, fake_flow
    ):
        flow, _ = fake_flow
        flow.run.return_value.is_successful.return_value = False
        flow.run.return_value.message = "boom"
        mocker.patch("avoidgroup.api.flows.get_scenario_flow", return_value=flow)

        with pytest.raises(RuntimeError, match="Flow <Fake Flow> failed: boom"):
            api.run_scenario_flow("semidirect-72")


class TestRunScanFlow:
    def test__run_scan_flow__without_arguments__raises_ValueError(self):
        expected_error_msg = (
            "Scan arguments must be provided: pattern_lengths, subset_size, n_from, n_to"
        )
        with pytest.raises(ValueError, match=expected_error_msg):
            api.run_scan_flow()

    def test__run_scan_flow__passes_family_parameters(self, mocker, fake_flow):
        flow, report = fake_flow
        get_flow = mocker.patch("avoidgroup.api.flows.get_scan_flow", return_value=flow)

        result = api.run_scan_flow([4], 4, 5, 9, exclude_psi=True)

        assert result is report
        get_flow.assert_called_once_with(family_name=None)
        flow.run.assert_called_once_with(
            parameters={
                "pattern_lengths": [4],
                "subset_size": 4,
                "n_from": 5,
                "n_to": 9,
                "exclude_psi": True,
                "classify_all": False,
                "out": None,
            }
        )


class TestRunReportFlow:
    def test__run_report_flow__without_patterns__raises_ValueError(self):
        with pytest.raises(ValueError, match="A pattern set must be provided"):
            api.run_report_flow()

    def test__run_report_flow__returns_rendered_text(self, mocker, fake_flow):
        flow, report = fake_flow
        mocker.patch("avoidgroup.api.flows.get_report_flow", return_value=flow)

        assert api.run_report_flow("123, 231, 312") is report
        flow.get_tasks.assert_called_once_with(name="render_verdict_report")
