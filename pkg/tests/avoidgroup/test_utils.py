import json

import pytest
from prefect.run_configs import LocalRun

from avoidgroup import AVOIDGROUP_CONFIG_PATH, _utils


@pytest.fixture()
def fake_config(mocker):
    config = {"avoidgroup": {"enumeration": {"member_limit": 7}, "db_file": "x.sqlite"}}
    mocker.patch("avoidgroup._utils.prefect.config", config)
    yield config


class TestGetSetting:
    def test__get_setting__existing_key__returns_value(self, fake_config):
        assert _utils.get_setting("enumeration.member_limit", 10) == 7

    def test__get_setting__missing_key__returns_default(self, fake_config):
        assert _utils.get_setting("groups.element_cap", 10) == 10

    def test__get_setting__path_below_a_value__returns_default(self, fake_config):
        assert _utils.get_setting("db_file.name", "fallback") == "fallback"

    def test__get_setting__without_section__returns_default(self, mocker):
        mocker.patch("avoidgroup._utils.prefect.config", {})

        assert _utils.get_setting("enumeration.strategy", "prefix") == "prefix"


class TestLocalRunConfig:
    def test__get_local_run_config__points_prefect_at_the_config_file(self):
        run_config = _utils.get_local_run_config()

        assert isinstance(run_config, LocalRun)
        assert run_config.env["PREFECT__USER_CONFIG_PATH"] == AVOIDGROUP_CONFIG_PATH


class TestParsing:
    def test__parse_n_range__valid_range__is_returned(self):
        assert _utils.parse_n_range(3, 3) == (3, 3)

    def test__parse_n_range__reversed_range__raises_ValueError(self):
        with pytest.raises(ValueError, match=r"Invalid length range \[5, 4\]"):
            _utils.parse_n_range(5, 4)

    def test__parse_n_range__negative_start__raises_ValueError(self):
        with pytest.raises(ValueError):
            _utils.parse_n_range(-1, 4)

    def test__split_pattern_text__drops_blank_tokens(self):
        assert _utils.split_pattern_text(" 132,, 4 1 2 3 ,") == ["132", "4 1 2 3"]


class TestEncodeJson:
    def test__encode_json__keeps_key_order(self):
        text = _utils.encode_json({"b": 1, "a": [1, 2]})

        assert list(json.loads(text)) == ["b", "a"]
        assert json.loads(text) == {"b": 1, "a": [1, 2]}
