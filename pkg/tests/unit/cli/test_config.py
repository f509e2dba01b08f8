"""Tests for run configuration loading."""

import json

import pytest

from bergkern.cli.config import RunConfig, build_run_config, parse_point, parse_spec_argument
from bergkern.core.exceptions import ConfigurationError, InvalidSpecError


def write(path, payload):
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload))
    return path


class TestBuildRunConfig:
    def test_defaults(self):
        config = build_run_config()
        assert config.spec is None
        assert config.kernel.method == "auto"
        assert config.decay.k_list == []

    def test_flags_override_file(self, tmp_path):
        path = write(tmp_path / "run.json", {"kernel": {"method": "series", "N": 100}, "metric": {"h": 0.05}})
        config = build_run_config(path, {"kernel": {"N": 200}})
        assert config.kernel.method == "series"
        assert config.kernel.N == 200
        assert config.metric.h == 0.05

    def test_points(self):
        config = build_run_config(overrides={"z": [0.1, -0.2], "w": (0.0, 0.5)})
        assert RunConfig.point(config.z, "z") == complex(0.1, -0.2)
        assert RunConfig.point(config.w, "w") == 0.5j

    @pytest.mark.parametrize(
        "payload",
        [
            {"kernel": {"foo": 1}},
            {"colour": "red"},
            {"decay": {"alpha": 0.6}},
            {"decay": {"k_list": [1, -2]}},
            {"metric": {"r_max": 1.0}},
            {"metric": {"stencil": "12"}},
        ],
    )
    def test_rejects_invalid_documents(self, tmp_path, payload):
        with pytest.raises(ConfigurationError):
            build_run_config(write(tmp_path / "run.json", payload))

    def test_malformed_json(self, tmp_path):
        with pytest.raises(ConfigurationError):
            build_run_config(write(tmp_path / "run.json", "{not json"))

    def test_not_an_object(self, tmp_path):
        with pytest.raises(ConfigurationError):
            build_run_config(write(tmp_path / "run.json", [1, 2]))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            build_run_config(tmp_path / "absent.json")


class TestWeightSpec:
    def test_inline(self):
        spec = build_run_config(overrides={"spec": {"A": 1.0, "B": 1.0, "alpha": 0.5}}).weight_spec()
        assert spec.family == "exp"

    def test_path_relative_to_base(self, tmp_path):
        write(tmp_path / "weight.json", {"A": 1.0})
        config = build_run_config(overrides={"spec": "weight.json"})
        assert config.weight_spec(tmp_path).A == 1.0

    def test_missing(self):
        with pytest.raises(ConfigurationError):
            build_run_config().weight_spec()

    def test_invalid_values(self):
        with pytest.raises(InvalidSpecError):
            build_run_config(overrides={"spec": {"A": -1.0}}).weight_spec()

    def test_missing_point(self):
        with pytest.raises(ConfigurationError):
            RunConfig.point(None, "z")


class TestArgumentParsing:
    def test_point(self):
        assert parse_point("0.1, -0.2") == (0.1, -0.2)

    @pytest.mark.parametrize("text", ["1", "a,b", "1,2,3"])
    def test_bad_point(self, text):
        with pytest.raises(ConfigurationError):
            parse_point(text)

    def test_spec_argument(self):
        assert parse_spec_argument(' {"A": 1} ') == {"A": 1}
        assert parse_spec_argument("specs/exp.json") == "specs/exp.json"

    def test_malformed_inline_spec(self):
        with pytest.raises(ConfigurationError):
            parse_spec_argument("{A: 1}")
