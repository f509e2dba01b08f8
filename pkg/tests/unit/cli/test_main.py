"""Tests for the bergkern command line."""

import json
import math
from pathlib import Path

import pytest

from bergkern.cli.main import build_parser, collect_overrides, main

LOG_SPEC = '{"A": 1}'
HALF_SPEC = '{"A": 0.5}'
EXP_SPEC = '{"A": 1, "B": 1, "alpha": 0.5}'


def read(path):
    return json.loads(path.read_text())


class TestOverrides:
    def test_collects_given_flags(self):
        args = build_parser().parse_args(
            ["decay-report", "--spec", LOG_SPEC, "--count", "10", "--k-list", "1,2", "--rmax", "0.8"]
        )
        overrides = collect_overrides(args)
        assert overrides["spec"] == {"A": 1}
        assert overrides["decay"] == {"count": 10, "k_list": [1, 2]}
        assert overrides["metric"] == {"r_max": 0.8}
        assert "kernel" not in overrides

    def test_points_and_output(self):
        args = build_parser().parse_args(["kernel", "--z=-0.5,0.2", "--w", "0,0", "--out", "runs"])
        overrides = collect_overrides(args)
        assert overrides["z"] == (-0.5, 0.2)
        assert overrides["output_dir"] == "runs"


class TestKernelCommand:
    def test_origin(self, tmp_path, capsys):
        assert main(["kernel", "--spec", LOG_SPEC, "--z=0,0", "--w=0,0", "--out", str(tmp_path)]) == 0
        payload = read(tmp_path / "kernel.json")
        assert payload["kernel"]["log_mag"] == pytest.approx(math.log(2.0 / math.pi))
        assert payload["kernel"]["method"] == "closed_form"
        assert payload["log_norm_kernel"] == pytest.approx(-math.log(math.pi))
        assert json.loads(capsys.readouterr().out) == payload

    def test_series_route(self, tmp_path, capsys):
        argv = ["kernel", "--spec", EXP_SPEC, "--z=0.1,0", "--w=0.2,0.1", "--method", "series", "--N", "300"]
        assert main(argv + ["--out", str(tmp_path)]) == 0
        kernel = read(tmp_path / "kernel.json")["kernel"]
        assert kernel["method"] == "series"
        assert kernel["err_rel"] < 1e-8

    def test_point_outside_disc(self, tmp_path, capsys):
        assert main(["kernel", "--spec", LOG_SPEC, "--z=1.5,0", "--w=0,0", "--out", str(tmp_path)]) == 4
        assert not (tmp_path / "kernel.json").exists()

    def test_missing_point(self, tmp_path, capsys):
        assert main(["kernel", "--spec", LOG_SPEC, "--z=0,0", "--out", str(tmp_path)]) == 2

    def test_unknown_method(self, tmp_path, capsys):
        argv = ["kernel", "--spec", LOG_SPEC, "--z=0,0", "--w=0,0", "--method", "magic", "--out", str(tmp_path)]
        assert main(argv) == 2

    def test_closed_form_mismatch(self, tmp_path, capsys):
        argv = ["kernel", "--spec", EXP_SPEC, "--z=0,0", "--w=0,0", "--method", "closed", "--out", str(tmp_path)]
        assert main(argv) == 2


class TestConfigErrors:
    def test_malformed_config_writes_nothing(self, tmp_path, capsys):
        config = tmp_path / "run.json"
        config.write_text("{broken")
        out = tmp_path / "out"
        assert main(["kernel", "--config", str(config), "--z=0,0", "--w=0,0", "--out", str(out)]) == 2
        assert not out.exists()

    def test_missing_spec(self, tmp_path, capsys):
        assert main(["check-op", "--out", str(tmp_path)]) == 2

    def test_invalid_spec(self, tmp_path, capsys):
        assert main(["check-op", "--spec", '{"A": -1}', "--out", str(tmp_path)]) == 2

    def test_non_numeric_coefficient(self, tmp_path, capsys):
        argv = ["kernel", "--spec", '{"A": 1.0, "g": [["x", 0]]}', "--z=0,0", "--w=0,0"]
        assert main(argv + ["--out", str(tmp_path)]) == 2
        assert not (tmp_path / "kernel.json").exists()

    def test_spec_path_relative_to_config(self, tmp_path, capsys):
        folder = tmp_path / "conf"
        folder.mkdir()
        (folder / "weight.json").write_text(LOG_SPEC)
        (folder / "run.json").write_text(json.dumps({"spec": "weight.json", "z": [0.3, 0], "w": [0.3, 0]}))
        assert main(["kernel", "--config", str(folder / "run.json"), "--out", str(tmp_path)]) == 0
        assert read(tmp_path / "kernel.json")["spec"]["A"] == 1.0

    def test_bad_threads(self, capsys):
        with pytest.raises(SystemExit):
            main(["oracle-test", "--threads", "0"])


def test_distance_command(tmp_path, capsys):
    argv = ["distance", "--spec", HALF_SPEC, "--z=0,0", "--w=0.5,0", "--h", "0.02", "--rmax", "0.6"]
    assert main(argv + ["--out", str(tmp_path)]) == 0
    payload = read(tmp_path / "distance.json")
    assert payload["distance"]["value"] == pytest.approx(math.atanh(0.5), rel=0.02)
    assert payload["hyperbolic_distance"] == pytest.approx(math.atanh(0.5))
    assert payload["graph"]["r_max"] == 0.6


def test_distance_outside_graph(tmp_path, capsys):
    argv = ["distance", "--spec", HALF_SPEC, "--z=0,0", "--w=0.7,0", "--h", "0.05", "--rmax", "0.6"]
    assert main(argv + ["--out", str(tmp_path)]) == 4


def test_check_op_command(tmp_path, capsys):
    assert main(["check-op", "--spec", LOG_SPEC, "--out", str(tmp_path)]) == 0
    report = read(tmp_path / "op-report.json")["report"]
    assert report["C2_est"] == pytest.approx(math.sqrt(2.0), rel=0.05)


def test_oracle_subset(tmp_path, capsys):
    assert main(["oracle-test", "--only", "near_diagonal", "moments", "--out", str(tmp_path)]) == 0
    payload = read(tmp_path / "oracle-report.json")
    assert payload["passed"] is True
    assert sorted(o["name"] for o in payload["oracles"]) == ["moments", "near_diagonal"]


def test_decay_report_command(tmp_path, capsys):
    argv = [
        "decay-report", "--spec", LOG_SPEC, "--h", "0.05", "--rmax", "0.85",
        "--count", "80", "--k-list", "1,2", "--out", str(tmp_path),
    ]
    assert main(argv) == 0
    report = read(tmp_path / "decay-report.json")
    assert report["sigma_fit"] > 0
    assert report["violations"] == 0
    assert report["cauchy_schwarz_violations"] == 0
    assert report["metric_comparison"]["violations"] == 0
    assert report["kernel_method"] == "closed_form"
    assert [row["k"] for row in report["bound_comparison"]] == [1, 2]
    assert report["near_diag_ratio"][1] == pytest.approx(1.0 / math.pi, rel=1e-3)
    assert (tmp_path / "decay-samples.csv").read_text().count("\n") == 81
    assert (tmp_path / "decay-plot.dat").exists()


BASELINE = Path(__file__).resolve().parents[2] / "data" / "decay_baseline.json"


def test_decay_report_matches_baseline(tmp_path, capsys):
    baseline = read(BASELINE)
    argv = ["decay-report", "--spec", json.dumps(baseline["spec"]), *baseline["args"], "--out", str(tmp_path)]
    assert main(argv) == 0
    report = read(tmp_path / "decay-report.json")
    tolerance = baseline["tolerance"]
    assert report["sigma_fit"] == pytest.approx(baseline["sigma_fit"], rel=tolerance["sigma_fit_rel"])
    assert report["logC_fit"] == pytest.approx(baseline["logC_fit"], abs=tolerance["logC_fit_abs"])
    # a finite range of distances can only flatten the envelope
    assert report["sigma_fit"] < baseline["asymptotic"]["sigma"]
