"""Command-line interface: formats, determinism, exit codes."""

import json

import pytest

from trinegame.cli import main


def run(argv, tmp_path, name):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, out.read_bytes()


class TestCurve:
    def test_single_point_row(self, tmp_path):
        code, data = run(
            ["curve", "--alpha0", "0.6666666666666666", "--restarts", "8", "--seed", "1"],
            tmp_path,
            "curve.csv",
        )
        assert code == 0
        lines = data.decode().strip().splitlines()
        assert lines[0] == "alpha0,p_q,p_nc"
        assert lines[1] == "0.666667,0.622008,0.500000"

    def test_extreme_point_values_coincide(self, tmp_path):
        code, data = run(
            ["curve", "--alpha0", "1.0", "--restarts", "8", "--include-classical"],
            tmp_path,
            "curve.csv",
        )
        assert code == 0
        row = data.decode().strip().splitlines()[1].split(",")
        assert row[1] == row[2] == row[3] == "0.583333"

    def test_empty_grid_gives_header_only(self, tmp_path):
        code, data = run(["curve", "--grid", "0.9:0.1:0.05"], tmp_path, "curve.csv")
        assert code == 0
        assert data.decode() == "alpha0,p_q,p_nc\n"

    def test_byte_identical_reruns(self, tmp_path):
        args = ["curve", "--grid", "0:1:0.5", "--restarts", "6", "--seed", "3"]
        _, first = run(args, tmp_path, "a.csv")
        _, second = run(args, tmp_path, "b.csv")
        assert first == second

    def test_bad_grid_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["curve", "--grid", "nonsense"])
        assert exc.value.code == 2


class TestBounds:
    def test_symmetric_anchor_report(self, tmp_path):
        code, data = run(
            ["bounds", "--alpha0", "0.6666666666666666", "--restarts", "10"],
            tmp_path,
            "bounds.json",
        )
        assert code == 0
        payload = json.loads(data)
        assert payload["all_pass"]
        values = {r["quantity"]: r["value"] for r in payload["results"]}
        assert values["p_q"] == pytest.approx(0.622008, abs=1e-4)
        assert values["p_nc"] == pytest.approx(0.5, abs=1e-9)
        assert values["p_c"] == pytest.approx(7 / 12, abs=1e-9)
        for record in payload["results"]:
            assert set(record) == {"quantity", "value", "reference_value", "tolerance", "pass"}


class TestSimulate:
    def test_five_outcome_report(self, tmp_path):
        code, data = run(["simulate", "5"], tmp_path, "sim.json")
        assert code == 0
        payload = json.loads(data)
        values = {r["quantity"]: r["value"] for r in payload["results"]}
        assert values["h0"] == pytest.approx(0.894427191, abs=1e-9)
        assert values["h1"] == pytest.approx(0.552786404, abs=1e-9)
        assert values["element_residual"] < 1e-12
        assert values["target_extremal"] == 0.0
        assert values["members_extremal"] == 1.0


class TestIncompat:
    def test_full_report_passes(self, tmp_path):
        code, data = run(["incompat", "--polygon-k", "48"], tmp_path, "inc.json")
        assert code == 0
        payload = json.loads(data)
        values = {r["quantity"]: r["value"] for r in payload["results"]}
        assert values["p_prior"] == pytest.approx(2 / 3, abs=1e-12)
        assert values["p_post_upper"] < 0.64
        assert values["witness_margin"] > 0.02
        assert values["pairs_incompatible"] == 10


class TestCoherence:
    def test_classification_report(self, tmp_path):
        code, data = run(["coherence", "--samples", "60"], tmp_path, "coh.json")
        assert code == 0
        payload = json.loads(data)
        values = {r["quantity"]: r["value"] for r in payload["results"]}
        assert values["trine_free_any_basis"] == 0.0
        assert values["degenerate_sharp_free"] == 1.0
        assert values["formulations_agree"] == 60
