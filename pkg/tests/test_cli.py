"""CLI contract: schemas, exit codes, config precedence, determinism."""

import csv
import json

import pytest

from sphact.cli import main


def run(args):
    return main(args)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestTableCommand:
    def test_default_contains_id_row(self, tmp_path):
        out = tmp_path / "table.csv"
        assert run(["table", "--out", str(out), "--no-figure"]) == 0
        rows = read_csv(out)
        id_row = next(r for r in rows if r["activation"] == "id" and r["n"] == "2")
        assert float(id_row["T_empirical"]) == pytest.approx(4.189, abs=5e-3)
        assert id_row["K"] == "10"

    def test_relu_certified_blank_with_warning(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        assert run(["table", "--acts", "relu", "--out", str(out), "--no-figure"]) == 0
        rows = read_csv(out)
        assert all(r["T_certified"] == "" for r in rows)
        assert "warning" in capsys.readouterr().err

    def test_n_zero_exits_2(self, tmp_path):
        assert run(["table", "--n", "0", "--out", str(tmp_path / "x.csv")]) == 2

    def test_unknown_activation_exits_2(self, tmp_path):
        assert run(["table", "--acts", "mystery", "--out", str(tmp_path / "x.csv")]) == 2

    def test_bad_q_exits_2(self, tmp_path):
        assert run(["table", "--K", "10", "--Q", "20",
                    "--out", str(tmp_path / "x.csv")]) == 2

    def test_figure_written_by_default(self, tmp_path):
        out = tmp_path / "table.csv"
        assert run(["table", "--acts", "id", "--n", "2", "--out", str(out)]) == 0
        assert (tmp_path / "table.png").exists()


class TestDecomposeCommand:
    def test_schema_and_values(self, tmp_path):
        out = tmp_path / "d.csv"
        assert run(["decompose", "--acts", "id", "--n", "2", "--K", "5",
                    "--out", str(out), "--no-figure"]) == 0
        rows = read_csv(out)
        assert [r["k"] for r in rows] == [str(k) for k in range(6)]
        a1 = next(r for r in rows if r["k"] == "1")
        assert float(a1["a_k"]) == pytest.approx(4.18879, abs=1e-4)

    def test_json_mirrors_csv(self, tmp_path):
        c, j = tmp_path / "d.csv", tmp_path / "d.json"
        run(["decompose", "--acts", "tanh", "--n", "2", "--K", "4",
             "--out", str(c), "--no-figure"])
        run(["decompose", "--acts", "tanh", "--n", "2", "--K", "4",
             "--out", str(j), "--format", "json", "--no-figure"])
        csv_rows = read_csv(c)
        json_rows = json.loads(j.read_text())
        assert len(csv_rows) == len(json_rows)
        assert list(csv_rows[0]) == list(json_rows[0])
        for cr, jr in zip(csv_rows, json_rows):
            assert float(cr["a_k"]) == pytest.approx(jr["a_k"], rel=1e-9)


class TestPlotDataCommand:
    def test_identity_columns_match(self, tmp_path):
        out = tmp_path / "pd.csv"
        assert run(["plot-data", "--acts", "id", "--n", "2",
                    "--out", str(out), "--no-figure"]) == 0
        for r in read_csv(out):
            assert float(r["approx"]) == pytest.approx(float(r["theta"]), abs=1e-9)

    def test_multiple_acts_rejected(self, tmp_path):
        assert run(["plot-data", "--acts", "id,tanh",
                    "--out", str(tmp_path / "x.csv")]) == 2


class TestFrameCheckCommand:
    def test_icosahedron_k2_passes(self, tmp_path):
        out = tmp_path / "fc.csv"
        assert run(["frame-check", "--out", str(out), "--no-figure"]) == 0
        rows = read_csv(out)
        row = next(r for r in rows
                   if r["design"] == "icosahedron" and r["k"] == "2")
        assert row["pass"] == "True"
        assert float(row["residual"]) < 1e-9

    def test_unknown_design_exits_2(self, tmp_path):
        assert run(["frame-check", "--designs", "cube24",
                    "--out", str(tmp_path / "x.csv")]) == 2


class TestVerifyTheoremCommand:
    def test_small_run_all_pass(self, tmp_path):
        out = tmp_path / "vt.csv"
        assert run(["verify-theorem", "--trials", "4",
                    "--out", str(out), "--no-figure"]) == 0
        rows = read_csv(out)
        assert len(rows) == 4
        assert all(r["pass"] == "True" for r in rows)
        for r in rows:
            assert float(r["min_found_corr"]) > float(r["guaranteed_corr"])


class TestSyntheticCommand:
    def test_schema(self, tmp_path):
        out = tmp_path / "sy.csv"
        assert run(["synthetic", "--acts", "elu", "--trials", "2",
                    "--restarts", "2", "--noise-grid", "0,0.3",
                    "--out", str(out), "--no-figure"]) == 0
        rows = read_csv(out)
        assert [r["noise_level"] for r in rows] == ["0", "0.3"]
        assert float(rows[0]["mean_corr"]) > 0.999


class TestConfigFile:
    def test_precedence_flags_over_file_over_defaults(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("K=4\nacts=tanh\nn=2\n")
        out = tmp_path / "d.csv"
        assert run(["decompose", "--config", str(cfg), "--K", "3",
                    "--out", str(out), "--no-figure"]) == 0
        rows = read_csv(out)
        assert {r["activation"] for r in rows} == {"tanh"}  # from file
        assert max(int(r["k"]) for r in rows) == 3          # flag wins

    def test_missing_config_exits_2(self, tmp_path):
        assert run(["decompose", "--config", str(tmp_path / "none.cfg"),
                    "--out", str(tmp_path / "x.csv")]) == 2

    def test_malformed_config_exits_2(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("this is not a pair\n")
        assert run(["decompose", "--config", str(cfg),
                    "--out", str(tmp_path / "x.csv")]) == 2


class TestDeterminism:
    @pytest.mark.parametrize("args", [
        ["table", "--acts", "tanh", "--n", "2"],
        ["decompose", "--acts", "swish", "--n", "2", "--K", "6"],
        ["plot-data", "--acts", "tanh", "--n", "2", "--K", "8", "--grid", "64"],
        ["frame-check", "--designs", "circle8"],
        ["verify-theorem", "--trials", "2"],
        ["synthetic", "--acts", "relu", "--trials", "2", "--restarts", "2",
         "--noise-grid", "0.5"],
    ])
    def test_repeat_runs_byte_identical(self, tmp_path, args):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(args + ["--out", str(out1), "--no-figure"]) == 0
        assert run(args + ["--out", str(out2), "--no-figure"]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_figure_bytes_identical(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["table", "--acts", "id,tanh", "--n", "2"]
        assert run(args + ["--out", str(out1)]) == 0
        assert run(args + ["--out", str(out2)]) == 0
        assert (tmp_path / "a.png").read_bytes() == (tmp_path / "b.png").read_bytes()

    def test_csv_line_endings(self, tmp_path):
        out = tmp_path / "t.csv"
        run(["table", "--acts", "id", "--n", "2", "--out", str(out), "--no-figure"])
        raw = out.read_bytes()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")
