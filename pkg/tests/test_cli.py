import csv
import io
import json
import math

import pytest

from qreading.cli import main, parse_angle


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def record(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return json.loads(out)


class TestAngles:
    @pytest.mark.parametrize(
        "text, value",
        [
            ("pi", math.pi),
            ("pi/2", math.pi / 2),
            ("PI/4", math.pi / 4),
            ("3pi/4", 3 * math.pi / 4),
            ("-2*pi/3", -2 * math.pi / 3),
            ("0.25", 0.25),
            ("-1e-3", -1e-3),
        ],
    )
    def test_literals(self, text, value):
        assert parse_angle(text) == value

    def test_half_pi_exact(self):
        assert parse_angle("pi/2") == math.pi / 2

    @pytest.mark.parametrize("text", ["tau", "pi/0", "nan", "2pi pi"])
    def test_rejects(self, text):
        with pytest.raises(Exception):
            parse_angle(text)


class TestPointCommands:
    def test_optimal_paper_point(self, capsys):
        rec = record(capsys, "optimal", "--delta", "pi", "--energy", "4", "--eta", "0.9", "--json")
        assert rec["command"] == "optimal"
        assert rec["outputs"]["pe"] == pytest.approx(6.5e-9, rel=0.1)
        assert rec["outputs"]["feasible"] is True
        assert list(rec) == sorted(rec)

    def test_sql_zero_energy(self, capsys):
        rec = record(capsys, "sql", "--delta", "pi", "--energy", "0", "--eta", "1")
        assert rec["outputs"]["pe"] == 0.5

    def test_optimal_equals_sql_at_half_pi(self, capsys):
        args = ("--delta", "pi/2", "--energy", "3", "--eta", "0.8")
        opt = record(capsys, "optimal", *args)["outputs"]
        sql = record(capsys, "sql", *args)["outputs"]
        assert opt["r"] == 0.0
        for key in ("a", "phi", "r", "theta", "psi", "pe"):
            assert opt[key] == sql[key]

    def test_infeasible_flag(self, capsys):
        rec = record(capsys, "optimal", "--delta", "pi", "--energy", "20")
        assert rec["outputs"]["feasible"] is False
        assert rec["outputs"]["r"] > 1.5

    def test_regime_warning(self, capsys):
        rec = record(capsys, "optimal", "--delta", "pi/6", "--energy", "0.1")
        assert "REGIME_WARNING" in rec["outputs"]["flags"]
        rec = record(capsys, "optimal", "--delta", "pi/6", "--energy", "0.1", "--no-regime-check")
        assert "REGIME_WARNING" not in rec["outputs"]["flags"]

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "sql", "--delta", "pi", "--energy", "1", "--csv")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) == 2 and rows[0][:3] == ["delta", "energy", "eta"]
        assert float(rows[1][rows[0].index("pe")]) > 0

    def test_reruns_identical(self, capsys):
        args = ("optimal", "--delta", "2.5", "--energy", "1.7", "--eta", "0.6")
        assert run(capsys, *args)[1] == run(capsys, *args)[1]

    def test_domain_error_exit_1(self, capsys):
        code, out, err = run(capsys, "optimal", "--delta", "pi", "--energy", "-1")
        assert code == 1 and out == "" and "error" in err

    def test_bad_eta_exit_1(self, capsys):
        assert run(capsys, "sql", "--delta", "pi", "--energy", "1", "--eta", "0")[0] == 1

    @pytest.mark.parametrize(
        "argv",
        [
            ["optimal", "--delta", "pi"],
            ["optimal", "--delta", "tau", "--energy", "1"],
            ["sql", "--delta", "pi", "--energy", "x"],
            ["bogus"],
        ],
    )
    def test_usage_exit_2(self, capsys, argv):
        with pytest.raises(SystemExit) as info:
            main(argv)
        assert info.value.code == 2
        assert "usage" in capsys.readouterr().err


class TestConfig:
    def test_file_values_used(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"delta": "pi", "energy": 4, "eta": 0.9}))
        rec = record(capsys, "--config", str(cfg), "optimal")
        assert rec["inputs"] == {"delta": math.pi, "energy": 4.0, "eta": 0.9}

    def test_flags_override(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"delta": "pi", "energy": 4, "eta": 0.9}))
        rec = record(capsys, "--config", str(cfg), "optimal", "--energy", "2")
        assert rec["inputs"]["energy"] == 2.0 and rec["inputs"]["eta"] == 0.9

    def test_unknown_key(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"delta": "pi", "energy": 1, "speed": 3}))
        with pytest.raises(SystemExit) as info:
            main(["--config", str(cfg), "sql"])
        assert info.value.code == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(["--config", str(tmp_path / "nope.json"), "sql", "--delta", "pi", "--energy", "1"])
        assert info.value.code == 2


class TestCurve:
    def test_rows_and_header(self, capsys):
        code, out, _ = run(capsys, "curve", "--delta", "pi/2", "--eta", "0.8", "--emin", "0", "--emax", "2", "--points", "3")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["E", "pe_sql", "pe_opt", "r_opt", "sinh2_r_opt"]
        assert len(rows) == 4
        assert "\r" not in out

    def test_hybrid_column(self, capsys):
        code, out, _ = run(capsys, "curve", "--delta", "pi", "--eta", "1", "--emin", "0", "--emax", "6", "--points", "7")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0][-1] == "pe_hybrid"
        assert all(float(r[-1]) <= float(r[2]) for r in rows[1:])

    def test_shortest_round_trip(self, capsys):
        _, out, _ = run(capsys, "curve", "--delta", "pi", "--eta", "0.9", "--emin", "4", "--emax", "4", "--points", "1")
        value = out.splitlines()[1].split(",")[2]
        assert value == repr(float(value))

    def test_matches_point_commands(self, tmp_path, capsys):
        path = tmp_path / "c.csv"
        assert main(["curve", "--delta", "pi", "--eta", "0.9", "--emin", "0", "--emax", "8", "--points", "9", "--out", str(path)]) == 0
        rows = {float(r["E"]): r for r in csv.DictReader(path.open())}
        opt = record(capsys, "optimal", "--delta", "pi", "--energy", "4", "--eta", "0.9")["outputs"]
        sql = record(capsys, "sql", "--delta", "pi", "--energy", "4", "--eta", "0.9")["outputs"]
        assert abs(float(rows[4.0]["pe_opt"]) - opt["pe"]) <= 1e-12 * opt["pe"]
        assert abs(float(rows[4.0]["pe_sql"]) - sql["pe"]) <= 1e-12 * sql["pe"]
        assert abs(float(rows[4.0]["r_opt"]) - opt["r"]) <= 1e-12

    @pytest.mark.parametrize(
        "argv", [["--points", "0"], ["--emin", "3", "--emax", "1"]]
    )
    def test_bad_grid(self, capsys, argv):
        assert run(capsys, "curve", "--delta", "pi", *argv)[0] == 1

    def test_unwritable_path(self, tmp_path, capsys):
        target = tmp_path / "missing" / "out.csv"
        code, _, err = run(capsys, "curve", "--delta", "pi", "--points", "2", "--out", str(target))
        assert code == 1 and "cannot write" in err


class TestWigner:
    def test_vacuum_center(self, capsys):
        code, out, _ = run(capsys, "wigner", "--state", "0,0,0,0", "--grid", "5", "--range", "2")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert len(rows) == 1 + 5 and len(rows[0]) == 1 + 5
        assert float(rows[3][3]) == pytest.approx(1 / math.pi, rel=1e-14)

    def test_optimal_state(self, capsys):
        code, out, _ = run(capsys, "wigner", "--optimal", "--delta", "pi", "--energy", "4", "--eta", "0.9", "--grid", "4")
        assert code == 0 and len(out.splitlines()) == 5

    def test_needs_state(self):
        with pytest.raises(SystemExit) as info:
            main(["wigner", "--grid", "5"])
        assert info.value.code == 2

    def test_small_grid(self, capsys):
        assert run(capsys, "wigner", "--state", "0,0,0,0", "--grid", "1")[0] == 1


class TestOracle:
    def test_composition(self, capsys):
        code, out, _ = run(capsys, "oracle", "composition", "--dim", "10", "--trials", "3", "--seed", "7")
        rep = json.loads(out)
        assert code == 0 and rep["outputs"]["passed"] and rep["outputs"]["max_distance"] < 1e-7

    def test_seeded_reproducible(self, capsys):
        args = ("oracle", "decomposition", "--dim", "8", "--trials", "3", "--seed", "5")
        assert run(capsys, *args)[1] == run(capsys, *args)[1]

    def test_unequal_witness_fails(self, capsys):
        code, out, _ = run(capsys, "oracle", "commutation", "--dim", "8", "--trials", "1", "--unequal-eta")
        rep = json.loads(out)["outputs"]
        assert code == 1 and rep["max_distance"] > 1e-3
        assert rep["worst_case"]["unitary"] == "beamsplitter"

    def test_homodyne(self, capsys):
        code, out, _ = run(capsys, "oracle", "homodyne", "--trials", "4")
        rep = json.loads(out)["outputs"]
        assert code == 0
        assert rep["kappa"] == pytest.approx(math.sqrt(2), rel=1e-6)
        assert rep["width_ratio_max_deviation"] < 1e-6

    def test_small_dim(self, capsys):
        assert run(capsys, "oracle", "composition", "--dim", "4")[0] == 1
