import csv
import io
import json

import numpy as np
import pytest

from cp3geom import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


class TestConfig:
    def test_tolerance_order(self, capsys):
        assert cli.main(["verify", "--tol-first", "1e-2", "--tol-second", "1e-3"]) == cli.EXIT_USAGE

    def test_bad_values(self, capsys):
        assert cli.main(["family", "--a", "-1"]) == cli.EXIT_USAGE
        assert cli.main(["verify", "--samples", "0"]) == cli.EXIT_USAGE
        assert cli.main(["nonsense"]) == cli.EXIT_USAGE
        assert cli.main(["family", "--format", "xml"]) == cli.EXIT_USAGE

    def test_pi_values(self):
        assert cli.eval_number("pi/4") == pytest.approx(np.pi / 4)
        assert cli.eval_number("3pi/8") == pytest.approx(3 * np.pi / 8)
        assert cli.eval_number("0.6") == 0.6


class TestFamily:
    def test_rows_csv(self, capsys):
        code, out = run(capsys, "family", "--t", "pi/6,pi/4,1.0", "--a", "1,2", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 6
        row = next(r for r in rows if float(r["t"]) == pytest.approx(np.pi / 6) and r["a"] == "1")
        r3 = np.sqrt(3)
        got = [float(row[f"k{i}"]) for i in range(1, 6)]
        np.testing.assert_allclose(got, [-1 / r3, -1 / r3, 2 / r3, r3, r3], atol=1e-9)
        minimal = next(r for r in rows if float(r["t"]) == pytest.approx(np.pi / 4) and r["a"] == "2")
        assert abs(float(minimal["lambda_numeric"])) < 1e-9
        assert abs(float(minimal["mean_trace"])) < 1e-9
        assert abs(float(minimal["twistor_height"])) < 1e-15
        assert len(row["theta_a"].replace("-", "").split("e")[0].replace(".", "")) <= 17

    def test_out_of_range_row(self, capsys):
        code, out = run(capsys, "family", "--t", "2.0,0.5", "--a", "2")
        rep = json.loads(out)
        assert code == cli.EXIT_FAIL
        assert rep["rows"][0]["error"] is not None
        assert rep["rows"][1]["error"] is None


class TestReports:
    def test_json_round_trip(self, capsys):
        code, out = run(capsys, "obstructions", "--samples", "20")
        rep = json.loads(out)
        assert code == 0 and rep["pass"]
        names = {c["name"]: c for c in rep["checks"]}
        assert names["csc_rhs_cyclic"]["value"] < 1e-12
        cfg = cli.RunConfig(samples=20)
        again = cli.cmd_obstructions(cfg).to_dict()
        assert json.loads(json.dumps(again)) == rep

    def test_verify_passes_and_fails(self, capsys):
        code, out = run(capsys, "verify", "--samples", "2", "--format", "text")
        assert code == 0 and out.startswith("verify: PASS")
        code, out = run(capsys, "verify", "--samples", "2", "--step", "1e-1", "--format", "text")
        assert code == cli.EXIT_FAIL
        failed = " ".join(line for line in out.splitlines() if "[FAIL]" in line)
        assert "nabla_G" in failed and "nabla_J1" in failed
        assert "J1_squared" not in failed and "G_skew" not in failed

    def test_seed_changes_values_not_verdict(self, capsys):
        _, a = run(capsys, "verify", "--samples", "2", "--seed", "1")
        _, b = run(capsys, "verify", "--samples", "2", "--seed", "2")
        ra, rb = json.loads(a), json.loads(b)
        assert ra["pass"] == rb["pass"] is True
        assert ra["checks"] != rb["checks"]

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "fam.json"
        assert cli.main(["family", "--t", "0.6", "--out", str(path)]) == 0
        assert json.loads(path.read_text())["suite"] == "family"
