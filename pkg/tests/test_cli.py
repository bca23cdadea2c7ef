"""End-to-end tests for the command-line front end.

Commands run in-process through main(argv); a single subprocess test covers
the installed entry points. File outputs are compared byte for byte where
determinism is part of the contract.
"""
import io
import json
import math
import subprocess
import sys

import pytest

import leakexp.cli as cli
from leakexp.cli import main

LN2 = math.log(2.0)


@pytest.fixture
def matrix_file(tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("1 2\n11\n")
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestLeakageCommand:
    def test_report_keys_and_values(self, capsys, matrix_file):
        code, out, _ = run(capsys, "leakage", "--matrix", matrix_file, "--channel", "bec:0.4")
        assert code == 0
        rep = json.loads(out)
        assert list(rep) == [
            "leakage_nats",
            "hash_entropy_nats",
            "bound_nats",
            "slack_nats",
            "method",
            "samples",
            "ci_halfwidth",
        ]
        assert abs(rep["leakage_nats"] - (1 - 0.4) ** 2 * LN2) <= 1e-12
        assert rep["method"] == "exact-enumeration"
        assert rep["samples"] == 0

    def test_bitflip_has_no_bound(self, capsys, matrix_file):
        code, out, _ = run(capsys, "leakage", "--matrix", matrix_file, "--channel", "bsc:0.11")
        assert code == 0
        rep = json.loads(out)
        assert rep["bound_nats"] is None and rep["slack_nats"] is None

    def test_stdin_matrix(self, capsys, monkeypatch):
        monkeypatch.setattr(sys, "stdin", io.StringIO("1 1\n1\n"))
        code, out, _ = run(capsys, "leakage", "--matrix", "-", "--channel", "bec:0.5")
        assert code == 0
        assert abs(json.loads(out)["leakage_nats"] - 0.5 * LN2) <= 1e-12

    def test_out_file(self, capsys, matrix_file, tmp_path):
        dest = tmp_path / "r.json"
        code, out, _ = run(
            capsys, "leakage", "--matrix", matrix_file, "--channel", "bec:0.4",
            "--out", str(dest),
        )
        assert code == 0 and out == ""
        assert json.loads(dest.read_text())["samples"] == 0

    def test_parse_error_exit(self, capsys, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("1 2\n1\n")
        code, _, err = run(capsys, "leakage", "--matrix", str(bad), "--channel", "bec:0.4")
        assert code == 2 and "line 2" in err

    def test_missing_file_exit(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "leakage", "--matrix", str(tmp_path / "nope.txt"), "--channel", "bec:0.4"
        )
        assert code == 2 and "cannot read" in err

    def test_bad_channel_exit(self, capsys, matrix_file):
        code, _, _ = run(capsys, "leakage", "--matrix", matrix_file, "--channel", "bec:1.4")
        assert code == 2

    def test_size_limit_exit(self, capsys, tmp_path):
        big = tmp_path / "big.txt"
        big.write_text("1 27\n" + "1" * 27 + "\n")
        code, _, err = run(capsys, "leakage", "--matrix", str(big), "--channel", "bec:0.5")
        assert code == 3 and "27" in err


class TestPmlCommand:
    def test_exact(self, capsys, matrix_file):
        code, out, _ = run(capsys, "pml", "--matrix", matrix_file, "--channel", "bec:0.3")
        rep = json.loads(out)
        assert code == 0
        assert abs(rep["p_ml"] - 0.09) <= 1e-12
        assert rep["method"] == "exact-enumeration" and rep["delta"] == 0.3

    def test_monte_carlo(self, capsys, matrix_file):
        code, out, _ = run(
            capsys, "pml", "--matrix", matrix_file, "--channel", "bec:0.3",
            "--samples", "20000", "--seed", "7",
        )
        rep = json.loads(out)
        assert code == 0
        assert rep["method"] == "monte-carlo" and rep["samples"] == 20000
        assert rep["ci_halfwidth"] > 0.0
        assert abs(rep["p_ml"] - 0.09) <= 0.02

    def test_needs_erasure_descriptor(self, capsys, matrix_file):
        code, _, err = run(capsys, "pml", "--matrix", matrix_file, "--channel", "bsc:0.3")
        assert code == 2 and "bec" in err


class TestVerifyBoundCommand:
    def test_rows_and_header(self, capsys, tmp_path):
        dest = tmp_path / "v.csv"
        code, _, _ = run(
            capsys, "verify-bound", "--k", "2", "--n", "8", "--channel", "bec:0.5",
            "--trials", "20", "--seed", "11", "--out", str(dest),
        )
        assert code == 0
        lines = dest.read_text().splitlines()
        assert lines[0] == "trial,leakage_nats,bound_nats,slack_nats"
        assert len(lines) == 21
        for line in lines[1:]:
            assert float(line.split(",")[3]) >= -1e-9

    def test_zero_trials(self, capsys):
        code, out, _ = run(
            capsys, "verify-bound", "--k", "2", "--n", "4", "--channel", "bec:0.5",
            "--trials", "0",
        )
        assert code == 0
        assert out == "trial,leakage_nats,bound_nats,slack_nats\n"

    def test_single_bit_slack(self, capsys):
        # seed 0 draws the 1x1 matrix [1]
        code, out, _ = run(
            capsys, "verify-bound", "--k", "1", "--n", "1", "--channel", "bec:0.5",
            "--trials", "1", "--seed", "0",
        )
        assert code == 0
        slack = float(out.splitlines()[1].split(",")[3])
        assert abs(slack - (0.5 - 0.5 * LN2)) <= 1e-12

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for dest in (a, b):
            assert run(
                capsys, "verify-bound", "--k", "3", "--n", "9", "--channel", "bec:0.25",
                "--trials", "15", "--seed", "4", "--out", str(dest),
            )[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_size_limit(self, capsys):
        code, _, _ = run(
            capsys, "verify-bound", "--k", "2", "--n", "30", "--channel", "bec:0.5",
            "--trials", "1",
        )
        assert code == 3


class TestSearchCommand:
    def test_deterministic_json(self, capsys):
        args = ("search", "--k", "2", "--n", "5", "--channel", "bec:0.5",
                "--trials", "20", "--seed", "1")
        code, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code == 0 and code2 == 0 and out1 == out2
        rep = json.loads(out1)
        assert len(rep["matrix"]) == 2 and len(rep["matrix"][0]) == 5
        assert rep["leakage_nats"] <= rep["hash_entropy_nats"]


class TestExponentsCommand:
    def test_single_curve_stdout(self, capsys):
        code, out, _ = run(
            capsys, "exponents", "er-bec", "--channel", "bec:0.5",
            "--rmin", "0", "--rmax", "0.6", "--steps", "3",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "R_nats,value_nats,R_bits,value_bits,theta_star"
        assert len(lines) == 4
        assert lines[1].startswith("0,0.287682072452,")

    def test_preset_writes_both_curves(self, capsys, tmp_path):
        code, out, _ = run(capsys, "exponents", "--preset", "fig3", "--out", str(tmp_path))
        assert code == 0
        er = (tmp_path / "fig3_er.csv").read_text()
        ex = (tmp_path / "fig3_ex.csv").read_text()
        assert er.count("\n") == 201 and ex.count("\n") == 201
        # clamped figure data never goes negative
        for line in ex.splitlines()[1:]:
            assert float(line.split(",")[1]) >= 0.0
        assert ex.splitlines()[1].split(",")[1] == "0.34657359028"

    def test_preset_byte_identical(self, capsys, tmp_path):
        d1, d2 = tmp_path / "one", tmp_path / "two"
        d1.mkdir(), d2.mkdir()
        for d in (d1, d2):
            assert run(capsys, "exponents", "--preset", "fig4", "--out", str(d))[0] == 0
        assert (d1 / "fig4_er.csv").read_bytes() == (d2 / "fig4_er.csv").read_bytes()
        assert (d1 / "fig4_ex.csv").read_bytes() == (d2 / "fig4_ex.csv").read_bytes()

    def test_reduction_interval_agreement(self, capsys, tmp_path):
        code, _, _ = run(capsys, "exponents", "--preset", "fig4", "--out", str(tmp_path))
        assert code == 0
        er = {}
        for line in (tmp_path / "fig4_er.csv").read_text().splitlines()[1:]:
            parts = line.split(",")
            er[parts[0]] = float(parts[1])
        from leakexp.exponents import critical_rate, expurgation_rate

        lo = expurgation_rate((1 - 2 * 0.11) ** 2)
        hi = critical_rate(0.11)
        checked = 0
        for line in (tmp_path / "fig4_ex.csv").read_text().splitlines()[1:]:
            parts = line.split(",")
            r = float(parts[0])
            if lo <= r <= hi:
                assert abs(float(parts[1]) - er[parts[0]]) <= 1e-6
                checked += 1
        assert checked > 10

    def test_kind_and_preset_conflict(self, capsys):
        code, _, _ = run(capsys, "exponents", "er-bec", "--channel", "bec:0.5",
                         "--preset", "fig3")
        assert code == 2

    def test_neither_kind_nor_preset(self, capsys):
        assert run(capsys, "exponents")[0] == 2

    def test_family_mismatch(self, capsys):
        code, _, err = run(capsys, "exponents", "er-bec", "--channel", "bsc:0.25")
        assert code == 2 and "bec" in err

    def test_steps_two(self, capsys):
        code, out, _ = run(
            capsys, "exponents", "ex-bsc-reduction", "--channel", "bsc:0.25",
            "--steps", "2",
        )
        assert code == 0 and len(out.splitlines()) == 3


class TestRatesCommand:
    def test_values(self, capsys):
        code, out, _ = run(capsys, "rates", "--channel", "bsc:0.11")
        assert code == 0
        rep = json.loads(out)
        assert abs(rep["delta"] - 0.6084) <= 1e-12
        assert abs(rep["R_cr_nats"] - 0.14799112447890425) <= 1e-12
        assert abs(rep["R_x_nats"] - 0.02993925293825314) <= 1e-12
        assert abs(rep["R_cr_bits"] - rep["R_cr_nats"] / LN2) <= 1e-12
        assert rep["R_x_nats"] <= rep["R_cr_nats"]

    def test_degenerate_exit(self, capsys):
        assert run(capsys, "rates", "--channel", "bsc:0.5")[0] == 4

    def test_family_checked(self, capsys):
        assert run(capsys, "rates", "--channel", "bec:0.2")[0] == 2

    def test_invariant_violation_exit(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "critical_rate", lambda eps: 0.0)
        assert run(capsys, "rates", "--channel", "bsc:0.11")[0] == 5


class TestScalingCommand:
    def test_shape_and_positivity(self, capsys):
        code, out, _ = run(
            capsys, "scaling", "--rate", str(0.1 * LN2), "--n", "6,8,10",
            "--channel", "bec:0.5", "--trials", "8", "--seed", "2",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,k,best_leakage_nats,minus_log_leakage_over_n"
        assert len(lines) == 4
        for line in lines[1:]:
            n, k, leak, slope = line.split(",")
            assert 1 <= int(k) <= int(n)
            assert float(leak) > 0.0 and float(slope) > 0.0

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for dest in (a, b):
            assert run(
                capsys, "scaling", "--rate", "0.1", "--n", "6,8",
                "--channel", "bec:0.5", "--trials", "6", "--seed", "3",
                "--out", str(dest),
            )[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_n_list(self, capsys):
        code, _, _ = run(
            capsys, "scaling", "--rate", "0.1", "--n", "6,x",
            "--channel", "bec:0.5",
        )
        assert code == 2


class TestEntryPoints:
    def test_console_script_and_module(self, tmp_path):
        mat = tmp_path / "m.txt"
        mat.write_text("1 1\n1\n")
        out1 = subprocess.run(
            ["leakexp", "leakage", "--matrix", str(mat), "--channel", "bec:0.5"],
            capture_output=True, text=True,
        )
        out2 = subprocess.run(
            [sys.executable, "-m", "leakexp", "leakage", "--matrix", str(mat),
             "--channel", "bec:0.5"],
            capture_output=True, text=True,
        )
        assert out1.returncode == 0 and out2.returncode == 0
        assert out1.stdout == out2.stdout

    def test_unknown_subcommand_exits_two(self):
        proc = subprocess.run(
            ["leakexp", "transmogrify"], capture_output=True, text=True
        )
        assert proc.returncode == 2
