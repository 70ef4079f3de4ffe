"""The command-line interface, driven in process through main()."""

import csv
import io
from fractions import Fraction

import pytest

from effmeas.cli import REPORT_HEADER, _decimal, _parse_nlist, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def rows_of(out: str):
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(io.StringIO("\n".join(body))))
    assert tuple(rows[0]) == REPORT_HEADER
    return rows[1:]


class TestHelpers:
    def test_decimal_truncation(self):
        assert _decimal(Fraction(1, 3), 5) == "0.33333"
        assert _decimal(Fraction(-7, 2), 3) == "-3.500"
        assert _decimal(Fraction(4), 2) == "4.00"

    def test_parse_nlist(self):
        assert _parse_nlist("1..4") == [1, 2, 3, 4]
        assert _parse_nlist("1,3,5") == [1, 3, 5]
        assert _parse_nlist("2") == [2]


class TestProkhorovCommand:
    def test_exact_between_builtins(self, capsys):
        code, out, _ = run(capsys, "prokhorov", "delta0", "halfhalf")
        assert code == 0
        assert out.splitlines()[0] == "1/2"
        assert out.splitlines()[1].startswith("0.5000")

    def test_exact_between_files(self, capsys, tmp_path):
        a = tmp_path / "a.measure"
        b = tmp_path / "b.measure"
        a.write_text("discrete\natom 0 1\n")
        b.write_text("discrete\natom 0 1/2\natom 1 1/2\n")
        code, out, _ = run(capsys, "prokhorov", str(a), str(b))
        assert code == 0 and out.splitlines()[0] == "1/2"

    def test_identical_measures(self, capsys):
        code, out, _ = run(capsys, "prokhorov", "delta0", "delta0")
        assert code == 0 and out.splitlines()[0] == "0/1"

    def test_bounds_path_for_density(self, capsys, tmp_path):
        u = tmp_path / "uniform.measure"
        u.write_text("polydensity\n0 0\n1/1024 1\n1023/1024 1\n1 0\n")
        code, out, _ = run(capsys, "prokhorov", str(u), "delta0", "--precision", "3")
        assert code == 0
        lo, hi = (Fraction(t) for t in out.splitlines()[0].split())
        assert lo <= hi and hi - lo <= Fraction(1, 8) + Fraction(1, 2)  # pitch slack

    def test_parse_error_exit_code(self, capsys, tmp_path):
        bad = tmp_path / "bad.measure"
        bad.write_text("discrete\natom x 1\n")
        code, _, err = run(capsys, "prokhorov", str(bad), "delta0")
        assert code == 3 and "parse error" in err

    def test_unknown_builtin(self, capsys):
        code, _, err = run(capsys, "prokhorov", "nosuch", "delta0")
        assert code == 3


class TestDemoSpecker:
    def test_identity_enumeration_rows(self, capsys):
        code, out, _ = run(capsys, "demo", "specker", "--fuel", "8")
        assert code == 0
        rows = rows_of(out)
        assert all(r[-1] == "pass" for r in rows)
        idx = int(rows[0][1])
        # beyond the modulus index the integral is frozen exactly
        late = [r for r in rows if int(r[2]) >= idx]
        assert late and all(r[3] == "0" for r in late)
        assert "total-mass lower bounds" in out

    def test_enum_file(self, capsys, tmp_path):
        e = tmp_path / "enum.txt"
        e.write_text("0\n2\n1\n5\n3\n4\n6\n7\n8\n9\n10\n")
        code, out, _ = run(capsys, "demo", "specker", "--enum", str(e), "--fuel", "4")
        assert code == 0

    def test_duplicate_enumeration_fails(self, capsys, tmp_path):
        e = tmp_path / "enum.txt"
        e.write_text("0\n1\n1\n2\n3\n4\n5\n")
        code, _, err = run(capsys, "demo", "specker", "--enum", str(e))
        assert code == 1 and "certificate error" in err


class TestVerify:
    def test_weak_constructed(self, capsys):
        code, out, _ = run(
            capsys, "verify", "weak", "deltashrink", "delta0", "hat", "1..4"
        )
        assert code == 0
        rows = rows_of(out)
        assert {int(r[0]) for r in rows} == {1, 2, 3, 4}
        assert all(r[-1] == "pass" for r in rows)

    def test_weak_with_good_and_bad_certificates(self, capsys, tmp_path):
        good = tmp_path / "good.modulus"
        good.write_text("modulus\n2 8\n4 10\n")
        code, out, _ = run(
            capsys, "verify", "weak", "deltashrink", "delta0", "hat", "2,4",
            "--certificate", str(good),
        )
        assert code == 0
        bad = tmp_path / "bad.modulus"
        bad.write_text("modulus\n2 0\n4 0\n")
        code, out, _ = run(
            capsys, "verify", "weak", "deltashrink", "delta0", "hat", "2,4",
            "--certificate", str(bad),
        )
        assert code == 1
        assert any(r[-1] == "fail" for r in rows_of(out))

    def test_vague_mode(self, capsys):
        code, out, _ = run(capsys, "verify", "vague", "mixture", "halfhalf", "hat", "1..3")
        assert code == 0 and all(r[-1] == "pass" for r in rows_of(out))

    def test_vague_to_weak_mode(self, capsys):
        code, out, _ = run(
            capsys, "verify", "vague-to-weak", "mixture", "halfhalf",
            "constant-one", "1..3",
        )
        assert code == 0 and all(r[-1] == "pass" for r in rows_of(out))

    def test_eps_mode(self, capsys):
        code, out, _ = run(capsys, "verify", "eps", "deltashrink", "delta0", "1..3")
        assert code == 0 and all(r[-1] == "pass" for r in rows_of(out))

    def test_witness_mode(self, capsys):
        code, out, _ = run(capsys, "verify", "witness", "deltadrift", "delta1", "1..2")
        assert code == 0 and all(r[-1] == "pass" for r in rows_of(out))

    def test_divergence_exit_code(self, capsys):
        code, _, err = run(capsys, "verify", "weak", "deltan", "zero", "constant-one", "2")
        assert code == 2 and "diverg" in err.lower()

    def test_out_file(self, capsys, tmp_path):
        out_path = tmp_path / "report.csv"
        code, out, _ = run(
            capsys, "verify", "weak", "deltashrink", "delta0", "hat", "2",
            "--out", str(out_path),
        )
        assert code == 0
        assert out_path.read_text() == out

    def test_precision_flag_sets_nlist(self, capsys):
        code, out, _ = run(
            capsys, "verify", "weak", "deltashrink", "delta0", "hat",
            "--precision", "2,5",
        )
        assert code == 0
        assert {int(r[0]) for r in rows_of(out)} == {2, 5}
