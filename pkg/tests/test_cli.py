import csv
import io
import json
import subprocess
import sys

import pytest

from bsymbol.cli import format_poly, main, parse_b, parse_poly, UsageError
from bsymbol.code import WeightEnumerator
from bsymbol.errors import BOutOfRangeError, DegreeMismatchError
from bsymbol.field import subfield

from conftest import FIXTURES

EX_A = ["-p", "3", "-r", "4", "-N", "2"]
EX_B = ["-p", "2", "-r", "4", "-N", "3", "--poly-qr", "1,1,0,0,1"]
EX_C = ["-p", "2", "-t", "2", "-r", "3", "-N", "9", "--poly-q", "1,1,1", "--poly-qr", "z^1,1,1,1"]
EX_D = ["-p", "5", "-r", "5", "-N", "4"]


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


class TestPolyGrammar:
    def test_prime_field(self):
        assert parse_poly("1,1,0,0,1", 4, 2) == (1, 1, 0, 0, 1)
        assert parse_poly("1,1,0,0", 4, 2) == (1, 1, 0, 0, 1)

    def test_extension_tokens(self):
        fq = subfield(2, (1, 1, 1))
        assert parse_poly("z^1,z^0,1,1", 3, 2, fq) == (2, 1, 1, 1)
        assert parse_poly("z^1,1,1", 3, 2, fq) == (2, 1, 1, 1)
        assert format_poly((2, 1, 1, 1), fq) == "z^1,z^0,z^0,z^0"

    def test_roundtrip(self):
        fq = subfield(2, (1, 1, 1))
        for poly in [(2, 1, 1, 1), (3, 0, 2, 1), (1, 0, 0, 1)]:
            assert parse_poly(format_poly(poly, fq), 3, 2, fq) == poly

    def test_errors(self):
        with pytest.raises(DegreeMismatchError):
            parse_poly("1,1", 4, 2)
        with pytest.raises(DegreeMismatchError):
            parse_poly("1,1,0,0,0", 4, 2)
        with pytest.raises(UsageError):
            parse_poly("1,x,0,0", 4, 2)
        with pytest.raises(UsageError):
            parse_poly("1,3,0,0", 4, 2)


class TestValidate:
    def test_example_1a(self):
        code, out = run("validate", *EX_A)
        assert code == 0
        assert "n=40 Delta=40 u=2" in out and "d=1 s=2 delta=0" in out

    def test_json(self):
        code, out = run("validate", *EX_C, "--format", "json")
        rec = json.loads(out)
        assert code == 0 and (rec["n"], rec["u"], rec["s"], rec["regime"]) == (7, 3, 3,
                                                                                "two-weight semiprimitive")
        assert rec["poly_qr"] == "z^1,z^0,z^0,z^0"

    def test_one_weight(self):
        code, out = run("validate", *EX_D, "--format", "csv")
        row = next(csv.DictReader(io.StringIO(out)))
        assert code == 0 and row["u"] == "1" and row["regime"] == "one-weight"

    def test_order_mismatch(self):
        assert run("validate", "-p", "2", "-r", "4", "-N", "5")[0] == 2

    def test_non_divisor(self):
        assert run("validate", "-p", "2", "-r", "4", "-N", "4")[0] == 2

    def test_not_semiprimitive(self):
        code, out = run("validate", "-p", "2", "-r", "6", "-N", "7")
        assert code == 2 and "not semiprimitive" in out

    def test_non_primitive_poly(self):
        assert run("validate", "-p", "2", "-r", "4", "-N", "3", "--poly-qr", "1,1,1,1,1")[0] == 2

    def test_non_prime(self):
        assert run("validate", "-p", "4", "-r", "2", "-N", "3")[0] == 2

    def test_bad_poly_token(self):
        assert run("validate", "-p", "2", "-r", "4", "-N", "3", "--poly-qr", "a,b")[0] == 64

    def test_usage(self):
        with pytest.raises(SystemExit) as exc:
            main(["validate", "-p", "2"])
        assert exc.value.code == 64
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 64


class TestEnumerate:
    def test_formula_text(self):
        code, out = run("enumerate", *EX_A, "-b", "3")
        assert code == 0
        assert out.splitlines()[0] == "b=3: 1 + 40T^38 + 40T^40"
        assert "mu=(8, 5)" in out

    def test_oracle_text(self):
        code, out = run("enumerate", *EX_B, "--mode", "oracle", "-b", "1..2")
        assert code == 0
        assert out.splitlines() == ["b=1: 1 + 10T^2 + 5T^4", "b=2: 1 + 5T^3 + 5T^4 + 5T^5"]

    def test_formula_equals_oracle(self):
        for args in (EX_A, EX_B, EX_C):
            _, formula = run("enumerate", *args, "--format", "json")
            _, oracle = run("enumerate", *args, "--format", "json", "--mode", "oracle")
            for f, o in zip(json.loads(formula), json.loads(oracle)):
                assert WeightEnumerator.from_json(f) == WeightEnumerator.from_json(o)

    def test_example_1d(self):
        _, out = run("enumerate", *EX_D, "-b", "1,3")
        assert [ln for ln in out.splitlines() if ln.startswith("b=")] == [
            "b=1: 1 + 3124T^625", "b=3: 1 + 3124T^775"]

    def test_csv(self):
        code, out = run("enumerate", *EX_C, "-b", "2", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows == [["b", "weight", "count"], ["2", "0", "1"], ["2", "6", "21"], ["2", "7", "42"]]

    def test_b_out_of_range(self):
        assert run("enumerate", *EX_B, "-b", "9")[0] == 64
        assert run("enumerate", *EX_B, "-b", "0")[0] == 64
        assert run("enumerate", *EX_B, "-b", "x")[0] == 64

    def test_budget_env(self, monkeypatch):
        monkeypatch.setenv("BSYMBOL_BUDGET", "100")
        assert run("enumerate", *EX_D, "--mode", "oracle", "-b", "1")[0] == 3
        assert run("enumerate", *EX_D, "-b", "1")[0] == 0  # formula mode needs no brute force

    def test_budget_flag(self):
        assert run("enumerate", *EX_A, "--mode", "oracle", "--budget", "80")[0] == 3


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("example_*.json")), ids=lambda p: p.stem)
def test_golden_fixture(path):
    want = json.loads(path.read_text())
    prm = want["params"]
    argv = ["enumerate", "-p", str(prm["p"]), "-t", str(prm["t"]), "-r", str(prm["r"]),
            "-N", str(prm["N"]), "--poly-q", prm["poly_q"], "--poly-qr", prm["poly_qr"],
            "-b", str(want["b"]), "--format", "json"]
    code, out = run(*argv)
    assert code == 0
    assert json.loads(out) == want


class TestVerify:
    @pytest.mark.parametrize("args", [EX_A, EX_B, EX_C, EX_D], ids=["1a", "1b", "1c", "1d"])
    def test_examples_pass(self, args):
        code, out = run("verify", *args)
        assert code == 0, out
        assert out.splitlines()[-1] == "all checks passed"
        assert "FAIL" not in out

    def test_negative_control(self):
        code, out = run("verify", *EX_A, "--inject-delta-flip")
        assert code == 1
        fails = [ln for ln in out.splitlines() if ln.startswith("FAIL")]
        assert fails and all("witness=" in ln for ln in fails)

    def test_json_deterministic(self):
        _, a = run("verify", *EX_B, "--format", "json")
        _, b = run("verify", *EX_B, "--format", "json")
        assert a == b
        rep = json.loads(a)
        assert rep["passed"] and rep["params"]["u"] == 3 and "elapsed_s" not in rep

    def test_timing(self):
        _, out = run("verify", *EX_B, "--format", "json", "--timing")
        assert "elapsed_s" in json.loads(out)

    def test_csv(self):
        code, out = run("verify", *EX_A, "--inject-delta-flip", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 1 and any(r["passed"] == "0" and r["witness"] for r in rows)

    def test_budget(self, monkeypatch):
        monkeypatch.setenv("BSYMBOL_BUDGET", "16")
        assert run("verify", *EX_A)[0] == 3


class TestScan:
    def test_examples_listed(self):
        code, out = run("scan", "--p-range", "2..5", "--max-order", "4096", "--format", "json")
        assert code == 0
        rows = [json.loads(ln) for ln in out.splitlines()]
        keyed = {(r["q"], r["r"], r["N"]): r for r in rows}
        assert keyed[(3, 4, 2)]["weights"]["3"] == [40, 38]
        assert keyed[(2, 4, 3)]["u"] == 3
        assert keyed[(4, 3, 9)]["weights"]["2"] == [6, 7, 7]
        assert all(r["u"] >= 2 for r in rows)

    def test_u_one(self):
        code, out = run("scan", "--u-one", "--p-range", "2..5", "--r-range", "2..5", "--max-order", "1024",
                        "--format", "json")
        rows = [json.loads(ln) for ln in out.splitlines()]
        assert code == 0 and rows
        for r in rows:
            q, rr, N = r["q"], r["r"], r["N"]
            for b, ws in r["weights"].items():
                assert ws == [(q ** rr - q ** (rr - int(b))) // N]

    def test_crosscheck(self):
        code, out = run("scan", "--p-range", "2..3", "--max-order", "729", "--crosscheck", "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and rows
        assert {r["crosscheck"] for r in rows} == {"match"}

    def test_text_and_limit(self):
        code, out = run("scan", "--p-range", "3", "--max-order", "81", "-b", "1", "--limit", "2")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 2 and all(" b1=" in ln for ln in lines)


def test_parse_b(ex_a):
    assert parse_b("1..3", ex_a) == [1, 2, 3]
    assert parse_b("1-2,4", ex_a) == [1, 2, 4]
    assert parse_b("all", ex_a) == [1, 2, 3, 4]
    with pytest.raises(BOutOfRangeError):
        parse_b("5", ex_a)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bsymbol", "enumerate", *EX_B, "-b", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("b=2: 1 + 5T^3 + 5T^4 + 5T^5")
    proc = subprocess.run([sys.executable, "-m", "bsymbol", "enumerate", *EX_B, "-b", "9"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 64 and "usage error" in proc.stderr
