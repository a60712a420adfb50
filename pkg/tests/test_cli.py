import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from randgen import rand_ratx, ratxs

from qdalg import __version__
from qdalg.cli import ParseError, parse_matrix, parse_ratx, run
from qdalg.qfield import ONE, Q, RatX, X


def report(*argv):
    code, out, err = run(list(argv))
    return code, json.loads(out) if out else None, err


class TestParser:
    @pytest.mark.parametrize("text, value", [
        ("q*x", Q * X),
        ("(1 - q*x)/(1 - x)", (1 - Q * X) / (1 - X)),
        ("x^-2", 1 / X**2),
        ("x^(-2)", 1 / X**2),
        ("-x^2", -(X**2)),
        ("1/2/x", 1 / (2 * X)),
        ("1 - 2 - 3", RatX(-4)),
        ("  q *   (x+1) ", Q * X + Q),
        ("--x", X),
        ("(q^2 - 1)/(q - 1)", Q + 1),
    ])
    def test_values(self, text, value):
        assert parse_ratx(text) == value

    @pytest.mark.parametrize("text, pos", [
        ("x+", 2),
        ("x $ 1", 2),
        ("(x", 2),
        ("x)", 1),
        ("", 0),
        ("x^q", 2),
        ("2 x", 2),
        ("2^3^1", 3),
    ])
    def test_syntax_errors(self, text, pos):
        with pytest.raises(ParseError) as info:
            parse_ratx(text)
        assert info.value.position == pos

    @pytest.mark.parametrize("text", ["1/0", "x/(q - q)", "(x-x)^-1"])
    def test_division_by_zero(self, text):
        with pytest.raises(ParseError, match="division by zero"):
            parse_ratx(text)

    @given(ratxs())
    @settings(max_examples=60, deadline=None)
    def test_round_trip(self, a):
        assert parse_ratx(str(a)) == a

    def test_round_trip_library_values(self):
        rng = random.Random(9)
        for _ in range(50):
            a = rand_ratx(rng)
            for b in (a, a.sigma_q(), a.delta_x(), a.delta_q()):
                assert parse_ratx(str(b)) == b

    def test_matrix(self):
        assert parse_matrix("q, x; 1, x^2") == ((Q, X), (ONE, X**2))
        assert parse_matrix("q*x") == ((Q * X,),)
        with pytest.raises(ValueError):
            parse_matrix("1, 2")

    def test_matrix_error_position(self):
        with pytest.raises(ParseError) as info:
            parse_matrix("q, x+")
        assert info.value.position == 5


class TestCommands:
    def test_classify_theta(self):
        code, rep, _ = report("classify", "q*x")
        assert code == 0
        assert rep["verdict"] == "DifferentiallyAlgebraic"
        assert (rep["mu"], rep["r"], rep["delta_constant"]) == ("q", 1, True)
        assert rep["certificate"]["verified"]
        assert rep["version"] == __version__
        assert any("n(n-1)/2" in w for w in rep["warnings"])

    def test_classify_hypertranscendent(self):
        code, rep, _ = report("classify", "1/(1-x)")
        assert code == 0 and rep["verdict"] == "Hypertranscendent"
        assert rep["obstruction"][0]["exponent"] == -1

    def test_classify_zero(self):
        code, _, err = report("classify", "0")
        assert code == 1 and "nonzero" in err

    def test_telescope(self):
        code, rep, _ = report("telescope", "1")
        assert code == 0 and rep["found"] is False and rep["obstruction"] == "constant-term"
        code, rep, _ = report("telescope", "x")
        assert rep["found"] and parse_ratx(rep["f"]) == X / (Q - 1)

    def test_dispersion(self):
        code, rep, _ = report("dispersion", "(x-1)*(x-q^3)", "(x-1)*(x-q^3)")
        assert code == 0 and rep["shifts"] == [-3, 0, 3]

    def test_dispersion_x_factor(self):
        code, _, err = report("dispersion", "x", "x-1")
        assert code == 1 and "divisible by x" in err

    def test_orbit_reduce(self):
        code, rep, _ = report("orbit-reduce", "(1-q*x)/(1-x)")
        assert code == 0 and rep["atilde"] == "1" and rep["monomial"]

    def test_integrable(self):
        code, rep, _ = report("integrable", "--matrix", "q*x")
        assert code == 0 and rep["found"] is False and rep["warnings"]
        code, rep, _ = report("integrable", "--matrix", "q*x", "--deriv", "partial2")
        assert rep["found"] and rep["B"] == [["(1/2)*l^2 + (1/2)*l"]]
        code, rep, _ = report("integrable", "--matrix", "q^2", "--degbound", "1")
        assert rep["found"] and rep["B"] == [["0"]] and rep["ansatz"]["degbound"] == 1

    def test_integrable_diag(self):
        code, rep, _ = report("integrable", "--diag", "--lambda", "q*x", "--eta", "0")
        assert code == 0 and rep["found"] and rep["alpha"] == "0"
        assert [c["holds"] for c in rep["conditions"]] == [True, True, True]

    def test_integrable_usage(self):
        assert run(["integrable"])[0] == 1
        assert run(["integrable", "--diag", "--lambda", "q"])[0] == 1
        assert run(["integrable", "--matrix", "0"])[0] == 1
        assert run(["integrable", "--matrix", "q", "--deriv", "nope"])[0] == 1

    def test_theta_verify(self):
        code, rep, _ = report("theta-verify", "--window", "8")
        assert code == 0 and rep["functional_eq"] and rep["heat_eq"]
        assert rep["positive_convention_functional_eq"] is False

    def test_ell_verify(self):
        code, rep, _ = report("ell-verify", "--jmax", "2")
        assert code == 0 and rep["heat_identity"]["holds"]
        assert [p["matches"] for p in rep["polar"]] == [True, True, True]
        assert rep["mu_constant"]["full_holds"] and not rep["mu_constant"]["halved_holds"]

    def test_prolong_check(self):
        code, rep, _ = report("prolong-check", "--matrix", "q*x", "--order", "2")
        assert code == 0 and rep["commutation"]
        assert len(rep["sigma_on_jets"]) == 3

    def test_text_format(self):
        code, out, _ = run(["classify", "q*x", "--format", "text"])
        assert code == 0
        assert out.splitlines()[0].startswith("solutions satisfy a nontrivial")
        assert 'verdict: "DifferentiallyAlgebraic"' in out

    def test_parse_error_exit(self):
        code, out, err = run(["telescope", "x^"])
        assert code == 1 and out == "" and "position 2" in err

    def test_unknown_command(self, capsys):
        assert run(["frobnicate"])[0] == 1

    def test_determinism(self):
        argv = ["classify", "(1-q^2*x)*q*x/(1-x)"]
        assert run(argv) == run(argv)
        assert run(argv)[1].encode() == run(argv)[1].encode()

    def test_json_keys_sorted(self):
        _, out, _ = run(["telescope", "x"])
        keys = list(json.loads(out))
        assert keys == sorted(keys)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qdalg.cli", "telescope", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["obstruction"] == "constant-term"
