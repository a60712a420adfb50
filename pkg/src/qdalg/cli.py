"""Command-line front end: ``qdalg <command> ...``.

Expressions use integers, ``q``, ``x``, ``+ - * / ^`` (integer exponents, which
may be negative) and parentheses.  Reports are JSON (stable key order) or plain
text.  Exit codes: 0 for a definite verdict, 2 when a case is outside the
supported algorithms, 1 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import __version__
from .ellring import (
    J_MAX_DEFAULT,
    commutator_defect,
    ell,
    heat_identity_report,
    leading_polar_coefficient,
)
from .integrability import DiffSystem, diag_example_conditions, solve_single
from .orbit import UnsupportedOrbit, orbit_reduce, q_dispersion
from .prolong import JetRing, commutation_check, sigma_on_jet
from .qfield import Q, RatX, X
from .rank1 import Verdict, classify, theta_certificate, verify_solution_window
from .telescope import mu_constant_oracle, rational_telescope
from .theta import (
    functional_equation_residual,
    theta_window_positive_convention,
    verify_functional_equation,
    verify_heat_equation,
)

__all__ = ["ParseError", "parse_ratx", "parse_matrix", "run", "main"]

THETA_NOTE = (
    "theta_q(x) = sum_n q^(-n(n-1)/2) x^n; with exponent +n(n-1)/2 the "
    "functional equation theta_q(qx) = qx theta_q(x) fails"
)


# -- expression parser ------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "sym", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], i))
            i = j
        elif ch in "qx":
            tokens.append(_Token("sym", ch, i))
            i += 1
        elif ch in "+-*/^()":
            tokens.append(_Token("op", ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent; ``-x^2`` is ``-(x^2)`` and ``a/b/c`` is ``(a/b)/c``."""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def take(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.take(text):
            raise ParseError(f"expected {text!r}", self.tok.pos)

    def parse(self) -> RatX:
        if self.tok.kind == "end":
            raise ParseError("empty expression", 0)
        value = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return value

    def expr(self) -> RatX:
        value = self.term()
        while True:
            if self.take("+"):
                value = value + self.term()
            elif self.take("-"):
                value = value - self.term()
            else:
                return value

    def term(self) -> RatX:
        value = self.unary()
        while True:
            if self.take("*"):
                value = value * self.unary()
            elif self.tok.kind == "op" and self.tok.text == "/":
                pos = self.tok.pos
                self.i += 1
                divisor = self.unary()
                if not divisor:
                    raise ParseError("division by zero", pos)
                value = value / divisor
            else:
                return value

    def unary(self) -> RatX:
        if self.take("-"):
            return -self.unary()
        if self.take("+"):
            return self.unary()
        return self.power()

    def power(self) -> RatX:
        base = self.atom()
        if self.tok.kind == "op" and self.tok.text == "^":
            pos = self.tok.pos
            self.i += 1
            k = self.exponent()
            if k < 0 and not base:
                raise ParseError("division by zero", pos)
            return base**k
        return base

    def exponent(self) -> int:
        if self.take("("):
            k = self.exponent()
            self.expect(")")
            return k
        sign = 1
        while self.tok.kind == "op" and self.tok.text in "+-":
            if self.tok.text == "-":
                sign = -sign
            self.i += 1
        if self.tok.kind != "int":
            raise ParseError("expected an integer exponent", self.tok.pos)
        k = int(self.tok.text)
        self.i += 1
        return sign * k

    def atom(self) -> RatX:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return RatX(int(tok.text))
        if tok.kind == "sym":
            self.i += 1
            return Q if tok.text == "q" else X
        if self.take("("):
            value = self.expr()
            self.expect(")")
            return value
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"unexpected {what}", tok.pos)


def parse_ratx(text: str) -> RatX:
    """Parse an expression in q and x into an exact :class:`RatX`."""
    return _Parser(text).parse()


def parse_matrix(text: str) -> tuple[tuple[RatX, ...], ...]:
    """``"a, b; c, d"`` -> rows; a single expression gives a 1x1 matrix."""
    rows = []
    offset = 0
    for row_text in text.split(";"):
        row = []
        for entry in row_text.split(","):
            try:
                row.append(parse_ratx(entry))
            except ParseError as exc:
                raise ParseError(str(exc).rsplit(" at position", 1)[0], offset + exc.position) from None
            offset += len(entry) + 1
        rows.append(tuple(row))
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("matrix must be square")
    return tuple(rows)


# -- report helpers ----------------------------------------------------------------


class UsageError(Exception):
    pass


def _s(value) -> str | None:
    return None if value is None else str(value)


def _matrix_str(M) -> list[list[str]]:
    return [[str(e) for e in row] for row in M]


def _factors(factors) -> list[dict]:
    return [{"factor": str(p), "exponent": e} for p, e in factors]


def _report(command: str, input_, anchor: str, **fields) -> dict:
    rep = {"command": command, "input": input_, "anchor": anchor, "version": __version__, "warnings": []}
    rep.update(fields)
    return rep


# -- commands ---------------------------------------------------------------------


def _cmd_classify(args) -> tuple[dict, int]:
    a = parse_ratx(args.expr)
    if not a:
        raise UsageError("the multiplier a must be nonzero")
    v = classify(a)
    rep = _report(
        "classify", str(a), "rank-1 criterion: a = mu x^r g(qx)/g(x)",
        verdict=str(v.kind),
    )
    if v.kind is Verdict.UNSUPPORTED:
        rep["warnings"].append(f"UNSUPPORTED orbit case: {v.reason}")
        return rep, 2
    rep.update(mu=_s(v.mu), r=v.r)
    if v.is_algebraic:
        rep.update(
            g=str(v.g),
            delta_constant=v.delta_constant,
            q_exponent=v.q_exponent,
            statement=(
                "solutions satisfy a nontrivial delta_x-relation over Q(q)(x) "
                "and a nontrivial partial2-relation over C_E(x, ell_q)"
            ),
        )
        if v.q_exponent is not None:
            cert = theta_certificate(v.mu, v.r, v.g)
            ok = verify_solution_window(a, cert, args.window)
            if not ok:
                raise AssertionError("theta certificate failed its window check")
            rep["certificate"] = {
                "solution": str(cert),
                "general_form": cert.general_form(),
                "window": args.window,
                "verified": ok,
            }
            rep["warnings"].append(THETA_NOTE)
        else:
            rep["certificate"] = None
    else:
        rep.update(
            obstruction=_factors(v.obstruction),
            statement="solutions satisfy no nontrivial algebraic delta_x-relation over Q(q)(x)",
        )
    return rep, 0


def _cmd_telescope(args) -> tuple[dict, int]:
    g = parse_ratx(args.expr)
    res = rational_telescope(g)
    rep = _report("telescope", str(g), "rational q-coboundary: f(qx) - f(x) = g(x)", found=res.found)
    if res.found:
        if not res.check():
            raise AssertionError("telescoper result failed to re-verify")
        rep.update(f=str(res.f), obstruction=None, verified=True)
    else:
        rep.update(f=None, obstruction=res.obstruction, detail=res.detail,
                   orbit_reps=[str(p) for p in res.orbit_reps])
    return rep, 0


def _cmd_dispersion(args) -> tuple[dict, int]:
    P, Qp = parse_ratx(args.p), parse_ratx(args.q)
    try:
        disp = q_dispersion(P, Qp)
    except UnsupportedOrbit as exc:
        rep = _report("dispersion", [str(P), str(Qp)], "q-dispersion of two polynomials")
        rep["warnings"].append(f"UNSUPPORTED orbit case: {exc}")
        return rep, 2
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = _report(
        "dispersion", [str(P), str(Qp)], "q-dispersion of two polynomials",
        shifts=sorted(disp),
        statement="n is listed iff Q vanishes at q^n times a root of P",
    )
    return rep, 0


def _cmd_orbit_reduce(args) -> tuple[dict, int]:
    a = parse_ratx(args.expr)
    if not a:
        raise UsageError("cannot reduce zero")
    try:
        red = orbit_reduce(a)
    except UnsupportedOrbit as exc:
        rep = _report("orbit-reduce", str(a), "orbit-disjoint normal form a = atilde f(qx)/f(x)")
        rep["warnings"].append(f"UNSUPPORTED orbit case: {exc}")
        return rep, 2
    if red.atilde * red.f.sigma_q() / red.f != a:
        raise AssertionError("orbit reduction failed to re-verify")
    rep = _report(
        "orbit-reduce", str(a), "orbit-disjoint normal form a = atilde f(qx)/f(x)",
        atilde=str(red.atilde), f=str(red.f), mu=str(red.mu), r=red.r,
        factors=_factors(red.factors), monomial=red.is_monomial,
    )
    return rep, 0


def _cmd_integrable(args) -> tuple[dict, int]:
    if args.diag:
        if args.lam is None or args.eta is None:
            raise UsageError("--diag needs --lambda and --eta")
        lam, eta = parse_ratx(args.lam), parse_ratx(args.eta)
        try:
            dr = diag_example_conditions(
                lam, eta,
                denom=parse_ratx(args.denom) if args.denom else None,
                degbound=args.degbound,
                ell_degree=1 if args.ell_degree is None else args.ell_degree,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rep = _report(
            "integrable", {"lambda": str(lam), "eta": str(eta)},
            "integrability of [[lambda, eta], [0, lambda]] for (delta_x, partial2)",
            found=dr.solvable, s=dr.s, r=dr.r,
            ansatz={"denom": str(dr.denom), "degbound": dr.degbound, "ell_degree": dr.ell_degree,
                    "q_range": list(dr.q_range)},
            alpha=_s(dr.alpha), beta=_s(dr.beta),
            conditions=[{"name": b.name, "statement": b.statement, "holds": b.holds} for b in dr.conditions],
            plus_sign_variant_holds=dr.plus_sign_variant_holds,
        )
        rep["warnings"].extend(dr.notes)
        return rep, 0
    if args.matrix is None:
        raise UsageError("integrable needs --matrix or --diag")
    try:
        system = DiffSystem(parse_matrix(args.matrix))
        cert = solve_single(
            system, args.deriv,
            denom=parse_ratx(args.denom) if args.denom else None,
            degbound=args.degbound, ell_degree=args.ell_degree,
        )
    except ParseError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = _report(
        "integrable", _matrix_str(system.A),
        f"integrability of sigma(Y) = AY with a {args.deriv}-system: sigma(B)A = AB + {args.deriv}(A)",
        deriv=args.deriv, found=cert is not None,
    )
    if cert is None:
        rep.update(B=None, statement="no B exists within the ansatz")
        rep["warnings"].append("a negative answer is relative to the ansatz, not a proof of non-integrability")
    else:
        if not cert.verify():
            raise AssertionError("integrability certificate failed to re-verify")
        rep.update(
            B=_matrix_str(cert.B),
            ansatz={"denom": str(cert.denom), "degbound": cert.degbound, "ell_degree": cert.ell_degree},
            statement=f"the system is {args.deriv}-integrable",
        )
    return rep, 0


def _cmd_theta_verify(args) -> tuple[dict, int]:
    N = args.window
    if N < 1:
        raise UsageError("--window must be at least 1")
    functional = verify_functional_equation(N)
    heat = verify_heat_equation(N)
    positive = functional_equation_residual(theta_window_positive_convention(N)).is_zero()
    rep = _report(
        "theta-verify", {"window": N},
        "theta_q(qx) = qx theta_q(x) and 2 delta_q theta_q = -delta_x^2 theta_q + delta_x theta_q",
        functional_eq=functional, heat_eq=heat, positive_convention_functional_eq=positive,
    )
    rep["warnings"].append(THETA_NOTE)
    return rep, 0


def _cmd_ell_verify(args) -> tuple[dict, int]:
    jmax = args.jmax
    if jmax < 0:
        raise UsageError("--jmax must be non-negative")
    heat = heat_identity_report()
    checks = [leading_polar_coefficient(j, j_max=jmax) for j in range(jmax + 1)]
    oracle = mu_constant_oracle(Q)
    sample = ell() ** 2 * X + ell() * Q
    rep = _report(
        "ell-verify", {"jmax": jmax},
        "partial2(qx)/(qx) = ell + 1 = sigma(u) - u, and the leading polar term of partial2^j",
        heat_identity={
            "log_derivative": str(heat["log_derivative"]),
            "telescoped": str(heat["telescoped"]),
            "holds": heat["log_derivative_ok"] and heat["telescope_ok"],
        },
        polar=[{"j": c.j, "order": c.order, "leading": str(c.leading), "expected": str(c.expected),
                "matches": c.matches} for c in checks],
        mu_constant={
            "mu": "q",
            "target": str(oracle["target"]),
            "full_holds": oracle["full"]["holds"],
            "halved_holds": oracle["halved"]["holds"],
        },
        commutator_ok=not commutator_defect(sample),
    )
    if oracle["halved"]["holds"] != oracle["full"]["holds"]:
        rep["warnings"].append("u = c*ell needs c = delta_q(mu)/mu; the halved constant fails")
    return rep, 0


def _cmd_prolong_check(args) -> tuple[dict, int]:
    if args.order < 0:
        raise UsageError("--order must be non-negative")
    try:
        A = parse_matrix(args.matrix)
        ring = JetRing(A, args.order)
    except ParseError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = commutation_check(ring, args.order)
    expansions = []
    for alpha in ring.multi_indices(args.order):
        M = sigma_on_jet(ring, alpha)
        expansions.append({"alpha": list(alpha), "sigma": _matrix_str(M)})
    rep = _report(
        "prolong-check", {"matrix": _matrix_str(A), "order": args.order},
        "sigma on jet variables: sigma(d^alpha X) = sum binom(alpha, beta) d^beta(A) d^(alpha-beta)(X)",
        commutation=ok, sigma_on_jets=expansions,
    )
    return rep, 0


# -- dispatch -------------------------------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="qdalg", description="Exact q-difference algebra checks.")
    parser.add_argument("--version", action="version", version=f"qdalg {__version__}")
    fmt = _ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "text"), default="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("classify", parents=[fmt], help="rank-1 differential algebraicity of y(qx) = a y(x)")
    p.add_argument("expr")
    p.add_argument("--window", type=int, default=8)
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("telescope", parents=[fmt], help="solve f(qx) - f(x) = g in Q(q)(x)")
    p.add_argument("expr")
    p.set_defaults(handler=_cmd_telescope)

    p = sub.add_parser("dispersion", parents=[fmt], help="q-dispersion of two polynomials")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(handler=_cmd_dispersion)

    p = sub.add_parser("orbit-reduce", parents=[fmt], help="orbit-disjoint normal form of a")
    p.add_argument("expr")
    p.set_defaults(handler=_cmd_orbit_reduce)

    p = sub.add_parser("integrable", parents=[fmt], help="search an integrability certificate")
    p.add_argument("--matrix")
    p.add_argument("--deriv", choices=("delta_x", "partial2"), default="delta_x")
    p.add_argument("--denom")
    p.add_argument("--degbound", type=int)
    p.add_argument("--ell-degree", type=int)
    p.add_argument("--diag", action="store_true", help="the [[lambda, eta], [0, lambda]] family")
    p.add_argument("--lambda", dest="lam")
    p.add_argument("--eta")
    p.set_defaults(handler=_cmd_integrable)

    p = sub.add_parser("theta-verify", parents=[fmt], help="theta functional and heat equations")
    p.add_argument("--window", type=int, default=8)
    p.set_defaults(handler=_cmd_theta_verify)

    p = sub.add_parser("ell-verify", parents=[fmt], help="identities in the formal ell-ring")
    p.add_argument("--jmax", type=int, default=J_MAX_DEFAULT)
    p.set_defaults(handler=_cmd_ell_verify)

    p = sub.add_parser("prolong-check", parents=[fmt], help="sigma/derivation commutation on jets")
    p.add_argument("--matrix", required=True)
    p.add_argument("--order", type=int, default=2)
    p.set_defaults(handler=_cmd_prolong_check)
    return parser


def _text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(item, ensure_ascii=False)}")
    return lines


def serialize(report: dict, fmt: str = "json") -> str:
    if fmt == "text":
        head = [report["statement"]] if report.get("statement") else []
        return "\n".join(head + _text(report)) + "\n"
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run(argv: list[str] | None = None) -> tuple[int, str, str]:
    """Run one command; returns ``(exit_code, stdout, stderr)``."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", ""
    try:
        report, code = args.handler(args)
    except ParseError as exc:
        return 1, "", f"qdalg: parse error: {exc}\n"
    except (UsageError, ZeroDivisionError) as exc:
        return 1, "", f"qdalg: error: {exc}\n"
    return code, serialize(report, args.format), ""


def main(argv: list[str] | None = None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
