"""First-order inhomogeneous q-difference equations ``f(qx) - f(x) = g(x)``.

Rational solutions are searched by splitting ``g`` into a Laurent polynomial
part (poles only at 0 and infinity) and a proper part whose poles are grouped
into q-orbit classes.  Each piece is solved separately; the Laurent part
telescopes term by term and each orbit class through a finite linear system
with a universal denominator built from the class.

The two elliptic identities ``sigma(u) - u = r*ell`` and
``sigma(u) - u = delta_q(mu)/mu`` are provided as explicit coboundaries in the
formal ring of :mod:`qdalg.ellring`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ellring import EllElem, ell, sigma
from .linalg import solve_linear
from .orbit import OrbitClass, orbit_classes, tail_normalize
from .qfield import ONE, ZERO, PolyX, QRat, RatX, X, poly_divmod, q_power

__all__ = [
    "TelescopeResult",
    "rational_telescope",
    "laurent_split",
    "ell_telescope_monomial",
    "ell_telescope_mu",
    "mu_constant_oracle",
]

CONSTANT_TERM = "constant-term"
POLAR_ORBIT = "polar-orbit"


@dataclass(frozen=True)
class TelescopeResult:
    g: RatX
    found: bool
    f: RatX | None = None
    obstruction: str | None = None  # CONSTANT_TERM or POLAR_ORBIT
    detail: str = ""
    orbit_reps: tuple[PolyX, ...] = field(default=())

    def check(self) -> bool:
        return self.found and self.f.sigma_q() - self.f == self.g


# -- decomposition -------------------------------------------------------------


def _series_head(num: RatX, den: RatX, k: int) -> list[QRat]:
    """First ``k`` power-series coefficients of ``num/den`` at x = 0 (den(0) != 0)."""
    nc = num.coeffs() if num else {}
    dc = den.coeffs()
    d0inv = dc[0].inverse()
    out: list[QRat] = []
    for i in range(k):
        s = nc.get(i, ZERO)
        for j in range(1, i + 1):
            if j in dc:
                s = s - dc[j] * out[i - j]
        out.append(s * d0inv)
    return out


def laurent_split(g: RatX) -> tuple[dict[int, QRat], RatX, PolyX]:
    """Write ``g = sum c_n x**n + B/D`` with ``D(0) == 1`` and ``deg B < deg D``.

    Returns the Laurent coefficients, ``B`` and ``D``.
    """
    g = RatX(g)
    if not g:
        return {}, ZERO, ONE
    k = max(-g.x_valuation(), 0)
    den = g.denominator() / X**k  # prime to x
    num = g.numerator()
    D = tail_normalize(den) if den.numerator().degree() > 0 else ONE
    num = num * (D / den)  # g = num / (x**k * D)
    laurent: dict[int, QRat] = {}
    if k:
        head = _series_head(num, D, k)
        s = RatX.from_coeffs({i: c for i, c in enumerate(head) if c}) if any(head) else ZERO
        for i, c in enumerate(head):
            if c:
                laurent[i - k] = c
        num = (num - s * D) / X**k
    quo, rem = poly_divmod(num, D)
    for i, c in quo.coeffs().items():
        laurent[i] = laurent.get(i, ZERO) + c
    laurent = {i: c for i, c in laurent.items() if c}
    return laurent, RatX(rem), D


def _class_denominator(cls: OrbitClass) -> RatX:
    out = ONE
    for shift, _, e in cls.members:
        out = out * cls.member_poly(shift) ** e
    return out


def _solve_poly_combination(columns: list[RatX], target: RatX) -> tuple[QRat, ...] | None:
    """Constants ``v`` in Q(q) with ``sum v_j columns_j == target`` (all polynomials)."""
    coeffs = [c.coeffs() if c else {} for c in columns]
    tc = target.coeffs() if target else {}
    degrees = sorted(set(tc).union(*coeffs))
    rows = [[c.get(d, ZERO) for c in coeffs] for d in degrees]
    sol = solve_linear(rows, [tc.get(d, ZERO) for d in degrees], ncols=len(columns))
    return sol.values


def _from_values(values, offset: int, count: int) -> RatX:
    return RatX.from_coeffs({j: values[offset + j] for j in range(count) if values[offset + j]})


def _split_by_class(B: RatX, D: RatX, classes: list[OrbitClass]) -> list[RatX]:
    """Partial fractions ``B/D = sum B_c / D_c`` with one term per orbit class."""
    dens = [_class_denominator(c) for c in classes]
    total = ONE
    for d in dens:
        total = total * d
    B = B * total / D  # constant rescaling: both are normalised products
    if len(classes) == 1:
        return [B / dens[0]]
    degs = [d.degree() for d in dens]
    offsets = [sum(degs[:i]) for i in range(len(degs))]
    columns = []
    for d, k in zip(dens, degs):
        cofactor = total / d
        columns += [cofactor * X**j for j in range(k)]
    values = _solve_poly_combination(columns, B)
    if values is None:
        raise ArithmeticError("partial fraction system is inconsistent")
    return [_from_values(values, o, k) / d for d, o, k in zip(dens, offsets, degs)]


def _universal_denominator(cls: OrbitClass) -> RatX:
    lo, hi = cls.span()
    e = max(abs(m[2]) for m in cls.members)
    u = ONE
    for n in range(lo + 1, hi + 1):
        u = u * cls.member_poly(n) ** e
    return u


def _solve_with_denominator(g: RatX, U: RatX) -> RatX | None:
    """``f = P/U`` with ``deg P < deg U`` and ``sigma(f) - f = g``, or None.

    Multiplied through the equation reads ``sigma(P) U - P sigma(U) = W`` with
    ``W = g U sigma(U)``.  For ``U(0) = 1`` the coefficient of ``x**k`` is
    ``sum_j (q**j - q**(k-j)) u_{k-j} p_j``: triangular with diagonal
    ``q**k - 1``, so every ``p_j`` is affine in the free value ``t = p_0`` and
    the rows above ``deg U`` pin ``t`` down.
    """
    deg = U.degree()
    if deg <= 0:
        return None
    sU = U.sigma_q()
    W = g * U * sU
    if not W.is_polynomial:
        return None
    u = U.coeffs()
    w = W.coeffs()
    qp = [q_power(j) for j in range(2 * deg + 1)]
    if w.get(0, ZERO) or max(w, default=0) >= 2 * deg:
        return None

    def row_sum(k: int, upto: int):
        a, b = ZERO, ZERO
        for j in range(max(0, k - deg), min(upto, k + 1)):
            c = u.get(k - j)
            if c:
                e = (qp[j] - qp[k - j]) * c
                a, b = a + e * pa[j], b + e * pb[j]
        return a, b

    pa, pb = [ONE], [ZERO]  # p_j = pa[j] * t + pb[j]
    for k in range(1, deg):
        a, b = row_sum(k, k)
        inv = (qp[k] - 1).inverse()
        pa.append(-a * inv)
        pb.append((w.get(k, ZERO) - b) * inv)
    t = None
    constraints = []
    for k in range(deg, 2 * deg):
        a, b = row_sum(k, deg)
        constraints.append((a, w.get(k, ZERO) - b))  # a * t == rhs
    for a, rhs in constraints:
        if a:
            t = rhs / a
            break
    if t is None:
        t = ZERO
    if any(a * t != rhs for a, rhs in constraints):
        return None
    P = RatX.from_coeffs({j: pa[j] * t + pb[j] for j in range(deg)})
    return P / U


# -- public API ----------------------------------------------------------------


def rational_telescope(g: RatX) -> TelescopeResult:
    """Solve ``f(qx) - f(x) = g`` in Q(q)(x), normalising the constant of ``f`` to 0."""
    g = RatX(g)
    laurent, B, D = laurent_split(g)
    if ZERO != laurent.get(0, ZERO):
        return TelescopeResult(
            g=g, found=False, obstruction=CONSTANT_TERM,
            detail=f"constant term {laurent[0]} cannot be a q-coboundary",
        )
    f = ZERO
    for n, c in laurent.items():
        f = f + c * X**n / (q_power(n) - 1)
    if B:
        classes = orbit_classes([(D, 1)])
        U = ONE
        for cls in classes:
            U = U * _universal_denominator(cls)
        proper = B / D
        fp = _solve_with_denominator(proper, U)
        if fp is not None:
            f = f + fp
        else:
            # locate the orbits responsible for the failure
            pieces = _split_by_class(B, D, classes)
            bad = [cls.rep_poly() for cls, gc in zip(classes, pieces)
                   if gc and _solve_with_denominator(gc, _universal_denominator(cls)) is None]
            reps = ", ".join(str(p) for p in bad)
            return TelescopeResult(
                g=g, found=False, obstruction=POLAR_ORBIT,
                detail=f"residue data on the q-orbit of {reps} does not cancel",
                orbit_reps=tuple(bad),
            )
    assert f.sigma_q() - f == g, "telescoper produced an unverified solution"
    return TelescopeResult(g=g, found=True, f=f)


def ell_telescope_monomial(r: int) -> EllElem:
    """``u = r (ell**2 - ell) / 2``, verified to satisfy ``sigma(u) - u = r ell``."""
    u = (ell() ** 2 - ell()) * RatX(r) / 2
    if sigma(u) - u != ell() * r:
        raise ArithmeticError("ell-telescoping identity failed")
    return u


def mu_constant_oracle(mu: QRat) -> dict:
    """Compare the candidate constants ``c`` in ``u = c*ell`` for ``delta_q(mu)/mu``.

    ``sigma(c ell) - c ell = c`` in the formal ring, so ``c`` must equal the target
    itself; the halved constant is reported as a separate, failing candidate.
    """
    mu = RatX(mu)
    if not mu:
        raise ValueError("mu must be nonzero")
    target = mu.delta_q() / mu
    report = {"target": target}
    for name, c in (("full", target), ("halved", target / 2)):
        u = ell() * c
        report[name] = {"constant": c, "holds": sigma(u) - u == EllElem.const(target)}
    return report


def ell_telescope_mu(mu: QRat) -> EllElem:
    """``u = (delta_q(mu)/mu) * ell`` with ``sigma(u) - u = delta_q(mu)/mu``."""
    rep = mu_constant_oracle(mu)
    if not rep["full"]["holds"]:
        raise ArithmeticError("ell-telescoping identity failed")
    return ell() * rep["target"]
