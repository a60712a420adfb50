"""Certificates for compatible difference/differential systems.

A system ``sigma(Y) = A Y`` admits a compatible ``d(Y) = B Y`` exactly when

    sigma(B) A = A B + d(A)

(``sigma(B) = A B A^-1 + d(A) A^-1`` multiplied through by ``A``).  The search
is a semi-decision: ``B`` is taken from an ansatz ``(1/denom) * sum c x^k ell^e``
with unknown ``c`` in Q(q), and the equation becomes a linear system.

For the pair ``(delta_x, partial2)`` the triple system is

    sigma(B1) A = A B1 + delta_x(A)
    sigma(B2) A = A B2 + partial2(A)
    partial2(B1) + B1 B2 + d0 B1 = delta_x(B2) + B2 B1

with ``d0 = delta_x(ell)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ellring import (
    EllElem,
    d_sym,
    delta_x_partial,
    ell,
    partial2,
    sigma,
    theta_elliptic_part,
)
from .linalg import solve_affine
from .orbit import orbit_classes, split_monomial
from .qfield import ONE, ZERO, PolyX, QRat, RatX, X, q_power, q_power_test

__all__ = [
    "DiffSystem",
    "IntegrabilityCertificate",
    "TripleCertificate",
    "DiagReport",
    "default_ansatz",
    "solve_single",
    "single_residual",
    "triple_residuals",
    "check_triple",
    "theta_power_log_derivatives",
    "diag_example_conditions",
    "DERIVATIONS",
]

DERIVATIONS = ("delta_x", "partial2")

Matrix = tuple  # tuple[tuple[entry, ...], ...]


# -- small matrix toolkit ----------------------------------------------------------


def _elem(e) -> EllElem:
    return e if isinstance(e, EllElem) else EllElem.const(e)


def _matrix(rows) -> Matrix:
    return tuple(tuple(_elem(e) for e in row) for row in rows)


def _mul(A: Matrix, B: Matrix) -> Matrix:
    n, m, p = len(A), len(B), len(B[0])
    return tuple(
        tuple(sum((A[i][k] * B[k][j] for k in range(m)), EllElem()) for j in range(p))
        for i in range(n)
    )


def _add(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def _sub(A: Matrix, B: Matrix) -> Matrix:
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def _map(fn, A: Matrix) -> Matrix:
    return tuple(tuple(fn(e) for e in row) for row in A)


def _scale(c, A: Matrix) -> Matrix:
    return _map(lambda e: e * c, A)


def _is_zero(A: Matrix) -> bool:
    return all(not e for row in A for e in row)


def _apply(deriv: str, e: EllElem) -> EllElem:
    if deriv == "delta_x":
        return delta_x_partial(e)
    if deriv == "partial2":
        return partial2(e)
    raise ValueError(f"unknown derivation {deriv!r}; expected one of {DERIVATIONS}")


def _det(A) -> RatX:
    n = len(A)
    if n == 1:
        return A[0][0]
    total = ZERO
    for j in range(n):
        if not A[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _flat(A: Matrix) -> list[EllElem]:
    return [e for row in A for e in row]


# -- systems and certificates ----------------------------------------------------


@dataclass(frozen=True)
class DiffSystem:
    """``sigma(Y) = A Y`` with ``A`` in GL_nu(Q(q)(x))."""

    A: tuple[tuple[RatX, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(RatX(e) for e in row) for row in self.A)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("A must be a non-empty square matrix")
        object.__setattr__(self, "A", rows)
        if not _det(rows):
            raise ValueError("A is singular")

    @classmethod
    def scalar(cls, a) -> "DiffSystem":
        return cls(((RatX(a),),))

    @property
    def nu(self) -> int:
        return len(self.A)

    @property
    def det(self) -> RatX:
        return _det(self.A)

    def as_matrix(self) -> Matrix:
        return _matrix(self.A)


def single_residual(A: Matrix, B: Matrix, deriv: str, ell_shift=1) -> Matrix:
    """``sigma(B) A - A B - d(A)``."""
    A, B = _matrix(A), _matrix(B)
    sB = _map(lambda e: sigma(e, ell_shift), B)
    return _sub(_sub(_mul(sB, A), _mul(A, B)), _map(lambda e: _apply(deriv, e), A))


@dataclass(frozen=True)
class IntegrabilityCertificate:
    system: DiffSystem
    deriv: str
    B: Matrix
    denom: PolyX
    degbound: int
    ell_degree: int

    def __post_init__(self):
        if not self.verify():
            raise ArithmeticError("certificate does not satisfy the integrability equation")

    def verify(self) -> bool:
        return _is_zero(single_residual(self.system.as_matrix(), self.B, self.deriv))


def default_ansatz(system: DiffSystem) -> tuple[PolyX, int]:
    """Denominator and numerator degree bound used when none are supplied.

    The denominator multiplies every irreducible factor (prime to x) of the
    entries and of ``det A`` together with all its q-shifts inside the orbit
    span of the collected factors.
    """
    polys: list[tuple[RatX, int]] = []
    degs = [0]
    for e in [*(c for row in system.A for c in row), system.det]:
        if not e:
            continue
        for part in (e.numerator(), e.denominator()):
            degs.append(part.degree())
            stripped = part / X ** max(part.x_valuation(), 0)
            if stripped.degree() > 0:
                polys.append((stripped, 1))
    denom = ONE
    if polys:
        for cls in orbit_classes(polys):
            lo, hi = cls.span()
            for n in range(lo - 1, hi + 1):
                denom = denom * cls.member_poly(n)
    return denom, denom.degree() + max(degs) + 2


def _ansatz_matrix(values, nu: int, denom: RatX, degbound: int, ell_degree: int) -> Matrix:
    per = (degbound + 1) * (ell_degree + 1)
    inv = denom.inverse()
    rows = []
    for i in range(nu):
        row = []
        for j in range(nu):
            base = (i * nu + j) * per
            entry = EllElem()
            for k in range(degbound + 1):
                for e in range(ell_degree + 1):
                    c = values[base + k * (ell_degree + 1) + e]
                    if c:
                        entry = entry + ell() ** e * (c * X**k * inv)
            row.append(entry)
        rows.append(tuple(row))
    return tuple(rows)


def solve_single(
    system: DiffSystem,
    deriv: str = "delta_x",
    denom: RatX | None = None,
    degbound: int | None = None,
    ell_degree: int | None = None,
) -> IntegrabilityCertificate | None:
    """Search ``B`` with ``sigma(B) A = A B + d(A)`` inside the ansatz.

    ``ell_degree`` is the allowed degree in ``ell`` of the numerators (default
    0 for ``delta_x``, where the coefficients stay in Q(q)(x), and 2 for
    ``partial2``).  Returns None when no solution lies in the ansatz.
    """
    if deriv not in DERIVATIONS:
        raise ValueError(f"unknown derivation {deriv!r}; expected one of {DERIVATIONS}")
    d_denom, d_deg = default_ansatz(system)
    denom = d_denom if denom is None else PolyX(denom)
    if not denom:
        raise ValueError("ansatz denominator must be nonzero")
    degbound = d_deg if degbound is None else degbound
    if degbound < 0:
        raise ValueError("degree bound must be non-negative")
    if ell_degree is None:
        ell_degree = 0 if deriv == "delta_x" else 2
    nu = system.nu
    A = system.as_matrix()
    n = nu * nu * (degbound + 1) * (ell_degree + 1)

    def residual(values):
        return _flat(single_residual(A, _ansatz_matrix(values, nu, denom, degbound, ell_degree), deriv))

    sol = solve_affine(residual, n)
    if not sol.consistent:
        return None
    B = _ansatz_matrix(sol.values, nu, denom, degbound, ell_degree)
    return IntegrabilityCertificate(system, deriv, B, denom, degbound, ell_degree)


# -- the (delta_x, partial2) triple --------------------------------------------------


def triple_residuals(A, B1, B2, ell_shift=1) -> tuple[Matrix, Matrix, Matrix]:
    """Residuals of the three compatibility equations, multiplied through by ``A``."""
    A, B1, B2 = _matrix(A), _matrix(B1), _matrix(B2)
    r1 = single_residual(A, B1, "delta_x", ell_shift)
    r2 = single_residual(A, B2, "partial2", ell_shift)
    lhs = _add(_add(_map(partial2, B1), _mul(B1, B2)), _scale(d_sym(0), B1))
    rhs = _add(_map(delta_x_partial, B2), _mul(B2, B1))
    return r1, r2, _sub(lhs, rhs)


def check_triple(A, B1, B2) -> bool:
    return all(_is_zero(r) for r in triple_residuals(A, B1, B2))


@dataclass(frozen=True)
class TripleCertificate:
    A: Matrix
    B1: Matrix
    B2: Matrix

    def __post_init__(self):
        if not check_triple(self.A, self.B1, self.B2):
            raise ArithmeticError("triple certificate does not verify")


def theta_power_log_derivatives(r: int, s: int) -> tuple[EllElem, EllElem]:
    """``(delta_x y / y, partial2 y / y)`` for ``y = x**(s-r) theta(x)**r``.

    Uses ``partial2(theta)/theta = ell (ell + 1)/2 + E`` with the elliptic
    symbol ``E`` of :func:`qdalg.ellring.theta_elliptic_part`.
    """
    E = theta_elliptic_part()
    l = ell()
    b1 = l * r + (s - r)
    b2 = l * (s - r) + ((l * l + l) / 2 + E) * r
    return b1, b2


# -- the upper-triangular 2x2 example ----------------------------------------------


@dataclass(frozen=True)
class Condition:
    name: str
    statement: str
    holds: bool


@dataclass(frozen=True)
class DiagReport:
    s: int
    r: int
    eta: RatX
    solvable: bool
    alpha: EllElem | None = None
    beta: EllElem | None = None
    denom: PolyX | None = None
    degbound: int = 0
    ell_degree: int = 0
    q_range: tuple[int, int] = (0, 0)
    conditions: tuple[Condition, ...] = ()
    plus_sign_variant_holds: bool | None = None
    notes: tuple[str, ...] = field(default=())


def _offdiagonal_residuals(mu: QRat, r: int, eta: RatX, alpha: EllElem, beta: EllElem):
    """Top-right entries of the three matrix equations, as scalar conditions.

    With ``J(f) = sigma(f) - f`` and ``lambda = mu x**r`` they are

        delta_x(eta) - r eta - J(alpha) lambda
        delta_q(eta) - (delta_q(mu)/mu) eta - J(beta) lambda + ell J(alpha) lambda
        partial2(alpha) + d0 alpha - delta_x(beta)

    The last item of the result is the second condition with the opposite
    sign in front of ``ell J(alpha)``.
    """
    lam = mu * X**r
    l = ell()
    eta_e = EllElem.const(eta)
    jump_a = sigma(alpha) - alpha
    jump_b = sigma(beta) - beta
    dq_eta = EllElem.const(eta.delta_q()) - eta_e * (mu.delta_q() / mu)
    first = delta_x_partial(eta_e) - eta_e * r - jump_a * lam
    second = dq_eta - jump_b * lam + l * jump_a * lam
    third = partial2(alpha) + d_sym(0) * alpha - delta_x_partial(beta)
    flipped = dq_eta - (jump_b + l * jump_a) * lam
    return first, second, third, flipped


_CONDITIONS = (
    ("delta_x", "delta_x(eta) = r*eta + (sigma(alpha) - alpha)*lambda"),
    ("delta_q", "delta_q(eta) = (delta_q(mu)/mu)*eta + (sigma(beta) - beta - ell*(sigma(alpha) - alpha))*lambda"),
    ("mixed", "partial2(alpha) + delta_x(ell)*alpha = delta_x(beta)"),
)


def diag_example_conditions(
    lam: RatX,
    eta: RatX,
    denom: RatX | None = None,
    degbound: int | None = None,
    ell_degree: int = 1,
    q_range: tuple[int, int] = (-1, 2),
    q_denom: RatX | None = None,
) -> DiagReport:
    """Decide (within an ansatz) whether ``[[lam, eta], [0, lam]]`` has a triple certificate.

    ``lam`` must be ``q**s * x**r``.  The diagonal of ``B1``, ``B2`` is fixed to
    the scalar solution of :func:`theta_power_log_derivatives`; the off-diagonal entries
    ``alpha``, ``beta`` range over Q-combinations of
    ``q**i x**k ell**e / (denom * q_denom)`` with ``i`` in ``q_range``,
    ``k <= degbound`` and ``e <= ell_degree``.  The unknowns are rational
    numbers because ``partial2`` differentiates them in q.  ``q_denom``
    defaults to ``(q - 1)**2``.
    """
    lam, eta = RatX(lam), RatX(eta)
    mu, r, rest = split_monomial(lam)
    if rest != ONE:
        raise ValueError("lambda must be a monomial mu * x**r")
    s = q_power_test(mu)
    if s is None:
        raise ValueError(f"mu = {mu} is not a power of q")
    system = DiffSystem(((lam, eta), (ZERO, lam)))
    d_denom, d_deg = default_ansatz(system)
    denom = d_denom if denom is None else PolyX(denom)
    degbound = d_deg if degbound is None else degbound
    q_denom = (q_power(1) - 1) ** 2 if q_denom is None else RatX(q_denom)
    if not denom or not q_denom or not q_denom.is_constant:
        raise ValueError("ansatz denominators must be nonzero and q_denom free of x")
    qlo, qhi = q_range
    scale = (denom * q_denom).inverse()
    basis = [
        ell() ** e * (q_power(i) * X**k * scale)
        for k in range(degbound + 1)
        for i in range(qlo, qhi + 1)
        for e in range(ell_degree + 1)
    ]
    per = len(basis)

    def entry(values, offset):
        out = EllElem()
        for c, b in zip(values[offset:offset + per], basis):
            if c:
                out = out + b * c
        return out

    def residual(values):
        return list(_offdiagonal_residuals(mu, r, eta, entry(values, 0), entry(values, per))[:3])

    sol = solve_affine(residual, 2 * per, rational=True)
    common = dict(s=s, r=r, eta=eta, denom=denom, degbound=degbound,
                  ell_degree=ell_degree, q_range=q_range)
    if not sol.consistent:
        return DiagReport(solvable=False, **common)
    alpha, beta = entry(sol.values, 0), entry(sol.values, per)
    b1, b2 = theta_power_log_derivatives(r, s)
    zero = EllElem()
    # the certificate must satisfy the matrix equations themselves
    TripleCertificate(system.as_matrix(), ((b1, alpha), (zero, b1)), ((b2, beta), (zero, b2)))
    *conds, flipped = _offdiagonal_residuals(mu, r, eta, alpha, beta)
    conditions = tuple(Condition(n, txt, not c) for (n, txt), c in zip(_CONDITIONS, conds))
    notes = ()
    if flipped:
        notes = ("the second condition holds with -ell*(sigma(alpha)-alpha); "
                 "the +ell sign variant fails for this certificate",)
    return DiagReport(solvable=True, alpha=alpha, beta=beta, conditions=conditions,
                      plus_sign_variant_holds=not flipped, notes=notes, **common)
