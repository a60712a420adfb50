"""Differential algebraicity of solutions of ``y(qx) = a(x) y(x)``.

A solution is differentially algebraic (for ``delta_x`` or for the
sigma-compatible derivation ``ell*delta_x + delta_q``) exactly when

    a = mu * x**r * g(qx) / g(x),   mu in Q(q), r in Z, g in Q(q)(x).

After orbit reduction this is a syntactic test: the reduced ``atilde`` must be
the bare monomial ``mu * x**r``.  When it is, a solution is

    theta(mu x / q**r) / theta(x) * theta(x)**r * g(x),

which for ``mu = q**s`` collapses to ``x**(s - r) * theta(x)**r * g(x)`` up to a
constant in Q(q).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .orbit import OrbitReduction, UnsupportedOrbit, orbit_reduce
from .qfield import ONE, PolyX, QRat, RatX, X, q_power, q_power_test
from .theta import LaurentWindow, WindowError, theta_window

__all__ = [
    "Verdict",
    "Rank1Verdict",
    "ThetaCertificate",
    "classify",
    "theta_certificate",
    "verify_solution_window",
]


class Verdict(str, enum.Enum):
    DIFFERENTIALLY_ALGEBRAIC = "DifferentiallyAlgebraic"
    HYPERTRANSCENDENT = "Hypertranscendent"
    UNSUPPORTED = "Unsupported"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Rank1Verdict:
    kind: Verdict
    a: RatX
    mu: QRat | None = None
    r: int | None = None
    g: RatX | None = None
    obstruction: tuple[tuple[PolyX, int], ...] = ()
    delta_constant: bool | None = None
    q_exponent: int | None = None
    reduction: OrbitReduction | None = None
    reason: str = ""

    @property
    def is_algebraic(self) -> bool:
        return self.kind is Verdict.DIFFERENTIALLY_ALGEBRAIC

    def check(self) -> bool:
        """Re-verify ``a == mu x^r sigma_q(g)/g`` for an algebraic verdict."""
        if not self.is_algebraic:
            return False
        return self.a == self.mu * X**self.r * self.g.sigma_q() / self.g


def classify(a: RatX) -> Rank1Verdict:
    """Decide whether solutions of ``y(qx) = a y(x)`` are differentially algebraic."""
    a = RatX(a)
    if not a:
        raise ValueError("the equation y(qx) = 0 * y(x) is degenerate")
    try:
        red = orbit_reduce(a)
    except UnsupportedOrbit as exc:
        return Rank1Verdict(kind=Verdict.UNSUPPORTED, a=a, reason=str(exc))
    if red.is_monomial:
        n = q_power_test(red.mu)
        verdict = Rank1Verdict(
            kind=Verdict.DIFFERENTIALLY_ALGEBRAIC,
            a=a,
            mu=red.mu,
            r=red.r,
            g=red.f,
            delta_constant=n is not None,
            q_exponent=n,
            reduction=red,
        )
        assert verdict.check(), "certificate failed to re-verify"
        return verdict
    return Rank1Verdict(
        kind=Verdict.HYPERTRANSCENDENT,
        a=a,
        mu=red.mu,
        r=red.r,
        obstruction=red.factors,
        reduction=red,
    )


@dataclass(frozen=True)
class ThetaCertificate:
    """``x**x_power * theta(x)**theta_power * g(x)``.

    The unspecialised quotient ``theta(mu x/q^r)/theta(x) * theta(x)^r * g``
    equals ``general_constant`` times this expression.
    """

    x_power: int
    theta_power: int
    g: RatX
    s: int
    r: int
    general_constant: QRat = ONE

    def general_form(self) -> str:
        return f"theta_q(q^{self.s}*x/q^{self.r})/theta_q(x) * theta_q(x)^{self.r} * ({self.g})"

    def __str__(self):
        parts = []
        if self.x_power:
            parts.append("x" if self.x_power == 1 else f"x^{self.x_power}")
        if self.theta_power:
            parts.append("theta_q(x)" if self.theta_power == 1 else f"theta_q(x)^{self.theta_power}")
        if self.g != ONE:
            parts.append(f"({self.g})")
        return "*".join(parts) or "1"

    def multiplier(self) -> RatX:
        """``y(qx)/y(x)`` implied by the functional equation of theta."""
        return q_power(self.x_power) * (q_power(1) * X) ** self.theta_power * self.g.sigma_q() / self.g


def theta_certificate(mu: QRat, r: int, g: RatX = ONE) -> ThetaCertificate:
    """Closed-form solution of ``y(qx) = mu x^r g(qx)/g(x) y(x)`` for ``mu = q**s``.

    Uses ``theta(q**m x) = q**(m(m+1)/2) x**m theta(x)`` with ``m = s - r``.
    """
    s = q_power_test(mu)
    if s is None:
        raise ValueError(f"mu = {mu} is not a power of q; no theta-quotient certificate")
    m = s - r
    return ThetaCertificate(
        x_power=m,
        theta_power=r,
        g=RatX(g),
        s=s,
        r=r,
        general_constant=q_power(m * (m + 1) // 2),
    )


def verify_solution_window(a: RatX, cert: ThetaCertificate, N: int) -> bool:
    """Check ``y(qx) == a(x) y(x)`` for the certificate on a theta window.

    The constant and the power of x cancel from both sides; what remains is
    ``G_num * sigma_q(theta)**m == G_den * theta**m`` with
    ``G = q**k sigma_q(g) / (a g)``.  With ``m = 0`` this is an exact identity
    in Q(q)(x).  Otherwise ``theta**(|m|-1)`` is cancelled using
    ``sigma_q(theta) = qx theta`` and a single theta window is compared.
    """
    a = RatX(a)
    if N < 1:
        raise WindowError("window size must be at least 1")
    G = q_power(cert.x_power) * cert.g.sigma_q() / (a * cert.g)
    gn, gd = G.numerator(), G.denominator()
    m = cert.theta_power
    if m == 0:
        return gn == gd
    qx = q_power(1) * X
    theta = theta_window(N)
    if m > 0:
        left = theta.sigma_q().mul_poly(gn * qx ** (m - 1))
        right = theta.mul_poly(gd)
    else:
        left = theta.mul_poly(gn)
        right = theta.sigma_q().mul_poly(gd * qx ** (-m - 1))
    try:
        diff: LaurentWindow = left - right
    except WindowError as exc:
        raise WindowError(f"window N={N} too small to compare the certificate") from exc
    return diff.is_zero()
