"""Truncated two-sided series over Q(q) and the Jacobi theta identities.

A :class:`LaurentWindow` stores only coefficients that are known exactly, so
its ``lo..hi`` range *is* its validity range.  Operators that lose
information at the edges (multiplication by a polynomial, shifts) shrink or
move the range; binary operations work on the intersection.

Theta is taken with the convention ``coeff(n) = q**(-n(n-1)/2)``; with the
opposite sign of the exponent the functional equation ``theta(qx) = qx theta(x)``
does not hold, see :func:`theta_window_positive_convention`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .qfield import ZERO, QRat, RatX, X, q_power

__all__ = [
    "LaurentWindow",
    "WindowError",
    "theta_window",
    "theta_window_positive_convention",
    "window_ops",
    "functional_equation_residual",
    "heat_equation_residual",
    "verify_functional_equation",
    "verify_heat_equation",
]


class WindowError(ValueError):
    """Raised when an operation leaves no valid coefficient."""


@dataclass(frozen=True)
class LaurentWindow:
    lo: int
    hi: int
    coeffs: tuple[QRat, ...]

    def __post_init__(self):
        if self.hi < self.lo:
            raise WindowError(f"empty window [{self.lo}, {self.hi}]")
        if len(self.coeffs) != self.hi - self.lo + 1:
            raise ValueError("coefficient count does not match the window")

    @classmethod
    def from_function(cls, lo: int, hi: int, fn) -> "LaurentWindow":
        return cls(lo, hi, tuple(RatX(fn(n)) for n in range(lo, hi + 1)))

    def coeff(self, n: int) -> QRat:
        if not self.lo <= n <= self.hi:
            raise WindowError(f"index {n} outside valid window [{self.lo}, {self.hi}]")
        return self.coeffs[n - self.lo]

    def indices(self) -> range:
        return range(self.lo, self.hi + 1)

    def items(self):
        return zip(self.indices(), self.coeffs)

    def _map(self, fn) -> "LaurentWindow":
        return LaurentWindow(self.lo, self.hi, tuple(fn(n, c) for n, c in self.items()))

    # unary operators keep the window
    def sigma_q(self) -> "LaurentWindow":
        return self._map(lambda n, c: c * q_power(n))

    def delta_x(self) -> "LaurentWindow":
        return self._map(lambda n, c: c * n)

    def delta_q(self) -> "LaurentWindow":
        return self._map(lambda n, c: c.delta_q())

    def scale(self, c) -> "LaurentWindow":
        c = RatX(c)
        if not c.is_constant:
            raise ValueError("scale needs an element of Q(q); use mul_poly for x-dependence")
        return self._map(lambda n, v: v * c)

    def mul_by_qx(self) -> "LaurentWindow":
        return LaurentWindow(self.lo + 1, self.hi + 1, tuple(c * q_power(1) for c in self.coeffs))

    def mul_x_power(self, k: int) -> "LaurentWindow":
        return LaurentWindow(self.lo + k, self.hi + k, self.coeffs)

    def mul_poly(self, p: RatX) -> "LaurentWindow":
        """Multiply by a Laurent polynomial in x over Q(q).

        For ``p = sum_{plo..phi} p_i x**i`` the product is exact only on
        ``[lo + phi, hi + plo]``.
        """
        terms = _laurent_terms(p)
        if not terms:
            raise WindowError("multiplication by zero leaves no information")
        plo, phi = min(terms), max(terms)
        lo, hi = self.lo + phi, self.hi + plo
        if hi < lo:
            raise WindowError("window too small for this multiplier")
        out = []
        for n in range(lo, hi + 1):
            s = ZERO
            for i, c in terms.items():
                s = s + c * self.coeffs[n - i - self.lo]
            out.append(s)
        return LaurentWindow(lo, hi, tuple(out))

    def _binary(self, other: "LaurentWindow", op) -> "LaurentWindow":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if hi < lo:
            raise WindowError("windows do not overlap")
        return LaurentWindow(lo, hi, tuple(op(self.coeff(n), other.coeff(n)) for n in range(lo, hi + 1)))

    def __add__(self, other: "LaurentWindow") -> "LaurentWindow":
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other: "LaurentWindow") -> "LaurentWindow":
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self) -> "LaurentWindow":
        return self._map(lambda n, c: -c)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def nonzero_indices(self) -> list[int]:
        return [n for n, c in self.items() if c]

    def replace(self, n: int, value) -> "LaurentWindow":
        cs = list(self.coeffs)
        cs[n - self.lo] = RatX(value)
        return LaurentWindow(self.lo, self.hi, tuple(cs))


def _laurent_terms(p: RatX) -> dict[int, QRat]:
    p = RatX(p)
    if len(p.den) != 1:
        raise ValueError(f"{p} is not a Laurent polynomial in x")
    (k, _), = p.den.keys()
    dconst = RatX.from_poly(p.den) / X**k
    return {i - k: c / dconst for i, c in p.numerator().coeffs().items()}


def window_ops(w: LaurentWindow, op: str, other=None) -> LaurentWindow:
    """Dispatch by name: sigma_q, delta_x, delta_q, mul_by_qx, add, sub, scale."""
    if op == "sigma_q":
        return w.sigma_q()
    if op == "delta_x":
        return w.delta_x()
    if op == "delta_q":
        return w.delta_q()
    if op == "mul_by_qx":
        return w.mul_by_qx()
    if op == "add":
        return w + other
    if op == "sub":
        return w - other
    if op == "scale":
        return w.scale(other)
    raise ValueError(f"unknown window operation {op!r}")


def theta_coefficient(n: int) -> QRat:
    return q_power(-(n * (n - 1) // 2))


def theta_window(N: int) -> LaurentWindow:
    """Coefficients ``q**(-n(n-1)/2)`` of theta_q on ``[-N, N]``."""
    if N < 1:
        raise ValueError("theta window needs N >= 1")
    return LaurentWindow.from_function(-N, N, theta_coefficient)


def theta_window_positive_convention(N: int) -> LaurentWindow:
    """The ``q**(+n(n-1)/2)`` variant, kept only to show it fails the functional equation."""
    if N < 1:
        raise ValueError("theta window needs N >= 1")
    return LaurentWindow.from_function(-N, N, lambda n: q_power(n * (n - 1) // 2))


def functional_equation_residual(w: LaurentWindow) -> LaurentWindow:
    """``sigma_q(w) - qx*w`` on the valid intersection."""
    return w.sigma_q() - w.mul_by_qx()


def heat_equation_residual(w: LaurentWindow) -> LaurentWindow:
    """``2 delta_q(w) + delta_x^2(w) - delta_x(w)``."""
    return w.delta_q().scale(2) + w.delta_x().delta_x() - w.delta_x()


def verify_functional_equation(N: int) -> bool:
    """theta(qx) == qx theta(x) coefficient-wise on ``[-N+1, N]``."""
    if N < 1:
        raise ValueError("need N >= 1")
    return functional_equation_residual(theta_window(N)).is_zero()


def verify_heat_equation(N: int) -> bool:
    """2 delta_q theta == -delta_x^2 theta + delta_x theta on ``[-N, N]``."""
    if N < 1:
        raise ValueError("need N >= 1")
    return heat_equation_residual(theta_window(N)).is_zero()
