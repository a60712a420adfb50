"""A formal (sigma, partial2)-ring for ``C_E(x, ell)``.

``ell`` stands for the logarithmic derivative ``x theta'(x)/theta(x)``; it
satisfies ``sigma(ell) = ell + 1``.  Elliptic constants are never evaluated:
they are free symbols fixed by ``sigma``.  The two derivations are

* ``partial2 = ell * delta_x + delta_q`` (commutes with sigma),
* ``delta_x`` (commutes with sigma, but ``[delta_x, partial2] = d0 * delta_x``
  with ``d0 = delta_x(ell)``).

Every symbol is kept in the normal form ``partial2**a delta_x**b (base)``.
For the base ``ell`` the derivatives ``e_i = partial2**(i+1) ell`` and
``d_i = delta_x**(i+1) ell`` are the table symbols; mixed words are reduced
with the commutator, so ``delta_x`` of any symbol is computed, never guessed.
Other bases (formal poles, user symbols) declare how ``delta_x`` acts on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .qfield import ONE, RatX, X
from .sparse import SparsePoly

__all__ = [
    "Sym",
    "EllElem",
    "ActionNotClosed",
    "ELL",
    "ell",
    "e_sym",
    "d_sym",
    "declare_base",
    "pole_symbol",
    "theta_elliptic_part",
    "sigma",
    "partial2",
    "delta_x_partial",
    "commutator_defect",
    "verify_heat_identity",
    "heat_identity_report",
    "PolarCheck",
    "leading_polar_coefficient",
    "J_MAX_DEFAULT",
]

J_MAX_DEFAULT = 3


class ActionNotClosed(ValueError):
    """delta_x is not defined on a symbol of the table."""


@dataclass(frozen=True)
class Sym:
    """``partial2**d2 delta_x**dx`` applied to ``base``."""

    base: str
    d2: int = 0
    dx: int = 0

    @property
    def sort_key(self):
        return (self.base != "ell", self.base, self.d2 + self.dx, self.d2, self.dx)

    @property
    def is_ell(self) -> bool:
        return self.base == "ell" and self.d2 == 0 and self.dx == 0

    def __str__(self):
        if self.base == "ell":
            if self.d2 == 0 and self.dx == 0:
                return "l"
            if self.dx == 0:
                return f"e{self.d2 - 1}"
            if self.d2 == 0:
                return f"d{self.dx - 1}"
            return f"m{self.d2}_{self.dx}"
        name = self.base + "'" * self.d2
        return name if not self.dx else f"dx{self.dx}({name})"


# dx rule per base: "free" -> fresh symbols, "zero" -> x-constant, None -> undefined,
# or an EllElem giving delta_x(base) (then only d2-derivatives of the base exist).
_BASES: dict[str, object] = {"ell": "free"}


class EllElem(SparsePoly):
    """Polynomial in ``ell`` and table symbols with Q(q)(x) coefficients."""

    __slots__ = ()

    def _var_name(self, v) -> str:
        return str(v)

    def sigma(self, ell_shift=1) -> "EllElem":
        return sigma(self, ell_shift)

    def partial2(self) -> "EllElem":
        return partial2(self)

    def delta_x(self) -> "EllElem":
        return delta_x_partial(self)

    def subs_x(self, value: "EllElem") -> "EllElem":
        """Replace ``x`` by ``value``; every coefficient must be polynomial in x."""
        out = EllElem()
        for m, c in self.terms.items():
            if not c.is_polynomial:
                raise ValueError("subs_x needs coefficients polynomial in x")
            acc = EllElem()
            for k, ck in c.coeffs().items():
                acc = acc + value**k * ck
            out = out + acc * EllElem._raw({m: ONE})
        return out


def ell() -> EllElem:
    return EllElem.var(ELL)


ELL = Sym("ell")


def e_sym(i: int) -> EllElem:
    """``partial2**(i+1)(ell)``."""
    return EllElem.var(Sym("ell", i + 1, 0))


def d_sym(i: int) -> EllElem:
    """``delta_x**(i+1)(ell)``."""
    return EllElem.var(Sym("ell", 0, i + 1))


def declare_base(name: str, dx="free") -> EllElem:
    """Register a sigma-invariant base symbol and return it as an element.

    ``dx`` is ``"free"`` (fresh symbols for its x-derivatives), ``"zero"``
    (independent of x), ``None`` (delta_x undefined) or an :class:`EllElem`
    giving ``delta_x(name)``.
    """
    if name == "ell":
        raise ValueError("'ell' is reserved")
    if name in _BASES and _BASES[name] != dx and not (isinstance(dx, EllElem) and _BASES[name] == dx):
        raise ValueError(f"symbol {name!r} already declared with a different rule")
    _BASES[name] = dx
    _dx_sym.cache_clear()
    return EllElem.var(Sym(name))


def pole_symbol(name: str = "alpha") -> EllElem:
    """A formal nonzero constant of the algebraic closure of Q(q) (x-independent)."""
    return declare_base(name, "zero")


def theta_elliptic_part() -> EllElem:
    """Symbol ``E`` with ``partial2(theta)/theta = ell(ell+1)/2 + E``.

    Its x-derivative is forced by the commutator of the two derivations:
    ``delta_x(E) = e0 - d0/2``.
    """
    return declare_base("E", e_sym(0) - d_sym(0) / 2)


# -- operators ---------------------------------------------------------------------


def _as_elem(e) -> EllElem:
    if isinstance(e, EllElem):
        return e
    if isinstance(e, SparsePoly):
        return EllElem._raw(dict(e.terms))
    return EllElem.const(e)


def sigma(e, ell_shift=1) -> EllElem:
    """x -> qx, ell -> ell + ell_shift, symbols fixed."""
    e = _as_elem(e)
    shifted = EllElem.var(ELL) + ell_shift
    return e.hom(lambda c: c.sigma_q(), lambda v: shifted if v.is_ell else EllElem.var(v))


def _partial2_coeff(c: RatX) -> EllElem:
    out = EllElem.const(c.delta_q())
    dxc = c.delta_x()
    if dxc:
        out = out + EllElem.var(ELL) * dxc
    return out


def partial2(e) -> EllElem:
    e = _as_elem(e)
    return e.derivation(_partial2_coeff, lambda v: EllElem.var(Sym(v.base, v.d2 + 1, v.dx)))


@lru_cache(maxsize=None)
def _dx_sym(s: Sym) -> EllElem:
    rule = _BASES.get(s.base)
    if s.d2 == 0:
        if rule == "free":
            return EllElem.var(Sym(s.base, 0, s.dx + 1))
        if rule == "zero":
            return EllElem()
        if rule is None:
            raise ActionNotClosed(f"delta_x is not defined on {s}")
        if s.dx:
            raise ActionNotClosed(f"{s} is not in normal form for base {s.base!r}")
        return rule
    inner = Sym(s.base, s.d2 - 1, s.dx)
    d_inner = _dx_sym(inner)
    # delta_x partial2 = partial2 delta_x + d0 delta_x
    return partial2(d_inner) + d_sym(0) * d_inner


def delta_x_partial(e) -> EllElem:
    """``delta_x`` on the ring, with ``delta_x(ell) = d0``."""
    e = _as_elem(e)
    return e.derivation(lambda c: c.delta_x(), _dx_sym)


def commutator_defect(e) -> EllElem:
    """``[delta_x, partial2](e) - d0 * delta_x(e)``; identically zero in this ring."""
    e = _as_elem(e)
    dx_e = delta_x_partial(e)
    return delta_x_partial(partial2(e)) - partial2(dx_e) - d_sym(0) * dx_e


# -- heat identity ---------------------------------------------------------------


def heat_identity_report(u: EllElem | None = None, ell_shift=1) -> dict:
    """Compare ``partial2(qx)/(qx)``, ``ell + 1`` and ``sigma(u) - u``."""
    from .qfield import Q

    if u is None:
        u = (ell() ** 2 + ell()) / 2
    qx = Q * X
    log_derivative = partial2(EllElem.const(qx)) / qx
    target = ell() + 1
    telescoped = sigma(u, ell_shift) - u
    return {
        "log_derivative": log_derivative,
        "telescoped": telescoped,
        "log_derivative_ok": log_derivative == target,
        "telescope_ok": telescoped == target,
    }


def verify_heat_identity(u: EllElem | None = None, ell_shift=1) -> bool:
    """``partial2(qx)/(qx) == ell + 1 == sigma(u) - u`` with ``u = (ell^2 + ell)/2``."""
    rep = heat_identity_report(u, ell_shift)
    return rep["log_derivative_ok"] and rep["telescope_ok"]


# -- leading polar term ----------------------------------------------------------


@dataclass(frozen=True)
class PolarCheck:
    j: int
    order: int  # power of (x - alpha) in the denominator
    numerator: EllElem  # full numerator over (x - alpha)**order
    leading: EllElem  # numerator reduced modulo (x - alpha)
    expected: EllElem

    @property
    def matches(self) -> bool:
        return self.leading == self.expected


def leading_polar_coefficient(j: int, alpha: str = "alpha", l_i: int = 1,
                            j_max: int = J_MAX_DEFAULT) -> PolarCheck:
    """Leading polar coefficient of ``partial2**j (l_i (x ell - alpha')/(x - alpha))``.

    The iterate is carried as ``N_t / (x - alpha)**(t+1)`` with
    ``N_{t+1} = partial2(N_t) (x - alpha) - (t+1) N_t (x ell - alpha')``;
    the coefficient of the top pole is ``N_j`` evaluated at ``x = alpha``.
    Expected value: ``l_i (-1)**j j! (alpha ell - alpha')**(j+1)``.
    """
    if j < 0:
        raise ValueError("order must be non-negative")
    if j > j_max:
        raise ValueError(f"order {j} exceeds j_max = {j_max}")
    a = pole_symbol(alpha)
    a1 = partial2(a)
    x_minus_a = EllElem.const(X) - a
    dpole = partial2(x_minus_a)  # x ell - alpha'
    num = dpole * l_i
    for t in range(j):
        num = partial2(num) * x_minus_a - num * dpole * (t + 1)
    leading = num.subs_x(a)
    expected = (a * ell() - a1) ** (j + 1) * (l_i * (-1) ** j * math.factorial(j))
    return PolarCheck(j=j, order=j + 1, numerator=num, leading=leading, expected=expected)
