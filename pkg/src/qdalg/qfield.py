"""Exact arithmetic in Q(q)(x) with the operators sigma_q, delta_x and delta_q.

Elements are stored as a reduced pair ``num/den`` of integer polynomials in
``Z[x, q]`` (sympy sparse polynomials).  The pair is canonical: ``gcd(num, den)``
is a unit, ``den`` has positive leading coefficient and the zero element is
``0/1``.  Equality is therefore syntactic.

The three classes form a tower that mirrors the fields involved:

* :class:`QRat`  -- elements of Q(q) (no ``x`` anywhere),
* :class:`PolyX` -- elements of Q(q)[x] (``x`` only in the numerator),
* :class:`RatX`  -- general elements of Q(q)(x).

Every operation returns an instance of the narrowest class that fits, so
``isinstance(v, QRat)`` is the test "v is free of x".
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from sympy.polys.domains import ZZ
from sympy.polys.rings import PolyElement, ring

__all__ = [
    "RatX",
    "PolyX",
    "QRat",
    "X",
    "Q",
    "ONE",
    "ZERO",
    "sigma_q",
    "sigma_q_inverse",
    "delta_x",
    "delta_q",
    "q_power_test",
    "q_power",
    "resultant_x",
    "arith",
    "poly_divmod",
]

ZX, _x, _q = ring("x,q", ZZ)
_AUX, _ax, _ay, _aq = ring("x,y,q", ZZ)


def _monomial_map(p: PolyElement, fn) -> PolyElement:
    out = {}
    for (ex, eq), c in p.items():
        m = fn(ex, eq)
        out[m] = out.get(m, 0) + c
    return ZX.from_dict({m: c for m, c in out.items() if c})


def _qshift_pair(num: PolyElement, den: PolyElement, n: int):
    """Apply x -> q^n x to both parts, clearing negative q-powers jointly."""
    low = min(eq + n * ex for p in (num, den) for (ex, eq) in p.keys())
    low = min(low, 0)
    fn = lambda ex, eq: (ex, eq + n * ex - low)
    return _monomial_map(num, fn), _monomial_map(den, fn)


def _coerce_poly(v) -> tuple[PolyElement, PolyElement]:
    if isinstance(v, RatX):
        return v.num, v.den
    if isinstance(v, bool):
        raise TypeError("bool is not a field element")
    if isinstance(v, int):
        return ZX(v), ZX.one
    if isinstance(v, Rational):
        f = Fraction(v)
        return ZX(f.numerator), ZX(f.denominator)
    if isinstance(v, PolyElement):
        return ZX(v), ZX.one
    raise TypeError(f"cannot interpret {type(v).__name__} as an element of Q(q)(x)")


def _make(num: PolyElement, den: PolyElement, reduce: bool = True) -> "RatX":
    if not den:
        raise ZeroDivisionError("division by zero in Q(q)(x)")
    if not num:
        num, den = ZX.zero, ZX.one
    elif reduce:
        if den == ZX.one:
            pass
        else:
            num, den = num.cancel(den)
    if den.degree(0) > 0:
        cls = RatX
    elif num.degree(0) > 0:
        cls = PolyX
    else:
        cls = QRat
    obj = object.__new__(cls)
    obj.num = num
    obj.den = den
    obj._hash = None
    return obj


class RatX:
    """An element of Q(q)(x)."""

    __slots__ = ("num", "den", "_hash")

    def __new__(cls, num=0, den=1):
        n1, d1 = _coerce_poly(num)
        n2, d2 = _coerce_poly(den)
        if not n2:
            raise ZeroDivisionError("division by zero in Q(q)(x)")
        return _make(n1 * d2, d1 * n2)

    # -- construction helpers -------------------------------------------------
    @classmethod
    def from_poly(cls, num: PolyElement, den: PolyElement | None = None) -> "RatX":
        return _make(ZX(num), ZX.one if den is None else ZX(den))

    @classmethod
    def from_coeffs(cls, coeffs: dict[int, "RatX"]) -> "RatX":
        """Build ``sum_k coeffs[k] * x**k`` (negative ``k`` allowed)."""
        out = ZERO
        for k, c in coeffs.items():
            out = out + c * X**k
        return out

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            n, d = _coerce_poly(other)
        except TypeError:
            return NotImplemented
        if d == self.den:
            return _make(self.num + n, d)
        return _make(self.num * d + n * self.den, self.den * d)

    __radd__ = __add__

    def __neg__(self):
        return _make(-self.num, self.den, reduce=False)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            n, d = _coerce_poly(other)
        except TypeError:
            return NotImplemented
        if d == self.den:
            return _make(self.num - n, d)
        return _make(self.num * d - n * self.den, self.den * d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            n, d = _coerce_poly(other)
        except TypeError:
            return NotImplemented
        if d == ZX.one and self.den == ZX.one:
            return _make(self.num * n, ZX.one, reduce=False)
        return _make(self.num * n, self.den * d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            n, d = _coerce_poly(other)
        except TypeError:
            return NotImplemented
        if not n:
            raise ZeroDivisionError("division by zero in Q(q)(x)")
        return _make(self.num * d, self.den * n)

    def __rtruediv__(self, other):
        return RatX(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k >= 0:
            return _make(self.num**k, self.den**k, reduce=False)
        if not self.num:
            raise ZeroDivisionError("zero to a negative power")
        return _make(self.den ** (-k), self.num ** (-k))

    def inverse(self) -> "RatX":
        return self ** -1

    # -- comparison -----------------------------------------------------------
    def __eq__(self, other):
        try:
            n, d = _coerce_poly(other)
        except TypeError:
            return NotImplemented
        if not isinstance(other, RatX):
            other = _make(n, d)
            n, d = other.num, other.den
        return self.num == n and self.den == d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    # -- structure ------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.num

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree(0) <= 0

    @property
    def is_constant(self) -> bool:
        """True when the element lies in Q(q)."""
        return self.num.degree(0) <= 0 and self.den.degree(0) <= 0

    def numerator(self) -> "PolyX":
        return _make(self.num, ZX.one, reduce=False)

    def denominator(self) -> "PolyX":
        return _make(self.den, ZX.one, reduce=False)

    def x_valuation(self) -> int:
        """Order of vanishing at x = 0 (negative for a pole)."""
        if not self.num:
            raise ValueError("valuation of zero")
        return _xval(self.num) - _xval(self.den)

    # -- operators ------------------------------------------------------------
    def sigma_q(self, n: int = 1) -> "RatX":
        """``x -> q**n * x``."""
        if n == 0 or self.is_constant:
            return self
        return _make(*_qshift_pair(self.num, self.den, n))

    def delta_x(self) -> "RatX":
        return self._derive(0)

    def delta_q(self) -> "RatX":
        return self._derive(1)

    def _derive(self, idx: int) -> "RatX":
        def euler(p):
            return ZX.from_dict({m: c * m[idx] for m, c in p.items() if m[idx]})

        dn = euler(self.num)
        if self.den == ZX.one:
            return _make(dn, ZX.one, reduce=False)
        dd = euler(self.den)
        return _make(dn * self.den - self.num * dd, self.den**2)

    def subs_x(self, value: "RatX") -> "RatX":
        """Substitute ``x := value``."""
        return _horner(self.num, value) / _horner(self.den, value)

    # -- printing -------------------------------------------------------------
    def __str__(self):
        if self.den == ZX.one:
            return _format_poly(self.num)
        num, den = _format_poly(self.num), _format_poly(self.den)
        if len(self.num) > 1:
            num = f"({num})"
        if len(self.den) > 1 or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"{type(self).__name__}('{self}')"


class PolyX(RatX):
    """An element of Q(q)[x]."""

    __slots__ = ()

    def degree(self) -> int:
        return max(self.num.degree(0), 0) if self.num else -1

    def coeffs(self) -> dict[int, "QRat"]:
        """Map degree -> nonzero coefficient in Q(q)."""
        out: dict[int, PolyElement] = {}
        for (ex, eq), c in self.num.items():
            out[ex] = out.get(ex, ZX.zero) + ZX({(0, eq): c})
        return {k: _make(v, self.den) for k, v in sorted(out.items()) if v}

    def coeff(self, k: int) -> "QRat":
        return self.coeffs().get(k, ZERO)

    def leading_coeff(self) -> "QRat":
        cs = self.coeffs()
        return cs[max(cs)] if cs else ZERO

    def trailing_coeff(self) -> "QRat":
        cs = self.coeffs()
        return cs[min(cs)] if cs else ZERO


class QRat(PolyX):
    """An element of Q(q)."""

    __slots__ = ()


ZERO = _make(ZX.zero, ZX.one)
ONE = _make(ZX.one, ZX.one)
X = _make(_x, ZX.one)
Q = _make(_q, ZX.one)


def _xval(p: PolyElement) -> int:
    return min(ex for ex, _ in p.keys())


def _horner(p: PolyElement, value: RatX) -> RatX:
    by_deg: dict[int, PolyElement] = {}
    for (ex, eq), c in p.items():
        by_deg[ex] = by_deg.get(ex, ZX.zero) + ZX({(0, eq): c})
    out = ZERO
    for k in range(max(by_deg, default=0), -1, -1):
        out = out * value + _make(by_deg.get(k, ZX.zero), ZX.one, reduce=False)
    return out


def _format_monomial(c: int, ex: int, eq: int) -> str:
    parts = []
    if eq:
        parts.append("q" if eq == 1 else f"q^{eq}")
    if ex:
        parts.append("x" if ex == 1 else f"x^{ex}")
    body = "*".join(parts)
    if not body:
        return str(abs(c))
    if abs(c) == 1:
        return body
    return f"{abs(c)}*{body}"


def _format_poly(p: PolyElement) -> str:
    if not p:
        return "0"
    terms = sorted(p.items(), key=lambda t: (-t[0][0], -t[0][1]))
    out = []
    for i, ((ex, eq), c) in enumerate(terms):
        c = int(c)
        mono = _format_monomial(c, ex, eq)
        if i == 0:
            out.append(f"-{mono}" if c < 0 else mono)
        else:
            out.append(f" - {mono}" if c < 0 else f" + {mono}")
    return "".join(out)


# -- module-level operator API ---------------------------------------------------


def arith(a: RatX, b: RatX, op: str) -> RatX:
    """Apply one of ``+ - * /`` (also accepts the unicode minus/times/divide)."""
    if op in ("+",):
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operator {op!r}")


def sigma_q(a: RatX, n: int = 1) -> RatX:
    return RatX(a).sigma_q(n)


def sigma_q_inverse(a: RatX) -> RatX:
    return RatX(a).sigma_q(-1)


def delta_x(a: RatX) -> RatX:
    return RatX(a).delta_x()


def delta_q(a: RatX) -> RatX:
    return RatX(a).delta_q()


def q_power(n: int) -> QRat:
    """The element q**n (negative n allowed)."""
    return Q**n


def q_power_test(mu: RatX) -> int | None:
    """Return ``n`` with ``mu == q**n``, or ``None`` if mu is not a power of q."""
    mu = RatX(mu)
    if not mu:
        raise ZeroDivisionError("q_power_test of zero")
    if not mu.is_constant:
        return None
    if len(mu.num) != 1 or len(mu.den) != 1:
        return None
    (mn, cn), = mu.num.items()
    (md, cd), = mu.den.items()
    if cn != 1 or cd != 1:
        return None
    return mn[1] - md[1]


def resultant_x(P: RatX, Q_: RatX) -> dict[int, QRat]:
    """Resultant in ``x`` of ``P(x)`` and ``Q(y*x)`` as a polynomial in ``y``.

    The result is returned as ``{degree_in_y: coefficient}``; it vanishes at
    ``y = y0`` iff ``P(x)`` and ``Q(y0*x)`` share a root.  Both inputs must be
    nonzero polynomials in x; their Q(q)-content is irrelevant and dropped.
    """
    P, Q_ = RatX(P), RatX(Q_)
    if not P or not Q_:
        raise ValueError("resultant_x needs nonzero polynomials")
    if not (P.is_polynomial and Q_.is_polynomial):
        raise ValueError("resultant_x needs polynomials in x")
    p3 = _AUX.from_dict({(ex, 0, eq): c for (ex, eq), c in P.num.items()})
    q3 = _AUX.from_dict({(ex, ex, eq): c for (ex, eq), c in Q_.num.items()})
    if P.num.degree(0) <= 0 or Q_.num.degree(0) <= 0:
        # resultant with a constant is a power of that constant
        res = _AUX.one
    else:
        res = p3.resultant(q3)
    out: dict[int, PolyElement] = {}
    for mono, c in res.items():
        ey, eq = mono[-2:]
        out[ey] = out.get(ey, ZX.zero) + ZX({(0, eq): c})
    return {k: _make(v, ZX.one) for k, v in sorted(out.items()) if v}


def poly_divmod(a: RatX, b: RatX) -> tuple[PolyX, PolyX]:
    """Euclidean division in Q(q)[x]."""
    a, b = RatX(a), RatX(b)
    if not (a.is_polynomial and b.is_polynomial):
        raise ValueError("poly_divmod needs polynomials in x")
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    bc = b.coeffs()
    db = max(bc)
    lead_inv = bc[db].inverse()
    rem = dict(a.coeffs())
    quo: dict[int, RatX] = {}
    while rem and max(rem) >= db:
        k = max(rem)
        t = rem[k] * lead_inv
        quo[k - db] = t
        for j, c in bc.items():
            v = rem.get(j + k - db, ZERO) - t * c
            if v:
                rem[j + k - db] = v
            else:
                rem.pop(j + k - db, None)
    return RatX.from_coeffs(quo), RatX.from_coeffs(rem)
