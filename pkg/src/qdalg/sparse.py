"""Sparse commutative polynomials with Q(q)(x) coefficients.

Variables are arbitrary hashable objects exposing a ``sort_key`` attribute;
monomials are sorted tuples of ``(variable, exponent)``.  Both the elliptic
ring and the jet ring are built on this class.
"""

from __future__ import annotations

from typing import Callable, Iterable

from .qfield import ZERO, RatX

Monomial = tuple  # tuple[tuple[var, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: dict = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda t: t[0].sort_key))


class SparsePoly:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict | None = None):
        self.terms: dict[Monomial, RatX] = {}
        if terms:
            for m, c in terms.items():
                c = RatX(c)
                if c:
                    self.terms[m] = c
        self._hash = None

    # constructors ---------------------------------------------------------------
    @classmethod
    def _raw(cls, terms: dict):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c) -> "SparsePoly":
        return cls({(): c})

    @classmethod
    def var(cls, v, power: int = 1) -> "SparsePoly":
        return cls._raw({((v, power),): RatX(1)})

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        return type(self).const(other)

    # arithmetic -----------------------------------------------------------------
    def __add__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, ZERO) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return type(self)._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            try:
                c = RatX(other)
            except TypeError:
                return NotImplemented
            if not c:
                return type(self)._raw({})
            return type(self)._raw({m: v * c for m, v in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, ZERO) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return type(self)._raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = RatX(other)
        return self * c.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = type(self).const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # structure ------------------------------------------------------------------
    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def degree(self, v) -> int:
        return max((dict(m).get(v, 0) for m in self.terms), default=-1 if not self.terms else 0)

    def coeff(self, monomial: Monomial) -> RatX:
        return self.terms.get(tuple(monomial), ZERO)

    def constant_term(self) -> RatX:
        return self.terms.get((), ZERO)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def items(self):
        return self.terms.items()

    # maps -----------------------------------------------------------------------
    def map_coeffs(self, fn: Callable[[RatX], RatX]) -> "SparsePoly":
        return type(self)({m: fn(c) for m, c in self.terms.items()})

    def hom(self, coeff_fn: Callable[[RatX], RatX], var_fn: Callable) -> "SparsePoly":
        """Ring homomorphism determined by its action on coefficients and variables."""
        cls = type(self)
        cache: dict = {}
        out = cls._raw({})
        for m, c in self.terms.items():
            term = cls.const(coeff_fn(c))
            for v, e in m:
                if (v, e) not in cache:
                    cache[(v, e)] = cls._coerce(self, var_fn(v)) ** e
                term = term * cache[(v, e)]
            out = out + term
        return out

    def derivation(self, coeff_fn: Callable[[RatX], "SparsePoly | RatX"], var_fn: Callable) -> "SparsePoly":
        """Apply the derivation with the given values on coefficients and variables."""
        cls = type(self)
        cache: dict = {}
        out = cls._raw({})
        for m, c in self.terms.items():
            dc = coeff_fn(c)
            if dc:
                out = out + cls._coerce(self, dc) * cls._raw({m: RatX(1)})
            for i, (v, e) in enumerate(m):
                if v not in cache:
                    cache[v] = cls._coerce(self, var_fn(v))
                dv = cache[v]
                if not dv:
                    continue
                rest = m[:i] + (((v, e - 1),) if e > 1 else ()) + m[i + 1:]
                out = out + dv * cls._raw({rest: c * e})
        return out

    def subs(self, mapping: dict) -> "SparsePoly":
        return self.hom(lambda c: c, lambda v: mapping.get(v, type(self).var(v)))

    # printing -------------------------------------------------------------------
    def _var_name(self, v) -> str:
        return str(v)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(e for _, e in m), [(v.sort_key, -e) for v, e in m])):
            c = self.terms[m]
            mono = "*".join(self._var_name(v) + (f"^{e}" if e > 1 else "") for v, e in m)
            if not mono:
                alone = len(self.terms) == 1
                parts.append(str(c) if alone or (len(c.num) == 1 and c.den == c.den.ring.one) else f"({c})")
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                cs = str(c)
                wrap = any(ch in cs[1:] for ch in "+-/*")
                parts.append(f"({cs})*{mono}" if wrap else f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"{type(self).__name__}({self})"


def sum_polys(items: Iterable[SparsePoly], cls=SparsePoly) -> SparsePoly:
    out = cls._raw({})
    for it in items:
        out = out + it
    return out
