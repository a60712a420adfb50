"""Jet variables for ``S = F{X, 1/det X}`` and prolongation of ideals.

``X`` is a ``nu x nu`` matrix of indeterminates.  Its derivatives are the jet
variables ``X^(alpha)_ij`` indexed by multi-indices over the chosen
derivations of Q(q)(x); ``S_k`` uses those with ``|alpha| <= k``.  The
difference operator acts by ``sigma(X) = A X`` and, forced by ``sigma d = d sigma``,

    sigma(X^(alpha)) = sum_{beta <= alpha} binom(alpha, beta) d^beta(A) X^(alpha - beta).

``1/det X`` is a separate symbol ``D``; the relation ``det(X) D = 1`` is kept on
the ring (see :meth:`JetRing.det_relation`) rather than added to every ideal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Callable, Sequence

from .qfield import Q, RatX, X, delta_x
from .sparse import SparsePoly

__all__ = [
    "JetVar",
    "InvDet",
    "JetPoly",
    "JetRing",
    "IdealGens",
    "PointError",
    "sigma_on_jet",
    "commutation_check",
    "prolong_ideal",
    "kernel_condition_check",
]


class PointError(ValueError):
    """The substitution is not a zero of the ideal it was supposed to satisfy."""


@dataclass(frozen=True)
class JetVar:
    row: int
    col: int
    alpha: tuple[int, ...]

    @property
    def order(self) -> int:
        return sum(self.alpha)

    @property
    def sort_key(self):
        return (0, self.order, self.alpha, self.row, self.col)

    def __str__(self):
        name = f"X{self.row + 1}{self.col + 1}"
        if not self.order:
            return name
        if len(self.alpha) == 1:
            return ("d" if self.alpha[0] == 1 else f"d{self.alpha[0]}") + name
        return "d(" + ",".join(map(str, self.alpha)) + ")" + name


@dataclass(frozen=True)
class InvDet:
    @property
    def sort_key(self):
        return (1,)

    def __str__(self):
        return "D"


INVDET = InvDet()


class JetPoly(SparsePoly):
    __slots__ = ()


Derivation = Callable[[RatX], RatX]


def _binom(alpha: Sequence[int], beta: Sequence[int]) -> int:
    out = 1
    for a, b in zip(alpha, beta):
        out *= comb(a, b)
    return out


def _sub_indices(alpha: tuple[int, ...]):
    return itertools.product(*(range(a + 1) for a in alpha))


class JetRing:
    """The jet ring ``S_k`` of a system ``sigma(Y) = A Y``."""

    def __init__(self, A, order: int, derivations: Sequence[Derivation] | None = None):
        self.A = tuple(tuple(RatX(e) for e in row) for row in A)
        self.nu = len(self.A)
        if any(len(row) != self.nu for row in self.A):
            raise ValueError("A must be square")
        if order < 0:
            raise ValueError("order must be non-negative")
        self.order = order
        self.derivations = tuple(derivations) if derivations else (delta_x,)
        self.n_derivs = len(self.derivations)
        self._dA: dict[tuple[int, ...], tuple] = {}

    # -- variables -------------------------------------------------------------
    def unit(self, m: int) -> tuple[int, ...]:
        return tuple(1 if i == m else 0 for i in range(self.n_derivs))

    def zero_index(self) -> tuple[int, ...]:
        return (0,) * self.n_derivs

    def var(self, i: int, j: int, alpha: Sequence[int] | int | None = None) -> JetPoly:
        if alpha is None:
            alpha = self.zero_index()
        elif isinstance(alpha, int):
            alpha = (alpha,) + (0,) * (self.n_derivs - 1)
        return JetPoly.var(JetVar(i, j, tuple(alpha)))

    def invdet(self) -> JetPoly:
        return JetPoly.var(INVDET)

    def multi_indices(self, max_order: int):
        for alpha in itertools.product(range(max_order + 1), repeat=self.n_derivs):
            if sum(alpha) <= max_order:
                yield alpha

    def variables(self, max_order: int | None = None) -> list[JetVar]:
        k = self.order if max_order is None else max_order
        return [JetVar(i, j, a) for a in self.multi_indices(k) for i in range(self.nu) for j in range(self.nu)]

    def jet_matrix(self, alpha) -> tuple:
        return tuple(tuple(self.var(i, j, alpha) for j in range(self.nu)) for i in range(self.nu))

    def det_x(self) -> JetPoly:
        """``det`` of the order-0 matrix of indeterminates."""
        return _det([[self.var(i, j) for j in range(self.nu)] for i in range(self.nu)])

    def det_relation(self) -> JetPoly:
        return self.det_x() * self.invdet() - 1

    # -- derivations -----------------------------------------------------------
    def d_A(self, beta: tuple[int, ...]) -> tuple:
        """``d^beta(A)`` entrywise."""
        if beta not in self._dA:
            if not any(beta):
                self._dA[beta] = self.A
            else:
                m = next(i for i, b in enumerate(beta) if b)
                prev = list(beta)
                prev[m] -= 1
                base = self.d_A(tuple(prev))
                fn = self.derivations[m]
                self._dA[beta] = tuple(tuple(fn(e) for e in row) for row in base)
        return self._dA[beta]

    def derive(self, e: JetPoly, m: int = 0) -> JetPoly:
        """Apply the ``m``-th derivation; ``d(D) = -d(det X) D**2``."""
        fn = self.derivations[m]
        unit = self.unit(m)

        def on_var(v):
            if isinstance(v, InvDet):
                return -self.derive(self.det_x(), m) * self.invdet() ** 2
            return JetPoly.var(JetVar(v.row, v.col, tuple(a + b for a, b in zip(v.alpha, unit))))

        return e.derivation(fn, on_var)

    # -- sigma -----------------------------------------------------------------
    def sigma(self, e: JetPoly, coefficient=_binom) -> JetPoly:
        """Ring endomorphism extending ``sigma(X) = A X`` and ``sigma(D) = D / det A``."""
        det_a = _det(self.A)

        def on_var(v):
            if isinstance(v, InvDet):
                return self.invdet() * det_a.inverse()
            return sigma_on_jet(self, v.alpha, coefficient, check_order=False)[v.row][v.col]

        return e.hom(lambda c: c.sigma_q(), on_var)

    def clear_invdet(self, e: JetPoly) -> JetPoly:
        """``det(X)**K * e`` with every ``det(X) * D`` replaced by 1 (``K`` = top power of D).

        ``e`` lies in the ideal of the relation ``det(X) D - 1`` iff the result is 0.
        """
        by_power: dict[int, dict] = {}
        for mono, c in e.items():
            k = dict(mono).get(INVDET, 0)
            rest = tuple((v, p) for v, p in mono if v != INVDET)
            by_power.setdefault(k, {})[rest] = c
        top = max(by_power, default=0)
        det = self.det_x()
        out = JetPoly()
        for k, terms in by_power.items():
            out = out + JetPoly._raw(terms) * det ** (top - k)
        return out

    def equal_mod_det(self, a: JetPoly, b: JetPoly) -> bool:
        return not self.clear_invdet(a - b)

    def order_of(self, e: JetPoly) -> int:
        return max((v.order for v in e.variables() if isinstance(v, JetVar)), default=0)


def _det(M):
    n = len(M)
    if n == 1:
        return M[0][0]
    total = M[0][0] * 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def sigma_on_jet(ring: JetRing, alpha, coefficient=_binom, check_order: bool = True) -> tuple:
    """``sigma(X^(alpha)) = sum_beta binom(alpha, beta) d^beta(A) X^(alpha-beta)`` as a matrix.

    ``coefficient`` replaces the binomial weight; it exists so that tests can
    feed a deliberately wrong Leibniz rule.
    """
    if isinstance(alpha, int):
        alpha = (alpha,) + (0,) * (ring.n_derivs - 1)
    alpha = tuple(alpha)
    if len(alpha) != ring.n_derivs:
        raise ValueError("multi-index length must match the number of derivations")
    if check_order and sum(alpha) > ring.order:
        raise ValueError(f"|alpha| = {sum(alpha)} exceeds the ring order {ring.order}")
    nu = ring.nu
    out = [[JetPoly() for _ in range(nu)] for _ in range(nu)]
    for beta in _sub_indices(alpha):
        w = coefficient(alpha, beta)
        if not w:
            continue
        dA = ring.d_A(beta)
        rest = tuple(a - b for a, b in zip(alpha, beta))
        for i in range(nu):
            for j in range(nu):
                acc = out[i][j]
                for k in range(nu):
                    if dA[i][k]:
                        acc = acc + ring.var(k, j, rest) * (dA[i][k] * w)
                out[i][j] = acc
    return tuple(tuple(row) for row in out)


_SAMPLES = (X, Q, X / (X - Q), (X * X + Q) / (Q * X + 1))


def commutation_check(ring: JetRing, k: int | None = None, coefficient=_binom) -> bool:
    """``sigma(d_m X^(alpha)) == d_m(sigma(X^(alpha)))`` for all ``|alpha| < k`` and all m.

    Also checks the inverse-determinant symbol, modulo ``det(X) D = 1``, and
    that each derivation commutes with sigma_q on a few sample coefficients
    (``delta_q`` alone does not).
    """
    k = ring.order if k is None else k
    if k < 1:
        raise ValueError("commutation check needs k >= 1")
    for fn in ring.derivations:
        for c in _SAMPLES:
            if fn(c.sigma_q()) != fn(c).sigma_q():
                return False
    for alpha in ring.multi_indices(k - 1):
        for m in range(ring.n_derivs):
            up = tuple(a + b for a, b in zip(alpha, ring.unit(m)))
            left = sigma_on_jet(ring, up, coefficient, check_order=False)
            right = sigma_on_jet(ring, alpha, coefficient, check_order=False)
            for i in range(ring.nu):
                for j in range(ring.nu):
                    if left[i][j] != ring.derive(right[i][j], m):
                        return False
    D = ring.invdet()
    for m in range(ring.n_derivs):
        left = ring.sigma(ring.derive(D, m), coefficient)
        if not ring.equal_mod_det(left, ring.derive(ring.sigma(D, coefficient), m)):
            return False
    return True


@dataclass(frozen=True)
class IdealGens:
    """Generators of an ideal of ``S_order``."""

    ring: JetRing
    generators: tuple[JetPoly, ...]
    order: int

    @classmethod
    def of(cls, ring: JetRing, generators: Sequence, order: int | None = None) -> "IdealGens":
        gens = tuple(g if isinstance(g, JetPoly) else JetPoly.const(g) for g in generators)
        found = max((ring.order_of(g) for g in gens), default=0)
        if order is None:
            order = found
        elif order < found:
            raise ValueError(f"generators involve order {found} > {order}")
        return cls(ring, gens, order)


def prolong_ideal(ideal: IdealGens) -> IdealGens:
    """Generators together with their first derivatives, as an ideal of ``S_{k+1}``.

    Zero derivatives and repeated generators are dropped.
    """
    ring = ideal.ring
    gens: list[JetPoly] = []
    seen = set()
    for g in ideal.generators:
        if g and g not in seen:
            gens.append(g)
            seen.add(g)
    for g in ideal.generators:
        for m in range(ring.n_derivs):
            dg = ring.derive(g, m)
            if dg and dg not in seen:
                gens.append(dg)
                seen.add(dg)
    return IdealGens(ring, tuple(gens), ideal.order + 1)


def _evaluate(e: JetPoly, point: dict) -> RatX:
    total = RatX(0)
    for mono, c in e.items():
        term = c
        for v, p in mono:
            if v not in point:
                raise KeyError(f"no value for {v}")
            term = term * point[v] ** p
        total = total + term
    return total


def _complete_point(ring: JetRing, point: dict) -> dict:
    pt = {}
    for v, val in point.items():
        pt[v] = RatX(val)
    if INVDET not in pt:
        try:
            det = _evaluate(ring.det_x(), pt)
        except KeyError:
            return pt
        if det:
            pt[INVDET] = det.inverse()
    return pt


def kernel_condition_check(lower: IdealGens, upper: IdealGens, point: dict) -> bool:
    """Point-wise test of ``pi_1(lower) <= upper``.

    ``point`` maps jet variables (and optionally ``InvDet``) to values in
    Q(q)(x) and must be a zero of every generator of ``upper``; the check is
    whether every generator of the prolongation of ``lower`` vanishes there.
    This is a necessary condition only.
    """
    if lower.ring is not upper.ring:
        raise ValueError("ideals live in different jet rings")
    pt = _complete_point(upper.ring, point)
    for g in upper.generators:
        if _evaluate(g, pt):
            raise PointError(f"the point is not a zero of {g}")
    return all(not _evaluate(g, pt) for g in prolong_ideal(lower).generators)
