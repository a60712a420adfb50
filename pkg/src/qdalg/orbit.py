"""q-dispersion, q-shift equivalence and orbit reduction of rational functions.

Polynomials handled here are always prime to ``x``; the power of ``x`` and the
Q(q)-content of a rational function are split off first.  Internally factors
are kept as primitive integer polynomials in ``Z[q][x]``; across the public
API they are :class:`~qdalg.qfield.PolyX` values normalised to constant term 1,
which makes ``sigma_q(p)/p`` equal to 1 at ``x = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from sympy.polys.rings import PolyElement

from .qfield import ONE, ZX, PolyX, QRat, RatX, X, _make, q_power_test, resultant_x

__all__ = [
    "Dispersion",
    "OrbitClass",
    "OrbitReduction",
    "UnsupportedOrbit",
    "q_dispersion",
    "q_dispersion_resultant",
    "shift_equivalent",
    "orbit_reduce",
    "orbit_classes",
    "tail_normalize",
]


class UnsupportedOrbit(ArithmeticError):
    """Raised if an orbit reduction fails its closing identity (defensive)."""


# -- primitive polynomial helpers (Z[q][x]) ---------------------------------------


def _qcoeffs(p: PolyElement) -> dict[int, PolyElement]:
    out: dict[int, PolyElement] = {}
    for (ex, eq), c in p.items():
        out[ex] = out.get(ex, ZX.zero) + ZX({(0, eq): c})
    return out


def _prim(p: PolyElement) -> PolyElement:
    """Primitive part with respect to x, positive leading coefficient."""
    if not p:
        return p
    cont = ZX.zero
    for c in _qcoeffs(p).values():
        cont = c if not cont else cont.gcd(c)
        if cont == ZX.one:
            break
    if cont != ZX.one:
        p = p.exquo(cont)
    if p.LC < 0:
        p = -p
    return p


def _xdeg(p: PolyElement) -> int:
    return max(p.degree(0), 0)


def _shift(p: PolyElement, n: int) -> PolyElement:
    """Primitive polynomial proportional to ``p(q**n x)``."""
    if n == 0:
        return p
    low = min(0, min(eq + n * ex for ex, eq in p.keys()))
    return _prim(ZX.from_dict({(ex, eq + n * ex - low): c for (ex, eq), c in p.items()}))


def _gcd(a: PolyElement, b: PolyElement) -> PolyElement:
    return _prim(a.gcd(b))


def _key(p: PolyElement) -> tuple:
    return tuple(sorted(p.items()))


def _to_ring(p: RatX) -> PolyElement:
    p = RatX(p)
    if not p.is_polynomial:
        raise ValueError(f"{p} is not a polynomial in x")
    return _prim(p.num)


def tail_normalize(p: PolyElement | RatX) -> PolyX:
    """Scale a polynomial prime to x so that its constant term is 1."""
    if isinstance(p, RatX):
        p = p.num
    c0 = p.coeff_wrt(ZX.gens[0], 0)
    if not c0:
        raise ValueError("polynomial is divisible by x")
    return _make(p, c0)


# -- dispersion -------------------------------------------------------------------


@dataclass(frozen=True)
class Dispersion:
    """Integers ``n`` with ``gcd(P(x), Q(q**n x))`` non-constant."""

    shifts: frozenset[int]

    def __contains__(self, n: int) -> bool:
        return n in self.shifts

    def __iter__(self):
        return iter(sorted(self.shifts))

    def __len__(self):
        return len(self.shifts)

    def nonzero(self) -> frozenset[int]:
        return self.shifts - {0}


def _q_power_roots(res: dict[int, QRat]) -> set[int]:
    """All integers n with ``sum_k res[k] * q**(n*k) == 0``."""
    coeffs = {k: v.num for k, v in res.items()}  # integral: resultant of Z[q][x] polys
    if len(coeffs) < 2:
        return set()
    qdeg = {k: c.degree(1) for k, c in coeffs.items()}
    qord = {k: min(eq for _, eq in c.keys()) for k, c in coeffs.items()}
    ks = sorted(coeffs)
    candidates: set[int] = set()
    for i, k1 in enumerate(ks):
        for k2 in ks[i + 1:]:
            num = qdeg[k1] - qdeg[k2]
            if num % (k2 - k1) == 0:
                candidates.add(num // (k2 - k1))
    lower = set()
    for i, k1 in enumerate(ks):
        for k2 in ks[i + 1:]:
            num = qord[k1] - qord[k2]
            if num % (k2 - k1) == 0:
                lower.add(num // (k2 - k1))
    roots = set()
    for n in candidates & lower:
        low = min(0, min(n * k for k in ks))
        total = ZX.zero
        for k, c in coeffs.items():
            total += c * ZX({(0, n * k - low): 1})
        if not total:
            roots.add(n)
    return roots


@lru_cache(maxsize=4096)
def _factor_keys(pk: tuple) -> tuple[tuple[tuple, int], ...]:
    p = ZX.from_dict(dict(pk))
    out = []
    for f, m in p.factor_list()[1]:
        if _xdeg(f) > 0:
            out.append((_key(_prim(f)), m))
    return tuple(sorted(out))


def _factors(p: PolyElement) -> list[tuple[PolyElement, int]]:
    """Irreducible factors of positive x-degree, primitive, with multiplicities."""
    return [(ZX.from_dict(dict(k)), m) for k, m in _factor_keys(_key(p))]


@lru_cache(maxsize=16384)
def _shift_keys(ak: tuple, bk: tuple) -> int | None:
    found = shift_equivalent(_make(ZX.from_dict(dict(ak)), ZX.one), _make(ZX.from_dict(dict(bk)), ZX.one))
    return None if found is None else found[0]


def _shift_between(a: PolyElement, b: PolyElement) -> int | None:
    """``n`` with roots(b) = q**n roots(a), for irreducible ``a``, ``b``."""
    if _xdeg(a) != _xdeg(b):
        return None
    return _shift_keys(_key(a), _key(b))


def _disp(P: PolyElement, Qp: PolyElement) -> frozenset[int]:
    shifts = set()
    for a, _ in _factors(P):
        for b, _ in _factors(Qp):
            n = _shift_between(a, b)
            if n is not None:
                shifts.add(n)
    return frozenset(shifts)


def q_dispersion_resultant(P: RatX, Q_: RatX) -> Dispersion:
    """Same set as :func:`q_dispersion`, computed from ``Res_x(P(x), Q(y x))``.

    Candidates ``y = q**n`` come from the Newton polygon in q of the resultant
    coefficients and are confirmed by substitution.  Much slower; kept as an
    independent cross-check.
    """
    p, qq = _to_ring(P), _to_ring(Q_)
    _check_prime_to_x(p, "P")
    _check_prime_to_x(qq, "Q")
    if _xdeg(p) == 0 or _xdeg(qq) == 0:
        return Dispersion(frozenset())
    return Dispersion(frozenset(_q_power_roots(resultant_x(_make(p, ZX.one), _make(qq, ZX.one)))))


def _check_prime_to_x(p: PolyElement, name: str) -> None:
    if not p:
        raise ValueError(f"{name} must be nonzero")
    if not p.coeff_wrt(ZX.gens[0], 0):
        raise ValueError(f"{name} is divisible by x; strip the power of x before calling")


def q_dispersion(P: RatX, Q_: RatX) -> Dispersion:
    """Exact set of ``n`` such that ``P(x)`` and ``Q(q**n x)`` share a root.

    Both polynomials are factored over Q(q); an irreducible factor never
    meets its own q-orbit away from n = 0, so the set is the union of the shifts
    between pairs of shift-equivalent irreducible factors.
    """
    p, qq = _to_ring(P), _to_ring(Q_)
    _check_prime_to_x(p, "P")
    _check_prime_to_x(qq, "Q")
    return Dispersion(_disp(p, qq))


def shift_equivalent(P: RatX, Q_: RatX) -> tuple[int, QRat] | None:
    """Find ``(n, c)`` with ``Q(x) == c * P(x / q**n)``, i.e. roots(Q) = q**n roots(P)."""
    P, Q_ = PolyX(P), PolyX(Q_)
    if not isinstance(P, PolyX) or not isinstance(Q_, PolyX) or not P or not Q_:
        raise ValueError("shift_equivalent needs nonzero polynomials")
    _check_prime_to_x(P.num, "P")
    _check_prime_to_x(Q_.num, "Q")
    if P.degree() != Q_.degree():
        return None
    pc, qc = P.coeffs(), Q_.coeffs()
    if set(pc) != set(qc):
        return None
    idx = sorted(pc)
    if len(idx) == 1:
        n = 0
    else:
        i, j = idx[0], idx[-1]
        ratio = (qc[j] / qc[i]) / (pc[j] / pc[i])
        m = q_power_test(ratio)
        if m is None or m % (j - i):
            return None
        n = -m // (j - i)
    c = qc[idx[0]] * _qpow(n * idx[0]) / pc[idx[0]]
    candidate = c * P.subs_x(X * _qpow(-n))
    if candidate != Q_:
        return None
    return n, c


def _qpow(n: int) -> QRat:
    if n >= 0:
        return _make(ZX({(0, n): 1}), ZX.one, reduce=False)
    return _make(ZX.one, ZX({(0, -n): 1}), reduce=False)


# -- orbit refinement --------------------------------------------------------------


@dataclass
class OrbitClass:
    """Factors whose roots lie in one family of q-orbits.

    ``members`` holds ``(shift, poly, exponent)`` where ``poly`` is proportional
    to ``rep(q**-shift x)`` (its roots are ``q**shift`` times those of ``rep``).
    The representative has shift 0 and every shift is non-negative.
    """

    rep: PolyElement
    members: list[tuple[int, PolyElement, int]] = field(default_factory=list)

    @property
    def total_exponent(self) -> int:
        return sum(e for _, _, e in self.members)

    def span(self) -> tuple[int, int]:
        shifts = [s for s, _, _ in self.members]
        return min(shifts), max(shifts)

    def rep_poly(self) -> PolyX:
        return tail_normalize(self.rep)

    def member_poly(self, shift: int) -> PolyX:
        """``rep(q**-shift x)`` normalised to constant term 1."""
        return tail_normalize(_shift(self.rep, -shift))


def _group(work: list[tuple[PolyElement, int]]) -> list[OrbitClass]:
    m = len(work)
    links: dict[int, list[tuple[int, int]]] = {i: [] for i in range(m)}
    for i in range(m):
        for j in range(i + 1, m):
            n = _shift_between(work[i][0], work[j][0])
            if n is not None:
                links[i].append((j, n))  # roots(work[j]) = q**n roots(work[i])
                links[j].append((i, -n))
    seen: dict[int, int] = {}
    classes = []
    for start in range(m):
        if start in seen:
            continue
        seen[start] = 0
        comp = [start]
        stack = [start]
        while stack:
            u = stack.pop()
            for v, n in links[u]:
                if v not in seen:
                    seen[v] = seen[u] + n
                    comp.append(v)
                    stack.append(v)
        base = min(seen[i] for i in comp)
        rep_idx = min(comp, key=lambda i: (seen[i], _xdeg(work[i][0]), _key(work[i][0])))
        cls = OrbitClass(rep=work[rep_idx][0])
        for i in sorted(comp, key=lambda i: seen[i]):
            cls.members.append((seen[i] - base, work[i][0], work[i][1]))
        classes.append(cls)
    classes.sort(key=lambda c: (_xdeg(c.rep), _key(c.rep)))
    return classes


def orbit_classes(polys: list[tuple[RatX, int]]) -> list[OrbitClass]:
    """Group polynomials (prime to x) with exponents into q-orbit classes.

    Inputs are split into irreducible factors over Q(q); exponents of common
    factors add up and factors whose exponent cancels to 0 are dropped.
    """
    exps: dict[tuple, int] = {}
    for p, e in polys:
        pr = _to_ring(p)
        _check_prime_to_x(pr, "factor")
        for f, mult in _factors(pr):
            k = _key(f)
            exps[k] = exps.get(k, 0) + mult * e
    basis = [(ZX.from_dict(dict(k)), e) for k, e in sorted(exps.items()) if e != 0]
    return _group(basis)


# -- orbit reduction ---------------------------------------------------------------


@dataclass(frozen=True)
class OrbitReduction:
    """``a == atilde * sigma_q(f) / f`` with ``atilde`` orbit-disjoint.

    ``atilde == mu * x**r * prod(p**e for p, e in factors)`` where every ``p``
    has constant term 1 and no two factors share a q-orbit.
    """

    a: RatX
    atilde: RatX
    f: RatX
    mu: QRat
    r: int
    factors: tuple[tuple[PolyX, int], ...]

    @property
    def monomial_part(self) -> tuple[QRat, int]:
        return self.mu, self.r

    @property
    def is_monomial(self) -> bool:
        return not self.factors


def split_monomial(a: RatX) -> tuple[QRat, int, RatX]:
    """Write ``a = mu * x**r * u`` with ``u(0) == 1``."""
    a = RatX(a)
    if not a:
        raise ValueError("zero has no monomial part")
    r = a.x_valuation()
    rest = a / RatX.from_poly(ZX({(abs(r), 0): 1})) if r > 0 else a * RatX.from_poly(ZX({(-r, 0): 1}))
    n0 = rest.num.coeff_wrt(ZX.gens[0], 0)
    d0 = rest.den.coeff_wrt(ZX.gens[0], 0)
    mu = _make(n0, d0)
    return mu, r, rest / mu


def _shift_chain(cls: OrbitClass) -> RatX:
    """``f`` with ``prod(member**e) == rep**E * sigma_q(f)/f``."""
    f = ONE
    for shift, _, e in cls.members:
        if shift == 0:
            continue
        chain = ONE
        for j in range(1, shift + 1):
            chain = chain * cls.member_poly(j)
        f = f * chain ** (-e)
    return f


def orbit_reduce(a: RatX) -> OrbitReduction:
    """Reduce ``a`` to an orbit-disjoint ``atilde`` times a q-coboundary."""
    a = RatX(a)
    if not a:
        raise ValueError("orbit_reduce of zero")
    mu, r, rest = split_monomial(a)
    polys = []
    if rest.num.degree(0) > 0:
        polys.append((rest.numerator(), 1))
    if rest.den.degree(0) > 0:
        polys.append((rest.denominator(), -1))
    classes = orbit_classes(polys)
    f = ONE
    factors = []
    for cls in classes:
        f = f * _shift_chain(cls)
        if cls.total_exponent:
            factors.append((cls.rep_poly(), cls.total_exponent))
    atilde = a * f / f.sigma_q()
    expected = mu * X**r
    for p, e in factors:
        expected = expected * p**e
    if atilde != expected:
        raise UnsupportedOrbit(f"orbit reduction failed to close for {a}")
    return OrbitReduction(a=a, atilde=atilde, f=f, mu=mu, r=r, factors=tuple(factors))
