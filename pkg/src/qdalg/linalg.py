"""Exact linear systems over Q(q)."""

from __future__ import annotations

from dataclasses import dataclass

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from .qfield import ZERO, ZX, RatX


@dataclass(frozen=True)
class LinearSolution:
    values: tuple[RatX, ...] | None  # particular solution, free variables set to 0
    nullity: int
    rank: int

    @property
    def consistent(self) -> bool:
        return self.values is not None


def _integral_row(row: list[RatX]) -> list:
    den = ZX.one
    for c in row:
        if c:
            den = den.lcm(c.den)
    return [c.num * den.exquo(c.den) if c else ZX.zero for c in row]


def solve_linear(rows: list[list[RatX]], rhs: list[RatX], ncols: int | None = None) -> LinearSolution:
    """Solve ``rows @ v = rhs`` over Q(q) by fraction-free (Bareiss) elimination.

    Rows are scaled to integer polynomials in q, eliminated without fractions,
    and back-substituted.  ``rows`` may be empty (then every vector of length
    ``ncols`` solves the zero system).  Free variables are set to 0.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    rows = [[RatX(c) for c in row] for row in rows]
    rhs = [RatX(b) for b in rhs]
    if all(c.is_constant and c.num.degree(1) <= 0 and c.den.degree(1) <= 0 for row in rows for c in row) \
            and all(b.num.degree(1) <= 0 and b.den.degree(1) <= 0 for b in rhs):
        return _solve_rational(rows, rhs, ncols)
    aug = []
    for row, b in zip(rows, rhs):
        ints = _integral_row([RatX(c) for c in row] + [RatX(b)])
        if any(ints):
            aug.append(ints)
    pivots: list[int] = []
    prev = ZX.one
    r = 0
    for col in range(ncols):
        cands = [i for i in range(r, len(aug)) if aug[i][col]]
        if not cands:
            continue
        piv = min(cands, key=lambda i: len(aug[i][col]))
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][col]
        for i in range(r + 1, len(aug)):
            row = aug[i]
            f = row[col]
            if f:
                aug[i] = row[:col] + [
                    (p * row[j] - f * aug[r][j]).exquo(prev) if row[j] or aug[r][j] else row[j]
                    for j in range(col, ncols + 1)
                ]
            else:
                aug[i] = row[:col] + [(p * row[j]).exquo(prev) if row[j] else row[j] for j in range(col, ncols + 1)]
        prev = p
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][ncols]:
            return LinearSolution(None, ncols - r, r)
    values = [ZERO] * ncols
    for k in range(r - 1, -1, -1):
        row, col = aug[k], pivots[k]
        acc = RatX.from_poly(row[ncols])
        for j in pivots[k + 1:]:
            if row[j] and values[j]:
                acc = acc - RatX.from_poly(row[j]) * values[j]
        values[col] = acc / RatX.from_poly(row[col])
    return LinearSolution(tuple(values), ncols - r, r)


def _to_qq(c: RatX):
    return QQ(int(c.num.LC) if c.num else 0, int(c.den.LC))


def _solve_rational(rows: list[list[RatX]], rhs: list[RatX], ncols: int) -> LinearSolution:
    """Fast path when every entry is a rational number."""
    data = [[_to_qq(c) for c in row] + [_to_qq(b)] for row, b in zip(rows, rhs)]
    data = [row for row in data if any(row)]
    if not data:
        return LinearSolution(tuple([ZERO] * ncols), ncols, 0)
    reduced, pivots = DomainMatrix(data, (len(data), ncols + 1), QQ).rref()
    if ncols in pivots:
        return LinearSolution(None, ncols - len(pivots) + 1, len(pivots) - 1)
    values = [ZERO] * ncols
    mat = reduced.to_list()
    for i, col in enumerate(pivots):
        v = mat[i][ncols]
        values[col] = RatX(int(v.numerator)) / int(v.denominator)
    return LinearSolution(tuple(values), ncols - len(pivots), len(pivots))


def _flatten(value) -> list[tuple[object, RatX]]:
    if isinstance(value, RatX):
        return [((), value)] if value else []
    if hasattr(value, "terms"):
        return list(value.terms.items())
    return _flatten(RatX(value))


def _x_coefficients(column: list[RatX], rational: bool = False) -> list[dict]:
    """Multiply a family of rational functions by their common denominator and
    split each result into x-coefficients in Q(q), or into integer
    coefficients of the monomials ``x**i q**j`` when ``rational`` is set."""
    dens = [c.den for c in column if c]
    if not dens:
        return [{} for _ in column]
    common = dens[0]
    for d in dens[1:]:
        common = common.lcm(d)
    out = []
    for c in column:
        if not c:
            out.append({})
            continue
        poly = c.num * common.exquo(c.den)
        if rational:
            out.append({m: RatX(int(v)) for m, v in poly.items()})
            continue
        coeffs: dict[int, object] = {}
        for (ex, eq), v in poly.items():
            coeffs.setdefault(ex, {})[(0, eq)] = v
        out.append({ex: RatX.from_poly(poly.ring.from_dict(d)) for ex, d in coeffs.items()})
    return out


def solve_affine(residual, n: int, rational: bool = False) -> LinearSolution:
    """Find constants ``v`` in Q(q) with ``residual(v)`` identically zero.

    ``residual`` maps a list of ``n`` Q(q)-values to a list of rational
    functions (or sparse polynomials with rational coefficients) and must be
    affine in its argument.  Components are compared monomial by monomial
    after clearing denominators, so the unknowns may multiply x-dependent data.

    With ``rational`` the unknowns range over Q instead, which is what an
    ansatz needs when ``delta_q`` acts on the unknowns themselves.
    """
    zero = [ZERO] * n
    base = residual(zero)
    cols = []
    for i in range(n):
        unit = list(zero)
        unit[i] = RatX(1)
        cols.append([a - b for a, b in zip(residual(unit), base)])
    keys: dict[tuple, list[RatX]] = {}
    for k, comp in enumerate(base):
        for mono, c in _flatten(comp):
            keys.setdefault((k, mono), [ZERO] * (n + 1))[n] = c
    for i, col in enumerate(cols):
        for k, comp in enumerate(col):
            for mono, c in _flatten(comp):
                keys.setdefault((k, mono), [ZERO] * (n + 1))[i] = c
    rows: list[list[RatX]] = []
    rhs: list[RatX] = []
    for entries in keys.values():
        split = _x_coefficients(entries, rational)
        degrees = set().union(*split)
        for d in sorted(degrees):
            rows.append([s.get(d, ZERO) for s in split[:n]])
            rhs.append(-split[n].get(d, ZERO))
    return solve_linear(rows, rhs, ncols=n)
