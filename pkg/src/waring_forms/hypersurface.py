"""The hypersurface of degree-(2k+1) binary forms of rank k+2.

Its equation is the discriminant of the degree-(k+1) dual form
``q(u, v) = det [monomial row; Hankel rows]``, whose coefficients ``b_j`` are
the signed maximal minors of the ``(k+1) x (k+2)`` Hankel matrix
``H[r][c] = a_(r+c)``. Here ``a_i = c_i / binom(2k+1, i)`` are the
divided-power coordinates of ``f = sum c_i x^(d-i) y^i``; with them a power
of a linear form has a rank-one Hankel matrix.

The equation is never expanded in the ``a_i``. It is kept as the composite
of the discriminant polynomial in the ``b_j`` (expanded once per ``k``) with
the minors, and its gradient comes from the chain rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, Sequence, Tuple

from . import exactla
from .binpoly import BinaryForm, interpolate, poly_degree
from .errors import ConstraintError, DegreeError, InternalError
from .scalar import QQ, Field

__all__ = [
    "MultiPoly",
    "HypersurfaceContext",
    "context_make",
    "hankel",
    "minors",
    "q_form",
    "q_determinant",
    "defining_value",
    "defining_gradient",
    "degree_of_equation",
    "line_degree",
    "generic_discriminant",
]

MAX_K = 6

Exps = Tuple[int, ...]


class MultiPoly:
    """Sparse polynomial with exact coefficients: ``{exponent tuple: coeff}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exps, object] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int, c=1) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.nvars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return MultiPoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        out: Dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def diff(self, i: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return MultiPoly(self.nvars, out)

    def divide_by_variable(self, i: int) -> "MultiPoly":
        """Exact division by the ``i``-th variable."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                raise InternalError(f"term {e} is not divisible by variable {i}")
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c
        return MultiPoly(self.nvars, out)

    def evaluate(self, point: Sequence, field: Field):
        acc = field.zero
        for e, c in self.terms.items():
            t = field(c)
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            acc += t
        return acc

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.terms})"


def _poly_det(M: list[list[MultiPoly]], nvars: int) -> MultiPoly:
    """Determinant by Laplace expansion along rows, memoised on column sets."""
    n = len(M)
    minors: Dict[int, MultiPoly] = {0: MultiPoly.constant(nvars, 1)}
    for r in range(n):
        new: Dict[int, MultiPoly] = {}
        for mask, val in minors.items():
            if val.is_zero():
                continue
            # columns already used form `mask`; the next row picks one more
            for c in range(n):
                if mask >> c & 1 or M[r][c].is_zero():
                    continue
                # sign: number of used columns to the right of c
                sgn = -1 if bin(mask >> (c + 1)).count("1") % 2 else 1
                term = val * M[r][c]
                nm = mask | (1 << c)
                new[nm] = new.get(nm, MultiPoly(nvars)) + (term if sgn > 0 else -term)
        minors = new
    return minors.get((1 << n) - 1, MultiPoly(nvars))


@lru_cache(maxsize=None)
def generic_discriminant(m: int) -> MultiPoly:
    """Discriminant of ``sum b_j u^(m-j) v^j`` as a polynomial in ``b_0..b_m``,
    normalised as ``(-1)^(m(m-1)/2) Res(f, df/du) / b_0``."""
    nv = m + 1
    f = [MultiPoly.variable(nv, j) for j in range(m + 1)]
    fp = [MultiPoly.variable(nv, j, m - j) for j in range(m)]
    size = 2 * m - 1
    zero = MultiPoly(nv)
    rows = []
    for i in range(m - 1):
        rows.append([zero] * i + f + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + fp + [zero] * (size - m - i))
    res = _poly_det(rows, nv)
    disc = res.divide_by_variable(0)
    return -disc if (m * (m - 1) // 2) % 2 else disc


@dataclass(frozen=True)
class HypersurfaceContext:
    k: int
    disc_in_b: MultiPoly
    disc_grad: tuple  # partial derivatives of disc_in_b

    @property
    def d(self) -> int:
        return 2 * self.k + 1


def context_make(k: int) -> HypersurfaceContext:
    if k < 1:
        raise ConstraintError("k must be >= 1")
    if k > MAX_K:
        raise ConstraintError(f"k = {k} refused: expansion limited to k <= {MAX_K}")
    disc = generic_discriminant(k + 1)
    if not disc.is_homogeneous() or disc.degrees() != {2 * k}:
        raise InternalError("discriminant polynomial is not homogeneous of degree 2k")
    return HypersurfaceContext(k, disc, tuple(disc.diff(j) for j in range(k + 2)))


def _check(f: BinaryForm, k: int):
    if f.degree != 2 * k + 1:
        raise DegreeError(f"expected a form of degree {2 * k + 1}, got {f.degree}")


def hankel(f: BinaryForm) -> list[list]:
    """The ``(k+1) x (k+2)`` Hankel matrix of divided-power coordinates."""
    d = f.degree
    if d % 2 == 0:
        raise DegreeError("the hypersurface lives in odd degree 2k+1")
    k = (d - 1) // 2
    a = [c / comb(d, i) for i, c in enumerate(f.coeffs)]
    return [[a[r + c] for c in range(k + 2)] for r in range(k + 1)]


def minors(f: BinaryForm) -> list:
    """``b_j = (-1)^j det(H without column j)`` for ``j = 0..k+1``."""
    H = hankel(f)
    field = f.field
    out = []
    for j in range(len(H[0])):
        sub = [row[:j] + row[j + 1:] for row in H]
        det = exactla.determinant(sub, field)
        out.append(det if j % 2 == 0 else -det)
    return out


def q_form(f: BinaryForm) -> BinaryForm:
    """``q(u, v) = sum b_j u^(k+1-j) v^j``."""
    return BinaryForm(tuple(minors(f)), f.field, dual=True)


def q_determinant(f: BinaryForm, u, v):
    """The bordered determinant evaluated at a numeric point ``(u, v)``."""
    H = hankel(f)
    k1 = len(H[0]) - 1
    top = [u ** (k1 - j) * v ** j for j in range(k1 + 1)]
    return exactla.determinant([top] + H, f.field)


def defining_value(ctx: HypersurfaceContext, f: BinaryForm):
    _check(f, ctx.k)
    return ctx.disc_in_b.evaluate(minors(f), f.field)


def _minor_partials(f: BinaryForm) -> list[list]:
    """``db_j / dc_i`` as a ``(k+2) x (d+1)`` table.

    Each entry sums signed cofactors over the Hankel positions holding
    ``a_i``, times ``1/binom(d, i)`` for ``a_i = c_i / binom(d, i)``.
    """
    H = hankel(f)
    field = f.field
    d = f.degree
    nr, nc = len(H), len(H[0])
    table = [[field.zero] * (d + 1) for _ in range(nc)]
    for j in range(nc):
        S = [row[:j] + row[j + 1:] for row in H]
        n = len(S)
        for r in range(n):
            for c in range(n):
                sub = [row[:c] + row[c + 1:] for i, row in enumerate(S) if i != r]
                cof = exactla.determinant(sub, field)
                if (r + c) % 2:
                    cof = -cof
                # column c of S is column c or c+1 of H
                hc = c if c < j else c + 1
                i = r + hc
                table[j][i] += cof
        sgn = -1 if j % 2 else 1
        table[j] = [sgn * x / comb(d, i) for i, x in enumerate(table[j])]
    return table


def defining_gradient(ctx: HypersurfaceContext, f: BinaryForm) -> list:
    """Gradient of the equation with respect to the coefficients ``c_i`` of
    ``f``, by the chain rule through the minors."""
    _check(f, ctx.k)
    field = f.field
    b = minors(f)
    dD_db = [g.evaluate(b, field) for g in ctx.disc_grad]
    db_dc = _minor_partials(f)
    return [
        sum((dD_db[j] * db_dc[j][i] for j in range(len(b))), field.zero)
        for i in range(f.degree + 1)
    ]


def degree_of_equation(ctx: HypersurfaceContext) -> int:
    """``2k(k+1)``: degree ``2k`` in minors of degree ``k+1``."""
    dd = ctx.disc_in_b.degrees().pop()
    if dd * (ctx.k + 1) != 2 * ctx.k * (ctx.k + 1):
        raise InternalError("degree bookkeeping mismatch")
    return dd * (ctx.k + 1)


def line_degree(ctx: HypersurfaceContext, f0: BinaryForm, f1: BinaryForm, extra: int = 3) -> int:
    """Exact degree of ``t -> D(f0 + t f1)`` by interpolation on
    ``2k(k+1) + 1 + extra`` points."""
    field = f0.field
    npts = 2 * ctx.k * (ctx.k + 1) + 1 + extra
    xs = [field(i) for i in range(npts)]
    ys = [defining_value(ctx, f0 + f1 * x) for x in xs]
    return poly_degree(interpolate(xs, ys, field))
