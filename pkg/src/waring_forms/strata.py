"""Rank strata of binary forms: samplers, the rank census of the suprageneric
closures, the rank-raising chain, and tangent spaces at their points.

A point of the closure of the rank ``d - k`` forms (``d - k`` above the
generic rank) is written ``f = l0^(d-1) g + l1^d + ... + lk^d``. "General"
points are random integer coefficients of height 50 over Q (uniform residues
over F_p), resampled when a degeneracy is hit.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Optional

from . import exactla
from .apolarity import RankCertificate, catalecticant, waring_rank
from .binpoly import (
    BinaryForm,
    LinearForm,
    discriminant,
    interpolate,
    power_of_linear,
    roots_in_field,
)
from .errors import ConstraintError, SearchExhausted, WaringError
from .scalar import QQ, Field, random_nonzero, random_scalar

__all__ = [
    "SupragenericPoint",
    "RankCensus",
    "ChainStep",
    "generic_rank",
    "random_linear_forms",
    "sample_rank_r",
    "suprageneric_sample",
    "special_point",
    "rank_raising_chain",
    "tangent_generators",
    "tangent_dimension",
    "stratum_census",
    "valid_pairs",
]

DEFAULT_HEIGHT = 50


def generic_rank(d: int) -> int:
    """``ceil((d + 1) / 2)``, the rank of a general binary form of degree ``d``."""
    if d < 1:
        raise ConstraintError("degree must be >= 1")
    return (d + 2) // 2


def is_suprageneric(d: int, k: int) -> bool:
    return k >= 0 and d - k > generic_rank(d)


def valid_pairs(dmax: int, dmin: int = 3) -> list[tuple[int, int]]:
    """All ``(d, k)`` with ``dmin <= d <= dmax`` and ``d - k`` suprageneric."""
    return [(d, k) for d in range(dmin, dmax + 1) for k in range(d) if is_suprageneric(d, k)]


def _check_pair(d: int, k: int):
    if k < 0 or not is_suprageneric(d, k):
        raise ConstraintError(
            f"(d={d}, k={k}): need k >= 0 and d-k > ceil((d+1)/2) = {generic_rank(d)}"
        )


def random_linear_forms(
    n: int, field: Field, rng: random.Random, height: int = DEFAULT_HEIGHT, avoid=()
) -> list[LinearForm]:
    """``n`` pairwise non-proportional random linear forms, none proportional
    to a form in ``avoid``."""
    out: list[LinearForm] = []
    taken = list(avoid)
    guard = 0
    while len(out) < n:
        guard += 1
        if guard > 10000:
            raise SearchExhausted(f"cannot find {n} non-proportional linear forms over {field}")
        a, b = random_scalar(field, rng, height), random_scalar(field, rng, height)
        if a == 0 and b == 0:
            continue
        l = LinearForm(a, b)
        if any(l.proportional(m) for m in taken):
            continue
        out.append(l)
        taken.append(l)
    return out


@dataclass(frozen=True)
class SupragenericPoint:
    d: int
    k: int
    ls: tuple  # (l0, l1, ..., lk)
    g: LinearForm
    f: BinaryForm

    @classmethod
    def assemble(cls, d: int, k: int, ls, g: LinearForm, field: Field) -> "SupragenericPoint":
        l0 = ls[0]
        f = power_of_linear(l0, d - 1, field) * g.form(field)
        for l in ls[1:]:
            f = f + power_of_linear(l, d, field)
        return cls(d, k, tuple(ls), g, f)


def _draw_point(d, k, field, rng, height) -> SupragenericPoint:
    ls = random_linear_forms(k + 1, field, rng, height)
    (g,) = random_linear_forms(1, field, rng, height, avoid=[ls[0]])
    return SupragenericPoint.assemble(d, k, ls, g, field)


def suprageneric_sample(
    d: int,
    k: int,
    rng: random.Random,
    field: Field = QQ,
    height: int = DEFAULT_HEIGHT,
    max_tries: int = 100,
) -> SupragenericPoint:
    """Random general point ``l0^(d-1) g + sum l_i^d`` of rank exactly ``d - k``."""
    _check_pair(d, k)
    for _ in range(max_tries):
        p = _draw_point(d, k, field, rng, height)
        if waring_rank(p.f).rank == d - k:
            return p
    raise SearchExhausted(f"no rank {d - k} sample in {max_tries} tries for (d={d}, k={k})")


def special_point(
    d: int,
    k: int,
    kind: str,
    rng: random.Random,
    field: Field = QQ,
    height: int = DEFAULT_HEIGHT,
) -> SupragenericPoint:
    """A point of the parametrised set, possibly specialised.

    ``kind`` is ``generic``, ``g-eq-l0`` (g = l0) or ``li-eq-lj`` (l2 = l1,
    needs k >= 2).
    """
    _check_pair(d, k)
    p = _draw_point(d, k, field, rng, height)
    if kind == "generic":
        return p
    if kind == "g-eq-l0":
        return SupragenericPoint.assemble(d, k, p.ls, p.ls[0], field)
    if kind == "li-eq-lj":
        if k < 2:
            raise ConstraintError("the l_i = l_j specialisation needs k >= 2")
        ls = list(p.ls)
        ls[2] = ls[1]
        return SupragenericPoint.assemble(d, k, ls, p.g, field)
    raise ConstraintError(f"unknown specialisation {kind!r}")


def sample_rank_r(
    d: int,
    r: int,
    rng: random.Random,
    field: Field = QQ,
    height: int = DEFAULT_HEIGHT,
    max_tries: int = 100,
) -> tuple[BinaryForm, RankCertificate]:
    """A random form of degree ``d`` whose rank is verified to be ``r``.

    Up to the generic rank: a sum of ``r`` random powers with random
    coefficients. Above it: a general point of the ``k = d - r`` family.
    """
    if d < 1:
        raise ConstraintError("degree must be >= 1")
    if not 1 <= r <= d:
        raise ConstraintError(
            f"rank {r} is unreachable in degree {d}: binary forms of degree {d} "
            f"have rank between 1 and {d} (forms of rank d are l0^(d-1) g)"
        )
    if r > generic_rank(d):
        p = suprageneric_sample(d, d - r, rng, field, height, max_tries)
        return p.f, waring_rank(p.f)
    for _ in range(max_tries):
        ls = random_linear_forms(r, field, rng, height)
        f = BinaryForm.zero(d, field)
        for l in ls:
            f = f + power_of_linear(l, d, field) * random_nonzero(field, rng, height)
        if f.is_zero():
            continue
        cert = waring_rank(f)
        if cert.rank == r:
            return f, cert
    raise SearchExhausted(f"no rank {r} form of degree {d} found in {max_tries} tries")


# ---------------------------------------------------------------------------
# rank-raising chain

@dataclass(frozen=True)
class ChainStep:
    l: LinearForm
    c: object
    rank: int


def _rank_one_parts(l: LinearForm, d: int, e: int, field: Field):
    """Catalecticant of ``l^d`` in degree ``e`` as ``col * row^T``."""
    from math import factorial

    a, b = field(l.a), field(l.b)
    col = [x * (factorial(d) // factorial(d - e)) for x in power_of_linear(l, d - e, field).coeffs]
    row = [a ** (e - j) * b ** j for j in range(e + 1)]
    return col, row


def _minor_kernel(M, field):
    """Signed maximal minors of an ``m x (m+1)`` matrix (a kernel vector)."""
    m = len(M)
    out = []
    for j in range(m + 1):
        sub = [row[:j] + row[j + 1:] for row in M]
        det = exactla.determinant(sub, field)
        out.append(det if j % 2 == 0 else -det)
    return out


def _critical_coefficients(f: BinaryForm, l: LinearForm, d1: int) -> list:
    """Coefficients ``c`` where ``f + c l^d`` changes apolar structure.

    For each ``e < d1`` the catalecticant of ``f`` has full column rank and
    the rank-one update by ``l^d`` creates a kernel at a single ``c``. When
    the degree-``d1`` catalecticant is ``m x (m+1)`` its kernel is affine in
    ``c``, and the values where that kernel acquires a repeated root are
    added too.
    """
    field = f.field
    d = f.degree
    out = []
    for e in range(max(1, d1 - 1), d1):
        A = catalecticant(f, e)
        col, row = _rank_one_parts(l, d, e, field)
        w = exactla.solve(A, col, field)
        if w is None:
            continue
        s = sum((x * y for x, y in zip(row, w)), field.zero)
        if s != 0:
            out.append(-1 / s)
    if d1 <= d and d - d1 + 1 == d1:
        A = catalecticant(f, d1)
        col, row = _rank_one_parts(l, d, d1, field)
        A1 = [[a + x * y for a, y in zip(Ar, row)] for Ar, x in zip(A, col)]
        K0 = _minor_kernel(A, field)
        K1 = _minor_kernel(A1, field)
        slope = [b - a for a, b in zip(K0, K1)]
        npts = 2 * (d1 - 1) + 1
        if field.characteristic == 0 or field.characteristic > npts:
            xs = [field(i) for i in range(npts)]
            ys = []
            for c in xs:
                K = BinaryForm(tuple(a + c * s for a, s in zip(K0, slope)), field, dual=True)
                ys.append(discriminant(K) if not K.is_zero() else field.zero)
            poly = interpolate(xs, ys, field)
            if any(c != 0 for c in poly):
                # ascending in c -> binary form in (c : 1)
                rr = roots_in_field(BinaryForm(tuple(reversed(poly)), field))
                out.extend(s / t for (s, t), _ in rr.roots if t != 0)
    return out


def _drop_candidates(f: BinaryForm, d1: int) -> list[tuple[LinearForm, object]]:
    """Pairs ``(l, c)`` with ``f + c l^d`` of first generator degree ``d1 - 1``
    and that generator non-squarefree (even degree ``d = 2(d1 - 1)``).

    With ``A`` the square catalecticant in degree ``e = d1 - 1`` and
    ``l = x + t y``, the kernel created by the rank-one update is
    ``A^-1 col(t)``, polynomial of degree ``e`` in ``t``. Its discriminant is
    interpolated in ``t`` and its roots in the base field give the ``l``.
    """
    field = f.field
    d = f.degree
    e = d1 - 1
    if e < 2 or d != 2 * e:
        return []
    A = catalecticant(f, e)
    if exactla.rank(A, field) < e + 1:
        return []
    npts = 2 * e * (e - 1) + 1
    if field.characteristic and field.characteristic <= npts + 1:
        return []
    xs = [field(i) for i in range(npts)]
    ys = []
    for t in xs:
        col, _ = _rank_one_parts(LinearForm(field.one, t), d, e, field)
        w = exactla.solve(A, col, field)
        K = BinaryForm(tuple(w), field, dual=True)
        ys.append(discriminant(K) if not K.is_zero() else field.zero)
    poly = interpolate(xs, ys, field)
    if all(c == 0 for c in poly):
        return []
    out = []
    for (s, u), _ in roots_in_field(BinaryForm(tuple(reversed(poly)), field)).roots:
        if u == 0:
            continue
        l = LinearForm(field.one, s / u)
        col, row = _rank_one_parts(l, d, e, field)
        w = exactla.solve(A, col, field)
        prod = sum((x * y for x, y in zip(row, w)), field.zero)
        if prod != 0:
            out.append((l, -1 / prod))
    return out


def _dual_roots_as_linear(g: BinaryForm) -> list[LinearForm]:
    try:
        rr = roots_in_field(g)
    except WaringError:
        return []
    return [LinearForm(s, t) for (s, t), _ in rr.roots]


def _raise_options(f: BinaryForm, cert: RankCertificate, rng, trials: int, height: int):
    """Yield ``(step, g, certificate of g)`` for moves raising the rank by one.

    Explicit solutions of the even-degree drop come first, then each
    candidate ``l`` (dual roots of the generators, then random forms) with
    its critical coefficients and two random ones.
    """
    field = f.field
    d = f.degree
    target = cert.rank + 1

    def moves():
        yield from _drop_candidates(f, cert.d1)
        ls = _dual_roots_as_linear(cert.g1)
        ls += _dual_roots_as_linear(cert.g2)
        for n in range(trials):
            l = ls[n] if n < len(ls) else random_linear_forms(1, field, rng, height)[0]
            cs = _critical_coefficients(f, l, cert.d1)
            cs += [random_nonzero(field, rng, height) for _ in range(2)]
            for c in cs:
                yield l, c

    for l, c in moves():
        if c == 0:
            continue
        g = f + power_of_linear(l, d, field) * c
        if g.is_zero():
            continue
        gc = waring_rank(g)
        if gc.rank == target:
            yield ChainStep(l, c, target), g, gc


def rank_raising_chain(
    f: BinaryForm,
    rng: random.Random,
    trials: int = 40,
    height: int = DEFAULT_HEIGHT,
    branch: int = 6,
) -> list[ChainStep]:
    """Add powers ``c * l^d`` one at a time, each raising the rank by exactly
    one, until the rank reaches ``d``.

    Depth-first search: each node explores up to ``branch`` successful moves
    in the order they are found, and ``trials`` bounds the linear forms
    tried per node. Raises :class:`SearchExhausted` when every branch dies.
    """
    d = f.degree
    stuck = []

    def search(f, cert):
        if cert.rank >= d:
            return []
        opts = _raise_options(f, cert, rng, trials, height)
        for step, g, gc in itertools.islice(opts, branch):
            rest = search(g, gc)
            if rest is not None:
                return [step] + rest
        stuck.append(cert.rank)
        return None

    chain = search(f, waring_rank(f))
    if chain is None:
        raise SearchExhausted(
            f"rank-raising search exhausted (degree {d}, dead ends at ranks {sorted(set(stuck))})"
        )
    return chain


# ---------------------------------------------------------------------------
# tangent spaces

def tangent_generators(p: SupragenericPoint, field: Field = None) -> list[BinaryForm]:
    """Spanning forms of the tangent space at ``p``, in the order
    ``y li^(d-1), x li^(d-1)`` for ``i = 1..k``, then
    ``x l0^(d-2) g, y l0^(d-2) g, x l0^(d-1), y l0^(d-1)``."""
    field = field or p.f.field
    d = p.d
    x = BinaryForm.make((1, 0), field)
    y = BinaryForm.make((0, 1), field)
    gens = []
    for l in p.ls[1:]:
        P = power_of_linear(l, d - 1, field)
        gens += [y * P, x * P]
    l0 = p.ls[0]
    Q = power_of_linear(l0, d - 2, field) * p.g.form(field)
    R = power_of_linear(l0, d - 1, field)
    gens += [x * Q, y * Q, x * R, y * R]
    return gens


def tangent_dimension(p: SupragenericPoint) -> int:
    """Affine dimension of the tangent span (projective dimension + 1)."""
    field = p.f.field
    return exactla.rank([g.coeffs for g in tangent_generators(p)], field)


# ---------------------------------------------------------------------------
# census

@dataclass
class RankCensus:
    d: int
    k: int
    samples: int
    frequencies: Counter = dc_field(default_factory=Counter)
    by_kind: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)

    @property
    def allowed(self) -> set[int]:
        return set(range(1, self.k + 2)) | set(range(self.d - self.k, self.d + 1))


def stratum_census(
    d: int,
    k: int,
    samples: int,
    rng: random.Random,
    field: Field = QQ,
    height: int = DEFAULT_HEIGHT,
) -> RankCensus:
    """Ranks of random points of ``{l0^(d-1) g + sum_{i=1..k} l_i^d}``.

    A quarter of the samples set ``g = l0``, a quarter make two of the
    ``l_i`` coincide (``l_j = l_i`` for random ``i < j``, ``j >= 1``).
    Ranks outside ``{1..k+1} | {d-k..d}`` are recorded as failures.
    """
    _check_pair(d, k)
    if samples < 1:
        raise ConstraintError("samples must be >= 1")
    census = RankCensus(d, k, samples)
    allowed = census.allowed
    done = 0
    while done < samples:
        p = _draw_point(d, k, field, rng, height)
        u = rng.random()
        if u < 0.25:
            kind = "g-eq-l0"
            p = SupragenericPoint.assemble(d, k, p.ls, p.ls[0], field)
        elif u < 0.5 and k >= 1:
            kind = "coincident"
            j = rng.randint(1, k)
            i = rng.randint(0, j - 1)
            ls = list(p.ls)
            ls[j] = ls[i]
            p = SupragenericPoint.assemble(d, k, ls, p.g, field)
        else:
            kind = "generic"
        if p.f.is_zero():
            continue
        r = waring_rank(p.f).rank
        census.frequencies[r] += 1
        census.by_kind.setdefault(kind, Counter())[r] += 1
        if r not in allowed:
            census.failures.append((kind, r, str(p.f)))
        done += 1
    return census
