"""Partition calculus for multiple root loci of binary forms.

``Delta_lam`` is the locus of degree-n forms whose roots have multiplicities
``lam``. This module handles the combinatorics around it: refinement (which
governs inclusions of the loci), derived partitions and the inclusion test
for dual varieties, the dimension and degree formulas, and random points of
the conormal variety together with the tangency check they must satisfy.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Optional

from .binpoly import BinaryForm, LinearForm, apolar_action, power_of_linear
from .errors import ConstraintError, DegreeError
from .scalar import QQ, Field, random_scalar

__all__ = [
    "Partition",
    "ConormalSample",
    "partition_make",
    "parse_parts",
    "partitions_of",
    "refines",
    "derived",
    "dual_included",
    "dim_delta",
    "dim_dual",
    "deg_delta",
    "deg_dual",
    "suprageneric_partition",
    "conormal_sample",
    "annihilation_check",
]

MAX_N = 30


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> dict[int, int]:
        """``{i: m_i}`` for every part size ``i`` that occurs."""
        return dict(Counter(self.parts))

    def m(self, i: int) -> int:
        return self.parts.count(i)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts)) or "()"


def partition_make(parts: Iterable[int]) -> Partition:
    parts = tuple(parts)
    for p in parts:
        if not isinstance(p, int) or p <= 0:
            raise ConstraintError(f"partition parts must be positive integers, got {p!r}")
    return Partition(tuple(sorted(parts, reverse=True)))


def parse_parts(text: str) -> Partition:
    text = text.strip()
    if text in ("", "()"):
        return Partition(())
    try:
        return partition_make(int(t) for t in text.split(","))
    except ValueError as exc:
        raise ConstraintError(f"bad partition {text!r}: {exc}") from None


def partitions_of(n: int) -> list[Partition]:
    """All partitions of ``n``, in reverse lexicographic order."""
    out = []

    def rec(rest, cap, acc):
        if rest == 0:
            out.append(Partition(tuple(acc)))
            return
        for p in range(min(rest, cap), 0, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return out


def _same_total(a: Partition, b: Partition):
    if a.n != b.n:
        raise ConstraintError(f"partitions of different integers: {a.n} vs {b.n}")


def refines(mu: Partition, lam: Partition) -> bool:
    """True when the parts of ``mu`` can be grouped into blocks summing to the
    parts of ``lam``."""
    _same_total(mu, lam)
    return _refines(mu.parts, lam.parts)


@lru_cache(maxsize=None)
def _refines(mu: tuple, lam: tuple) -> bool:
    if len(mu) < len(lam):
        return False
    bins = list(lam)
    items = list(mu)  # decreasing; placing big parts first prunes early

    def place(i):
        if i == len(items):
            return all(b == 0 for b in bins)
        x = items[i]
        seen = set()
        for k, b in enumerate(bins):
            if b >= x and b not in seen:
                seen.add(b)
                bins[k] -= x
                if place(i + 1):
                    bins[k] += x
                    return True
                bins[k] += x
        return False

    return place(0)


def derived(lam: Partition) -> Partition:
    """Each part lowered by one, zeros dropped."""
    return Partition(tuple(p - 1 for p in lam.parts if p > 1))


def _compositions(total: int, k: int):
    if k == 0:
        if total == 0:
            yield ()
        return
    if k == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def dual_included(lam: Partition, mu: Partition) -> bool:
    """Inclusion of dual varieties ``Delta_lam^v`` in ``Delta_mu^v``.

    True when ``|lam'| <= |mu'|`` and the surplus can be added to the parts of
    ``lam'`` (keeping their number) so that the result is refined by ``mu'``.
    """
    _same_total(lam, mu)
    if lam.n > MAX_N:
        raise ConstraintError(f"dual inclusion search limited to n <= {MAX_N}")
    return _dual_included(derived(lam).parts, derived(mu).parts)


@lru_cache(maxsize=None)
def _dual_included(lp: tuple, mp: tuple) -> bool:
    surplus = sum(mp) - sum(lp)
    if surplus < 0:
        return False
    seen = set()
    for comp in _compositions(surplus, len(lp)):
        tilde = tuple(sorted((a + b for a, b in zip(lp, comp)), reverse=True))
        if tilde in seen:
            continue
        seen.add(tilde)
        if _refines(mp, tilde):
            return True
    return False


def dim_delta(lam: Partition) -> int:
    return lam.length


def dim_dual(lam: Partition) -> int:
    """``n - m_1 - 1``."""
    if all(p == 1 for p in lam.parts):
        raise ConstraintError("the dual of Delta_(1^n) is degenerate (empty)")
    return lam.n - lam.m(1) - 1


def deg_delta(lam: Partition) -> int:
    """``d! * prod(parts) / prod(m_i!)`` with ``d`` the number of parts."""
    d = lam.length
    num = factorial(d) * prod(lam.parts)
    den = prod(factorial(m) for m in lam.multiplicities().values())
    return num // den


def deg_dual(lam: Partition) -> int:
    """``(d+1)! * prod(part - 1) / prod_{i>=2} m_i!``; only for ``m_1 = 0``."""
    if lam.m(1) > 0:
        raise ConstraintError("deg_dual needs m_1 = 0 (the dual is not a hypersurface otherwise)")
    d = lam.length
    num = factorial(d + 1) * prod(p - 1 for p in lam.parts)
    den = prod(factorial(m) for i, m in lam.multiplicities().items() if i >= 2)
    return num // den


def suprageneric_partition(d: int, k: int) -> Partition:
    """``(3, 2^k, 1^(d-2k-3))``, the partition whose dual is the closure of
    the rank ``d - k`` forms."""
    if k < 0:
        raise ConstraintError(f"k must be >= 0, got {k}")
    if not d - k > (d + 2) // 2:
        raise ConstraintError(f"rank d-k={d - k} is not above the generic rank {(d + 2) // 2}")
    if d - 2 * k - 3 < 0:
        raise ConstraintError(f"d-2k-3 = {d - 2 * k - 3} is negative")
    return Partition((3,) + (2,) * k + (1,) * (d - 2 * k - 3))


@dataclass(frozen=True)
class ConormalSample:
    lam: Partition
    points: tuple  # ((s, t), ...) aligned with lam.parts
    cofactors: tuple  # dual forms of degree part-2, None for parts equal to 1
    f: BinaryForm
    g: BinaryForm


def _random_points(k: int, field: Field, rng: random.Random, height: int) -> list[tuple]:
    pts = []
    while len(pts) < k:
        s, t = random_scalar(field, rng, height), random_scalar(field, rng, height)
        if s == 0 and t == 0:
            continue
        if any(s * t2 - t * s2 == 0 for s2, t2 in pts):
            continue
        pts.append((s, t))
    return pts


def conormal_sample(
    lam: Partition,
    rng: random.Random,
    field: Field = QQ,
    height: int = 10,
) -> ConormalSample:
    """Random point ``(f, g)`` of the conormal variety of ``Delta_lam``.

    ``f = prod (t_i x - s_i y)^lam_i`` and
    ``g = sum_{lam_i >= 2} (s_i u + t_i v)^(n - lam_i + 2) * g_i``.
    """
    if all(p == 1 for p in lam.parts):
        raise ConstraintError("Delta_(1^n) has no conormal points with g != 0")
    n = lam.n
    if field.characteristic and field.characteristic <= n:
        raise ConstraintError(f"need p > n = {n}")
    while True:
        pts = _random_points(lam.length, field, rng, height)
        f = BinaryForm.make((1,), field)
        for (s, t), lp in zip(pts, lam.parts):
            f = f * power_of_linear(LinearForm(t, -s), lp, field)
        g = BinaryForm.zero(n, field, dual=True)
        cofs = []
        for (s, t), lp in zip(pts, lam.parts):
            if lp == 1:
                cofs.append(None)
                continue
            gi = BinaryForm.make([random_scalar(field, rng, height) for _ in range(lp - 1)], field, dual=True)
            cofs.append(gi)
            g = g + power_of_linear(LinearForm(s, t, dual=True), n - lp + 2, field) * gi
        if not g.is_zero():
            return ConormalSample(lam, tuple(pts), tuple(cofs), f, g)


def annihilation_check(sample: ConormalSample, g: Optional[BinaryForm] = None) -> bool:
    """Whether ``prod (t_i x - s_i y)^(lam_i - 1)``, read as a differential
    operator in ``u, v``, kills ``g``."""
    g = sample.g if g is None else g
    field = g.field
    op = BinaryForm.make((1,), field)
    for (s, t), lp in zip(sample.points, sample.lam.parts):
        if lp > 1:
            op = op * power_of_linear(LinearForm(t, -s), lp - 1, field)
    return apolar_action(op, g).is_zero()
