"""Catalecticants, apolar ideals and Waring rank of binary forms.

The apolar ideal of a nonzero binary form ``f`` of degree d is a complete
intersection ``(g1, g2)`` with ``deg g1 + deg g2 = d + 2``. The rank is
``deg g1`` when ``g1`` is squarefree and ``deg g2`` otherwise. ``g1`` is read
off the first catalecticant with a nontrivial kernel.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from math import factorial
from typing import Optional

from . import exactla
from .binpoly import (
    BinaryForm,
    LinearForm,
    apolar_action,
    is_squarefree,
    power_of_linear,
    roots_in_field,
    squarefree_profile,
)
from .errors import DegreeError, InternalError, WaringError
from .scalar import Field, random_scalar

__all__ = [
    "ApolarPair",
    "RankCertificate",
    "WaringDecomposition",
    "DecomposeResult",
    "catalecticant",
    "apolar_slice",
    "apolar_pair",
    "waring_rank",
    "border_rank",
    "decompose",
    "forbidden_probe",
]


def catalecticant(f: BinaryForm, e: int) -> list[list]:
    """Matrix of ``g -> apolar_action(g, f)`` on dual forms of degree ``e``.

    Column ``j`` is the image of ``u^(e-j) v^j``, row ``m`` the coefficient of
    ``x^(d-e-m) y^m``. Entry ``(m, j)`` is ``c_(m+j) * (d-m-j)! (m+j)! /
    ((d-e-m)! m!)``: the factorials come from literal differentiation and
    only rescale rows, so the kernel equals that of the Hankel matrix of the
    divided-power coordinates ``c_i / binom(d, i)``.
    """
    d = f.degree
    if not 0 <= e <= d:
        raise DegreeError(f"catalecticant degree e={e} outside [0, {d}]")
    field = f.field
    c = f.coeffs
    rows = []
    for m in range(d - e + 1):
        row = []
        for j in range(e + 1):
            w = factorial(d - m - j) * factorial(m + j) // (factorial(d - e - m) * factorial(m))
            row.append(c[m + j] * w)
        rows.append(row)
    return rows


def apolar_slice(f: BinaryForm, e: int) -> list[BinaryForm]:
    """Basis of the degree-``e`` part of the apolar ideal of ``f``."""
    field = f.field
    if e > f.degree:
        return [BinaryForm.monomial(e, j, field, dual=not f.dual) for j in range(e + 1)]
    K = exactla.kernel_basis(catalecticant(f, e), field, ncols=e + 1)
    return [BinaryForm(tuple(v), field, not f.dual) for v in K]


@dataclass(frozen=True)
class ApolarPair:
    g1: BinaryForm
    g2: BinaryForm

    @property
    def d1(self) -> int:
        return self.g1.degree

    @property
    def d2(self) -> int:
        return self.g2.degree


@dataclass(frozen=True)
class RankCertificate:
    rank: int
    g1: BinaryForm
    g2: BinaryForm
    g1_squarefree: bool
    g1_profile: tuple
    d1: int
    d2: int


def _reduce_mod(v: BinaryForm, rows_rref, pivots) -> BinaryForm:
    cs = list(v.coeffs)
    for r, pc in zip(rows_rref, pivots):
        if cs[pc] != 0:
            f = cs[pc]
            cs = [a - f * b for a, b in zip(cs, r)]
    return BinaryForm(tuple(cs), v.field, v.dual)


def apolar_pair(f: BinaryForm) -> ApolarPair:
    """The two generators of the apolar ideal, ``deg g1 <= deg g2``.

    When ``d1 == d2`` the lowest slice is a pencil; ``g1`` is then chosen
    squarefree whenever the pencil contains a squarefree member.
    """
    if f.is_zero():
        raise WaringError("the zero form has no apolar ideal generators")
    d = f.degree
    if d < 1:
        raise DegreeError("apolar generators need degree >= 1")
    field = f.field
    for e in range(1, d + 2):
        K = apolar_slice(f, e)
        if K:
            break
    d1 = e
    d2 = d + 2 - d1
    if len(K) == 2:
        if d1 != d2:
            raise InternalError(f"two generators in degree {d1} but d + 2 - d1 = {d2}")
        g1, g2 = _pencil_choice(K[0].monic(), K[1])
        return ApolarPair(g1, g2)
    if len(K) != 1:
        raise InternalError(f"apolar slice of dimension {len(K)} in lowest degree {d1}")
    g1 = K[0].monic()
    if d2 < d1:
        raise InternalError(f"first generator degree {d1} exceeds (d+2)/2")
    shift = d2 - d1
    multiples = [
        (g1 * BinaryForm.monomial(shift, j, field, dual=g1.dual)).coeffs for j in range(shift + 1)
    ]
    R, pivots = exactla.rref(multiples, field)
    R = R[: len(pivots)]
    for v in apolar_slice(f, d2):
        rem = _reduce_mod(v, R, pivots)
        if not rem.is_zero():
            return ApolarPair(g1, rem.monic())
    raise InternalError("no second generator found")


def _pencil_choice(a: BinaryForm, b: BinaryForm) -> tuple[BinaryForm, BinaryForm]:
    if _safe_squarefree(a):
        return a, b
    if _safe_squarefree(b):
        return b.monic(), a
    field = a.field
    limit = field.characteristic or 4 * a.degree + 4
    for t in range(1, limit):
        c = (a + b * t).monic()
        if _safe_squarefree(c):
            return c, b
    return a, b


def _safe_squarefree(g: BinaryForm) -> bool:
    try:
        return is_squarefree(g)
    except WaringError:
        return False


def waring_rank(f: BinaryForm) -> RankCertificate:
    """Rank by the apolar generator rule: ``d1`` if ``g1`` is squarefree, else ``d2``."""
    pair = apolar_pair(f)
    prof = squarefree_profile(pair.g1)
    sf = all(m == 1 for m, _ in prof)
    return RankCertificate(
        rank=pair.d1 if sf else pair.d2,
        g1=pair.g1,
        g2=pair.g2,
        g1_squarefree=sf,
        g1_profile=prof,
        d1=pair.d1,
        d2=pair.d2,
    )


def border_rank(f: BinaryForm) -> int:
    """Rank of the most nearly square catalecticant."""
    if f.is_zero():
        raise WaringError("border rank of the zero form")
    return exactla.rank(catalecticant(f, f.degree // 2), f.field)


@dataclass(frozen=True)
class WaringDecomposition:
    """``f = sum(coef * l^d)`` with pairwise non-proportional ``l``."""

    terms: tuple  # ((coef, LinearForm), ...)
    degree: int

    def reconstruct(self, field: Field) -> BinaryForm:
        out = BinaryForm.zero(self.degree, field)
        for c, l in self.terms:
            out = out + power_of_linear(l, self.degree, field) * c
        return out

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class DecomposeResult:
    certificate: RankCertificate
    decomposition: Optional[WaringDecomposition]
    generator: BinaryForm
    attempts: int = 0

    @property
    def split(self) -> bool:
        return self.decomposition is not None


def _from_generator(f: BinaryForm, h: BinaryForm) -> Optional[WaringDecomposition]:
    field = f.field
    try:
        if not is_squarefree(h):
            return None
    except WaringError:
        return None
    rr = roots_in_field(h)
    if not rr.split:
        return None
    lins = [LinearForm(s, t) for (s, t), _ in rr.roots]
    d = f.degree
    powers = [power_of_linear(l, d, field).coeffs for l in lins]
    A = [[powers[j][i] for j in range(len(lins))] for i in range(d + 1)]
    lam = exactla.solve(A, list(f.coeffs), field)
    if lam is None:
        raise InternalError(f"generator {h} annihilates f but its roots do not span it")
    dec = WaringDecomposition(tuple((c, l) for c, l in zip(lam, lins) if c != 0), d)
    if dec.reconstruct(field) != f:
        raise InternalError("decomposition does not reconstruct f")
    return dec


def decompose(
    f: BinaryForm,
    rng: Optional[random.Random] = None,
    retries: int = 50,
    height: int = 20,
) -> DecomposeResult:
    """Minimal Waring decomposition when one exists over the base field.

    The generator is ``g1`` when it is squarefree, otherwise a random element
    ``g2 + h*g1`` of the rank-degree slice of the apolar ideal. When no tried
    generator is squarefree and split, only the certificate is returned.
    """
    rng = rng or random.Random(0)
    cert = waring_rank(f)
    field = f.field
    first = cert.g1 if cert.g1_squarefree else cert.g2
    if cert.rank == cert.d1 and cert.d1 < cert.d2:
        basis = [cert.g1]
    else:
        basis = apolar_slice(f, cert.rank)
    h = first
    for attempt in range(retries + 1):
        if attempt:
            h = first * 0
            for b in basis:
                h = h + b * random_scalar(field, rng, height)
            if h.is_zero():
                continue
        dec = _from_generator(f, h)
        if dec is not None:
            if len(dec) != cert.rank:
                raise InternalError(f"decomposition of length {len(dec)} for rank {cert.rank}")
            return DecomposeResult(cert, dec, h, attempt)
        if len(basis) == 1:
            break
    return DecomposeResult(cert, None, first, attempt)


def forbidden_probe(f: BinaryForm, l: LinearForm, c=1) -> tuple[int, int]:
    """Ranks of ``f`` and ``f + c*l^d``."""
    d = f.degree
    if d < 1:
        raise DegreeError("probe needs degree >= 1")
    g = f + power_of_linear(l, d, f.field) * c
    before = waring_rank(f).rank
    after = waring_rank(g).rank if not g.is_zero() else 0
    return before, after
