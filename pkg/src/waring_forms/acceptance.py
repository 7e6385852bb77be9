"""Acceptance checks with fixed seeds, shared by ``verify`` and the test suite.

Each check returns a :class:`CriterionResult`. Reports never contain
timings, so two runs with the same seed print identical text.
"""

from __future__ import annotations

import itertools
import random
import time
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Callable, Optional

from . import exactla
from .apolarity import apolar_slice, border_rank, decompose, waring_rank
from .binpoly import (
    BinaryForm,
    LinearForm,
    discriminant,
    interpolate,
    is_squarefree,
    poly_degree,
    power_of_linear,
    roots_in_field,
)
from .errors import SearchExhausted, WaringError
from .hypersurface import context_make, defining_gradient, defining_value, line_degree, q_form
from .partitions import (
    annihilation_check,
    conormal_sample,
    dim_dual,
    dual_included,
    partition_make,
    partitions_of,
    refines,
    suprageneric_partition,
)
from .scalar import QQ, Field, PrimeField, random_nonzero, random_scalar
from .strata import (
    _draw_point,
    generic_rank,
    random_linear_forms,
    rank_raising_chain,
    sample_rank_r,
    special_point,
    stratum_census,
    suprageneric_sample,
    tangent_dimension,
    valid_pairs,
)

__all__ = [
    "CriterionResult",
    "Report",
    "SUITES",
    "brute_force_rank",
    "run_suite",
    "format_report",
]

CHAIN_FIELD = PrimeField(1009)


@dataclass
class CriterionResult:
    cid: str
    title: str
    passed: bool
    counts: dict = dc_field(default_factory=dict)
    notes: list = dc_field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        counts = " ".join(f"{k}={v}" for k, v in self.counts.items())
        return f"criterion {self.cid:<3} {status}  {self.title}  {counts}".rstrip()


@dataclass
class Report:
    suite: str
    seed: int
    results: list
    partial: bool = False
    skipped: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.partial and all(r.passed for r in self.results)


def _rng(seed: int, cid: str) -> random.Random:
    return random.Random(f"{seed}:{cid}")


# ---------------------------------------------------------------------------
# brute-force rank over a prime field

def _power_vectors(d: int, p: int) -> list[list[int]]:
    """``l^d`` for the ``p + 1`` points ``l`` of P^1(F_p), as residue lists."""
    pts = [(1, t) for t in range(p)] + [(0, 1)]
    return [[comb(d, i) * pow(a, d - i, p) * pow(b, i, p) % p for i in range(d + 1)] for a, b in pts]


def _reduce(v: list[int], basis: list[tuple[int, list[int]]], p: int) -> list[int]:
    v = list(v)
    for piv, row in basis:
        c = v[piv]
        if c:
            v = [(x - c * y) % p for x, y in zip(v, row)]
    return v


def brute_force_rank(f: BinaryForm) -> int:
    """Smallest ``r`` such that ``f`` lies in the span of ``r`` of the
    vectors ``l^d``, ``l`` ranging over P^1(F_p). Plain modular arithmetic,
    depth-first over subsets in index order with an incremental echelon
    basis."""
    field = f.field
    if not isinstance(field, PrimeField):
        raise WaringError("the brute-force oracle needs a prime field")
    p = field.p
    d = f.degree
    target = [int(c) % p for c in f.coeffs]
    if not any(target):
        return 0
    vecs = _power_vectors(d, p)

    def search(start: int, basis, r: int) -> bool:
        if len(basis) == r:
            return not any(_reduce(target, basis, p))
        for i in range(start, len(vecs) - (r - len(basis)) + 1):
            v = _reduce(vecs[i], basis, p)
            piv = next((j for j, x in enumerate(v) if x), None)
            if piv is None:
                continue
            inv = pow(v[piv], p - 2, p)
            v = [x * inv % p for x in v]
            nb = [(q, [(x - row[piv] * y) % p for x, y in zip(row, v)]) for q, row in basis]
            if search(i + 1, nb + [(piv, v)], r):
                return True
        return False

    for r in range(1, len(vecs) + 1):
        if search(0, [], r):
            return r
    raise WaringError("form outside the span of all powers")


def _safe_linear(rng, p):
    while True:
        a, b = rng.randrange(p), rng.randrange(p)
        if a or b:
            return LinearForm(a, b)


def crit_rank_oracle(seed: int, samples: int = 500) -> tuple[CriterionResult, CriterionResult]:
    rng = _rng(seed, "1")
    forms = _fp_forms(rng, samples)
    mism = 0
    below = 0
    checked_eq = 0
    split_mismatch = 0
    unenumerated = 0
    by_cell: Counter = Counter()
    for p, d, f in forms:
        rule = waring_rank(f).rank
        oracle = brute_force_rank(f)
        if rule != oracle:
            mism += 1
            by_cell[(p, d)] += 1
        if oracle < rule:
            below += 1
        has = _split_squarefree_in_slice(f, rule)
        if has is None:
            unenumerated += 1
        else:
            checked_eq += 1
            if has != (oracle == rule):
                split_mismatch += 1
    r1 = CriterionResult(
        "1",
        "rank rule equals brute-force rank over F_7, F_11",
        mism == 0,
        {"forms": len(forms), "mismatches": mism},
        [f"mismatches by (p, d): {dict(sorted(by_cell.items()))}"] if mism else [],
    )
    r1b = CriterionResult(
        "1b",
        "brute-force rank >= rule, equal iff a squarefree split apolar form of that degree exists",
        below == 0 and split_mismatch == 0,
        {
            "forms": len(forms),
            "oracle_below_rule": below,
            "iff_checked": checked_eq,
            "iff_violations": split_mismatch,
            "not_enumerated": unenumerated,
        },
    )
    return r1, r1b


def _fp_forms(rng, total):
    """``(p, d, form)`` over F_7 and F_11, degrees 3..6, alternating uniform
    coefficients with sums of ``r`` random powers for cycling ``r``."""
    cells = [(p, d) for p in (7, 11) for d in (3, 4, 5, 6)]
    out = []
    for n in range(total):
        p, d = cells[n % len(cells)]
        F = PrimeField(p)
        slot = n // len(cells)
        while True:
            if slot % 2 == 0:
                f = BinaryForm.make([rng.randrange(p) for _ in range(d + 1)], F)
            else:
                r = 1 + (slot // 2) % (d + 1)
                f = BinaryForm.zero(d, F)
                for _ in range(r):
                    f = f + power_of_linear(_safe_linear(rng, p), d, F) * rng.randrange(1, p)
            if not f.is_zero():
                break
        out.append((p, d, f))
    return out


ENUM_CAP = 20000


def _split_squarefree_in_slice(f: BinaryForm, r: int) -> Optional[bool]:
    """Whether the degree-``r`` apolar slice has a squarefree member with all
    roots in F_p. ``None`` when the slice is too large to enumerate."""
    field = f.field
    p = field.p
    basis = apolar_slice(f, r)
    m = len(basis)
    if m == 0:
        return False
    if (p ** m - 1) // (p - 1) > ENUM_CAP:
        return None
    # projective enumeration: first nonzero coordinate equal to one
    for lead in range(m):
        for tail in itertools.product(range(p), repeat=m - lead - 1):
            coeffs = [0] * lead + [1] + list(tail)
            g = basis[0] * 0
            for c, b in zip(coeffs, basis):
                if c:
                    g = g + b * c
            if g.is_zero():
                continue
            try:
                if is_squarefree(g) and roots_in_field(g).split:
                    return True
            except WaringError:
                continue
    return False


# ---------------------------------------------------------------------------
# criterion 2

def crit_generic_rank(seed: int, per_degree: int = 200, height: int = 50) -> CriterionResult:
    rng = _rng(seed, "2")
    worst = Fraction(1)
    over = 0
    total = 0
    notes = []
    for d in range(5, 11):
        g = generic_rank(d)
        hits = 0
        for _ in range(per_degree):
            f = BinaryForm.make([random_scalar(QQ, rng, height) for _ in range(d + 1)], QQ)
            while f.is_zero():
                f = BinaryForm.make([random_scalar(QQ, rng, height) for _ in range(d + 1)], QQ)
            total += 1
            if waring_rank(f).rank == g:
                hits += 1
            if border_rank(f) > g:
                over += 1
        frac = Fraction(hits, per_degree)
        worst = min(worst, frac)
        notes.append(f"d={d}: {hits}/{per_degree} at generic rank {g}")
    return CriterionResult(
        "2",
        "generic rank share >= 95%, border rank <= generic",
        worst >= Fraction(95, 100) and over == 0,
        {"forms": total, "min_share": f"{worst.numerator}/{worst.denominator}", "border_over": over},
        notes,
    )


# ---------------------------------------------------------------------------
# criterion 3

def crit_suprageneric_structure(seed: int, samples: int = 100, dmax: int = 11) -> CriterionResult:
    rng = _rng(seed, "3")
    fails = Counter()
    n = 0
    for d, k in valid_pairs(dmax):
        expected_profile = ((2, 1), (1, k)) if k else ((2, 1),)
        if dim_dual(suprageneric_partition(d, k)) != 2 * k + 2:
            fails["dim_dual"] += 1
        for _ in range(samples):
            pt = _draw_point(d, k, QQ, rng, 50)
            n += 1
            cert = waring_rank(pt.f)
            if cert.rank != d - k:
                fails["rank"] += 1
            if cert.d1 != k + 2 or cert.g1_profile != expected_profile:
                fails["generator"] += 1
            if border_rank(pt.f) != k + 2:
                fails["border_rank"] += 1
    return CriterionResult(
        "3",
        "suprageneric samples: rank d-k, g1 = l0^2 l1..lk, border rank k+2, dim_dual 2k+2",
        not fails,
        {"pairs": len(valid_pairs(dmax)), "samples": n, "failures": sum(fails.values())},
        [f"failures by kind: {dict(fails)}"] if fails else [],
    )


# ---------------------------------------------------------------------------
# criterion 4

def crit_census(seed: int, samples: int = 200, dmax: int = 11) -> CriterionResult:
    rng = _rng(seed, "4-census")
    flagged = 0
    over_special = 0
    n = 0
    notes = []
    for d, k in valid_pairs(dmax):
        c = stratum_census(d, k, samples, rng)
        n += c.samples
        flagged += len(c.failures)
        special = c.by_kind.get("g-eq-l0", Counter())
        over_special += sum(v for r, v in special.items() if r > k + 1)
        for kind, r, f in c.failures[:3]:
            notes.append(f"(d={d}, k={k}) {kind}: rank {r} for {f}")
    return CriterionResult(
        "4",
        "census: ranks in {1..k+1} u {d-k..d}; g = l0 gives rank <= k+1",
        flagged == 0 and over_special == 0,
        {"pairs": len(valid_pairs(dmax)), "samples": n, "flagged": flagged, "g_eq_l0_over": over_special},
        notes,
    )


def _chain_ok(f: BinaryForm, steps) -> bool:
    d = f.degree
    r = waring_rank(f).rank
    for st in steps:
        f = f + power_of_linear(st.l, d, f.field) * st.c
        nr = waring_rank(f).rank
        if nr != r + 1 or nr != st.rank:
            return False
        r = nr
    return r == d


def crit_chain(seed: int, starts: int = 50, dmax: int = 9, field: Field = CHAIN_FIELD) -> CriterionResult:
    """Chains from every start rank ``d - i``, ``i <= 3``, over a prime field
    (the generic-rank crossings need roots that Q rarely has)."""
    rng = _rng(seed, "4-chain")
    failed = Counter()
    n = 0
    for d in range(3, dmax + 1):
        for i in range(0, 4):
            r = d - i
            if r < 1:
                continue
            for _ in range(starts):
                f, _ = sample_rank_r(d, r, rng, field)
                n += 1
                try:
                    steps = rank_raising_chain(f, rng)
                except SearchExhausted:
                    failed[(d, r)] += 1
                    continue
                if not _chain_ok(f, steps):
                    failed[(d, r)] += 1
    return CriterionResult(
        "4c",
        f"rank-raising chains from every start rank d-i (i <= 3, d <= {dmax}) over {field}",
        not failed,
        {"starts": n, "failed": sum(failed.values())},
        [f"failures by (d, start rank): {dict(sorted(failed.items()))}"] if failed else [],
    )


def crit_chain_suprageneric(seed: int, starts: int = 50, dmax: int = 9) -> CriterionResult:
    """Chains over Q from the suprageneric start ranks, the regime of the
    stratification argument."""
    rng = _rng(seed, "4-chain-q")
    failed = Counter()
    n = 0
    for d in range(3, dmax + 1):
        for i in range(1, 4):
            r = d - i
            if r <= generic_rank(d):
                continue
            for _ in range(starts):
                f, _ = sample_rank_r(d, r, rng, QQ)
                n += 1
                try:
                    ok = _chain_ok(f, rank_raising_chain(f, rng))
                except SearchExhausted:
                    ok = False
                if not ok:
                    failed[(d, r)] += 1
    return CriterionResult(
        "4q",
        "rank-raising chains over Q from suprageneric start ranks",
        not failed,
        {"starts": n, "failed": sum(failed.values())},
        [f"failures by (d, start rank): {dict(sorted(failed.items()))}"] if failed else [],
    )


# ---------------------------------------------------------------------------
# criterion 5

TANGENT_PAIRS = ((7, 1), (7, 2), (9, 2), (9, 3))


def crit_tangent(seed: int, samples: int = 100) -> CriterionResult:
    rng = _rng(seed, "5")
    bad = Counter()
    n = 0
    for d, k in TANGENT_PAIRS:
        kinds = ["generic", "g-eq-l0"] + (["li-eq-lj"] if k >= 2 else [])
        for kind in kinds:
            for _ in range(samples):
                n += 1
                t = tangent_dimension(special_point(d, k, kind, rng))
                ok = t == 2 * k + 3 if kind == "generic" else t <= 2 * k + 2
                if not ok:
                    bad[(d, k, kind)] += 1
    return CriterionResult(
        "5",
        "tangent rank 2k+3 at general points, <= 2k+2 when g = l0 or l1 = l2",
        not bad,
        {"points": n, "violations": sum(bad.values())},
        [f"violations: {dict(bad)}"] if bad else [],
    )


# ---------------------------------------------------------------------------
# criteria 6, 7 and the desk-scale part of 9

def _hyper_point(k: int, rng, height=50):
    """A random point of the rank ``k + 2`` family in degree ``2k + 1``."""
    d = 2 * k + 1
    while True:
        pt = _draw_point(d, k - 1, QQ, rng, height)
        if waring_rank(pt.f).rank == k + 2:
            return pt.f


def _random_form(d, rng, height=50):
    while True:
        f = BinaryForm.make([random_scalar(QQ, rng, height) for _ in range(d + 1)], QQ)
        if not f.is_zero():
            return f


def crit_hypersurface(seed: int, ks=(1, 2, 3), samples: int = 100, lines: int = 3) -> CriterionResult:
    rng = _rng(seed, "6")
    bad = Counter()
    notes = []
    for k in ks:
        ctx = context_make(k)
        d = 2 * k + 1
        for _ in range(samples):
            if defining_value(ctx, _hyper_point(k, rng)) != 0:
                bad[(k, "nonvanishing")] += 1
            if defining_value(ctx, _random_form(d, rng)) == 0:
                bad[(k, "vanishing_generic")] += 1
        degs = {line_degree(ctx, _random_form(d, rng), _random_form(d, rng)) for _ in range(lines)}
        notes.append(f"k={k}: line degrees {sorted(degs)} (expected {2 * k * (k + 1)})")
        if degs != {2 * k * (k + 1)}:
            bad[(k, "degree")] += 1
        if k == 1:
            ratios = set()
            for _ in range(50):
                f = _random_form(3, rng)
                disc = discriminant(f)
                val = defining_value(ctx, f)
                if disc == 0:
                    ratios.add("zero" if val == 0 else "mismatch")
                else:
                    ratios.add(val / disc)
            notes.append(f"k=1: defining value / cubic discriminant = {sorted(map(str, ratios))}")
            if len(ratios) != 1 or not all(isinstance(r, Fraction) and r != 0 for r in ratios):
                bad[(1, "proportionality")] += 1
    return CriterionResult(
        "6",
        "hypersurface equation: vanishing, degree 2k(k+1), cubic discriminant for k=1",
        not bad,
        {"ks": ",".join(map(str, ks)), "violations": sum(bad.values())},
        notes + ([f"violations: {dict(bad)}"] if bad else []),
    )


def _low_rank_form(d, r, rng, height=50):
    while True:
        f = BinaryForm.zero(d, QQ)
        for l in random_linear_forms(r, QQ, rng, height):
            f = f + power_of_linear(l, d, QQ) * random_nonzero(QQ, rng, height)
        if not f.is_zero():
            return f


def secant_slope(ctx, f: BinaryForm, v: BinaryForm):
    """Exact first-order coefficient of ``t -> D(f + t v)``, by interpolation."""
    n = 2 * ctx.k * (ctx.k + 1) + 1
    xs = [Fraction(i) for i in range(n)]
    ys = [defining_value(ctx, f + v * x) for x in xs]
    coeffs = interpolate(xs, ys, QQ)
    return coeffs[1] if len(coeffs) > 1 else Fraction(0)


def crit_gradient(seed: int, ks=(1, 2, 3), samples: int = 100, secants: int = 20) -> CriterionResult:
    rng = _rng(seed, "7")
    bad = Counter()
    for k in ks:
        ctx = context_make(k)
        d = 2 * k + 1
        for n in range(samples):
            f = _low_rank_form(d, 1 + n % k, rng)
            if any(x != 0 for x in defining_gradient(ctx, f)):
                bad[(k, "nonzero_on_low_rank")] += 1
            if all(x == 0 for x in defining_gradient(ctx, _hyper_point(k, rng))):
                bad[(k, "zero_at_smooth_point")] += 1
        for _ in range(secants):
            f = _random_form(d, rng)
            v = _random_form(d, rng, 5)
            grad = defining_gradient(ctx, f)
            directional = sum((g * c for g, c in zip(grad, v.coeffs)), Fraction(0))
            if secant_slope(ctx, f, v) != directional:
                bad[(k, "secant")] += 1
    return CriterionResult(
        "7",
        "gradient zero on rank <= k, nonzero at rank k+2 points, matches secant slopes",
        not bad,
        {"ks": ",".join(map(str, ks)), "violations": sum(bad.values())},
        [f"violations: {dict(bad)}"] if bad else [],
    )


def crit_singular_components(seed: int, ks=(2, 3), samples: int = 20) -> CriterionResult:
    """Desk-scale stand-in for the component degree computations: the
    gradient vanishes where ``q`` has a root of multiplicity ``k + 1``, i.e.
    on forms ``m^(k+1) h``. The component degrees themselves are not
    computed."""
    rng = _rng(seed, "9")
    bad = Counter()
    for k in ks:
        ctx = context_make(k)
        d = 2 * k + 1
        for _ in range(samples):
            while True:
                (m,) = random_linear_forms(1, QQ, rng, 20)
                f = power_of_linear(m, k + 1, QQ) * _random_form(k, rng, 20)
                q = q_form(f)
                if not q.is_zero() and waring_rank(f).d1 == k + 1:
                    break
            if roots_in_field(q).roots[0][1] != k + 1:
                bad[(k, "q_not_a_power")] += 1
            if any(x != 0 for x in defining_gradient(ctx, f)):
                bad[(k, "gradient")] += 1
    return CriterionResult(
        "9",
        "component degrees 10/24/36 not reproduced; probe: gradient zero on m^(k+1) h",
        not bad,
        {"ks": ",".join(map(str, ks)), "violations": sum(bad.values())},
        [
            "the degree 10/24/36 components and the closure equalities are not certified; "
            "criteria 3, 4, 6 and 7 are the sampled two-sided checks"
        ]
        + ([f"violations: {dict(bad)}"] if bad else []),
    )


# ---------------------------------------------------------------------------
# criterion 8

CONORMAL_PARTITIONS = [
    (2,), (3,), (2, 1), (2, 2), (3, 1), (4,), (2, 1, 1), (3, 2), (2, 2, 1), (4, 1),
    (3, 1, 1), (3, 3), (4, 2), (3, 2, 1), (2, 2, 2), (5, 1, 1), (3, 2, 2, 1),
    (4, 3, 1), (2, 2, 2, 2, 2), (3, 3, 2, 1, 1),
]


def _is_partial_order(elems, rel) -> bool:
    for a in elems:
        if not rel(a, a):
            return False
    for a, b in itertools.product(elems, repeat=2):
        if a != b and rel(a, b) and rel(b, a):
            return False
    for a, b, c in itertools.product(elems, repeat=3):
        if rel(a, b) and rel(b, c) and not rel(a, c):
            return False
    return True


def crit_partitions(seed: int, nmax: int = 9, samples: int = 100, dmax: int = 15) -> CriterionResult:
    rng = _rng(seed, "8")
    bad = Counter()
    for n in range(1, nmax + 1):
        ps = partitions_of(n)
        if not _is_partial_order(ps, refines):
            bad["refines"] += 1
        if not _is_partial_order(ps, dual_included):
            bad["dual_included"] += 1
    if not dual_included(partition_make((4, 1, 1)), partition_make((3, 2, 1))):
        bad["example"] += 1
    for d in range(3, dmax + 1):
        ks = [k for k in range(d) if d - k > generic_rank(d)]
        for k in ks[:-1]:
            if not dual_included(suprageneric_partition(d, k), suprageneric_partition(d, k + 1)):
                bad["nesting"] += 1
    n = 0
    for parts in CONORMAL_PARTITIONS:
        lam = partition_make(parts)
        for _ in range(samples):
            n += 1
            if not annihilation_check(conormal_sample(lam, rng)):
                bad["annihilation"] += 1
    return CriterionResult(
        "8",
        "refinement and dual inclusion are partial orders; nesting; conormal annihilation",
        not bad,
        {"nmax": nmax, "conormal_samples": n, "violations": sum(bad.values())},
        [f"violations: {dict(bad)}"] if bad else [],
    )


# ---------------------------------------------------------------------------
# suites

SUITES: dict[str, Callable] = {
    "apolarity": lambda seed, ks: [
        lambda: crit_rank_oracle(seed),
        lambda: crit_generic_rank(seed),
    ],
    "strata": lambda seed, ks: [
        lambda: crit_suprageneric_structure(seed),
        lambda: crit_census(seed),
        lambda: crit_chain(seed),
        lambda: crit_chain_suprageneric(seed),
        lambda: crit_tangent(seed),
    ],
    "partitions": lambda seed, ks: [lambda: crit_partitions(seed)],
    "hypersurface": lambda seed, ks: [
        lambda: crit_hypersurface(seed, ks),
        lambda: crit_gradient(seed, ks),
        lambda: crit_singular_components(seed, tuple(k for k in ks if k >= 2) or (2,)),
    ],
}


def run_suite(
    suite: str,
    seed: int = 42,
    budget: Optional[float] = None,
    ks=(1, 2, 3),
    echo: Optional[Callable[[str], None]] = None,
) -> Report:
    """Run a named suite (or ``all``). Checks not started before the budget
    (seconds) runs out are listed as skipped and the report is partial."""
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        if name not in SUITES:
            raise WaringError(f"unknown suite {suite!r}")
    report = Report(suite, seed, [])
    t0 = time.monotonic()
    for name in names:
        for i, check in enumerate(SUITES[name](seed, tuple(ks))):
            if budget is not None and time.monotonic() - t0 > budget:
                report.partial = True
                report.skipped.append(f"{name}#{i + 1}")
                continue
            out = check()
            for res in out if isinstance(out, tuple) else (out,):
                report.results.append(res)
                if echo:
                    echo(res.line())
                    for note in res.notes:
                        echo(f"    {note}")
    return report


def format_report(report: Report) -> str:
    lines = [f"verify {report.suite} seed={report.seed}"]
    for r in report.results:
        lines.append(r.line())
        lines.extend(f"    {n}" for n in r.notes)
    if report.partial:
        lines.append(f"PARTIAL: budget exceeded, not run: {', '.join(report.skipped)}")
    lines.append("OK" if report.passed else "FAILED")
    return "\n".join(lines)
