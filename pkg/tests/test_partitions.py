import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy.functions.combinatorial.numbers import partition as npartitions
from sympy.utilities.iterables import multiset_partitions

from waring_forms.binpoly import LinearForm, power_of_linear
from waring_forms.errors import ConstraintError
from waring_forms.partitions import (
    Partition,
    annihilation_check,
    conormal_sample,
    deg_delta,
    deg_dual,
    derived,
    dim_delta,
    dim_dual,
    dual_included,
    parse_parts,
    partition_make,
    partitions_of,
    refines,
    suprageneric_partition,
)
from waring_forms.scalar import QQ, PrimeField
from waring_forms.strata import valid_pairs


def P(*parts):
    return partition_make(parts)


def refines_by_grouping(mu, lam):
    """Oracle: enumerate every grouping of the parts of mu."""
    target = sorted(lam.parts)
    return any(
        sorted(sum(b) for b in blocks) == target
        for blocks in multiset_partitions(list(mu.parts))
    )


def test_partition_make_normalises():
    p = P(1, 3)
    assert p.parts == (3, 1) and p.n == 4
    assert P(3, 2, 1, 1).n == 7
    with pytest.raises(ConstraintError):
        P(2, 0)
    assert parse_parts("3,2,1,1") == P(3, 2, 1, 1)
    assert parse_parts("()").n == 0


@pytest.mark.parametrize("n", range(1, 13))
def test_partition_count(n):
    ps = partitions_of(n)
    assert len(ps) == npartitions(n)
    assert len(set(ps)) == len(ps)
    for p in ps:
        assert p.n == n
        assert sum(i * m for i, m in p.multiplicities().items()) == n


def test_refines_examples():
    assert refines(P(2, 1, 1), P(2, 2))
    assert not refines(P(3, 1), P(2, 2))
    for lam in partitions_of(6):
        assert refines(P(*[1] * 6), lam)
    with pytest.raises(ConstraintError):
        refines(P(2), P(2, 1))


@pytest.mark.parametrize("n", range(1, 9))
def test_refines_matches_grouping_oracle(n):
    ps = partitions_of(n)
    for mu, lam in itertools.product(ps, ps):
        assert refines(mu, lam) == refines_by_grouping(mu, lam), (mu, lam)


@pytest.mark.parametrize("n", range(1, 10))
def test_refines_is_partial_order(n):
    ps = partitions_of(n)
    rel = {(a, b): refines(a, b) for a in ps for b in ps}
    for a in ps:
        assert rel[a, a]
    for a, b in itertools.product(ps, ps):
        if a != b:
            assert not (rel[a, b] and rel[b, a])
    for a, b, c in itertools.product(ps, ps, ps):
        if rel[a, b] and rel[b, c]:
            assert rel[a, c]


def test_derived():
    assert derived(P(3, 2, 1, 1)) == P(2, 1)
    assert derived(P(1, 1, 1)) == Partition(())
    for d, k in valid_pairs(15):
        assert derived(suprageneric_partition(d, k)) == P(2, *[1] * k)


@given(st.lists(st.integers(1, 8), min_size=1, max_size=8))
def test_derived_total(parts):
    lam = partition_make(parts)
    assert derived(lam).n == lam.n - lam.length


def test_dual_included_examples():
    assert dual_included(P(4, 1, 1), P(3, 2, 1))
    assert not dual_included(P(3, 2), P(2, 2, 1))
    assert dual_included(P(3, 2), P(3, 2))
    with pytest.raises(ConstraintError):
        dual_included(P(3), P(2, 1, 1))


@pytest.mark.parametrize("n", range(2, 10))
def test_dual_included_reflexive_transitive(n):
    ps = [p for p in partitions_of(n) if p.m(1) < n]
    rel = {(a, b): dual_included(a, b) for a in ps for b in ps}
    for a in ps:
        assert rel[a, a]
    for a, b, c in itertools.product(ps, ps, ps):
        if rel[a, b] and rel[b, c]:
            assert rel[a, c]


def test_dual_inclusion_respects_dimension():
    # an included variety cannot have larger dimension
    for n in range(2, 9):
        ps = [p for p in partitions_of(n) if p.m(1) < n]
        for a, b in itertools.product(ps, ps):
            if dual_included(a, b):
                assert dim_dual(a) <= dim_dual(b)


def test_suprageneric_chain_is_nested():
    for d in range(3, 16):
        ks = sorted(k for dd, k in valid_pairs(d) if dd == d)
        for k0, k1 in zip(ks, ks[1:]):
            assert dual_included(suprageneric_partition(d, k0), suprageneric_partition(d, k1))


def test_dimension_formulas():
    assert dim_delta(P(5)) == 1
    assert dim_delta(P(*[1] * 5)) == 5
    assert dim_dual(P(5)) == 4
    assert dim_dual(P(2, 1, 1, 1)) == 1
    with pytest.raises(ConstraintError):
        dim_dual(P(1, 1, 1))
    for d, k in valid_pairs(20):
        lam = suprageneric_partition(d, k)
        assert dim_dual(lam) == 2 * k + 2
        assert dim_delta(lam) == d - k - 2


def test_degree_formulas():
    for n in range(2, 21):
        assert deg_delta(P(n)) == n
        assert deg_delta(P(*[1] * n)) == 1
        assert deg_delta(P(2, *[1] * (n - 2))) == 2 * (n - 1)
        assert deg_dual(P(n)) == 2 * (n - 1)
    assert deg_dual(P(2, 2)) == 3
    assert deg_dual(P(3, 2)) == 12
    with pytest.raises(ConstraintError):
        deg_dual(P(3, 1))


def test_suprageneric_partition():
    assert suprageneric_partition(6, 0) == P(3, 1, 1, 1)
    assert suprageneric_partition(6, 1) == P(3, 2, 1)
    assert suprageneric_partition(7, 2) == P(3, 2, 2)
    with pytest.raises(ConstraintError):
        suprageneric_partition(6, 2)
    with pytest.raises(ConstraintError):
        suprageneric_partition(5, -1)


CONORMAL_CASES = [P(5), P(3, 2), P(2, 1, 1, 1), P(4, 2, 1), P(3, 3, 2), P(2, 2, 2, 1, 1)]


@pytest.mark.parametrize("lam", CONORMAL_CASES, ids=str)
def test_conormal_samples_are_annihilated(lam):
    rng = random.Random(str(lam))
    for _ in range(30):
        s = conormal_sample(lam, rng)
        assert s.f.degree == lam.n and s.g.degree == lam.n and s.g.dual
        assert annihilation_check(s)


def test_conormal_over_prime_field():
    rng = random.Random(3)
    F = PrimeField(101)
    for _ in range(20):
        assert annihilation_check(conormal_sample(P(3, 2, 1), rng, F))
    with pytest.raises(ConstraintError):
        conormal_sample(P(3, 2), rng, PrimeField(5))


def test_conormal_shapes():
    rng = random.Random(0)
    s = conormal_sample(P(2, 1, 1, 1), rng)
    (su, tv), = [pt for pt, lp in zip(s.points, s.lam.parts) if lp == 2]
    # the dual point is a multiple of a pure power at the double root
    pw = power_of_linear(LinearForm(su, tv, dual=True), 5)
    assert s.g == pw * (s.g.coeffs[0] / pw.coeffs[0])
    with pytest.raises(ConstraintError):
        conormal_sample(P(1, 1, 1), rng)


def test_perturbed_conormal_point_fails():
    rng = random.Random(11)
    failures = 0
    for _ in range(20):
        s = conormal_sample(P(3, 2, 1), rng)
        a, b = rng.randint(-999, 999), rng.randint(1, 999)
        bumped = s.g + power_of_linear(LinearForm(QQ(a), QQ(b), dual=True), 6)
        failures += not annihilation_check(s, bumped)
    assert failures >= 19
