"""One test per acceptance criterion, at the stated sample sizes and seed 42.

Each test prints its criterion line(s) and the conftest hook repeats them in
the terminal summary, so ``pytest -v`` output carries the full report.
"""

import pytest

from waring_forms import acceptance as acc

from .conftest import ACCEPTANCE_LINES

SEED = 42


def record(*results):
    for r in results:
        line = r.line()
        ACCEPTANCE_LINES.append(line)
        ACCEPTANCE_LINES.extend(f"    {n}" for n in r.notes)
        print(line)
        for n in r.notes:
            print(f"    {n}")


def test_criterion_1_rank_rule_matches_brute_force_over_small_fields():
    exact, companion = acc.crit_rank_oracle(SEED)
    record(exact, companion)
    # the companion check explains every mismatch: no apolar form of the
    # predicted degree splits over the prime field
    assert companion.passed
    assert exact.passed, exact.line()


def test_criterion_2_generic_rank():
    r = acc.crit_generic_rank(SEED)
    record(r)
    assert r.passed, r.line()


def test_criterion_3_suprageneric_structure():
    r = acc.crit_suprageneric_structure(SEED)
    record(r)
    assert r.passed, r.line()


def test_criterion_4_census_and_rank_raising_chain():
    census = acc.crit_census(SEED)
    chain = acc.crit_chain(SEED)
    chain_q = acc.crit_chain_suprageneric(SEED)
    record(census, chain, chain_q)
    assert census.passed, census.line()
    assert chain_q.passed, chain_q.line()
    assert chain.passed, chain.line()


def test_criterion_5_tangent_dimensions():
    r = acc.crit_tangent(SEED)
    record(r)
    assert r.passed, r.line()


def test_criterion_6_hypersurface_equation():
    r = acc.crit_hypersurface(SEED, (1, 2, 3))
    record(r)
    assert r.passed, r.line()


def test_criterion_7_singular_locus_probes():
    r = acc.crit_gradient(SEED, (1, 2, 3))
    record(r)
    assert r.passed, r.line()


def test_criterion_8_partition_calculus():
    r = acc.crit_partitions(SEED)
    record(r)
    assert r.passed, r.line()


def test_criterion_9_component_probes_and_note():
    r = acc.crit_singular_components(SEED, (2, 3))
    record(r)
    assert r.passed, r.line()


def test_reports_are_deterministic():
    a = acc.format_report(acc.run_suite("partitions", seed=7))
    b = acc.format_report(acc.run_suite("partitions", seed=7))
    assert a == b
    assert a.endswith("OK")


def test_budget_marks_report_partial():
    rep = acc.run_suite("hypersurface", seed=1, budget=0.0, ks=(1,))
    assert rep.partial and rep.skipped
    assert "PARTIAL" in acc.format_report(rep)
