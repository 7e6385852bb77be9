import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from waring_forms.binpoly import (
    BinaryForm,
    LinearForm,
    apolar_action,
    discriminant,
    format_form,
    gcd,
    interpolate,
    is_squarefree,
    parse_form,
    poly_degree,
    power_of_linear,
    resultant,
    roots_in_field,
    squarefree_profile,
)
from waring_forms.errors import DegreeError, FieldError, ParseError
from waring_forms.scalar import QQ, PrimeField

X, Y = sympy.symbols("x y")
F5 = PrimeField(5)
coeffs = st.integers(min_value=-9, max_value=9)


def forms(min_deg=1, max_deg=6, field=QQ, dual=False):
    return st.integers(min_deg, max_deg).flatmap(
        lambda d: st.lists(coeffs, min_size=d + 1, max_size=d + 1)
    ).filter(lambda cs: any(cs)).map(lambda cs: BinaryForm.make(cs, field, dual))


def to_sympy(f):
    d = f.degree
    return sum(sympy.Rational(c.numerator, c.denominator) * X ** (d - i) * Y ** i for i, c in enumerate(f.coeffs))


def test_parse_and_format():
    f = parse_form("3*x^2 - 2*x*y + y^2")
    assert f.coeffs == (3, -2, 1)
    assert format_form(f) == "3*x^2 - 2*x*y + y^2"
    assert parse_form("-x y^2 + 1/2 x^3").coeffs == (Fraction(1, 2), 0, -1, 0)
    assert parse_form("u^2 - v^2").dual
    assert format_form(BinaryForm.zero(3)) == "0"


@pytest.mark.parametrize(
    "text, match",
    [("x^2 + y", "inhomogeneous"), ("x*u", "mix"), ("x^", "position"), ("(x)", "position"), ("", None)],
)
def test_parse_errors(text, match):
    with pytest.raises(ParseError, match=match):
        parse_form(text)


@given(forms(max_deg=8))
def test_format_round_trip(f):
    assert parse_form(format_form(f)) == f


@given(forms(max_deg=5), st.integers(-5, 5), st.integers(-5, 5))
def test_evaluation_matches_sympy(f, a, b):
    assert f(QQ(a), QQ(b)) == to_sympy(f).subs({X: a, Y: b})


def test_apolar_action_examples():
    f = parse_form("x^3 + y^3")
    assert apolar_action(parse_form("u*v"), f).is_zero()
    assert apolar_action(parse_form("u"), f) == parse_form("3*x^2")
    assert apolar_action(parse_form("u^2"), parse_form("x^2*y")) == parse_form("2*y")
    with pytest.raises(DegreeError):
        apolar_action(parse_form("x"), f)


@given(forms(max_deg=4, dual=True), forms(min_deg=4, max_deg=7))
def test_apolar_action_is_differentiation(g, f):
    U, V = sympy.symbols("u v")
    gd = g.degree
    op = to_sympy(f)
    total = 0
    for j, c in enumerate(g.coeffs):
        if c:
            total += sympy.Rational(c.numerator, c.denominator) * sympy.diff(op, X, gd - j, Y, j)
    got = to_sympy(apolar_action(g, f)) if f.degree > gd else apolar_action(g, f).coeffs[0]
    assert sympy.expand(got - total) == 0


@settings(max_examples=50)
@given(forms(max_deg=3, dual=True), forms(max_deg=3, dual=True), forms(min_deg=6, max_deg=8))
def test_apolar_action_composes(g1, g2, f):
    assert apolar_action(g1 * g2, f) == apolar_action(g1, apolar_action(g2, f))


@given(forms(max_deg=5, dual=True), st.integers(-4, 4), st.integers(-4, 4), st.integers(5, 9))
def test_apolar_action_on_powers(g, a, b, d):
    if (a, b) == (0, 0):
        return
    l = LinearForm(QQ(a), QQ(b))
    e = g.degree
    scale = Fraction(math.factorial(d), math.factorial(d - e)) * g(QQ(a), QQ(b))
    assert apolar_action(g, power_of_linear(l, d)) == power_of_linear(l, d - e) * scale


def test_apolar_action_spec_examples():
    assert apolar_action(parse_form("u"), parse_form("x^2")) == parse_form("2*x")
    assert apolar_action(parse_form("u^2 + v^2"), parse_form("x^2*y^2")) == parse_form("2*x^2 + 2*y^2")


def test_power_of_linear_is_killed_by_dual_root():
    l = LinearForm(QQ(2), QQ(-3))
    f = power_of_linear(l, 5)
    # (3u + 2v) vanishes at (2, -3)
    assert apolar_action(parse_form("3*u + 2*v"), f).is_zero()


def test_gcd_and_profile_over_f5():
    f = parse_form("x^3 + 2*x^2*y", F5)  # x^2 (x + 2y)
    g = parse_form("x^2 + 4*x*y + 4*y^2", F5)  # (x + 2y)^2
    assert gcd(f, g) == parse_form("x + 2*y", F5)
    assert squarefree_profile(f) == ((2, 1), (1, 1))
    assert squarefree_profile(parse_form("y^3*x", QQ)) == ((3, 1), (1, 1))
    with pytest.raises(FieldError):
        squarefree_profile(parse_form("x^5 + y^5", F5))


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 3)), min_size=1, max_size=4))
def test_profile_of_built_forms(spec):
    lins = {}
    for a, b, m in spec:
        if a == 0 and b == 0:
            continue
        l = LinearForm(QQ(a), QQ(b)).normalized()
        key = (l.a, l.b)
        lins[key] = lins.get(key, 0) + m
    if not lins:
        return
    f = BinaryForm.make((1,))
    for (a, b), m in lins.items():
        f = f * power_of_linear(LinearForm(a, b), m)
    expected = {}
    for m in lins.values():
        expected[m] = expected.get(m, 0) + 1
    assert squarefree_profile(f) == tuple(sorted(expected.items(), reverse=True))
    assert is_squarefree(f) == all(m == 1 for m in lins.values())
    rr = roots_in_field(f)
    assert rr.split and sorted(m for _, m in rr.roots) == sorted(lins.values())


def test_resultant_example():
    assert resultant(parse_form("x^2 - y^2"), parse_form("x - 3*y")) == 8
    assert resultant(parse_form("x"), parse_form("y")) == 1


@given(
    st.integers(1, 4).filter(bool),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=4),
    forms(max_deg=4),
)
def test_resultant_product_formula(lead, roots, g):
    # Res(f, g) = lead^deg(g) * prod g(alpha) for f = lead * prod (x - alpha y)
    if g.coeffs[0] == 0:
        return
    f = BinaryForm.make((lead,))
    for r in roots:
        f = f * BinaryForm.make((1, -r))
    expected = QQ(lead) ** g.degree
    for r in roots:
        expected *= g(QQ(r), QQ(1))
    assert resultant(f, g) == expected


@given(forms(min_deg=2, max_deg=6))
def test_discriminant_matches_sympy(f):
    # y -> y + t x has determinant one; pick t making the x^d coefficient nonzero
    F = to_sympy(f)
    t = next(t for t in range(10) if F.subs({X: 1, Y: t}) != 0)
    G = sympy.expand(F.subs(Y, Y + t * X))
    expected = sympy.discriminant(G.subs(Y, 1), X)
    assert discriminant(f) == expected


def test_discriminant_examples():
    assert discriminant(parse_form("u^2 - v^2")) == 4
    # x^3 + p x y^2 + q y^3 has discriminant -4p^3 - 27q^2
    assert discriminant(parse_form("x^3 + 2*x*y^2 + 5*y^3")) == -4 * 8 - 27 * 25


def test_roots_over_q_and_fp():
    rr = roots_in_field(parse_form("x^3 - 2*x*y^2"))
    assert not rr.split
    assert [pt for pt, _ in rr.roots] == [(0, 1)]
    rr = roots_in_field(parse_form("x^2 + y^2", F5))
    assert rr.split and {int(s) for (s, _), _ in rr.roots} == {2, 3}
    rr = roots_in_field(parse_form("x*y^2"))
    assert rr.roots == (((0, 1), 1), ((1, 0), 2))


def test_interpolate():
    xs = [QQ(i) for i in range(4)]
    ys = [QQ(2 * x ** 3 - x + 1) for x in xs]
    cs = interpolate(xs, ys, QQ)
    assert cs == [1, -1, 0, 2]
    assert poly_degree(cs) == 3
    assert poly_degree([0, 0]) == -1
