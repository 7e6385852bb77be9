"""Binary forms over an exact field.

A :class:`BinaryForm` of degree d stores ``c_0..c_d`` for
``sum c_i x^(d-i) y^i`` (or ``u, v`` when ``dual`` is set). No binomial
weighting is applied; the factorials of the apolarity pairing appear only in
:func:`apolar_action`.

Setting ``y = 1`` turns ``coeffs`` into a univariate polynomial in ``x`` with
descending powers, and the number of leading zeros is the multiplicity of the
root at infinity. The gcd, root and squarefree routines all work that way and
never assume ``c_0 != 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial, lcm
from typing import Iterable, Sequence

import sympy

from . import exactla
from .errors import DegreeError, FieldError, ParseError, WaringError
from .scalar import QQ, Field, ModP, Rationals, format_scalar

_T = sympy.Symbol("t")

__all__ = [
    "BinaryForm",
    "LinearForm",
    "RootsResult",
    "parse_form",
    "format_form",
    "power_of_linear",
    "apolar_action",
    "gcd",
    "squarefree_profile",
    "is_squarefree",
    "resultant",
    "discriminant",
    "roots_in_field",
]


@dataclass(frozen=True)
class BinaryForm:
    coeffs: tuple
    field: Field = QQ
    dual: bool = False

    @classmethod
    def make(cls, coeffs: Iterable, field: Field = QQ, dual: bool = False) -> "BinaryForm":
        cs = tuple(field(c) for c in coeffs)
        if not cs:
            raise DegreeError("a form needs at least one coefficient")
        return cls(cs, field, dual)

    @classmethod
    def zero(cls, d: int, field: Field = QQ, dual: bool = False) -> "BinaryForm":
        return cls(tuple(field.zero for _ in range(d + 1)), field, dual)

    @classmethod
    def monomial(cls, d: int, i: int, field: Field = QQ, dual: bool = False) -> "BinaryForm":
        """The monomial ``x^(d-i) y^i``."""
        return cls(tuple(field.one if j == i else field.zero for j in range(d + 1)), field, dual)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def vars(self) -> tuple[str, str]:
        return ("u", "v") if self.dual else ("x", "y")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other: "BinaryForm"):
        if self.dual != other.dual:
            raise DegreeError("cannot combine primal and dual forms")
        if self.field != other.field:
            raise FieldError("forms live over different fields")

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        self._check(other)
        if self.degree != other.degree:
            raise DegreeError(f"adding forms of degrees {self.degree} and {other.degree}")
        return BinaryForm(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.field, self.dual)

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return self + (-other)

    def __neg__(self) -> "BinaryForm":
        return BinaryForm(tuple(-c for c in self.coeffs), self.field, self.dual)

    def __mul__(self, other) -> "BinaryForm":
        if isinstance(other, BinaryForm):
            self._check(other)
            out = [self.field.zero] * (self.degree + other.degree + 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
            return BinaryForm(tuple(out), self.field, self.dual)
        c = self.field(other)
        return BinaryForm(tuple(c * a for a in self.coeffs), self.field, self.dual)

    def __rmul__(self, other) -> "BinaryForm":
        return self * other

    def __pow__(self, e: int) -> "BinaryForm":
        out = BinaryForm((self.field.one,), self.field, self.dual)
        for _ in range(e):
            out = out * self
        return out

    def __call__(self, a, b):
        d = self.degree
        return sum((c * a ** (d - i) * b ** i for i, c in enumerate(self.coeffs)), self.field.zero)

    def diff(self, var: int) -> "BinaryForm":
        """Partial derivative in the first (``var=0``) or second variable."""
        d = self.degree
        if d == 0:
            return BinaryForm((self.field.zero,), self.field, self.dual)
        if var == 0:
            cs = tuple((d - i) * c for i, c in enumerate(self.coeffs[:-1]))
        else:
            cs = tuple(i * c for i, c in enumerate(self.coeffs) if i > 0)
        return BinaryForm(cs, self.field, self.dual)

    def with_tag(self, dual: bool) -> "BinaryForm":
        return BinaryForm(self.coeffs, self.field, dual)

    def monic(self) -> "BinaryForm":
        lead = next(c for c in self.coeffs if c != 0)
        return self * (1 / lead)

    def __str__(self) -> str:
        return format_form(self)


@dataclass(frozen=True)
class LinearForm:
    """``a x + b y`` (or ``a u + b v``), up to scaling when compared projectively."""

    a: object
    b: object
    dual: bool = False

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise DegreeError("linear form (0, 0) is not allowed")

    def form(self, field: Field) -> BinaryForm:
        return BinaryForm.make((self.a, self.b), field, self.dual)

    def power(self, d: int, field: Field) -> BinaryForm:
        return power_of_linear(self, d, field)

    def proportional(self, other: "LinearForm") -> bool:
        return self.a * other.b - self.b * other.a == 0

    def normalized(self) -> "LinearForm":
        if self.b != 0:
            return LinearForm(self.a / self.b, self.b / self.b, self.dual)
        return LinearForm(self.a / self.a, self.b, self.dual)

    def __str__(self) -> str:
        return format_form(BinaryForm((self.a, self.b), _field_of(self.a, self.b), self.dual))


def _field_of(*xs) -> Field:
    from .scalar import PrimeField

    for x in xs:
        if isinstance(x, ModP):
            return PrimeField(x.p)
    return QQ


# ---------------------------------------------------------------------------
# construction

def power_of_linear(l: LinearForm, d: int, field: Field = QQ) -> BinaryForm:
    """Binomial expansion of ``(a x + b y)^d``."""
    if d < 0:
        raise DegreeError("negative degree")
    a, b = field(l.a), field(l.b)
    return BinaryForm(tuple(comb(d, i) * a ** (d - i) * b ** i for i in range(d + 1)), field, l.dual)


def apolar_action(g: BinaryForm, f: BinaryForm) -> BinaryForm:
    """Apply ``g`` as a constant-coefficient differential operator to ``f``.

    ``g`` and ``f`` must carry opposite tags; the result has the tag of ``f``
    and degree ``deg f - deg g``. Literal differentiation: ``u`` acts as
    ``d/dx`` and ``v`` as ``d/dy`` (and symmetrically for primal operators
    acting on dual forms).
    """
    if g.dual == f.dual:
        raise DegreeError("apolar action needs one primal and one dual form")
    if g.field != f.field:
        raise FieldError("forms live over different fields")
    d, e = f.degree, g.degree
    if e > d:
        raise DegreeError(f"operator degree {e} exceeds form degree {d}")
    field = f.field
    out = []
    for m in range(d - e + 1):
        acc = field.zero
        for j, gj in enumerate(g.coeffs):
            if gj == 0:
                continue
            c = f.coeffs[m + j]
            if c == 0:
                continue
            w = factorial(d - m - j) // factorial(d - e - m) * (factorial(m + j) // factorial(m))
            acc += gj * c * w
        out.append(acc)
    return BinaryForm(tuple(out), field, f.dual)


# ---------------------------------------------------------------------------
# univariate helpers on descending coefficient lists

def _strip(p: Sequence) -> list:
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return list(p[i:])


def _udivmod(a: Sequence, b: Sequence, field: Field) -> tuple[list, list]:
    a = _strip(a)
    b = _strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return [], a
    inv = 1 / b[0]
    rem = list(a)
    q = []
    for i in range(len(a) - len(b) + 1):
        c = rem[i] * inv
        q.append(c)
        if c != 0:
            for j in range(1, len(b)):
                rem[i + j] -= c * b[j]
    rem = _strip(rem[len(a) - len(b) + 1:])
    return q, rem


def _umonic(p: Sequence) -> list:
    p = _strip(p)
    if not p:
        return p
    inv = 1 / p[0]
    return [c * inv for c in p]


def _ugcd(a: Sequence, b: Sequence, field: Field) -> list:
    a, b = _strip(a), _strip(b)
    while b:
        _, r = _udivmod(a, b, field)
        a, b = b, r
    return _umonic(a)


def _uderiv(p: Sequence) -> list:
    n = len(p) - 1
    return _strip([(n - i) * c for i, c in enumerate(p[:-1])])


def _uquo(a: Sequence, b: Sequence, field: Field) -> list:
    q, r = _udivmod(a, b, field)
    if r:
        raise WaringError("inexact polynomial division")
    return q


def _usub(a: Sequence, b: Sequence, field: Field) -> list:
    n = max(len(a), len(b))
    a = [field.zero] * (n - len(a)) + list(a)
    b = [field.zero] * (n - len(b)) + list(b)
    return _strip([x - y for x, y in zip(a, b)])


def _dehomogenize(f: BinaryForm) -> tuple[list, int]:
    """(``f(x, 1)`` as a descending list, multiplicity of the root at infinity)."""
    p = _strip(f.coeffs)
    return p, len(f.coeffs) - len(p)


def _homogenize(p: Sequence, yk: int, f_like: BinaryForm) -> BinaryForm:
    field = f_like.field
    return BinaryForm(tuple([field.zero] * yk + list(p)), field, f_like.dual)


# ---------------------------------------------------------------------------
# gcd, squarefree decomposition

def gcd(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    """Monic gcd of two binary forms (first nonzero coefficient 1)."""
    if f.dual != g.dual:
        raise DegreeError("gcd of forms with different variable tags")
    if f.is_zero() and g.is_zero():
        raise WaringError("gcd(0, 0) is undefined")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    pf, kf = _dehomogenize(f)
    pg, kg = _dehomogenize(g)
    return _homogenize(_ugcd(pf, pg, f.field), min(kf, kg), f)


def _yun(p: list, field: Field) -> list[tuple[int, list]]:
    """Yun's squarefree decomposition of a univariate polynomial."""
    if len(p) <= 1:
        return []
    dp = _uderiv(p)
    c = _ugcd(p, dp, field)
    w = _uquo(p, c, field)
    y = _uquo(dp, c, field)
    z = _usub(y, _uderiv(w), field)
    out = []
    i = 1
    while len(w) > 1:
        g = _ugcd(w, z, field)
        if len(g) > 1:
            out.append((i, g))
        w = _uquo(w, g, field)
        y = _uquo(z, g, field)
        z = _usub(y, _uderiv(w), field)
        i += 1
    return out


def _check_char(f: BinaryForm):
    p = f.field.characteristic
    if p and p <= f.degree:
        raise FieldError(f"squarefree decomposition of degree {f.degree} needs p > {f.degree}, got p = {p}")


def squarefree_profile(f: BinaryForm) -> tuple[tuple[int, int], ...]:
    """Multiplicity profile ``((m, deg), ...)`` sorted by decreasing ``m``.

    ``deg`` is the degree of the radical of the multiplicity-``m`` part, with
    the root at infinity included. ``sum(m * deg) == f.degree``.
    """
    if f.is_zero():
        raise WaringError("squarefree profile of the zero form")
    _check_char(f)
    p, yk = _dehomogenize(f)
    parts = {m: len(g) - 1 for m, g in _yun(p, f.field)}
    if yk:
        parts[yk] = parts.get(yk, 0) + 1
    return tuple(sorted(((m, k) for m, k in parts.items() if k > 0), reverse=True))


def is_squarefree(f: BinaryForm) -> bool:
    return all(m == 1 for m, _ in squarefree_profile(f))


# ---------------------------------------------------------------------------
# resultant, discriminant

def sylvester_matrix(f: BinaryForm, g: BinaryForm) -> list[list]:
    m, n = f.degree, g.degree
    size = m + n
    zero = f.field.zero
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(f.coeffs) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(g.coeffs) + [zero] * (size - n - 1 - i))
    return rows


def resultant(f: BinaryForm, g: BinaryForm):
    """Homogeneous resultant: determinant of the Sylvester matrix built from
    the full coefficient lists (formal degrees). ``Res(x, y) = 1``."""
    if f.is_zero() or g.is_zero():
        raise WaringError("resultant of a zero form")
    if f.degree < 1 or g.degree < 1:
        raise DegreeError("resultant needs forms of degree >= 1")
    return exactla.determinant(sylvester_matrix(f, g), f.field)


def _shear(f: BinaryForm, t) -> BinaryForm:
    """``f(x, y + t x)``; determinant-one change of coordinates."""
    field = f.field
    m = f.degree
    out = BinaryForm.zero(m, field, f.dual)
    for i, c in enumerate(f.coeffs):
        if c == 0:
            continue
        term = power_of_linear(LinearForm(field.one, field.zero), m - i, field) * power_of_linear(
            LinearForm(field(t), field.one), i, field
        )
        out = out + term.with_tag(f.dual) * c
    return out


def discriminant(f: BinaryForm):
    """Discriminant normalised so that ``Disc(a u^2 + b uv + c v^2) = b^2 - 4ac``.

    Computed as ``(-1)^(m(m-1)/2) Res(f, df/dx) / c_0``. When ``c_0 = 0`` the
    form is first sheared by ``y -> y + t x``, which leaves the discriminant
    unchanged.
    """
    m = f.degree
    if m < 2:
        raise DegreeError("discriminant needs degree >= 2")
    if f.is_zero():
        return f.field.zero
    _check_char(f)
    F = f
    if F.coeffs[0] == 0:
        t = next(t for t in range(m + 1) if f(f.field.one, f.field(t)) != 0)
        F = _shear(f, t)
    lead = F.coeffs[0]
    res = resultant(F, F.diff(0))
    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    return sign * res / lead


# ---------------------------------------------------------------------------
# roots

@dataclass(frozen=True)
class RootsResult:
    roots: tuple  # ((s, t), multiplicity) with (s : t) normalised
    split: bool

    def points(self) -> list[tuple]:
        return [pt for pt, _ in self.roots]


def _root_multiplicity(p: list, r, field: Field) -> tuple[int, list]:
    m = 0
    lin = [field.one, -r]
    while len(p) > 1:
        q, rem = _udivmod(p, lin, field)
        if rem:
            break
        m += 1
        p = q
    return m, p


def _integer_poly(p: list) -> list[int]:
    den = lcm(*(Fraction(c).denominator for c in p))
    return [int(Fraction(c) * den) for c in p]


def _rational_roots(p: list) -> list[Fraction]:
    """Distinct rational roots, read off the linear factors over Z."""
    ints = _integer_poly(p)
    _, factors = sympy.Poly(ints, _T).factor_list()
    out = []
    for fac, _ in factors:
        if fac.degree() == 1:
            a, b = (int(c) for c in fac.all_coeffs())
            out.append(Fraction(-b, a))
    return sorted(out)


def roots_in_field(f: BinaryForm) -> RootsResult:
    """Projective roots of ``f`` lying in the base field, with multiplicities.

    Over Q the rational root theorem is applied to the dehomogenisation; over
    F_p all ``p + 1`` points of P^1 are scanned (requires p <= 65521).
    A root ``(s : t)`` means ``f(s, t) = 0``; it is normalised to ``(r : 1)``
    or ``(1 : 0)``.
    """
    if f.is_zero():
        raise WaringError("roots of the zero form")
    field = f.field
    p, yk = _dehomogenize(f)
    roots = []
    if yk:
        roots.append(((field.one, field.zero), yk))
    found = yk
    if len(p) > 1:
        if isinstance(field, Rationals):
            k = 0
            while p and p[-1] == 0:
                p = p[:-1]
                k += 1
            if k:
                roots.append(((field.zero, field.one), k))
                found += k
            cands = _rational_roots(p) if len(p) > 1 else []
        else:
            if field.p > 65521:
                raise FieldError("root scanning requires p <= 65521")
            pi = [int(c) for c in p]
            P = field.p
            cands = []
            for r in range(P):
                acc = 0
                for c in pi:
                    acc = (acc * r + c) % P
                if acc == 0:
                    cands.append(field(r))
        for r in cands:
            if len(p) <= 1:
                break
            m, p = _root_multiplicity(p, field(r), field)
            if m:
                roots.append(((field(r), field.one), m))
                found += m
    roots.sort(key=lambda rm: (rm[0][1] == 0, _sort_key(rm[0][0])))
    return RootsResult(tuple(roots), found == f.degree)


def _sort_key(x):
    return (int(x) if isinstance(x, ModP) else x)


# ---------------------------------------------------------------------------
# parsing and printing

_VARS = {"x": (False, 0), "y": (False, 1), "u": (True, 0), "v": (True, 1)}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("int", int(text[i:j]), i))
                i = j
            elif ch in "+-*/^":
                self.toks.append((ch, ch, i))
                i += 1
            elif ch in _VARS:
                self.toks.append(("var", ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", i)
        self.toks.append(("end", None, len(text)))
        self.k = 0

    def peek(self):
        return self.toks[self.k]

    def take(self, kind=None):
        tok = self.toks[self.k]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2])
        self.k += 1
        return tok


def parse_form(text: str, field: Field = QQ) -> BinaryForm:
    """Parse a homogeneous binary form such as ``"3x^2 - 2*x*y + y^2"``."""
    lex = _Lexer(text)
    terms = []  # (coefficient, (e0, e1), position)
    tag = None
    sign = 1
    if lex.peek()[0] in "+-":
        sign = -1 if lex.take()[0] == "-" else 1
    while True:
        tok = lex.peek()
        pos = tok[2]
        coeff = Fraction(1)
        have_coeff = False
        if tok[0] == "int":
            num = lex.take()[1]
            den = 1
            if lex.peek()[0] == "/":
                lex.take()
                den = lex.take("int")[1]
                if den == 0:
                    raise ParseError("zero denominator", pos)
            coeff = Fraction(num, den)
            have_coeff = True
            if lex.peek()[0] == "*":
                lex.take()
                if lex.peek()[0] != "var":
                    raise ParseError("expected a variable after '*'", lex.peek()[2])
        exps = [0, 0]
        have_mono = False
        while lex.peek()[0] == "var":
            vt = lex.take()
            is_dual, idx = _VARS[vt[1]]
            if tag is None:
                tag = is_dual
            elif tag != is_dual:
                raise ParseError("mixing x/y with u/v in one form", vt[2])
            e = 1
            if lex.peek()[0] == "^":
                lex.take()
                e = lex.take("int")[1]
            exps[idx] += e
            have_mono = True
            if lex.peek()[0] == "*":
                lex.take()
                if lex.peek()[0] != "var":
                    raise ParseError("expected a variable after '*'", lex.peek()[2])
        if not (have_coeff or have_mono):
            raise ParseError(f"expected a term, found {tok[1]!r}", pos)
        terms.append((sign * coeff, tuple(exps), pos))
        nxt = lex.peek()
        if nxt[0] == "end":
            break
        if nxt[0] not in "+-":
            raise ParseError(f"unexpected token {nxt[1]!r}", nxt[2])
        sign = -1 if lex.take()[0] == "-" else 1
    degs = {e0 + e1 for _, (e0, e1), _ in terms}
    if len(degs) > 1:
        d = max(degs)
        bad = [text_of(e, tag) for _, e, _ in terms if sum(e) != d]
        raise ParseError(f"inhomogeneous form: degree {d} expected, offending monomials {bad}")
    d = degs.pop()
    cs = [field.zero] * (d + 1)
    for c, (_, e1), _ in terms:
        cs[e1] += field(c)
    return BinaryForm(tuple(cs), field, bool(tag))


def text_of(exps, dual) -> str:
    names = ("u", "v") if dual else ("x", "y")
    parts = []
    for n, e in zip(names, exps):
        if e == 1:
            parts.append(n)
        elif e > 1:
            parts.append(f"{n}^{e}")
    return "*".join(parts) or "1"


def format_form(f: BinaryForm) -> str:
    """Render in the parser grammar; ``parse_form(format_form(f)) == f``
    except for the zero form, which renders as ``0``."""
    d = f.degree
    out = []
    for i, c in enumerate(f.coeffs):
        if c == 0:
            continue
        if isinstance(c, Fraction):
            neg = c < 0
            mag = -c if neg else c
        else:
            neg, mag = False, c
        mono = text_of((d - i, i), f.dual)
        if mono == "1":
            body = format_scalar(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_scalar(mag)}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) or "0"


def interpolate(xs: Sequence, ys: Sequence, field: Field) -> list:
    """Coefficients (ascending powers) of the interpolating polynomial."""
    n = len(xs)
    coeffs = [field.zero] * n
    for i in range(n):
        # basis polynomial prod_{j != i} (t - x_j) / (x_i - x_j)
        basis = [field.one]
        denom = field.one
        for j in range(n):
            if j == i:
                continue
            basis = [field.zero] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        scale = ys[i] / denom
        for k in range(n):
            coeffs[k] += scale * basis[k]
    return coeffs


def poly_degree(coeffs: Sequence) -> int:
    """Degree of an ascending coefficient list; -1 for the zero polynomial."""
    for k in range(len(coeffs) - 1, -1, -1):
        if coeffs[k] != 0:
            return k
    return -1
