"""Exact base fields: the rationals and prime fields F_p.

Rational scalars are plain :class:`fractions.Fraction` values. Prime field
scalars are :class:`ModP` residues. Both support the arithmetic operators and
compare equal to Python ints, so generic code can write ``x == 0`` or
``2 * x`` without knowing which field it is working over.

Randomness is always passed in explicitly as a :class:`random.Random`
instance (Mersenne Twister, seeded with a 64-bit integer).
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from typing import Union

from sympy import isprime

from .errors import FieldError

__all__ = [
    "ModP",
    "Rationals",
    "PrimeField",
    "Field",
    "QQ",
    "field_make",
    "parse_field",
    "random_scalar",
    "format_scalar",
    "make_rng",
]


class ModP:
    """Residue class modulo a prime ``p``, canonical value in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise FieldError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return ModP(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            return ModP(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return ModP(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"ModP({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)


class Rationals:
    """The field Q, realised with :class:`fractions.Fraction`."""

    kind = "rationals"
    characteristic = 0
    modulus = None

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def elements(self):
        raise FieldError("Q is infinite")

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"

    def spec(self) -> str:
        return "q"


class PrimeField:
    """The prime field F_p."""

    kind = "prime_field"

    def __init__(self, p: int):
        if not isinstance(p, int) or p < 2 or not isprime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def modulus(self) -> int:
        return self.p

    def __call__(self, x) -> ModP:
        if isinstance(x, ModP):
            if x.p != self.p:
                raise FieldError(f"cannot coerce F_{x.p} element into F_{self.p}")
            return x
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"denominator {x.denominator} vanishes in F_{self.p}")
            return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)
        return ModP(int(x), self.p)

    @property
    def zero(self) -> ModP:
        return ModP(0, self.p)

    @property
    def one(self) -> ModP:
        return ModP(1, self.p)

    def elements(self):
        return [ModP(i, self.p) for i in range(self.p)]

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def spec(self) -> str:
        return f"fp:{self.p}"


Field = Union[Rationals, PrimeField]
Scalar = Union[Fraction, ModP]

QQ = Rationals()


def field_make(kind: str = "rationals", modulus: int | None = None) -> Field:
    """Build a field handle from its kind (``rationals`` or ``prime_field``)."""
    if kind in ("rationals", "q", "Q"):
        return QQ
    if kind in ("prime_field", "fp"):
        if modulus is None:
            raise FieldError("prime_field requires a modulus")
        return PrimeField(modulus)
    raise FieldError(f"unknown field kind {kind!r}")


_FP_RE = re.compile(r"^fp:(\d+)$")


def parse_field(text: str) -> Field:
    """Parse the CLI field flag: ``q`` or ``fp:<p>``."""
    text = text.strip()
    if text.lower() == "q":
        return QQ
    m = _FP_RE.match(text.lower())
    if not m:
        raise FieldError(f"bad field spec {text!r}; expected 'q' or 'fp:<p>'")
    return PrimeField(int(m.group(1)))


def check_degree(field: Field, d: int) -> None:
    """Reject prime fields too small for degree-``d`` apolarity (needs p > d)."""
    if field.characteristic and field.characteristic <= d:
        raise FieldError(
            f"F_{field.characteristic} is too small for degree {d}: need p > {d}"
        )


def make_rng(seed: int | None = 0) -> random.Random:
    return random.Random(seed)


def random_scalar(field: Field, rng: random.Random, height: int = 10) -> Scalar:
    """Uniform integer in ``[-height, height]`` mapped into ``field``."""
    if height < 1:
        raise ValueError("height must be >= 1")
    return field(rng.randint(-height, height))


def random_nonzero(field: Field, rng: random.Random, height: int = 10) -> Scalar:
    while True:
        c = random_scalar(field, rng, height)
        if c != 0:
            return c


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return str(x)
