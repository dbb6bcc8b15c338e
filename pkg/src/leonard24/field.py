"""Exact scalar fields: the rationals and prime fields GF(p).

Rational elements are plain :class:`fractions.Fraction` values, which are
already canonical (positive denominator, reduced, zero is ``0/1``).  Prime
field elements are :class:`GF` instances bound to a :class:`PrimeField`.

Elements of different fields never combine; mixing them raises
:class:`FieldMismatchError`.  Plain Python ints are accepted as operands
because they live in the prime subring of every field.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

__all__ = [
    "FieldError",
    "FieldMismatchError",
    "ParseError",
    "RationalField",
    "PrimeField",
    "GF",
    "QQ",
    "FieldElement",
    "Field",
    "arith",
    "parse",
    "format_element",
    "field_of",
]


class FieldError(ValueError):
    pass


class FieldMismatchError(FieldError, TypeError):
    """Operands belong to different fields."""


class ParseError(FieldError):
    pass


_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")
_INT_RE = re.compile(r"^\s*([+-]?\d+)\s*$")


class RationalField:
    """The field of rational numbers; elements are ``Fraction``."""

    name = "rational"
    characteristic = 0

    def __call__(self, x) -> Fraction:
        if isinstance(x, GF):
            raise FieldMismatchError(f"cannot coerce {x!r} into the rationals")
        if isinstance(x, str):
            return self.parse(x)
        return Fraction(x)

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def contains(self, x) -> bool:
        return isinstance(x, Fraction)

    def parse(self, text: str) -> Fraction:
        m = _RATIONAL_RE.match(text)
        if m is None:
            raise ParseError(f"malformed rational: {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ParseError(f"zero denominator: {text!r}")
        return Fraction(num, den)

    def format(self, a: Fraction) -> str:
        if a.denominator == 1:
            return str(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def to_json(self):
        return "rational"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "QQ"


QQ = RationalField()


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


class PrimeField:
    """GF(p) for a prime ``p`` (primality checked once, by trial division)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise FieldError(f"modulus {p!r} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"
        self.zero = GF(0, self)
        self.one = GF(1, self)

    def __call__(self, x) -> "GF":
        if isinstance(x, GF):
            if x.field.p != self.p:
                raise FieldMismatchError(f"{x!r} is not in {self.name}")
            return x
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return GF(x.numerator, self)
            return GF(x.numerator, self) / GF(x.denominator, self)
        if isinstance(x, int):
            return GF(x, self)
        raise FieldMismatchError(f"cannot coerce {x!r} into {self.name}")

    def contains(self, x) -> bool:
        return isinstance(x, GF) and x.field.p == self.p

    def elements(self):
        return [GF(k, self) for k in range(self.p)]

    def parse(self, text: str) -> "GF":
        m = _INT_RE.match(text)
        if m is None:
            raise ParseError(f"malformed residue for {self.name}: {text!r}")
        return GF(int(m.group(1)), self)

    def format(self, a: "GF") -> str:
        return str(a.value)

    def to_json(self):
        return {"prime": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class GF:
    """An element of a prime field.  Immutable."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        object.__setattr__(self, "value", value % field.p)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("GF elements are immutable")

    def _other(self, other) -> int:
        if isinstance(other, GF):
            if other.field.p != self.field.p:
                raise FieldMismatchError(
                    f"cannot combine GF({self.field.p}) and GF({other.field.p})")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        raise FieldMismatchError(
            f"cannot combine GF({self.field.p}) with {type(other).__name__}")

    def __add__(self, other):
        return GF(self.value + self._other(other), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return GF(self.value - self._other(other), self.field)

    def __rsub__(self, other):
        return GF(self._other(other) - self.value, self.field)

    def __mul__(self, other):
        return GF(self.value * self._other(other), self.field)

    __rmul__ = __mul__

    def inverse(self) -> "GF":
        if self.value == 0:
            raise ZeroDivisionError(f"division by zero in {self.field.name}")
        return GF(pow(self.value, -1, self.field.p), self.field)

    def __truediv__(self, other):
        o = self._other(other) % self.field.p
        if o == 0:
            raise ZeroDivisionError(f"division by zero in {self.field.name}")
        return GF(self.value * pow(o, -1, self.field.p), self.field)

    def __rtruediv__(self, other):
        return GF(self._other(other), self.field) / self

    def __neg__(self):
        return GF(-self.value, self.field)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return GF(pow(self.value, n, self.field.p), self.field)

    def __eq__(self, other):
        if isinstance(other, GF):
            return self.field.p == other.field.p and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"GF{self.field.p}({self.value})"

    def __str__(self):
        return str(self.value)


FieldElement = Union[Fraction, GF]
Field = Union[RationalField, PrimeField]


def field_of(a) -> Field:
    if isinstance(a, GF):
        return a.field
    if isinstance(a, Fraction):
        return QQ
    raise FieldMismatchError(f"{a!r} is not a field element")


def arith(a, b, op: str):
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two elements of one field."""
    if field_of(a) != field_of(b):
        raise FieldMismatchError(f"mixed-field operands {a!r}, {b!r}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def parse(text: str, field: Field) -> FieldElement:
    return field.parse(text)


def format_element(a: FieldElement) -> str:
    return field_of(a).format(a)
