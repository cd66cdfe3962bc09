"""Exact coefficient fields: the rationals and prime fields GF(p).

Polynomials store raw coefficient values (``Fraction`` for Q, ``int`` in
``[0, p)`` for GF(p)) and delegate arithmetic to a :class:`Field`.
:class:`FieldElement` wraps a value together with its field for use at API
boundaries, e.g. coordinates of variety points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction]


class FieldError(ValueError):
    """Raised for mismatched fields or values outside a field."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """Base class. Subclasses are immutable and compare by value."""

    characteristic: int = 0

    def convert(self, value) -> Number:
        raise NotImplementedError

    def zero(self) -> Number:
        return self.convert(0)

    def one(self) -> Number:
        return self.convert(1)

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        return str(a)

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self.convert(value), self)


class RationalField(Field):
    """The field Q with arbitrary-precision ``Fraction`` values."""

    characteristic = 0

    def convert(self, value) -> Fraction:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError(f"cannot coerce {value.field} element into Q")
            return value.value
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, str)):
            return Fraction(value)
        raise FieldError(f"cannot convert {value!r} to a rational")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / a

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class PrimeField(Field):
    """GF(p) with canonical representatives in ``[0, p)``."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p):
            raise FieldError(f"GF(p) requires a prime modulus, got {p!r}")
        self.p = p
        self.characteristic = p

    def convert(self, value) -> int:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldError(f"cannot coerce {value.field} element into {self}")
            return value.value
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise FieldError(f"denominator of {value} vanishes in {self}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        if isinstance(value, int):
            return value % self.p
        raise FieldError(f"cannot convert {value!r} to {self}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        return pow(a, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(tag: str) -> Field:
    """Parse ``Q`` or ``GF(p)``."""
    tag = tag.strip()
    if tag in ("Q", "QQ"):
        return QQ
    if tag.startswith("GF(") and tag.endswith(")"):
        try:
            p = int(tag[3:-1])
        except ValueError:
            raise FieldError(f"bad field tag {tag!r}") from None
        return PrimeField(p)
    raise FieldError(f"bad field tag {tag!r}")


@dataclass(frozen=True)
class FieldElement:
    """An exact scalar tagged with its field."""

    value: Number
    field: Field

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.convert(self.value))

    def _coerce(self, other) -> Number:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"field mismatch: {self.field} vs {other.field}")
            return other.value
        return self.field.convert(other)

    def __add__(self, other):
        return FieldElement(self.field.add(self.value, self._coerce(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field.sub(self.value, self._coerce(other)), self.field)

    def __rsub__(self, other):
        return FieldElement(self.field.sub(self._coerce(other), self.value), self.field)

    def __mul__(self, other):
        return FieldElement(self.field.mul(self.value, self._coerce(other)), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field.div(self.value, self._coerce(other)), self.field)

    def __rtruediv__(self, other):
        return FieldElement(self.field.div(self._coerce(other), self.value), self.field)

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def is_zero(self) -> bool:
        return self.value == 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.field.convert(other)
            except FieldError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field))

    def __repr__(self):
        return f"{self.field.format(self.value)} in {self.field}"

    def __str__(self):
        return self.field.format(self.value)
