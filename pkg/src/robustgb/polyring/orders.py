"""Monomials and term orders.

A monomial is a dense exponent tuple over the ring's variable universe,
``(e_0, ..., e_{n-1})``. :func:`support` gives the sparse view (only
nonzero exponents), which is what gets printed and compared across rings.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

Monomial = Tuple[int, ...]


def one(n: int) -> Monomial:
    return (0,) * n


def variable(i: int, n: int) -> Monomial:
    m = [0] * n
    m[i] = 1
    return tuple(m)


def mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def quotient(b: Monomial, a: Monomial) -> Monomial:
    """``b / a``; caller guarantees ``a | b``."""
    return tuple(y - x for x, y in zip(a, b))


def lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


def degree(m: Monomial) -> int:
    return sum(m)


def support(m: Monomial) -> Dict[int, int]:
    return {i: e for i, e in enumerate(m) if e}


class OrderKind(Enum):
    LEX = "lex"
    GRLEX = "grlex"
    GREVLEX = "grevlex"


@dataclass(frozen=True)
class TermOrder:
    """A monomial order of the given kind.

    ``priority`` lists variable indices from most to least significant;
    ``None`` means the ring's declared order (index 0 largest).
    """

    kind: OrderKind = OrderKind.LEX
    priority: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", OrderKind(self.kind))
        if self.priority is not None:
            pr = tuple(self.priority)
            if sorted(pr) != list(range(len(pr))):
                raise ValueError(f"priority {pr} is not a permutation")
            object.__setattr__(self, "priority", pr)

    @classmethod
    def lex(cls, priority: Optional[Sequence[int]] = None) -> "TermOrder":
        return cls(OrderKind.LEX, None if priority is None else tuple(priority))

    @classmethod
    def grlex(cls, priority: Optional[Sequence[int]] = None) -> "TermOrder":
        return cls(OrderKind.GRLEX, None if priority is None else tuple(priority))

    @classmethod
    def grevlex(cls, priority: Optional[Sequence[int]] = None) -> "TermOrder":
        return cls(OrderKind.GREVLEX, None if priority is None else tuple(priority))

    @property
    def is_lex(self) -> bool:
        return self.kind is OrderKind.LEX

    def variable_sequence(self, n: int) -> Tuple[int, ...]:
        """Variable indices from largest to smallest."""
        if self.priority is None:
            return tuple(range(n))
        if len(self.priority) != n:
            raise ValueError(f"order has {len(self.priority)} variables, ring has {n}")
        return self.priority

    def key(self, m: Monomial) -> tuple:
        """Sort key: ``key(a) < key(b)`` iff ``a < b`` in this order."""
        if self.priority is not None:
            m = tuple(m[i] for i in self.priority)
        kind = self.kind
        if kind is OrderKind.LEX:
            return m
        if kind is OrderKind.GRLEX:
            return (sum(m),) + m
        return (sum(m),) + tuple(-e for e in reversed(m))

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def __str__(self):
        if self.priority is None:
            return self.kind.value
        return f"{self.kind.value}:{','.join(map(str, self.priority))}"


def parse_order(text: str, variables: Sequence[str] = ()) -> TermOrder:
    """Parse ``lex``, ``grevlex`` or ``lex:x3,x1,x2`` style order specs."""
    kind, _, rest = text.partition(":")
    kind = OrderKind(kind.strip().lower())
    if not rest:
        return TermOrder(kind)
    names = [t.strip() for t in rest.split(",") if t.strip()]
    index = {v: i for i, v in enumerate(variables)}
    try:
        priority = tuple(index[v] if v in index else int(v) for v in names)
    except ValueError:
        raise ValueError(f"unknown variable in order spec {text!r}") from None
    return TermOrder(kind, priority)


LEX = TermOrder.lex()
GRLEX = TermOrder.grlex()
GREVLEX = TermOrder.grevlex()
