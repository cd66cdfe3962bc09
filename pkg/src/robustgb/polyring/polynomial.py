"""Sparse multivariate polynomials over an exact field."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from . import orders
from .field import QQ, Field, FieldElement
from .orders import Monomial, TermOrder


class StructuralError(ValueError):
    """Operands live in different rings, or a structural precondition fails."""


@dataclass(frozen=True)
class PolyRing:
    """``field[variables]``. The declared variable order is the default priority."""

    variables: Tuple[str, ...]
    field: Field = QQ

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise StructuralError(f"duplicate variable names in {self.variables}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise StructuralError(f"variable {name!r} not in ring {self.variables}") from None

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = self.field.convert(c)
        return Polynomial(self, {orders.one(self.nvars): c} if c != 0 else {})

    def gen(self, v: Union[int, str]) -> "Polynomial":
        i = self.index(v) if isinstance(v, str) else v
        return Polynomial(self, {orders.variable(i, self.nvars): self.field.one()})

    def gens(self) -> Tuple["Polynomial", ...]:
        return tuple(self.gen(i) for i in range(self.nvars))

    def from_dict(self, terms: Mapping[Monomial, object]) -> "Polynomial":
        conv = self.field.convert
        clean = {}
        for m, c in terms.items():
            m = tuple(m)
            if len(m) != self.nvars:
                raise StructuralError(f"monomial {m} has wrong length for {self.nvars} variables")
            c = conv(c)
            if c != 0:
                clean[m] = c
        return Polynomial(self, clean)

    def __str__(self):
        return f"{self.field}[{', '.join(self.variables)}]"


class Polynomial:
    """Immutable sparse polynomial: a map monomial -> nonzero coefficient.

    Arithmetic between polynomials requires identical rings; ints, Fractions
    and FieldElements are coerced as scalars.
    """

    __slots__ = ("ring", "terms", "_lead")

    def __init__(self, ring: PolyRing, terms: Dict[Monomial, object]):
        # trusted constructor: terms must already be clean field values
        self.ring = ring
        self.terms = terms
        self._lead = {}

    # -- structure ---------------------------------------------------------

    @property
    def field(self) -> Field:
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def is_one(self) -> bool:
        return self.is_constant() and self.terms.get(orders.one(self.ring.nvars)) == self.field.one()

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def variable_indices(self) -> frozenset:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return frozenset(used)

    def variable_names(self) -> Tuple[str, ...]:
        return tuple(self.ring.variables[i] for i in sorted(self.variable_indices()))

    def __len__(self):
        return len(self.terms)

    def coefficient(self, m: Monomial) -> FieldElement:
        return FieldElement(self.terms.get(tuple(m), 0), self.field)

    # -- ordering ----------------------------------------------------------

    def leading_monomial(self, order: TermOrder) -> Monomial:
        if not self.terms:
            raise StructuralError("zero polynomial has no leading term")
        lm = self._lead.get(order)
        if lm is None:
            lm = max(self.terms, key=order.key)
            self._lead[order] = lm
        return lm

    def leading_coefficient(self, order: TermOrder):
        return self.terms[self.leading_monomial(order)]

    def leading_term(self, order: TermOrder) -> "Polynomial":
        lm = self.leading_monomial(order)
        return Polynomial(self.ring, {lm: self.terms[lm]})

    def sorted_terms(self, order: TermOrder):
        """Terms in decreasing order."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def monic(self, order: TermOrder) -> "Polynomial":
        if not self.terms:
            return self
        f = self.field
        inv = f.inv(self.leading_coefficient(order))
        return Polynomial(self.ring, {m: f.mul(c, inv) for m, c in self.terms.items()})

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise StructuralError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _scalar(self, c):
        return self.field.convert(c)

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        f = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = f.add(out[m], c) if m in out else c
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        return Polynomial(self.ring, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def scalar_mul(self, c) -> "Polynomial":
        c = self._scalar(c)
        if c == 0:
            return self.ring.zero()
        f = self.field
        return Polynomial(self.ring, {m: f.mul(v, c) for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c) -> "Polynomial":
        """Multiply by the single term ``c * mono``."""
        if c == 0:
            return self.ring.zero()
        f = self.field
        return Polynomial(
            self.ring, {orders.mul(m, mono): f.mul(v, c) for m, v in self.terms.items()}
        )

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scalar_mul(other)
        self._check(other)
        f = self.field
        out: Dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                p = f.mul(c1, c2)
                if m in out:
                    s = f.add(out[m], p)
                    if s == 0:
                        del out[m]
                    else:
                        out[m] = s
                else:
                    out[m] = p
        return Polynomial(self.ring, {m: c for m, c in out.items() if c != 0})

    def __rmul__(self, other):
        return self.scalar_mul(other)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative int")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- evaluation --------------------------------------------------------

    def substitute(self, values: Mapping[int, object]) -> "Polynomial":
        """Replace the variables in ``values`` (index -> scalar) by constants."""
        f = self.field
        vals = {i: f.convert(v) for i, v in values.items()}
        out: Dict[Monomial, object] = {}
        for m, c in self.terms.items():
            coef = c
            newm = list(m)
            for i, v in vals.items():
                e = m[i]
                if e:
                    coef = f.mul(coef, _power(f, v, e))
                    newm[i] = 0
            if coef == 0:
                continue
            key = tuple(newm)
            if key in out:
                s = f.add(out[key], coef)
                if s == 0:
                    del out[key]
                else:
                    out[key] = s
            else:
                out[key] = coef
        return Polynomial(self.ring, out)

    def evaluate(self, point: Union[Sequence, Mapping[int, object]]) -> FieldElement:
        """Evaluate at a full point (sequence or index map covering every used variable)."""
        if not isinstance(point, Mapping):
            point = dict(enumerate(point))
        missing = self.variable_indices() - set(point)
        if missing:
            names = [self.ring.variables[i] for i in sorted(missing)]
            raise StructuralError(f"point does not assign {names}")
        r = self.substitute({i: point[i] for i in self.variable_indices()})
        return FieldElement(r.terms.get(orders.one(self.ring.nvars), 0), self.field)

    def change_ring(self, ring: PolyRing, mapping: Optional[Mapping[int, int]] = None) -> "Polynomial":
        """Move into ``ring``; ``mapping`` sends old variable index -> new index.

        By default variables are matched by name.
        """
        if mapping is None:
            mapping = {i: ring.index(v) for i, v in enumerate(self.ring.variables)}
        if ring.field != self.field:
            raise StructuralError(f"field mismatch: {self.field} vs {ring.field}")
        out = {}
        for m, c in self.terms.items():
            nm = [0] * ring.nvars
            for i, e in enumerate(m):
                if e:
                    nm[mapping[i]] += e
            out[tuple(nm)] = c
        return Polynomial(ring, out)

    # -- comparisons / printing -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, FieldElement)) or hasattr(other, "denominator"):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def to_str(self, order: TermOrder = orders.LEX) -> str:
        from .textformat import format_polynomial

        return format_polynomial(self, order)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


def _power(f: Field, v, e: int):
    r = f.one()
    for _ in range(e):
        r = f.mul(r, v)
    return r


def poly_arith(a: Polynomial, b, op: str) -> Polynomial:
    """Dispatch ``add``/``sub``/``mul``/``scalar_mul``; ``b`` is a scalar for the latter."""
    if op == "scalar_mul":
        return a.scalar_mul(b)
    if not isinstance(b, Polynomial):
        raise StructuralError(f"{op} needs two polynomials")
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def product(factors: Iterable[Polynomial], ring: PolyRing) -> Polynomial:
    result = ring.one()
    for f in factors:
        result = result * f
    return result
