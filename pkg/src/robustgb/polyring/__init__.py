"""Exact polynomial arithmetic and Gröbner bases over Q and GF(p)."""

from .field import GF, QQ, Field, FieldElement, FieldError, PrimeField, RationalField, parse_field
from .groebner import (
    Budget,
    BudgetExceeded,
    BuchbergerStats,
    GroebnerBasis,
    buchberger,
    divide,
    eliminate,
    is_groebner,
    is_trivial_ideal,
    reduce,
    reducedness_failures,
    s_pair_failures,
    s_polynomial,
)
from .orders import GREVLEX, GRLEX, LEX, Monomial, OrderKind, TermOrder, parse_order
from .polynomial import PolyRing, Polynomial, StructuralError, poly_arith, product
from .textformat import FormatError, format_polynomial, format_system, parse_polynomial, parse_system

__all__ = [
    "GF", "QQ", "Field", "FieldElement", "FieldError", "PrimeField", "RationalField",
    "parse_field", "Budget", "BudgetExceeded", "BuchbergerStats", "GroebnerBasis",
    "buchberger", "divide", "eliminate", "is_groebner", "is_trivial_ideal", "reduce",
    "reducedness_failures", "s_pair_failures", "s_polynomial", "GREVLEX", "GRLEX", "LEX",
    "Monomial", "OrderKind", "TermOrder", "parse_order", "PolyRing", "Polynomial",
    "StructuralError", "poly_arith", "product", "FormatError", "format_polynomial",
    "format_system", "parse_polynomial", "parse_system",
]
