"""Independent reference implementations used as test oracles.

Nothing here calls into the code under test except for type conversion.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import sympy

from robustgb.polyring import PolyRing, Polynomial

SYMPY_ORDER = {"lex": "lex", "grlex": "grlex", "grevlex": "grevlex"}


def to_sympy(p: Polynomial):
    syms = sympy.symbols(p.ring.variables)
    expr = sympy.Integer(0)
    for m, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c)
        for s, e in zip(syms, m):
            term *= s ** e
        expr += term
    return expr, syms


def _domain(ring: PolyRing):
    p = ring.field.characteristic
    return sympy.QQ if p == 0 else sympy.GF(p)


def from_sympy(poly, ring: PolyRing) -> Polynomial:
    terms = {}
    for mono, c in poly.terms():
        if ring.field.characteristic == 0:
            terms[tuple(mono)] = Fraction(int(c.numerator), int(c.denominator))
        else:
            terms[tuple(mono)] = int(c)
    return ring.from_dict(terms)


def sympy_groebner(polys, order: str, ring: PolyRing):
    """Reduced monic basis from sympy, converted back to our polynomials."""
    syms = sympy.symbols(ring.variables)
    exprs = [to_sympy(p)[0] for p in polys]
    gb = sympy.groebner(exprs, *syms, order=SYMPY_ORDER[order], domain=_domain(ring))
    out = []
    for g in gb.polys:
        lc = g.LC(order=SYMPY_ORDER[order])
        out.append(from_sympy(g.quo_ground(lc) if lc != 1 else g, ring))
    return out


def sympy_product(a: Polynomial, b: Polynomial) -> Polynomial:
    syms = sympy.symbols(a.ring.variables)
    dom = _domain(a.ring)
    pa = sympy.Poly(to_sympy(a)[0], *syms, domain=dom)
    pb = sympy.Poly(to_sympy(b)[0], *syms, domain=dom)
    return from_sympy(pa * pb, a.ring)


def clause_true(clause, bits) -> bool:
    """``clause`` as DIMACS ints, ``bits[v]`` the value of variable v."""
    return any((bits[abs(l)] if l > 0 else not bits[abs(l)]) for l in clause)


def count_true(clauses, bits) -> int:
    return sum(1 for c in clauses if clause_true(c, bits))


def satisfiable(num_vars, clauses) -> bool:
    for vals in itertools.product((False, True), repeat=num_vars):
        bits = dict(zip(range(1, num_vars + 1), vals))
        if all(clause_true(c, bits) for c in clauses):
            return True
    return False


def exact_expectation(num_vars, clauses, partial) -> Fraction:
    """Average satisfied count over all completions of ``partial`` (dict var -> bool/None)."""
    open_vars = [v for v in range(1, num_vars + 1) if partial.get(v) is None]
    total = 0
    for vals in itertools.product((False, True), repeat=len(open_vars)):
        bits = {v: partial.get(v) for v in range(1, num_vars + 1)}
        bits.update(zip(open_vars, vals))
        total += count_true(clauses, bits)
    return Fraction(total, 2 ** len(open_vars))


def k_colorable(n, edges, k) -> bool:
    for cols in itertools.product(range(k), repeat=n):
        if all(cols[u] != cols[v] for u, v in edges):
            return True
    return n == 0


def vandermonde_det_formula(points):
    det = Fraction(1)
    for r in range(len(points)):
        for s in range(r + 1, len(points)):
            det *= Fraction(points[s]) - Fraction(points[r])
    return det


def random_clauses(rng: random.Random, n: int, m: int, distinct=True):
    out = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), 3) if distinct else [rng.randint(1, n) for _ in range(3)]
        c = tuple(v if rng.random() < 0.5 else -v for v in vs)
        if not distinct and any(-l in c for l in c):
            c = tuple(abs(l) for l in c)
        out.append(c)
    return out


def random_poly(rng: random.Random, ring: PolyRing, max_terms=4, max_deg=3, coeffs=(-3, 3)):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        m = [0] * ring.nvars
        for _ in range(rng.randint(0, max_deg)):
            m[rng.randrange(ring.nvars)] += 1
        c = rng.randint(*coeffs)
        if c:
            terms[tuple(m)] = c
    return ring.from_dict(terms)


def clausewise_expectation(clauses, partial) -> Fraction:
    """Sum over clauses of the fraction of completions of that clause's own open variables that satisfy it."""
    total = Fraction(0)
    for c in clauses:
        open_vars = sorted({abs(l) for l in c if partial.get(abs(l)) is None})
        hits = 0
        for vals in itertools.product((False, True), repeat=len(open_vars)):
            bits = {abs(l): partial.get(abs(l)) for l in c}
            bits.update(zip(open_vars, vals))
            hits += clause_true(c, bits)
        total += Fraction(hits, 2 ** len(open_vars))
    return total
