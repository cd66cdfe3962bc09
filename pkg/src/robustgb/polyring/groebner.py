"""Multivariate division and Buchberger's algorithm.

The main entry point is :func:`buchberger`, which returns the reduced
(monic, inter-reduced) Gröbner basis of the ideal generated by its input.
Pairs are processed with the normal selection strategy and filtered by the
coprime-leading-monomial and chain criteria. Every run is bounded by a
:class:`Budget`; running out raises :class:`BudgetExceeded` with whatever
intermediate generators were found, never a partial "basis".
"""

from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from . import orders
from .orders import Monomial, TermOrder
from .polynomial import PolyRing, Polynomial, StructuralError


# -- division -----------------------------------------------------------------


def _neg_key(order: TermOrder, m: Monomial) -> tuple:
    return tuple(-x for x in order.key(m))


def _mask(m: Monomial) -> int:
    bits = 0
    for i, e in enumerate(m):
        if e:
            bits |= 1 << i
    return bits


def _prepare_one(d: Polynomial, order: TermOrder):
    lm = d.leading_monomial(order)
    lc = d.terms[lm]
    lcinv = lc if lc == 1 else d.field.inv(lc)
    return (lm, lcinv, d.terms, _mask(lm))


def _prepare(divisors: Sequence[Polynomial], order: TermOrder):
    return [_prepare_one(d, order) for d in divisors]


def _reduce_terms(terms, prepared, order: TermOrder, f, quotients=None, head_only=False):
    """Divide the term dict ``terms`` by ``prepared`` divisors.

    Returns the remainder dict. With ``quotients`` (a list of dicts, one per
    divisor) the quotient terms are accumulated there. ``head_only`` stops
    at the first irreducible term (top reduction).
    """
    p = dict(terms)
    heap = [(_neg_key(order, m), m) for m in p]
    heapq.heapify(heap)
    rem = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = p.get(m)
        if c is None:
            continue
        mmask = _mask(m)
        for idx, (lm, lcinv, g, dmask) in enumerate(prepared):
            if dmask & ~mmask:
                continue
            if all(a <= b for a, b in zip(lm, m)):
                q = tuple(b - a for a, b in zip(lm, m))
                coef = c if lcinv == 1 else f.mul(c, lcinv)
                if quotients is not None:
                    qd = quotients[idx]
                    s = f.add(qd[q], coef) if q in qd else coef
                    if s == 0:
                        qd.pop(q, None)
                    else:
                        qd[q] = s
                for gm, gc in g.items():
                    nm = tuple(a + b for a, b in zip(gm, q))
                    delta = f.mul(coef, gc)
                    old = p.get(nm)
                    if old is None:
                        p[nm] = f.neg(delta)
                        heapq.heappush(heap, (_neg_key(order, nm), nm))
                    else:
                        s = f.sub(old, delta)
                        if s == 0:
                            del p[nm]
                        else:
                            p[nm] = s
                break
        else:
            rem[m] = c
            del p[m]
            if head_only:
                rem.update(p)
                return rem
    return rem


def divide(
    f: Polynomial, divisors: Sequence[Polynomial], order: TermOrder = orders.LEX
) -> Tuple[List[Polynomial], Polynomial]:
    """Multivariate division: ``f = sum(q_i * d_i) + r``.

    Divisors are tried in list order; no term of ``r`` is divisible by any
    divisor's leading monomial.
    """
    for d in divisors:
        if d.ring != f.ring:
            raise StructuralError(f"ring mismatch: {f.ring} vs {d.ring}")
        if d.is_zero():
            raise StructuralError("division by the zero polynomial")
    quotients = [dict() for _ in divisors]
    rem = _reduce_terms(f.terms, _prepare(divisors, order), order, f.field, quotients)
    return [Polynomial(f.ring, q) for q in quotients], Polynomial(f.ring, rem)


def reduce(f: Polynomial, divisors: Sequence[Polynomial], order: TermOrder = orders.LEX) -> Polynomial:
    """Remainder of :func:`divide` without tracking quotients."""
    divisors = [d for d in divisors if not d.is_zero()]
    if not divisors:
        return f
    return Polynomial(f.ring, _reduce_terms(f.terms, _prepare(divisors, order), order, f.field))


def s_polynomial(f: Polynomial, g: Polynomial, order: TermOrder = orders.LEX) -> Polynomial:
    if f.ring != g.ring:
        raise StructuralError(f"ring mismatch: {f.ring} vs {g.ring}")
    if f.is_zero() or g.is_zero():
        raise StructuralError("S-polynomial of the zero polynomial")
    fl, gl = f.leading_monomial(order), g.leading_monomial(order)
    l = orders.lcm(fl, gl)
    field_ = f.field
    a = f.mul_term(orders.quotient(l, fl), field_.inv(f.terms[fl]))
    b = g.mul_term(orders.quotient(l, gl), field_.inv(g.terms[gl]))
    return a - b


# -- Buchberger -----------------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    """Limits on a basis computation.

    ``max_steps`` bounds the number of S-polynomial reductions, ``max_seconds``
    the wall-clock time. ``None`` means unlimited.
    """

    max_steps: Optional[int] = None
    max_seconds: Optional[float] = None


UNLIMITED = Budget()


@dataclass
class BuchbergerStats:
    pairs_considered: int = 0
    skipped_coprime: int = 0
    skipped_chain: int = 0
    reductions: int = 0
    zero_reductions: int = 0
    elapsed: float = 0.0

    def as_dict(self) -> Dict[str, Union[int, float]]:
        return {
            "pairs_considered": self.pairs_considered,
            "skipped_coprime": self.skipped_coprime,
            "skipped_chain": self.skipped_chain,
            "spoly_reductions": self.reductions,
            "zero_reductions": self.zero_reductions,
            "elapsed_seconds": round(self.elapsed, 6),
        }


class BudgetExceeded(RuntimeError):
    """The step or time budget ran out before the basis was complete.

    ``partial`` holds the generators accumulated so far (they generate the
    input ideal but are not a Gröbner basis).
    """

    def __init__(self, message: str, partial: List[Polynomial], stats: BuchbergerStats):
        super().__init__(message)
        self.partial = partial
        self.stats = stats


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Gröbner basis, sorted by decreasing leading monomial."""

    elements: Tuple[Polynomial, ...]
    order: TermOrder
    ring: PolyRing
    source: Optional[Tuple[int, ...]] = None
    stats: Optional[BuchbergerStats] = field(default=None, compare=False)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def is_trivial(self) -> bool:
        return is_trivial_ideal(self)

    def reduce(self, f: Polynomial) -> Polynomial:
        return reduce(f, self.elements, self.order)

    def contains(self, f: Polynomial) -> bool:
        return self.reduce(f).is_zero()

    def leading_monomials(self) -> List[Monomial]:
        return [g.leading_monomial(self.order) for g in self.elements]

    def to_strings(self) -> List[str]:
        return [g.to_str(self.order) for g in self.elements]


def _pair_key(order: TermOrder, l: Monomial, i: int, j: int):
    return (order.key(l), i, j)


def _check_budget(budget: Budget, stats: BuchbergerStats, start: float, basis):
    if budget.max_steps is not None and stats.reductions >= budget.max_steps:
        stats.elapsed = time.perf_counter() - start
        raise BudgetExceeded(
            f"step budget of {budget.max_steps} S-polynomial reductions exceeded",
            list(basis),
            stats,
        )
    if budget.max_seconds is not None and time.perf_counter() - start > budget.max_seconds:
        stats.elapsed = time.perf_counter() - start
        raise BudgetExceeded(
            f"time budget of {budget.max_seconds}s exceeded", list(basis), stats
        )


def buchberger(
    generators: Iterable[Polynomial],
    order: TermOrder = orders.LEX,
    budget: Budget = UNLIMITED,
    *,
    ring: Optional[PolyRing] = None,
    source: Optional[Sequence[int]] = None,
) -> GroebnerBasis:
    """Reduced Gröbner basis of ``<generators>`` under ``order``.

    ``ring`` is only needed when ``generators`` is empty (the zero ideal).
    """
    gens = list(generators)
    if ring is None:
        if not gens:
            raise ValueError("empty generator list needs an explicit ring")
        ring = gens[0].ring
    for g in gens:
        if g.ring != ring:
            raise StructuralError(f"ring mismatch: {g.ring} vs {ring}")
    order.variable_sequence(ring.nvars)  # validates priority length
    src = None if source is None else tuple(source)

    start = time.perf_counter()
    stats = BuchbergerStats()
    f = ring.field

    def done(elements):
        stats.elapsed = time.perf_counter() - start
        return GroebnerBasis(tuple(elements), order, ring, src, stats)

    basis: List[Polynomial] = []
    seen = set()
    for g in gens:
        if g.is_zero():
            continue
        if g.is_constant():
            return done([ring.one()])
        g = g.monic(order)
        if g in seen:
            continue
        seen.add(g)
        basis.append(g)

    lms = [g.leading_monomial(order) for g in basis]
    reducers = _prepare(basis, order)
    heap = []
    pending = set()

    def add_pairs(j):
        for i in range(j):
            l = orders.lcm(lms[i], lms[j])
            heapq.heappush(heap, (_pair_key(order, l, i, j), i, j))
            pending.add((i, j))

    for j in range(1, len(basis)):
        add_pairs(j)

    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        stats.pairs_considered += 1
        li, lj = lms[i], lms[j]
        if orders.coprime(li, lj):
            stats.skipped_coprime += 1
            continue
        l = orders.lcm(li, lj)
        chain = False
        for k in range(len(basis)):
            if k == i or k == j:
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            if orders.divides(lms[k], l):
                chain = True
                break
        if chain:
            stats.skipped_chain += 1
            continue

        _check_budget(budget, stats, start, basis)
        stats.reductions += 1
        s = s_polynomial(basis[i], basis[j], order)
        r = Polynomial(ring, _reduce_terms(s.terms, reducers, order, f))
        if r.is_zero():
            stats.zero_reductions += 1
            continue
        if r.is_constant():
            return done([ring.one()])
        r = r.monic(order)
        basis.append(r)
        lms.append(r.leading_monomial(order))
        reducers.append(_prepare_one(r, order))
        add_pairs(len(basis) - 1)

    return done(_reduced_form(basis, order))


def _reduced_form(basis: List[Polynomial], order: TermOrder) -> List[Polynomial]:
    """Minimalize and inter-reduce a Gröbner basis; output sorted descending."""
    minimal: List[Polynomial] = []
    lms = [g.leading_monomial(order) for g in basis]
    for idx, g in enumerate(basis):
        lm = lms[idx]
        redundant = False
        for jdx, other in enumerate(lms):
            if jdx == idx:
                continue
            if orders.divides(other, lm) and (other != lm or jdx < idx):
                redundant = True
                break
        if not redundant:
            minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = minimal[:idx] + minimal[idx + 1:]
        reduced.append(reduce(g, others, order).monic(order))
    reduced.sort(key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
    return reduced


def is_trivial_ideal(basis: Union[GroebnerBasis, Sequence[Polynomial]]) -> bool:
    """True iff the reduced basis is exactly ``{1}``."""
    elements = list(basis)
    return len(elements) == 1 and elements[0].is_one()


# -- certificates -----------------------------------------------------------------


def s_pair_failures(elements: Sequence[Polynomial], order: TermOrder) -> List[Tuple[int, int]]:
    """Index pairs whose S-polynomial does not reduce to zero."""
    elements = [g for g in elements if not g.is_zero()]
    bad = []
    for j in range(len(elements)):
        for i in range(j):
            li = elements[i].leading_monomial(order)
            lj = elements[j].leading_monomial(order)
            if orders.coprime(li, lj):
                continue
            if not reduce(s_polynomial(elements[i], elements[j], order), elements, order).is_zero():
                bad.append((i, j))
    return bad


def is_groebner(elements: Sequence[Polynomial], order: TermOrder) -> bool:
    return not s_pair_failures(elements, order)


def reducedness_failures(elements: Sequence[Polynomial], order: TermOrder) -> List[str]:
    """Reasons why ``elements`` is not a reduced basis (empty if it is)."""
    problems = []
    lms = []
    for k, g in enumerate(elements):
        if g.is_zero():
            problems.append(f"element {k} is zero")
            return problems
        lms.append(g.leading_monomial(order))
        if g.leading_coefficient(order) != g.field.one():
            problems.append(f"element {k} is not monic")
    for k, g in enumerate(elements):
        for j, lm in enumerate(lms):
            if j == k:
                continue
            for m in g.terms:
                if orders.divides(lm, m):
                    problems.append(f"a term of element {k} is divisible by the leading monomial of element {j}")
                    break
    return problems


def eliminate(basis: GroebnerBasis, keep_from: Union[int, str]) -> List[Polynomial]:
    """Elements of a lex basis that only involve the last variables.

    ``keep_from`` is a position in the lex priority sequence (0-based) or a
    variable name; the result is ``G ∩ K[x_k, ..., x_n]``, a Gröbner basis
    of the corresponding elimination ideal.
    """
    if not basis.order.is_lex:
        raise StructuralError(f"elimination needs a lex basis, got {basis.order}")
    seq = basis.order.variable_sequence(basis.ring.nvars)
    if isinstance(keep_from, str):
        k = seq.index(basis.ring.index(keep_from))
    else:
        k = keep_from
    if not 0 <= k <= len(seq):
        raise ValueError(f"elimination index {k} out of range")
    dropped = set(seq[:k])
    return [g for g in basis.elements if not (g.variable_indices() & dropped)]
