"""Reading points and truth assignments off lex Gröbner bases.

The ideals handled here come from the clause encoder, whose varieties are
finite unions of products of ``{0}``, ``{1}`` and the whole line. Walking a
lex basis from the smallest variable upward, each coordinate is therefore
free, 0 or 1, and the partial point always extends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .polyring import (
    GroebnerBasis,
    Polynomial,
    buchberger,
    reducedness_failures,
    s_pair_failures,
)
from .polyring.field import FieldElement
from .polyring.groebner import reduce
from .reductions import EncodedSystem
from .satcore import (
    Assignment,
    CnfFormula,
    count_satisfied,
    derandomize_completion,
    point_to_assignment,
)


class EmptyVarietyError(ValueError):
    """The basis is ``{1}``: there is no point to extract."""


class ContractViolation(ValueError):
    """The input does not meet an operation's precondition."""


class Free:
    """Marker for an unconstrained coordinate."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "FREE"


FREE = Free()


@dataclass(frozen=True)
class VarietyPoint:
    """Coordinates keyed by ring variable index: a :class:`FieldElement` or ``FREE``."""

    coords: Dict[int, object]

    def fixed(self) -> Dict[int, FieldElement]:
        return {i: c for i, c in self.coords.items() if c is not FREE}

    def free(self) -> List[int]:
        return sorted(i for i, c in self.coords.items() if c is FREE)

    def as_list(self, nvars: int) -> List[Optional[FieldElement]]:
        """Dense list with ``None`` for free coordinates."""
        return [None if self.coords.get(i, FREE) is FREE else self.coords[i] for i in range(nvars)]

    def vanishes_on(self, p: Polynomial) -> bool:
        """True if ``p`` is identically zero after substituting the fixed coordinates."""
        return p.substitute(self.fixed()).is_zero()


def extract_point(basis: GroebnerBasis) -> VarietyPoint:
    """Back-substitute through the elimination ideals of a lex basis.

    For each variable from the smallest upward: if the basis elements whose
    largest variable it is vanish identically after substituting earlier
    choices, the coordinate is free; otherwise 0 is tried, then 1.
    """
    if not basis.order.is_lex:
        raise ContractViolation(f"point extraction needs a lex basis, got {basis.order}")
    if basis.is_trivial():
        raise EmptyVarietyError("the basis is {1}: the variety is empty")
    ring = basis.ring
    seq = basis.order.variable_sequence(ring.nvars)
    position = {v: k for k, v in enumerate(seq)}
    layers: Dict[int, List[Polynomial]] = {v: [] for v in seq}
    for g in basis.elements:
        used = g.variable_indices()
        if not used:
            raise ContractViolation("nonzero constant in a basis other than {1}")
        top = min(used, key=position.__getitem__)
        layers[top].append(g)

    field_ = ring.field
    chosen: Dict[int, object] = {}
    coords: Dict[int, object] = {}
    for v in reversed(seq):
        polys = [g.substitute(chosen) for g in layers[v]]
        if all(p.is_zero() for p in polys):
            coords[v] = FREE
            continue
        for candidate in (field_.zero(), field_.one()):
            if all(p.substitute({v: candidate}).is_zero() for p in polys):
                chosen[v] = candidate
                coords[v] = FieldElement(candidate, field_)
                break
        else:
            raise ContractViolation(
                f"no value in {{0, 1, free}} extends the partial point at {ring.variables[v]}; "
                "the ideal does not come from the clause encoder"
            )
    point = VarietyPoint(dict(sorted(coords.items())))
    for g in basis.elements:
        if not point.vanishes_on(g):
            raise ContractViolation(f"extracted point does not vanish on {g}")
    return point


# -- fractional solutions ------------------------------------------------------------


@dataclass(frozen=True)
class FractionalSolution:
    """A chosen generator subset, its basis and the claimed fraction.

    ``ignored_variables`` (ring variable indices) is set for structurally
    constrained selections.
    """

    selected: Tuple[int, ...]
    basis: Optional[GroebnerBasis]
    epsilon: Fraction
    ignored_variables: Optional[FrozenSet[int]] = None

    def with_basis(self, basis: GroebnerBasis) -> "FractionalSolution":
        return FractionalSolution(self.selected, basis, self.epsilon, self.ignored_variables)


@dataclass
class Verdict:
    violations: List[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid


def required_count(total: int, epsilon) -> int:
    """Smallest integer ``k`` with ``k >= epsilon * total``."""
    return math.ceil(Fraction(epsilon) * total)


def verify_fractional_solution(
    F: Sequence[Polynomial], sol: FractionalSolution, *, check_ideal: bool = False
) -> Verdict:
    """Check a solution; violations are reported, never raised.

    Checks the cardinality bound, that every selected generator reduces to 0,
    that the basis is reduced and passes the S-polynomial certificate, and the
    structural conditions when ``ignored_variables`` is set. ``check_ideal``
    additionally recomputes a basis of the selection to confirm the basis does
    not generate a larger ideal.
    """
    out: List[str] = []
    selected = list(sol.selected)
    if len(set(selected)) != len(selected):
        out.append("selected indices contain duplicates")
    bad = [i for i in selected if not 0 <= i < len(F)]
    if bad:
        out.append(f"selected indices out of range: {bad}")
        return Verdict(out)
    need = required_count(len(F), sol.epsilon)
    if len(set(selected)) < need:
        out.append(
            f"cardinality: {len(set(selected))} selected < ceil({sol.epsilon} * {len(F)}) = {need}"
        )
    basis = sol.basis
    if basis is None:
        out.append("no basis supplied")
    else:
        elems = list(basis.elements)
        for i in selected:
            if F[i].ring != basis.ring:
                out.append(f"generator {i} lives in a different ring than the basis")
                return Verdict(out)
            if elems:
                r = reduce(F[i], elems, basis.order)
            else:
                r = F[i]
            if not r.is_zero():
                out.append(f"generator {i} does not reduce to 0 modulo the basis")
        out.extend(f"reducedness: {p}" for p in reducedness_failures(elems, basis.order))
        for i, j in s_pair_failures(elems, basis.order):
            out.append(f"certificate: S({i}, {j}) does not reduce to 0")
        if check_ideal:
            ref = buchberger([F[i] for i in selected], basis.order, ring=basis.ring)
            for k, g in enumerate(elems):
                if not ref.contains(g):
                    out.append(f"ideal: basis element {k} is not in the ideal of the selection")
    if sol.ignored_variables is not None:
        ignored = set(sol.ignored_variables)
        chosen = set(selected)
        for i in sorted(chosen):
            hit = F[i].variable_indices() & ignored
            if hit:
                out.append(f"structure: selected generator {i} uses ignored variables {sorted(hit)}")
        for i in range(len(F)):
            if i not in chosen and not (F[i].variable_indices() & ignored):
                out.append(f"structure: discarded generator {i} contains no ignored variable")
    return Verdict(out)


def select_structurally_constrained(sys: EncodedSystem, ignored) -> FractionalSolution:
    """Keep exactly the generators avoiding every ignored variable.

    ``ignored`` holds ring variable indices or names. The basis is left unset.
    """
    idx = frozenset(sys.ring.index(v) if isinstance(v, str) else int(v) for v in ignored)
    for v in idx:
        if not 0 <= v < sys.ring.nvars:
            raise ContractViolation(f"ignored variable index {v} outside the ring")
    selected = tuple(i for i, f in enumerate(sys.polynomials) if not (f.variable_indices() & idx))
    m = len(sys.polynomials)
    eps = Fraction(len(selected), m) if m else Fraction(1)
    return FractionalSolution(selected, None, eps, idx)


# -- constructive pipeline --------------------------------------------------------------------


@dataclass(frozen=True)
class PipelineResult:
    assignment: Assignment
    satisfied: int
    point: VarietyPoint
    lower_bound: int


def theorem2_pipeline(
    phi: CnfFormula,
    sol: FractionalSolution,
    final_stage: bool = False,
    var_map: Optional[Sequence[int]] = None,
) -> PipelineResult:
    """Basis of a selected clause subsystem -> point -> truth assignment.

    With ``final_stage`` the undecided variables are rounded by conditional
    expectations; otherwise they are set to False. ``lower_bound`` is the
    guaranteed count: ``ceil(eps*m)``, or ``ceil((1+eps)/2*m)`` when the
    final stage runs on a structurally constrained selection.
    """
    if sol.basis is None:
        raise ContractViolation("solution has no basis")
    point = extract_point(sol.basis)
    nvars = sol.basis.ring.nvars
    vm = {i: (var_map[i] if var_map is not None else i + 1) for i in range(nvars)}
    partial = point_to_assignment(point.as_list(nvars), vm)
    m = phi.num_clauses
    if final_stage:
        assignment = derandomize_completion(phi, partial)
    else:
        assignment = partial.filled(phi.num_vars, False)
    satisfied = count_satisfied(phi, assignment)
    bound = required_count(m, sol.epsilon)
    if final_stage and sol.ignored_variables is not None:
        bound = required_count(m, (1 + Fraction(sol.epsilon)) / 2)
    return PipelineResult(assignment, satisfied, point, bound)
