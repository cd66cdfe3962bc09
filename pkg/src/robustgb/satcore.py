"""3-CNF formulas, DIMACS I/O, brute-force oracles and final-stage rounding.

Assignments are three-valued: ``True``, ``False`` or ``None`` (undecided).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .polyring.field import FieldElement
from .polyring.textformat import FormatError

UNDECIDED = None


@dataclass(frozen=True)
class Literal:
    variable: int
    positive: bool = True

    def __post_init__(self):
        if self.variable < 1:
            raise ValueError(f"variable index must be >= 1, got {self.variable}")

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit > 0)

    def to_int(self) -> int:
        return self.variable if self.positive else -self.variable

    def value(self, truth: Optional[bool]) -> Optional[bool]:
        if truth is None:
            return None
        return truth if self.positive else not truth

    def __str__(self):
        return f"y{self.variable}" if self.positive else f"~y{self.variable}"


@dataclass(frozen=True)
class Clause:
    literals: Tuple[Literal, Literal, Literal]

    def __post_init__(self):
        lits = tuple(self.literals)
        if len(lits) != 3:
            raise ValueError(f"3-CNF clause needs exactly 3 literals, got {len(lits)}")
        object.__setattr__(self, "literals", lits)

    @classmethod
    def of(cls, *lits: int) -> "Clause":
        return cls(tuple(Literal.from_int(l) for l in lits))

    @property
    def trivial(self) -> bool:
        """Contains some variable in both polarities (always satisfied)."""
        pos = {l.variable for l in self.literals if l.positive}
        return any(not l.positive and l.variable in pos for l in self.literals)

    @property
    def all_positive(self) -> bool:
        return all(l.positive for l in self.literals)

    @property
    def all_negative(self) -> bool:
        return not any(l.positive for l in self.literals)

    @property
    def variables(self) -> frozenset:
        return frozenset(l.variable for l in self.literals)

    def to_ints(self) -> Tuple[int, ...]:
        return tuple(l.to_int() for l in self.literals)

    def __str__(self):
        return " v ".join(map(str, self.literals))


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: Tuple[Clause, ...]
    comments: Tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        object.__setattr__(self, "comments", tuple(self.comments))
        for k, c in enumerate(self.clauses):
            for l in c.literals:
                if l.variable > self.num_vars:
                    raise ValueError(f"clause {k} uses y{l.variable} but num_vars={self.num_vars}")

    @classmethod
    def from_ints(cls, num_vars: int, clauses: Iterable[Sequence[int]]) -> "CnfFormula":
        return cls(num_vars, tuple(Clause.of(*c) for c in clauses))

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def non_mixed(self) -> bool:
        return all(c.all_positive or c.all_negative for c in self.clauses)

    def __len__(self):
        return len(self.clauses)


class Assignment:
    """Map from variable index to ``True``/``False``/``None`` (undecided)."""

    def __init__(self, values: Optional[Mapping[int, Optional[bool]]] = None):
        self.values: Dict[int, Optional[bool]] = dict(values or {})
        for v in self.values:
            if v < 1:
                raise ValueError(f"variable index must be >= 1, got {v}")

    @classmethod
    def total(cls, bits: Sequence[bool]) -> "Assignment":
        return cls({i + 1: bool(b) for i, b in enumerate(bits)})

    def get(self, v: int) -> Optional[bool]:
        return self.values.get(v)

    def __getitem__(self, v: int) -> Optional[bool]:
        return self.values.get(v)

    def undecided(self, num_vars: int) -> List[int]:
        return [v for v in range(1, num_vars + 1) if self.values.get(v) is None]

    def is_total(self, num_vars: int) -> bool:
        return not self.undecided(num_vars)

    def filled(self, num_vars: int, value: bool = False) -> "Assignment":
        """Replace every undecided variable in ``1..num_vars`` by ``value``."""
        out = dict(self.values)
        for v in range(1, num_vars + 1):
            if out.get(v) is None:
                out[v] = value
        return Assignment(out)

    def to_json(self) -> Dict[str, Union[bool, str]]:
        return {
            f"y{v}": ("undecided" if b is None else b) for v, b in sorted(self.values.items())
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Union[bool, str]]) -> "Assignment":
        values = {}
        for k, b in data.items():
            if not k.startswith("y"):
                raise FormatError(f"bad assignment key {k!r}")
            if b == "undecided":
                b = None
            elif not isinstance(b, bool):
                raise FormatError(f"bad assignment value {b!r} for {k}")
            values[int(k[1:])] = b
        return cls(values)

    def __eq__(self, other):
        if not isinstance(other, Assignment):
            return NotImplemented
        norm = lambda d: {k: v for k, v in d.items() if v is not None}
        return norm(self.values) == norm(other.values)

    def __repr__(self):
        return f"Assignment({self.to_json()})"


# -- DIMACS ------------------------------------------------------------------------


def parse_dimacs(text: Union[str, bytes]) -> CnfFormula:
    """Parse a DIMACS CNF file whose clauses all have width 3."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    comments = []
    header = None
    clauses = []
    current: List[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip() if line == "c" or line[1] == " " else line[1:])
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise FormatError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormatError(f"line {lineno}: malformed header {line!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise FormatError(f"line {lineno}: negative counts in header")
            continue
        if header is None:
            raise FormatError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                if len(current) != 3:
                    raise FormatError(
                        f"clause {len(clauses) + 1} ({' '.join(map(str, current))} 0) "
                        f"has width {len(current)}, expected 3"
                    )
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > header[0]:
                    raise FormatError(f"line {lineno}: literal {lit} exceeds {header[0]} variables")
                current.append(lit)
    if header is None:
        raise FormatError("missing 'p cnf' header")
    if current:
        raise FormatError(f"unterminated clause {' '.join(map(str, current))}")
    if len(clauses) != header[1]:
        raise FormatError(f"header declares {header[1]} clauses, found {len(clauses)}")
    formula = CnfFormula.from_ints(header[0], clauses)
    return CnfFormula(formula.num_vars, formula.clauses, tuple(comments))


def emit_dimacs(phi: CnfFormula) -> str:
    lines = [f"c {c}" if c else "c" for c in phi.comments]
    lines.append(f"p cnf {phi.num_vars} {phi.num_clauses}")
    lines.extend(" ".join(map(str, c.to_ints())) + " 0" for c in phi.clauses)
    return "\n".join(lines) + "\n"


# -- evaluation ------------------------------------------------------------------------


class UndecidedPolicy(Enum):
    COUNT_UNSAT = "count_unsat"
    COUNT_BY_RULE = "count_by_rule"


def clause_satisfied(clause: Clause, a: Assignment) -> bool:
    return any(l.value(a.get(l.variable)) is True for l in clause.literals)


def count_satisfied(
    phi: CnfFormula,
    a: Assignment,
    undecided_policy: UndecidedPolicy = UndecidedPolicy.COUNT_UNSAT,
    fill: bool = False,
) -> int:
    """Number of clauses with at least one true literal.

    Under ``COUNT_UNSAT`` undecided literals never count as true; under
    ``COUNT_BY_RULE`` undecided variables take the value ``fill``.
    """
    if undecided_policy is UndecidedPolicy.COUNT_BY_RULE:
        a = a.filled(phi.num_vars, fill)
    return sum(1 for c in phi.clauses if clause_satisfied(c, a))


def brute_force_sat(phi: CnfFormula, limit: int = 24) -> Optional[Assignment]:
    """Exhaustive satisfiability check; a satisfying assignment or ``None``.

    Enumerates assignments in binary counting order (y1 is the low bit), so
    the first model found is deterministic.
    """
    n = phi.num_vars
    if n > limit:
        raise ValueError(f"brute force refused: {n} variables exceeds limit {limit}")
    # clause k is falsified by x iff (x & mask) == want
    checks = []
    for c in phi.clauses:
        if c.trivial:
            continue
        mask = want = 0
        for l in c.literals:
            bit = 1 << (l.variable - 1)
            mask |= bit
            if not l.positive:
                want |= bit
        checks.append((mask, want))
    for x in range(1 << n):
        for mask, want in checks:
            if x & mask == want:
                break
        else:
            return Assignment({v: bool(x >> (v - 1) & 1) for v in range(1, n + 1)})
    return None


def all_models(phi: CnfFormula, limit: int = 20) -> List[Assignment]:
    if phi.num_vars > limit:
        raise ValueError(f"enumeration refused: {phi.num_vars} variables exceeds limit {limit}")
    n = phi.num_vars
    models = []
    for x in range(1 << n):
        a = Assignment({v: bool(x >> (v - 1) & 1) for v in range(1, n + 1)})
        if all(clause_satisfied(c, a) for c in phi.clauses):
            models.append(a)
    return models


# -- final-stage rounding ------------------------------------------------------------------


def clause_probability(clause: Clause, a: Assignment) -> Fraction:
    """Exact probability that ``clause`` holds when undecided variables are fair coins."""
    undecided: Dict[int, bool] = {}
    for l in clause.literals:
        val = l.value(a.get(l.variable))
        if val is True:
            return Fraction(1)
        if val is None:
            if undecided.get(l.variable, l.positive) != l.positive:
                return Fraction(1)  # y and not-y both open
            undecided[l.variable] = l.positive
    return 1 - Fraction(1, 2 ** len(undecided))


def expected_satisfied(phi: CnfFormula, a: Assignment) -> Fraction:
    return sum((clause_probability(c, a) for c in phi.clauses), Fraction(0))


def randomized_completion(phi: CnfFormula, partial: Assignment, seed: int = 0) -> Assignment:
    """Set each undecided variable to a fair coin flip, in ascending order."""
    rng = random.Random(seed)
    out = dict(partial.values)
    for v in range(1, phi.num_vars + 1):
        if out.get(v) is None:
            out[v] = rng.random() < 0.5
    return Assignment(out)


def derandomize_completion(phi: CnfFormula, partial: Assignment) -> Assignment:
    """Method of conditional expectations over the undecided variables.

    Variables are fixed in ascending index order; ``True`` wins ties. The
    final count is at least the expected count of :func:`randomized_completion`.
    """
    current = dict(partial.values)
    touching: Dict[int, List[Clause]] = {}
    for c in phi.clauses:
        for v in c.variables:
            touching.setdefault(v, []).append(c)
    for v in range(1, phi.num_vars + 1):
        if current.get(v) is not None:
            continue
        clauses = touching.get(v, [])
        current[v] = True
        e_true = sum((clause_probability(c, Assignment(current)) for c in clauses), Fraction(0))
        current[v] = False
        e_false = sum((clause_probability(c, Assignment(current)) for c in clauses), Fraction(0))
        current[v] = e_true >= e_false
    return Assignment(current)


def point_to_assignment(
    point: Sequence[object], var_map: Optional[Mapping[int, int]] = None
) -> Assignment:
    """Read a truth assignment off a variety point.

    ``point[i]`` is a field value (or ``None`` for a free coordinate);
    ``var_map`` sends coordinate index -> SAT variable (default ``i + 1``).
    1 maps to True, 0 to False, anything else to undecided.
    """
    out: Dict[int, Optional[bool]] = {}
    for i, coord in enumerate(point):
        v = var_map[i] if var_map is not None else i + 1
        if isinstance(coord, FieldElement):
            coord = coord.value
        if coord is None:
            out[v] = None
        elif coord == 1:
            out[v] = True
        elif coord == 0:
            out[v] = False
        else:
            out[v] = None
    return Assignment(out)


def random_3cnf(num_vars: int, num_clauses: int, rng: random.Random, distinct: bool = True) -> CnfFormula:
    """Uniform random 3-CNF; ``distinct`` picks three different variables per clause."""
    if distinct and num_vars < 3:
        raise ValueError("need at least 3 variables for distinct-variable clauses")
    clauses = []
    for _ in range(num_clauses):
        if distinct:
            vs = rng.sample(range(1, num_vars + 1), 3)
        else:
            vs = [rng.randint(1, num_vars) for _ in range(3)]
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula.from_ints(num_vars, clauses)
