"""Polynomial gadgets built from formulas and graphs.

* :func:`encode_3sat` / :func:`encode_nonmixed` turn clauses into degree-3
  products of ``x_j - 1`` (positive literal) and ``x_j`` (negative literal).
* :func:`vandermonde_amplify` mixes the clause polynomials with a
  Vandermonde matrix so that any ``m`` of the mixtures generate the same
  ideal as all clauses.
* :func:`strong_cpartial_construct` takes ``c + 1`` disjoint copies and ties
  them together with one linear polynomial.
* :func:`coloring_ideal` writes the k-coloring ideal of a graph.
* :func:`build_structure_graph` is the variable co-occurrence multigraph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

from .polyring import PolyRing, Polynomial, QQ
from .polyring.field import Field, FieldElement
from .polyring.polynomial import StructuralError, product
from .satcore import CnfFormula

if TYPE_CHECKING:
    from .coloring import Graph


class EncodingError(ValueError):
    """The input cannot be encoded (trivial or mixed clause, small field, ...)."""


@dataclass(frozen=True)
class EncodedSystem:
    """Clause polynomials ``f_1..f_m``.

    ``clause_map[i]`` is the clause index of polynomial ``i``;
    ``var_map[j]`` is the SAT variable of ring variable ``j``.
    """

    ring: PolyRing
    polynomials: Tuple[Polynomial, ...]
    clause_map: Tuple[int, ...]
    var_map: Tuple[int, ...]

    def __len__(self):
        return len(self.polynomials)

    def variable_of(self, sat_var: int) -> int:
        return self.var_map.index(sat_var)


def sat_ring(num_vars: int, field: Field = QQ) -> PolyRing:
    return PolyRing(tuple(f"x{j}" for j in range(1, num_vars + 1)), field)


def clause_polynomial(clause, ring: PolyRing) -> Polynomial:
    factors = []
    for lit in clause.literals:
        x = ring.gen(lit.variable - 1)
        factors.append(x - 1 if lit.positive else x)
    return product(factors, ring)


def encode_3sat(phi: CnfFormula, field: Field = QQ) -> EncodedSystem:
    ring = sat_ring(phi.num_vars, field)
    polys = []
    for k, clause in enumerate(phi.clauses):
        if clause.trivial:
            raise EncodingError(f"clause {k} ({clause}) contains a variable in both polarities")
        polys.append(clause_polynomial(clause, ring))
    return EncodedSystem(
        ring,
        tuple(polys),
        tuple(range(len(polys))),
        tuple(range(1, phi.num_vars + 1)),
    )


def encode_nonmixed(phi: CnfFormula, field: Field = QQ) -> EncodedSystem:
    """Encoder restricted to formulas whose clauses are all-positive or all-negative."""
    for k, clause in enumerate(phi.clauses):
        if not (clause.all_positive or clause.all_negative):
            raise EncodingError(f"clause {k} ({clause}) mixes polarities")
    return encode_3sat(phi, field)


# -- Vandermonde amplification --------------------------------------------------------


@dataclass(frozen=True)
class AmplifiedSystem:
    polynomials: Tuple[Polynomial, ...]
    matrix_points: Tuple[FieldElement, ...]
    source: EncodedSystem
    epsilon: Fraction

    @property
    def ring(self) -> PolyRing:
        return self.source.ring

    def matrix(self) -> List[List[FieldElement]]:
        return vandermonde_matrix(self.matrix_points, len(self.source))

    def sidecar(self) -> dict:
        return {
            "schema": 1,
            "epsilon": str(self.epsilon),
            "num_clauses": len(self.source),
            "num_generators": len(self.polynomials),
            "matrix_points": [str(a) for a in self.matrix_points],
            "clause_map": list(self.source.clause_map),
        }


def amplification_size(m: int, epsilon) -> int:
    """``M = ceil(m / epsilon)`` in exact arithmetic."""
    eps = Fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
    q = Fraction(m) / eps
    return math.ceil(q)


def vandermonde_matrix(points: Sequence[FieldElement], m: int) -> List[List[FieldElement]]:
    """Rows ``(1, a, a^2, ..., a^(m-1))``."""
    rows = []
    for a in points:
        row = [a.field(1)]
        for _ in range(m - 1):
            row.append(row[-1] * a)
        rows.append(row)
    return rows


def vandermonde_amplify(
    sys: EncodedSystem, epsilon, points: Optional[Sequence] = None
) -> AmplifiedSystem:
    """Build ``g_k = sum_j a_k^(j-1) f_j`` for ``M = ceil(m/epsilon)`` distinct ``a_k``.

    Default points are ``0, 1, ..., M-1``.
    """
    field_ = sys.ring.field
    eps = Fraction(epsilon)
    m = len(sys)
    M = amplification_size(m, eps)
    if points is None:
        if field_.characteristic and field_.characteristic < M:
            raise EncodingError(
                f"field too small: {field_} has fewer than M={M} distinct elements for the matrix points"
            )
        pts = tuple(FieldElement(i, field_) for i in range(M))
    else:
        pts = tuple(p if isinstance(p, FieldElement) else FieldElement(p, field_) for p in points)
        if len(pts) != M:
            raise EncodingError(f"need exactly M={M} points, got {len(pts)}")
        if any(p.field != field_ for p in pts):
            raise EncodingError("matrix points must live in the system's field")
        if len(set(pts)) != len(pts):
            raise EncodingError("matrix points must be pairwise distinct")
    gs = []
    for row in vandermonde_matrix(pts, m):
        g = sys.ring.zero()
        for coef, f in zip(row, sys.polynomials):
            g = g + f.scalar_mul(coef)
        gs.append(g)
    return AmplifiedSystem(tuple(gs), pts, sys, eps)


def determinant(matrix: Sequence[Sequence[FieldElement]]) -> FieldElement:
    """Exact determinant by Gaussian elimination over the entries' field."""
    n = len(matrix)
    if n == 0:
        raise ValueError("empty matrix")
    f = matrix[0][0].field
    a = [[f.convert(x) for x in row] for row in matrix]
    det = f.one()
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return FieldElement(0, f)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = f.neg(det)
        det = f.mul(det, a[col][col])
        inv = f.inv(a[col][col])
        for r in range(col + 1, n):
            factor = f.mul(a[r][col], inv)
            if factor != 0:
                a[r] = [f.sub(x, f.mul(factor, y)) for x, y in zip(a[r], a[col])]
    return FieldElement(det, f)


# -- Strong c-Partial construction ------------------------------------------------------


@dataclass(frozen=True)
class CPartialSystem:
    """``c + 1`` disjoint copies of a clause system plus a linking polynomial.

    Polynomials are ordered copy by copy, the linking polynomial last.
    ``copy_of[i]`` is the copy number (1-based) of polynomial ``i``, or 0
    for the linking polynomial.
    """

    ring: PolyRing
    polynomials: Tuple[Polynomial, ...]
    linking_variable: str
    copies: int
    copy_of: Tuple[int, ...]


def strong_cpartial_construct(sys: EncodedSystem, c: int) -> CPartialSystem:
    if c < 1:
        raise ValueError(f"c must be a positive integer, got {c}")
    n = sys.ring.nvars
    names = ["x_link"]
    for i in range(1, c + 2):
        names.extend(f"x_{i}_{sys.var_map[j]}" for j in range(n))
    ring = PolyRing(tuple(names), sys.ring.field)
    polys = []
    copy_of = []
    for i in range(1, c + 2):
        offset = 1 + (i - 1) * n
        mapping = {j: offset + j for j in range(n)}
        for f in sys.polynomials:
            polys.append(f.change_ring(ring, mapping))
            copy_of.append(i)
    link = ring.zero()
    for g in ring.gens():
        link = link + g
    polys.append(link)
    copy_of.append(0)
    return CPartialSystem(ring, tuple(polys), "x_link", c + 1, tuple(copy_of))


# -- coloring ideal ---------------------------------------------------------------------


@dataclass(frozen=True)
class ColoringIdealSpec:
    """Node polynomials (one per vertex, in vertex order) then edge polynomials."""

    graph: "Graph"
    k: int
    ring: PolyRing
    polynomials: Tuple[Polynomial, ...]
    edges: Tuple[Tuple[int, int], ...]

    @property
    def node_polynomials(self) -> Tuple[Polynomial, ...]:
        return self.polynomials[: self.graph.num_vertices]

    @property
    def edge_polynomials(self) -> Tuple[Polynomial, ...]:
        return self.polynomials[self.graph.num_vertices:]


def coloring_ring(num_vertices: int, field: Field = QQ) -> PolyRing:
    return PolyRing(tuple(f"v{i}" for i in range(num_vertices)), field)


def coloring_ideal(g: "Graph", k: int, field: Field = QQ) -> ColoringIdealSpec:
    """``x_v^k - 1`` per vertex and ``sum_d x_u^d x_v^(k-1-d)`` per edge."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    for u, v in g.edges:
        if u == v:
            raise EncodingError(f"self-loop at vertex {u}")
    ring = coloring_ring(g.num_vertices, field)
    xs = ring.gens()
    polys = [x ** k - 1 for x in xs]
    edges = tuple(sorted(g.edges))
    for u, v in edges:
        e = ring.zero()
        for d in range(k):
            e = e + xs[u] ** d * xs[v] ** (k - 1 - d)
        polys.append(e)
    return ColoringIdealSpec(g, k, ring, tuple(polys), edges)


# -- structure multigraph -----------------------------------------------------------------


@dataclass(frozen=True)
class StructureGraph:
    """One node per ring variable, one clique per polynomial (multigraph)."""

    nodes: Tuple[str, ...]
    cliques: Tuple[Tuple[int, ...], ...]

    @property
    def edges(self) -> List[Tuple[int, int]]:
        """Edge multiset; parallel edges repeat."""
        out = []
        for clique in self.cliques:
            out.extend(combinations(clique, 2))
        return out

    def edge_multiplicity(self) -> Dict[Tuple[int, int], int]:
        counts: Dict[Tuple[int, int], int] = {}
        for e in self.edges:
            counts[e] = counts.get(e, 0) + 1
        return counts

    @property
    def isolated(self) -> Tuple[int, ...]:
        """Nodes without edges (variables only ever seen alone, or never)."""
        touched = {v for clique in self.cliques if len(clique) > 1 for v in clique}
        return tuple(i for i in range(len(self.nodes)) if i not in touched)

    def is_triangle_union(self) -> bool:
        return all(len(c) == 3 for c in self.cliques)

    def to_dot(self) -> str:
        lines = ["graph G {"]
        isolated = set(self.isolated)
        for i, name in enumerate(self.nodes):
            attr = ' [style="dashed"]' if i in isolated else ""
            lines.append(f'  "{name}"{attr};')
        for k, clique in enumerate(self.cliques):
            for a, b in combinations(clique, 2):
                lines.append(f'  "{self.nodes[a]}" -- "{self.nodes[b]}" [label="f{k}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_structure_graph(polys: Sequence[Polynomial], ring: Optional[PolyRing] = None) -> StructureGraph:
    if ring is None:
        if not polys:
            raise ValueError("need a ring for an empty polynomial list")
        ring = polys[0].ring
    cliques = []
    for p in polys:
        if p.ring != ring:
            raise StructuralError(f"ring mismatch: {p.ring} vs {ring}")
        cliques.append(tuple(sorted(p.variable_indices())))
    return StructureGraph(ring.variables, tuple(cliques))
