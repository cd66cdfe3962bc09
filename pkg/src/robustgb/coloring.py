"""Fractional graph coloring and the partial-basis coloring decision.

Vertices are ``0..n-1``. A :class:`ColoringResult` may be partial; its
``cut_edges`` counts edges whose endpoints are both colored and differ.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .polyring import GroebnerBasis, LEX, buchberger, s_pair_failures
from .polyring.groebner import reduce
from .polyring.textformat import FormatError
from .reductions import coloring_ideal


class OracleContractError(ValueError):
    """An oracle colored too few vertices or returned an improper coloring."""


class ContractError(ValueError):
    """Inputs to the coloring decision violate its preconditions."""


@dataclass(frozen=True)
class Graph:
    num_vertices: int
    edges: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) outside 0..{self.num_vertices - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def adjacency(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in range(self.num_vertices)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def induced(self, vertices: Iterable[int]) -> Tuple["Graph", List[int]]:
        """Induced subgraph relabelled to ``0..k-1``, plus the old labels."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        edges = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(len(keep), edges), keep

    def without(self, removed: Iterable[int]) -> "Graph":
        """Same vertex labels, with every edge touching ``removed`` dropped."""
        gone = set(removed)
        return Graph(self.num_vertices, frozenset(e for e in self.edges if not (set(e) & gone)))


def parse_graph(text: str) -> Graph:
    """Edge list: ``p <num_vertices>`` header, then ``u v`` per line; ``#`` comments."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None or len(parts) != 2:
                raise FormatError(f"line {lineno}: malformed header {line!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise FormatError(f"line {lineno}: malformed header {line!r}") from None
            continue
        if n is None:
            raise FormatError(f"line {lineno}: edge before 'p' header")
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError(f"line {lineno}: bad vertex in {line!r}") from None
        edges.append((u, v))
    if n is None:
        raise FormatError("missing 'p <num_vertices>' header")
    seen = set()
    for u, v in edges:
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"duplicate edge {u} {v}")
        seen.add(key)
    try:
        return Graph.from_edges(n, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_graph(g: Graph) -> str:
    lines = [f"p {g.num_vertices}"]
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


@dataclass(frozen=True)
class ColoringResult:
    colors: Dict[int, int]
    num_colors: int
    cut_edges: int

    @classmethod
    def build(cls, g: Graph, colors: Mapping[int, int], num_colors: Optional[int] = None) -> "ColoringResult":
        colors = dict(colors)
        if num_colors is None:
            num_colors = len(set(colors.values()))
        return cls(colors, num_colors, count_cut(g, colors))

    def classes(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for v, c in sorted(self.colors.items()):
            out.setdefault(c, []).append(v)
        return out

    def used_colors(self) -> int:
        return len(set(self.colors.values()))

    def to_json(self, g: Graph) -> dict:
        return {
            "schema": 1,
            "colors": {str(v): c for v, c in sorted(self.colors.items())},
            "num_colors": self.num_colors,
            "colored_vertices": len(self.colors),
            "num_vertices": g.num_vertices,
            "cut_edges": self.cut_edges,
            "num_edges": g.num_edges,
        }


def count_cut(g: Graph, colors: Mapping[int, int]) -> int:
    return sum(1 for u, v in g.edges if u in colors and v in colors and colors[u] != colors[v])


def is_proper(g: Graph, colors: Mapping[int, int]) -> bool:
    """No edge between two vertices of the same color (uncolored vertices ignored)."""
    return all(not (u in colors and v in colors and colors[u] == colors[v]) for u, v in g.edges)


# -- greedy edge-fractional coloring ---------------------------------------------------------


def greedy_fractional_color(
    g: Graph,
    k: int = 3,
    vertex_order: Optional[Sequence[int]] = None,
    seed: Optional[int] = None,
) -> ColoringResult:
    """Color vertices in order, each into the class with fewest edges to it.

    Ties go to the lowest class index. With ``seed`` (and no explicit order)
    the vertex order is a seeded shuffle. Runs in ``O(n + |E| + n k)``.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if vertex_order is None:
        vertex_order = list(range(g.num_vertices))
        if seed is not None:
            random.Random(seed).shuffle(vertex_order)
    elif sorted(vertex_order) != list(range(g.num_vertices)):
        raise ValueError("vertex_order must be a permutation of the vertices")
    adj = g.adjacency()
    colors: Dict[int, int] = {}
    for v in vertex_order:
        counts = [0] * k
        for u in adj[v]:
            c = colors.get(u)
            if c is not None:
                counts[c] += 1
        colors[v] = counts.index(min(counts))
    return ColoringResult.build(g, colors, k)


# -- vertex-fractional combinators ---------------------------------------------------------


def project_to_three_colors(c: ColoringResult, g: Optional[Graph] = None) -> ColoringResult:
    """Keep only the three largest color classes, relabelled 0, 1, 2.

    Ties between equal-size classes go to the lower color index. A coloring
    with at most three classes is returned unchanged.
    """
    classes = c.classes()
    if len(classes) <= 3:
        return c
    ranked = sorted(classes, key=lambda col: (-len(classes[col]), col))[:3]
    relabel = {col: new for new, col in enumerate(ranked)}
    colors = {v: relabel[col] for v, col in c.colors.items() if col in relabel}
    cut = count_cut(g, colors) if g is not None else 0
    return ColoringResult(colors, 3, cut)


VertexOracle = Callable[[Graph], Mapping[int, int]]


@dataclass(frozen=True)
class IterationResult:
    coloring: ColoringResult
    rounds: int
    remaining_after: Tuple[int, ...]


def max_rounds(n: int, epsilon) -> int:
    """Rounds needed when each round colors at least ``epsilon`` of what is left."""
    eps = Fraction(epsilon)
    if n <= 1 or eps == 1:
        return min(n, 1)
    # smallest t with (1 - eps)^t * n < 1
    t = 0
    left = Fraction(n)
    while left >= 1:
        left *= 1 - eps
        t += 1
    return t


def iterate_vertex_oracle(g: Graph, oracle: VertexOracle, epsilon) -> IterationResult:
    """Color all of ``g`` by repeatedly 3-coloring part of the uncolored rest.

    ``oracle`` receives the induced subgraph on the uncolored vertices
    (relabelled ``0..r-1``) and returns a proper 3-coloring, colors in
    ``{0, 1, 2}``, of at least ``epsilon * r`` of them. Round ``t`` uses colors
    ``3t, 3t+1, 3t+2``.
    """
    eps = Fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError(f"epsilon must lie in (0, 1], got {eps}")
    remaining = list(range(g.num_vertices))
    colors: Dict[int, int] = {}
    rounds = 0
    history = []
    while remaining:
        sub, labels = g.induced(remaining)
        part = dict(oracle(sub))
        r = len(remaining)
        if any(v not in range(r) for v in part):
            raise OracleContractError(f"oracle colored vertices outside 0..{r - 1}")
        if any(c not in (0, 1, 2) for c in part.values()):
            raise OracleContractError("oracle used colors outside {0, 1, 2}")
        if len(part) < eps * r or not part:
            raise OracleContractError(f"oracle colored {len(part)} of {r} vertices, need >= {eps} fraction")
        if not is_proper(sub, part):
            raise OracleContractError("oracle returned an improper coloring")
        for v, c in part.items():
            colors[labels[v]] = 3 * rounds + c
        rounds += 1
        remaining = [v for v in remaining if v not in colors]
        history.append(len(remaining))
    if not is_proper(g, colors):
        raise OracleContractError("combined coloring is improper")
    return IterationResult(ColoringResult.build(g, colors, 3 * rounds), rounds, tuple(history))


# -- brute force -------------------------------------------------------------------------


def brute_force_coloring(g: Graph, k: int) -> Optional[Dict[int, int]]:
    """A proper k-coloring by backtracking, or ``None``."""
    n = g.num_vertices
    adj = g.adjacency()
    colors: Dict[int, int] = {}

    def place(v: int) -> bool:
        if v == n:
            return True
        used = {colors[u] for u in adj[v] if u in colors}
        # symmetry: never open more than one fresh color at a time
        limit = min(k, max(colors.values(), default=-1) + 2)
        for c in range(limit):
            if c not in used:
                colors[v] = c
                if place(v + 1):
                    return True
                del colors[v]
        return False

    if n == 0:
        return {}
    if k < 1:
        return None
    return dict(colors) if place(0) else None


def is_k_colorable(g: Graph, k: int) -> bool:
    return brute_force_coloring(g, k) is not None


def largest_colorable_subset_oracle(fraction) -> VertexOracle:
    """Oracle that 3-colors about ``fraction`` of the vertices, by brute force.

    It takes the first ``ceil(fraction * r)`` vertices, so the uncolored
    count shrinks exactly as slowly as the contract allows.
    """
    eps = Fraction(fraction)

    def oracle(sub: Graph) -> Dict[int, int]:
        want = math.ceil(eps * sub.num_vertices)
        part, labels = sub.induced(range(want))
        col = brute_force_coloring(part, 3)
        if col is None:
            raise OracleContractError("induced subgraph is not 3-colorable")
        return {labels[v]: c for v, c in col.items()}

    return oracle


# -- Strong c-Partial coloring decision -------------------------------------------------------


@dataclass(frozen=True)
class NotKColorable:
    """The retained coloring ideal is trivial, so neither G' nor G is k-colorable."""

    k: int
    removed: Tuple[FrozenSet[int], ...]


@dataclass(frozen=True)
class ProperColoring:
    coloring: ColoringResult
    k: int
    extra_colors: int


def _roots_of_unity_q(k: int):
    return {1: [1], 2: [1, -1]}.get(k)


def _backsubstitute_coloring(basis: GroebnerBasis, vertices: Sequence[int], k: int) -> Optional[Dict[int, int]]:
    """k-th roots of unity in Q (k <= 2) read off a lex basis, or ``None``."""
    roots = _roots_of_unity_q(k)
    if roots is None or not basis.order.is_lex:
        return None
    seq = basis.order.variable_sequence(basis.ring.nvars)
    position = {v: i for i, v in enumerate(seq)}
    layers: Dict[int, list] = {v: [] for v in seq}
    for g in basis.elements:
        used = g.variable_indices()
        if not used:
            return None
        layers[min(used, key=position.__getitem__)].append(g)
    chosen: Dict[int, int] = {}
    wanted = set(vertices)
    for v in reversed(seq):
        polys = [g.substitute(chosen) for g in layers[v]]
        if v not in wanted:
            if any(not p.is_zero() for p in polys):
                return None
            continue
        for root in roots:
            if all(p.substitute({v: root}).is_zero() for p in polys):
                chosen[v] = root
                break
        else:
            return None
    return {v: roots.index(chosen[v]) for v in vertices}


def check_independent_sets(g: Graph, removed: Sequence[Iterable[int]]) -> Tuple[FrozenSet[int], ...]:
    """Validate that the sets are disjoint and no two members share an edge polynomial."""
    sets = tuple(frozenset(s) for s in removed)
    seen: set = set()
    for i, s in enumerate(sets):
        if s & seen:
            raise ContractError(f"independent set {i} overlaps an earlier set")
        seen |= s
        for v in s:
            if not 0 <= v < g.num_vertices:
                raise ContractError(f"vertex {v} outside the graph")
        for u, v in g.edges:
            if u in s and v in s:
                raise ContractError(
                    f"set {i} is not independent: v{u} and v{v} share an edge polynomial"
                )
    return sets


def retained_generators(g: Graph, k: int, removed: Sequence[FrozenSet[int]]):
    """Indices of coloring-ideal generators that avoid every removed variable."""
    spec = coloring_ideal(g, k)
    gone = set().union(*removed) if removed else set()
    keep = [i for i, p in enumerate(spec.polynomials) if not (p.variable_indices() & gone)]
    return spec, keep


def cpartial_color_decide(
    g: Graph, k: int, removed: Sequence[Iterable[int]], basis: GroebnerBasis
) -> Union[NotKColorable, ProperColoring]:
    """Turn a Strong c-Partial answer for the k-coloring ideal into a verdict.

    ``removed`` are the discarded independent variable sets (as vertex
    indices) and ``basis`` a Gröbner basis of the retained generators. A
    basis ``{1}`` certifies that ``g`` is not k-colorable; otherwise the
    retained subgraph is k-colored and each removed set gets its own color.
    """
    sets = check_independent_sets(g, removed)
    spec, keep = retained_generators(g, k, sets)
    if basis.ring != spec.ring:
        raise ContractError("basis ring does not match the coloring ideal")
    failures = s_pair_failures(list(basis.elements), basis.order)
    if failures:
        raise ContractError(f"basis fails the S-polynomial certificate at pairs {failures[:5]}")
    for i in keep:
        if basis.elements and not reduce(spec.polynomials[i], list(basis.elements), basis.order).is_zero():
            raise ContractError(f"retained generator {i} is not in the ideal of the basis")
    if basis.is_trivial():
        return NotKColorable(k, sets)

    gone = set().union(*sets) if sets else set()
    kept_vertices = [v for v in range(g.num_vertices) if v not in gone]
    sub_colors = _backsubstitute_coloring(basis, kept_vertices, k)
    sub, labels = g.induced(kept_vertices)
    if sub_colors is None or not is_proper(g, sub_colors):
        found = brute_force_coloring(sub, k)
        if found is None:
            raise ContractError("basis is not {1} but the retained subgraph has no k-coloring")
        sub_colors = {labels[v]: c for v, c in found.items()}
    colors = dict(sub_colors)
    for i, s in enumerate(sets):
        for v in s:
            colors[v] = k + i
    result = ColoringResult.build(g, colors, k + len(sets))
    if not is_proper(g, colors):
        raise ContractError("assembled coloring is improper")
    return ProperColoring(result, k, len(sets))


def retained_basis(g: Graph, k: int, removed: Sequence[Iterable[int]], order=LEX, budget=None) -> GroebnerBasis:
    """Compute the basis a Strong c-Partial solver would return for these sets."""
    sets = check_independent_sets(g, removed)
    spec, keep = retained_generators(g, k, sets)
    kwargs = {} if budget is None else {"budget": budget}
    return buchberger([spec.polynomials[i] for i in keep], order, ring=spec.ring, source=keep, **kwargs)
