import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import clause_true, k_colorable, random_clauses, satisfiable, vandermonde_det_formula
from robustgb.coloring import Graph
from robustgb.polyring import GF, GREVLEX, QQ, buchberger, parse_polynomial
from robustgb.polyring.field import FieldElement
from robustgb.reductions import (
    EncodingError,
    amplification_size,
    build_structure_graph,
    coloring_ideal,
    determinant,
    encode_3sat,
    encode_nonmixed,
    strong_cpartial_construct,
    vandermonde_amplify,
    vandermonde_matrix,
)
from robustgb.satcore import CnfFormula


def formula(n, clauses):
    return CnfFormula.from_ints(n, clauses)


# -- clause encoder -------------------------------------------------------------------


def test_encoder_example():
    sys_ = encode_3sat(formula(11, [(3, -6, 11)]))
    expected = parse_polynomial("x3*x6*x11 - x3*x6 - x6*x11 + x6", sys_.ring)
    assert sys_.polynomials == (expected,)
    assert sys_.var_map == tuple(range(1, 12))


def test_encoder_rejects_trivial_clause():
    with pytest.raises(EncodingError, match="both polarities"):
        encode_3sat(formula(3, [(1, -1, 2)]))


def test_nonmixed_encoder():
    ok = formula(4, [(1, 2, 3), (-2, -3, -4)])
    assert encode_nonmixed(ok).polynomials == encode_3sat(ok).polynomials
    with pytest.raises(EncodingError, match="mixes"):
        encode_nonmixed(formula(3, [(1, -2, 3)]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_encoder_vanishes_exactly_on_satisfying_points(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 6)
    clauses = random_clauses(rng, n, rng.randint(1, 6))
    sys_ = encode_3sat(formula(n, clauses))
    for bits in itertools.product((0, 1), repeat=n):
        truth = {v + 1: bool(b) for v, b in enumerate(bits)}
        for c, f in zip(clauses, sys_.polynomials):
            assert f.evaluate(list(bits)).is_zero() == clause_true(c, truth)
    for f in sys_.polynomials:
        assert f.total_degree() == 3 and all(f.degree_in(i) <= 1 for i in range(n))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_basis_trivial_iff_unsatisfiable(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    clauses = random_clauses(rng, n, rng.randint(1, 6), distinct=False)
    sys_ = encode_3sat(formula(n, clauses))
    assert buchberger(list(sys_.polynomials), GREVLEX, ring=sys_.ring).is_trivial() == (
        not satisfiable(n, clauses)
    )


# -- Vandermonde amplification ---------------------------------------------------------------


def test_amplification_size():
    assert amplification_size(4, Fraction(3, 4)) == 6
    assert amplification_size(3, 1) == 3
    assert amplification_size(7, Fraction(7, 8)) == 8
    with pytest.raises(ValueError):
        amplification_size(3, 0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.fractions(max_denominator=5), min_size=1, max_size=6, unique=True))
def test_determinant_matches_product_formula(points):
    pts = [FieldElement(p, QQ) for p in points]
    M = vandermonde_matrix(pts, len(pts))
    assert determinant(M).value == vandermonde_det_formula(points)


def test_vandermonde_example_and_minors():
    sys_ = encode_3sat(formula(4, [(1, 2, 3), (-1, 2, 4), (2, -3, -4)]))
    amp = vandermonde_amplify(sys_, Fraction(3, 4))
    assert len(amp.polynomials) == 4
    assert [p.value for p in amp.matrix_points] == [0, 1, 2, 3]
    f = sys_.polynomials
    # row for a = 2 is f1 + 2 f2 + 4 f3
    assert amp.polynomials[2] == f[0] + f[1] * 2 + f[2] * 4
    rows = amp.matrix()
    for S in itertools.combinations(range(4), 3):
        assert not determinant([rows[k] for k in S]).is_zero()
    side = amp.sidecar()
    assert side["matrix_points"] == ["0", "1", "2", "3"] and side["num_generators"] == 4


def test_vandermonde_subsets_generate_same_ideal():
    sys_ = encode_3sat(formula(4, [(1, 2, 3), (-1, 2, 4), (2, -3, -4)]))
    amp = vandermonde_amplify(sys_, Fraction(3, 4))
    for S in itertools.combinations(range(4), 3):
        gb = buchberger([amp.polynomials[k] for k in S], GREVLEX, ring=sys_.ring)
        assert all(gb.contains(f) for f in sys_.polynomials)


def test_vandermonde_field_and_point_errors():
    sys7 = encode_3sat(formula(3, [(1, 2, 3)] * 7), GF(5))
    with pytest.raises(EncodingError, match="field too small"):
        vandermonde_amplify(sys7, 1)
    sys_ = encode_3sat(formula(3, [(1, 2, 3), (-1, 2, 3)]))
    with pytest.raises(EncodingError, match="distinct"):
        vandermonde_amplify(sys_, 1, points=[1, 1])
    with pytest.raises(EncodingError, match="exactly"):
        vandermonde_amplify(sys_, 1, points=[1, 2, 3])
    amp = vandermonde_amplify(sys_, 1, points=[Fraction(1, 2), 5])
    assert amp.polynomials[0] == sys_.polynomials[0] + sys_.polynomials[1] * Fraction(1, 2)


# -- Strong c-Partial construction --------------------------------------------------------------


def test_cpartial_layout():
    sys_ = encode_3sat(formula(3, [(1, 2, 3), (-1, -2, 3)]))
    cp = strong_cpartial_construct(sys_, 2)
    assert cp.copies == 3
    assert cp.ring.variables[0] == "x_link"
    assert cp.ring.nvars == 1 + 3 * 3
    assert len(cp.polynomials) == 3 * 2 + 1
    assert cp.copy_of == (1, 1, 2, 2, 3, 3, 0)
    link = cp.polynomials[-1]
    assert len(link.terms) == cp.ring.nvars and link.total_degree() == 1
    # copies use disjoint variables
    used = [cp.polynomials[2 * i].variable_indices() | cp.polynomials[2 * i + 1].variable_indices() for i in range(3)]
    assert all(not (used[a] & used[b]) for a, b in itertools.combinations(range(3), 2))
    with pytest.raises(ValueError):
        strong_cpartial_construct(sys_, 0)


# -- coloring ideal ----------------------------------------------------------------------------


def test_coloring_ideal_triangle():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    spec = coloring_ideal(g, 3)
    assert len(spec.polynomials) == 6
    assert spec.node_polynomials[0] == parse_polynomial("v0^3 - 1", spec.ring)
    assert spec.edge_polynomials[0] == parse_polynomial("v0^2 + v0*v1 + v1^2", spec.ring)
    assert not buchberger(list(spec.polynomials), GREVLEX).is_trivial()
    assert buchberger(list(coloring_ideal(g, 2).polynomials), GREVLEX).is_trivial()


def test_coloring_ideal_self_loop():
    class Loop:
        num_vertices = 2
        edges = ((0, 0),)

    with pytest.raises(EncodingError, match="self-loop"):
        coloring_ideal(Loop(), 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_two_coloring_ideal_matches_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 6)
    edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.4]
    g = Graph.from_edges(n, edges)
    trivial = buchberger(list(coloring_ideal(g, 2).polynomials), GREVLEX).is_trivial()
    assert trivial == (not k_colorable(n, edges, 2))


# -- structure graph ---------------------------------------------------------------------------


def test_structure_graph_of_encoder():
    sys_ = encode_3sat(formula(5, [(1, 2, 3), (-1, 2, 4), (1, 2, -3)]))
    sg = build_structure_graph(list(sys_.polynomials), sys_.ring)
    assert sg.is_triangle_union()
    assert sg.isolated == (4,)
    mult = sg.edge_multiplicity()
    assert mult[(0, 1)] == 3 and mult[(0, 2)] == 2 and mult[(0, 3)] == 1
    dot = sg.to_dot()
    assert dot.startswith("graph") and '"x1" -- "x2" [label="f0"]' in dot
    assert '"x5" [style="dashed"]' in dot
