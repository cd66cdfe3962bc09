import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import clause_true, random_clauses, satisfiable
from robustgb.extraction import (
    FREE,
    ContractViolation,
    EmptyVarietyError,
    FractionalSolution,
    extract_point,
    required_count,
    select_structurally_constrained,
    theorem2_pipeline,
    verify_fractional_solution,
)
from robustgb.polyring import GREVLEX, LEX, PolyRing, TermOrder, buchberger, parse_polynomial
from robustgb.reductions import encode_3sat
from robustgb.satcore import CnfFormula, count_satisfied


def solve(sys_, selected, order=LEX):
    return buchberger([sys_.polynomials[i] for i in selected], order, ring=sys_.ring, source=tuple(selected))


def test_point_example():
    phi = CnfFormula.from_ints(4, [(1, 2, 3), (-1, -1, -1), (-2, -2, -2)])
    sys_ = encode_3sat(phi)
    point = extract_point(solve(sys_, range(3)))
    assert point.coords[0].value == 0 and point.coords[1].value == 0
    assert point.coords[2].value == 1
    assert point.coords[3] is FREE
    assert point.free() == [3]


def test_empty_variety_and_contracts():
    sys_ = encode_3sat(CnfFormula.from_ints(1, [(1, 1, 1), (-1, -1, -1)]))
    with pytest.raises(EmptyVarietyError):
        extract_point(solve(sys_, [0, 1]))
    with pytest.raises(ContractViolation, match="lex"):
        extract_point(solve(sys_, [0], GREVLEX))
    R = PolyRing(("x",))
    with pytest.raises(ContractViolation):
        extract_point(buchberger([parse_polynomial("x - 2", R)], LEX))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_extracted_point_satisfies_selection(seed, permuted):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    clauses = random_clauses(rng, n, rng.randint(1, 12))
    sys_ = encode_3sat(CnfFormula.from_ints(n, clauses))
    selected = sorted(rng.sample(range(len(clauses)), rng.randint(1, len(clauses))))
    sub = [clauses[i] for i in selected]
    perm = list(range(n))
    if permuted:
        rng.shuffle(perm)
    gb = solve(sys_, selected, TermOrder.lex(perm))
    if not satisfiable(n, sub):
        assert gb.is_trivial()
        return
    point = extract_point(gb)
    for i in selected:
        assert point.vanishes_on(sys_.polynomials[i])
    # any completion of the point satisfies every selected clause
    for fill in (False, True):
        truth = {v + 1: (fill if c is FREE else c.value == 1) for v, c in point.coords.items()}
        assert all(clause_true(c, truth) for c in sub)


# -- verifier ------------------------------------------------------------------------


def small_system():
    phi = CnfFormula.from_ints(4, [(1, 2, 3), (-1, 2, 4), (2, 3, -4), (-2, -3, 4)])
    return phi, encode_3sat(phi)


def test_verifier_accepts_valid_solution():
    _, sys_ = small_system()
    sol = FractionalSolution((0, 1, 2), solve(sys_, (0, 1, 2)), Fraction(3, 4))
    assert verify_fractional_solution(sys_.polynomials, sol, check_ideal=True).valid


def test_verifier_reports_violations():
    _, sys_ = small_system()
    gb = solve(sys_, (0, 1, 2))
    few = FractionalSolution((0, 1), gb, Fraction(3, 4))
    assert any("cardinality" in v for v in verify_fractional_solution(sys_.polynomials, few).violations)
    wrong = FractionalSolution((0, 1, 3), gb, Fraction(3, 4))
    assert any("generator 3" in v for v in verify_fractional_solution(sys_.polynomials, wrong).violations)
    no_basis = FractionalSolution((0, 1, 2), None, Fraction(3, 4))
    assert not verify_fractional_solution(sys_.polynomials, no_basis).valid
    out_of_range = FractionalSolution((0, 9), gb, Fraction(1, 4))
    assert not verify_fractional_solution(sys_.polynomials, out_of_range).valid


def test_verifier_rejects_non_basis_and_bigger_ideal():
    R = PolyRing(("x1", "x2", "x3"))
    F = [parse_polynomial("x1*x2*x3", R), parse_polynomial("x1*x2 - x2", R)]
    not_gb = buchberger(F, LEX)
    broken = type(not_gb)(tuple(F), LEX, R, (0, 1), not_gb.stats)
    v = verify_fractional_solution(F, FractionalSolution((0, 1), broken, 1))
    assert any("certificate" in s or "reducedness" in s for s in v.violations)
    bigger = buchberger([parse_polynomial("x2", R)], LEX)
    sol = FractionalSolution((0, 1), bigger, 1)
    assert verify_fractional_solution(F, sol).valid
    assert any("ideal" in s for s in verify_fractional_solution(F, sol, check_ideal=True).violations)


def test_structural_selection_and_checks():
    _, sys_ = small_system()
    sol = select_structurally_constrained(sys_, ["x1"])
    assert sol.selected == (2, 3)
    assert sol.ignored_variables == frozenset({0})
    sol = sol.with_basis(solve(sys_, sol.selected))
    assert verify_fractional_solution(sys_.polynomials, sol).valid
    # keeping a generator that uses an ignored variable is flagged
    bad = FractionalSolution((0, 2, 3), solve(sys_, (0, 2, 3)), Fraction(3, 4), frozenset({0}))
    violations = verify_fractional_solution(sys_.polynomials, bad).violations
    assert any("uses ignored" in s for s in violations)
    # discarding a generator free of ignored variables is flagged
    bad = FractionalSolution((2,), solve(sys_, (2,)), Fraction(1, 4), frozenset({0}))
    assert any("discarded generator 3" in s for s in verify_fractional_solution(sys_.polynomials, bad).violations)
    with pytest.raises(ContractViolation):
        select_structurally_constrained(sys_, [17])


# -- pipeline --------------------------------------------------------------------------------


def test_required_count():
    assert required_count(8, Fraction(7, 8)) == 7
    assert required_count(9, Fraction(7, 8)) == 8
    assert required_count(0, 1) == 0


def test_pipeline_bounds():
    phi, sys_ = small_system()
    sol = FractionalSolution((0, 1, 2), solve(sys_, (0, 1, 2)), Fraction(3, 4))
    res = theorem2_pipeline(phi, sol)
    assert res.lower_bound == 3 and res.satisfied >= 3
    assert res.assignment.is_total(4)
    assert count_satisfied(phi, res.assignment) == res.satisfied

    struct = select_structurally_constrained(sys_, [0])
    struct = struct.with_basis(solve(sys_, struct.selected))
    off = theorem2_pipeline(phi, struct)
    on = theorem2_pipeline(phi, struct, final_stage=True)
    assert off.lower_bound == 2 and on.lower_bound == 3
    assert on.satisfied >= on.lower_bound and off.satisfied >= off.lower_bound
    with pytest.raises(ContractViolation):
        theorem2_pipeline(phi, FractionalSolution((0,), None, Fraction(1, 4)))
