"""Command-line entry point: ``robustgb <command> ...``.

Exit codes: 0 ok, 2 input format, 3 budget exceeded, 4 semantic error in a
pipeline, 5 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from . import __version__
from .coloring import (
    ColoringResult,
    ContractError,
    NotKColorable,
    OracleContractError,
    cpartial_color_decide,
    greedy_fractional_color,
    is_proper,
    iterate_vertex_oracle,
    largest_colorable_subset_oracle,
    parse_graph,
    project_to_three_colors,
    retained_basis,
)
from .extraction import (
    ContractViolation,
    EmptyVarietyError,
    FractionalSolution,
    select_structurally_constrained,
    theorem2_pipeline,
    verify_fractional_solution,
)
from .polyring import (
    Budget,
    BudgetExceeded,
    FormatError,
    GroebnerBasis,
    PolyRing,
    buchberger,
    format_system,
    parse_field,
    parse_order,
    parse_polynomial,
    parse_system,
)
from .polyring.field import FieldError
from .reductions import (
    EncodedSystem,
    EncodingError,
    build_structure_graph,
    coloring_ideal,
    encode_3sat,
    encode_nonmixed,
    strong_cpartial_construct,
    vandermonde_amplify,
)
from .satcore import parse_dimacs

SCHEMA = 1

EXIT_OK = 0
EXIT_FORMAT = 2
EXIT_BUDGET = 3
EXIT_SEMANTIC = 4
EXIT_VERIFY = 5


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    command: str
    inputs: List[Dict[str, str]] = field(default_factory=list)
    parameters: Dict[str, object] = field(default_factory=dict)
    outcome: str = "ok"
    exit_code: int = 0
    message: str = ""
    seconds: float = 0.0
    counters: Dict[str, object] = field(default_factory=dict)

    def add_input(self, path: str, data: bytes):
        self.inputs.append({"path": path, "sha256": hashlib.sha256(data).hexdigest()})

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "version": __version__,
            "command": self.command,
            "inputs": self.inputs,
            "parameters": self.parameters,
            "outcome": self.outcome,
            "exit_code": self.exit_code,
            "message": self.message,
            "timing": {"seconds": round(self.seconds, 6)},
            "counters": self.counters,
        }


# -- helpers -----------------------------------------------------------------------


def _read(path: str, report: RunReport) -> str:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliFailure(EXIT_FORMAT, f"cannot read {path}: {exc}") from None
    report.add_input(path, data)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        raise CliFailure(EXIT_FORMAT, f"{path} is not UTF-8 text") from None


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _budget(args) -> Budget:
    return Budget(max_steps=args.budget, max_seconds=args.timeout)


def _looks_dimacs(text: str) -> bool:
    return any(line.strip().startswith("p cnf") for line in text.splitlines())


def _load_system(text: str, field_tag: str) -> EncodedSystem:
    """A DIMACS file is encoded; a polynomial file is taken as ``f_1..f_m`` directly."""
    if _looks_dimacs(text):
        phi = parse_dimacs(text)
        return encode_3sat(phi, parse_field(field_tag))
    ring, polys = parse_system(text)
    return EncodedSystem(ring, tuple(polys), tuple(range(len(polys))), tuple(range(1, ring.nvars + 1)))


def _parse_sat_vars(spec: str) -> List[int]:
    out = []
    for tok in spec.replace(",", " ").split():
        tok = tok.strip()
        if tok[:1] in ("x", "y"):
            tok = tok[1:]
        try:
            v = int(tok)
        except ValueError:
            raise CliFailure(EXIT_FORMAT, f"bad variable {tok!r} in --ignored-vars") from None
        out.append(v)
    return out


def _parse_sets(spec: str) -> List[List[int]]:
    sets = []
    for chunk in spec.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            sets.append([int(t) for t in chunk.replace(",", " ").split()])
        except ValueError:
            raise CliFailure(EXIT_FORMAT, f"bad vertex set {chunk!r}") from None
    return sets


def _basis_counters(basis: GroebnerBasis) -> dict:
    out = dict(basis.stats.as_dict()) if basis.stats else {}
    out.pop("elapsed_seconds", None)
    out["basis_size"] = len(basis)
    return out


def solution_to_json(sol: FractionalSolution, ring: PolyRing) -> dict:
    basis = sol.basis
    return {
        "schema": SCHEMA,
        "epsilon": str(Fraction(sol.epsilon)),
        "selected": list(sol.selected),
        "ignored_variables": None
        if sol.ignored_variables is None
        else [ring.variables[i] for i in sorted(sol.ignored_variables)],
        "order": str(basis.order) if basis else "lex",
        "basis": basis.to_strings() if basis else None,
    }


def solution_from_json(data: dict, ring: PolyRing) -> FractionalSolution:
    try:
        if data.get("schema") != SCHEMA:
            raise FormatError(f"unsupported solution schema {data.get('schema')!r}")
        order = parse_order(data.get("order", "lex"), ring.variables)
        eps = Fraction(data["epsilon"])
        selected = tuple(int(i) for i in data["selected"])
        ignored = data.get("ignored_variables")
        ignored_idx = None if ignored is None else frozenset(ring.index(v) for v in ignored)
        elements = tuple(parse_polynomial(s, ring) for s in data["basis"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad solution file: {exc}") from None
    basis = GroebnerBasis(elements, order, ring, selected)
    return FractionalSolution(selected, basis, eps, ignored_idx)


# -- commands ---------------------------------------------------------------------------


def cmd_encode(args, report: RunReport) -> int:
    phi = parse_dimacs(_read(args.input, report))
    report.parameters.update(non_mixed=args.non_mixed, field=args.field)
    field_ = parse_field(args.field)
    sys_ = encode_nonmixed(phi, field_) if args.non_mixed else encode_3sat(phi, field_)
    comments = [f"encoded from {Path(args.input).name}: {phi.num_vars} variables, {phi.num_clauses} clauses"]
    _write(args.output, format_system(sys_.ring, sys_.polynomials, comments=comments))
    report.counters["polynomials"] = len(sys_)
    return EXIT_OK


def cmd_groebner(args, report: RunReport) -> int:
    ring, polys = parse_system(_read(args.input, report))
    order = parse_order(args.order, ring.variables)
    report.parameters.update(order=str(order), budget=args.budget, timeout=args.timeout)
    basis = buchberger(polys, order, _budget(args), ring=ring)
    report.counters.update(_basis_counters(basis))
    report.counters["trivial"] = basis.is_trivial()
    _write(args.output, format_system(ring, basis.elements, order, comments=[f"reduced Groebner basis, order {order}"]))
    return EXIT_OK


def cmd_pipeline(args, report: RunReport) -> int:
    phi = parse_dimacs(_read(args.input, report))
    sys_ = encode_3sat(phi)
    m = len(sys_)
    final = args.final_stage == "on"
    report.parameters.update(
        epsilon=args.epsilon, ignored_vars=args.ignored_vars, final_stage=args.final_stage,
        budget=args.budget, timeout=args.timeout,
    )
    if args.ignored_vars is not None:
        ignored = [v - 1 for v in _parse_sat_vars(args.ignored_vars)]
        sol = select_structurally_constrained(sys_, ignored)
        if args.epsilon is not None:
            sol = FractionalSolution(sol.selected, None, Fraction(args.epsilon), sol.ignored_variables)
    else:
        eps = Fraction(args.epsilon if args.epsilon is not None else 1)
        if not 0 < eps <= 1:
            raise CliFailure(EXIT_FORMAT, f"--epsilon must lie in (0, 1], got {eps}")
        keep = -(-eps.numerator * m // eps.denominator)
        sol = FractionalSolution(tuple(range(keep)), None, eps)
    order = parse_order("lex")
    basis = buchberger(
        [sys_.polynomials[i] for i in sol.selected], order, _budget(args),
        ring=sys_.ring, source=sol.selected,
    )
    sol = sol.with_basis(basis)
    report.counters.update(_basis_counters(basis))
    if args.solution_out:
        Path(args.solution_out).write_text(_dump(solution_to_json(sol, sys_.ring)), encoding="utf-8")
    verdict = verify_fractional_solution(sys_.polynomials, sol)
    if not verdict.valid:
        report.counters["violations"] = verdict.violations
        raise CliFailure(EXIT_VERIFY, "; ".join(verdict.violations))
    result = theorem2_pipeline(phi, sol, final_stage=final)
    report.counters.update(satisfied=result.satisfied, num_clauses=m, lower_bound=result.lower_bound)
    out = {
        "schema": SCHEMA,
        "assignment": result.assignment.to_json(),
        "satisfied": result.satisfied,
        "num_clauses": m,
        "lower_bound": result.lower_bound,
        "selected": list(sol.selected),
        "epsilon": str(sol.epsilon),
        "final_stage": args.final_stage,
    }
    _write(args.output, _dump(out))
    return EXIT_OK


def _check_amplified(amp) -> dict:
    m = len(amp.source)
    ring = amp.ring
    full = buchberger(list(amp.source.polynomials), parse_order("grevlex"), ring=ring).is_trivial()
    subsets = mismatched = 0
    for size in range(m, len(amp.polynomials) + 1):
        for S in combinations(range(len(amp.polynomials)), size):
            subsets += 1
            gb = buchberger([amp.polynomials[k] for k in S], parse_order("grevlex"), ring=ring)
            if gb.is_trivial() != full:
                mismatched += 1
    return {"subsets_checked": subsets, "subsets_mismatched": mismatched, "clauses_trivial": full}


def cmd_gadget(args, report: RunReport) -> int:
    kind = args.kind
    report.parameters.update(kind=kind)
    sidecar = None
    if kind == "colorideal":
        g = parse_graph(_read(args.input, report))
        report.parameters.update(k=args.k)
        spec = coloring_ideal(g, args.k)
        text = format_system(spec.ring, spec.polynomials, comments=[f"{args.k}-coloring ideal"])
        report.counters["polynomials"] = len(spec.polynomials)
        _write(args.output, text)
        return EXIT_OK

    sys_ = _load_system(_read(args.input, report), args.field)
    if kind == "vandermonde":
        eps = Fraction(args.epsilon)
        report.parameters.update(epsilon=str(eps))
        points = None
        if args.points:
            points = [Fraction(t) for t in args.points.replace(",", " ").split()]
        amp = vandermonde_amplify(sys_, eps, points)
        text = format_system(sys_.ring, amp.polynomials, comments=[f"Vandermonde amplification, M={len(amp.polynomials)}"])
        sidecar = amp.sidecar()
        report.counters["polynomials"] = len(amp.polynomials)
        if args.check:
            check = _check_amplified(amp)
            sidecar["check"] = check
            report.counters.update(check)
            if check["subsets_mismatched"]:
                _write(args.output, text)
                _write_sidecar(args, sidecar)
                raise CliFailure(EXIT_VERIFY, f"{check['subsets_mismatched']} subsets disagree")
    elif kind == "cpartial":
        report.parameters.update(c=args.c)
        cp = strong_cpartial_construct(sys_, args.c)
        text = format_system(cp.ring, cp.polynomials, comments=[f"Strong c-Partial construction, c={args.c}"])
        sidecar = {
            "schema": SCHEMA,
            "c": args.c,
            "linking_variable": cp.linking_variable,
            "copy_of": list(cp.copy_of),
        }
        report.counters["polynomials"] = len(cp.polynomials)
    elif kind == "structuregraph":
        sg = build_structure_graph(list(sys_.polynomials), sys_.ring)
        text = sg.to_dot()
        report.counters.update(cliques=len(sg.cliques), edges=len(sg.edges))
    else:  # argparse restricts choices
        raise CliFailure(EXIT_FORMAT, f"unknown gadget {kind}")
    _write(args.output, text)
    if sidecar is not None:
        _write_sidecar(args, sidecar)
    return EXIT_OK


def _write_sidecar(args, sidecar):
    path = args.sidecar or (args.output + ".json" if args.output and args.output != "-" else None)
    if path:
        Path(path).write_text(_dump(sidecar), encoding="utf-8")


def cmd_verify(args, report: RunReport) -> int:
    ring, polys = parse_system(_read(args.generators, report))
    try:
        data = json.loads(_read(args.solution, report))
    except json.JSONDecodeError as exc:
        raise CliFailure(EXIT_FORMAT, f"bad JSON in {args.solution}: {exc}") from None
    sol = solution_from_json(data, ring)
    verdict = verify_fractional_solution(polys, sol, check_ideal=args.check_ideal)
    out = {"schema": SCHEMA, "valid": verdict.valid, "violations": verdict.violations}
    report.counters["violations"] = len(verdict.violations)
    _write(args.output, _dump(out))
    return EXIT_OK if verdict.valid else EXIT_VERIFY


def cmd_color(args, report: RunReport) -> int:
    g = parse_graph(_read(args.input, report))
    kind = args.kind
    report.parameters.update(kind=kind, k=args.k, seed=args.seed, epsilon=args.epsilon)
    if kind == "greedy":
        res = greedy_fractional_color(g, args.k, seed=args.seed if args.shuffle else None)
        out = res.to_json(g)
    elif kind == "project":
        if not args.coloring:
            raise CliFailure(EXIT_FORMAT, "project needs --coloring")
        data = json.loads(_read(args.coloring, report))
        try:
            colors = {int(v): int(c) for v, c in data["colors"].items()}
        except (KeyError, ValueError, AttributeError) as exc:
            raise CliFailure(EXIT_FORMAT, f"bad coloring file: {exc}") from None
        if len(colors) != g.num_vertices or not is_proper(g, colors):
            raise CliFailure(EXIT_SEMANTIC, "project needs a total proper coloring")
        res = project_to_three_colors(ColoringResult.build(g, colors), g)
        out = res.to_json(g)
    elif kind == "iterate":
        eps = Fraction(args.epsilon)
        it = iterate_vertex_oracle(g, largest_colorable_subset_oracle(eps), eps)
        out = it.coloring.to_json(g)
        out.update(rounds=it.rounds, remaining_after=list(it.remaining_after))
    elif kind == "decide":
        sets = _parse_sets(args.removed or "")
        order = parse_order(args.order)
        basis = retained_basis(g, args.k, sets, order, _budget(args))
        report.counters.update(_basis_counters(basis))
        verdict = cpartial_color_decide(g, args.k, sets, basis)
        if isinstance(verdict, NotKColorable):
            out = {"schema": SCHEMA, "verdict": "not_k_colorable", "k": args.k}
        else:
            out = verdict.coloring.to_json(g)
            out.update(verdict="proper_coloring", k=args.k, extra_colors=verdict.extra_colors)
    else:
        raise CliFailure(EXIT_FORMAT, f"unknown coloring command {kind}")
    report.counters["cut_edges"] = out.get("cut_edges")
    _write(args.output, _dump(out))
    return EXIT_OK


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="robustgb", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, budget=False):
        sp.add_argument("-o", "--output", help="output path (default stdout)")
        sp.add_argument("--report", help="write a JSON run report here")
        if budget:
            sp.add_argument("--budget", type=int, help="max S-polynomial reductions")
            sp.add_argument("--timeout", type=float, help="max seconds per basis computation")

    sp = sub.add_parser("encode", help="DIMACS 3-CNF -> clause polynomials")
    sp.add_argument("input")
    sp.add_argument("--non-mixed", action="store_true")
    sp.add_argument("--field", default="Q")
    common(sp)
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("groebner", help="reduced Groebner basis of a polynomial file")
    sp.add_argument("input")
    sp.add_argument("--order", default="lex", help="lex | grlex | grevlex, optionally kind:v1,v2,...")
    common(sp, budget=True)
    sp.set_defaults(func=cmd_groebner)

    sp = sub.add_parser("pipeline", help="select, solve and round a 3-CNF formula")
    sp.add_argument("input")
    sp.add_argument("--epsilon", type=Fraction)
    sp.add_argument("--ignored-vars", help="comma separated SAT variables, e.g. 2,5 or y2,y5")
    sp.add_argument("--final-stage", choices=("off", "on"), default="off")
    sp.add_argument("--solution-out", help="also write the fractional solution JSON here")
    common(sp, budget=True)
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("gadget", help="build hardness gadgets")
    sp.add_argument("kind", choices=("vandermonde", "cpartial", "colorideal", "structuregraph"))
    sp.add_argument("input")
    sp.add_argument("--epsilon", type=Fraction, default=Fraction(1))
    sp.add_argument("--points", help="matrix points, comma separated")
    sp.add_argument("--c", type=int, default=1)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--field", default="Q")
    sp.add_argument("--sidecar", help="JSON sidecar path (default OUTPUT.json)")
    sp.add_argument("--check", action="store_true", help="exhaustively check every large subset")
    common(sp)
    sp.set_defaults(func=cmd_gadget)

    sp = sub.add_parser("verify", help="check a fractional solution")
    sp.add_argument("solution")
    sp.add_argument("generators")
    sp.add_argument("--check-ideal", action="store_true", help="also recompute the selection's basis")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("color", help="graph coloring procedures")
    sp.add_argument("kind", choices=("greedy", "project", "iterate", "decide"))
    sp.add_argument("input")
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--shuffle", action="store_true", help="seeded random vertex order for greedy")
    sp.add_argument("--coloring", help="coloring JSON (project)")
    sp.add_argument("--epsilon", type=Fraction, default=Fraction(1, 2))
    sp.add_argument("--removed", help="independent vertex sets, e.g. '0,3;5' (decide)")
    sp.add_argument("--order", default="lex")
    common(sp, budget=True)
    sp.set_defaults(func=cmd_color)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    report = RunReport(command=args.command)
    start = time.perf_counter()
    try:
        code = args.func(args, report)
        if code == EXIT_VERIFY:
            report.outcome = "error"
    except CliFailure as exc:
        code, report.outcome, report.message = exc.code, "error", str(exc)
    except (FormatError, EncodingError, FieldError) as exc:
        code, report.outcome, report.message = EXIT_FORMAT, "error", str(exc)
    except BudgetExceeded as exc:
        code, report.outcome, report.message = EXIT_BUDGET, "budget_exceeded", str(exc)
        report.counters.update(exc.stats.as_dict())
        report.counters.pop("elapsed_seconds", None)
        report.counters["partial_generators"] = len(exc.partial)
    except EmptyVarietyError as exc:
        code, report.outcome, report.message = EXIT_SEMANTIC, "error", f"empty variety: {exc}"
    except (ContractViolation, ContractError, OracleContractError, ValueError) as exc:
        code, report.outcome, report.message = EXIT_SEMANTIC, "error", str(exc)
    report.exit_code = code
    report.seconds = time.perf_counter() - start
    if report.message:
        print(f"robustgb {args.command}: {report.message}", file=sys.stderr)
    if args.report:
        Path(args.report).write_text(_dump(report.to_json()), encoding="utf-8")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
