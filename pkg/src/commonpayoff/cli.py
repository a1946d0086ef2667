"""Command-line entry point.

Exit codes: 0 success, 2 I/O or parse error, 3 validation or size-cap error,
4 corpus disagreement.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import gamefile
from .cnf import CnfFormula, random_3cnf
from .equilibrium import is_nash, is_pareto_optimal
from .errors import ParseError, ValidationError
from .game import expected_payoff, expected_payoff_vector
from .rational import format_decimal, format_rational, parse_rational
from .reduction import bound_occurrences, reduce_3sat, strategy_to_assignment
from .sat import dpll_solve, parse_dimacs, to_dimacs
from .solver import (
    DEFAULT_NORMAL_FORM_CAP,
    DEFAULT_PROFILE_CAP,
    branch_and_bound_optimal,
    brute_force_optimal,
    perfect_info_solve,
    to_normal_form,
)

EXIT_OK = 0
EXIT_IO = 2
EXIT_INVALID = 3
EXIT_DISAGREEMENT = 4


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_cnf(path: str) -> CnfFormula:
    return parse_dimacs(Path(path).read_bytes())


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _fmt(x: Fraction, decimal: bool = False) -> str:
    s = format_rational(x, always_fraction=True)
    return f"{s} ({format_decimal(x)})" if decimal else s


def cmd_generate(args) -> int:
    rng = random.Random(args.seed)
    phi = random_3cnf(rng, args.clauses, args.variables)
    _write(args.output, to_dimacs(phi))
    return EXIT_OK


def cmd_reduce(args) -> int:
    phi = _read_cnf(args.cnf)
    game = reduce_3sat(phi)
    gamefile.save_game(game, args.output)
    print(f"worlds {len(game.worlds)}, |O1| {len(game.observations[0])}, |O2| {len(game.observations[1])}")
    return EXIT_OK


_SOLVERS = {
    "brute": lambda g, a: brute_force_optimal(g, cap=a.cap, workers=a.workers),
    "bnb": lambda g, a: branch_and_bound_optimal(g),
    "perfect": lambda g, a: perfect_info_solve(g),
}


def cmd_solve(args) -> int:
    game = gamefile.load_game(args.game)
    result = _SOLVERS[args.solver](game, args)
    yes = result.optimal_value >= args.threshold
    if args.json:
        doc = {
            "optimal": format_rational(result.optimal_value, always_fraction=True),
            "threshold": format_rational(args.threshold, always_fraction=True),
            "util": yes,
            "solver": args.solver,
            "profiles_examined": result.profiles_examined,
            "nodes_pruned": result.nodes_pruned,
            **gamefile.joint_strategy_to_dict(result.witness),
        }
        print(json.dumps(doc, indent=1))
        return EXIT_OK
    print(f"optimal {_fmt(result.optimal_value, args.decimal)}, UTIL: {'yes' if yes else 'no'}")
    print(f"threshold {_fmt(args.threshold)}")
    print(f"solver {args.solver}: {result.profiles_examined} profiles examined, {result.nodes_pruned} nodes pruned")
    for i, s in enumerate(result.witness.strategies, 1):
        print(f"player {i} strategy:")
        for o in game.observations[i - 1]:
            print(f"  {o} -> {s.choice[o]}")
    return EXIT_OK


def _check_instance(phi: CnfFormula) -> dict:
    verdict = dpll_solve(phi)
    game = reduce_3sat(phi)
    result = brute_force_optimal(game)
    agree = verdict.satisfiable == (result.optimal_value == 1)
    if agree and verdict.satisfiable:
        # the optimal witness must also decode into a satisfying assignment
        strategy_to_assignment(phi, result.witness, game)
    return {
        "variables": phi.variable_count,
        "clauses": [list(c) for c in phi.original_clauses()],
        "dpll": verdict.outcome,
        "optimal": format_rational(result.optimal_value, always_fraction=True),
        "agree": agree,
    }


def build_corpus(seed: int, count: int, clauses: tuple[int, int], variables: tuple[int, int],
                 plant_unsat: bool = False, widths: tuple[int, int] = (3, 3)) -> list[CnfFormula]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(*clauses)
        m = rng.randint(*variables)
        out.append(random_3cnf(rng, n, m, widths))
    if plant_unsat:
        out.append(CnfFormula.from_clauses([[1], [-1]]))
    return out


def run_corpus(formulas: list[CnfFormula], workers: int = 1) -> list[dict]:
    if workers <= 1:
        return [_check_instance(phi) for phi in formulas]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_check_instance, formulas, chunksize=8))


def cmd_corpus(args) -> int:
    if not 1 <= args.min_width <= args.max_width <= 3:
        raise ValidationError("clause widths must satisfy 1 <= --min-width <= --max-width <= 3")
    if args.min_vars < args.max_width:
        raise ValidationError("--min-vars must be at least --max-width for distinct-variable clauses")
    formulas = build_corpus(args.seed, args.count, (args.min_clauses, args.max_clauses),
                            (args.min_vars, args.max_vars), args.plant_unsat,
                            (args.min_width, args.max_width))
    rows = run_corpus(formulas, args.workers)
    agree = sum(r["agree"] for r in rows)
    sat = sum(r["dpll"] == "SAT" for r in rows)
    if args.report:
        _write(args.report, "".join(json.dumps(r) + "\n" for r in rows))
    print(f"corpus seed {args.seed}: agreement {agree}/{len(rows)} (SAT {sat}, UNSAT {len(rows) - sat})")
    for k, r in enumerate(rows):
        if not r["agree"]:
            print(f"disagreement at instance {k}: dpll {r['dpll']}, optimal {r['optimal']}", file=sys.stderr)
    return EXIT_OK if agree == len(rows) else EXIT_DISAGREEMENT


def cmd_export_nf(args) -> int:
    game = gamefile.load_game(args.game)
    nf = to_normal_form(game, cap=args.cap)
    if args.format == "csv":
        text = nf.to_csv()
    else:
        text = json.dumps(nf.to_dict(), indent=1, ensure_ascii=False) + "\n"
    _write(args.output, text)
    dims = " x ".join(str(k) for k in nf.strategy_counts)
    print(f"normal form {dims} ({len(nf.payoffs)} entries), maximum {_fmt(nf.max())}",
          file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_bound_occurrences(args) -> int:
    phi = _read_cnf(args.cnf)
    out = bound_occurrences(phi)
    _write(args.output, to_dimacs(out))
    return EXIT_OK


def cmd_check_equilibrium(args) -> int:
    game = gamefile.load_game(args.game)
    try:
        doc = json.loads(Path(args.strategy).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    js = gamefile.joint_strategy_from_dict(doc)
    if game.is_common_payoff:
        print(f"expected payoff {_fmt(expected_payoff(game, js))}")
    else:
        print("expected payoffs " + ", ".join(_fmt(v) for v in expected_payoff_vector(game, js)))
    print(f"nash: {'yes' if is_nash(game, js) else 'no'}")
    if game.is_common_payoff:
        print(f"pareto optimal: {'yes' if is_pareto_optimal(game, js) else 'no'}")
    return EXIT_OK


def cmd_sat(args) -> int:
    verdict = dpll_solve(_read_cnf(args.cnf))
    print(json.dumps(verdict.to_dict()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commonpayoff", description="Common-payoff games of imperfect information and the 3SAT reduction.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random 3-CNF in DIMACS format")
    p.add_argument("--clauses", type=int, default=5)
    p.add_argument("--variables", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reduce", help="map a DIMACS 3-CNF to a game file")
    p.add_argument("cnf")
    p.add_argument("output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="optimal value, witness and UTIL verdict for a game file")
    p.add_argument("game")
    p.add_argument("--solver", choices=sorted(_SOLVERS), default="brute")
    p.add_argument("--threshold", type=_rational_arg, default=Fraction(1), metavar="P/Q")
    p.add_argument("--cap", type=int, default=DEFAULT_PROFILE_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--decimal", action="store_true", help="also print an approximate decimal value")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("corpus", help="check SAT verdicts against reduced-game optima on random formulas")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--min-clauses", type=int, default=3)
    p.add_argument("--max-clauses", type=int, default=6)
    p.add_argument("--min-vars", type=int, default=3)
    p.add_argument("--max-vars", type=int, default=8)
    p.add_argument("--min-width", type=int, default=3, help="narrowest clause before padding")
    p.add_argument("--max-width", type=int, default=3)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--plant-unsat", action="store_true", help="append the padded formula (x)(-x)")
    p.add_argument("--report", help="write one JSON line per instance here")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("export-nf", help="write the normal-form payoff matrix of a game")
    p.add_argument("game")
    p.add_argument("output", nargs="?")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--cap", type=int, default=DEFAULT_NORMAL_FORM_CAP)
    p.set_defaults(func=cmd_export_nf)

    p = sub.add_parser("bound-occurrences", help="rewrite a 3-CNF so each variable is in at most three clauses")
    p.add_argument("cnf")
    p.add_argument("output", nargs="?")
    p.set_defaults(func=cmd_bound_occurrences)

    p = sub.add_parser("check-equilibrium", help="Nash and Pareto checks for a joint strategy")
    p.add_argument("game")
    p.add_argument("strategy", help='JSON file {"strategies": [{observation: action}, ...]}')
    p.set_defaults(func=cmd_check_equilibrium)

    p = sub.add_parser("sat", help="run the DPLL solver and print the verdict as JSON")
    p.add_argument("cnf")
    p.set_defaults(func=cmd_sat)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
