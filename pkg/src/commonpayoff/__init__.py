"""Common-payoff games with one move by nature and one move per player."""

from .cnf import CnfFormula, random_3cnf
from .equilibrium import best_response, is_nash, is_pareto_optimal
from .game import (
    Game,
    JointStrategy,
    MixedJointStrategy,
    Strategy,
    World,
    expected_payoff,
    expected_payoff_mixed,
    expected_payoff_vector,
    validate,
)
from .reduction import (
    assignment_to_strategy,
    bound_occurrences,
    max_payoff_cap_check,
    reduce_3sat,
    strategy_to_assignment,
)
from .sat import dpll_solve, parse_dimacs, to_dimacs, verify_assignment
from .solver import (
    NormalForm,
    SolveResult,
    branch_and_bound_optimal,
    brute_force_optimal,
    perfect_info_solve,
    to_normal_form,
    util_decide,
)

__all__ = [
    "CnfFormula", "Game", "JointStrategy", "MixedJointStrategy", "NormalForm", "SolveResult",
    "Strategy", "World", "assignment_to_strategy", "best_response", "bound_occurrences",
    "branch_and_bound_optimal", "brute_force_optimal", "dpll_solve", "expected_payoff",
    "expected_payoff_mixed", "expected_payoff_vector", "is_nash", "is_pareto_optimal",
    "max_payoff_cap_check", "parse_dimacs", "perfect_info_solve", "random_3cnf", "reduce_3sat",
    "strategy_to_assignment", "to_dimacs", "to_normal_form", "util_decide", "validate",
    "verify_assignment",
]
