"""Best responses, Nash and Pareto checks for pure joint strategies."""

from __future__ import annotations

from fractions import Fraction

from .game import (
    Game,
    JointStrategy,
    Strategy,
    check_joint,
    expected_payoff,
    expected_payoff_vector,
    require_common,
    require_valid,
)
from .solver import branch_and_bound_optimal


def best_response(game: Game, js: JointStrategy, i: int) -> Strategy:
    """Player ``i``'s payoff-maximising strategy with everyone else held fixed.

    Payoffs separate by observation, so each observation is optimised on its
    own over the worlds where player ``i`` makes it. Ties go to the
    lowest-index action; an observation no world produces gets the first
    action. Uses player ``i``'s own payoff component, so general games work.
    """
    require_valid(game)
    check_joint(game, js)
    acts = game.actions[i]
    scores = {o: [Fraction(0)] * len(acts) for o in game.observations[i]}
    for w in game.worlds:
        if w.probability == 0:
            continue
        joint = [s.choice[o] for s, o in zip(js.strategies, w.observations)]
        row = scores[w.observations[i]]
        for k, a in enumerate(acts):
            joint[i] = a
            row[k] += w.probability * game.player_payoff(w, tuple(joint), i)
    choice = {}
    for o, row in scores.items():
        best = max(range(len(acts)), key=lambda k: (row[k], -k))
        choice[o] = acts[best]
    return Strategy(i, choice)


def is_nash(game: Game, js: JointStrategy) -> bool:
    """No single player gains by switching to their best response."""
    require_valid(game)
    current = expected_payoff_vector(game, js)
    for i in range(game.players):
        deviation = js.replace(i, best_response(game, js, i))
        if expected_payoff_vector(game, deviation)[i] > current[i]:
            return False
    return True


def is_pareto_optimal(game: Game, js: JointStrategy) -> bool:
    """With common payoffs, Pareto optimal means attaining the global optimum."""
    require_common(game)
    check_joint(game, js)
    return expected_payoff(game, js) == branch_and_bound_optimal(game).optimal_value
