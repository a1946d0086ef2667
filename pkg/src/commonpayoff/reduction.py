"""From 3-CNF formulas to two-player common-payoff games, and back.

Nature picks a clause and one of its three literal positions uniformly.
Player 1 sees the literal's variable and picks a truth value; player 2 sees
the clause and picks a position. The payoff is 3 when player 2 names nature's
position and player 1's value makes that literal true, else 0. The optimum is
1 exactly when the formula is satisfiable.
"""

from __future__ import annotations

from fractions import Fraction

from .cnf import Assignment, CnfFormula, clause_text
from .errors import AssignmentError, MalformedFormula, PreconditionError
from .game import Game, JointStrategy, Strategy, World, expected_payoff
from .sat import verify_assignment
from .solver import brute_force_optimal

TRUTH_VALUES = ("true", "false")
POSITIONS = ("1", "2", "3")
MATCH_PAYOFF = Fraction(3)


def variable_name(k: int) -> str:
    return f"z{k}"


def clause_name(i: int) -> str:
    return f"C{i}"


def world_name(i: int, j: int) -> str:
    return f"w{i},{j}"


def reduce_3sat(phi: CnfFormula) -> Game:
    n = phi.clause_count
    if n < 1:
        raise MalformedFormula("the reduction needs at least one clause")
    pr = Fraction(1, 3 * n)
    worlds = []
    for i, clause in enumerate(phi.clauses, 1):
        for j, lit in enumerate(clause, 1):
            pay = {}
            for b in TRUTH_VALUES:
                makes_true = (b == "true") == (lit > 0)
                for jj in POSITIONS:
                    pay[(b, jj)] = MATCH_PAYOFF if (int(jj) == j and makes_true) else Fraction(0)
            worlds.append(World(world_name(i, j), pr, (variable_name(abs(lit)), clause_name(i)), pay))
    return Game(
        actions=(TRUTH_VALUES, POSITIONS),
        observations=(
            tuple(variable_name(k) for k in range(1, phi.variable_count + 1)),
            tuple(clause_name(i) for i in range(1, n + 1)),
        ),
        worlds=tuple(worlds),
    )


def clause_labels(phi: CnfFormula) -> dict[str, str]:
    """Readable text for each clause observation, e.g. ``C1 -> (z1 ∨ ¬z2 ∨ z3)``."""
    return {clause_name(i): clause_text(c) for i, c in enumerate(phi.clauses, 1)}


def assignment_to_strategy(phi: CnfFormula, alpha: Assignment) -> JointStrategy:
    """Player 1 plays ``alpha``; player 2 names the first true literal of each clause."""
    if not verify_assignment(phi, alpha):
        raise AssignmentError("assignment does not satisfy the formula")
    p1 = {variable_name(k): "true" if alpha[k] else "false" for k in range(1, phi.variable_count + 1)}
    p2 = {}
    for i, clause in enumerate(phi.clauses, 1):
        j = next(j for j, lit in enumerate(clause, 1) if alpha[abs(lit)] == (lit > 0))
        p2[clause_name(i)] = POSITIONS[j - 1]
    return JointStrategy((Strategy(0, p1), Strategy(1, p2)))


def strategy_to_assignment(phi: CnfFormula, js: JointStrategy, game: Game | None = None) -> Assignment:
    """Read player 1's strategy as a truth assignment, given it earns at least 1."""
    if game is None:
        game = reduce_3sat(phi)
    value = expected_payoff(game, js)
    if value < 1:
        raise PreconditionError(f"joint strategy earns {value}, below 1")
    alpha = {k: js[0].choice[variable_name(k)] == "true" for k in range(1, phi.variable_count + 1)}
    if not verify_assignment(phi, alpha):
        raise RuntimeError("strategy earns 1 but its assignment falsifies a clause")
    return alpha


def max_payoff_cap_check(phi: CnfFormula) -> Fraction:
    value = brute_force_optimal(reduce_3sat(phi)).optimal_value
    if value > 1:
        raise RuntimeError(f"reduced game reaches {value}, above the cap of 1")
    return value


def bound_occurrences(phi: CnfFormula) -> CnfFormula:
    """Equisatisfiable rewrite where every variable lies in at most three clauses.

    A variable in ``k > 3`` clauses gets ``k`` fresh copies, one per clause,
    tied together by the cycle of implications ``copy_t -> copy_{t+1}``, each
    written as the padded clause ``(-copy_t, copy_{t+1}, copy_{t+1})``. Every
    copy then sits in its host clause and two chain clauses. Variables are
    renumbered in order, copies taking consecutive indices.
    """
    occ = phi.occurrences()
    heavy = {v for v, k in occ.items() if k > 3}
    if not heavy:
        return phi
    hosts: dict[int, list[int]] = {v: [] for v in heavy}
    for i, clause in enumerate(phi.clauses):
        for v in sorted({abs(l) for l in clause} & heavy):
            hosts[v].append(i)
    rename: dict[int, int] = {}
    copies: dict[int, list[int]] = {}
    nxt = 1
    for v in range(1, phi.variable_count + 1):
        if v in heavy:
            copies[v] = list(range(nxt, nxt + occ[v]))
            nxt += occ[v]
        else:
            rename[v] = nxt
            nxt += 1
    clauses = []
    for i, clause in enumerate(phi.clauses):
        out = []
        for lit in clause:
            v = abs(lit)
            new = copies[v][hosts[v].index(i)] if v in heavy else rename[v]
            out.append(new if lit > 0 else -new)
        clauses.append(tuple(out))
    widths = list(phi.widths) if phi.widths is not None else [3] * len(clauses)
    for v in range(1, phi.variable_count + 1):
        if v not in heavy:
            continue
        cyc = copies[v]
        for t, c in enumerate(cyc):
            d = cyc[(t + 1) % len(cyc)]
            clauses.append((-c, d, d))
            widths.append(2)
    return CnfFormula(nxt - 1, tuple(clauses), tuple(widths))


def considered_possible(game: Game, player: int) -> dict[str, list[str]]:
    """For each world, the worlds where ``player`` makes the same observation."""
    by_obs: dict[str, list[str]] = {}
    for w in game.worlds:
        by_obs.setdefault(w.observations[player], []).append(w.id)
    return {w.id: by_obs[w.observations[player]] for w in game.worlds}
