"""Acceptance criteria, one test each.

Every test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.  Run ``pytest tests/test_acceptance.py -v``.
"""

import json
import random
import time
from fractions import Fraction

import pytest

from commonpayoff import gamefile
from commonpayoff.cli import build_corpus, main, run_corpus
from commonpayoff.cnf import random_3cnf
from commonpayoff.equilibrium import is_nash, is_pareto_optimal
from commonpayoff.game import MixedJointStrategy, expected_payoff, expected_payoff_mixed, joint_from_indices, pure_strategies
from commonpayoff.generators import binary_observation_game, random_common_payoff_game, random_perfect_information_game
from commonpayoff.reduction import bound_occurrences, reduce_3sat
from commonpayoff.sat import dpll_solve
from commonpayoff.solver import branch_and_bound_optimal, brute_force_optimal, perfect_info_solve

from conftest import WORKED_DIMACS
from oracles import naive_optimum, naive_value, truth_table_sat

F = Fraction
CORPUS_SEED = 42
UNSAT_SENTINEL = F(1, 2)  # frozen after the 18-profile enumeration in the AC4 test


def corpus():
    return build_corpus(CORPUS_SEED, 200, (3, 6), (3, 8))


@pytest.mark.criterion("AC1 worked example reduced bit-exactly, < 1 s")
def test_ac1_worked_example(tmp_path, capsys):
    src = tmp_path / "phi.cnf"
    src.write_text(WORKED_DIMACS)
    out = tmp_path / "game.json"
    start = time.perf_counter()
    assert main(["reduce", str(src), str(out)]) == 0
    elapsed = time.perf_counter() - start
    game = gamefile.load_game(out)

    assert [w.id for w in game.worlds] == ["w1,1", "w1,2", "w1,3", "w2,1", "w2,2", "w2,3"]
    assert all(w.probability == F(1, 6) for w in game.worlds)
    obs = {w.id: w.observations for w in game.worlds}
    assert obs == {
        "w1,1": ("z1", "C1"), "w1,2": ("z2", "C1"), "w1,3": ("z3", "C1"),
        "w2,1": ("z2", "C2"), "w2,2": ("z4", "C2"), "w2,3": ("z1", "C2"),
    }
    # (truth value, position) that pays 3; every other cell pays 0
    paying = {
        "w1,1": ("true", "1"), "w1,2": ("false", "2"), "w1,3": ("true", "3"),
        "w2,1": ("true", "1"), "w2,2": ("true", "2"), "w2,3": ("false", "3"),
    }
    for w in game.worlds:
        for joint, value in w.payoffs.items():
            assert value == (3 if joint == paying[w.id] else 0), (w.id, joint)
        assert len(w.payoffs) == 6
    by_id = {w.id: w for w in game.worlds}
    assert by_id["w1,2"].payoffs[("false", "2")] == 3
    assert by_id["w2,3"].payoffs[("false", "3")] == 3
    assert elapsed < 1.0
    print(f"AC1 reduce took {elapsed:.3f} s")


@pytest.mark.criterion("AC2 DPLL verdict equals (optimum == 1) on 200+ formulas, < 60 s")
def test_ac2_equivalence():
    start = time.perf_counter()
    rows = run_corpus(corpus())
    elapsed = time.perf_counter() - start
    assert len(rows) >= 200
    assert all(r["agree"] for r in rows), [k for k, r in enumerate(rows) if not r["agree"]]
    assert elapsed < 60
    sat = sum(r["dpll"] == "SAT" for r in rows)
    print(f"AC2 main corpus: {len(rows)} agree (SAT {sat}), {elapsed:.1f} s")

    # the default corpus is almost surely all SAT; a narrow-clause corpus and the
    # planted sentinel exercise the UNSAT side of the equivalence too
    extra = run_corpus(build_corpus(7, 200, (4, 8), (3, 4), plant_unsat=True, widths=(1, 3)))
    assert all(r["agree"] for r in extra)
    unsat = sum(r["dpll"] == "UNSAT" for r in extra)
    assert unsat > 0
    print(f"AC2 supplementary corpus: {len(extra)} agree (UNSAT {unsat})")


@pytest.mark.criterion("AC3 every sampled pure profile of every reduced corpus game pays <= 1")
def test_ac3_payoff_cap():
    rng = random.Random(3)
    formulas = corpus()
    for phi in formulas:
        game = reduce_3sat(phi)
        sizes = [(len(a), len(o)) for a, o in zip(game.actions, game.observations)]
        for _ in range(1000):
            idx = [[rng.randrange(k) for _ in range(m)] for k, m in sizes]
            assert expected_payoff(game, joint_from_indices(game, idx)) <= 1
    print(f"AC3 {len(formulas)} instances x 1000 profiles")


@pytest.mark.criterion("AC4 unsatisfiable sentinel has optimum exactly 1/2")
def test_ac4_unsat_sentinel(unsat_game):
    best, _ = naive_optimum(unsat_game)
    assert unsat_game.profile_count() == 18
    assert best == UNSAT_SENTINEL
    assert brute_force_optimal(unsat_game).optimal_value == UNSAT_SENTINEL
    assert branch_and_bound_optimal(unsat_game).optimal_value == UNSAT_SENTINEL


def _cross_game(seed):
    rng = random.Random(seed)
    if seed % 4 == 0:
        return random_perfect_information_game(rng, max_profiles=10**5)
    return random_common_payoff_game(rng, players=(2, 3), actions=(2, 4), observations=(1, 4), worlds=(2, 8))


@pytest.mark.criterion("AC5 brute force, branch and bound and perfect-info solver agree on 100+ games")
def test_ac5_cross_oracle():
    perfect = 0
    for seed in range(120):
        game = _cross_game(seed)
        assert game.profile_count() <= 10**5
        a = brute_force_optimal(game).optimal_value
        b = branch_and_bound_optimal(game).optimal_value
        assert a == b, seed
        if seed % 4 == 0:
            perfect += 1
            assert perfect_info_solve(game).optimal_value == a, seed
        if game.profile_count() <= 500:
            assert naive_optimum(game)[0] == a, seed
    print(f"AC5 120 games, {perfect} perfect-information")


def _mixture(rng, pools):
    dists = []
    for pool in pools:
        support = rng.sample(pool, min(len(pool), rng.randint(1, 4)))
        weights = [rng.randint(1, 9) for _ in support]
        dists.append(tuple((s, F(w, sum(weights))) for s, w in zip(support, weights)))
    return MixedJointStrategy(tuple(dists))


@pytest.mark.criterion("AC6 optimal witness is Nash and Pareto; 1000 mixed profiles never beat it")
def test_ac6_equilibrium():
    for seed in range(100):
        rng = random.Random(seed)
        game = random_common_payoff_game(rng, max_profiles=2000)
        result = brute_force_optimal(game)
        assert is_nash(game, result.witness)
        assert is_pareto_optimal(game, result.witness)
        pools = [list(pure_strategies(game, i)) for i in range(game.players)]
        for _ in range(1000):
            assert expected_payoff_mixed(game, _mixture(rng, pools)) <= result.optimal_value
    print("AC6 100 games x 1000 mixed profiles")


def _heavy(rng):
    while True:
        phi = random_3cnf(rng, rng.randint(5, 14), rng.randint(3, 7), (1, 3))
        if max(phi.occurrences().values()) >= 4:
            return phi


@pytest.mark.criterion("AC7 bounded formulas have <= 3 occurrences per variable and keep their DPLL verdict")
def test_ac7_bound_occurrences():
    rng = random.Random(17)
    verdicts = []
    for _ in range(150):
        phi = _heavy(rng)
        out = bound_occurrences(phi)
        assert max(out.occurrences().values()) <= 3
        before = dpll_solve(phi).satisfiable
        assert dpll_solve(out).satisfiable == before
        assert before == (next(truth_table_sat(phi), None) is not None)
        verdicts.append(before)
    assert not all(verdicts) and any(verdicts)
    print(f"AC7 150 formulas (SAT {sum(verdicts)})")


@pytest.mark.criterion("AC8 worked example normal form is 16x9 with maximum 1; 2^20 game refused")
def test_ac8_normal_form(tmp_path, capsys, worked_game):
    path = tmp_path / "worked.json"
    gamefile.save_game(worked_game, path)
    out = tmp_path / "nf.json"
    assert main(["export-nf", str(path), str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["dims"] == [16, 9]
    entries = [F(e) for e in doc["entries"]]
    assert len(entries) == 144 and max(entries) == 1
    choices = [{f"z{k}": "true" for k in range(1, 5)}, {"C1": "1", "C2": "1"}]
    assert entries[0] == naive_value(worked_game, choices)
    capsys.readouterr()

    big = tmp_path / "big.json"
    gamefile.save_game(binary_observation_game(20), big)
    assert main(["export-nf", str(big), str(tmp_path / "never.json")]) == 3
    assert "2^20" in capsys.readouterr().err
    assert not (tmp_path / "never.json").exists()
