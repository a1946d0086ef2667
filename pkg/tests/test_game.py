import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from commonpayoff import gamefile
from commonpayoff.errors import DimensionMismatch, InvalidGame, NotCommonPayoff, ValidationError
from commonpayoff.game import (
    Game,
    JointStrategy,
    MixedJointStrategy,
    Strategy,
    World,
    expected_payoff,
    expected_payoff_mixed,
    expected_payoff_vector,
    payoff_bounds,
    pure_profiles,
    pure_strategies,
    validate,
)
from commonpayoff.generators import random_common_payoff_game

from oracles import all_profiles, definitional_mixed, naive_optimum, naive_value

F = Fraction


def one_world(payoffs, actions=("a", "b")):
    return Game((actions,), (("o",),), (World("w", F(1), ("o",), {(a,): F(v) for a, v in zip(actions, payoffs)}),))


def test_validate_minimal_game():
    assert validate(one_world([5], actions=("a",))) == []


def test_validate_probability_sum():
    g = Game(
        (("a",),), (("o",),),
        (World("w1", F(1, 2), ("o",), {("a",): F(0)}), World("w2", F(1, 3), ("o",), {("a",): F(0)})),
    )
    assert validate(g) == ["probabilities sum to 5/6 ≠ 1"]


def test_validate_worked_example(worked_game):
    assert validate(worked_game) == []
    assert all(w.probability == F(1, 6) for w in worked_game.worlds)


@pytest.mark.parametrize(
    "game, fragment",
    [
        (Game((("a", "a"),), (("o",),), (World("w", F(1), ("o",), {("a",): F(0)}),)), "duplicate actions"),
        (Game((("a",),), ((),), (World("w", F(1), ("o",), {("a",): F(0)}),)), "empty observation set"),
        (Game((("a",),), (("o",),), (World("w", F(1), ("x",), {("a",): F(0)}),)), "not in its observation set"),
        (Game((("a", "b"),), (("o",),), (World("w", F(1), ("o",), {("a",): F(0)}),)), "1 missing"),
        (Game((("a",),), (("o",),), (World("w", F(3, 2), ("o",), {("a",): F(0)}),
                                      World("v", F(-1, 2), ("o",), {("a",): F(0)}))), "negative probability"),
        (Game((("a",),), (("o",),), (World("w", F(1), ("o", "p"), {("a",): F(0)}),)), "2 observations for 1"),
        (Game((("a",),), (("o",),), (World("w", 1.0, ("o",), {("a",): F(0)}),)), "not rational"),
        (Game((("a",),), (("o",),), (World("w", F(1), ("o",), {("a",): 0.5}),)), "not rational"),
    ],
)
def test_validate_reports(game, fragment):
    violations = validate(game)
    assert any(fragment in v for v in violations), violations
    with pytest.raises(InvalidGame):
        expected_payoff(game, JointStrategy.from_choices([{"o": "a"}]))


def test_expected_payoff_single_world():
    assert expected_payoff(one_world([5], actions=("a",)), JointStrategy.from_choices([{"o": "a"}])) == 5


def test_expected_payoff_worked_satisfying(worked_game):
    js = JointStrategy.from_choices([
        {"z1": "true", "z2": "false", "z3": "false", "z4": "true"},
        {"C1": "1", "C2": "2"},
    ])
    # only w1,1 and w2,2 pay 3
    assert expected_payoff(worked_game, js) == F(1, 6) * 3 + F(1, 6) * 3 == 1


def test_expected_payoff_worked_all_false(worked_game):
    js = JointStrategy.from_choices([
        {"z1": "false", "z2": "false", "z3": "false", "z4": "false"},
        {"C1": "3", "C2": "3"},
    ])
    # w1,3 holds z3 (false makes it false); w2,3 holds ¬z1, made true
    hand = F(1, 6) * 0 + F(1, 6) * 3
    assert expected_payoff(worked_game, js) == hand == naive_value(worked_game, js.choices()) == F(1, 2)


@pytest.mark.parametrize(
    "choices",
    [
        [{"z1": "true", "z2": "true", "z3": "true"}, {"C1": "1", "C2": "1"}],
        [{"z1": "true", "z2": "true", "z3": "true", "z4": "true", "z9": "true"}, {"C1": "1", "C2": "1"}],
        [{"z1": "maybe", "z2": "true", "z3": "true", "z4": "true"}, {"C1": "1", "C2": "1"}],
        [{"z1": "true", "z2": "true", "z3": "true", "z4": "true"}],
    ],
)
def test_dimension_mismatch(worked_game, choices):
    with pytest.raises(DimensionMismatch):
        expected_payoff(worked_game, JointStrategy.from_choices(choices))


def test_wrong_player_slot(worked_game):
    p1 = Strategy(0, {"z1": "true", "z2": "true", "z3": "true", "z4": "true"})
    p2 = Strategy(0, {"C1": "1", "C2": "1"})
    with pytest.raises(DimensionMismatch):
        expected_payoff(worked_game, JointStrategy((p1, p2)))


def test_general_payoffs():
    g = Game((("a", "b"), ("a", "b")), (("o",), ("o",)), (
        World("w", F(1), ("o", "o"), {("a", "a"): (F(0), F(1)), ("a", "b"): (F(1), F(0)),
                                       ("b", "a"): (F(1), F(0)), ("b", "b"): (F(0), F(1))}),
    ))
    assert validate(g) == []
    assert not g.is_common_payoff
    js = JointStrategy.from_choices([{"o": "a"}, {"o": "b"}])
    assert expected_payoff_vector(g, js) == (1, 0)
    with pytest.raises(NotCommonPayoff):
        expected_payoff(g, js)


def test_vector_with_equal_components_is_common():
    g = Game((("a",),), (("o",),), (World("w", F(1), ("o",), {("a",): (F(2),)}),))
    assert g.is_common_payoff
    assert expected_payoff(g, JointStrategy.from_choices([{"o": "a"}])) == 2


def test_mixed_point_mass(worked_game):
    js = JointStrategy.from_choices([
        {"z1": "false", "z2": "false", "z3": "false", "z4": "false"}, {"C1": "3", "C2": "3"},
    ])
    assert expected_payoff_mixed(worked_game, MixedJointStrategy.point_mass(js)) == F(1, 2)


def test_mixed_uniform_pair(worked_game):
    p1 = Strategy(0, {"z1": "true", "z2": "false", "z3": "false", "z4": "true"})
    good, bad = Strategy(1, {"C1": "1", "C2": "2"}), Strategy(1, {"C1": "3", "C2": "3"})
    a = expected_payoff(worked_game, JointStrategy((p1, good)))
    b = expected_payoff(worked_game, JointStrategy((p1, bad)))
    mix = MixedJointStrategy((((p1, F(1)),), ((good, F(1, 2)), (bad, F(1, 2)))))
    assert expected_payoff_mixed(worked_game, mix) == (a + b) / 2


def test_mixed_uniform_over_padded_game(unsat_game):
    mix = MixedJointStrategy(tuple(
        tuple((s, F(1, len(list(pure_strategies(unsat_game, i))))) for s in pure_strategies(unsat_game, i))
        for i in range(2)
    ))
    values = [naive_value(unsat_game, p) for p in all_profiles(unsat_game)]
    assert len(values) == 18
    average = sum(values) / len(values)
    assert average == F(1, 2)  # frozen from the enumeration above
    assert expected_payoff_mixed(unsat_game, mix) == average
    assert expected_payoff_mixed(unsat_game, mix) <= naive_optimum(unsat_game)[0]


def test_mixed_rejects_bad_weights(worked_game):
    p1 = Strategy(0, {"z1": "true", "z2": "false", "z3": "false", "z4": "true"})
    p2 = Strategy(1, {"C1": "1", "C2": "2"})
    with pytest.raises(ValidationError):
        expected_payoff_mixed(worked_game, MixedJointStrategy((((p1, F(1, 2)),), ((p2, F(1)),))))
    with pytest.raises(ValidationError):
        expected_payoff_mixed(worked_game, MixedJointStrategy((((p1, F(3, 2)), (p1, F(-1, 2))), ((p2, F(1)),))))


def test_pure_strategy_order():
    g = Game((("x", "y"),), (("o1", "o2"),), (World("w", F(1), ("o1",), {("x",): F(0), ("y",): F(1)}),))
    order = [tuple(s.choice[o] for o in ("o1", "o2")) for s in pure_strategies(g, 0)]
    assert order == [("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]


def _small_game(seed):
    return random_common_payoff_game(random.Random(seed), worlds=(1, 4), max_profiles=300)


def _random_mixture(rng, game):
    dists = []
    for i in range(game.players):
        pool = list(pure_strategies(game, i))
        support = rng.sample(pool, min(len(pool), rng.randint(1, 3)))
        weights = [rng.randint(1, 5) for _ in support]
        dists.append(tuple((s, F(w, sum(weights))) for s, w in zip(support, weights)))
    return MixedJointStrategy(tuple(dists))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_payoff_is_weighted_average(seed):
    game = _small_game(seed)
    lo, hi = payoff_bounds(game)
    for js in pure_profiles(game):
        v = expected_payoff(game, js)
        assert isinstance(v, Fraction)
        assert lo <= v <= hi
        assert v == naive_value(game, js.choices())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_mixed_matches_definition_and_convexity(seed):
    game = _small_game(seed)
    rng = random.Random(seed)
    best = naive_optimum(game)[0]
    for _ in range(5):
        mix = _random_mixture(rng, game)
        value = expected_payoff_mixed(game, mix)
        assert value == definitional_mixed(game, mix)
        assert value <= best


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_exact_after_reload(seed):
    game = _small_game(seed)
    again = gamefile.loads(gamefile.dumps(game))
    for js in pure_profiles(game):
        assert expected_payoff(game, js) == expected_payoff(game, js) == expected_payoff(again, js)
        assert expected_payoff_mixed(game, MixedJointStrategy.point_mass(js)) == expected_payoff(game, js)
