"""Seeded generators for test corpora and demonstration games."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

from .game import Game, World


def _distribution(rng: random.Random, k: int, allow_zero: bool) -> list[Fraction]:
    weights = [rng.randint(0 if allow_zero else 1, 6) for _ in range(k)]
    if sum(weights) == 0:
        weights[rng.randrange(k)] = 1
    total = sum(weights)
    return [Fraction(w, total) for w in weights]


def _payoff(rng: random.Random, lo: int, hi: int) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice((1, 1, 1, 2, 3)))


def random_common_payoff_game(
    rng: random.Random,
    players: tuple[int, int] = (1, 3),
    actions: tuple[int, int] = (1, 3),
    observations: tuple[int, int] = (1, 3),
    worlds: tuple[int, int] = (1, 5),
    payoffs: tuple[int, int] = (-4, 9),
    max_profiles: int = 10**5,
    allow_zero_probability: bool = True,
) -> Game:
    """Random valid common-payoff game with at most ``max_profiles`` pure profiles."""
    while True:
        n = rng.randint(*players)
        acts = [rng.randint(*actions) for _ in range(n)]
        obs = [rng.randint(*observations) for _ in range(n)]
        if math.prod(a ** o for a, o in zip(acts, obs)) <= max_profiles:
            break
    action_sets = [tuple(f"a{k}" for k in range(a)) for a in acts]
    obs_sets = [tuple(f"o{i + 1}.{k}" for k in range(o)) for i, o in enumerate(obs)]
    k = rng.randint(*worlds)
    probs = _distribution(rng, k, allow_zero_probability)
    out = []
    for w in range(k):
        seen = tuple(rng.choice(obs_sets[i]) for i in range(n))
        pay = {ja: _payoff(rng, *payoffs) for ja in itertools.product(*action_sets)}
        out.append(World(f"w{w}", probs[w], seen, pay))
    return Game(tuple(action_sets), tuple(obs_sets), tuple(out))


def random_perfect_information_game(
    rng: random.Random,
    players: tuple[int, int] = (1, 3),
    actions: tuple[int, int] = (1, 3),
    worlds: tuple[int, int] = (1, 4),
    payoffs: tuple[int, int] = (-4, 9),
    max_profiles: int = 10**5,
) -> Game:
    """Every player observes a distinct signal in every world."""
    while True:
        n = rng.randint(*players)
        acts = [rng.randint(*actions) for _ in range(n)]
        k = rng.randint(*worlds)
        if math.prod(a ** k for a in acts) <= max_profiles:
            break
    action_sets = [tuple(f"a{j}" for j in range(a)) for a in acts]
    obs_sets = [tuple(f"o{i + 1}.{j}" for j in range(k)) for i in range(n)]
    perms = [rng.sample(range(k), k) for _ in range(n)]
    probs = _distribution(rng, k, allow_zero=False)
    out = []
    for w in range(k):
        seen = tuple(obs_sets[i][perms[i][w]] for i in range(n))
        pay = {ja: _payoff(rng, *payoffs) for ja in itertools.product(*action_sets)}
        out.append(World(f"w{w}", probs[w], seen, pay))
    return Game(tuple(action_sets), tuple(obs_sets), tuple(out))


def quadratic_family(n: int) -> Game:
    """Two players, ``n*n`` worlds, ``n`` observations and ``n`` actions each.

    Nature draws a pair ``(i, j)``; player 1 sees ``i``, player 2 sees ``j``,
    and they score 1 when each names the other's signal. The description is
    quadratic in ``n`` but each player has ``n**n`` strategies.
    """
    acts = tuple(str(k) for k in range(1, n + 1))
    o1 = tuple(f"r{k}" for k in acts)
    o2 = tuple(f"c{k}" for k in acts)
    pr = Fraction(1, n * n)
    worlds = []
    for i in range(n):
        for j in range(n):
            pay = {(a, b): Fraction(int(a == acts[j] and b == acts[i])) for a in acts for b in acts}
            worlds.append(World(f"w{i + 1},{j + 1}", pr, (o1[i], o2[j]), pay))
    return Game((acts, acts), (o1, o2), tuple(worlds))


def binary_observation_game(k: int) -> Game:
    """Player 1 has ``k`` observations and two actions; player 2 is a dummy."""
    pr = Fraction(1, k)
    obs = tuple(f"s{t}" for t in range(1, k + 1))
    worlds = [
        World(f"w{t}", pr, (o, "-"), {("0", "-"): Fraction(0), ("1", "-"): Fraction(t % 2)})
        for t, o in enumerate(obs, 1)
    ]
    return Game((("0", "1"), ("-",)), (obs, ("-",)), tuple(worlds))
