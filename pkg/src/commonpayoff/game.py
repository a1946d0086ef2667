"""Finite games where nature moves once and then every player moves once.

A :class:`Game` is the tuple of worlds, per-player action and observation
sets, a rational distribution over worlds, the observation function and a
payoff table per world. Payoff entries are either a single
:class:`~fractions.Fraction` (common payoff) or a tuple with one entry per
player.

Everything here is immutable after construction and evaluated exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping, Sequence, Tuple, Union

from .errors import DimensionMismatch, InvalidGame, NotCommonPayoff, ValidationError
from .rational import format_rational

Payoff = Union[Fraction, Tuple[Fraction, ...]]
JointAction = Tuple[str, ...]


@dataclass(frozen=True)
class World:
    id: str
    probability: Fraction
    observations: tuple[str, ...]
    payoffs: Mapping[JointAction, Payoff]

    def __post_init__(self):
        object.__setattr__(self, "observations", tuple(self.observations))
        if isinstance(self.probability, int) and not isinstance(self.probability, bool):
            object.__setattr__(self, "probability", Fraction(self.probability))
        pay = {}
        for key, value in dict(self.payoffs).items():
            if isinstance(value, int) and not isinstance(value, bool):
                value = Fraction(value)
            elif isinstance(value, (list, tuple)):
                value = tuple(Fraction(v) if isinstance(v, int) and not isinstance(v, bool) else v for v in value)
            pay[tuple(key)] = value
        object.__setattr__(self, "payoffs", pay)


@dataclass(frozen=True)
class Strategy:
    """A total map from one player's observations to that player's actions."""

    player: int
    choice: Mapping[str, str]

    def __post_init__(self):
        object.__setattr__(self, "choice", dict(self.choice))

    def __call__(self, observation: str) -> str:
        return self.choice[observation]


@dataclass(frozen=True)
class JointStrategy:
    strategies: tuple[Strategy, ...]

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))

    @classmethod
    def from_choices(cls, choices: Sequence[Mapping[str, str]]) -> "JointStrategy":
        return cls(tuple(Strategy(i, c) for i, c in enumerate(choices)))

    def __len__(self):
        return len(self.strategies)

    def __getitem__(self, i: int) -> Strategy:
        return self.strategies[i]

    def replace(self, i: int, strategy: Strategy) -> "JointStrategy":
        s = list(self.strategies)
        s[i] = strategy
        return JointStrategy(tuple(s))

    def choices(self) -> list[dict[str, str]]:
        return [dict(s.choice) for s in self.strategies]


@dataclass(frozen=True)
class MixedJointStrategy:
    """Independent per-player distributions over pure strategies.

    ``per_player[i]`` is a sequence of ``(strategy, weight)`` pairs.
    """

    per_player: tuple[tuple[tuple[Strategy, Fraction], ...], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "per_player", tuple(tuple((s, Fraction(w)) for s, w in dist) for dist in self.per_player)
        )

    @classmethod
    def point_mass(cls, js: JointStrategy) -> "MixedJointStrategy":
        return cls(tuple(((s, Fraction(1)),) for s in js.strategies))


@dataclass(frozen=True)
class DenseGame:
    """Index-based view of a game used by the solvers.

    Joint actions are flattened with player 0 most significant, which is the
    order of ``itertools.product(*actions)``.
    """

    action_counts: tuple[int, ...]
    observation_counts: tuple[int, ...]
    strides: tuple[int, ...]
    probabilities: tuple[Fraction, ...]
    observations: tuple[tuple[int, ...], ...]  # [world][player] -> observation index
    payoffs: tuple[tuple[Payoff, ...], ...]  # [world][flat joint action]

    @property
    def joint_action_count(self) -> int:
        return math.prod(self.action_counts)

    def flat(self, actions: Sequence[int]) -> int:
        return sum(a * s for a, s in zip(actions, self.strides))

    def unflat(self, index: int) -> tuple[int, ...]:
        out = []
        for s, k in zip(self.strides, self.action_counts):
            out.append((index // s) % k)
        return tuple(out)


@dataclass(frozen=True)
class Game:
    actions: tuple[tuple[str, ...], ...]
    observations: tuple[tuple[str, ...], ...]
    worlds: tuple[World, ...]

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(tuple(a) for a in self.actions))
        object.__setattr__(self, "observations", tuple(tuple(o) for o in self.observations))
        object.__setattr__(self, "worlds", tuple(self.worlds))

    @property
    def players(self) -> int:
        return len(self.actions)

    @cached_property
    def _action_index(self) -> list[dict[str, int]]:
        return [{a: k for k, a in enumerate(acts)} for acts in self.actions]

    @cached_property
    def _observation_index(self) -> list[dict[str, int]]:
        return [{o: k for k, o in enumerate(obs)} for obs in self.observations]

    def action_index(self, player: int, action: str) -> int:
        return self._action_index[player][action]

    def observation_index(self, player: int, observation: str) -> int:
        return self._observation_index[player][observation]

    def joint_actions(self) -> Iterator[JointAction]:
        return itertools.product(*self.actions)

    def strategy_counts(self) -> list[int]:
        """``|A_i| ** |O_i|`` for every player."""
        return [len(a) ** len(o) for a, o in zip(self.actions, self.observations)]

    def profile_count(self) -> int:
        return math.prod(self.strategy_counts())

    @cached_property
    def _violations(self) -> tuple[str, ...]:
        return tuple(_collect_violations(self))

    @cached_property
    def is_common_payoff(self) -> bool:
        return all(
            _common_value(v) is not None for w in self.worlds for v in w.payoffs.values()
        )

    @cached_property
    def dense(self) -> DenseGame:
        require_valid(self)
        counts = tuple(len(a) for a in self.actions)
        strides = []
        acc = 1
        for k in reversed(counts):
            strides.append(acc)
            acc *= k
        strides.reverse()
        probs, obs, pays = [], [], []
        for w in self.worlds:
            probs.append(w.probability)
            obs.append(tuple(self.observation_index(i, o) for i, o in enumerate(w.observations)))
            pays.append(tuple(w.payoffs[ja] for ja in self.joint_actions()))
        return DenseGame(
            action_counts=counts,
            observation_counts=tuple(len(o) for o in self.observations),
            strides=tuple(strides),
            probabilities=tuple(probs),
            observations=tuple(obs),
            payoffs=tuple(pays),
        )

    def common_payoff(self, world: World, joint: JointAction) -> Fraction:
        value = _common_value(world.payoffs[joint])
        if value is None:
            raise NotCommonPayoff(f"world {world.id}: payoff at {joint} differs across players")
        return value

    def player_payoff(self, world: World, joint: JointAction, player: int) -> Fraction:
        entry = world.payoffs[joint]
        if isinstance(entry, tuple):
            return entry[player]
        return entry


def _common_value(entry) -> Fraction | None:
    if isinstance(entry, tuple):
        if not entry or any(v != entry[0] for v in entry):
            return None
        return entry[0]
    return entry


def _collect_violations(game: Game) -> Iterator[str]:
    n = game.players
    if n < 1:
        yield "a game needs at least one player"
        return
    if len(game.observations) != n:
        yield f"{n} action sets but {len(game.observations)} observation sets"
        return
    for label, sets in (("action", game.actions), ("observation", game.observations)):
        for i, items in enumerate(sets):
            if not items:
                yield f"player {i + 1} has an empty {label} set"
            dups = sorted({x for x in items if items.count(x) > 1})
            if dups:
                yield f"player {i + 1} has duplicate {label}s {dups}"
    if not game.worlds:
        yield "no worlds"
        return
    ids = [w.id for w in game.worlds]
    dup_ids = sorted({x for x in ids if ids.count(x) > 1})
    if dup_ids:
        yield f"duplicate world ids {dup_ids}"

    expected_keys = set(game.joint_actions())
    total = Fraction(0)
    probabilities_ok = True
    for w in game.worlds:
        if not isinstance(w.probability, Fraction):
            yield f"world {w.id}: probability {w.probability!r} is not rational"
            probabilities_ok = False
            continue
        if w.probability < 0:
            yield f"world {w.id}: negative probability {format_rational(w.probability)}"
        total += w.probability
        if len(w.observations) != n:
            yield f"world {w.id}: {len(w.observations)} observations for {n} players"
        else:
            for i, o in enumerate(w.observations):
                if o not in game._observation_index[i]:
                    yield f"world {w.id}: observation {o!r} of player {i + 1} is not in its observation set"
        keys = set(w.payoffs)
        if keys != expected_keys or len(w.payoffs) != len(expected_keys):
            missing = len(expected_keys - keys)
            extra = len(keys - expected_keys)
            yield (
                f"world {w.id}: payoff table has {len(w.payoffs)} entries, expected {len(expected_keys)}"
                f" ({missing} missing, {extra} unknown)"
            )
        for key, value in w.payoffs.items():
            if isinstance(value, tuple):
                if len(value) != n or not all(isinstance(v, Fraction) for v in value):
                    yield f"world {w.id}: payoff at {key} must be {n} rationals"
                    break
            elif not isinstance(value, Fraction):
                yield f"world {w.id}: payoff at {key} is not rational: {value!r}"
                break
    if probabilities_ok and total != 1:
        yield f"probabilities sum to {format_rational(total)} ≠ 1"


def validate(game: Game) -> list[str]:
    """Every invariant violation found in ``game``; empty iff the game is valid."""
    return list(game._violations)


def require_valid(game: Game) -> None:
    if game._violations:
        raise InvalidGame(list(game._violations))


def require_common(game: Game) -> None:
    require_valid(game)
    if not game.is_common_payoff:
        raise NotCommonPayoff("operation requires a common-payoff game")


def check_strategy(game: Game, strategy: Strategy, player: int) -> None:
    if strategy.player != player:
        raise DimensionMismatch(f"strategy in slot {player} belongs to player {strategy.player}")
    known = game._observation_index[player]
    extra = [o for o in strategy.choice if o not in known]
    if extra:
        raise DimensionMismatch(f"player {player + 1}: unknown observations {extra}")
    missing = [o for o in game.observations[player] if o not in strategy.choice]
    if missing:
        raise DimensionMismatch(f"player {player + 1}: no action for observations {missing}")
    acts = game._action_index[player]
    bad = {o: a for o, a in strategy.choice.items() if a not in acts}
    if bad:
        raise DimensionMismatch(f"player {player + 1}: actions not in its action set {bad}")


def check_joint(game: Game, js: JointStrategy) -> None:
    if len(js) != game.players:
        raise DimensionMismatch(f"joint strategy has {len(js)} entries for {game.players} players")
    for i, s in enumerate(js.strategies):
        check_strategy(game, s, i)


def strategy_from_indices(game: Game, player: int, indices: Sequence[int]) -> Strategy:
    acts = game.actions[player]
    return Strategy(player, {o: acts[k] for o, k in zip(game.observations[player], indices)})


def strategy_indices(game: Game, strategy: Strategy) -> tuple[int, ...]:
    check_strategy(game, strategy, strategy.player)
    idx = game._action_index[strategy.player]
    return tuple(idx[strategy.choice[o]] for o in game.observations[strategy.player])


def joint_from_indices(game: Game, per_player: Sequence[Sequence[int]]) -> JointStrategy:
    return JointStrategy(tuple(strategy_from_indices(game, i, s) for i, s in enumerate(per_player)))


def pure_strategies(game: Game, player: int) -> Iterator[Strategy]:
    """All strategies of ``player`` in lexicographic order (first observation most significant)."""
    for idx in itertools.product(range(len(game.actions[player])), repeat=len(game.observations[player])):
        yield strategy_from_indices(game, player, idx)


def pure_profiles(game: Game) -> Iterator[JointStrategy]:
    for combo in itertools.product(*(list(pure_strategies(game, i)) for i in range(game.players))):
        yield JointStrategy(combo)


def _selected(world: World, js: JointStrategy) -> JointAction:
    return tuple(s.choice[o] for s, o in zip(js.strategies, world.observations))


def expected_payoff(game: Game, js: JointStrategy) -> Fraction:
    """Probability-weighted common payoff of the joint action ``js`` selects in each world."""
    require_common(game)
    check_joint(game, js)
    total = Fraction(0)
    for w in game.worlds:
        total += w.probability * game.common_payoff(w, _selected(w, js))
    return total


def expected_payoff_vector(game: Game, js: JointStrategy) -> tuple[Fraction, ...]:
    """Per-player expected payoffs; defined for general (non-common) games too."""
    require_valid(game)
    check_joint(game, js)
    totals = [Fraction(0)] * game.players
    for w in game.worlds:
        joint = _selected(w, js)
        for i in range(game.players):
            totals[i] += w.probability * game.player_payoff(w, joint, i)
    return tuple(totals)


def check_mixed(game: Game, mjs: MixedJointStrategy) -> None:
    if len(mjs.per_player) != game.players:
        raise DimensionMismatch(f"mixed strategy has {len(mjs.per_player)} entries for {game.players} players")
    for i, dist in enumerate(mjs.per_player):
        if not dist:
            raise ValidationError(f"player {i + 1}: empty mixture")
        for s, w in dist:
            check_strategy(game, s, i)
            if w < 0:
                raise ValidationError(f"player {i + 1}: negative weight {format_rational(w)}")
        total = sum((w for _, w in dist), Fraction(0))
        if total != 1:
            raise ValidationError(f"player {i + 1}: weights sum to {format_rational(total)} ≠ 1")


def expected_payoff_mixed(game: Game, mjs: MixedJointStrategy) -> Fraction:
    """Expected common payoff when players draw pure strategies independently.

    Because the mixtures are independent and each player moves once, the sum
    over pure profiles factorises into per-world products of each player's
    marginal action distribution at the observation made there. The result is
    exactly the profile-weighted average of :func:`expected_payoff`.
    """
    require_common(game)
    check_mixed(game, mjs)
    # marginal[i][observation][action] = probability player i plays action after observation
    marginal: list[dict[str, dict[str, Fraction]]] = []
    for dist in mjs.per_player:
        table: dict[str, dict[str, Fraction]] = {}
        for s, weight in dist:
            if weight == 0:
                continue
            for o, a in s.choice.items():
                row = table.setdefault(o, {})
                row[a] = row.get(a, Fraction(0)) + weight
        marginal.append(table)
    total = Fraction(0)
    for w in game.worlds:
        if w.probability == 0:
            continue
        rows = [marginal[i][o].items() for i, o in enumerate(w.observations)]
        acc = Fraction(0)
        for combo in itertools.product(*rows):
            weight = math.prod((p for _, p in combo), start=Fraction(1))
            acc += weight * game.common_payoff(w, tuple(a for a, _ in combo))
        total += w.probability * acc
    return total


def payoff_bounds(game: Game) -> tuple[Fraction, Fraction]:
    """Smallest and largest common payoff entry over all worlds."""
    require_common(game)
    values = [game.common_payoff(w, ja) for w in game.worlds for ja in w.payoffs]
    return min(values), max(values)
