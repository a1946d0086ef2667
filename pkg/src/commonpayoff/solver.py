"""Optimal joint strategies for common-payoff games.

All solvers work on an integer image of the game: every term
``Pr(w) * pay(w, a)`` is multiplied by the least common multiple ``L`` of the
term denominators, so sums and comparisons are exact integer operations and
values are reported as ``Fraction(total, L)``.

Pure strategies are enumerated lexicographically: players in index order, and
within a player the first declared observation is the most significant digit,
actions in declared order.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import PreconditionError, SizeLimitExceeded
from .game import Game, JointStrategy, joint_from_indices, require_common
from .rational import format_rational

DEFAULT_PROFILE_CAP = 10**8
DEFAULT_NORMAL_FORM_CAP = 10**6

_CHUNK = 4096
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class SolveResult:
    optimal_value: Fraction
    witness: JointStrategy
    profiles_examined: int
    nodes_pruned: int = 0


@dataclass(frozen=True)
class ScaledGame:
    scale: int
    tables: tuple[tuple[int, ...], ...]  # [world][flat joint action] -> Pr * pay * scale
    observations: tuple[tuple[int, ...], ...]
    action_counts: tuple[int, ...]
    observation_counts: tuple[int, ...]
    strides: tuple[int, ...]

    @property
    def players(self) -> int:
        return len(self.action_counts)

    @property
    def world_count(self) -> int:
        return len(self.tables)

    def value(self, total: int) -> Fraction:
        return Fraction(total, self.scale)


def scale_game(game: Game) -> ScaledGame:
    require_common(game)
    dense = game.dense
    terms = [[p * v for v in row] for p, row in zip(dense.probabilities, dense.payoffs)]
    scale = 1
    for row in terms:
        for t in row:
            scale = math.lcm(scale, t.denominator)
    tables = tuple(tuple(int(t * scale) for t in row) for row in terms)
    return ScaledGame(
        scale=scale,
        tables=tables,
        observations=dense.observations,
        action_counts=dense.action_counts,
        observation_counts=dense.observation_counts,
        strides=dense.strides,
    )


def _strategy_indices(count: int, actions: int, observations: int) -> tuple[int, ...]:
    """Decode the rank of a pure strategy into per-observation action indices."""
    digits = []
    for _ in range(observations):
        digits.append(count % actions)
        count //= actions
    return tuple(reversed(digits))


def _guard(game: Game, cap: int, what: str) -> int:
    counts = game.strategy_counts()
    total = math.prod(counts)
    if total > cap:
        dims = [f"{len(a)}^{len(o)}" for a, o in zip(game.actions, game.observations)]
        raise SizeLimitExceeded(what, total, cap, dims)
    return total


class _Scanner:
    """Evaluates every pure profile, vectorised over the last player's strategies."""

    def __init__(self, sc: ScaledGame):
        self.sc = sc
        n = sc.players
        self.prefix_players = list(range(n - 1))
        last = n - 1
        self.last_count = sc.action_counts[last] ** sc.observation_counts[last]
        w = sc.world_count
        width = math.prod(sc.action_counts)
        peak = max((abs(v) for row in sc.tables for v in row), default=0)
        dtype = np.int64 if peak * max(w, 1) < _INT64_SAFE else object
        self.flat_tables = np.array([v for row in sc.tables for v in row], dtype=dtype)
        self.bases = np.arange(w, dtype=np.int64) * width
        self.last_obs = np.array([obs[last] for obs in sc.observations], dtype=np.int64)
        k, o = sc.action_counts[last], sc.observation_counts[last]
        self.powers = np.array([k ** (o - 1 - j) for j in range(o)], dtype=np.int64)
        self.last_k = k
        self._chunks: list[np.ndarray] | None = None
        if self.last_count * max(w, 1) <= 4_000_000:
            self._chunks = [self._chunk(lo) for lo in range(0, self.last_count, _CHUNK)]

    def _chunk(self, lo: int) -> np.ndarray:
        """Last player's action at each world, for strategies ``lo .. lo+_CHUNK``."""
        hi = min(lo + _CHUNK, self.last_count)
        ranks = np.arange(lo, hi, dtype=np.int64)
        digits = (ranks[:, None] // self.powers[None, :]) % self.last_k
        if digits.shape[1] == 0:
            return np.zeros((hi - lo, len(self.last_obs)), dtype=np.int64)
        return digits[:, self.last_obs]

    def prefixes(self) -> Iterator[tuple[tuple[int, ...], ...]]:
        sc = self.sc
        return itertools.product(
            *(itertools.product(range(sc.action_counts[i]), repeat=sc.observation_counts[i])
              for i in self.prefix_players)
        )

    def prefix_count(self) -> int:
        sc = self.sc
        return math.prod(sc.action_counts[i] ** sc.observation_counts[i] for i in self.prefix_players)

    def values(self, prefix: Sequence[Sequence[int]]) -> Iterator[np.ndarray]:
        """Scaled values of ``prefix`` combined with each last-player strategy, in chunks."""
        sc = self.sc
        offsets = self.bases.copy()
        for i, strat in zip(self.prefix_players, prefix):
            stride = sc.strides[i]
            offsets += np.array([strat[obs[i]] * stride for obs in sc.observations], dtype=np.int64)
        for n, lo in enumerate(range(0, self.last_count, _CHUNK)):
            acts = self._chunks[n] if self._chunks is not None else self._chunk(lo)
            yield self.flat_tables[offsets[None, :] + acts].sum(axis=1)

    def scan(self, start: int, stop: int) -> tuple[int | None, int, int, int]:
        """Best (value, prefix rank, last rank) over prefix ranks ``[start, stop)``; first max wins."""
        best, best_prefix, best_last, examined = None, -1, -1, 0
        for rank, prefix in enumerate(itertools.islice(self.prefixes(), start, stop), start):
            for n, vals in enumerate(self.values(prefix)):
                examined += len(vals)
                j = _first_argmax(vals)
                v = int(vals[j])
                if best is None or v > best:
                    best, best_prefix, best_last = v, rank, n * _CHUNK + j
        return best, best_prefix, best_last, examined


def _first_argmax(vals: np.ndarray) -> int:
    if vals.dtype != object:
        return int(np.argmax(vals))
    best = 0
    for j in range(1, len(vals)):
        if vals[j] > vals[best]:
            best = j
    return best


def _scan_worker(args):
    sc, start, stop = args
    return _Scanner(sc).scan(start, stop)


def _decode_profile(scanner: _Scanner, prefix_rank: int, last_rank: int) -> list[tuple[int, ...]]:
    sc = scanner.sc
    prefix = next(itertools.islice(scanner.prefixes(), prefix_rank, None))
    last = sc.players - 1
    return list(prefix) + [_strategy_indices(last_rank, sc.action_counts[last], sc.observation_counts[last])]


def brute_force_optimal(game: Game, cap: int = DEFAULT_PROFILE_CAP, workers: int = 1) -> SolveResult:
    """Evaluate every pure joint strategy and return the first one of maximum value.

    With ``workers > 1`` the profiles are split into contiguous blocks scanned
    in separate processes; the merge keeps the lexicographically first maximum,
    so the result is identical to the sequential scan.
    """
    require_common(game)
    _guard(game, cap, "pure profile space")
    sc = scale_game(game)
    scanner = _Scanner(sc)
    blocks = scanner.prefix_count()
    if workers <= 1 or blocks < 2:
        results = [scanner.scan(0, blocks)]
    else:
        step = -(-blocks // workers)
        tasks = [(sc, lo, min(lo + step, blocks)) for lo in range(0, blocks, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_worker, tasks))
    best, examined = None, 0
    for value, prefix_rank, last_rank, count in results:
        examined += count
        if value is not None and (best is None or value > best[0]):
            best = (value, prefix_rank, last_rank)
    value, prefix_rank, last_rank = best
    witness = joint_from_indices(game, _decode_profile(scanner, prefix_rank, last_rank))
    return SolveResult(sc.value(value), witness, examined, 0)


class _BranchAndBound:
    """Depth-first search over (player, observation) decisions.

    At world ``w`` the players whose choice at ``w`` is already decided always
    form a prefix ``0..k-1`` of the player order, so the best payoff still
    reachable at ``w`` is the maximum over one contiguous block of the flat
    payoff row. Those block maxima are precomputed for every prefix length.
    """

    def __init__(self, sc: ScaledGame, target: Fraction | None = None):
        self.sc = sc
        self.target = target
        n = sc.players
        self.decisions = [(i, o) for i in range(n) for o in range(sc.observation_counts[i])]
        self.worlds_at = [[[] for _ in range(sc.observation_counts[i])] for i in range(n)]
        for w, obs in enumerate(sc.observations):
            for i, o in enumerate(obs):
                self.worlds_at[i][o].append(w)
        # block_max[w][k][p]: best entry of row w with the first k players' actions encoded as p
        self.block_max = []
        for row in sc.tables:
            levels = [list(row)]
            for k in reversed(sc.action_counts):
                prev = levels[-1]
                levels.append([max(prev[p * k:(p + 1) * k]) for p in range(len(prev) // k)])
            levels.reverse()
            self.block_max.append(levels)
        self.prefix = [0] * sc.world_count
        self.choice = [[0] * sc.observation_counts[i] for i in range(n)]
        self.best = sum(row[0] for row in sc.tables)
        self.best_choice = [list(c) for c in self.choice]
        self.examined = 1
        self.pruned = 0
        self.done = False

    def root_bound(self) -> int:
        return sum(levels[0][0] for levels in self.block_max)

    def _reached(self) -> bool:
        return self.target is not None and self.best >= self.target

    def _prune(self, bound: int) -> bool:
        return bound <= self.best or (self.target is not None and bound < self.target)

    def run(self) -> None:
        if self._reached():
            return
        bound = self.root_bound()
        if self._prune(bound):
            self.pruned += 1
            return
        self._dfs(0, bound)

    def _dfs(self, depth: int, bound: int) -> None:
        if depth == len(self.decisions):
            self.examined += 1
            # unpruned leaf: bound is the profile's exact scaled value and beats the incumbent
            self.best = bound
            self.best_choice = [list(c) for c in self.choice]
            self.done = self._reached()
            return
        i, o = self.decisions[depth]
        worlds = self.worlds_at[i][o]
        k = self.sc.action_counts[i]
        options = range(k) if worlds else range(1)
        for a in options:
            child = bound
            for w in worlds:
                p = self.prefix[w]
                child += self.block_max[w][i + 1][p * k + a] - self.block_max[w][i][p]
            if self._prune(child):
                self.pruned += 1
                continue
            saved = [self.prefix[w] for w in worlds]
            for w in worlds:
                self.prefix[w] = self.prefix[w] * k + a
            self.choice[i][o] = a
            self._dfs(depth + 1, child)
            for w, p in zip(worlds, saved):
                self.prefix[w] = p
            self.choice[i][o] = 0
            if self.done:
                return


def branch_and_bound_optimal(game: Game) -> SolveResult:
    """Exact optimum by depth-first branch and bound.

    The incumbent starts at the all-first-action profile; a node is pruned
    when its optimistic bound does not exceed the incumbent.
    """
    require_common(game)
    sc = scale_game(game)
    search = _BranchAndBound(sc)
    search.run()
    witness = joint_from_indices(game, search.best_choice)
    return SolveResult(sc.value(search.best), witness, search.examined, search.pruned)


def root_upper_bound(game: Game) -> Fraction:
    """Sum over worlds of Pr(w) times the world's best payoff."""
    sc = scale_game(game)
    return sc.value(_BranchAndBound(sc).root_bound())


def util_decide(game: Game, r: Fraction) -> tuple[bool, JointStrategy | None]:
    """Is there a pure joint strategy with expected payoff at least ``r``?

    Returns ``(True, witness)`` or ``(False, None)``; the exhausted search is
    the only certificate for a negative answer.
    """
    require_common(game)
    sc = scale_game(game)
    search = _BranchAndBound(sc, target=Fraction(r) * sc.scale)
    search.run()
    if search.best >= search.target:
        return True, joint_from_indices(game, search.best_choice)
    return False, None


def is_perfect_information(game: Game) -> bool:
    try:
        _check_perfect_information(game)
    except PreconditionError:
        return False
    return True


def _check_perfect_information(game: Game) -> None:
    for i in range(game.players):
        seen: dict[str, str] = {}
        for w in game.worlds:
            if w.probability == 0:
                continue
            o = w.observations[i]
            if o in seen:
                raise PreconditionError(
                    f"player {i + 1} observes {o!r} in both {seen[o]} and {w.id}; not perfect information"
                )
            seen[o] = w.id


def perfect_info_solve(game: Game) -> SolveResult:
    """Optimum when no player confuses two positive-probability worlds.

    Each world is solved on its own by its best joint action; observations
    that occur only in zero-probability worlds get the first action.
    """
    require_common(game)
    _check_perfect_information(game)
    sc = scale_game(game)
    choice = [[0] * sc.observation_counts[i] for i in range(sc.players)]
    dense = game.dense
    total = 0
    for w, row in enumerate(sc.tables):
        if dense.probabilities[w] == 0:
            continue
        j = max(range(len(row)), key=lambda x: (row[x], -x))
        total += row[j]
        for i, a in enumerate(dense.unflat(j)):
            choice[i][sc.observations[w][i]] = a
    return SolveResult(sc.value(total), joint_from_indices(game, choice), 1, 0)


@dataclass(frozen=True)
class NormalForm:
    """Dense matrix of expected payoffs, one axis per player, row-major."""

    strategy_counts: tuple[int, ...]
    payoffs: tuple[Fraction, ...]
    strategy_labels: tuple[tuple[str, ...], ...] = ()

    def __getitem__(self, index: Sequence[int]) -> Fraction:
        flat = 0
        for k, n in zip(index, self.strategy_counts):
            flat = flat * n + k
        return self.payoffs[flat]

    def max(self) -> Fraction:
        return max(self.payoffs)

    def to_dict(self) -> dict:
        doc = {
            "dims": list(self.strategy_counts),
            "entries": [format_rational(v, always_fraction=True) for v in self.payoffs],
        }
        if self.strategy_labels:
            doc["strategies"] = [list(labels) for labels in self.strategy_labels]
        return doc

    def to_csv(self) -> str:
        """Rows are player-1 strategies, columns player-2 strategies; no header."""
        if len(self.strategy_counts) != 2:
            raise ValueError("CSV export needs a two-player game")
        rows, cols = self.strategy_counts
        lines = []
        for r in range(rows):
            cells = self.payoffs[r * cols:(r + 1) * cols]
            lines.append(",".join(format_rational(v, always_fraction=True) for v in cells))
        return "\n".join(lines) + "\n"


def _strategy_label(game: Game, player: int, indices: Sequence[int]) -> str:
    acts = game.actions[player]
    return ",".join(f"{o}={acts[k]}" for o, k in zip(game.observations[player], indices))


def to_normal_form(game: Game, cap: int = DEFAULT_NORMAL_FORM_CAP, labels: bool = True) -> NormalForm:
    require_common(game)
    _guard(game, cap, "normal form")
    sc = scale_game(game)
    scanner = _Scanner(sc)
    values: list[Fraction] = []
    for prefix in scanner.prefixes():
        for vals in scanner.values(prefix):
            values.extend(sc.value(int(v)) for v in vals)
    names: tuple[tuple[str, ...], ...] = ()
    if labels:
        names = tuple(
            tuple(_strategy_label(game, i, s) for s in
                  itertools.product(range(len(game.actions[i])), repeat=len(game.observations[i])))
            for i in range(game.players)
        )
    return NormalForm(tuple(game.strategy_counts()), tuple(values), names)
