"""JSON game files.

Layout::

    {
      "players": 2,
      "actions": [["true", "false"], ["1", "2", "3"]],
      "observations": [["z1", "z2"], ["C1"]],
      "worlds": [
        {"id": "w1,1", "pr": "1/3", "obs": ["z1", "C1"],
         "pay": {"true|1": "3", "true|2": 0, ...}}
      ]
    }

A payoff value is a rational string, a JSON integer, or a list with one
rational per player for games without common payoffs.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import ParseError
from .game import Game, JointStrategy, Strategy, World
from .rational import format_rational, parse_rational

KEY_SEP = "|"


def _payoff_from_json(value: Any, where: str):
    try:
        if isinstance(value, list):
            return tuple(parse_rational(v) for v in value)
        return parse_rational(value)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def game_from_dict(doc: Any) -> Game:
    if not isinstance(doc, dict):
        raise ParseError("game document must be a JSON object")
    for key in ("players", "actions", "observations", "worlds"):
        if key not in doc:
            raise ParseError(f"game document lacks field {key!r}")
    players = doc["players"]
    if not isinstance(players, int) or isinstance(players, bool) or players < 1:
        raise ParseError(f"players must be a positive integer, got {players!r}")
    actions, observations = doc["actions"], doc["observations"]
    for name, sets in (("actions", actions), ("observations", observations)):
        if not isinstance(sets, list) or len(sets) != players:
            raise ParseError(f"{name} must be a list of {players} lists")
        for s in sets:
            if not isinstance(s, list) or not all(isinstance(x, str) for x in s):
                raise ParseError(f"{name} entries must be lists of strings")
    for acts in actions:
        for a in acts:
            if KEY_SEP in a:
                raise ParseError(f"action {a!r} contains the key separator {KEY_SEP!r}")
    if not isinstance(doc["worlds"], list):
        raise ParseError("worlds must be a list")
    worlds = []
    for k, w in enumerate(doc["worlds"]):
        if not isinstance(w, dict):
            raise ParseError(f"world #{k} must be an object")
        for key in ("id", "pr", "obs", "pay"):
            if key not in w:
                raise ParseError(f"world #{k} lacks field {key!r}")
        wid = str(w["id"])
        try:
            pr = parse_rational(w["pr"])
        except ParseError as exc:
            raise ParseError(f"world {wid}: probability: {exc}") from None
        if not isinstance(w["obs"], list) or not all(isinstance(o, str) for o in w["obs"]):
            raise ParseError(f"world {wid}: obs must be a list of strings")
        if not isinstance(w["pay"], dict):
            raise ParseError(f"world {wid}: pay must be an object")
        pay = {}
        for key, value in w["pay"].items():
            joint = tuple(key.split(KEY_SEP))
            pay[joint] = _payoff_from_json(value, f"world {wid}, payoff {key!r}")
        worlds.append(World(wid, pr, tuple(w["obs"]), pay))
    return Game(tuple(map(tuple, actions)), tuple(map(tuple, observations)), tuple(worlds))


def game_to_dict(game: Game) -> dict:
    worlds = []
    for w in game.worlds:
        pay = {}
        # dense and in joint-action order, so files are canonical
        for joint in game.joint_actions():
            value = w.payoffs[joint]
            if isinstance(value, tuple):
                pay[KEY_SEP.join(joint)] = [format_rational(v) for v in value]
            else:
                pay[KEY_SEP.join(joint)] = format_rational(value)
        worlds.append({"id": w.id, "pr": format_rational(w.probability), "obs": list(w.observations), "pay": pay})
    return {
        "players": game.players,
        "actions": [list(a) for a in game.actions],
        "observations": [list(o) for o in game.observations],
        "worlds": worlds,
    }


def dumps(game: Game) -> str:
    return json.dumps(game_to_dict(game), indent=1, ensure_ascii=False) + "\n"


def loads(text: str) -> Game:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    return game_from_dict(doc)


def load_game(path: str | Path) -> Game:
    return loads(Path(path).read_text(encoding="utf-8"))


def save_game(game: Game, path: str | Path) -> None:
    Path(path).write_text(dumps(game), encoding="utf-8")


def joint_strategy_to_dict(js: JointStrategy) -> dict:
    return {"strategies": js.choices()}


def joint_strategy_from_dict(doc: Any) -> JointStrategy:
    """Read ``{"strategies": [{observation: action, ...}, ...]}``."""
    if not isinstance(doc, dict) or not isinstance(doc.get("strategies"), list):
        raise ParseError('strategy document must be {"strategies": [...]}')
    out = []
    for i, choice in enumerate(doc["strategies"]):
        if not isinstance(choice, dict) or not all(isinstance(v, str) for v in choice.values()):
            raise ParseError(f"strategy {i + 1} must map observations to action strings")
        out.append(Strategy(i, choice))
    return JointStrategy(tuple(out))

