"""3-CNF formulas.

Literals are signed DIMACS integers: ``k`` is variable ``k``, ``-k`` its
negation. Every clause holds exactly three literals; narrower input clauses
are padded by repeating their last literal, and ``widths`` remembers the
original width so the padding can be undone on output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import MalformedFormula

Clause = tuple[int, int, int]
Assignment = dict[int, bool]


def pad_clause(literals: Sequence[int]) -> Clause:
    if not 1 <= len(literals) <= 3:
        raise MalformedFormula(f"a clause needs one to three literals, got {len(literals)}")
    lits = list(literals)
    while len(lits) < 3:
        lits.append(lits[-1])
    return tuple(lits)


@dataclass(frozen=True)
class CnfFormula:
    variable_count: int
    clauses: tuple[Clause, ...]
    widths: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.widths is not None:
            object.__setattr__(self, "widths", tuple(self.widths))
        m = self.variable_count
        if m < 0:
            raise MalformedFormula(f"negative variable count {m}")
        used = set()
        for i, clause in enumerate(self.clauses, 1):
            if len(clause) != 3:
                raise MalformedFormula(f"clause {i} has {len(clause)} literals, expected 3")
            for lit in clause:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > m:
                    raise MalformedFormula(f"clause {i}: literal {lit!r} outside variables 1..{m}")
                used.add(abs(lit))
        unused = sorted(set(range(1, m + 1)) - used)
        if unused:
            raise MalformedFormula(f"variables {unused} occur in no clause")
        if self.widths is not None:
            if len(self.widths) != len(self.clauses) or not all(1 <= w <= 3 for w in self.widths):
                raise MalformedFormula("widths must give a width in 1..3 for every clause")

    @classmethod
    def from_clauses(cls, clauses: Iterable[Sequence[int]], variable_count: int | None = None) -> "CnfFormula":
        raw = [list(c) for c in clauses]
        if variable_count is None:
            variable_count = max((abs(l) for c in raw for l in c), default=0)
        widths = tuple(len(c) for c in raw)
        padded = tuple(pad_clause(c) for c in raw)
        return cls(variable_count, padded, None if all(w == 3 for w in widths) else widths)

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def original_clauses(self) -> list[tuple[int, ...]]:
        if self.widths is None:
            return list(self.clauses)
        return [c[:w] for c, w in zip(self.clauses, self.widths)]

    def occurrences(self) -> dict[int, int]:
        """Number of clauses each variable occurs in (repeats within a clause count once)."""
        counts = {v: 0 for v in range(1, self.variable_count + 1)}
        for clause in self.clauses:
            for v in {abs(l) for l in clause}:
                counts[v] += 1
        return counts

    def evaluate(self, alpha: Mapping[int, bool]) -> bool:
        return all(any(alpha[abs(l)] == (l > 0) for l in clause) for clause in self.clauses)


def literal_text(lit: int, prefix: str = "z") -> str:
    return ("¬" if lit < 0 else "") + f"{prefix}{abs(lit)}"


def clause_text(clause: Sequence[int], prefix: str = "z") -> str:
    return "(" + " ∨ ".join(literal_text(l, prefix) for l in clause) + ")"


def compact(clauses: Sequence[Sequence[int]]) -> CnfFormula:
    """Renumber the variables that occur to ``1..m``, keeping their order."""
    used = sorted({abs(l) for c in clauses for l in c})
    rename = {v: k for k, v in enumerate(used, 1)}
    return CnfFormula.from_clauses(
        [[rename[abs(l)] * (1 if l > 0 else -1) for l in c] for c in clauses], len(used)
    )


def random_3cnf(
    rng: random.Random, clauses: int, variables: int, widths: tuple[int, int] = (3, 3)
) -> CnfFormula:
    """Clauses over uniformly drawn distinct-variable tuples with fair random signs.

    Clause widths are drawn uniformly from ``widths`` and narrow clauses are
    padded. Variables that end up unused are dropped and the rest renumbered,
    so the result can have fewer than ``variables`` variables.
    """
    lo, hi = widths
    if not 1 <= lo <= hi <= 3:
        raise ValueError(f"clause widths must lie in 1..3, got {widths}")
    if variables < hi:
        raise ValueError(f"need at least {hi} variables for distinct-variable clauses")
    out = []
    for _ in range(clauses):
        picked = rng.sample(range(1, variables + 1), rng.randint(lo, hi))
        out.append([v if rng.random() < 0.5 else -v for v in picked])
    return compact(out)
