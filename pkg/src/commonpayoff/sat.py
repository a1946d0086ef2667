"""DIMACS I/O and a plain DPLL solver used as an independent satisfiability oracle."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping

from .cnf import Assignment, CnfFormula
from .errors import AssignmentError, MalformedFormula, ParseError

_TOKEN = re.compile(r"\S+")


def parse_dimacs(text: str | bytes) -> CnfFormula:
    """Parse DIMACS CNF.

    Clauses may span lines and must end with ``0``. Clauses of one or two
    literals are padded to three; wider clauses are rejected because the
    target type is 3-CNF. A ``%`` line ends the input (SATLIB convention).
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    current_at = (0, 0)
    last_line = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        last_line = lineno
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("%"):
            break
        if stripped.startswith("p"):
            if header is not None:
                raise ParseError("second problem line", lineno, 1)
            parts = stripped.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise ParseError(f"malformed problem line {stripped!r}, expected 'p cnf <vars> <clauses>'", lineno, 1)
            try:
                m, n = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"non-integer counts in {stripped!r}", lineno, 1) from None
            if m < 0 or n < 0:
                raise ParseError("negative counts in problem line", lineno, 1)
            header = (m, n)
            continue
        if header is None:
            raise ParseError("clause before the 'p cnf' problem line", lineno, 1)
        m = header[0]
        for tok in _TOKEN.finditer(line):
            col = tok.start() + 1
            try:
                lit = int(tok.group())
            except ValueError:
                raise ParseError(f"expected an integer literal, got {tok.group()!r}", lineno, col) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno, col)
                clauses.append(current)
                current = []
                continue
            if abs(lit) > m:
                raise ParseError(f"variable index {abs(lit)} > {m}", lineno, col)
            if not current:
                current_at = (lineno, col)
            current.append(lit)
            if len(current) > 3:
                raise ParseError("clause has more than three literals", lineno, col)
    if header is None:
        raise ParseError("missing 'p cnf' problem line", last_line or 1)
    if current:
        raise ParseError("unterminated clause (missing trailing 0)", *current_at)
    if len(clauses) != header[1]:
        raise ParseError(f"problem line declares {header[1]} clauses, found {len(clauses)}", last_line)
    try:
        return CnfFormula.from_clauses(clauses, header[0])
    except MalformedFormula as exc:
        raise ParseError(str(exc)) from None


def to_dimacs(phi: CnfFormula) -> str:
    """DIMACS text; padded clauses are written at their original width."""
    lines = [f"p cnf {phi.variable_count} {phi.clause_count}"]
    for clause in phi.original_clauses():
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SatVerdict:
    satisfiable: bool
    assignment: Assignment | None
    decisions: int
    propagations: int

    @property
    def outcome(self) -> str:
        return "SAT" if self.satisfiable else "UNSAT"

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "assignment": None if self.assignment is None else {str(k): v for k, v in sorted(self.assignment.items())},
            "decisions": self.decisions,
            "propagations": self.propagations,
        }


class _Dpll:
    def __init__(self, phi: CnfFormula):
        self.clauses = [tuple(sorted(set(c), key=lambda l: (abs(l), l))) for c in phi.clauses]
        self.m = phi.variable_count
        self.value: list[bool | None] = [None] * (self.m + 1)
        self.trail: list[int] = []
        self.decisions = 0
        self.propagations = 0

    def _assign(self, var: int, val: bool) -> None:
        self.value[var] = val
        self.trail.append(var)

    def _undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            self.value[self.trail.pop()] = None

    def _status(self, clause) -> tuple[bool, list[int]]:
        """(satisfied?, unassigned literals)."""
        free = []
        for l in clause:
            v = self.value[abs(l)]
            if v is None:
                free.append(l)
            elif v == (l > 0):
                return True, []
        return False, free

    def _simplify(self) -> bool:
        """Unit propagation and pure-literal elimination to a fixpoint; False on conflict."""
        while True:
            changed = False
            polarity: dict[int, set[bool]] = {}
            for clause in self.clauses:
                sat, free = self._status(clause)
                if sat:
                    continue
                if not free:
                    return False
                if len(free) == 1:
                    lit = free[0]
                    self._assign(abs(lit), lit > 0)
                    self.propagations += 1
                    changed = True
                    continue
                for l in free:
                    polarity.setdefault(abs(l), set()).add(l > 0)
            if changed:
                continue
            for var in sorted(polarity):
                signs = polarity[var]
                if len(signs) == 1 and self.value[var] is None:
                    self._assign(var, next(iter(signs)))
                    self.propagations += 1
                    changed = True
            if not changed:
                return True

    def _branch_variable(self) -> int | None:
        best = None
        for clause in self.clauses:
            sat, free = self._status(clause)
            if not sat:
                v = min(abs(l) for l in free)
                if best is None or v < best:
                    best = v
        return best

    def search(self) -> bool:
        if not self._simplify():
            return False
        var = self._branch_variable()
        if var is None:
            return True
        for val in (True, False):
            mark = len(self.trail)
            self.decisions += 1
            self._assign(var, val)
            if self.search():
                return True
            self._undo(mark)
        return False


def dpll_solve(phi: CnfFormula) -> SatVerdict:
    """Complete DPLL with unit propagation and pure literals, chronological backtracking.

    Branches on the lowest-index variable still unassigned in an unsatisfied
    clause, trying ``True`` first. Variables left free at the end are set to
    ``False``.
    """
    solver = _Dpll(phi)
    if not solver.search():
        return SatVerdict(False, None, solver.decisions, solver.propagations)
    alpha = {v: bool(solver.value[v]) for v in range(1, phi.variable_count + 1)}
    return SatVerdict(True, alpha, solver.decisions, solver.propagations)


def verify_assignment(phi: CnfFormula, alpha: Mapping[int, bool]) -> bool:
    missing = [v for v in range(1, phi.variable_count + 1) if v not in alpha]
    if missing:
        raise AssignmentError(f"assignment leaves variables {missing} unset")
    return phi.evaluate(alpha)
