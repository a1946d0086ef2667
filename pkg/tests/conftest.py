import pytest

from commonpayoff.cnf import CnfFormula
from commonpayoff.reduction import reduce_3sat

WORKED_DIMACS = "p cnf 4 2\n1 -2 3 0\n2 4 -1 0\n"

_criteria: list[tuple[str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _criteria.append((marker.args[0], "PASS" if rep.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label, verdict in _criteria:
        terminalreporter.write_line(f"{verdict}  {label}")


@pytest.fixture
def worked_phi():
    # (z1 ∨ ¬z2 ∨ z3) ∧ (z2 ∨ z4 ∨ ¬z1)
    return CnfFormula(4, ((1, -2, 3), (2, 4, -1)))


@pytest.fixture
def worked_game(worked_phi):
    return reduce_3sat(worked_phi)


@pytest.fixture
def unsat_phi():
    # (x ∨ x ∨ x) ∧ (¬x ∨ ¬x ∨ ¬x)
    return CnfFormula(1, ((1, 1, 1), (-1, -1, -1)))


@pytest.fixture
def unsat_game(unsat_phi):
    return reduce_3sat(unsat_phi)
