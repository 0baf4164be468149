import random
from fractions import Fraction

import pytest

from torusrods.farey import Slope
from torusrods.lattice import Rod
from torusrods.volume import place_horizontal_rod

ACCEPTANCE_LINES = []

VERTICAL_ROD = Rod((Fraction(1, 2), Fraction(1, 2), 0), (0, 0, 1))


def axes_rods():
    """The three coordinate directions, shifted so that no two rods meet."""
    return [
        VERTICAL_ROD,
        Rod((0, 0, Fraction(1, 3)), (1, 0, 0)),
        Rod((0, 0, Fraction(2, 3)), (0, 1, 0)),
    ]


def stratified_rods(slopes, heights=None, vertical=VERTICAL_ROD):
    m = len(slopes)
    if heights is None:
        heights = [Fraction(i + 1, m + 1) for i in range(m)]
    return [vertical] + [place_horizontal_rod(s, h, vertical) for s, h in zip(slopes, heights)]


def random_slope(rng: random.Random, bound: int) -> Slope:
    while True:
        p, q = rng.randint(-bound, bound), rng.randint(0, bound)
        if (p, q) != (0, 0):
            return Slope(p, q)


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""
    state = {}

    def record(name, detail=""):
        state["name"], state["detail"] = name, detail

    yield record, state
    # outcome is filled in by the report hook below


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when != "call" or "acceptance" not in item.fixturenames:
        return
    record, state = item.funcargs["acceptance"]
    name = state.get("name", item.name)
    status = "PASS" if rep.passed else "FAIL"
    line = f"[{status}] {name}"
    if state.get("detail"):
        line += f" ({state['detail']})"
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
