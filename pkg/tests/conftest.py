import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from omegazoo.automaton import BUCHI, COBUCHI, Alphabet, Automaton, Lasso, Transition

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

LETTERS = ("a", "b", "c")


@st.composite
def automata(draw, max_states=8, letters=2, acceptance=None, deterministic=False):
    """Random ω-automaton with states 0..n-1 and initial state 0."""
    n = draw(st.integers(1, max_states))
    acc = acceptance or draw(st.sampled_from([BUCHI, COBUCHI]))
    trans = set()
    for q in range(n):
        for x in range(letters):
            if deterministic:
                if draw(st.booleans()) or n == 1:
                    trans.add((q, x, draw(st.integers(0, n - 1)), draw(st.booleans())))
                continue
            for d in draw(st.sets(st.integers(0, n - 1), max_size=3)):
                trans.add((q, x, d, draw(st.booleans())))
    ts = tuple(Transition(*t) for t in sorted(trans))
    return Automaton("random", Alphabet(LETTERS[:letters]), tuple(f"s{i}" for i in range(n)), 0, ts, acc)


@st.composite
def lassos(draw, letters=2, max_prefix=4, max_period=4):
    u = draw(st.lists(st.integers(0, letters - 1), max_size=max_prefix))
    v = draw(st.lists(st.integers(0, letters - 1), min_size=1, max_size=max_period))
    return Lasso(tuple(u), tuple(v))


# ---------------------------------------------------------------- criterion summary

_criteria: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")
    config.addinivalue_line("markers", "slow: takes more than a few seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark and (rep.when == "call" or rep.failed):
        _criteria.setdefault(mark.args[0], []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok = all(_criteria[n])
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'} "
                                    f"({sum(_criteria[n])}/{len(_criteria[n])} checks)")
