import pytest

from crsynth import MonoidHom, WeightedAlphabet, cyclic_group, permutation_group
from crsynth.algebra import FiniteMonoid


def s3_hom():
    """r a 3-cycle, t a transposition, unit weights."""
    G, _, (r, t) = permutation_group([(1, 2, 0), (1, 0, 2)])
    return MonoidHom(WeightedAlphabet.unit("rt"), G, {"r": r, "t": t})


def cyclic_hom(n, weights, images=None):
    """Letters of the given weights onto Z/n, every letter to 1 by default."""
    A = WeightedAlphabet(weights)
    images = images or {a: 1 % n for a in A}
    return MonoidHom(A, cyclic_group(n), images)


def one_zero():
    """The monoid {1, 0}: identity at 0, zero at 1."""
    return FiniteMonoid([[0, 1], [1, 1]], 0, ["1", "0"])


@pytest.fixture
def s3():
    return s3_hom()


# criterion reporting: one line per acceptance criterion in the terminal summary

_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _RESULTS[number] = (title, rep.outcome, list(item.user_properties))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, outcome, props = _RESULTS[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")
        for key, value in props:
            terminalreporter.write_line(f"    {key}: {value}")
