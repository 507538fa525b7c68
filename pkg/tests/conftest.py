from fractions import Fraction

import pytest
from hypothesis import strategies as st

PRIMES = (2, 3, 5, 7)


def rationals(height=1000):
    return st.builds(Fraction, st.integers(-height, height), st.integers(1, height))


def nonzero_rationals(height=1000):
    return rationals(height).filter(lambda q: q != 0)


def trial_valuation(q: Fraction, p: int) -> int:
    """Oracle: count factors of p by repeated division, independent of the library."""
    def count(n):
        n, v = abs(n), 0
        while n % p == 0:
            n //= p
            v += 1
        return v
    return count(q.numerator) - count(q.denominator)


_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion of the build")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    key = marker.args
    _ACCEPTANCE[key] = _ACCEPTANCE.get(key, True) and rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), ok in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}")
