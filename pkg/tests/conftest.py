import mpmath
import pytest

mpmath.mp.dps = 40


def mp_g(t, x):
    t, x = mpmath.mpf(t), mpmath.mpf(x)
    return mpmath.exp(-x * x / (2 * t)) / mpmath.sqrt(2 * mpmath.pi * t)


def mp_h(t, x):
    t, x = mpmath.mpf(t), abs(mpmath.mpf(x))
    if t <= 0:
        return mpmath.mpf(0)
    return x / (mpmath.sqrt(2 * mpmath.pi) * t ** mpmath.mpf(1.5)) * mpmath.exp(-x * x / (2 * t))


@pytest.fixture
def mp():
    return mpmath


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
