import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from todaheat.lattice import Window

# derandomized so reruns are byte-for-byte reproducible
settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def rationals(size=9, nonzero=False):
    s = st.fractions(min_value=-size, max_value=size, max_denominator=size)
    return s.filter(lambda q: q != 0) if nonzero else s


@st.composite
def windows(draw, lo=-12, width=25, size=5):
    seed = draw(st.integers(0, 10**6))
    return Window.random(random.Random(seed), lo, width, size)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def random_window(rng):
    return Window.random(rng, -12, 25)


def frac(p, q=1):
    return Fraction(p, q)


# one line per acceptance criterion, echoed again in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
