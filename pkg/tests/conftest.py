from fractions import Fraction as F

import pytest
from hypothesis import strategies as st

from a1sharp.weights import make_step_weight

# limits kept small so exact Fractions stay fast


@st.composite
def step_weights(draw, max_pieces=6, max_value=20, start=0):
    n = draw(st.integers(1, max_pieces))
    lengths = draw(st.lists(st.integers(1, 6), min_size=n, max_size=n))
    den = draw(st.integers(1, 4))
    vals = draw(st.lists(st.integers(1, max_value), min_size=n, max_size=n))
    bps = [F(start)]
    for l in lengths:
        bps.append(bps[-1] + F(l, den))
    return make_step_weight(bps, [F(v, den) for v in vals])


def nonincreasing(draw_weight):
    return draw_weight.map(lambda w: make_step_weight(w.breakpoints, sorted(w.values, reverse=True)))


def brute_integral(w, a, b):
    """Piece-by-piece integral, independent of the prefix sums under test."""
    total = F(0)
    for v, lo, hi in zip(w.values, w.breakpoints, w.breakpoints[1:]):
        ov = min(b, hi) - max(a, lo)
        if ov > 0:
            total += v * ov
    return total


def brute_essinf(w, a, b):
    return min(v for v, lo, hi in zip(w.values, w.breakpoints, w.breakpoints[1:])
               if min(b, hi) - max(a, lo) > 0)


def brute_ratio(w, a, b):
    return brute_integral(w, a, b) / ((b - a) * brute_essinf(w, a, b))


@pytest.fixture
def W1():
    return make_step_weight([0, F(1, 2), 1], [2, 1])


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod and mod.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.VERDICTS:
            terminalreporter.write_line(line)
