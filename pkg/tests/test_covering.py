import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from a1sharp.covering import CoverResult, cover, interval_set, interval_set_from_json, verify_cover
from a1sharp.harness import EPSILONS, random_interval_set


def example_set():
    return interval_set((0, 1), [(F(1, 10), F(3, 10)), (F(6, 10), F(7, 10))])


def test_worked_example():
    E = example_set()
    res = cover(E, F(1, 10))
    assert res.intervals == ((F(1, 10), F(3, 10) + F(1, 45)), (F(6, 10), F(7, 10) + F(1, 90)))
    for lo, hi in res.intervals:
        d = E.overlap(lo, hi) / (hi - lo)
        assert F(9, 10) <= d < 1
    assert verify_cover(E, res)


@pytest.mark.parametrize("eps", EPSILONS)
def test_single_component(eps):
    E = interval_set((0, 1), [(F(1, 4), F(1, 2))])
    res = cover(E, eps)
    assert len(res.intervals) == 1
    lo, hi = res.intervals[0]
    d = F(1, 4) / (hi - lo)
    assert 1 - eps <= d < 1
    assert verify_cover(E, res)


def test_component_at_right_end_grows_left():
    E = interval_set((0, 1), [(F(1, 10), F(2, 10)), (F(1, 2), 1)])
    res = cover(E, F(1, 2))
    assert res.intervals[1][1] == 1 and res.intervals[1][0] < F(1, 2)
    assert verify_cover(E, res)


def test_full_set_rejected():
    with pytest.raises(ValueError):
        cover(interval_set((0, 1), [(0, F(1, 2)), (F(1, 2), 1)]), F(1, 10))


@pytest.mark.parametrize("eps", [0, 1, F(3, 2)])
def test_bad_epsilon(eps):
    with pytest.raises(ValueError):
        cover(example_set(), eps)


def test_component_outside_host():
    with pytest.raises(ValueError):
        interval_set((0, 1), [(F(1, 2), 2)])


def test_zero_length_components_dropped_and_touching_merged():
    E = interval_set((0, 1), [(F(1, 5), F(1, 5)), (F(1, 10), F(3, 10)), (F(3, 10), F(4, 10))])
    assert E.components == ((F(1, 10), F(2, 5)),)


def test_json_format():
    E = interval_set_from_json({"host": ["0", "1"], "components": [["0.1", "0.3"], ["3/5", "7/10"]]})
    assert E == example_set()
    assert interval_set_from_json(E.to_json()) == E


def test_verify_rejects_low_density():
    E = example_set()
    res = cover(E, F(1, 10))
    lo, hi = res.intervals[0]
    bad = CoverResult(((lo, hi + F(1, 20)),) + res.intervals[1:], res.epsilon)
    check = verify_cover(E, bad)
    assert not check and "density" in check.reason


def test_verify_rejects_full_density():
    E = example_set()
    res = cover(E, F(1, 10))
    bad = CoverResult(((F(1, 10), F(3, 10)),) + res.intervals[1:], res.epsilon)
    assert not verify_cover(E, bad)


def test_verify_rejects_overlap():
    E = example_set()
    res = CoverResult(((F(1, 10), F(1, 3)), (F(3, 10), F(71, 100)), (F(6, 10), F(71, 100))), F(1, 10))
    check = verify_cover(E, res)
    assert not check and "overlap" in check.reason


def test_verify_rejects_uncovered():
    E = example_set()
    res = cover(E, F(1, 10))
    assert not verify_cover(E, CoverResult(res.intervals[:1], res.epsilon))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(EPSILONS))
def test_round_trip(seed, eps):
    E = random_interval_set(random.Random(seed))
    if E.measure < 1:
        assert verify_cover(E, cover(E, eps))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_eta_monotone_in_epsilon(seed):
    E = random_interval_set(random.Random(seed))
    if E.measure >= 1:
        return
    etas = []
    for eps in (F(1, 2), F(1, 10), F(1, 100)):
        res = cover(E, eps)
        etas.append([(hi - lo) - (b - a) for (lo, hi), (a, b) in zip(res.intervals, E.components)])
    for big, small in zip(etas, etas[1:]):
        assert all(s <= b for s, b in zip(small, big))
