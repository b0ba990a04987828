"""Exact step weights, power weights and their basic operations.

A :class:`StepWeight` is a positive piecewise-constant function on a bounded
interval ``(t_0, t_n]``.  Breakpoints and values are :class:`fractions.Fraction`
so that integrals, essential infima and rearrangements are exact.  Pieces are
left-continuous: the weight equals ``values[k]`` on ``(t_k, t_{k+1}]``.

:class:`PowerWeight` is the family ``(f/tau) * t**(-1 + 1/tau)`` on ``(0, 1]``.
Anything involving real exponents is done in binary64.
"""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from numbers import Rational
from typing import Iterable, Sequence, Union

RationalLike = Union[int, str, Fraction, Rational]


def as_fraction(x) -> Fraction:
    """Convert ``x`` to a Fraction without going through a lossy float.

    Strings may be decimals (``"0.25"``) or ``"p/q"``.  Floats are converted
    exactly (their binary expansion), never rounded to a nearby decimal.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, float, str, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)`` with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if not lo < hi:
            raise ValueError(f"interval needs lo < hi, got ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __str__(self):
        return f"({self.lo}, {self.hi})"


@dataclass(frozen=True, eq=True)
class StepWeight:
    """Positive left-continuous step function.

    Use :func:`make_step_weight` to build one from arbitrary rational-like
    input; the constructor itself expects tuples of Fractions and validates
    them.
    """

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bps, vals = self.breakpoints, self.values
        if len(vals) < 1:
            raise ValueError("a step weight needs at least one piece")
        if len(bps) != len(vals) + 1:
            raise ValueError(
                f"expected {len(vals) + 1} breakpoints for {len(vals)} values, "
                f"got {len(bps)}")
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise ValueError(f"breakpoints must be strictly increasing ({a} >= {b})")
        for v in vals:
            if not v > 0:
                raise ValueError(f"weight values must be positive, got {v}")
        # prefix[k] = integral from t_0 to t_k
        object.__setattr__(self, "_prefix", tuple(accumulate(
            (v * (b - a) for v, a, b in zip(vals, bps, bps[1:])),
            initial=Fraction(0))))

    # -- shape -------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def start(self) -> Fraction:
        return self.breakpoints[0]

    @property
    def end(self) -> Fraction:
        return self.breakpoints[-1]

    @property
    def length(self) -> Fraction:
        return self.end - self.start

    @property
    def domain(self) -> Interval:
        return Interval(self.start, self.end)

    @property
    def prefix(self) -> tuple:
        return self._prefix

    @property
    def total(self) -> Fraction:
        return self._prefix[-1]

    def lengths(self) -> list:
        bps = self.breakpoints
        return [b - a for a, b in zip(bps, bps[1:])]

    def pieces(self) -> list:
        """``(value, length)`` pairs in domain order."""
        return list(zip(self.values, self.lengths()))

    def is_nonincreasing(self) -> bool:
        return all(a >= b for a, b in zip(self.values, self.values[1:]))

    def is_constant(self) -> bool:
        return len(set(self.values)) == 1

    # -- evaluation --------------------------------------------------------
    def piece_index(self, t) -> int:
        """Index k with t in (t_k, t_{k+1}]; t_0 itself maps to piece 0."""
        t = as_fraction(t)
        if t < self.start or t > self.end:
            raise ValueError(f"{t} outside domain [{self.start}, {self.end}]")
        k = bisect.bisect_left(self.breakpoints, t) - 1
        return max(k, 0)

    def __call__(self, t) -> Fraction:
        return self.values[self.piece_index(t)]

    def cumulative(self, t) -> Fraction:
        """Integral of the weight from the domain start to ``t``."""
        t = as_fraction(t)
        k = self.piece_index(t)
        return self._prefix[k] + self.values[k] * (t - self.breakpoints[k])

    def scaled(self, factor) -> "StepWeight":
        factor = as_fraction(factor)
        return StepWeight(self.breakpoints, tuple(v * factor for v in self.values))

    def canonical(self) -> "StepWeight":
        """Same function with adjacent equal values merged."""
        bps = [self.breakpoints[0]]
        vals = []
        for v, b in zip(self.values, self.breakpoints[1:]):
            if vals and vals[-1] == v:
                bps[-1] = b
            else:
                vals.append(v)
                bps.append(b)
        return StepWeight(tuple(bps), tuple(vals))

    def moment(self, p) -> Union[Fraction, float]:
        """Integral of ``w**p``; exact when ``p`` is an int."""
        if isinstance(p, int):
            return sum((v ** p * l for v, l in self.pieces()), Fraction(0))
        return math.fsum(float(v) ** p * float(l) for v, l in self.pieces())

    def to_json(self) -> dict:
        return {"breakpoints": [str(b) for b in self.breakpoints],
                "values": [str(v) for v in self.values]}

    def __str__(self):
        bps = ", ".join(str(b) for b in self.breakpoints)
        vals = ", ".join(str(v) for v in self.values)
        return f"StepWeight([{bps}], [{vals}])"


@dataclass(frozen=True)
class PowerWeight:
    """``g(t) = (mass/tau) * t**(-1 + 1/tau)`` on ``(0, 1]``."""

    mass: float
    tau: float

    def __post_init__(self):
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not self.tau >= 1:
            raise ValueError(f"tau must be >= 1, got {self.tau}")

    @property
    def exponent(self) -> float:
        return -1.0 + 1.0 / self.tau

    def __call__(self, t: float) -> float:
        return self.mass / self.tau * t ** self.exponent

    def cumulative(self, t: float) -> float:
        """Closed-form integral over ``(0, t]``."""
        return self.mass * t ** (1.0 / self.tau)

    def hardy_average(self, t: float) -> float:
        return self.cumulative(t) / t


@dataclass(frozen=True)
class DistributionPoint:
    level: Fraction
    measure: Fraction


def make_step_weight(breakpoints: Iterable, values: Iterable) -> StepWeight:
    """Build a validated :class:`StepWeight` from rational-like sequences."""
    bps = tuple(as_fraction(b) for b in breakpoints)
    vals = tuple(as_fraction(v) for v in values)
    return StepWeight(bps, vals)


def constant_weight(value, lo=0, hi=1) -> StepWeight:
    return make_step_weight([lo, hi], [value])


def weight_from_pieces(pieces: Sequence, start=0) -> StepWeight:
    """Build a weight from ``(value, length)`` pairs laid end to end."""
    bps = [as_fraction(start)]
    for _, length in pieces:
        bps.append(bps[-1] + as_fraction(length))
    return make_step_weight(bps, [v for v, _ in pieces])


def _check_inside(w: StepWeight, I: Interval):
    if I.lo < w.start or I.hi > w.end:
        raise ValueError(f"interval {I} outside domain ({w.start}, {w.end})")


def integrate(w: StepWeight, I: Interval) -> Fraction:
    """Exact integral of ``w`` over ``I``."""
    _check_inside(w, I)
    return w.cumulative(I.hi) - w.cumulative(I.lo)


def average(w: StepWeight, I: Interval) -> Fraction:
    return integrate(w, I) / I.length


def essinf(w: StepWeight, I: Interval) -> Fraction:
    """Smallest value among pieces meeting ``I`` in positive measure."""
    _check_inside(w, I)
    bps = w.breakpoints
    first = bisect.bisect_right(bps, I.lo) - 1
    last = bisect.bisect_left(bps, I.hi) - 1
    return min(w.values[first:last + 1])


def rearrange(w: StepWeight) -> StepWeight:
    """Non-increasing rearrangement on ``(0, |domain|]``.

    Pieces are sorted by value (descending) and adjacent equal values
    merged, so the result is canonical.
    """
    merged = []  # [value, length]
    for v, l in sorted(w.pieces(), key=lambda vl: vl[0], reverse=True):
        if merged and merged[-1][0] == v:
            merged[-1][1] += l
        else:
            merged.append([v, l])
    bps = [Fraction(0)]
    for _, l in merged:
        bps.append(bps[-1] + l)
    return StepWeight(tuple(bps), tuple(v for v, _ in merged))


def distribution(w: StepWeight, level) -> Fraction:
    """Measure of ``{x : w(x) > level}``."""
    level = as_fraction(level)
    if level < 0:
        raise ValueError("level must be non-negative")
    return sum((l for v, l in w.pieces() if v > level), Fraction(0))


def distribution_function(w: StepWeight) -> list:
    """Distribution values at every distinct level of ``w`` and at 0."""
    levels = sorted(set(w.values) | {Fraction(0)})
    return [DistributionPoint(lam, distribution(w, lam)) for lam in levels]


def discretize_power(pw: PowerWeight, n: int, scheme: str = "geometric",
                     ratio=Fraction(1, 2)) -> StepWeight:
    """Cell averages of a power weight on ``n`` cells of ``(0, 1]``.

    ``uniform`` uses cells ``k/n``; ``geometric`` uses breakpoints
    ``0, ratio**(n-1), ..., ratio, 1`` which resolve the singularity at 0.
    Values are binary64 averages from the closed-form antiderivative,
    stored as exact Fractions of those floats.
    """
    if n < 1:
        raise ValueError("need at least one cell")
    if pw.tau == 1:
        return constant_weight(Fraction(pw.mass))
    if scheme == "uniform":
        bps = [Fraction(k, n) for k in range(n + 1)]
    elif scheme == "geometric":
        ratio = as_fraction(ratio)
        if not 0 < ratio < 1:
            raise ValueError("geometric ratio must lie in (0, 1)")
        bps = [Fraction(0)] + [ratio ** (n - 1 - k) for k in range(n)]
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    masses = [pw.cumulative(float(b)) for b in bps]
    vals = [Fraction((hi - lo) / float(b - a))
            for lo, hi, a, b in zip(masses, masses[1:], bps, bps[1:])]
    return StepWeight(tuple(bps), tuple(vals))


# -- file formats -----------------------------------------------------------

def weight_from_json(doc: dict) -> StepWeight:
    try:
        return make_step_weight(doc["breakpoints"], doc["values"])
    except KeyError as exc:
        raise ValueError(f"weight document missing key {exc}") from None


def load_weight(path) -> StepWeight:
    with open(path) as fh:
        return weight_from_json(json.load(fh))
