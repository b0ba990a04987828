"""Majorization of rearrangements, hinge-function domination and two-level flattening."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .weights import Interval, StepWeight, as_fraction, integrate


@dataclass(frozen=True)
class HingeFunction:
    """``G(t) = max(t - threshold, 0)``."""

    threshold: Fraction

    def __post_init__(self):
        lam = as_fraction(self.threshold)
        if lam < 0:
            raise ValueError("hinge threshold must be non-negative")
        object.__setattr__(self, "threshold", lam)

    def __call__(self, t):
        return max(t - self.threshold, 0)


@dataclass(frozen=True)
class FlattenSpec:
    """Window ``(t0 - delta, t0 + delta)`` to be averaged on each half."""

    t0: Fraction
    delta: Fraction

    def __post_init__(self):
        t0, delta = as_fraction(self.t0), as_fraction(self.delta)
        if not delta > 0:
            raise ValueError("delta must be positive")
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "delta", delta)

    @property
    def left(self) -> Interval:
        return Interval(self.t0 - self.delta, self.t0)

    @property
    def right(self) -> Interval:
        return Interval(self.t0, self.t0 + self.delta)


def _same_length(w1: StepWeight, w2: StepWeight):
    if w1.length != w2.length:
        raise ValueError(f"domain lengths differ: {w1.length} vs {w2.length}")


def _integer_pieces(w1: StepWeight, w2: StepWeight):
    """Both weights as ``(value, length)`` integer pairs on a common scale.

    Lengths are multiplied by the lcm of their denominators and values by
    the lcm of theirs; every comparison below is invariant under that.
    """
    lens1, lens2 = w1.lengths(), w2.lengths()
    D = math.lcm(*(l.denominator for l in lens1 + lens2))
    E = math.lcm(*(v.denominator for v in w1.values + w2.values))

    def scale(values, lengths):
        return [(v.numerator * (E // v.denominator), l.numerator * (D // l.denominator))
                for v, l in zip(values, lengths)]
    return scale(w1.values, lens1), scale(w2.values, lens2)


def _sorted_prefix(pieces):
    """Breakpoints, values and prefix integrals of the decreasing rearrangement."""
    pieces = sorted(pieces, reverse=True)
    bps, prefix = [0], [0]
    for v, l in pieces:
        bps.append(bps[-1] + l)
        prefix.append(prefix[-1] + v * l)
    return bps, [v for v, _ in pieces], prefix


def _prefix_walk(bps, vals, prefix, points) -> list:
    """Prefix integrals at sorted ``points`` by a single linear pass."""
    out = []
    k = 0
    for t in points:
        while bps[k + 1] < t:
            k += 1
        out.append(prefix[k] + vals[k] * (t - bps[k]))
    return out


def majorizes(w1: StepWeight, w2: StepWeight) -> bool:
    """True iff ``int_0^t w1* <= int_0^t w2*`` for every ``t``.

    Both prefix functions are piecewise affine with kinks only at the
    breakpoints of the rearrangements, so their difference is affine between
    consecutive points of the merged breakpoint set and its sign can only
    change there.  Checking the merged breakpoints is therefore exact.
    """
    _same_length(w1, w2)
    p1, p2 = _integer_pieces(w1, w2)
    r1, r2 = _sorted_prefix(p1), _sorted_prefix(p2)
    points = sorted(set(r1[0][1:]) | set(r2[0][1:]))
    return all(a <= b for a, b in zip(_prefix_walk(*r1, points), _prefix_walk(*r2, points)))


def hinge_integral(w: StepWeight, h: HingeFunction | Fraction | int) -> Fraction:
    """``int max(w - threshold, 0)``."""
    lam = h.threshold if isinstance(h, HingeFunction) else as_fraction(h)
    return sum(((v - lam) * l for v, l in w.pieces() if v > lam), Fraction(0))


def _hinge_walk(pieces, levels) -> list:
    """Hinge integrals at ascending ``levels`` in one pass."""
    pieces = sorted(pieces)
    mass_above = sum(v * l for v, l in pieces)
    len_above = sum(l for _, l in pieces)
    out = []
    k = 0
    for lam in levels:
        while k < len(pieces) and pieces[k][0] <= lam:
            v, l = pieces[k]
            mass_above -= v * l
            len_above -= l
            k += 1
        out.append(mass_above - lam * len_above)
    return out


def convex_dominates(w1: StepWeight, w2: StepWeight) -> bool:
    """True iff ``int G(w1) <= int G(w2)`` for every convex increasing ``G >= 0``.

    Such ``G`` are limits of non-negative combinations of hinges and a
    constant, and the hinge integrals are piecewise linear in the threshold
    with kinks at the weight values, so thresholds in the merged value set
    together with 0 decide every case.
    """
    _same_length(w1, w2)
    p1, p2 = _integer_pieces(w1, w2)
    levels = sorted({v for v, _ in p1} | {v for v, _ in p2} | {0})
    return all(a <= b for a, b in zip(_hinge_walk(p1, levels), _hinge_walk(p2, levels)))


def flatten_levels(w: StepWeight, spec: FlattenSpec) -> tuple:
    """Averages ``(d1, d2)`` of ``w`` on the left and right window halves."""
    return (integrate(w, spec.left) / spec.delta,
            integrate(w, spec.right) / spec.delta)


def two_level_flatten(w: StepWeight, spec: FlattenSpec) -> StepWeight:
    """Replace ``w`` on each window half by its average there.

    The result is canonical (adjacent equal values merged).
    """
    if not w.is_nonincreasing():
        raise ValueError("two_level_flatten expects a non-increasing weight")
    lo, mid, hi = spec.t0 - spec.delta, spec.t0, spec.t0 + spec.delta
    if lo < w.start or hi > w.end:
        raise ValueError(f"window ({lo}, {hi}) outside domain ({w.start}, {w.end})")
    d1, d2 = flatten_levels(w, spec)
    bps = [w.start]
    vals = []
    for v, b in zip(w.values, w.breakpoints[1:]):
        if b <= lo:
            vals.append(v)
            bps.append(b)
        else:
            break
    if bps[-1] < lo:
        vals.append(w(lo))
        bps.append(lo)
    vals += [d1, d2]
    bps += [mid, hi]
    for v, a, b in zip(w.values, w.breakpoints, w.breakpoints[1:]):
        if b > hi:
            vals.append(v)
            bps.append(b)
    return StepWeight(tuple(bps), tuple(vals)).canonical()
