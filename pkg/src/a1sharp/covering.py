"""Covering a finite union of intervals by intervals of high, sub-unit density."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .weights import Interval, as_fraction


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of closed intervals inside ``host``; stored merged and sorted."""

    host: Interval
    components: tuple

    def __post_init__(self):
        comps = sorted((as_fraction(a), as_fraction(b)) for a, b in self.components)
        merged = []
        for a, b in comps:
            if b < a:
                raise ValueError(f"component [{a}, {b}] has negative length")
            if a == b:
                continue  # null set
            if a < self.host.lo or b > self.host.hi:
                raise ValueError(f"component [{a}, {b}] not inside host {self.host}")
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        object.__setattr__(self, "components", tuple(merged))

    @property
    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.components), Fraction(0))

    def overlap(self, lo: Fraction, hi: Fraction) -> Fraction:
        """Measure of ``[lo, hi]`` intersected with the set."""
        return sum((max(min(b, hi) - max(a, lo), 0) for a, b in self.components), Fraction(0))

    def to_json(self) -> dict:
        return {"host": [str(self.host.lo), str(self.host.hi)],
                "components": [[str(a), str(b)] for a, b in self.components]}


@dataclass(frozen=True)
class CoverResult:
    intervals: tuple  # of (lo, hi) Fraction pairs
    epsilon: Fraction


@dataclass(frozen=True)
class CoverCheck:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def interval_set(host, components: Sequence) -> IntervalSet:
    lo, hi = host
    return IntervalSet(Interval(lo, hi), tuple(components))


def cover(E: IntervalSet, eps) -> CoverResult:
    """Intervals ``I_k`` with ``(1-eps)|I_k| <= |I_k & E| < |I_k|`` covering ``E``.

    Each merged component ``[a, b]`` is stretched by ``eta`` into the gap on
    its right (on its left when it ends at the host boundary), with
    ``eta = min(eps*(b-a)/(1-eps), half the gap)``.
    """
    eps = as_fraction(eps)
    if not 0 < eps < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    host = E.host
    if E.measure >= host.length:
        raise ValueError("E fills the host interval; no interval can have density < 1")
    comps = E.components
    out = []
    for k, (a, b) in enumerate(comps):
        want = eps * (b - a) / (1 - eps)
        if b < host.hi:
            right = comps[k + 1][0] if k + 1 < len(comps) else host.hi
            eta = min(want, (right - b) / 2)
            out.append((a, b + eta))
        else:
            left = comps[k - 1][1] if k > 0 else host.lo
            eta = min(want, (a - left) / 2)
            out.append((a - eta, b))
    return CoverResult(tuple(out), eps)


def verify_cover(E: IntervalSet, result: CoverResult) -> CoverCheck:
    """Exact check of containment, disjoint interiors, coverage and densities."""
    eps = result.epsilon
    ivs = sorted(result.intervals)
    host = E.host
    for lo, hi in ivs:
        if not lo < hi:
            return CoverCheck(False, f"degenerate interval [{lo}, {hi}]")
        if lo < host.lo or hi > host.hi:
            return CoverCheck(False, f"[{lo}, {hi}] leaves the host {host}")
    for (_, h1), (l2, _) in zip(ivs, ivs[1:]):
        if l2 < h1:
            return CoverCheck(False, f"interiors overlap near {l2}")
    for a, b in E.components:
        # the union is a disjoint sorted list, so walk it across [a, b]
        pos = a
        for lo, hi in ivs:
            if lo <= pos < hi:
                pos = hi
        if pos < b:
            return CoverCheck(False, f"component [{a}, {b}] not covered beyond {pos}")
    for lo, hi in ivs:
        length = hi - lo
        inside = E.overlap(lo, hi)
        if inside < (1 - eps) * length:
            return CoverCheck(False, f"[{lo}, {hi}] density {inside / length} below {1 - eps}")
        if not inside < length:
            return CoverCheck(False, f"[{lo}, {hi}] has full density")
    return CoverCheck(True)


def interval_set_from_json(doc: dict) -> IntervalSet:
    try:
        return interval_set(doc["host"], doc["components"])
    except KeyError as exc:
        raise ValueError(f"interval-set document missing key {exc}") from None


def load_interval_set(path) -> IntervalSet:
    with open(path) as fh:
        return interval_set_from_json(json.load(fh))
