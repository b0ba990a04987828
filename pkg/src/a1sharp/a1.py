"""A1 constants of step weights.

The A1 constant is the supremum of ``average(I) / essinf(I)`` over all
subintervals ``I``.  For a step weight the intervals split into finitely many
cells: intervals whose positive-measure pieces are exactly ``i..j`` have
``a`` in ``[t_i, t_{i+1})`` and ``b`` in ``(t_j, t_{j+1}]``.  On such a cell
the essential infimum is the constant ``min(v_i..v_j)`` and the average is a
ratio of affine functions of ``(a, b)``, monotone along every edge of the
closed rectangle, so the supremum over the cell sits at one of its corners.
The corner ``a == b`` only occurs for ``j == i + 1`` and its edge limits are
``v_i`` and ``v_{i+1}``, which the neighbouring corners already produce.
Hence an exact O(n^2) corner enumeration gives the supremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .weights import Interval, StepWeight, rearrange


@dataclass(frozen=True)
class A1Report:
    constant: Fraction
    witness: Interval
    witness_cell: tuple  # 0-based piece indices (i, j)


@dataclass(frozen=True)
class Theorem1Report:
    original_constant: Fraction
    rearranged_constant: Fraction
    anchored_constant: Fraction
    passed: bool


def a1_constant(w: StepWeight) -> A1Report:
    """Least ``c`` with ``average(I) <= c * essinf(I)`` for every subinterval.

    Ties keep the first maximiser in (i, j, corner) lexicographic order, so
    the result does not depend on how cells are enumerated.
    """
    bps, vals, prefix = w.breakpoints, w.values, w.prefix
    n = w.n
    best = Fraction(1)
    best_witness = (bps[0], bps[1])
    best_cell = (0, 0)
    for i in range(n):
        m = vals[i]
        for j in range(i, n):
            if vals[j] < m:
                m = vals[j]
            for a_idx in (i, i + 1):
                for b_idx in (j, j + 1):
                    a, b = bps[a_idx], bps[b_idx]
                    if not a < b:
                        continue
                    # breakpoints are corners, so the integral is a prefix difference
                    ratio = (prefix[b_idx] - prefix[a_idx]) / ((b - a) * m)
                    if ratio > best:
                        best = ratio
                        best_witness = (a, b)
                        best_cell = (i, j)
    return A1Report(best, Interval(*best_witness), best_cell)


def hardy_constant(w: StepWeight, require_nonincreasing: bool = True) -> Fraction:
    """Least ``c`` with ``(1/t) * int_0^t w <= c * w(t)`` for all t.

    On each piece the left side decreases in ``t`` (for a non-increasing
    weight) while ``w(t)`` is constant, so only the left ends of pieces
    matter.
    """
    if require_nonincreasing and not w.is_nonincreasing():
        raise ValueError("hardy_constant expects a non-increasing weight")
    bps, vals, prefix = w.breakpoints, w.values, w.prefix
    best = Fraction(1)
    for k in range(1, w.n):
        ratio = prefix[k] / ((bps[k] - bps[0]) * vals[k])
        if ratio > best:
            best = ratio
    return best


def check_theorem1(w: StepWeight) -> Theorem1Report:
    c = a1_constant(w).constant
    ws = rearrange(w)
    c_star = a1_constant(ws).constant
    h = hardy_constant(ws)
    return Theorem1Report(c, c_star, h, c_star <= c and h <= c)


def _scaled_grid(w: StepWeight, grid: int):
    """Integer coordinates for ``w`` whose breakpoints land on integers.

    Returns ``(scale, ticks)`` where position ``x`` maps to
    ``(x - start) * scale`` and ``ticks`` are the breakpoints in that frame.
    """
    den = math.lcm(*((b - w.start).denominator for b in w.breakpoints))
    scale = den * grid
    ticks = [int((b - w.start) * scale) for b in w.breakpoints]
    return scale, ticks


def sampled_ratio_check(w: StepWeight, n_intervals: int, rng: np.random.Generator,
                        constant: Fraction | None = None, grid: int = 1 << 20):
    """Check ``average/essinf <= constant`` on random rational subintervals.

    Endpoints are drawn uniformly from a fine rational grid.  All coordinates
    are integers below 2**53 so overlaps are computed exactly in binary64;
    the only float error is in summing ``n`` positive products, which bounds
    the relative ratio error far below ``1e-12``.  Intervals whose float
    ratio is within that margin of the constant are re-checked with
    Fractions, so the verdict is exact.

    Returns ``(violations, max_ratio)``; ``max_ratio`` is the largest sampled
    ratio as a float and is informational only.
    """
    if constant is None:
        constant = a1_constant(w).constant
    scale, ticks = _scaled_grid(w, grid)
    top = ticks[-1]
    if top >= 1 << 53:
        raise ValueError("weight denominators too large for the exact float filter")
    pts = rng.integers(0, top + 1, size=(n_intervals, 2))
    pts.sort(axis=1)
    pts = pts[pts[:, 0] < pts[:, 1]]
    a = pts[:, 0].astype(np.float64)
    b = pts[:, 1].astype(np.float64)
    t = np.asarray(ticks, dtype=np.float64)
    v = np.array([float(x) for x in w.values])
    overlap = np.clip(np.minimum(b[:, None], t[None, 1:]) - np.maximum(a[:, None], t[None, :-1]),
                      0.0, None)
    hit = overlap > 0
    mins = np.where(hit, v[None, :], np.inf).min(axis=1)
    ratio = (overlap @ v) / ((b - a) * mins)
    single = hit.sum(axis=1) == 1  # ratio is exactly 1 inside one piece
    suspect = np.nonzero(~single & (ratio >= float(constant) * (1 - 1e-12)))[0]

    violations = 0
    vals = w.values
    for idx in suspect:
        ai, bi = int(pts[idx, 0]), int(pts[idx, 1])
        num = Fraction(0)
        m = None
        for k in range(w.n):
            ov = min(bi, ticks[k + 1]) - max(ai, ticks[k])
            if ov > 0:
                num += vals[k] * ov
                m = vals[k] if m is None else min(m, vals[k])
        if num / ((bi - ai) * m) > constant:
            violations += 1
    return violations, float(ratio.max()) if len(ratio) else 1.0
