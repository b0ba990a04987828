"""Sharp reverse Hoelder constants, extremal power weights and their moments.

Everything here is binary64: exponents are real, so the constants cannot stay
rational.  Closed forms are used throughout to avoid quadrature near the
``t = 0`` singularity of the power weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .a1 import a1_constant
from .weights import Interval, PowerWeight, StepWeight

POLE_GUARD = 1e-9
RATIO_TOL = 1e-9


class ExponentOutOfRange(ValueError):
    """``p`` is outside ``[1, c/(c-1))`` (or too close to the pole)."""


@dataclass(frozen=True)
class SharpBound:
    c: float
    p: float
    p_crit: float
    constant: float


@dataclass(frozen=True)
class MomentPair:
    f: float
    F: float


@dataclass(frozen=True)
class ReverseHolderReport:
    c: float
    p: float
    worst_ratio: float
    worst_interval: Interval
    passed: bool
    n_intervals: int


def critical_exponent(c: float) -> float:
    """``c/(c-1)``; ``inf`` for ``c == 1``."""
    c = float(c)
    if c < 1:
        raise ValueError(f"A1 constants are >= 1, got {c}")
    if c == 1:
        return math.inf
    return c / (c - 1)


def _check_exponent(c: float, p: float) -> float:
    if p < 1:
        raise ExponentOutOfRange(f"p must be >= 1, got {p}")
    pc = critical_exponent(c)
    if p >= pc - POLE_GUARD:
        raise ExponentOutOfRange(
            f"p = {p} is not below the critical exponent c/(c-1) = {pc} for c = {c}")
    return pc


def sharp_constant(c: float, p: float) -> float:
    """Best constant ``1 / (c**(p-1) * (c + p - p*c))``."""
    c, p = float(c), float(p)
    _check_exponent(c, p)
    if p == 1:
        return 1.0
    return 1.0 / (c ** (p - 1) * (c + p - p * c))


def sharp_bound(c: float, p: float) -> SharpBound:
    return SharpBound(float(c), float(p), critical_exponent(c), sharp_constant(c, p))


def h_p(p: float, z: float) -> float:
    """``p*z**(p-1) - (p-1)*z**p`` on ``[1, p/(p-1)]``."""
    if not p > 1:
        raise ValueError(f"h_p needs p > 1, got {p}")
    if not 1 <= z <= p / (p - 1):
        raise ValueError(f"z = {z} outside [1, {p / (p - 1)}]")
    return p * z ** (p - 1) - (p - 1) * z ** p


def _h_p_prime(p: float, z: float) -> float:
    return p * (p - 1) * z ** (p - 2) * (1 - z)


def omega_p(p: float, y: float, bisect_width: float = 1e-8, newton_steps: int = 2) -> float:
    """Inverse of :func:`h_p`: the ``z`` in ``[1, p/(p-1)]`` with ``h_p(z) = y``.

    Bisection down to ``bisect_width`` followed by Newton polish steps
    clamped to the final bracket.  ``h_p`` is flat at ``z = 1``, which is
    why plain Newton is not used from the start.
    """
    if not p > 1:
        raise ValueError(f"omega_p needs p > 1, got {p}")
    if not 0 <= y <= 1:
        raise ValueError(f"y = {y} outside [0, 1]")
    zmax = p / (p - 1)
    if y == 1:
        return 1.0
    if y == 0:
        return zmax
    lo, hi = 1.0, zmax  # h_p(lo) > y > h_p(hi)
    while hi - lo > bisect_width:
        mid = 0.5 * (lo + hi)
        hm = h_p(p, mid)
        if hm == y:
            return mid
        if hm > y:
            lo = mid
        else:
            hi = mid
    z = 0.5 * (lo + hi)
    for _ in range(newton_steps):
        d = _h_p_prime(p, z)
        if d == 0:
            break
        # the bracket is already tiny, so clamping cannot stall convergence
        z = min(max(z - (h_p(p, z) - y) / d, lo), hi)
    return z


def extremal_weight(f: float, tau: float) -> PowerWeight:
    """Power weight of mass ``f`` whose Hardy average is exactly ``tau`` times itself."""
    return PowerWeight(float(f), float(tau))


def power_moment(pw: PowerWeight, p: float, eps: float = 0.0) -> float:
    """``int_eps^1 g**p`` in closed form; ``inf`` when it diverges at 0."""
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    if p == 1:
        return pw.mass - pw.cumulative(eps)
    coef = (pw.mass / pw.tau) ** p
    # integrand coef * t**(x - 1)
    x = 1.0 + p / pw.tau - p
    if eps == 0:
        return coef / x if x > 0 else math.inf
    log_eps = math.log(eps)
    if x == 0:
        return -coef * log_eps
    return -coef * math.expm1(x * log_eps) / x


def moment_pair(w: StepWeight, p: float) -> MomentPair:
    return MomentPair(float(w.total), float(w.moment(p)))


def sharpness_gap(c: float, p: float) -> float:
    """Distance between the extremal moment and the sharp constant (unit mass)."""
    c, p = float(c), float(p)
    _check_exponent(c, p)
    return abs(power_moment(extremal_weight(1.0, c), p, 0.0) - sharp_constant(c, p))


def truncated_divergence(c: float, decades: Iterable[int], f: float = 1.0):
    """Truncated critical moments at ``eps = 10**-k`` and their log-slope.

    At ``p = c/(c-1)`` the extremal integrand is ``(f/c)**p / t`` so the
    truncated moment is ``(f/c)**p * k * ln 10``.  Returns
    ``(ks, moments, slope)`` with the least-squares slope in ``k``.
    """
    pc = critical_exponent(c)
    pw = extremal_weight(f, c)
    ks = np.array(list(decades), dtype=float)
    moments = np.array([power_moment(pw, pc, 10.0 ** -k) for k in ks])
    slope = np.polyfit(ks, moments, 1)[0] if len(ks) > 1 else math.nan
    return ks, moments, float(slope)


# -- reverse Hoelder over a step weight --------------------------------------

def aligned_intervals(w: StepWeight) -> list:
    bps = w.breakpoints
    return [Interval(bps[i], bps[j]) for i in range(len(bps)) for j in range(i + 1, len(bps))]


def random_intervals(w: StepWeight, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` random subintervals as an ``(n, 2)`` float array of endpoints."""
    lo, L = float(w.start), float(w.length)
    pts = np.sort(rng.random((n, 2)), axis=1) * L + lo
    return pts[pts[:, 0] < pts[:, 1]]


def reverse_holder_ratios(w: StepWeight, p: float, c: float, ends: np.ndarray) -> np.ndarray:
    """``LHS/RHS`` of the sharp reverse Hoelder bound on each interval.

    Both sides are homogeneous of degree ``p``, so each interval is normalised
    by its own average before taking powers; that keeps ``v**p`` in range
    even when ``p`` is in the hundreds.
    """
    t = np.array([float(b) for b in w.breakpoints])
    v = np.array([float(x) for x in w.values])
    a, b = ends[:, 0], ends[:, 1]
    overlap = np.clip(np.minimum(b[:, None], t[None, 1:]) - np.maximum(a[:, None], t[None, :-1]),
                      0.0, None)
    length = b - a
    avg = (overlap @ v) / length
    lhs = (overlap * (v[None, :] / avg[:, None]) ** p).sum(axis=1) / length
    if p == 1:
        return lhs
    # 1 / B(c, p); c == 1 means a constant weight, where any p gives ratio 1
    inv_b = c ** (p - 1) * (c + p - p * c)
    return lhs * inv_b


def check_reverse_holder(w: StepWeight, p: float,
                         intervals: Optional[Sequence[Interval]] = None,
                         n_random: int = 10_000, seed: int = 0,
                         c: Optional[float] = None,
                         tol: float = RATIO_TOL) -> ReverseHolderReport:
    """Worst ratio of the sharp reverse Hoelder inequality over candidate intervals.

    The default candidates are all breakpoint-aligned intervals plus
    ``n_random`` seeded uniform ones.
    """
    if c is None:
        c = float(a1_constant(w).constant)
    if c > 1:
        _check_exponent(c, p)
    elif p < 1:
        raise ExponentOutOfRange(f"p must be >= 1, got {p}")
    if intervals is None:
        cands = aligned_intervals(w)
        ends = np.array([[float(I.lo), float(I.hi)] for I in cands])
        extra = random_intervals(w, n_random, np.random.default_rng(seed))
        ends = np.vstack([ends, extra]) if len(extra) else ends
    else:
        ends = np.array([[float(I.lo), float(I.hi)] for I in intervals])
    ratios = reverse_holder_ratios(w, p, c, ends)
    k = int(np.argmax(ratios))
    worst = float(ratios[k])
    lo, hi = ends[k]
    return ReverseHolderReport(c=c, p=float(p), worst_ratio=worst,
                               worst_interval=Interval(lo, hi),
                               passed=worst <= 1 + tol, n_intervals=len(ends))
