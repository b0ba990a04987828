"""Seeded weight generators and verification campaigns.

Every trial derives its own seed from ``(master_seed, trial_index)`` and uses
nothing else, so trials can run in any order or in parallel and any failure
can be replayed from the seed recorded in the report.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .a1 import a1_constant, check_theorem1
from .covering import CoverResult, cover, interval_set, verify_cover
from .majorization import (FlattenSpec, convex_dominates, flatten_levels, majorizes,
                           two_level_flatten)
from .sharp import (check_reverse_holder, critical_exponent, h_p, sharp_constant,
                    sharpness_gap, truncated_divergence)
from .weights import (Interval, PowerWeight, StepWeight, as_fraction, discretize_power,
                      integrate, make_step_weight, rearrange, weight_from_pieces)

SEED_ENV = "A1SHARP_SEED"
KINDS = ("uniform", "power-discretized", "shuffled-power", "multiplicative-walk")
CSV_FIELDS = ("campaign", "trial", "seed", "c", "p", "metric", "bound", "margin", "pass")


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "20240101"))


def trial_seed(master: int, trial: int) -> int:
    """64-bit seed for one trial, independent of every other trial."""
    ss = np.random.SeedSequence([master & (2**64 - 1), trial])
    return int(ss.generate_state(1, np.uint64)[0])


# -- generators -------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    kind: str = "uniform"
    pieces: int = 8
    value_cap: Fraction = Fraction(10)
    tau: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}; expected one of {KINDS}")
        if self.pieces < 1:
            raise ValueError("pieces must be >= 1")
        object.__setattr__(self, "value_cap", as_fraction(self.value_cap))
        if not self.value_cap > 1:
            raise ValueError("value_cap must exceed 1")
        if self.tau < 1:
            raise ValueError("tau must be >= 1")


def _random_breakpoints(rng: random.Random, n: int) -> list:
    lengths = [rng.randint(1, 8) for _ in range(n)]
    total = sum(lengths)
    bps = [Fraction(0)]
    for l in lengths:
        bps.append(bps[-1] + Fraction(l, total))
    return bps


def gen_weight(spec: GeneratorSpec) -> StepWeight:
    """Deterministic random step weight on ``(0, 1]``."""
    rng = random.Random(spec.seed)
    n, cap = spec.pieces, spec.value_cap
    if spec.kind == "uniform":
        vals = [1 + (cap - 1) * Fraction(rng.randint(0, 64), 64) for _ in range(n)]
        return make_step_weight(_random_breakpoints(rng, n), vals)
    if spec.kind == "multiplicative-walk":
        vals = [Fraction(1)]
        for _ in range(n - 1):
            step = Fraction(rng.randint(1, 4), rng.randint(1, 4))
            vals.append(min(max(vals[-1] * step, 1 / cap), cap))
        return make_step_weight(_random_breakpoints(rng, n), vals)
    power = discretize_power(PowerWeight(1.0, spec.tau), n, "geometric")
    if spec.kind == "power-discretized":
        return power
    pieces = power.pieces()
    rng.shuffle(pieces)
    return weight_from_pieces(pieces, 0)


def _draw_spec(rng: random.Random, kinds, max_pieces: int, cap, seed: int) -> GeneratorSpec:
    kind = rng.choice(list(kinds))
    tau = rng.uniform(1.0, 5.0)
    return GeneratorSpec(kind=kind, pieces=rng.randint(1, max_pieces), value_cap=cap,
                         tau=tau, seed=seed)


# -- campaigns --------------------------------------------------------------

@dataclass(frozen=True)
class CampaignConfig:
    trials: int = 100
    seed: int = 0
    pieces: int = 12
    kinds: tuple = ("uniform", "multiplicative-walk", "shuffled-power")
    value_cap: Fraction = Fraction(10)
    p_frac: float = 0.5
    # "interp": p = 1 + p_frac*(p_crit - 1);  "scale": p = max(1, p_frac*p_crit)
    p_rule: str = "interp"
    n_random: int = 10_000
    c: float = 2.0
    c_grid: tuple = (1.1, 1.5, 2.0, 4.0)
    p_fracs: tuple = (0.0, 0.5, 0.99)
    tol: float = 1e-9

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if self.pieces < 1:
            raise ValueError("pieces must be >= 1")
        if not 0 <= self.p_frac < 1:
            raise ValueError("p_frac must lie in [0, 1)")
        if self.p_rule not in ("interp", "scale"):
            raise ValueError(f"unknown p_rule {self.p_rule!r}")
        unknown = set(self.kinds) - set(KINDS)
        if unknown:
            raise ValueError(f"unknown generator kinds {sorted(unknown)}")


@dataclass
class TrialRow:
    campaign: str
    trial: int
    seed: int
    c: object
    p: object
    metric: object
    bound: object
    margin: float
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass
class CampaignReport:
    campaign: str
    trials: int
    passes: int
    failures: list
    worst_margin: float
    wall_time: float
    rows: list
    extras: dict = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return self.passes == self.trials


def exponent_for(c: float, frac: float, rule: str = "interp") -> float:
    """Exponent at position ``frac`` of the admissible range ``[1, c/(c-1))``."""
    pc = critical_exponent(c)
    if math.isinf(pc):
        return 1.0 + frac
    if rule == "scale":
        return max(1.0, frac * pc)
    return 1.0 + frac * (pc - 1.0)


def _thm1(cfg: CampaignConfig, trial: int, seed: int) -> TrialRow:
    rng = random.Random(seed)
    spec = _draw_spec(rng, cfg.kinds, cfg.pieces, cfg.value_cap, seed)
    w = gen_weight(spec)
    rep = check_theorem1(w)
    worst = max(rep.rearranged_constant, rep.anchored_constant)
    return TrialRow("thm1", trial, seed, rep.original_constant, "", worst,
                    rep.original_constant, float(rep.original_constant - worst), rep.passed,
                    {"kind": spec.kind, "weight": w.to_json(),
                     "rearranged_constant": str(rep.rearranged_constant),
                     "anchored_constant": str(rep.anchored_constant)})


def _thm2(cfg: CampaignConfig, trial: int, seed: int) -> TrialRow:
    rng = random.Random(seed)
    spec = _draw_spec(rng, cfg.kinds, cfg.pieces, cfg.value_cap, seed)
    w = gen_weight(spec)
    c = float(a1_constant(w).constant)
    p = exponent_for(c, cfg.p_frac, cfg.p_rule)
    rep = check_reverse_holder(w, p, n_random=cfg.n_random, seed=seed, c=c, tol=cfg.tol)
    bound = 1 + cfg.tol
    return TrialRow("thm2", trial, seed, c, p, rep.worst_ratio, bound, bound - rep.worst_ratio,
                    rep.passed, {"kind": spec.kind, "weight": w.to_json(),
                                 "worst_interval": [str(x) for x in rep.worst_interval]})


def _sharpness_grid(cfg: CampaignConfig) -> list:
    return [(c, f) for c in cfg.c_grid for f in cfg.p_fracs]


def _sharpness(cfg: CampaignConfig, trial: int, seed: int) -> TrialRow:
    c, frac = _sharpness_grid(cfg)[trial]
    p = exponent_for(c, frac)
    b = sharp_constant(c, p)
    rel_gap = sharpness_gap(c, p) / b
    ident = abs(b * h_p(p, c) - 1.0) if p > 1 else 0.0
    ok = rel_gap <= 1e-10 and ident <= 1e-12
    return TrialRow("sharpness", trial, seed, c, p, rel_gap, 1e-10, 1e-10 - rel_gap, ok,
                    {"identity_rel_diff": ident})


def _random_pair(rng: random.Random, max_pieces: int, cap: Fraction):
    """Pairs on ``(0, 1]``; half of them related by block averaging."""
    seed2 = rng.getrandbits(64)
    w2 = gen_weight(GeneratorSpec("uniform", rng.randint(1, max_pieces), cap, seed=seed2))
    if rng.random() < 0.5:
        w1 = gen_weight(GeneratorSpec("uniform", rng.randint(1, max_pieces), cap,
                                      seed=rng.getrandbits(64)))
        return w1, w2
    # average w2 over random blocks of consecutive pieces: majorized by w2
    pieces = w2.pieces()
    out = []
    k = 0
    while k < len(pieces):
        m = rng.randint(1, len(pieces) - k)
        block = pieces[k:k + m]
        length = sum(l for _, l in block)
        out.append((sum(v * l for v, l in block) / length, length))
        k += m
    if rng.random() < 0.5:
        j = rng.randrange(len(out))
        v, l = out[j]
        out[j] = (max(v + Fraction(rng.randint(-4, 4), 32), Fraction(1, 32)), l)
    return weight_from_pieces(out, 0), w2


def _majorization(cfg: CampaignConfig, trial: int, seed: int) -> TrialRow:
    rng = random.Random(seed)
    w1, w2 = _random_pair(rng, min(cfg.pieces, 8), cfg.value_cap)
    m = majorizes(w1, w2)
    d = convex_dominates(w1, w2)
    metric = 0 if m == d else 1
    return TrialRow("majorization", trial, seed, "", "", metric, 0, float(-metric), m == d,
                    {"majorizes": m, "convex_dominates": d,
                     "w1": w1.to_json(), "w2": w2.to_json()})


EPSILONS = (Fraction(1, 2), Fraction(1, 10), Fraction(1, 100))


def random_interval_set(rng: random.Random, max_components: int = 10, grid: int = 1000):
    k = rng.randint(1, max_components)
    pts = sorted(rng.sample(range(grid + 1), 2 * k))
    comps = [(Fraction(pts[2 * i], grid), Fraction(pts[2 * i + 1], grid)) for i in range(k)]
    return interval_set((0, 1), comps)


def perturb_cover(res: CoverResult, E, rng: random.Random) -> CoverResult:
    """Break a valid cover: collapse one interval onto its component (density 1)."""
    ivs = list(res.intervals)
    j = rng.randrange(len(ivs))
    lo, hi = ivs[j]
    comp = next((a, b) for a, b in E.components if lo <= a and b <= hi)
    ivs[j] = comp
    return CoverResult(tuple(ivs), res.epsilon)


def _cover(cfg: CampaignConfig, trial: int, seed: int) -> TrialRow:
    rng = random.Random(seed)
    E = random_interval_set(rng)
    eps = rng.choice(EPSILONS)
    if E.measure >= E.host.length:
        E = interval_set((0, 1), [(0, Fraction(1, 2))])
    res = cover(E, eps)
    check = verify_cover(E, res)
    rejected = not verify_cover(E, perturb_cover(res, E, rng))
    dens = min(E.overlap(lo, hi) / (hi - lo) for lo, hi in res.intervals)
    return TrialRow("cover", trial, seed, "", "", dens, 1 - eps, float(dens - (1 - eps)),
                    bool(check) and rejected,
                    {"epsilon": str(eps), "set": E.to_json(), "reason": check.reason,
                     "perturbed_rejected": rejected})


def _divergence(cfg: CampaignConfig, trial: int, seed: int) -> TrialRow:
    k = trial + 1
    pc = critical_exponent(cfg.c)
    _, moments, _ = truncated_divergence(cfg.c, [k])
    expected = (1.0 / cfg.c) ** pc * k * math.log(10)
    err = abs(float(moments[0]) - expected)
    return TrialRow("divergence", trial, seed, cfg.c, pc, float(moments[0]), expected,
                    1e-8 - err, err <= 1e-8, {"k": k})


def random_flatten_case(rng: random.Random, max_pieces: int = 8, cap=Fraction(10)):
    w = rearrange(gen_weight(GeneratorSpec("uniform", rng.randint(1, max_pieces), cap,
                                           seed=rng.getrandbits(64))))
    i = rng.randint(1, 63)
    j = rng.randint(1, min(i, 64 - i))
    return w, FlattenSpec(Fraction(i, 64), Fraction(j, 64))


def _half_constant(w: StepWeight, I: Interval) -> bool:
    # pieces meeting I with positive measure
    vals = [v for v, a, b in zip(w.values, w.breakpoints, w.breakpoints[1:])
            if a < I.hi and b > I.lo]
    return len(set(vals)) == 1


def flatten_checks(w: StepWeight, spec: FlattenSpec) -> dict:
    g = two_level_flatten(w, spec)
    d1, d2 = flatten_levels(w, spec)
    strict_expected = not (_half_constant(w, spec.left) and _half_constant(w, spec.right))
    m_w, m_g = w.moment(2), g.moment(2)
    return {
        "mass": g.total == w.total
                and integrate(g, spec.left) == integrate(w, spec.left)
                and integrate(g, spec.right) == integrate(w, spec.right),
        "ordered_levels": d2 <= d1,
        "nonincreasing": g.is_nonincreasing(),
        "majorized": majorizes(g, w),
        "contraction": (m_g < m_w) if strict_expected else (m_g == m_w),
        "drop": m_w - m_g,
    }


def _flatten(cfg: CampaignConfig, trial: int, seed: int) -> TrialRow:
    rng = random.Random(seed)
    w, spec = random_flatten_case(rng, min(cfg.pieces, 8), cfg.value_cap)
    chk = flatten_checks(w, spec)
    drop = chk.pop("drop")
    ok = all(chk.values())
    return TrialRow("flatten", trial, seed, "", 2, drop, 0, float(drop), ok,
                    {"weight": w.to_json(), "t0": str(spec.t0), "delta": str(spec.delta),
                     **chk})


CAMPAIGNS: dict[str, Callable] = {
    "thm1": _thm1,
    "thm2": _thm2,
    "sharpness": _sharpness,
    "majorization": _majorization,
    "cover": _cover,
    "divergence": _divergence,
    "flatten": _flatten,
}


def _trial_count(name: str, cfg: CampaignConfig) -> int:
    if name == "sharpness":
        return len(_sharpness_grid(cfg))
    return cfg.trials


def run_trial(name: str, cfg: CampaignConfig, trial: int, seed: Optional[int] = None) -> TrialRow:
    """One trial; ``seed`` defaults to the one derived from the master seed."""
    if name not in CAMPAIGNS:
        raise ValueError(f"unknown campaign {name!r}; expected one of {sorted(CAMPAIGNS)}")
    if seed is None:
        seed = trial_seed(cfg.seed, trial)
    return CAMPAIGNS[name](cfg, trial, seed)


def _run_chunk(args):
    name, cfg, indices = args
    return [run_trial(name, cfg, i) for i in indices]


def run_campaign(name: str, cfg: CampaignConfig, workers: int = 1) -> CampaignReport:
    """Run every trial of a campaign and aggregate; failures are recorded, never raised."""
    if name not in CAMPAIGNS:
        raise ValueError(f"unknown campaign {name!r}; expected one of {sorted(CAMPAIGNS)}")
    start = time.perf_counter()
    n = _trial_count(name, cfg)
    if workers > 1 and n > 1:
        chunks = [list(range(k, n, workers)) for k in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            rows = [r for part in pool.map(_run_chunk, [(name, cfg, c) for c in chunks])
                    for r in part]
        rows.sort(key=lambda r: r.trial)
    else:
        rows = [run_trial(name, cfg, i) for i in range(n)]
    failures = [{"trial": r.trial, "seed": r.seed, "metric": str(r.metric), **r.detail}
                for r in rows if not r.passed]
    extras = {}
    if name == "divergence" and n:
        _, _, slope = truncated_divergence(cfg.c, range(1, n + 1))
        extras = {"slope": slope,
                  "expected_slope": (1.0 / cfg.c) ** critical_exponent(cfg.c) * math.log(10)}
    if name == "majorization":
        extras = {"majorizes_true": sum(1 for r in rows if r.detail["majorizes"])}
    worst = min((r.margin for r in rows), default=None)
    return CampaignReport(name, n, n - len(failures), failures, worst,
                          time.perf_counter() - start, rows, extras)


# -- reporting --------------------------------------------------------------

def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def report_csv(report: CampaignReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for r in report.rows:
        writer.writerow([_cell(x) for x in (r.campaign, r.trial, r.seed, r.c, r.p, r.metric,
                                            r.bound, r.margin, r.passed)])
    return buf.getvalue()


def report_json(report: CampaignReport) -> str:
    doc = {
        "campaign": report.campaign,
        "trials": report.trials,
        "passes": report.passes,
        "failures": report.failures,
        "worst_margin": report.worst_margin,
        "wall_time": report.wall_time,
        "extras": report.extras,
    }
    return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"


def emit_report(report: CampaignReport, fmt: str, path) -> None:
    if fmt == "csv":
        text = report_csv(report)
    elif fmt == "json":
        text = report_json(report)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", newline="") as fh:
        fh.write(text)
