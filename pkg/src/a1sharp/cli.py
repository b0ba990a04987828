"""Command line entry point: ``a1sharp <command> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .a1 import a1_constant, check_theorem1
from .covering import cover, load_interval_set, verify_cover
from .harness import CAMPAIGNS, CampaignConfig, default_seed, emit_report, run_campaign
from .sharp import critical_exponent, h_p, omega_p, sharp_constant, truncated_divergence
from .weights import load_weight, rearrange


def _write_table(rows: list, fmt: str, out):
    """Write a list of flat dicts as CSV or JSON to ``out`` (path or None for stdout)."""
    if fmt == "json":
        text = json.dumps(rows if len(rows) != 1 else rows[0], indent=2, sort_keys=True,
                          default=str) + "\n"
    else:
        buf = io.StringIO()
        if rows:
            writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        text = buf.getvalue()
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_a1(args):
    w = load_weight(args.weight)
    rep = a1_constant(w)
    t1 = check_theorem1(w)
    _write_table([{
        "constant": str(rep.constant),
        "constant_float": float(rep.constant),
        "witness_lo": str(rep.witness.lo),
        "witness_hi": str(rep.witness.hi),
        "cell_i": rep.witness_cell[0],
        "cell_j": rep.witness_cell[1],
        "rearranged_constant": str(t1.rearranged_constant),
        "anchored_constant": str(t1.anchored_constant),
        "theorem1_pass": t1.passed,
    }], args.format, args.out)


def cmd_rearrange(args):
    ws = rearrange(load_weight(args.weight))
    if args.format == "json":
        _write_table([ws.to_json()], "json", args.out)
    else:
        rows = [{"lo": str(a), "hi": str(b), "value": str(v)}
                for v, a, b in zip(ws.values, ws.breakpoints, ws.breakpoints[1:])]
        _write_table(rows, "csv", args.out)


def cmd_sharp(args):
    c, p = args.c, args.p
    row = {"c": c, "p": p, "p_crit": critical_exponent(c), "constant": sharp_constant(c, p)}
    if p > 1:
        row["h_p_of_c"] = h_p(p, c)
    _write_table([row], args.format, args.out)


def cmd_omega(args):
    z = omega_p(args.p, args.y)
    _write_table([{"p": args.p, "y": args.y, "omega": z,
                   "residual": abs(h_p(args.p, z) - args.y)}], args.format, args.out)


def cmd_cover(args):
    E = load_interval_set(args.set)
    res = cover(E, Fraction(args.eps))
    check = verify_cover(E, res)
    rows = [{"lo": str(lo), "hi": str(hi), "density": str(E.overlap(lo, hi) / (hi - lo)),
             "verified": bool(check)} for lo, hi in res.intervals]
    _write_table(rows, args.format, args.out)


def _config(args, **extra) -> CampaignConfig:
    kw = {"trials": args.trials, "seed": args.seed}
    if getattr(args, "pieces", None) is not None:
        kw["pieces"] = args.pieces
    if getattr(args, "p_frac", None) is not None:
        kw["p_frac"] = args.p_frac
    if getattr(args, "p_rule", None) is not None:
        kw["p_rule"] = args.p_rule
    if getattr(args, "kinds", None):
        kw["kinds"] = tuple(args.kinds.split(","))
    kw.update(extra)
    return CampaignConfig(**kw)


def _emit(report, args):
    if args.out:
        emit_report(report, args.format, args.out)
    print(f"{report.campaign}: {report.passes}/{report.trials} passed, "
          f"worst margin {report.worst_margin}, {report.wall_time:.2f}s",
          file=sys.stderr)
    return 0 if report.all_passed else 1


def cmd_verify(args):
    report = run_campaign(args.campaign, _config(args, c=args.c), workers=args.workers)
    return _emit(report, args)


def cmd_sweep(args):
    report = run_campaign("divergence", CampaignConfig(trials=args.eps_decades, seed=args.seed,
                                                       c=args.c))
    if not args.out:
        ks, moments, slope = truncated_divergence(args.c, range(1, args.eps_decades + 1))
        for k, m in zip(ks, moments):
            print(f"{int(k)}\t{float(m)!r}")
        print(f"slope\t{slope!r}")
    return _emit(report, args)


def _add_output(p):
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="a1sharp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("a1", help="exact A1 constant of a weight file")
    p.add_argument("--weight", required=True)
    _add_output(p)
    p.set_defaults(func=cmd_a1)

    p = sub.add_parser("rearrange", help="non-increasing rearrangement of a weight file")
    p.add_argument("--weight", required=True)
    _add_output(p)
    p.set_defaults(func=cmd_rearrange)

    p = sub.add_parser("sharp", help="critical exponent and sharp reverse Hoelder constant")
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--p", type=float, required=True)
    _add_output(p)
    p.set_defaults(func=cmd_sharp)

    p = sub.add_parser("omega", help="inverse of H_p")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    _add_output(p)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("cover", help="covering intervals for an interval-set file")
    p.add_argument("--set", required=True)
    p.add_argument("--eps", default="1/10")
    _add_output(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("campaign", choices=sorted(CAMPAIGNS))
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--pieces", type=int)
    p.add_argument("--p-frac", type=float)
    p.add_argument("--p-rule", choices=("interp", "scale"))
    p.add_argument("--kinds", help="comma-separated generator kinds")
    p.add_argument("--c", type=float, default=2.0, help="A1 constant for the divergence campaign")
    p.add_argument("--workers", type=int, default=1)
    _add_output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="truncated-moment sweep at the critical exponent")
    p.add_argument("what", choices=("divergence",))
    p.add_argument("--c", type=float, default=2.0)
    p.add_argument("--eps-decades", type=int, default=12)
    p.add_argument("--seed", type=int, default=None)
    _add_output(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", "unset") is None:
        args.seed = default_seed()
    try:
        rc = args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
