"""Command line experiment runner.

    homsvm gen      write a dataset CSV
    homsvm run      homotopic solver trace(s), one file per s0
    homsvm baseline logistic-loss gradient descent trace
    homsvm compare  homotopic vs logistic gaps at matched update counts
    homsvm verify   invariant suite with a pass/fail report

Exit status: 0 success, 1 verification failure, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
from pathlib import Path

import numpy as np

from homsvm import __version__
from homsvm.dataset import DatasetError, paper_dataset, random_separable, read_csv, scaled_dataset, write_csv
from homsvm.losses import LossContext
from homsvm.metrics import BoundContext, MetricError, angle_gap, l2_error, margin_gap, theorem_bound
from homsvm.oracle import OracleError, estimate_lambda_prime, exact_hard_margin
from homsvm.schedule import ScheduleError, make_plan
from homsvm.solver import SolverConfig, SolverError, homotopic_solve, logistic_gd, sigma_max
from homsvm.verify import lambda_grid, run_suite

TRACE_COLUMNS = ["stage", "k", "lambda", "eta", "t", "loss", "l2_error", "angle_gap",
                 "margin_gap", "theorem_bound", "bias"]
COMPARE_COLUMNS = ["method", "stage", "k", "l2_error", "angle_gap", "margin_gap"]

# config keys echoed into trace headers, in this order
_CONFIG_KEYS = ["command", "data", "dataset", "fillers", "seed", "n", "d", "margin", "scale_axis",
                "scale_factor", "p", "r", "s0", "budget", "stages", "iterations", "update_rule",
                "step_mode", "active_rule", "bias", "no_oracle", "with_best", "lambda_tol"]


class UsageError(Exception):
    pass


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


# --------------------------------------------------------------------------
# dataset selection

def load_dataset(args):
    if args.data:
        ds = read_csv(args.data)
    elif args.dataset == "paper":
        ds = paper_dataset(args.fillers)
    elif args.dataset == "random":
        ds = random_separable(args.seed, args.n, args.d, args.margin)
    else:
        raise UsageError(f"unknown dataset {args.dataset!r}")
    if args.scale_axis is not None:
        ds = scaled_dataset(ds, args.scale_axis, args.scale_factor)
    return ds


def _dataset_digest(ds):
    buf = io.StringIO()
    buf.write(",".join(["y"] + [f"x{i + 1}" for i in range(ds.d)]) + "\n")
    for yj, xj in zip(ds.labels, ds.points):
        buf.write(",".join([f"{int(yj)}"] + [f"{v:.17g}" for v in xj]) + "\n")
    return hashlib.sha256(buf.getvalue().encode()).hexdigest()


def config_dict(args, **overrides):
    cfg = {k: getattr(args, k) for k in _CONFIG_KEYS if hasattr(args, k)}
    if cfg.get("stages") is not None:
        cfg["budget"] = None
    cfg.update(overrides)
    return cfg


def header_lines(cfg, ds, ctx, extra):
    lines = [f"# tool=homsvm {__version__}",
             "# config=" + json.dumps(cfg, sort_keys=True)]
    for key, value in cfg.items():
        lines.append(f"# {key}={json.dumps(value)}")
    lines.append(f"# dataset_sha256={_dataset_digest(ds)}")
    lines.append(f"# points={ds.n}")
    lines.append(f"# dim={ds.d}")
    lines.append(f"# L={_fmt(ctx.lipschitz_L)}")
    for key, value in extra.items():
        if isinstance(value, np.ndarray):
            value = ",".join(_fmt(v) for v in value)
        elif not isinstance(value, str):
            value = _fmt(value)
        lines.append(f"# {key}={value}")
    return lines


def read_header(path):
    """Parse the ``# key=value`` block of a trace file; ``config`` is decoded from JSON."""
    out = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            out[key] = value
    if "config" in out:
        out["config"] = json.loads(out["config"])
    return out


def argv_from_config(cfg):
    """Rebuild a command line from a header ``config`` so the file can be regenerated."""
    argv = [cfg["command"]]
    for key, value in cfg.items():
        if key == "command" or value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif isinstance(value, list):
            argv += [flag] + [str(v) for v in value]
        else:
            argv += [flag, str(value)]
    return argv


def rerun_from_header(path):
    """Regenerate the text of a ``run``/``baseline``/``compare`` file from its own header."""
    cfg = read_header(path)["config"]
    args = build_parser().parse_args(argv_from_config(cfg) + ["-o", "-"])
    if cfg["command"] == "run":
        return render_run(args, cfg["s0"])
    return {"baseline": render_baseline, "compare": render_compare}[cfg["command"]](args)


def _oracle_info(ds, want):
    if not want:
        return None, None
    w_star = exact_hard_margin(ds).w
    lam_prime = estimate_lambda_prime(ds, tol=1e-6, w_star=w_star)
    return w_star, lam_prime


def _gaps(ctx, z, w_star):
    if w_star is None:
        return None, None, None
    err = l2_error(z, w_star)
    if not np.any(z):
        return err, None, None
    return err, angle_gap(z, w_star), margin_gap(ctx, z, w_star)


# --------------------------------------------------------------------------
# commands

def cmd_gen(args):
    ds = load_dataset(args)
    write_csv(ds, args.output)
    return 0


def _solver_config(args, plan, update_rule=None):
    return SolverConfig(
        plan,
        stages=args.stages,
        budget=None if args.stages is not None else args.budget,
        update_rule=update_rule or args.update_rule,
        step_mode=args.step_mode,
        active_rule=args.active_rule,
        estimate_bias=args.bias,
    )


def render_run(args, s0):
    ds = load_dataset(args)
    ctx = LossContext(ds)
    w_star, lam_prime = _oracle_info(ds, not args.no_oracle)
    plan = make_plan(args.p, args.r, s0)
    trace = homotopic_solve(ctx, _solver_config(args, plan))
    bctx = BoundContext(ctx.lipschitz_L, lam_prime, plan) if lam_prime else None
    extra = {"epsilon0": plan.epsilon0, "alpha": plan.alpha, "C": plan.big_c}
    if w_star is not None:
        extra["lambda_prime"] = lam_prime
        extra["w_star"] = w_star
    cfg = config_dict(args, command="run", s0=s0)
    lines = header_lines(cfg, ds, ctx, extra)
    lines.append(",".join(TRACE_COLUMNS))
    for c in trace.checkpoints:
        err, ag, mg = _gaps(ctx, c.z, w_star)
        bound = theorem_bound(bctx, c.k) if bctx else None
        lines.append(",".join(_fmt(v) for v in (c.stage, c.k, c.lam, c.eta, c.t, c.loss,
                                                   err, ag, mg, bound, c.bias)))
    return "\n".join(lines) + "\n"


def _output_paths(template, s0_values):
    if len(s0_values) == 1:
        return [Path(template)]
    if "{s0}" not in template:
        stem = Path(template)
        return [stem.with_name(f"{stem.stem}_s0-{s0}{stem.suffix}") for s0 in s0_values]
    return [Path(template.format(s0=s0)) for s0 in s0_values]


def cmd_run(args):
    for s0, path in zip(args.s0, _output_paths(args.output, args.s0)):
        text = render_run(args, s0)
        path.write_text(text)
    return 0


def render_baseline(args):
    ds = load_dataset(args)
    ctx = LossContext(ds)
    w_star, lam_prime = _oracle_info(ds, not args.no_oracle)
    ks = _checkpoint_ks(args, args.iterations)
    trace = logistic_gd(ctx, args.iterations, ks)
    extra = {"eta": 1.0 / sigma_max(ctx)}
    if w_star is not None:
        extra["lambda_prime"] = lam_prime
        extra["w_star"] = w_star
    cfg = config_dict(args, command="baseline", s0=args.s0[0])
    lines = header_lines(cfg, ds, ctx, extra)
    lines.append(",".join(TRACE_COLUMNS))
    for c in trace.checkpoints:
        err, ag, mg = _gaps(ctx, c.z, w_star)
        lines.append(",".join(_fmt(v) for v in (c.stage, c.k, None, c.eta, None, c.loss,
                                                   err, ag, mg, None, None)))
    return "\n".join(lines) + "\n"


def _checkpoint_ks(args, total):
    """Stage-boundary update counts of the homotopic schedule (first s0), capped at ``total``."""
    plan = make_plan(args.p, args.r, args.s0[0])
    ks, k, s = [], 0, 0
    from homsvm.schedule import stage
    while True:
        k += stage(plan, s).t_s
        if k > total:
            break
        ks.append(k)
        s += 1
    ks.append(total)
    return ks


def cmd_baseline(args):
    Path(args.output).write_text(render_baseline(args))
    return 0


def render_compare(args):
    ds = load_dataset(args)
    ctx = LossContext(ds)
    w_star, lam_prime = _oracle_info(ds, True)
    plan = make_plan(args.p, args.r, args.s0[0])
    runs = [("homotopic_" + args.update_rule, homotopic_solve(ctx, _solver_config(args, plan)))]
    if args.with_best:
        other = "averaged" if args.update_rule == "best_iterate" else "best_iterate"
        runs.append(("homotopic_" + other, homotopic_solve(ctx, _solver_config(args, plan, other))))
    ks = runs[0][1].ks
    runs.append(("logistic", logistic_gd(ctx, int(ks[-1]), ks)))
    extra = {"lambda_prime": lam_prime, "w_star": w_star, "logistic_eta": 1.0 / sigma_max(ctx)}
    cfg = config_dict(args, command="compare", s0=args.s0[0])
    lines = header_lines(cfg, ds, ctx, extra)
    lines.append(",".join(COMPARE_COLUMNS))
    for method, tr in runs:
        for c in tr.checkpoints:
            err, ag, mg = _gaps(ctx, c.z, w_star)
            lines.append(",".join([method] + [_fmt(v) for v in (c.stage, c.k, err, ag, mg)]))
    return "\n".join(lines) + "\n"


def cmd_compare(args):
    Path(args.output).write_text(render_compare(args))
    return 0


def _parse_grid(text):
    try:
        start, stop, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"grid must look like start:stop:step, got {text!r}") from None
    if not (0 < start <= stop and step > 0):
        raise UsageError(f"bad grid {text!r}")
    return lambda_grid(start, stop, step)


def cmd_verify(args):
    ds = load_dataset(args)
    w_star = None
    if args.w_star:
        w_star = np.array([float(v) for v in args.w_star.split(",")])
        if w_star.shape != (ds.d,):
            raise UsageError(f"--w-star needs {ds.d} comma-separated values")
    report = run_suite(ds, grid=_parse_grid(args.lambda_grid), s0_values=args.s0,
                       budget=args.budget, p=args.p, r=args.r, w_star=w_star)
    text = "\n".join(report.lines()) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    sys.stdout.write(text)
    return 0 if report.passed else 1


# --------------------------------------------------------------------------
# argument parsing

def _add_dataset_args(p):
    g = p.add_argument_group("dataset")
    g.add_argument("--data", help="read points from this CSV instead of a generator")
    g.add_argument("--dataset", choices=["paper", "random"], default="paper")
    g.add_argument("--fillers", type=int, nargs="*", default=[2, 3, 4],
                   help="filler multipliers for the built-in dataset (none: only the 4 support vectors)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n", type=int, default=12)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--margin", type=float, default=0.1)
    g.add_argument("--scale-axis", type=int, default=None)
    g.add_argument("--scale-factor", type=float, default=20.0)


def _add_plan_args(p, multi_s0=False):
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--s0", type=int, nargs="+" if multi_s0 else 1, default=[10])


def _add_solver_args(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--budget", type=int, default=100_000, help="total subgradient update budget")
    g.add_argument("--stages", type=int, default=None)
    p.add_argument("--update-rule", choices=["averaged", "best_iterate"], default="averaged")
    p.add_argument("--step-mode", choices=["plain", "normalized"], default="plain")
    p.add_argument("--active-rule", choices=["inclusive", "strict"], default="inclusive")
    p.add_argument("--bias", action="store_true", help="record the bias estimate at each checkpoint")


def build_parser():
    parser = argparse.ArgumentParser(prog="homsvm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"homsvm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a dataset CSV")
    _add_dataset_args(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("run", help="homotopic subgradient trace(s)")
    _add_dataset_args(p)
    _add_plan_args(p, multi_s0=True)
    _add_solver_args(p)
    p.add_argument("--no-oracle", action="store_true", help="skip exact w* / lambda' (large data)")
    p.add_argument("-o", "--output", required=True,
                   help="trace path; with several --s0 values may contain {s0}")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("baseline", help="logistic-loss gradient descent trace")
    _add_dataset_args(p)
    _add_plan_args(p)
    p.add_argument("--iterations", type=int, default=100_000)
    p.add_argument("--no-oracle", action="store_true")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("compare", help="homotopic vs logistic gaps at matched k")
    _add_dataset_args(p)
    _add_plan_args(p)
    _add_solver_args(p)
    p.add_argument("--with-best", action="store_true", help="also run the other update rule")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("verify", help="run the invariant suite")
    _add_dataset_args(p)
    _add_plan_args(p, multi_s0=True)
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--lambda-grid", default="0.05:4.0:0.05")
    p.add_argument("--w-star", default=None, help="comma-separated w* to check instead of the oracle's")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DatasetError, ScheduleError, SolverError, OracleError, MetricError, OSError) as exc:
        print(f"homsvm {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
