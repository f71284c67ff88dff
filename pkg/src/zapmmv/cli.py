"""Command-line entry point: ``zapmmv <subcommand> [options]``.

Options may also come from a flat ``key=value`` file given with
``--config``; keys are the long option names without dashes (``k-min`` or
``k_min``). Command-line flags override the file.
"""
import argparse
import json
import logging
import math
import sys
from pathlib import Path

from .exceptions import ZapError
from .experiments import BENCH_LADDER, SOLVERS, ExperimentSpec, run, to_csv, write_manifest
from .linalg import read_matrix, write_matrix
from .problems import generate, write_problem
from .solver import ZapConfig, zap_solve
from .somp import somp_solve

logger = logging.getLogger("zapmmv")

DEFAULTS = {
    "n": 200, "m": 50, "l": 10,
    "k": None, "k_min": 2, "k_max": 50, "k_step": 2,
    "snr_min": 10.0, "snr_max": 50.0, "snr_step": 10.0, "noiseless_control": False,
    "trials": 200, "seed": 0, "solvers": "zap,somp",
    "alpha": 1.0, "kappa": 0.1, "eta": 0.1, "q": 11, "kappa_min": 1e-6, "t_max": 500,
    "residual_tol": 1e-10, "no_timing": False, "full_ladder": False,
}

COMMAND_DEFAULTS = {
    "sweep-snr": {"k": 10, "trials": 100},
    "bench": {"trials": 5},
    "oracle-check": {"n": 8, "m": 4, "l": 2, "k_min": 1, "k_max": 1, "k_step": 1, "trials": 100},
}

_BOOL_KEYS = {"noiseless_control", "no_timing", "full_ladder"}


def read_config(path):
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ZapError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key = key.strip().replace("-", "_")
        if key not in DEFAULTS:
            raise ZapError(f"{path}:{lineno}: unknown key {key!r}")
        value = value.strip()
        if key in _BOOL_KEYS:
            out[key] = value.lower() in ("1", "true", "yes", "on")
        elif key == "solvers":
            out[key] = value
        elif key in ("alpha", "kappa", "eta", "kappa_min", "snr_min", "snr_max", "snr_step", "residual_tol"):
            out[key] = float(value)
        else:
            out[key] = int(value)
    return out


def _resolve(args):
    opts = dict(DEFAULTS)
    opts.update(COMMAND_DEFAULTS.get(args.command, {}))
    if getattr(args, "config", None):
        opts.update(read_config(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            opts[key] = value
    return opts


def _zap_config(opts):
    return ZapConfig(
        alpha=opts["alpha"], kappa0=opts["kappa"], eta=opts["eta"], q=opts["q"],
        kappa_min=opts["kappa_min"], t_max=opts["t_max"],
    )


def _float_range(lo, hi, step):
    if step <= 0:
        raise ZapError(f"step must be positive, got {step}")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return tuple(lo + i * step for i in range(max(count, 0)))


def build_spec(kind, opts):
    """Turn resolved options into an :class:`ExperimentSpec`."""
    if opts["k"] is not None:
        k_values = (opts["k"],)
    else:
        k_values = tuple(range(opts["k_min"], opts["k_max"] + 1, opts["k_step"]))
    snr_values = _float_range(opts["snr_min"], opts["snr_max"], opts["snr_step"])
    if opts["noiseless_control"]:
        snr_values = snr_values + (None,)
    rungs = BENCH_LADDER if opts["full_ladder"] else BENCH_LADDER[:1]
    if kind == "bench" and opts["k"] is not None:
        rungs = ((opts["n"], opts["m"], opts["k"], opts["l"]),)
    solvers = tuple(s.strip() for s in str(opts["solvers"]).split(",") if s.strip())
    return ExperimentSpec(
        kind=kind, n=opts["n"], m=opts["m"], l=opts["l"], k_values=k_values, snr_values=snr_values,
        trials=opts["trials"], base_seed=opts["seed"], solvers=solvers, zap=_zap_config(opts),
        residual_tol=opts["residual_tol"], timing=not opts["no_timing"], rungs=rungs,
    )


def _add_solver_flags(p):
    g = p.add_argument_group("solver overrides")
    g.add_argument("--alpha", type=float)
    g.add_argument("--kappa", type=float, help="initial step size")
    g.add_argument("--eta", type=float)
    g.add_argument("--q", type=int)
    g.add_argument("--kappa-min", dest="kappa_min", type=float)
    g.add_argument("--t-max", dest="t_max", type=int)
    g.add_argument("--residual-tol", dest="residual_tol", type=float, help="SOMP early-stop tolerance")


def _add_experiment_flags(p):
    p.add_argument("--config", help="key=value file with defaults for these options")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--k", type=int, help="single sparsity level")
    p.add_argument("--k-min", dest="k_min", type=int)
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--k-step", dest="k_step", type=int)
    p.add_argument("--snr-min", dest="snr_min", type=float)
    p.add_argument("--snr-max", dest="snr_max", type=float)
    p.add_argument("--snr-step", dest="snr_step", type=float)
    p.add_argument("--noiseless-control", dest="noiseless_control", action="store_true",
                   help="append a noiseless point to the SNR sweep")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, help="base seed; trial t uses seed + t")
    p.add_argument("--solvers", help=f"comma separated subset of {','.join(SOLVERS)}")
    p.add_argument("--out", help="CSV output path (stdout if omitted)")
    p.add_argument("--no-timing", dest="no_timing", action="store_true",
                   help="skip wall-clock timing so the CSV is byte-reproducible")
    p.add_argument("--full-ladder", dest="full_ladder", action="store_true",
                   help="bench: run all five ladder rungs instead of the smallest")
    _add_solver_flags(p)


def make_parser():
    parser = argparse.ArgumentParser(prog="zapmmv", description="Jointly sparse MMV recovery.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="recover X from matrix files A and Y")
    p.add_argument("--a", required=True, help="sensing matrix file")
    p.add_argument("--y", required=True, help="measurement matrix file")
    p.add_argument("--out", required=True, help="where to write the recovered X")
    p.add_argument("--solver", choices=SOLVERS, default="zap")
    p.add_argument("--k", type=int, help="support size for somp")
    p.add_argument("--config")
    _add_solver_flags(p)

    p = sub.add_parser("generate", help="write a random problem instance to a directory")
    p.add_argument("directory")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--m", type=int, default=50)
    p.add_argument("--l", type=int, default=10)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--snr", type=float, help="measurement SNR in dB (noiseless if omitted)")
    p.add_argument("--seed", type=int, default=0)

    for name, text in (
        ("sweep-k", "recovery probability against sparsity"),
        ("sweep-snr", "mean squared deviation against SNR"),
        ("bench", "running time over the size ladder"),
        ("oracle-check", "agreement with the exhaustive-support solution"),
    ):
        _add_experiment_flags(sub.add_parser(name, help=text))
    return parser


def _cmd_solve(args):
    opts = _resolve(args)
    a = read_matrix(args.a)
    y = read_matrix(args.y)
    if args.solver == "zap":
        res = zap_solve(a, y, _zap_config(opts))
        x, info = res.solution, {"iterations": res.iterations_run, "stop_reason": res.stop_reason.value}
    else:
        k = args.k if args.k is not None else a.shape[0]
        res = somp_solve(a, y, k, opts["residual_tol"])
        x, info = res.solution, {"support": res.support}
    write_matrix(args.out, x)
    print(json.dumps({"status": "ok", "solver": args.solver, **info}))


def _cmd_generate(args):
    problem = generate(args.n, args.m, args.l, args.k, args.snr, args.seed)
    write_problem(problem, args.directory)
    print(json.dumps({"status": "ok", "directory": str(args.directory), "support": list(problem.support_true)}))


def _cmd_experiment(args):
    opts = _resolve(args)
    spec = build_spec(args.command, opts)
    rows, columns = run(spec)
    text = to_csv(rows, columns)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        write_manifest(spec, args.out)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        if args.command == "solve":
            _cmd_solve(args)
        elif args.command == "generate":
            _cmd_generate(args)
        else:
            _cmd_experiment(args)
    except (ZapError, OSError) as exc:
        kind = getattr(exc, "kind", "io_error")
        print("error: " + json.dumps({"kind": kind, "message": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
