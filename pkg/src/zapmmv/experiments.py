"""Monte Carlo sweeps, timing benchmarks and oracle cross-checks.

Every trial draws its instance from ``generate(..., seed=base_seed + trial)``,
so any row of any sweep can be reproduced from the spec alone. Rows come
back as lists of dicts in deterministic order; :func:`write_csv` renders them.
"""
import csv
import io
import math
import platform
import sys
import time
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .exceptions import OracleGuardError, ParameterError, ZapError
from .linalg import build_projector
from .metrics import aggregate, evaluate, relative_error
from .oracle import MAX_SPARK_COLUMNS, MAX_SUPPORTS, exhaustive_solve, uniqueness_check
from .problems import RNG_NAME, generate
from .solver import ZapConfig, zap_solve
from .somp import somp_solve

SOLVERS = ("zap", "somp")
KINDS = ("solve", "sweep-k", "sweep-snr", "bench", "oracle-check")

#: (N, M, K, L) rungs of the running-time comparison.
BENCH_LADDER = (
    (1000, 250, 50, 10),
    (2000, 500, 100, 10),
    (3000, 750, 150, 10),
    (4000, 1000, 200, 10),
    (5000, 1250, 250, 10),
)

SWEEP_K_COLUMNS = ("k", "solver", "recovery_probability", "mean_relative_error", "mean_time_s", "trials", "errors")
SWEEP_SNR_COLUMNS = (
    "snr_db", "solver", "mean_msd_db", "mean_relative_error", "trials", "errors", "mean_msd", "mean_msd_per_entry",
)
BENCH_COLUMNS = ("n", "m", "k", "l", "solver", "mean_time_s", "trials")
ORACLE_COLUMNS = ("trial", "k", "unique_bound_ok", "zap_matches_oracle", "somp_matches_oracle")

ORACLE_MATCH_TOL = 1e-6


@dataclass(frozen=True)
class ExperimentSpec:
    """Resolved description of one experiment run.

    ``snr_values`` uses ``None`` for a noiseless point. ``rungs`` is only
    read by the benchmark.
    """

    kind: str = "sweep-k"
    n: int = 200
    m: int = 50
    l: int = 10
    k_values: tuple = tuple(range(2, 51, 2))
    snr_values: tuple = (None,)
    trials: int = 200
    base_seed: int = 0
    solvers: tuple = SOLVERS
    zap: ZapConfig = field(default_factory=ZapConfig)
    residual_tol: float = 1e-10
    timing: bool = True
    rungs: tuple = BENCH_LADDER[:1]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown experiment kind {self.kind!r}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ParameterError(f"trials must be a positive integer, got {self.trials}")
        if not self.solvers or any(s not in SOLVERS for s in self.solvers):
            raise ParameterError(f"solvers must be a nonempty subset of {SOLVERS}, got {self.solvers}")
        if not self.k_values:
            raise ParameterError("sparsity range is empty")
        if not self.snr_values:
            raise ParameterError("SNR range is empty")
        if not self.rungs:
            raise ParameterError("benchmark ladder is empty")
        if any(int(k) != k or k < 0 for k in self.k_values):
            raise ParameterError(f"sparsity values must be nonnegative integers, got {self.k_values}")

    def seed(self, trial):
        return self.base_seed + trial


def _solve(name, problem, spec, k, projector=None):
    """Run one solver; returns ``(x_hat, explicit_support)``."""
    if name == "zap":
        return zap_solve(problem.a, problem.y, spec.zap, projector=projector).solution, None
    res = somp_solve(problem.a, problem.y, k, spec.residual_tol)
    return res.solution, res.support


def _timed(name, problem, spec, k):
    # the pseudoinverse is part of the timed work
    start = time.perf_counter()
    x_hat, support = _solve(name, problem, spec, k)
    return x_hat, support, time.perf_counter() - start


def _warm_up(spec, n, m, l, k):
    if not spec.timing:
        return
    try:
        problem = generate(n, m, l, min(k, m), None, spec.seed(0))
        for name in spec.solvers:
            _solve(name, problem, spec, max(min(k, m), 1))
    except ZapError:
        pass


def _run_point(spec, name, k, snr_db):
    outcomes, errors = [], 0
    for trial in range(spec.trials):
        try:
            problem = generate(spec.n, spec.m, spec.l, k, snr_db, spec.seed(trial))
            x_hat, support, elapsed = _timed(name, problem, spec, k)
            outcomes.append(evaluate(problem.x_true, x_hat, elapsed if spec.timing else 0.0, support))
        except ZapError:
            errors += 1
    return outcomes, errors


def run_sweep_k(spec):
    """Recovery probability against sparsity, one row per ``(k, solver)``."""
    spec = replace(spec, kind="sweep-k")
    _warm_up(spec, spec.n, spec.m, spec.l, spec.k_values[0])
    rows = []
    for k in spec.k_values:
        for name in spec.solvers:
            outcomes, errors = _run_point(spec, name, k, None)
            if outcomes:
                s = aggregate(outcomes)
                prob, err, t = s.recovery_probability, s.mean_relative_error, s.mean_time
            else:
                # nothing solvable at this point, so nothing was recovered
                prob, err, t = 0.0, math.nan, math.nan
            rows.append({
                "k": k,
                "solver": name,
                "recovery_probability": prob,
                "mean_relative_error": err,
                "mean_time_s": t if spec.timing else math.nan,
                "trials": len(outcomes),
                "errors": errors,
            })
    return rows


def run_sweep_snr(spec):
    """Mean squared deviation against measurement SNR at fixed sparsity."""
    spec = replace(spec, kind="sweep-snr", timing=False)
    k = spec.k_values[0]
    rows = []
    for snr in spec.snr_values:
        for name in spec.solvers:
            outcomes, errors = _run_point(spec, name, k, snr)
            if outcomes:
                s = aggregate(outcomes)
                msd, msd_db, err = s.mean_msd, s.mean_msd_db, s.mean_relative_error
            else:
                msd = msd_db = err = math.nan
            rows.append({
                "snr_db": math.inf if snr is None else snr,
                "solver": name,
                "mean_msd_db": msd_db,
                "mean_relative_error": err,
                "trials": len(outcomes),
                "errors": errors,
                "mean_msd": msd,
                "mean_msd_per_entry": msd / (spec.n * spec.l),
            })
    return rows


def run_bench(spec):
    """Mean wall-clock solve time per ladder rung and solver."""
    spec = replace(spec, kind="bench", timing=True)
    rows = []
    for n, m, k, l in spec.rungs:
        _warm_up(spec, n, m, l, k)
        for name in spec.solvers:
            times = []
            for trial in range(spec.trials):
                problem = generate(n, m, l, k, None, spec.seed(trial))
                times.append(_timed(name, problem, spec, k)[2])
            rows.append({
                "n": n, "m": m, "k": k, "l": l, "solver": name,
                "mean_time_s": math.fsum(times) / len(times),
                "trials": len(times),
            })
    return rows


def check_oracle_size(n, m, k):
    if n > MAX_SPARK_COLUMNS:
        raise OracleGuardError(
            f"oracle-check needs n <= {MAX_SPARK_COLUMNS} for the spark computation, got n={n}; "
            "try --n 8 --m 4 --k 1 --l 2"
        )
    if math.comb(n, k) > MAX_SUPPORTS:
        raise OracleGuardError(
            f"oracle-check needs C(n, k) <= {MAX_SUPPORTS}, got C({n}, {k}) = {math.comb(n, k)}"
        )


def run_oracle_check(spec):
    """Compare both solvers with the exhaustive-support solution, per trial."""
    spec = replace(spec, kind="oracle-check")
    rows = []
    for k in spec.k_values:
        check_oracle_size(spec.n, spec.m, k)
        for trial in range(spec.trials):
            problem = generate(spec.n, spec.m, spec.l, k, None, spec.seed(trial))
            report = uniqueness_check(problem.a, problem.y, k)
            reference = exhaustive_solve(problem.a, problem.y, k)
            projector = build_projector(problem.a)
            flags = {}
            for name in SOLVERS:
                if name not in spec.solvers:
                    flags[name] = None
                    continue
                try:
                    x_hat, _ = _solve(name, problem, spec, k, projector)
                    flags[name] = relative_error(reference, x_hat) < ORACLE_MATCH_TOL
                except ZapError:
                    flags[name] = False
            rows.append({
                "trial": trial,
                "k": k,
                "unique_bound_ok": report.unique,
                "zap_matches_oracle": flags["zap"],
                "somp_matches_oracle": flags["somp"],
            })
    return rows


RUNNERS = {
    "sweep-k": (run_sweep_k, SWEEP_K_COLUMNS),
    "sweep-snr": (run_sweep_snr, SWEEP_SNR_COLUMNS),
    "bench": (run_bench, BENCH_COLUMNS),
    "oracle-check": (run_oracle_check, ORACLE_COLUMNS),
}


def run(spec):
    """Dispatch on ``spec.kind``; returns ``(rows, columns)``."""
    runner, columns = RUNNERS[spec.kind]
    return runner(spec), columns


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def write_csv(rows, columns, path):
    Path(path).write_text(to_csv(rows, columns), encoding="utf-8")


def manifest(spec):
    """Resolved configuration plus environment versions, as key=value lines."""
    from . import __version__

    entries = {}
    for f in fields(spec):
        value = getattr(spec, f.name)
        if isinstance(value, ZapConfig):
            for key, v in asdict(value).items():
                entries[f"zap.{key}"] = v
        elif isinstance(value, tuple):
            entries[f.name] = ";".join(_format_item(v) for v in value)
        else:
            entries[f.name] = value
    entries["rng"] = RNG_NAME
    entries["zapmmv_version"] = __version__
    entries["numpy_version"] = np.__version__
    entries["python_version"] = platform.python_version()
    entries["platform"] = sys.platform
    return "".join(f"{key}={_cell(v)}\n" for key, v in entries.items())


def _format_item(v):
    if v is None:
        return "noiseless"
    if isinstance(v, tuple):
        return ":".join(str(x) for x in v)
    return _cell(v)


def write_manifest(spec, csv_path):
    path = Path(str(csv_path) + ".manifest")
    path.write_text(manifest(spec), encoding="utf-8")
    return path
