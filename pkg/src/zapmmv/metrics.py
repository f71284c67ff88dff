"""Evaluation quantities for recovery experiments."""
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix
from .exceptions import DimensionError, ZapError

#: A trial counts as exact recovery when the relative error is strictly below this.
EXACT_RECOVERY_THRESHOLD = 1e-3
#: Row-norm threshold used to read a support off a ZAP estimate.
SUPPORT_ZERO_TOL = 1e-6


def _pair(x_true, x_hat):
    x_true = check_matrix(x_true, "x_true")
    x_hat = check_matrix(x_hat, "x_hat")
    if x_true.shape != x_hat.shape:
        raise DimensionError(f"x_true has shape {x_true.shape} but x_hat has shape {x_hat.shape}")
    return x_true, x_hat


def relative_error(x_true, x_hat):
    x_true, x_hat = _pair(x_true, x_hat)
    denom = np.linalg.norm(x_true)
    if denom == 0:
        raise ZapError("undefined relative error: x_true is all zero")
    return float(np.linalg.norm(x_true - x_hat) / denom)


def squared_deviation(x_true, x_hat):
    x_true, x_hat = _pair(x_true, x_hat)
    return float(np.sum((x_true - x_hat) ** 2))


def estimated_support(x_hat, zero_tol=SUPPORT_ZERO_TOL):
    x_hat = check_matrix(x_hat, "x_hat")
    return set(np.flatnonzero(np.linalg.norm(x_hat, axis=1) > zero_tol).tolist())


def support_detection(x_true, x_hat, zero_tol=SUPPORT_ZERO_TOL, support_hat=None):
    """Count true support rows that the estimate also marks as nonzero.

    ``support_hat`` overrides the thresholded support of ``x_hat`` (for
    solvers that report their support explicitly).
    """
    x_true, x_hat = _pair(x_true, x_hat)
    truth = set(np.flatnonzero(np.any(x_true != 0, axis=1)).tolist())
    found = set(support_hat) if support_hat is not None else estimated_support(x_hat, zero_tol)
    return len(truth & found)


@dataclass(frozen=True)
class TrialOutcome:
    relative_error: float
    exact_recovery: bool
    msd: float
    detected_rows: int
    elapsed_seconds: float


def evaluate(x_true, x_hat, elapsed_seconds=0.0, support_hat=None):
    """Build a :class:`TrialOutcome` for one solve."""
    err = relative_error(x_true, x_hat)
    return TrialOutcome(
        relative_error=err,
        exact_recovery=err < EXACT_RECOVERY_THRESHOLD,
        msd=squared_deviation(x_true, x_hat),
        detected_rows=support_detection(x_true, x_hat, support_hat=support_hat),
        elapsed_seconds=float(elapsed_seconds),
    )


@dataclass(frozen=True)
class Summary:
    recovery_probability: float
    mean_relative_error: float
    mean_msd: float
    mean_time: float
    trial_count: int

    @property
    def mean_msd_db(self):
        return 10.0 * math.log10(self.mean_msd) if self.mean_msd > 0 else -math.inf


def aggregate(outcomes):
    """Means over trials. ``math.fsum`` keeps the result order-independent."""
    outcomes = list(outcomes)
    if not outcomes:
        raise ZapError("cannot aggregate an empty list of outcomes")
    n = len(outcomes)
    return Summary(
        recovery_probability=sum(o.exact_recovery for o in outcomes) / n,
        mean_relative_error=math.fsum(o.relative_error for o in outcomes) / n,
        mean_msd=math.fsum(o.msd for o in outcomes) / n,
        mean_time=math.fsum(o.elapsed_seconds for o in outcomes) / n,
        trial_count=n,
    )
