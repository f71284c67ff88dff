"""Zero-point attracting projection for jointly sparse MMV recovery.

Each iteration moves the estimate along the negative gradient of the
approximate l2,0 penalty and projects it back onto ``{X : A X = Y}``. The
step size shrinks by ``eta`` whenever the penalty failed to decrease over the
last ``q`` iterations; the solver stops once the step size drops below
``kappa_min`` or after ``t_max`` iterations.
"""
import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_matrix, check_system
from .exceptions import DimensionError, DivergenceError, ParameterError
from .linalg import _project, build_projector, relative_residual
from .penalty import PenaltyParams, _gradient, _penalty

logger = logging.getLogger(__name__)


class StopReason(str, enum.Enum):
    STEP_SIZE_FLOOR = "StepSizeFloor"
    ITERATION_BUDGET = "IterationBudget"


@dataclass(frozen=True)
class ZapConfig:
    """Solver parameters. Defaults are the values used for the benchmarks."""

    alpha: float = 1.0
    kappa0: float = 0.1
    eta: float = 0.1
    q: int = 11
    kappa_min: float = 1e-6
    t_max: int = 500

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if not self.kappa0 > 0:
            raise ParameterError(f"kappa0 must be positive, got {self.kappa0}")
        if not 0 < self.eta < 1:
            raise ParameterError(f"eta must lie in (0, 1), got {self.eta}")
        if not 0 < self.kappa_min < self.kappa0:
            raise ParameterError(f"need 0 < kappa_min < kappa0, got {self.kappa_min} and {self.kappa0}")
        if int(self.q) != self.q or self.q < 1:
            raise ParameterError(f"q must be a positive integer, got {self.q}")
        if int(self.t_max) != self.t_max or self.t_max < 1:
            raise ParameterError(f"t_max must be a positive integer, got {self.t_max}")

    @property
    def penalty(self):
        return PenaltyParams(self.alpha)


@dataclass
class SolveResult:
    """Output of :func:`zap_solve`.

    The three traces have ``iterations_run + 1`` entries. Entry 0 describes
    the initial least squares estimate; entry ``n`` the state after iteration
    ``n`` (``kappa_trace[n]`` is the step size after that iteration's
    step-size control, i.e. the one used by iteration ``n + 1``).
    """

    solution: np.ndarray
    iterations_run: int
    stop_reason: StopReason
    penalty_trace: list = field(default_factory=list)
    kappa_trace: list = field(default_factory=list)
    feasibility_trace: list = field(default_factory=list)


def zap_step(x_prev, projector, y, kappa, p):
    """One attraction step of size ``kappa`` followed by projection."""
    x_prev = check_matrix(x_prev, "X")
    y = check_matrix(y, "Y")
    m, n = projector.sensing.shape
    if x_prev.shape[0] != n or y.shape[0] != m or x_prev.shape[1] != y.shape[1]:
        raise DimensionError(
            f"inconsistent shapes: A {projector.sensing.shape}, X {x_prev.shape}, Y {y.shape}"
        )
    alpha = p.alpha if isinstance(p, PenaltyParams) else float(p)
    return _project(projector, x_prev - kappa * _gradient(x_prev, alpha), y)


def zap_solve(a, y, cfg=None, projector=None):
    """Recover a jointly sparse ``X`` from ``Y = A X``.

    Parameters
    ----------
    a : array_like of shape (M, N)
        Sensing matrix, ``M < N`` and full row rank.
    y : array_like of shape (M, L)
        Measurements.
    cfg : ZapConfig, optional
    projector : Projector, optional
        Reuse a pseudoinverse already built for ``a``.

    Returns
    -------
    SolveResult
    """
    cfg = cfg or ZapConfig()
    a, y = check_system(a, y)
    if projector is None:
        projector = build_projector(a)
    alpha = cfg.alpha
    q = int(cfg.q)

    x = projector.pseudoinverse @ y
    kappa = float(cfg.kappa0)
    penalties = [_penalty(x, alpha)]
    kappas = [kappa]
    feas = [relative_residual(a, x, y)]
    stop = StopReason.ITERATION_BUDGET

    n = 0
    while n < cfg.t_max:
        n += 1
        x = _project(projector, x - kappa * _gradient(x, alpha), y)
        if not np.all(np.isfinite(x)):
            raise DivergenceError(n)
        penalties.append(_penalty(x, alpha))
        feas.append(relative_residual(a, x, y))
        if n % q == 0 and penalties[n] >= penalties[n - q]:
            kappa = kappa * cfg.eta
        kappas.append(kappa)
        if kappa < cfg.kappa_min:
            stop = StopReason.STEP_SIZE_FLOOR
            break

    logger.debug("zap_solve stopped after %d iterations (%s)", n, stop.value)
    return SolveResult(
        solution=x,
        iterations_run=n,
        stop_reason=stop,
        penalty_trace=penalties,
        kappa_trace=kappas,
        feasibility_trace=feas,
    )
