"""scikit-learn style wrappers around the solvers.

``fit(A, Y)`` follows the regression convention: ``A`` plays the design
matrix (one row per measurement, one column per candidate row of ``X``)
and ``Y`` the multi-output target. ``coef_`` therefore has shape
``(L, N)`` like every multi-target linear model in scikit-learn, while
``solution_`` keeps the ``(N, L)`` orientation of the recovery problem.
"""
import numpy as np
from sklearn.base import BaseEstimator, MultiOutputMixin, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_matrix, check_system
from .solver import ZapConfig, zap_solve
from .somp import somp_solve


class _RecoveryMixin(MultiOutputMixin, RegressorMixin):
    def _store(self, solution, y):
        self.solution_ = solution
        self.coef_ = solution.T
        self.n_features_in_ = solution.shape[0]
        self._single_target = y.ndim == 1

    def predict(self, A):
        check_is_fitted(self, "solution_")
        pred = check_matrix(A, "A") @ self.solution_
        return pred.ravel() if self._single_target else pred


class ZapMMV(_RecoveryMixin, BaseEstimator):
    """Zero-point attracting projection for jointly sparse MMV recovery.

    Parameters
    ----------
    alpha : float, default=1.0
        Sharpness of the l2,0 surrogate; rows with norm above ``1/alpha``
        are no longer attracted to zero.
    kappa : float, default=0.1
        Initial attraction step size.
    eta : float, default=0.1
        Step-size shrink factor.
    q : int, default=11
        Period, in iterations, of the convergence check.
    kappa_min : float, default=1e-6
        The solver stops once the step size falls below this.
    t_max : int, default=500
        Iteration budget.
    zero_tol : float, default=None
        Row-norm threshold used to report ``support_``. Rows off the support
        keep a residue of the order of ``kappa_min``, so the default is
        ``100 * kappa_min``.

    Attributes
    ----------
    solution_ : ndarray of shape (N, L)
    coef_ : ndarray of shape (L, N)
    support_ : ndarray of int
    n_iter_ : int
    stop_reason_ : str
    result_ : SolveResult
    """

    def __init__(self, alpha=1.0, kappa=0.1, eta=0.1, q=11, kappa_min=1e-6, t_max=500, zero_tol=None):
        self.alpha = alpha
        self.kappa = kappa
        self.eta = eta
        self.q = q
        self.kappa_min = kappa_min
        self.t_max = t_max
        self.zero_tol = zero_tol

    def _config(self):
        return ZapConfig(
            alpha=self.alpha,
            kappa0=self.kappa,
            eta=self.eta,
            q=self.q,
            kappa_min=self.kappa_min,
            t_max=self.t_max,
        )

    def fit(self, A, Y):
        y_in = np.asarray(Y)
        a, y = check_system(A, Y)
        result = zap_solve(a, y, self._config())
        self.result_ = result
        self.n_iter_ = result.iterations_run
        self.stop_reason_ = result.stop_reason.value
        self._store(result.solution, y_in)
        tol = 100 * self.kappa_min if self.zero_tol is None else self.zero_tol
        self.support_ = np.flatnonzero(np.linalg.norm(result.solution, axis=1) > tol)
        return self


class SimultaneousOMP(_RecoveryMixin, BaseEstimator):
    """Simultaneous OMP with a fixed number of joint support rows.

    ``n_nonzero_rows=None`` allows up to ``M`` picks, stopping on the
    residual tolerance.
    """

    def __init__(self, n_nonzero_rows=None, residual_tol=1e-10):
        self.n_nonzero_rows = n_nonzero_rows
        self.residual_tol = residual_tol

    def fit(self, A, Y):
        y_in = np.asarray(Y)
        a, y = check_system(A, Y)
        k = self.n_nonzero_rows if self.n_nonzero_rows is not None else a.shape[0]
        result = somp_solve(a, y, k, self.residual_tol)
        self.result_ = result
        self.support_ = np.array(sorted(result.support), dtype=int)
        self.n_iter_ = len(result.support)
        self._store(result.solution, y_in)
        return self
