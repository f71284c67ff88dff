r"""Row-sparsity penalties.

The joint sparsity of ``X`` is the number of nonzero rows. It is relaxed to

.. math::

    J(X) = \sum_i F_\alpha(\|x_i\|_2), \qquad
    F_\alpha(w) = \begin{cases} 2\alpha|w| - \alpha^2 w^2 & |w| \le 1/\alpha \\
                                1 & \text{otherwise} \end{cases}

whose row-wise subgradient drives the zero-point attraction step.
"""
from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix
from .exceptions import ParameterError

DEFAULT_ZERO_TOL = 1e-9


@dataclass(frozen=True)
class PenaltyParams:
    alpha: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha > 0):
            raise ParameterError(f"alpha must be a positive finite number, got {self.alpha}")


def _alpha(p):
    return p.alpha if isinstance(p, PenaltyParams) else PenaltyParams(float(p)).alpha


def row_l2_norms(x):
    x = check_matrix(x, "X")
    return np.sqrt(np.einsum("ij,ij->i", x, x))


def exact_l20(x, zero_tol=DEFAULT_ZERO_TOL):
    """Number of rows whose l2 norm exceeds ``zero_tol``."""
    if zero_tol < 0:
        raise ParameterError(f"zero_tol must be nonnegative, got {zero_tol}")
    return int(np.count_nonzero(row_l2_norms(x) > zero_tol))


def f_alpha_scalar(w, p):
    """The surrogate ``F_alpha``; accepts scalars or arrays."""
    alpha = _alpha(p)
    w = np.abs(np.asarray(w, dtype=np.float64))
    out = np.where(w <= 1.0 / alpha, 2.0 * alpha * w - alpha**2 * w**2, 1.0)
    return float(out) if out.ndim == 0 else out


def f_alpha_subderiv(w, p):
    """Subderivative of ``F_alpha`` with ``sgn(0) = 0``."""
    alpha = _alpha(p)
    w = np.asarray(w, dtype=np.float64)
    out = np.where(np.abs(w) <= 1.0 / alpha, 2.0 * alpha * np.sign(w) - 2.0 * alpha**2 * w, 0.0)
    return float(out) if out.ndim == 0 else out


def approx_penalty(x, p):
    return float(np.sum(f_alpha_scalar(row_l2_norms(x), p)))


def penalty_gradient(x, p):
    """Gradient matrix of :func:`approx_penalty`.

    Row ``i`` is ``f_alpha(||x_i||) / ||x_i|| * x_i``; zero rows and rows with
    norm at or beyond ``1/alpha`` give zero rows.
    """
    x = check_matrix(x, "X")
    return _gradient(x, _alpha(p))


def _gradient(x, alpha):
    norms = np.sqrt(np.einsum("ij,ij->i", x, x))
    active = (norms > 0) & (norms <= 1.0 / alpha)
    scale = np.zeros_like(norms)
    w = norms[active]
    scale[active] = (2.0 * alpha - 2.0 * alpha**2 * w) / w
    return scale[:, None] * x


def _penalty(x, alpha):
    norms = np.sqrt(np.einsum("ij,ij->i", x, x))
    vals = np.where(norms <= 1.0 / alpha, 2.0 * alpha * norms - alpha**2 * norms**2, 1.0)
    return float(np.sum(vals))
