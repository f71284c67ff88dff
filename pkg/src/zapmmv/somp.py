"""Simultaneous orthogonal matching pursuit, the greedy MMV baseline."""
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_system
from .exceptions import DegenerateSupportError, ParameterError


@dataclass
class SompResult:
    solution: np.ndarray
    support: list = field(default_factory=list)
    residual_norms: list = field(default_factory=list)


def somp_solve(a, y, k, residual_tol=1e-10):
    """Greedy joint-support selection.

    At each step the column whose correlations with the residual have the
    largest l2 norm across the ``L`` measurement vectors, divided by the
    column norm, joins the support (ties go to the lowest index), then
    ``Y`` is refit by least squares on the support. Stops after ``k`` picks
    or once ``||R||_F <= residual_tol * ||Y||_F``.

    ``residual_norms[0]`` is ``||Y||_F``; entry ``j`` is the residual after
    the ``j``-th pick.
    """
    a, y = check_system(a, y)
    m, n = a.shape
    if int(k) != k or not 1 <= k <= m:
        raise ParameterError(f"k must be an integer in [1, {m}], got {k}")
    if residual_tol < 0:
        raise ParameterError(f"residual_tol must be nonnegative, got {residual_tol}")
    col_norms = np.linalg.norm(a, axis=0)
    if np.any(col_norms == 0):
        raise ParameterError("sensing matrix has a zero column")

    x = np.zeros((n, y.shape[1]))
    y_norm = np.linalg.norm(y)
    residual = y
    support = []
    norms = [float(y_norm)]
    selected = np.zeros(n, dtype=bool)
    coef = None
    while len(support) < k and norms[-1] > residual_tol * y_norm:
        scores = np.linalg.norm(a.T @ residual, axis=1) / col_norms
        scores[selected] = -np.inf
        idx = int(np.argmax(scores))  # first maximum, so lowest index wins ties
        support.append(idx)
        selected[idx] = True
        sub = a[:, support]
        if np.linalg.matrix_rank(sub) < len(support):
            raise DegenerateSupportError(f"columns {support} are linearly dependent")
        coef = np.linalg.lstsq(sub, y, rcond=None)[0]
        residual = y - sub @ coef
        norms.append(float(np.linalg.norm(residual)))
    if support:
        x[support] = coef
    return SompResult(solution=x, support=support, residual_norms=norms)
