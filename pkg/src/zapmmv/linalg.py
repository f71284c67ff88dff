"""Dense matrix helpers, the pseudoinverse of a fat matrix and the affine
projection onto ``{X : A X = Y}``.

Matrices are plain ``numpy.ndarray`` objects of dtype float64. The text
matrix format used by the CLI is also handled here::

    3,2
    1.0,2.0
    3.0,4.0
    5.0,6.0
"""
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg

from ._validation import check_matrix
from .exceptions import DimensionError, SingularGramError, ZapError

#: Largest accepted 2-norm condition number of the Gram matrix ``A A^T``.
MAX_GRAM_CONDITION = 1e12


def matmul(a, b):
    """Matrix product with a readable shape error."""
    a = check_matrix(a, "a")
    b = check_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}: inner dimensions differ")
    return a @ b


@dataclass(frozen=True)
class Projector:
    """Sensing matrix ``A`` together with its precomputed pseudoinverse.

    Attributes
    ----------
    sensing : ndarray of shape (M, N)
    pseudoinverse : ndarray of shape (N, M)
        ``A^T (A A^T)^{-1}``.
    gram_condition : float
        2-norm condition number of ``A A^T``.
    """

    sensing: np.ndarray
    pseudoinverse: np.ndarray
    gram_condition: float

    @property
    def shape(self):
        return self.sensing.shape

    def project(self, x, y):
        return project(self, x, y)


def build_projector(a):
    """Factorize ``A A^T`` once and return a :class:`Projector`.

    Raises
    ------
    DimensionError
        If ``A`` is not strictly wider than tall.
    SingularGramError
        If ``A A^T`` is not positive definite or its condition number
        exceeds :data:`MAX_GRAM_CONDITION`.
    """
    a = check_matrix(a, "A")
    m, n = a.shape
    if m >= n:
        raise DimensionError(f"sensing matrix must be under-determined (M < N), got shape {a.shape}")
    gram = a @ a.T
    eigvals = np.linalg.eigvalsh(gram)
    if eigvals[0] <= 0.0:
        raise SingularGramError(f"singular Gram matrix: smallest eigenvalue {eigvals[0]:.3e}")
    cond = float(eigvals[-1] / eigvals[0])
    if cond > MAX_GRAM_CONDITION:
        raise SingularGramError(f"singular Gram matrix: condition estimate {cond:.3e} exceeds {MAX_GRAM_CONDITION:.0e}")
    try:
        factor = scipy.linalg.cho_factor(gram, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularGramError(f"singular Gram matrix: {exc}") from exc
    # (A A^T)^{-1} A is the transpose of A^T (A A^T)^{-1} since the Gram matrix is symmetric
    pinv = scipy.linalg.cho_solve(factor, a).T
    return Projector(sensing=a, pseudoinverse=np.ascontiguousarray(pinv), gram_condition=cond)


def project(p, x, y):
    """Return ``X + A^+ (Y - A X)``, the closest point of the solution space."""
    x = check_matrix(x, "X")
    y = check_matrix(y, "Y")
    m, n = p.sensing.shape
    if x.shape[0] != n or y.shape[0] != m or x.shape[1] != y.shape[1]:
        raise DimensionError(
            f"inconsistent shapes: A {p.sensing.shape}, X {x.shape}, Y {y.shape}"
        )
    return _project(p, x, y)


def _project(p, x, y):
    # unchecked hot path used inside the solver loop
    return x + p.pseudoinverse @ (y - p.sensing @ x)


def relative_residual(a, x, y):
    """``||A X - Y||_F / ||Y||_F``, or the absolute residual when ``Y = 0``."""
    r = np.linalg.norm(a @ x - y)
    ny = np.linalg.norm(y)
    return float(r / ny) if ny > 0 else float(r)


def write_matrix(path, x):
    x = check_matrix(x)
    rows, cols = x.shape
    lines = [f"{rows},{cols}"]
    lines.extend(",".join(format(v, ".17g") for v in row) for row in x)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_matrix(path):
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ZapError(f"{path}: empty matrix file")
    try:
        rows, cols = (int(v) for v in lines[0].split(","))
    except ValueError as exc:
        raise ZapError(f"{path}: header must be 'rows,cols', got {lines[0]!r}") from exc
    if rows < 1 or cols < 1:
        raise ZapError(f"{path}: dimensions must be positive, got {rows},{cols}")
    body = lines[1:]
    if len(body) != rows:
        raise DimensionError(f"{path}: header declares {rows} rows, found {len(body)}")
    data = np.empty((rows, cols))
    for i, line in enumerate(body):
        fields = line.split(",")
        if len(fields) != cols:
            raise DimensionError(f"{path}: row {i} has {len(fields)} values, expected {cols}")
        try:
            data[i] = [float(v) for v in fields]
        except ValueError as exc:
            raise ZapError(f"{path}: row {i}: {exc}") from exc
    return check_matrix(data, str(path))
