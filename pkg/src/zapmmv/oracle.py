"""Brute-force references for small instances.

Everything here enumerates subsets of columns, so inputs are capped and
the caps raise rather than truncate.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_matrix, check_system
from .exceptions import OracleGuardError, ParameterError

MAX_SUPPORTS = 10**6
MAX_SPARK_COLUMNS = 20
RANK_RTOL = 1e-10


def numerical_rank(x, rtol=RANK_RTOL):
    """Number of singular values above ``rtol`` times the largest one."""
    s = np.linalg.svd(np.atleast_2d(x), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def exhaustive_solve(a, y, k):
    """Least squares fit over every size-``k`` support; keep the best.

    Supports are visited in lexicographic order and only a strictly smaller
    residual replaces the incumbent, so ties resolve to the smallest support.
    """
    a, y = check_system(a, y)
    m, n = a.shape
    if int(k) != k or not 1 <= k <= m:
        raise ParameterError(f"k must be an integer in [1, {m}], got {k}")
    k = int(k)
    count = math.comb(n, k)
    if count > MAX_SUPPORTS:
        raise OracleGuardError(
            f"instance too large for oracle: C({n}, {k}) = {count} supports exceeds {MAX_SUPPORTS}"
        )
    best_res, best_support, best_coef = np.inf, None, None
    for support in itertools.combinations(range(n), k):
        sub = a[:, support]
        coef = np.linalg.lstsq(sub, y, rcond=None)[0]
        res = np.linalg.norm(y - sub @ coef)
        if res < best_res:
            best_res, best_support, best_coef = res, support, coef
    x = np.zeros((n, y.shape[1]))
    x[list(best_support)] = best_coef
    return x


def spark(a):
    """Smallest number of linearly dependent columns (``N + 1`` if none)."""
    a = check_matrix(a, "A")
    m, n = a.shape
    if n > MAX_SPARK_COLUMNS:
        raise OracleGuardError(f"instance too large for spark: {n} columns exceeds {MAX_SPARK_COLUMNS}")
    for size in range(1, n + 1):
        if size > m:
            # any m + 1 vectors in R^m are dependent
            return size
        for cols in itertools.combinations(range(n), size):
            if numerical_rank(a[:, cols]) < size:
                return size
    return n + 1


@dataclass(frozen=True)
class UniquenessReport:
    spark: int
    rank_y: int
    bound: float
    k: int
    unique: bool


def uniqueness_check(a, y, k):
    """Check ``k < (spark(A) + rank(Y) - 1) / 2``."""
    a, y = check_system(a, y)
    s = spark(a)
    r = numerical_rank(y)
    bound = (s + r - 1) / 2
    return UniquenessReport(spark=s, rank_y=r, bound=bound, k=int(k), unique=bool(k < bound))
