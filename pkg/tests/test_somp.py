import numpy as np
import pytest

from zapmmv import DegenerateSupportError, ParameterError, exhaustive_solve, generate, somp_solve


def test_zero_measurements():
    p = generate(12, 6, 2, 2, seed=0)
    res = somp_solve(p.a, np.zeros((6, 2)), 3)
    assert res.support == []
    assert np.all(res.solution == 0)


def test_orthonormal_single_column(rng):
    q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    a = np.hstack([q, rng.standard_normal((6, 4))])
    y = np.outer(q[:, 2], [1.0, -2.0])
    res = somp_solve(a, y, 1)
    assert res.support == [2]


def test_orthogonal_design_recovers_exactly(rng):
    q, _ = np.linalg.qr(rng.standard_normal((8, 8)))
    a = q[:, :7] * rng.uniform(0.5, 2.0, 7)  # mutually orthogonal, unequal norms
    x = np.zeros((7, 3))
    x[[1, 4, 6]] = rng.standard_normal((3, 3))
    res = somp_solve(a, a @ x, 3)
    assert sorted(res.support) == [1, 4, 6]
    np.testing.assert_allclose(res.solution, x, atol=1e-12)


def test_matches_oracle_support():
    p = generate(8, 4, 2, 1, seed=4)
    ref = exhaustive_solve(p.a, p.y, 1)
    res = somp_solve(p.a, p.y, 1)
    assert res.support == list(np.flatnonzero(np.linalg.norm(ref, axis=1)))


@pytest.mark.parametrize("seed", range(10))
def test_invariants(seed):
    p = generate(40, 15, 3, 6, seed=seed)
    res = somp_solve(p.a, p.y, 6)
    assert len(set(res.support)) == len(res.support) <= 6
    assert all(0 <= i < 40 for i in res.support)
    assert all(b < a for a, b in zip(res.residual_norms, res.residual_norms[1:]))
    off = np.setdiff1d(np.arange(40), res.support)
    assert np.all(res.solution[off] == 0)


def test_early_stop_on_residual():
    p = generate(40, 15, 3, 2, seed=1)
    res = somp_solve(p.a, p.y, 10)
    assert len(res.support) == 2
    assert sorted(res.support) == list(p.support_true)


def test_rejects_bad_k_and_zero_column(rng):
    a = rng.standard_normal((4, 8))
    with pytest.raises(ParameterError):
        somp_solve(a, np.ones((4, 1)), 5)
    a[:, 3] = 0
    with pytest.raises(ParameterError):
        somp_solve(a, np.ones((4, 1)), 2)


def test_degenerate_support():
    # both columns are equal: after the first pick the only candidate left is the duplicate
    a = np.array([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(DegenerateSupportError):
        somp_solve(a, np.array([[1.0], [2.0]]), 2)
