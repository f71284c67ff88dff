import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from zapmmv import SimultaneousOMP, ZapMMV, generate


def test_get_params_and_clone():
    est = ZapMMV(alpha=2.0, t_max=100)
    params = est.get_params()
    assert params["alpha"] == 2.0 and params["t_max"] == 100
    assert clone(est).get_params() == params
    assert SimultaneousOMP(n_nonzero_rows=3).set_params(residual_tol=0.0).residual_tol == 0.0


def test_zap_estimator_fit_predict():
    p = generate(200, 50, 10, 8, seed=21)
    est = ZapMMV().fit(p.a, p.y)
    assert est.solution_.shape == (200, 10)
    assert est.coef_.shape == (10, 200)
    assert list(est.support_) == list(p.support_true)
    np.testing.assert_allclose(est.predict(p.a), p.y, atol=1e-8)
    assert est.score(p.a, p.y) == pytest.approx(1.0)
    assert est.stop_reason_ in ("StepSizeFloor", "IterationBudget")


def test_somp_estimator_single_target():
    p = generate(60, 20, 1, 3, seed=2)
    est = SimultaneousOMP(n_nonzero_rows=3).fit(p.a, p.y.ravel())
    assert list(est.support_) == list(p.support_true)
    assert est.predict(p.a).shape == (20,)


def test_not_fitted():
    with pytest.raises(NotFittedError):
        ZapMMV().predict(np.ones((2, 3)))
