import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from unclab.fitting import PowerLogFit, fit_power_log

MS = [16, 32, 64, 128, 256, 512, 1024, 2048, 4096]


def test_exact_power():
    fit = fit_power_log([(M, M**0.25) for M in MS])
    assert fit.power == pytest.approx(0.25, abs=1e-12)
    assert fit.logpow == 0.0
    assert fit.r2 == pytest.approx(1.0)


def test_pure_log_growth():
    fit = fit_power_log([(M, math.log(M + 1) ** 0.5) for M in MS])
    assert abs(fit.power) < 0.02
    assert fit.logpow == pytest.approx(0.5, abs=0.05)


def test_small_regime():
    ts = [2.0**-k for k in range(4, 14)]
    fit = fit_power_log([(t, 3 * t**0.5) for t in ts], regime="Small")
    assert fit.power == pytest.approx(0.5, abs=1e-12)
    assert fit.predict([1e-3])[0] == pytest.approx(3 * 1e-3**0.5, rel=1e-10)


def test_saturating_sequence_is_not_called_logarithmic():
    # a bounded sequence creeping up to its limit is a pure power ~ 0
    fit = fit_power_log([(M, 2 - M**-0.5) for M in MS[:6]])
    assert fit.logpow == 0.0
    assert abs(fit.power) < 0.05


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1.5), st.integers(0, 2**31))
def test_noisy_power_recovered(power, seed):
    rng = np.random.default_rng(seed)
    Ms = np.array(MS, dtype=float)
    vals = Ms**power * (1 + rng.uniform(-0.05, 0.05, Ms.size))
    fit = fit_power_log(zip(Ms, vals), noise=0.05)
    assert fit.power == pytest.approx(power, abs=0.03)
    assert fit.logpow == 0.0


@pytest.mark.parametrize("points, message", [
    ([(1, 1), (10, 2), (100, 3)], "at least 4"),
    ([(16, 1), (32, 2), (64, 3), (128, 4)], "decades"),
    ([(1, 1), (10, -2), (100, 3), (1000, 4)], "positive"),
])
def test_rejects_bad_input(points, message):
    with pytest.raises(ValueError, match=message):
        fit_power_log(points)


def test_forced_models():
    pts = [(M, M**0.3 * math.log(M + 1)) for M in MS]
    forced = fit_power_log(pts, model="power_log")
    assert forced.logpow > 0
    plain = fit_power_log(pts, model="power")
    assert plain.logpow == 0
    with pytest.raises(ValueError):
        fit_power_log(pts, model="spline")


def test_estimator_api():
    est = PowerLogFit(regime="Large", noise=0.01)
    assert est.get_params()["noise"] == 0.01
    twin = clone(est)
    X = np.array(MS, dtype=float)[:, None]
    y = X[:, 0] ** 0.75
    twin.fit(X, y)
    np.testing.assert_allclose(twin.predict(X), y, rtol=1e-10)
    assert twin.score(X, y) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        PowerLogFit().fit(np.ones((5, 2)), np.ones(5))
