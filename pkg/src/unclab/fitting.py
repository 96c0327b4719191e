"""Least-squares extraction of power-log growth rates.

A measured sequence ``(x_i, v_i)`` is matched against

    log v = power * log x + logpow * log log(e + s) + const

where ``s = x`` in the large regime and ``s = 1/x`` in the small regime.

Model selection treats the log factor as a genuine growth term, so in the
automatic mode it is fitted with ``power >= 0`` and ``logpow > 0``.  A
negative log coefficient only absorbs finite-size curvature of a pure power.
The log model is kept when it removes at least :data:`LOG_MODEL_GAIN` of the
pure-power residual sum of squares and its coefficient is statistically
distinguishable from zero.  When the caller knows the relative measurement noise, a pure
power whose residual stays within that noise is never replaced by the log
model: over short ladders the two are otherwise indistinguishable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import lsq_linear
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

# Fraction of the pure-power RSS the log model must remove.  Slowly saturating
# sequences (a bounded constant approached like M^-1/2) remove about 70%
# over a 16..512 ladder; genuine log growth removes more than 95%.
LOG_MODEL_GAIN = 0.9
# Minimum |logpow| / stderr for the log term to count as real.
LOG_MODEL_SIGNIFICANCE = 3.0
MIN_POINTS = 4
MIN_DECADES = 1.0


@dataclass(frozen=True)
class FitResult:
    power: float
    logpow: float
    r2: float
    points_used: int
    const: float = 0.0
    residual: float = 0.0
    power_stderr: float = 0.0
    regime: str = "Large"

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(self.const + self.power * np.log(x) + self.logpow * _loglog(x, self.regime))


def _loglog(x: np.ndarray, regime: str) -> np.ndarray:
    s = x if regime == "Large" else 1.0 / x
    return np.log(np.log(math.e + s))


def _lstsq(design: np.ndarray, y: np.ndarray):
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    rss = float(resid @ resid)
    dof = max(y.size - design.shape[1], 1)
    cov = np.linalg.pinv(design.T @ design) * (rss / dof)
    return coef, rss, np.sqrt(np.clip(np.diag(cov), 0.0, None))


class PowerLogFit(RegressorMixin, BaseEstimator):
    """Estimator form of :func:`fit_power_log`.

    ``X`` is a single column of arguments and ``y`` the measured values.
    ``model`` forces ``"power"`` or ``"power_log"`` instead of the automatic
    choice.  ``noise`` is the known relative perturbation of the values.
    """

    def __init__(self, regime: str = "Large", model: str = "auto",
                 gain: float = LOG_MODEL_GAIN, significance: float = LOG_MODEL_SIGNIFICANCE,
                 noise: float = 0.0):
        self.regime = regime
        self.model = model
        self.gain = gain
        self.significance = significance
        self.noise = noise

    def fit(self, X, y):
        X, y = check_X_y(X, y, ensure_min_samples=MIN_POINTS)
        if X.shape[1] != 1:
            raise ValueError("PowerLogFit expects a single argument column")
        if self.regime not in ("Large", "Small"):
            raise ValueError(f"regime must be 'Large' or 'Small', got {self.regime!r}")
        if self.model not in ("auto", "power", "power_log"):
            raise ValueError(f"unknown model {self.model!r}")
        x = X[:, 0]
        if np.any(x <= 0) or np.any(y <= 0):
            raise ValueError("arguments and values must be positive")
        if math.log10(x.max() / x.min()) < MIN_DECADES - 1e-9:
            raise ValueError(f"arguments must span at least {MIN_DECADES:g} decades")

        lx, ly = np.log(x), np.log(y)
        ones = np.ones_like(lx)
        c_pow, rss_pow, se_pow = _lstsq(np.column_stack([lx, ones]), ly)
        design = np.column_stack([lx, _loglog(x, self.regime), ones])
        c_log, rss_log, se_log = _lstsq(design, ly)

        use_log = self.model == "power_log"
        if self.model == "auto":
            bounded = lsq_linear(design, ly, bounds=([0, 0, -np.inf], [np.inf, np.inf, np.inf]))
            c_log = bounded.x
            rss_log = float(np.sum((ly - design @ c_log) ** 2))
            improves = rss_log < (1 - self.gain) * rss_pow
            significant = c_log[1] > self.significance * se_log[1]
            within_noise = math.sqrt(rss_pow / ly.size) <= math.log1p(self.noise)
            use_log = bool(improves and significant and not within_noise)
        if use_log:
            self.coef_ = (float(c_log[0]), float(c_log[1]), float(c_log[2]))
            rss, self.power_stderr_ = rss_log, float(se_log[0])
        else:
            self.coef_ = (float(c_pow[0]), 0.0, float(c_pow[1]))
            rss, self.power_stderr_ = rss_pow, float(se_pow[0])
        tss = float(np.sum((ly - ly.mean()) ** 2))
        self.r2_ = 1.0 if tss == 0 else float(min(max(1 - rss / tss, 0.0), 1.0))
        self.residual_ = math.sqrt(rss / ly.size)
        self.n_points_ = int(ly.size)
        self.uses_log_ = use_log
        return self

    def predict(self, X):
        check_is_fitted(self, "coef_")
        x = check_array(X)[:, 0]
        power, logpow, const = self.coef_
        return np.exp(const + power * np.log(x) + logpow * _loglog(x, self.regime))

    def result(self) -> FitResult:
        check_is_fitted(self, "coef_")
        power, logpow, const = self.coef_
        return FitResult(power, logpow, self.r2_, self.n_points_, const, self.residual_,
                         self.power_stderr_, self.regime)


def fit_power_log(points, regime: str = "Large", model: str = "auto",
                  noise: float = 0.0) -> FitResult:
    """Fit ``(argument, value)`` pairs; see the module docstring for the model."""
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be (argument, value) pairs")
    if pts.shape[0] < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} points, got {pts.shape[0]}")
    est = PowerLogFit(regime=regime, model=model, noise=noise).fit(pts[:, :1], pts[:, 1])
    return est.result()


__all__ = ["FitResult", "PowerLogFit", "fit_power_log", "LOG_MODEL_GAIN"]
