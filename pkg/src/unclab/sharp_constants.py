"""Numerical lower bounds for the sharp constants and a few related suprema.

Two constants are estimated:

* the discrete constant, the largest ratio ``||T_c||_{L^q(torus)} /
  ||c (1+|n|)^gamma||_{l^p}`` over trigonometric polynomials of degree ``M``
* the local constant, the largest ratio ``(∫_{|x|<=t} |f|^q)^{1/q} /
  ||f^ |xi|^D||_p`` over functions on the line

Every estimate carries the function that attains it, so the value is a
certified lower bound: re-evaluating the ratio at the witness gives it back.

The module also evaluates the weight functionals used to characterise
weighted Fourier inequalities for monotone radial weights (:func:`appendix_C1`,
:func:`appendix_C2`, :func:`lemma_A2_sup`) and the splitting bound of
:func:`upperbound_via_splitting`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize, special
from sklearn.base import BaseEstimator

from .exponents import ExponentPair, conjugate, fmt
from .fitting import FitResult, fit_power_log
from .norms import (
    Gaussian,
    ModulatedBump,
    TrigPoly,
    expected_random_sign_norm,
    gaussian_weighted_norm,
    sphere_area,
    torus_grid_size,
    trigpoly_lq_norm,
    weighted_lp_seq_norm,
)
from .regime_oracle import (
    AsymProfile,
    critical_index,
    discrete_constant_profile,
    local_constant_profile,
    scale_index,
)
from .weights import BrokenWeight, WeightLike, radial_power_integral, radial_weight


class Method(str, enum.Enum):
    SPECTRAL = "Spectral"
    PROJECTED_ASCENT = "ProjectedAscent"
    RANDOM_SIGN = "RandomSign"
    SINGLE_MODE = "SingleMode"
    EXTREME_POINT = "ExtremePoint"
    FAMILY_SEARCH = "FamilySearch"
    GRID_SUP = "GridSup"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class OptimizerBudget:
    max_iter: int = 400
    restarts: int = 8
    tol: float = 1e-9
    oversample: int = 8
    sign_trials: int = 16


@dataclass
class ConstantEstimate:
    value: float
    witness: object
    method: Method
    settings: dict = field(default_factory=dict)
    converged: bool = True

    @property
    def two_sided(self) -> bool:
        """Only grid suprema are heuristic in both directions."""
        return self.method is Method.GRID_SUP


# -- discrete constant ---------------------------------------------------------


def _as_pair(e) -> ExponentPair:
    return e if isinstance(e, ExponentPair) else ExponentPair(*e)


def discrete_ratio(T: TrigPoly, e, gamma, oversample: int = 8) -> float:
    """``||T||_{L^q} / ||c||_{l^p, gamma}`` evaluated exactly as the estimator does."""
    e = _as_pair(e)
    den = weighted_lp_seq_norm(T, gamma, float(e.p))
    if den == 0:
        raise ValueError("the zero polynomial has no ratio")
    return trigpoly_lq_norm(T, float(e.q), oversample) / den


def _weights(d: int, M: int, gamma: float) -> np.ndarray:
    r = np.arange(-M, M + 1)
    grids = np.meshgrid(*([r] * d), indexing="ij")
    freq = np.sqrt(sum(g.astype(float) ** 2 for g in grids))
    return (1 + freq) ** gamma, freq


def _single_mode(d: int, M: int, index) -> TrigPoly:
    arr = np.zeros((2 * M + 1,) * d, dtype=complex)
    arr[tuple(i + M for i in index)] = 1.0
    return TrigPoly(arr, d)


def _embed(T: TrigPoly, M: int) -> TrigPoly:
    if T.M > M:
        raise ValueError("cannot embed a polynomial of higher degree")
    arr = np.zeros((2 * M + 1,) * T.d, dtype=complex)
    lo = M - T.M
    arr[tuple(slice(lo, lo + 2 * T.M + 1) for _ in range(T.d))] = T.coeffs
    return TrigPoly(arr, T.d)


class _TorusObjective:
    """Log-ratio and its Wirtinger gradient in the weighted coordinates ``b = c w``."""

    def __init__(self, d: int, M: int, p: float, q: float, w: np.ndarray, oversample: int):
        self.d, self.M, self.p, self.q, self.w = d, M, p, q, w
        self.L = torus_grid_size(M, oversample)
        self.idx = np.arange(-M, M + 1) % self.L
        self.shape = (2 * M + 1,) * d

    def values(self, c: np.ndarray) -> np.ndarray:
        arr = np.zeros((self.L,) * self.d, dtype=complex)
        arr[np.ix_(*([self.idx] * self.d))] = c
        return np.fft.ifftn(arr) * self.L**self.d

    def moment_grad(self, c: np.ndarray):
        """``F = mean |T|^q`` and ``dF/d conj(c)`` (up to the factor ``q/2``)."""
        T = self.values(c)
        a = np.abs(T)
        top = a.max()
        if top == 0:
            return 0.0, np.zeros_like(c)
        a_s = np.maximum(a, 1e-12 * top)
        F = float(np.mean(a**self.q))
        G = a_s ** (self.q - 2) * T
        back = np.fft.fftn(G) / self.L**self.d
        return F, back[np.ix_(*([self.idx] * self.d))]

    def log_ratio_grad(self, b: np.ndarray):
        c = b / self.w
        F, gc = self.moment_grad(c)
        mag = np.abs(b)
        top = mag.max()
        if F == 0 or top == 0:
            return -math.inf, np.zeros_like(b)
        msm = np.sqrt(mag**2 + (1e-12 * top) ** 2)
        Gp = float(np.sum(mag**self.p))
        gb = msm ** (self.p - 2) * b
        val = math.log(F) / self.q - math.log(Gp) / self.p
        grad = 0.5 * (gc / self.w / F - gb / Gp)
        return val, grad


def _power_iteration(obj: _TorusObjective, b0: np.ndarray, budget: OptimizerBudget):
    """Ascent for ``p = 2``: ``b <- grad F(b) / |grad F(b)|`` increases the convex moment."""
    b = b0 / np.linalg.norm(b0)
    best_val, _ = obj.log_ratio_grad(b)
    converged = False
    for _ in range(budget.max_iter):
        _, gc = obj.moment_grad(b / obj.w)
        g = gc / obj.w
        norm = np.linalg.norm(g)
        if norm == 0:
            break
        nb = g / norm
        val, _ = obj.log_ratio_grad(nb)
        if val <= best_val:
            converged = True
            break
        gain = val - best_val
        b, best_val = nb, val
        if gain < budget.tol:
            converged = True
            break
    return b, best_val, converged


def _lbfgs(obj: _TorusObjective, b0: np.ndarray, budget: OptimizerBudget):
    """Gradient ascent on the log-ratio over complex ``b`` (finite ``p``)."""
    n = b0.size

    def fun(z):
        b = (z[:n] + 1j * z[n:]).reshape(obj.shape)
        val, g = obj.log_ratio_grad(b)
        if not math.isfinite(val):
            return 1e300, np.zeros_like(z)
        # d/dRe = 2 Re(grad), d/dIm = 2 Im(grad) for the Wirtinger derivative
        g = g.ravel()
        return -val, -2 * np.concatenate([g.real, g.imag])

    z0 = np.concatenate([b0.real.ravel(), b0.imag.ravel()])
    res = optimize.minimize(fun, z0, jac=True, method="L-BFGS-B",
                            options={"maxiter": budget.max_iter, "ftol": budget.tol, "gtol": 1e-12})
    b = (res.x[:n] + 1j * res.x[n:]).reshape(obj.shape)
    return b, -float(res.fun), bool(res.success)


def _box_ascent(obj: _TorusObjective, b0: np.ndarray, budget: OptimizerBudget):
    """``p = inf``: maximise the moment over ``|b_n| <= 1`` in polar coordinates."""
    n = b0.size
    r0 = np.clip(np.abs(b0).ravel(), 0.0, 1.0)
    th0 = np.angle(b0).ravel()

    def fun(z):
        r, th = z[:n], z[n:]
        b = (r * np.exp(1j * th)).reshape(obj.shape)
        F, gc = obj.moment_grad(b / obj.w)
        if F == 0:
            return 1e300, np.zeros_like(z)
        g = (gc / obj.w).ravel() * (obj.q / F)  # gradient of log F wrt conj(b)
        u = np.exp(1j * th)
        # b = r u: d/dr = 2 Re(conj(u) g), d/dth = 2 Re(conj(i r u) g)
        dr = 2 * np.real(np.conj(u) * g)
        dth = 2 * np.real(np.conj(1j * r * u) * g)
        return -math.log(F) / obj.q, -np.concatenate([dr, dth]) / obj.q

    bounds = [(0.0, 1.0)] * n + [(None, None)] * n
    res = optimize.minimize(fun, np.concatenate([r0, th0]), jac=True, method="L-BFGS-B",
                            bounds=bounds,
                            options={"maxiter": budget.max_iter, "ftol": budget.tol, "gtol": 1e-12})
    b = (res.x[:n] * np.exp(1j * res.x[n:])).reshape(obj.shape)
    return b, -float(res.fun), bool(res.success)


def estimate_discrete_constant(d, e, gamma, M: int, budget: OptimizerBudget | None = None,
                               seed: int = 0, warm_start: TrigPoly | None = None) -> ConstantEstimate:
    """Certified lower bound on the degree-``M`` discrete constant.

    Corners with a known extremal structure are solved exactly: ``p = q = 2``
    and ``p = 1`` by a single mode at the origin, ``q = inf`` by the dual
    sequence ``c_n = (1+|n|)^(-gamma p')``.  Otherwise the ratio is ascended
    from structured starts, a random-sign start and random restarts, and the
    best polynomial is kept.
    """
    e = _as_pair(e)
    d = int(d)
    M = int(M)
    if M < 1:
        raise ValueError("degree M must be >= 1")
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    budget = budget or OptimizerBudget()
    p, q = float(e.p), float(e.q)
    settings = {"d": d, "p": fmt(e.p), "q": fmt(e.q), "gamma": gamma, "M": M, "seed": seed,
                **asdict(budget)}
    w, _ = _weights(d, M, gamma)

    def finish(T, method, converged=True, **extra):
        value = discrete_ratio(T, e, gamma, budget.oversample)
        return ConstantEstimate(value, T, method, {**settings, **extra}, converged)

    if p == 1 or (p == 2 and q == 2):
        method = Method.SINGLE_MODE if p == 1 else Method.SPECTRAL
        return finish(_single_mode(d, M, (0,) * d), method)
    if math.isinf(q):
        dual = w ** (-1.0) if math.isinf(p) else w ** (-float(e.p_conj))
        return finish(TrigPoly(dual.astype(complex), d), Method.EXTREME_POINT)

    obj = _TorusObjective(d, M, p, q, w, budget.oversample)
    rng = np.random.default_rng(seed)
    _, freq = _weights(d, M, 0.0)
    flat = (1 + freq) ** (-gamma - d * (1 - 1 / p - 1 / q))
    starts = [
        ("mode0", _single_mode(d, M, (0,) * d).coeffs),
        ("modeM", _single_mode(d, M, (M,) + (0,) * (d - 1)).coeffs),
        ("flat", flat.astype(complex)),
        ("random_sign", flat * rng.choice([-1.0, 1.0], size=flat.shape)),
    ]
    if warm_start is not None:
        starts.append(("warm", _embed(warm_start, M).coeffs))
    for k in range(budget.restarts):
        z = rng.standard_normal(flat.shape) + 1j * rng.standard_normal(flat.shape)
        starts.append((f"restart{k}", z))

    if p == 2:
        method, ascend = Method.SPECTRAL, _power_iteration
    elif math.isinf(p):
        method, ascend = Method.PROJECTED_ASCENT, _box_ascent
    else:
        method, ascend = Method.PROJECTED_ASCENT, _lbfgs

    best = None
    all_converged = True
    for name, c0 in starts:
        b0 = np.asarray(c0, dtype=complex) * w
        if not np.any(b0):
            continue
        b, val, conv = ascend(obj, b0, budget)
        all_converged &= conv
        T = TrigPoly(b / w, d)
        ratio = discrete_ratio(T, e, gamma, budget.oversample)
        if best is None or ratio > best[0]:
            best = (ratio, T, name)

    khinchin = None
    if budget.sign_trials >= 2:
        flat_T = TrigPoly(flat.astype(complex), d)
        mean, _ = expected_random_sign_norm(flat_T, q, trials=budget.sign_trials, seed=seed,
                                            oversample=budget.oversample)
        khinchin = mean ** (1 / q) / weighted_lp_seq_norm(flat_T, gamma, p)
    ratio, T, name = best
    return ConstantEstimate(ratio, T, method,
                            {**settings, "best_start": name, "random_sign_mean_ratio": khinchin},
                            all_converged)


class DiscreteConstantSweep(BaseEstimator):
    """Ladder of discrete-constant estimates with warm starts and a growth fit.

    ``fit(Ms)`` runs the estimator at each degree (ascending, each run seeded
    from the previous witness so the values are nondecreasing) and fits the
    growth law; ``predict`` evaluates the fitted law.
    """

    def __init__(self, d: int = 1, p=2, q=4, gamma=0.0, seed: int = 0,
                 budget: OptimizerBudget | None = None):
        self.d = d
        self.p = p
        self.q = q
        self.gamma = gamma
        self.seed = seed
        self.budget = budget

    def fit(self, Ms, y=None):
        Ms = sorted(int(m) for m in np.ravel(Ms))
        if not Ms:
            raise ValueError("empty degree ladder")
        e = ExponentPair(self.p, self.q)
        self.estimates_ = []
        prev = None
        for k, M in enumerate(Ms):
            est = estimate_discrete_constant(self.d, e, self.gamma, M, self.budget,
                                             seed=self.seed + k,
                                             warm_start=None if prev is None else prev.witness)
            self.estimates_.append(est)
            prev = est
        self.Ms_ = np.asarray(Ms)
        self.values_ = np.asarray([est.value for est in self.estimates_])
        self.profile_ = discrete_constant_profile(self.d, e, self.gamma)
        self.fit_ = fit_power_log(zip(self.Ms_, self.values_)) if len(Ms) >= 4 else None
        return self

    def predict(self, Ms):
        if self.fit_ is None:
            raise ValueError("too few degrees to fit a growth law")
        return self.fit_.predict(np.ravel(Ms))

    def agrees(self, power_tol: float = 0.05) -> bool:
        return profile_agrees(self.profile_, self.fit_, "Large", power_tol)


def profile_agrees(profile: AsymProfile, fit: FitResult | None, regime: str = "Large",
                   power_tol: float = 0.05) -> bool:
    """Fitted power within tolerance and log term present exactly when predicted."""
    if fit is None or not profile.is_finite:
        return False
    term = profile.large if regime == "Large" else profile.small
    if term is None:
        return False
    has_log = abs(float(term.logpow)) > 0
    return abs(fit.power - float(term.power)) <= power_tol and (fit.logpow != 0) == has_log


# -- local constant ------------------------------------------------------------


def _gaussian_ball_norm(g: Gaussian, t: float, q: float) -> float:
    """``(∫_{|x|<=t} |g|^q)^{1/q}`` in closed form."""
    if math.isinf(q):
        return abs(g.amplitude)
    kappa = math.pi * q / g.sigma**2
    s = g.d / 2
    part = special.gammainc(s, kappa * t * t) * math.exp(special.gammaln(s))
    return abs(g.amplitude) * (sphere_area(g.d) * 0.5 * kappa ** (-s) * part) ** (1 / q)


def _bump_ball_norm(f: ModulatedBump, t: float, q: float) -> float:
    """``(∫_{|x|<=t} |f|^q)^{1/q}`` for a modulated bump by composite Gauss-Legendre."""
    x, w = np.polynomial.legendre.leggauss(64)
    panels = max(8, int(math.ceil(8 * t / f.t * max(f.poly.M, 1))))
    edges = np.linspace(-t, t, panels + 1)
    mids = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1] - edges[0])
    pts = (mids[:, None] + half * x[None, :]).ravel()
    vals = np.abs(f(pts))
    if math.isinf(q):
        return float(vals.max())
    return float((half * np.sum(np.tile(w, panels) * vals**q)) ** (1 / q))


def local_ratio(f, e, D: WeightLike, t: float) -> float:
    """``(∫_{|x|<=t}|f|^q)^{1/q} / ||f^ |xi|^D||_p`` for the closed-form families."""
    e = _as_pair(e)
    D = BrokenWeight.parse(D)
    p, q = float(e.p), float(e.q)
    if isinstance(f, Gaussian):
        num = _gaussian_ball_norm(f, t, q)
        den = gaussian_weighted_norm(f.fourier(), D, p)
    elif isinstance(f, ModulatedBump):
        num = _bump_ball_norm(f, t, q)
        den = f.fourier().weighted_norm(D, p)
    else:
        raise TypeError("local ratios are available for Gaussian and ModulatedBump witnesses")
    if den == 0:
        raise ValueError("degenerate witness")
    return num / den


def _random_sign_poly(K: int, p: float, D: BrokenWeight, s: float, seed: int) -> TrigPoly:
    """Random-sign modes whose weighted l^p mass is spread evenly (the A.2 profile)."""
    rng = np.random.default_rng(seed)
    n = np.arange(-K, K + 1)
    wn = radial_weight(D, np.maximum(np.abs(n), 0.5) / s)
    mags = wn ** (-1.0) if math.isinf(p) else wn ** (-p / (p - 1)) if p > 1 else np.ones(n.size)
    return TrigPoly(mags * rng.choice([-1.0, 1.0], size=n.size), 1)


def estimate_local_constant(d, e, D: WeightLike, t: float, budget: OptimizerBudget | None = None,
                            seed: int = 0) -> ConstantEstimate:
    """Best ratio over dilated Gaussians, dilated bumps and random-sign bump trains.

    Gaussians are available in any dimension; the bump families are one
    dimensional.  Each family has one dilation parameter, tuned by a coarse
    log-grid followed by a bounded scalar search.
    """
    e = _as_pair(e)
    D = BrokenWeight.parse(D)
    d = int(d)
    t = float(t)
    if not t > 0:
        raise ValueError("t must be positive")
    budget = budget or OptimizerBudget()
    settings = {"d": d, "p": fmt(e.p), "q": fmt(e.q), "D": str(D), "t": t, "seed": seed}

    candidates: list[tuple[float, object, str]] = []

    def tune(make: Callable[[float], object], lo: float, hi: float, points: int, name: str):
        grid = np.linspace(lo, hi, points)
        vals = []
        for s in grid:
            try:
                vals.append(local_ratio(make(math.exp(s)), e, D, t))
            except (ValueError, ZeroDivisionError, OverflowError):
                vals.append(0.0)
        vals = np.nan_to_num(np.asarray(vals), nan=0.0, posinf=0.0)
        j = int(np.argmax(vals))
        a, b = grid[max(j - 1, 0)], grid[min(j + 1, points - 1)]
        best_s = grid[j]
        if b > a:
            res = optimize.minimize_scalar(lambda s: -local_ratio(make(math.exp(s)), e, D, t),
                                           bounds=(a, b), method="bounded",
                                           options={"xatol": 1e-6})
            if -res.fun > vals[j]:
                best_s = res.x
        f = make(math.exp(best_s))
        candidates.append((local_ratio(f, e, D, t), f, name))

    lt = math.log(t)
    # the best width may sit at the scale of t or at the weight's break (scale 1)
    lo, hi = min(lt, 0.0), max(lt, 0.0)
    tune(lambda s: Gaussian(s, 1.0, d), lo - 14, hi + 6, int(4 * (hi - lo + 20)) + 1, "gaussian")
    if d == 1:
        one = TrigPoly(np.ones(1), 1)
        tune(lambda s: ModulatedBump(one, s), lo - 6, hi + 3, int(2 * (hi - lo + 9)) + 1, "bump")
        if float(e.p) > 2 and float(e.q) < 2:
            for K in (4, 16):
                tune(lambda s, K=K: ModulatedBump(_random_sign_poly(K, float(e.p), D, s, seed), s),
                     lt - 2, lt + 2, 9, f"random_sign{K}")
    value, f, name = max(candidates, key=lambda c: c[0])
    return ConstantEstimate(value, f, Method.FAMILY_SEARCH, {**settings, "family": name})


class LocalConstantSweep(BaseEstimator):
    """Local-constant estimates over a ladder of radii, fitted in one regime."""

    def __init__(self, d: int = 1, p=2, q=2, D=(0, 1), regime: str = "Large", seed: int = 0):
        self.d = d
        self.p = p
        self.q = q
        self.D = D
        self.regime = regime
        self.seed = seed

    def fit(self, ts, y=None):
        e = ExponentPair(self.p, self.q)
        self.ts_ = np.sort(np.asarray(np.ravel(ts), dtype=float))
        self.estimates_ = [estimate_local_constant(self.d, e, self.D, t, seed=self.seed)
                           for t in self.ts_]
        self.values_ = np.asarray([est.value for est in self.estimates_])
        self.profile_ = local_constant_profile(self.d, e, self.D)
        self.fit_ = fit_power_log(zip(self.ts_, self.values_), self.regime) if self.ts_.size >= 4 else None
        return self

    def predict(self, ts):
        if self.fit_ is None:
            raise ValueError("too few radii to fit a growth law")
        return self.fit_.predict(np.ravel(ts))

    def agrees(self, power_tol: float = 0.05) -> bool:
        return profile_agrees(self.profile_, self.fit_, self.regime, power_tol)


# -- monotone radial weights ------------------------------------------------------


class Monotonicity(str, enum.Enum):
    NON_INCREASING = "NonIncreasing"
    NON_DECREASING = "NonDecreasing"


@dataclass(frozen=True)
class WeightSpec:
    """Radial weight ``r^E log(e + r)^log_power``, optionally cut off to zero beyond ``cutoff``.

    ``E`` is a broken exponent.  A cutoff is only meaningful for a
    non-increasing weight.
    """

    exponent: BrokenWeight
    tag: Monotonicity
    log_power: float = 0.0
    cutoff: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "exponent", BrokenWeight.parse(self.exponent))
        object.__setattr__(self, "tag", Monotonicity(self.tag))
        a1, a2 = self.exponent.floats()
        b = float(self.log_power)
        if self.tag is Monotonicity.NON_INCREASING:
            ok = a1 <= 0 and a2 <= 0 and b <= 0
        else:
            ok = a1 >= 0 and a2 >= 0 and b >= 0 and self.cutoff is None
        if not ok:
            raise ValueError(f"weight r^{self.exponent} log^{fmt(b)} is not {self.tag.value}")
        if self.cutoff is not None and not self.cutoff > 0:
            raise ValueError("cutoff must be positive")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = radial_weight(self.exponent, r) * np.log(math.e + r) ** self.log_power
        if self.cutoff is not None:
            out = np.where(r > self.cutoff, 0.0, out)
        return out

    def power(self, k: float) -> "WeightSpec":
        """``u^k`` (a negative ``k`` flips the monotonicity)."""
        tag = self.tag
        if k < 0:
            if self.cutoff is not None:
                raise ValueError("a cut-off weight has no negative powers")
            tag = (Monotonicity.NON_DECREASING if tag is Monotonicity.NON_INCREASING
                   else Monotonicity.NON_INCREASING)
        return WeightSpec(self.exponent * k, tag, self.log_power * k, self.cutoff)


def _ball_volume(d: int) -> float:
    return sphere_area(d) / d


def _radius_of_measure(s: float, d: int) -> float:
    return (s / _ball_volume(d)) ** (1 / d)


def ball_integral(u: WeightSpec, d: int, rho: float) -> float:
    """``∫_{|x|<=rho} u(|x|) dx``, i.e. the distribution integral up to measure ``|B_rho|``."""
    if rho <= 0:
        return 0.0
    top = rho if u.cutoff is None else min(rho, u.cutoff)
    shifted = u.exponent + (d - 1)
    if u.log_power == 0:
        return sphere_area(d) * radial_power_integral(shifted, 0.0, top)
    if radial_power_integral(shifted, 0.0, min(top, 1.0)) == math.inf:
        return math.inf
    g = lambda r: float(u(r)) * r ** (d - 1)
    total = 0.0
    for lo, hi in ((0.0, min(top, 1.0)), (1.0, top)):
        if hi > lo:
            total += integrate.quad(g, lo, hi, limit=400, epsabs=0, epsrel=1e-12)[0]
    if math.isinf(top):
        a2 = float(shifted.a2)
        if a2 >= -1:
            return math.inf
    return sphere_area(d) * total


def _sup_ball(u: WeightSpec, rho: float) -> float:
    """Essential sup of a monotone weight over the ball of radius ``rho``."""
    if u.tag is Monotonicity.NON_INCREASING:
        return float(radial_weight(u.exponent, 0.0)) if rho > 0 else 0.0
    return float(u(rho)) if math.isfinite(rho) else math.inf


def _distribution_norm(u: WeightSpec, d: int, q: float, s: float) -> float:
    """``(∫_0^s u^{*,q})^{1/q}`` with the sup for ``q = inf``."""
    rho = _radius_of_measure(s, d)
    if math.isinf(q):
        return _sup_ball(u, rho)
    return ball_integral(u.power(q), d, rho) ** (1 / q)


def _check_tags(u: WeightSpec, v: WeightSpec):
    if u.tag is not Monotonicity.NON_INCREASING:
        raise ValueError("u must be radial non-increasing")
    if v.tag is not Monotonicity.NON_DECREASING:
        raise ValueError("v must be radial non-decreasing (v^-1 non-increasing)")


def _log_sup(F: Callable[[float], float], lo: float = -40.0, hi: float = 40.0, points: int = 801):
    """Supremum of ``F(exp(z))`` over ``z`` in ``[lo, hi]``; ``inf`` if it grows at an edge."""
    z = np.linspace(lo, hi, points)
    vals = np.array([F(math.exp(x)) for x in z])
    if np.any(np.isposinf(vals)):
        return math.inf
    finite = np.isfinite(vals) & (vals > 0)
    if not finite.any():
        return 0.0
    logs = np.where(finite, np.log(np.where(finite, vals, 1.0)), -np.inf)
    step = z[1] - z[0]
    for a, b in ((0, 1), (-1, -2)):
        if finite[a] and finite[b]:
            slope = (logs[a] - logs[b]) / step
            if slope > 1e-6:
                return math.inf
    j = int(np.argmax(logs))
    a, b = z[max(j - 1, 0)], z[min(j + 1, points - 1)]
    res = optimize.minimize_scalar(lambda x: -F(math.exp(x)), bounds=(a, b), method="bounded",
                                   options={"xatol": 1e-10})
    return max(float(vals[j]), float(-res.fun))


def appendix_C1(u: WeightSpec, v: WeightSpec, e, d: int = 1) -> float:
    """``sup_s (∫_0^s u^{*,q})^{1/q} (∫_0^{1/s} v_*^{-p'})^{1/p'}``."""
    _check_tags(u, v)
    e = _as_pair(e)
    q, pc = float(e.q), float(e.p_conj)
    vinv = v.power(-1.0)

    def F(s):
        a = _distribution_norm(u, d, q, s)
        b = _distribution_norm(vinv, d, pc, 1 / s)
        if a == 0 or b == 0:
            return 0.0
        return a * b

    return _log_sup(F)


def _c2_integrand(u: WeightSpec, v: WeightSpec, e: ExponentPair, d: int):
    q, p, pc = float(e.q), float(e.p), float(e.p_conj)
    r = float(e.r)
    vinv = v.power(-1.0)
    uq = u.power(q)
    vol = _ball_volume(d)

    def g(s):
        rho = _radius_of_measure(s, d)
        density = float(uq(rho)) if rho > 0 else 0.0
        if density == 0:
            return 0.0
        U = ball_integral(uq, d, rho)
        rho_inv = _radius_of_measure(1 / s, d)
        if math.isinf(pc):
            V = _sup_ball(vinv, rho_inv)
            V_pow = V ** r
        else:
            V_pow = ball_integral(vinv.power(pc), d, rho_inv) ** (r / pc)
        U_pow = U ** (r / p) if not math.isinf(p) else 1.0
        return density * U_pow * V_pow

    return g, vol


def appendix_C2(u: WeightSpec, v: WeightSpec, e, d: int = 1,
                truncate: tuple[float, float] | None = None) -> float:
    """``(∫_0^∞ u^{*,q}(s) U(s)^{r/p} V(1/s)^{r/p'} ds)^{1/r}``.

    ``truncate=(lo, hi)`` restricts the outer integral to ``[lo, hi]``; without
    it a power-law end behaviour that is not integrable gives ``inf``.
    """
    _check_tags(u, v)
    e = _as_pair(e)
    if e.r is None:
        raise ValueError("the exponent r is defined only for q < p")
    if not (float(e.q) >= 1 and max(float(e.q), float(e.p_conj)) >= 2):
        raise ValueError("needs max(q, p') >= 2")
    r = float(e.r)
    g, _ = _c2_integrand(u, v, e, d)
    h = lambda z: g(math.exp(z)) * math.exp(z)  # integrand in log-measure

    if truncate is not None:
        lo, hi = (math.log(x) for x in truncate)
    else:
        for end in (-60.0, 60.0):
            z = np.array([end - 2, end - 1, end]) if end > 0 else np.array([end, end + 1, end + 2])
            vals = np.array([h(x) for x in z])
            if np.any(np.isinf(vals)):
                return math.inf
            if np.all(vals > 0):
                slope = np.polyfit(z, np.log(vals), 1)[0]
                outward = slope if end > 0 else -slope
                if outward > -1e-3:
                    return math.inf
        lo, hi = -60.0, 60.0
    edges = np.linspace(lo, hi, int(max(8, math.ceil(hi - lo))) + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate.quad(h, a, b, limit=200, epsabs=0, epsrel=1e-10)[0]
    return total ** (1 / r)


def lemma_A2_sup(u: WeightSpec, v: WeightSpec, e, d: int = 1, grid: int = 801,
                 span: tuple[float, float] = (-40.0, 40.0)) -> float:
    """``sup_s s^{d/2} (∫_{|x|<=1/s} u^q)^{1/q} (∫_{|x|>=s} v^{-p#})^{1/p#}``."""
    e = _as_pair(e)
    if not float(e.p) > 2:
        raise ValueError("needs p > 2")
    if v.tag is not Monotonicity.NON_DECREASING:
        raise ValueError("v must be radial non-decreasing")
    q, ps = float(e.q), float(e.p_sharp)
    vpow = v.power(-ps)

    def tail(s):
        total = ball_integral(vpow, d, math.inf)
        if math.isinf(total):
            return math.inf
        return total - ball_integral(vpow, d, s)

    if math.isinf(tail(1.0)):
        return math.inf

    def F(s):
        if math.isinf(q):
            a = float(np.max(u(np.linspace(0, 1 / s, 257)[1:])))
        else:
            a = ball_integral(u.power(q), d, 1 / s) ** (1 / q)
        b = max(tail(s), 0.0) ** (1 / ps)
        return s ** (d / 2) * a * b

    return _log_sup(F, *span, points=grid)


# -- splitting upper bound ---------------------------------------------------------


def upperbound_via_splitting(d, e, A: WeightLike, B: WeightLike, f, t: float) -> float:
    """``C(t) t^{L^T} ||f^ |xi|^B||_p + t^{-A} ||f |x|^A||_q`` for a split ``B = D + L``.

    ``D`` is chosen case by case so that the local constant ``C`` for the
    weight ``D`` is finite and ``C(t) t^{L^T}`` has the growth of the
    non-symmetric profile; ``C(t)`` is the local profile with unit constant.
    """
    e = _as_pair(e)
    A, B = BrokenWeight.parse(A), BrokenWeight.parse(B)
    d = int(d)
    D = split_weight(d, e, B)
    if D is None:
        raise ValueError(f"no admissible split of B = {B} for {e}: the hypotheses fail")
    prof = local_constant_profile(d, e, D)
    if not prof.is_finite:
        raise ValueError(f"no admissible split of B = {B} for {e}: the local constant is infinite")
    L = B - D
    if isinstance(f, Gaussian):
        if f.amplitude == 0:
            return 0.0
        fb = gaussian_weighted_norm(f.fourier(), B, float(e.p))
        fa = gaussian_weighted_norm(f, A, float(e.q))
    elif isinstance(f, ModulatedBump):
        if not np.any(f.poly.coeffs):
            return 0.0
        fb = f.fourier().weighted_norm(B, float(e.p))
        fa = f.weighted_norm(A, float(e.q))
    else:
        raise TypeError("splitting bounds need a Gaussian or ModulatedBump witness")
    C = prof.evaluate(t)
    return C * float(radial_weight(L.T, t)) * fb + fa / float(radial_weight(A, t))


def _between(lo: float, hi: float) -> float:
    return 0.5 * (lo + hi)


def split_weight(d: int, e, B: WeightLike) -> BrokenWeight | None:
    """Local weight ``D <= B`` used by :func:`upperbound_via_splitting`, or ``None``."""
    e = _as_pair(e)
    B = BrokenWeight.parse(B)
    p, q = float(e.p), float(e.q)
    b1, b2 = B.floats()
    dp = d * (1 - 1 / p)
    if math.isinf(q):
        if p == 1:
            return BrokenWeight(0, B.a2)
        if not b2 > dp:
            return None
        return BrokenWeight(min(b1, dp / 2), B.a2)
    delta0 = -float(scale_index(d, e))
    if p <= q:
        if b2 < delta0:
            return None
        d1 = B.a1 if b1 <= delta0 else max(0.0, delta0)
        return BrokenWeight(d1, max(delta0, 0.0))
    if max(q, float(e.p_conj)) >= 2:
        floor = delta0
    else:
        floor = float(critical_index(d, e))
    if not b2 > floor:
        return None
    d2 = _between(max(floor, 0.0), min(b2, dp)) if min(b2, dp) > max(floor, 0.0) else b2
    if b1 <= floor:
        d1 = b1
    else:
        d1 = min(b1, _between(max(floor, 0.0), dp))
    return BrokenWeight(d1, d2)


__all__ = [
    "ConstantEstimate",
    "DiscreteConstantSweep",
    "LocalConstantSweep",
    "Method",
    "Monotonicity",
    "OptimizerBudget",
    "WeightSpec",
    "appendix_C1",
    "appendix_C2",
    "ball_integral",
    "discrete_ratio",
    "estimate_discrete_constant",
    "estimate_local_constant",
    "lemma_A2_sup",
    "local_ratio",
    "profile_agrees",
    "split_weight",
    "upperbound_via_splitting",
]
