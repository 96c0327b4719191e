"""Explicit test functions for the weighted uncertainty inequalities.

Three constructions are provided.

:class:`ModulatedBumpFamily` dilates ``phi(x) T(x)`` with ``phi^`` compactly
supported, which turns weighted norms of the function into torus and
weighted sequence norms of the coefficients of ``T``.  :func:`lower_bound_H`
uses it to bound the optimal growth function of the non-symmetric inequality
from below.

:class:`PeakPlusTailFamily` adds a tall narrow bump to a random-sign train of
unit bumps at the integers.  Frequency-side quantities are averaged over the
signs by Monte Carlo.

Dilations ``lam^d f(lam x)`` of a fixed function give the simplest family.

:func:`falsify_symmetric` runs all three against a symmetric inequality
``||f||_p ||f^||_p' <= C || |x|^A f ||_p || |xi|^B f^ ||_p'`` and reports a
divergence witness when the ratio of the two sides grows along a family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import optimize

from .exponents import ExponentPair, conjugate
from .norms import (
    BumpProfile,
    ClosedFormFn,
    Gaussian,
    ModulatedBump,
    PeakPlusTail,
    TrigPoly,
    default_bump,
    gaussian_weighted_norm,
    mode_integrals,
    mode_sups,
    trigpoly_lq_norm,
    weighted_lq_norm,
)
from .regime_oracle import critical_index
from .sharp_constants import OptimizerBudget, estimate_discrete_constant
from .weights import BrokenWeight, WeightLike, radial_weight

UNWEIGHTED = BrokenWeight(0, 0)


def _exponent(p) -> float:
    p = float(p)
    if not p >= 1:
        raise ValueError(f"exponent must be in [1, inf], got {p}")
    return p


def _dual(p: float) -> float:
    return float(conjugate(p)) if math.isfinite(p) else 1.0


# -- modulated bumps ---------------------------------------------------------


@dataclass
class ModulatedBumpFamily:
    """``f_t(x) = phi(x/t) T(x/t)`` with ``T = sum c_n e(n x)`` in one dimension.

    The four norm functionals are exact up to quadrature error.  The
    ``*_prediction`` methods give the coefficient-side expressions the norms
    are comparable to, including the norm of the bump itself; ``*_bracket``
    returns the quotient of the two.
    """

    d: int
    poly: TrigPoly
    t: float = 1.0
    bump: BumpProfile = field(default_factory=default_bump)

    def __post_init__(self):
        if self.d != 1:
            raise NotImplementedError("modulated bumps are implemented for d = 1")
        if not self.t > 0:
            raise ValueError("t must be positive")

    @property
    def f(self) -> ModulatedBump:
        return ModulatedBump(self.poly, 1.0, self.bump)

    @property
    def f_t(self) -> ModulatedBump:
        return ModulatedBump(self.poly, self.t, self.bump)

    @property
    def f_hat_t(self):
        return self.f_t.fourier()

    def dilated(self, t: float) -> "ModulatedBumpFamily":
        return replace(self, t=float(t))

    def scaled(self, k: float) -> "ModulatedBumpFamily":
        return replace(self, poly=TrigPoly(self.poly.coeffs * k, self.poly.d))

    def space_norm(self, q, A: WeightLike = UNWEIGHTED) -> float:
        """``||f_t |x|^A||_q``."""
        return self.f_t.weighted_norm(A, _exponent(q))

    def freq_norm(self, p, B: WeightLike = UNWEIGHTED) -> float:
        """``||f_t^ |xi|^B||_p``."""
        return self.f_hat_t.weighted_norm(B, _exponent(p))

    def space_prediction(self, q, A: WeightLike = UNWEIGHTED) -> float:
        """``||phi||_q t^(A + d/q) ||T||_q``."""
        q = _exponent(q)
        scale = float(radial_weight(A, self.t)) * self.t ** (self.d / q if math.isfinite(q) else 0.0)
        return self.bump.smooth_lp(q) * scale * trigpoly_lq_norm(self.poly, q)

    def freq_prediction(self, p, B: WeightLike = UNWEIGHTED) -> float:
        """``||phi^||_p t^(d/p') (sum |c_n|^p ((1+|n|)/t)^(pB))^(1/p)``."""
        p = _exponent(p)
        n = np.abs(np.arange(-self.poly.M, self.poly.M + 1))
        c = np.abs(self.poly.coeffs)
        w = radial_weight(B, (1 + n) / self.t)
        seq = float(np.max(c * w)) if math.isinf(p) else float(np.sum((c * w) ** p)) ** (1 / p)
        return self.bump.compact_lp(p) * self.t ** (self.d / _dual(p)) * seq

    def space_bracket(self, q, A: WeightLike = UNWEIGHTED) -> float:
        return self.space_norm(q, A) / self.space_prediction(q, A)

    def freq_bracket(self, p, B: WeightLike = UNWEIGHTED) -> float:
        return self.freq_norm(p, B) / self.freq_prediction(p, B)


def _as_poly(c) -> TrigPoly:
    if isinstance(c, TrigPoly):
        return c
    if isinstance(c, Mapping):
        return TrigPoly.from_dict(c)
    arr = np.asarray(c, dtype=complex)
    if arr.ndim != 1 or arr.size % 2 == 0:
        raise ValueError("coefficient arrays must have odd length 2M+1, centred at n = 0")
    return TrigPoly(arr, 1)


def build_modulated(d: int, c, t: float, bump: BumpProfile | None = None) -> ModulatedBumpFamily:
    """Modulated bump with coefficients ``c`` (dict ``{n: c_n}``, array or polynomial)."""
    return ModulatedBumpFamily(int(d), _as_poly(c), float(t), bump or default_bump())


# -- lower bounds for the growth function ------------------------------------------


@dataclass(frozen=True)
class HPoint:
    target: float
    abscissa: float
    ordinate: float
    t: float
    M: int


def lower_bound_H(d, e, A: WeightLike, B: WeightLike, x_values: Sequence[float],
                  M: int | None = None, budget: OptimizerBudget | None = None,
                  seed: int = 0) -> list[HPoint]:
    """Achieved points ``(||f_t |x|^A||_q, ||f_t||_q)`` with ``||f_t^ |xi|^B||_p = 1``.

    For a target ``x > 1`` the polynomial degree follows the dilation
    (``M = floor(t)``) and the coefficients are the discrete-constant witness
    for the weight ``B1``; for ``x <= 1`` the degree is 1 and the weight is
    ``B2``.  Passing ``M`` fixes the degree instead.  The dilation is then
    solved so the abscissa meets the target; each ordinate is a lower bound
    for the growth function at its abscissa.
    """
    e = e if isinstance(e, ExponentPair) else ExponentPair(*e)
    A, B = BrokenWeight.parse(A), BrokenWeight.parse(B)
    p, q = float(e.p), float(e.q)
    witnesses: dict[tuple[int, float], TrigPoly] = {}

    def witness(deg: int, gamma: float) -> TrigPoly:
        key = (deg, gamma)
        if key not in witnesses:
            witnesses[key] = estimate_discrete_constant(d, e, gamma, deg, budget, seed).witness
        return witnesses[key]

    def evaluate(poly: TrigPoly, t: float):
        fam = build_modulated(d, poly, t)
        nu = fam.freq_norm(p, B)
        return fam.space_norm(q, A) / nu, fam.space_norm(q) / nu

    def solve(poly: TrigPoly, x: float) -> float:
        seen: dict[float, float] = {}

        def g(s: float) -> float:
            if s not in seen:
                seen[s] = math.log(evaluate(poly, math.exp(s))[0]) - math.log(x)
            return seen[s]

        lo, hi = -1.0, 1.0
        while g(lo) > 0 and lo > -60:
            lo -= 4.0
        while g(hi) < 0 and hi < 60:
            hi += 4.0
        if g(lo) > 0 or g(hi) < 0:
            raise ValueError(f"abscissa {x:g} is out of reach of the family")
        return math.exp(optimize.brentq(g, lo, hi, xtol=1e-9, rtol=1e-9))

    out = []
    for x in x_values:
        x = float(x)
        if not x > 0:
            raise ValueError("targets must be positive")
        gamma = float(B.a1 if x > 1 else B.a2)
        deg = int(M) if M is not None else 1
        t = solve(witness(deg, gamma), x)
        if M is None and x > 1:
            for _ in range(8):
                new = max(1, int(math.floor(t)))
                if new == deg:
                    break
                deg = new
                t = solve(witness(deg, gamma), x)
        X, Y = evaluate(witness(deg, gamma), t)
        out.append(HPoint(x, X, Y, t, deg))
    return out


# -- symmetric ratio ---------------------------------------------------------------


def symmetric_ratio(f, d: int, p, A: WeightLike, B: WeightLike, method: str = "auto") -> float:
    """``||f||_p ||f^||_p' / (|| |x|^A f ||_p || |xi|^B f^ ||_p')``.

    ``method="quad"`` forces adaptive quadrature for closed forms.  Peak-plus-
    tail families report their sign-averaged ratio.
    """
    p = _exponent(p)
    if p < 2:
        raise ValueError("the symmetric inequality is studied for p >= 2")
    A, B = BrokenWeight.parse(A), BrokenWeight.parse(B)
    if isinstance(f, PeakPlusTailFamily):
        return f.ratio(p, A, B).ratio
    pd = _dual(p)
    if isinstance(f, ModulatedBumpFamily):
        f = f.f_t
    if getattr(f, "d", 1) != d:
        raise ValueError(f"function lives in dimension {getattr(f, 'd', 1)}, not {d}")
    if isinstance(f, Gaussian) and method == "auto":
        g, gh = f, f.fourier()
        parts = (gaussian_weighted_norm(g, UNWEIGHTED, p), gaussian_weighted_norm(gh, UNWEIGHTED, pd),
                 gaussian_weighted_norm(g, A, p), gaussian_weighted_norm(gh, B, pd))
    elif isinstance(f, ModulatedBump) and method == "auto":
        fh = f.fourier()
        parts = (f.weighted_norm(UNWEIGHTED, p), fh.weighted_norm(UNWEIGHTED, pd),
                 f.weighted_norm(A, p), fh.weighted_norm(B, pd))
    elif isinstance(f, PeakPlusTail):
        fam = PeakPlusTailFamily(f.N, f.tail, 1.0, f.bump)
        return fam.ratio(p, A, B, signs=f.signs).ratio
    elif isinstance(f, ClosedFormFn):
        fh = f.fourier()
        parts = (weighted_lq_norm(f, UNWEIGHTED, p), weighted_lq_norm(fh, UNWEIGHTED, pd),
                 weighted_lq_norm(f, A, p), weighted_lq_norm(fh, B, pd))
    else:
        raise TypeError("expected a closed-form function or a family")
    return _ratio(parts[0] * parts[1], parts[2] * parts[3])


def _ratio(num: float, den: float) -> float:
    if (num == 0 and den == 0) or (math.isinf(num) and math.isinf(den)):
        raise ValueError("degenerate witness: the ratio is undefined")
    if den == 0:
        return math.inf
    return num / den


def _dilate(f, lam: float):
    if isinstance(f, Gaussian):
        return f.dilate(lam)
    if isinstance(f, ModulatedBump):
        return replace(f, t=f.t / lam)
    if isinstance(f, ModulatedBumpFamily):
        return f.dilated(f.t / lam)
    raise TypeError("dilations are implemented for Gaussians and modulated bumps")


def scaling_family_ratio(f, d: int, p, A: WeightLike, B: WeightLike,
                         lambdas: Sequence[float]) -> list[tuple[float, float]]:
    """Ratios of the dilates ``lam^d f(lam x)`` (modulated bumps are rescaled in ``t``)."""
    return [(float(lam), symmetric_ratio(_dilate(f, float(lam)), d, p, A, B)) for lam in lambdas]


# -- peak plus tail ------------------------------------------------------------------


@dataclass(frozen=True)
class LogSeq:
    """``c_n = 1 / sqrt(|n|^d log(1+|n|))``: square-summable only up to a log log."""

    d: int = 1

    def values(self, n) -> np.ndarray:
        r = np.abs(np.asarray(n, dtype=float))
        if np.any(r < 1):
            raise ValueError("the sequence is defined for |n| >= 1")
        return 1.0 / np.sqrt(r**self.d * np.log1p(r))

    def _shells(self, M: int):
        """Lattice norms ``2 <= |n| <= M`` (one-sided in one dimension)."""
        if self.d == 1:
            return np.arange(2, M + 1, dtype=float)
        axes = np.arange(-M, M + 1)
        grids = np.meshgrid(*([axes] * self.d), indexing="ij")
        r = np.sqrt(sum(g.astype(float) ** 2 for g in grids)).ravel()
        return r[(r >= 2) & (r <= M)]

    def l2_partial(self, M: int) -> float:
        return float(np.sqrt(np.sum(self.values(self._shells(M)) ** 2)))

    def weighted_lp_partial(self, p, a2, M: int) -> float:
        """``(sum_{2<=|n|<=M} |c_n|^p |n|^{p a2})^(1/p)``."""
        r = self._shells(M)
        v = self.values(r) * r ** float(a2)
        p = float(p)
        return float(np.max(v)) if math.isinf(p) else float(np.sum(v**p) ** (1 / p))

    def tail(self, M: int) -> np.ndarray:
        if self.d != 1:
            raise NotImplementedError("peak-plus-tail families are one-dimensional")
        return self.values(np.arange(2, M + 1))


@dataclass(frozen=True)
class RatioEstimate:
    ratio: float
    log_stderr: float
    parts: tuple[float, float, float, float]


@dataclass
class PeakPlusTailFamily:
    """``N phi(N x) + sum_{2<=|n|<=M} eps_n c_n phi(x - n)`` measured at scale ``lam``.

    The weights are ``(|x|/lam)^A`` and ``(lam |xi|)^B``, which is the same as
    measuring ``lam f(lam x)`` with the plain weights.  ``tail`` holds ``c_n``
    for ``n = 2..M`` and is used at ``-n`` as well.  The bumps have disjoint
    supports, so space-side norms are exact sums; frequency-side moments are
    averaged over independent random signs.
    """

    N: float
    tail: np.ndarray
    lam: float = 1.0
    bump: BumpProfile = field(default_factory=default_bump)
    grid: int = 256
    d: int = 1

    def __post_init__(self):
        self.tail = np.asarray(self.tail, dtype=float)
        if not (self.N >= 1 and self.lam > 0):
            raise ValueError("need N >= 1 and lam > 0")
        if self.bump.radius > 0.5:
            raise ValueError("the space bump must fit in (-1/2, 1/2)")

    @property
    def M(self) -> int:
        return self.tail.size + 1

    def function(self, signs: np.ndarray | None = None) -> PeakPlusTail:
        return PeakPlusTail(self.N, self.tail, signs, self.bump)

    def overlap(self) -> float:
        """Relative overlap of the peak and tail supports (zero by construction)."""
        return max(0.0, self.bump.radius / self.N + self.bump.radius - 2.0)

    def space_norm(self, p, A: WeightLike = UNWEIGHTED) -> float:
        """``|| f (|x|/lam)^A ||_p``; independent of the signs."""
        p = _exponent(p)
        A = BrokenWeight.parse(A)
        n = np.arange(2, self.M + 1)
        if math.isinf(p):
            peak = self.N * float(mode_sups(self.bump, A, np.zeros(1), self.N * self.lam)[0])
            return max(peak, self._tail_sup(A, n))
        peak = self.N ** (p - 1) * float(mode_integrals(self.bump, A, p, np.zeros(1), self.N * self.lam)[0])
        tail = 2 * float(np.sum(np.abs(self.tail) ** p * mode_integrals(self.bump, A, p, n, self.lam))) if n.size else 0.0
        return (peak + tail) ** (1 / p)

    def _tail_sup(self, A: BrokenWeight, n: np.ndarray, keep: int = 16) -> float:
        if not n.size:
            return 0.0
        # a coarse grid ranks the bumps; only the leaders are resolved finely
        coarse = np.abs(self.tail) * mode_sups(self.bump, A, n, self.lam, points=17)
        top = np.argsort(coarse)[-keep:]
        fine = np.abs(self.tail[top]) * mode_sups(self.bump, A, n[top], self.lam, points=4097)
        return float(np.max(fine))

    def _outer(self, s: float, B: BrokenWeight, K: float) -> float:
        """Peak-only part ``∫_{|xi|>K} |phi^(xi/N)|^s (lam|xi|)^{sB} dxi``."""
        R = self.bump.smooth_tail_radius(1e-15)
        lo = K / self.N
        if lo >= R:
            return 0.0
        x, gw = leggauss(32)
        edges = np.arange(lo, R + 1.0, 1.0)
        mid, half = 0.5 * (edges[1:] + edges[:-1]), 0.5 * (edges[1:] - edges[:-1])
        v = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        wts = (half[:, None] * gw[None, :]).ravel()
        vals = np.abs(self.bump.smooth(v)) ** s * radial_weight(B, self.lam * self.N * v) ** s
        return 2 * self.N * float(vals @ wts)

    def freq_moments(self, p, Bs: Sequence[WeightLike], draws: int = 64, seed=0,
                     signs: np.ndarray | None = None) -> np.ndarray:
        """Per-draw ``∫ |f^|^{p'} (lam|xi|)^{p'B}`` for each weight in ``Bs``.

        Returns an array of shape ``(draws, len(Bs))``; for ``p = 2`` without
        fixed signs the exact expectation is returned as a single row.
        The frequency axis is folded onto one period of the sign sum
        ``S(xi)`` and sampled at ``grid`` midpoints per unit interval.
        """
        p = _exponent(p)
        s = _dual(p)
        Bs = [BrokenWeight.parse(b) for b in Bs]
        G = self.grid
        K = int(math.ceil(self.bump.smooth_tail_radius(1e-12)))
        u = (np.arange(G) + 0.5) / G
        xi = (np.arange(-K, K)[:, None] + u[None, :])
        peak = self.bump.smooth(xi / self.N)
        unit = self.bump.smooth(xi)
        W = [radial_weight(b, self.lam * xi) ** s / G for b in Bs]
        outer = np.array([self._outer(s, b, K) for b in Bs])

        n = np.arange(2, self.M + 1)
        if p == 2 and signs is None:
            energy = 2 * float(np.sum(self.tail**2))
            dens = peak**2 + unit**2 * energy
            return np.array([[float(np.sum(dens * w)) for w in W]]) + outer

        phase = np.exp(-1j * np.pi * n / G) * self.tail  # folds e(-n u_j) onto the FFT grid
        bins = n % G

        def sign_sum(eps: np.ndarray) -> np.ndarray:
            plus = eps[1] * phase
            minus = eps[0] * np.conj(phase)
            a = (np.bincount(bins, plus.real, G) + 1j * np.bincount(bins, plus.imag, G))
            b = (np.bincount(bins, minus.real, G) + 1j * np.bincount(bins, minus.imag, G))
            return np.fft.fft(a) + G * np.fft.ifft(b)

        if signs is not None:
            eps_list = [np.asarray(signs, dtype=float)]
        else:
            rng = np.random.default_rng(seed)
            eps_list = (rng.integers(0, 2, size=(2, n.size)) * 2.0 - 1.0 for _ in range(draws))
        rows = []
        for eps in eps_list:
            S = sign_sum(eps) if n.size else np.zeros(G)
            dens = np.abs(peak + unit * S[None, :]) ** s
            rows.append([float(np.sum(dens * w)) for w in W])
        return np.asarray(rows) + outer

    def ratio(self, p, A: WeightLike, B: WeightLike, draws: int = 64, seed=0,
              signs: np.ndarray | None = None) -> RatioEstimate:
        """Sign-averaged ratio ``||f||_p E[||f^||^p']^(1/p') / (|| f w_A ||_p E[||f^ w_B||^p']^(1/p'))``.

        The averaged form is what the inequality implies after raising it to
        ``p'`` and taking expectations, so its growth along a family rules
        the inequality out.  ``log_stderr`` is the Monte Carlo standard error
        of the log ratio.
        """
        p = _exponent(p)
        s = _dual(p)
        rows = self.freq_moments(p, [UNWEIGHTED, B], draws, seed, signs)
        mean = rows.mean(axis=0)
        sp0, spA = self.space_norm(p), self.space_norm(p, A)
        parts = (sp0, float(mean[0]) ** (1 / s), spA, float(mean[1]) ** (1 / s))
        value = _ratio(parts[0] * parts[1], parts[2] * parts[3])
        se = 0.0
        if rows.shape[0] > 1:
            rel = rows / mean[None, :]
            cov = np.cov(rel.T, ddof=1) / rows.shape[0]
            se = math.sqrt(max(cov[0, 0] + cov[1, 1] - 2 * cov[0, 1], 0.0)) / s
        return RatioEstimate(value, se, parts)


def holder_tail(p, a1: float, M: int, norm: float, d: int = 1) -> np.ndarray:
    """Coefficients making Hölder between l^2 and the ``|n|^{a1}``-weighted l^p an equality.

    ``c_n ∝ |n|^{-a1 p/(p-2)}`` (``|n|^{-a1}`` for ``p = inf``), scaled so the
    weighted l^p norm over ``2 <= |n| <= M`` equals ``norm``.
    """
    p = float(p)
    if not p > 2:
        raise ValueError("the Hölder-equality coefficients need p > 2")
    n = np.arange(2, M + 1, dtype=float)
    expo = a1 if math.isinf(p) else a1 * p / (p - 2)
    c = n ** (-expo)
    v = c * n**a1
    size = float(np.max(v)) if math.isinf(p) else float((2 * np.sum(v**p)) ** (1 / p))
    return c * (norm / size)


# -- falsification ---------------------------------------------------------------------


@dataclass(frozen=True)
class FalsifyBudget:
    """Ladders and Monte Carlo settings for :func:`falsify_symmetric`.

    ``scaling_steps`` dilations by ``scaling_ratio`` are tried in each
    direction from 1.  Peak families walk ``N`` up ``peak_Ns`` while the
    tail length stays below ``max_M`` (``square_max_M`` for the
    square-divergent tails, whose required length grows fastest).
    """

    scaling_steps: int = 10
    scaling_ratio: float = 4.0
    peak_Ns: tuple = tuple(2**k for k in range(1, 12))
    max_M: int = 1 << 22
    square_max_M: int = 1 << 18
    min_members: int = 4
    draws: int = 64
    tail_margin: float = 4.0
    slope_sigmas: float = 3.0
    min_growth: float = 4.0
    seed: int = 0


@dataclass(frozen=True)
class FamilyRun:
    family: str
    params: tuple
    ratios: tuple
    rate: float
    rate_stderr: float
    growth: float
    divergent: bool


@dataclass(frozen=True)
class DivergenceWitness:
    family: str
    rate: float
    rate_stderr: float
    runs: tuple

    verdict = "Divergent"


@dataclass(frozen=True)
class Bounded:
    max_ratio: float
    runs: tuple

    verdict = "Bounded"


def _divergence_fit(params, ratios, log_se, budget: FalsifyBudget, family: str) -> FamilyRun:
    x = np.log(np.asarray(params, dtype=float))
    y = np.log(np.asarray(ratios, dtype=float))
    se = np.asarray(log_se, dtype=float)
    if x.size < 2 or not np.all(np.isfinite(y)):
        return FamilyRun(family, tuple(params), tuple(ratios), math.nan, math.nan, math.nan, False)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ (y - y.mean())) / sxx
    resid = y - y.mean() - slope * xc
    var = float(resid @ resid) / max(x.size - 2, 1) / sxx if x.size > 2 else 0.0
    var += float((xc**2) @ (se**2)) / sxx**2
    stderr = math.sqrt(var)
    growth = float(ratios[-1] / ratios[0])
    divergent = bool(slope > budget.slope_sigmas * stderr and growth >= budget.min_growth
                     and x.size >= budget.min_members)
    return FamilyRun(family, tuple(float(v) for v in params), tuple(float(v) for v in ratios),
                     slope, stderr, growth, divergent)


def _member_seed(seed: int, family: str, k: int) -> np.random.SeedSequence:
    tag = sum(ord(ch) * 31**i for i, ch in enumerate(family)) % (1 << 31)
    return np.random.SeedSequence([seed, tag, k])


def _scaling_runs(d, p, A, B, budget: FalsifyBudget) -> list[FamilyRun]:
    g = Gaussian(1.0, 1.0, d)
    runs = []
    for name, sign in (("scaling-up", 1), ("scaling-down", -1)):
        lams = [budget.scaling_ratio ** (sign * k) for k in range(budget.scaling_steps + 1)]
        pts = scaling_family_ratio(g, d, p, A, B, lams)
        params = [lam if sign > 0 else 1 / lam for lam, _ in pts]
        runs.append(_divergence_fit(params, [r for _, r in pts], [0.0] * len(pts), budget, name))
    return runs


def _peak_run(name: str, members, p, A, B, budget: FalsifyBudget) -> FamilyRun:
    params, ratios, ses = [], [], []
    for k, (N, tail, lam) in enumerate(members):
        fam = PeakPlusTailFamily(N, tail, lam)
        est = fam.ratio(p, A, B, budget.draws, _member_seed(budget.seed, name, k))
        params.append(N)
        ratios.append(est.ratio)
        ses.append(est.log_stderr)
    return _divergence_fit(params, ratios, ses, budget, name)


def _step2_members(p: float, A: BrokenWeight, B: BrokenWeight, c: float, budget: FalsifyBudget):
    """Tails with ``sum |c_n|^p |n|^{p A2}`` bounded and ``sum |c_n|^2`` large."""
    a1, a2 = A.floats()
    b2 = float(B.a2)
    pd = _dual(p)
    if a2 < c:
        expo = a2 if math.isinf(p) else 0.5 * (a2 + c) + 1 / p

        def shape(M):
            return np.arange(2, M + 1, dtype=float) ** (-expo)
    else:
        seq = LogSeq(1)
        shape = seq.tail
    members = []
    M = 16
    for N in budget.peak_Ns:
        # scale the tail so its weighted norm matches the peak's, then lengthen
        # it until its l^2 mass dominates the weighted transform of the peak
        while M <= budget.square_max_M:
            c_n = shape(M)
            n = np.arange(2, M + 1, dtype=float)
            wsum = c_n * n**a2
            S = float(np.max(wsum)) if math.isinf(p) else float((2 * np.sum(wsum**p)) ** (1 / p))
            tail = c_n * (N ** (1 / pd - a1) / S)
            if math.sqrt(2 * float(np.sum(tail**2))) >= budget.tail_margin * N ** (1 / pd + b2):
                break
            M *= 2
        if M > budget.square_max_M:
            break
        members.append((float(N), tail, 1.0))
    return members


def _step3_members(p: float, A: BrokenWeight, B: BrokenWeight, c: float, budget: FalsifyBudget):
    a1 = float(A.a1)
    b2 = float(B.a2)
    pd = _dual(p)
    members = []
    for N in budget.peak_Ns:
        lam = float(N) ** ((a1 + b2) / (c - a1))
        M = int(math.floor(lam))
        if M > budget.max_M:
            break
        if M < 2:
            continue
        members.append((float(N), holder_tail(p, a1, M, N ** (1 / pd - a1)), lam))
    return members


def falsify_symmetric(d, p, A: WeightLike, B: WeightLike,
                      budget: FalsifyBudget | None = None) -> DivergenceWitness | Bounded:
    """Search the counterexample families for growth of the symmetric ratio.

    Dilations are always tried in both directions.  When
    ``c = d(1/2 - 1/p) > 0`` the peak-plus-tail families are added: a
    square-divergent tail if ``A2 <= c`` and the Hölder-equality tail at
    ``lam = N^((A1+B2)/(c-A1))`` if ``A1 < c < A2``.  When ``A1 = B2 = c``
    the weights ``(c, c)`` are tested in place of ``A, B``: the inequality
    for the original weights would imply it for these.
    """
    budget = budget or FalsifyBudget()
    d = int(d)
    p = _exponent(p)
    if p < 2:
        raise ValueError("the symmetric inequality is studied for p >= 2")
    A, B = BrokenWeight.parse(A), BrokenWeight.parse(B)
    runs = _scaling_runs(d, p, A, B, budget)
    c = float(critical_index(d, ExponentPair(p, p)))
    if d == 1 and c > 0:
        a1, a2 = A.floats()
        b2 = float(B.a2)
        if a2 <= c:
            runs.append(_peak_run("peak-square-divergent", _step2_members(p, A, B, c, budget),
                                  p, A, B, budget))
        if a1 < c < a2:
            runs.append(_peak_run("peak-holder", _step3_members(p, A, B, c, budget), p, A, B, budget))
        if a1 == c and b2 == c and a2 > c:
            AB = BrokenWeight(c, c)
            runs.append(_peak_run("peak-critical", _step2_members(p, AB, AB, c, budget),
                                  p, AB, AB, budget))
    hits = [r for r in runs if r.divergent]
    if hits:
        best = max(hits, key=lambda r: r.rate / max(r.rate_stderr, 1e-300))
        return DivergenceWitness(best.family, best.rate, best.rate_stderr, tuple(runs))
    finite = [max(r.ratios) for r in runs if r.ratios]
    return Bounded(max(finite) if finite else math.nan, tuple(runs))


__all__ = [
    "Bounded",
    "DivergenceWitness",
    "FalsifyBudget",
    "FamilyRun",
    "HPoint",
    "LogSeq",
    "ModulatedBumpFamily",
    "PeakPlusTailFamily",
    "RatioEstimate",
    "build_modulated",
    "falsify_symmetric",
    "holder_tail",
    "lower_bound_H",
    "scaling_family_ratio",
    "symmetric_ratio",
]
