"""Norms of trigonometric polynomials, coefficient sequences and test functions.

Fourier transforms use the convention ``f^(xi) = ∫ f(x) exp(-2πi x·xi) dx``,
under which ``exp(-π|x|^2)`` is its own transform.

Three function families are available in closed form, each paired with its
transform:

* :class:`Gaussian` (radial, any dimension)
* :class:`ModulatedBump`, a smooth envelope times a trigonometric polynomial,
  ``f_t(x) = phi(x/t) T(x/t)`` with compactly supported ``phi^`` (``d = 1``)
* :class:`PeakPlusTail`, a tall narrow bump plus a signed train of unit bumps
  at the integers (``d = 1``)

:class:`SampledRadialFn` covers everything else through tabulated values and a
declared tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate, optimize, special
from scipy.interpolate import CubicSpline

from .weights import BrokenWeight, WeightLike, radial_weight

# Default quadrature tolerances (absolute and relative).
QUAD_TOL = 1e-10
QUAD_LIMIT = 400


def _q_value(q) -> float:
    q = float(q)
    if not q >= 1:
        raise ValueError(f"Lebesgue exponent must be >= 1, got {q}")
    return q


def sphere_area(d: int) -> float:
    """Surface measure of the unit sphere in ``R^d`` (2 for ``d = 1``)."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


# -- trigonometric polynomials -----------------------------------------------


@dataclass
class TrigPoly:
    """``sum_{|n|_inf <= M} c_n exp(2πi n·x)`` on the torus ``[0,1)^d``.

    ``coeffs`` has shape ``(2M+1,)*d`` and entry ``coeffs[n + M]`` holds ``c_n``.
    """

    coeffs: np.ndarray
    d: int = 1

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim == 0:
            c = c.reshape((1,) * self.d)
        if c.ndim != self.d:
            raise ValueError(f"coefficient array has {c.ndim} axes, expected {self.d}")
        if len(set(c.shape)) != 1 or c.shape[0] % 2 == 0:
            raise ValueError("coefficient array must be a centred odd cube")
        self.coeffs = c

    @classmethod
    def from_dict(cls, coeffs: Mapping, d: int = 1, M: int | None = None) -> "TrigPoly":
        keys = [(k,) if np.isscalar(k) else tuple(k) for k in coeffs]
        if any(len(k) != d for k in keys):
            raise ValueError("multi-index length does not match d")
        deg = max((max(abs(i) for i in k) for k in keys), default=0)
        M = deg if M is None else M
        if deg > M:
            raise ValueError(f"coefficient of degree {deg} exceeds M = {M}")
        arr = np.zeros((2 * M + 1,) * d, dtype=complex)
        for k, v in zip(keys, coeffs.values()):
            arr[tuple(i + M for i in k)] = v
        return cls(arr, d)

    @property
    def M(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def frequencies(self) -> np.ndarray:
        """``|n|`` (Euclidean) for every coefficient slot."""
        r = np.arange(-self.M, self.M + 1)
        grids = np.meshgrid(*([r] * self.d), indexing="ij")
        return np.sqrt(sum(g.astype(float) ** 2 for g in grids))

    def __call__(self, x) -> np.ndarray:
        if self.d != 1:
            raise NotImplementedError("pointwise evaluation is provided for d = 1")
        x = np.asarray(x, dtype=float)
        n = np.arange(-self.M, self.M + 1)
        return np.exp(2j * np.pi * np.multiply.outer(x, n)) @ self.coeffs

    def grid_values(self, L: int) -> np.ndarray:
        """Values on the uniform grid ``j/L`` per axis (``L >= 2M+1``)."""
        if L < 2 * self.M + 1:
            raise ValueError("grid too coarse for exact synthesis")
        arr = np.zeros((L,) * self.d, dtype=complex)
        idx = np.arange(-self.M, self.M + 1) % L
        arr[np.ix_(*([idx] * self.d))] = self.coeffs
        return np.fft.ifftn(arr) * L**self.d

    def with_signs(self, signs: np.ndarray) -> "TrigPoly":
        return TrigPoly(self.coeffs * signs, self.d)


LINE_SAMPLES = 4096


def torus_grid_size(M: int, oversample: int = 8) -> int:
    """Samples per axis: at least ``oversample*M`` and enough for exact synthesis."""
    n = max(oversample * max(M, 1), 2 * M + 1, 16)
    return 1 << (n - 1).bit_length()


def trigpoly_lq_norm(T: TrigPoly, q, oversample: int = 8) -> float:
    """``(∫_{[0,1]^d} |T|^q)^{1/q}``; ``q = 2`` is exact and ``q = inf`` is a refined max."""
    q = _q_value(q)
    if not np.any(T.coeffs):
        return 0.0
    if q == 2:
        return float(np.sqrt(np.sum(np.abs(T.coeffs) ** 2)))
    L = torus_grid_size(T.M, oversample)
    if T.d == 1:
        # zeros of T make |T|^q kinked for small q; the floor keeps those errors below 1e-6
        L = max(L, LINE_SAMPLES)
    vals = np.abs(T.grid_values(L))
    if math.isinf(q):
        return _refined_sup(T, vals, L)
    scale = vals.max()
    return float(scale * np.mean((vals / scale) ** q) ** (1 / q))


def _refined_sup(T: TrigPoly, vals: np.ndarray, L: int) -> float:
    best = float(vals.max())
    if T.d != 1:
        return best
    j = int(np.argmax(vals))
    x0 = j / L
    res = optimize.minimize_scalar(
        lambda x: -abs(T(x)), bounds=(x0 - 1 / L, x0 + 1 / L), method="bounded",
        options={"xatol": 1e-12},
    )
    return max(best, float(-res.fun))


def weighted_lp_seq_norm(T: TrigPoly, gamma, p) -> float:
    """``(sum |c_n|^p (1+|n|)^(p gamma))^{1/p}``, the max for ``p = inf``."""
    p = _q_value(p)
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError("gamma must be nonnegative")
    vals = np.abs(T.coeffs) * (1 + T.frequencies) ** gamma
    if math.isinf(p):
        return float(vals.max())
    scale = vals.max()
    if scale == 0:
        return 0.0
    return float(scale * np.sum((vals / scale) ** p) ** (1 / p))


def expected_random_sign_norm(T: TrigPoly, q, trials: int = 64, seed: int = 0,
                              oversample: int = 8, batch: int = 16) -> tuple[float, float]:
    """Monte Carlo mean and standard error of ``||sum eps_n c_n e_n||_q^q`` over random signs."""
    q = _q_value(q)
    if trials < 2:
        raise ValueError("need at least two trials for a standard error")
    rng = np.random.default_rng(seed)
    samples = np.empty(trials)
    done = 0
    while done < trials:
        k = min(batch, trials - done)
        signs = rng.choice(np.array([-1.0, 1.0]), size=(k,) + T.coeffs.shape)
        for i in range(k):
            samples[done + i] = trigpoly_lq_norm(T.with_signs(signs[i]), q, oversample) ** q
        done += k
    return float(samples.mean()), float(samples.std(ddof=1) / math.sqrt(trials))


# -- bump profiles -----------------------------------------------------------


class BumpProfile:
    """A compactly supported bump and its Fourier transform.

    ``compact(u) = exp(1 - 1/(1 - (u/radius)^2))`` on ``|u| < radius`` (peak
    value 1), and ``smooth`` is its transform, tabulated once on a fine grid
    and evaluated by cubic interpolation.  Both are real and even.

    The same pair serves two constructions with the roles exchanged: the
    modulated-bump family puts ``compact`` on the frequency side and the
    peak-plus-tail family puts it on the space side.  In both cases the
    smooth side must not vanish on ``[1, 2]``; :attr:`min_on_unit_shift`
    records how far from zero it stays there.
    """

    def __init__(self, radius: float = 0.25, nodes: int = 1024, step: float = 1 / 128,
                 extent: float = 500.0):
        self.radius = float(radius)
        x, w = leggauss(nodes)
        self._u = 0.5 * self.radius * (x + 1)  # nodes on (0, radius)
        self._w = 0.5 * self.radius * w
        self._bu = self.compact(self._u)
        self.extent = float(extent)
        grid = np.arange(0.0, extent + step, step)
        table = np.empty_like(grid)
        for lo in range(0, grid.size, 4096):
            g = grid[lo:lo + 4096]
            table[lo:lo + 4096] = self._smooth_direct(g)
        self._spline = CubicSpline(grid, table, bc_type=((1, 0.0), "not-a-knot"))
        self.peak_smooth = float(table[0])

    def compact(self, u):
        u = np.asarray(u, dtype=float)
        z = (u / self.radius) ** 2
        out = np.zeros_like(z)
        inside = z < 1
        out[inside] = np.exp(1 - 1 / (1 - z[inside]))
        return out

    def _smooth_direct(self, v):
        v = np.atleast_1d(np.asarray(v, dtype=float))
        return 2 * (np.cos(2 * np.pi * np.multiply.outer(v, self._u)) @ (self._w * self._bu))

    def smooth(self, v):
        v = np.abs(np.asarray(v, dtype=float))
        out = self._spline(np.minimum(v, self.extent))
        return np.where(v > self.extent, 0.0, out)

    @cached_property
    def min_on_unit_shift(self) -> float:
        v = np.linspace(1.0, 2.0, 2001)
        return float(np.min(np.abs(self.smooth(v))))

    def smooth_tail_radius(self, rel: float = 1e-14) -> float:
        """Radius beyond which ``|smooth|`` stays below ``rel`` times its peak."""
        v = np.arange(0.0, self.extent, 0.25)
        big = np.nonzero(np.abs(self.smooth(v)) > rel * self.peak_smooth)[0]
        return float(v[big[-1]] + 1.0) if big.size else 1.0

    @lru_cache(maxsize=64)
    def compact_lp(self, p: float) -> float:
        """``||compact||_p``."""
        if math.isinf(p):
            return 1.0
        val = 2 * float(np.sum(self._w * self._bu**p))
        return val ** (1 / p)

    @lru_cache(maxsize=64)
    def smooth_lp(self, p: float) -> float:
        """``||smooth||_p`` over the real line."""
        if math.isinf(p):
            return self.peak_smooth
        R = self.smooth_tail_radius(1e-15)
        # split at sign changes, where |smooth|^p is not smooth
        v = np.linspace(0.0, R, int(R * 64) + 1)
        s = self.smooth(v)
        flips = np.nonzero(np.sign(s[:-1]) * np.sign(s[1:]) < 0)[0]
        cuts = [0.0] + [optimize.brentq(lambda u: float(self.smooth(u)), v[i], v[i + 1]) for i in flips] + [R]
        val = sum(integrate.quad(lambda u: abs(float(self.smooth(u))) ** p, a, b,
                                 limit=200, epsabs=1e-14, epsrel=1e-10)[0] for a, b in zip(cuts, cuts[1:]))
        return (2 * val) ** (1 / p)


_DEFAULT_BUMP: BumpProfile | None = None


def default_bump() -> BumpProfile:
    """Shared read-only bump profile (built on first use)."""
    global _DEFAULT_BUMP
    if _DEFAULT_BUMP is None:
        _DEFAULT_BUMP = BumpProfile()
    return _DEFAULT_BUMP


# -- closed-form families ----------------------------------------------------


class ClosedFormFn:
    """Base class: a function on ``R^d`` with a known Fourier transform."""

    d: int = 1
    radial: bool = False

    def __call__(self, x):
        raise NotImplementedError

    def breakpoints(self) -> list[float]:
        """Points (in ``|x|`` for radial functions) where panels should split."""
        return []

    def extent(self) -> float:
        """Radius beyond which the function is negligible or zero."""
        return math.inf

    def fourier(self) -> "ClosedFormFn":
        raise NotImplementedError(f"{type(self).__name__} has no closed-form transform")

    def scaled(self, alpha: complex) -> "ClosedFormFn":
        return _Scaled(self, alpha)


@dataclass
class _Scaled(ClosedFormFn):
    base: ClosedFormFn
    alpha: complex

    def __post_init__(self):
        self.d = self.base.d
        self.radial = self.base.radial

    def __call__(self, x):
        return self.alpha * self.base(x)

    def breakpoints(self):
        return self.base.breakpoints()

    def extent(self):
        return self.base.extent()

    def fourier(self):
        return _Scaled(self.base.fourier(), self.alpha)


@dataclass
class Gaussian(ClosedFormFn):
    """``amplitude * exp(-π |x|^2 / sigma^2)`` on ``R^d``."""

    sigma: float = 1.0
    amplitude: float = 1.0
    d: int = 1
    radial: bool = field(default=True, init=False)

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return self.amplitude * np.exp(-np.pi * (r / self.sigma) ** 2)

    def breakpoints(self):
        return [self.sigma * k for k in (0.25, 0.5, 1.0, 2.0, 4.0)]

    def extent(self):
        return self.sigma * 12.0

    def fourier(self) -> "Gaussian":
        return Gaussian(1 / self.sigma, self.amplitude * self.sigma**self.d, self.d)

    def dilate(self, lam: float) -> "Gaussian":
        """``lam^d f(lam x)``, which keeps ``f^(0)`` fixed."""
        return Gaussian(self.sigma / lam, self.amplitude * lam**self.d, self.d)


def gaussian_weighted_norm(g: Gaussian, w: WeightLike, q) -> float:
    """Closed form of :func:`weighted_lq_norm` for a Gaussian via incomplete gamma functions."""
    w = BrokenWeight.parse(w)
    q = _q_value(q)
    a1, a2 = w.floats()
    if math.isinf(q):
        return _gaussian_weighted_sup(g, a1, a2)
    kappa = math.pi * q / g.sigma**2
    total = 0.0
    for a, lo, hi in ((a1, 0.0, 1.0), (a2, 1.0, math.inf)):
        m = q * a + g.d
        if lo == 0 and m <= 0:
            return math.inf
        # ∫_lo^hi r^(m-1) exp(-kappa r^2) dr = kappa^(-m/2)/2 * [γ(m/2, kappa r^2)]_lo^hi
        s = m / 2
        if m > 0:
            x_lo, x_hi = kappa * lo * lo, kappa * hi * hi
            part = special.gammaincc(s, x_lo) - (special.gammaincc(s, x_hi) if math.isfinite(hi) else 0.0)
            total += 0.5 * kappa ** (-s) * math.exp(special.gammaln(s)) * part
        else:
            # only reached on the outer piece, where the integrand is bounded
            total += integrate.quad(lambda r: r ** (m - 1) * math.exp(-kappa * r * r), 1.0,
                                    math.inf, epsabs=0, epsrel=QUAD_TOL)[0]
    return abs(g.amplitude) * (sphere_area(g.d) * total) ** (1 / q)


def _gaussian_weighted_sup(g: Gaussian, a1: float, a2: float) -> float:
    if a1 < 0:
        return math.inf
    best = 0.0
    for a, lo, hi in ((a1, 0.0, 1.0), (a2, 1.0, math.inf)):
        r_star = g.sigma * math.sqrt(a / (2 * math.pi)) if a > 0 else 0.0
        r = min(max(r_star, lo), hi)
        if r == 0:
            val = 1.0 if a == 0 else 0.0
        else:
            val = r**a * math.exp(-math.pi * (r / g.sigma) ** 2)
        best = max(best, val)
    return abs(g.amplitude) * best


@dataclass
class ModulatedBump(ClosedFormFn):
    """``f_t(x) = phi(x/t) T(x/t)`` in one dimension.

    ``phi`` is the smooth side of the bump profile, so ``f_t^`` is the sum of
    disjointly supported copies ``t c_n compact(t xi - n)``.
    """

    poly: TrigPoly
    t: float = 1.0
    bump: BumpProfile | None = None
    d: int = 1

    def __post_init__(self):
        if self.poly.d != 1 or self.d != 1:
            raise NotImplementedError("modulated bumps are implemented for d = 1")
        if not self.t > 0:
            raise ValueError("t must be positive")
        if self.bump is None:
            self.bump = default_bump()
        if self.bump.radius > 0.5:
            raise ValueError("the frequency bump must fit in (-1/2, 1/2)")

    def __call__(self, x):
        y = np.asarray(x, dtype=float) / self.t
        return self.bump.smooth(y) * self.poly(y)

    def breakpoints(self):
        return [self.t * k for k in range(0, 8)]

    def extent(self):
        return self.t * self.bump.smooth_tail_radius()

    def fourier(self) -> "BumpTrain":
        return BumpTrain(self.poly, self.t, self.bump)

    def weighted_norm(self, w: WeightLike, q, oversample: int = 8) -> float:
        """``||f_t w||_q`` by folding the integral onto one period of ``T``.

        ``t ∫ |phi T|^q w(t|y|)^q dy = t ∫_0^1 |T(u)|^q K(u) du`` with the
        periodised kernel ``K(u) = sum_k |phi(u+k)|^q w(t|u+k|)^q``.
        """
        q = _q_value(q)
        w = BrokenWeight.parse(w)
        L = max(torus_grid_size(self.poly.M, oversample) * 4, LINE_SAMPLES)
        u = (np.arange(L) + 0.5) / L
        Tv = np.abs(self.poly.grid_values(2 * L))[1::2]  # values at the midpoints
        Y = int(math.ceil(self.bump.smooth_tail_radius()))
        if math.isinf(q):
            best = 0.0
            for k in range(-Y, Y):
                y = u + k
                best = max(best, float(np.max(np.abs(self.bump.smooth(y)) * Tv * radial_weight(w, self.t * y))))
            return best
        kern = np.zeros(L)
        for k in range(-Y, Y):
            y = u + k
            kern += np.abs(self.bump.smooth(y)) ** q * radial_weight(w, self.t * y) ** q
        return float((self.t * np.mean(Tv**q * kern)) ** (1 / q))


@dataclass
class BumpTrain(ClosedFormFn):
    """``t sum_n c_n compact(t xi - n)``, the transform of :class:`ModulatedBump`."""

    poly: TrigPoly
    t: float = 1.0
    bump: BumpProfile | None = None
    d: int = 1

    def __post_init__(self):
        if self.bump is None:
            self.bump = default_bump()

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        s = self.t * xi
        n = np.rint(s)
        M = self.poly.M
        inside = np.abs(n) <= M
        c = np.zeros(s.shape, dtype=complex)
        c[inside] = self.poly.coeffs[(n[inside] + M).astype(int)]
        return self.t * c * self.bump.compact(s - n)

    def breakpoints(self):
        M = self.poly.M
        return sorted({abs(n + sgn * self.bump.radius) / self.t
                       for n in range(-M, M + 1) for sgn in (-1, 1)})

    def extent(self):
        return (self.poly.M + self.bump.radius) / self.t

    def fourier(self):
        raise NotImplementedError("the transform of a bump train is not needed")

    def weighted_norm(self, w: WeightLike, p, nodes: int = 48) -> float:
        """``||f^ w||_p = t^(1-1/p) (sum |c_n|^p ∫ compact(u)^p w(|u+n|/t)^p du)^(1/p)``."""
        p = _q_value(p)
        w = BrokenWeight.parse(w)
        M, rho, t = self.poly.M, self.bump.radius, self.t
        n = np.arange(-M, M + 1)
        cabs = np.abs(self.poly.coeffs)
        if math.isinf(p):
            u = np.linspace(-rho, rho, 2001)
            vals = self.bump.compact(u)[None, :] * radial_weight(w, (np.abs(u[None, :] + n[:, None])) / t)
            return float(t * np.max(cabs * vals.max(axis=1)))
        per_mode = mode_integrals(self.bump, w, p, n, t, nodes)
        total = float(np.sum(cabs**p * per_mode))
        return (t ** (p - 1) * total) ** (1 / p)


def mode_integrals(bump: BumpProfile, w: WeightLike, p: float, n, t: float,
                   nodes: int = 48, chunk: int = 1 << 15) -> np.ndarray:
    """``∫_{-rho}^{rho} compact(u)^p w(|u+n|/t)^p du`` for each ``n``, split at kinks."""
    w = BrokenWeight.parse(w)
    n = np.asarray(n, dtype=float)
    rho = bump.radius
    x, gw = leggauss(nodes)
    out = np.empty(n.size)
    kinks = np.stack([-n, t - n, -t - n], axis=1)
    has_kink = np.any((kinks > -rho) & (kinks < rho), axis=1)
    u = rho * x
    base = bump.compact(u) ** p * gw
    plain = np.nonzero(~has_kink)[0]
    for lo in range(0, plain.size, chunk):
        idx = plain[lo:lo + chunk]
        vals = radial_weight(w, np.abs(u[None, :] + n[idx, None]) / t) ** p
        out[idx] = rho * (vals @ base)
    for i in np.nonzero(has_kink)[0]:
        edges = [-rho] + sorted(k for k in kinks[i] if -rho < k < rho) + [rho]
        acc = 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            v = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
            vals = bump.compact(v) ** p * radial_weight(w, np.abs(v + n[i]) / t) ** p
            acc += 0.5 * (hi - lo) * float(vals @ gw)
        out[i] = acc
    return out


def mode_sups(bump: BumpProfile, w: WeightLike, n, t: float, points: int = 257,
              chunk: int = 1 << 14) -> np.ndarray:
    """``sup_u compact(u) w(|u+n|/t)`` for each ``n`` on a fine grid of ``u``."""
    w = BrokenWeight.parse(w)
    n = np.asarray(n, dtype=float)
    u = np.linspace(-bump.radius, bump.radius, points)
    prof = bump.compact(u)
    out = np.empty(n.size)
    for lo in range(0, n.size, chunk):
        blk = n[lo:lo + chunk]
        out[lo:lo + chunk] = np.max(prof[None, :] * radial_weight(w, np.abs(u[None, :] + blk[:, None]) / t),
                                    axis=1)
    return out


@dataclass
class PeakPlusTail(ClosedFormFn):
    """``N phi(N x) + sum_{2<=|n|<=M} eps_n c_n phi(x - n)`` with ``phi`` the compact bump.

    ``tail`` holds ``c_n`` for ``n = 2..M`` (the same magnitude is used at
    ``-n``); ``signs`` has shape ``(2, M-1)`` for the negative and positive
    sides and defaults to all ones.
    """

    N: float
    tail: np.ndarray
    signs: np.ndarray | None = None
    bump: BumpProfile | None = None
    d: int = 1

    def __post_init__(self):
        self.tail = np.asarray(self.tail, dtype=float)
        if self.signs is None:
            self.signs = np.ones((2, self.tail.size))
        self.signs = np.asarray(self.signs, dtype=float)
        if self.signs.shape != (2, self.tail.size):
            raise ValueError("signs must have shape (2, len(tail))")
        if self.bump is None:
            self.bump = default_bump()

    @property
    def M(self) -> int:
        return self.tail.size + 1

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self.N * self.bump.compact(self.N * x)
        n = np.rint(x)
        k = np.abs(n).astype(int)
        inside = (k >= 2) & (k <= self.M)
        side = (n > 0).astype(int)
        coef = np.zeros(x.shape)
        coef[inside] = self.signs[side[inside], k[inside] - 2] * self.tail[k[inside] - 2]
        return out + coef * self.bump.compact(x - n)

    def breakpoints(self):
        r = self.bump.radius
        pts = {r / self.N}
        for n in range(2, self.M + 1):
            pts.update({n - r, n + r})
        return sorted(pts)

    def extent(self):
        return self.M + self.bump.radius

    def fourier(self) -> "PeakPlusTailTransform":
        return PeakPlusTailTransform(self)


@dataclass
class PeakPlusTailTransform(ClosedFormFn):
    """``smooth(xi/N) + smooth(xi) sum eps_n c_n exp(-2πi n xi)``."""

    source: PeakPlusTail
    d: int = 1

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        s = self.source
        n = np.arange(2, s.M + 1)
        phase = np.exp(-2j * np.pi * np.multiply.outer(xi, n))
        train = phase @ (s.signs[1] * s.tail) + np.conj(phase) @ (s.signs[0] * s.tail)
        return s.bump.smooth(xi / s.N) + s.bump.smooth(xi) * train

    def breakpoints(self):
        return [float(k) for k in range(0, 64)]

    def extent(self):
        return self.source.N * self.source.bump.smooth_tail_radius()


def fourier_transform(f: ClosedFormFn) -> ClosedFormFn:
    """Closed-form Fourier transform of a supported family."""
    if not isinstance(f, ClosedFormFn):
        raise TypeError("expected a closed-form function")
    return f.fourier()


# -- sampled radial functions ------------------------------------------------


@dataclass(frozen=True)
class SchwartzLike:
    """``|f(r)| <= |f(r_max)| exp(-rate (r - r_max))`` beyond the grid."""

    rate: float


@dataclass(frozen=True)
class CompactSupport:
    radius: float


@dataclass(frozen=True)
class PowerTail:
    """``|f(r)| = |f(r_max)| (r/r_max)^(-exponent)`` beyond the grid."""

    exponent: float


@dataclass
class SampledRadialFn:
    grid: np.ndarray
    values: np.ndarray
    tail: SchwartzLike | CompactSupport | PowerTail
    d: int = 1
    radial: bool = field(default=True, init=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.grid.ndim != 1 or self.grid.size < 4 or self.grid.shape != self.values.shape:
            raise ValueError("grid and values must be matching 1-D arrays of length >= 4")
        if np.any(self.grid <= 0) or np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing and positive")
        if self.grid[0] > 1e-4:
            raise ValueError("grid must start at or below 1e-4")
        if isinstance(self.tail, CompactSupport) and self.tail.radius > self.grid[-1]:
            raise ValueError("declared support extends beyond the sampled range")
        if isinstance(self.tail, SchwartzLike) and not self.tail.rate > 0:
            raise ValueError("Schwartz-like tail needs a positive rate")
        self._re = CubicSpline(self.grid, self.values.real)
        self._im = CubicSpline(self.grid, self.values.imag)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        out = self._re(r) + 1j * self._im(r)
        if isinstance(self.tail, CompactSupport):
            out = np.where(r > self.tail.radius, 0.0, out)
        return out


# -- weighted L^q norms by quadrature ----------------------------------------


def _panels(points: Sequence[float], lo: float, hi: float) -> list[tuple[float, float]]:
    pts = sorted({lo, hi, *[p for p in points if lo < p < hi]})
    return list(zip(pts[:-1], pts[1:]))


def _quad(g: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    val, _ = integrate.quad(g, lo, hi, epsabs=0.0, epsrel=tol, limit=QUAD_LIMIT)
    return val


def weighted_lq_norm(f, w: WeightLike, q, d: int | None = None, tol: float = QUAD_TOL) -> float:
    """``(∫_{R^d} |f(x)|^q w(|x|)^q dx)^{1/q}`` by adaptive quadrature.

    Radial functions are reduced to ``∫_0^∞ |f(r)|^q w(r)^q |S^{d-1}| r^{d-1} dr``;
    non-radial closed forms are integrated over the real line (``d = 1``).
    Divergent integrals return ``inf``.
    """
    w = BrokenWeight.parse(w)
    q = _q_value(q)
    if isinstance(f, SampledRadialFn):
        return _sampled_norm(f, w, q, f.d if d is None else d, tol)
    if not isinstance(f, ClosedFormFn):
        raise TypeError("expected a SampledRadialFn or ClosedFormFn")
    d = f.d if d is None else d
    if not f.radial and d != 1:
        raise NotImplementedError("non-radial functions are supported for d = 1 only")
    R = f.extent()
    brk = [0.0, 1.0, *f.breakpoints()]
    a1, a2 = w.floats()

    if math.isinf(q):
        return _closed_form_sup(f, w, R, brk)

    def integrand(r):
        val = abs(complex(f(r))) if f.radial else abs(complex(f(r)))
        if val == 0.0:
            return 0.0
        return val**q * float(radial_weight(w, r)) ** q

    if f.radial:
        if q * a1 + d <= 0 and abs(complex(f(0.0))) > 0:
            return math.inf
        top = R if math.isfinite(R) else math.inf
        total = 0.0
        for lo, hi in _panels(brk, 0.0, top if math.isfinite(top) else max(brk) * 2 + 2):
            total += _quad(lambda r: integrand(r) * r ** (d - 1), lo, hi, tol)
        if not math.isfinite(top):
            total += _quad(lambda r: integrand(r) * r ** (d - 1), max(brk) * 2 + 2, math.inf, tol)
        return (sphere_area(d) * total) ** (1 / q)

    if q * a1 + 1 <= 0 and abs(complex(f(0.0))) > 0:
        return math.inf
    total = 0.0
    for sign in (-1.0, 1.0):
        for lo, hi in _panels(brk, 0.0, R):
            total += _quad(lambda r: integrand(sign * r), lo, hi, tol)
    return total ** (1 / q)


def _closed_form_sup(f: ClosedFormFn, w: BrokenWeight, R: float, brk: list[float]) -> float:
    top = R if math.isfinite(R) else max(brk) * 4 + 4
    r = np.unique(np.concatenate([np.linspace(0, top, 20001), np.asarray(brk, float)]))
    r = r[(r >= 0) & (r <= top)]
    rr = r if f.radial else np.concatenate([-r[::-1], r])
    vals = np.abs(np.asarray(f(rr), dtype=complex)) * radial_weight(w, rr)
    j = int(np.argmax(vals))
    best = float(vals[j])
    lo, hi = rr[max(j - 1, 0)], rr[min(j + 1, rr.size - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda x: -abs(complex(f(x))) * float(radial_weight(w, x)),
            bounds=(lo, hi), method="bounded", options={"xatol": 1e-12},
        )
        best = max(best, float(-res.fun))
    return best


def _sampled_norm(f: SampledRadialFn, w: BrokenWeight, q: float, d: int, tol: float) -> float:
    a1, a2 = w.floats()
    r0, r1 = float(f.grid[0]), float(f.grid[-1])
    f0, f1 = abs(f.values[0]), abs(f.values[-1])
    tail = f.tail
    if math.isinf(q):
        best = float(np.max(np.abs(f.values) * radial_weight(w, f.grid)))
        if f0 > 0 and a1 < 0:
            return math.inf
        if isinstance(tail, PowerTail) and f1 > 0:
            if a2 > tail.exponent:
                return math.inf
        elif isinstance(tail, SchwartzLike) and f1 > 0:
            res = optimize.minimize_scalar(
                lambda r: -f1 * math.exp(-tail.rate * (r - r1)) * r**a2,
                bounds=(r1, r1 + 50 / tail.rate), method="bounded")
            best = max(best, float(-res.fun))
        return best

    top = min(r1, tail.radius) if isinstance(tail, CompactSupport) else r1
    brk = list(f.grid[:: max(1, f.grid.size // 64)]) + [1.0]

    def g(r):
        return abs(complex(f(r))) ** q * float(radial_weight(w, r)) ** q * r ** (d - 1)

    total = 0.0
    for lo, hi in _panels(brk, r0, top):
        total += _quad(g, lo, hi, tol)
    # below the grid: treat f as constant
    if f0 > 0:
        m = q * a1 + d
        if m <= 0:
            return math.inf
        total += f0**q * r0**m / m
    if f1 > 0 and not isinstance(tail, CompactSupport):
        if isinstance(tail, PowerTail):
            m = -tail.exponent * q + q * a2 + d
            if m >= 0:
                return math.inf
            # r1 >= 1 assumed for the outer branch; otherwise split at 1
            if r1 >= 1:
                total += f1**q * r1 ** (tail.exponent * q) * (-(r1**m) / m)
            else:
                total += _quad(lambda r: f1**q * (r / r1) ** (-tail.exponent * q)
                               * float(radial_weight(w, r)) ** q * r ** (d - 1), r1, math.inf, tol)
        else:
            total += _quad(lambda r: f1**q * math.exp(-q * tail.rate * (r - r1))
                           * float(radial_weight(w, r)) ** q * r ** (d - 1), r1, math.inf, tol)
    return (sphere_area(d) * total) ** (1 / q)


__all__ = [
    "BumpProfile",
    "BumpTrain",
    "ClosedFormFn",
    "CompactSupport",
    "Gaussian",
    "ModulatedBump",
    "PeakPlusTail",
    "PeakPlusTailTransform",
    "PowerTail",
    "SampledRadialFn",
    "SchwartzLike",
    "TrigPoly",
    "default_bump",
    "expected_random_sign_norm",
    "fourier_transform",
    "gaussian_weighted_norm",
    "mode_integrals",
    "mode_sups",
    "sphere_area",
    "torus_grid_size",
    "trigpoly_lq_norm",
    "weighted_lp_seq_norm",
    "weighted_lq_norm",
]
