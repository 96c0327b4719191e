"""End-to-end acceptance checks, one test per criterion.

Each outcome is echoed as a single PASS/FAIL line in the terminal summary.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from unclab.cli import EXIT_OK, run
from unclab.exponents import INF, ExponentPair
from unclab.extremizers import falsify_symmetric, lower_bound_H, symmetric_ratio
from unclab.fitting import fit_power_log
from unclab.norms import Gaussian, TrigPoly, expected_random_sign_norm
from unclab.regime_oracle import local_constant_profile, sweep_consistency
from unclab.sharp_constants import (
    DiscreteConstantSweep,
    WeightSpec,
    appendix_C1,
    appendix_C2,
    estimate_discrete_constant,
)
from unclab.weights import integral_x_to_inf, integral_zero_to_x

F = Fraction
PQ = [1, F(4, 3), 2, 3, INF]
LADDER = [16, 32, 64, 128, 256, 512]


@pytest.mark.criterion(1, "oracle self-consistency on the full (d, p, q, alpha, beta) grid")
def test_oracle_self_consistency():
    grid = [F(1, 10), F(1, 2), 1, 2]
    cells = sweep_consistency([1, 2], PQ, PQ, grid, grid)
    assert len(cells) == 800
    assert all(c.consistent for _, c in cells)


DISCRETE_SETTINGS = [
    (2, 4, 0), (2, 4, F(1, 4)), (2, INF, 0), (1, INF, 0), (2, INF, F(1, 2)),
    (INF, 2, F(1, 2)), (4, 2, 0), (4, 1, 0), (4, INF, 0),
]


@pytest.mark.criterion(2, "discrete-constant growth matches the oracle in 9 settings")
def test_discrete_constant_exponents():
    bad = []
    for p, q, gamma in DISCRETE_SETTINGS:
        sweep = DiscreteConstantSweep(p=p, q=q, gamma=float(gamma)).fit(LADDER)
        if not sweep.agrees(0.05):
            bad.append((p, q, gamma, sweep.fit_.power, sweep.fit_.logpow))
    assert not bad


@pytest.mark.criterion(3, "Parseval: the p = q = 2 discrete constant is 1")
def test_parseval_exactness():
    for M in (16, 64, 256):
        assert estimate_discrete_constant(1, (2, 2), 0, M).value == pytest.approx(1.0, abs=1e-10)


@pytest.mark.criterion(4, "Gaussian Heisenberg ratio is 4 pi by quadrature")
def test_gaussian_heisenberg():
    value = symmetric_ratio(Gaussian(), 1, 2, (1, 1), (1, 1), method="quad")
    assert value == pytest.approx(4 * math.pi, rel=1e-6)


def _slope(points):
    return np.polyfit(np.log([pt.abscissa for pt in points]), np.log([pt.ordinate for pt in points]), 1)[0]


@pytest.mark.criterion(5, "growth-function lower bounds follow x^(1/2) and x^(1/3)")
def test_lower_bound_slopes():
    xs = np.logspace(1, 4, 7)
    assert _slope(lower_bound_H(1, (2, 2), (1, 1), (1, 1), xs)) == pytest.approx(0.5, abs=0.05)
    assert _slope(lower_bound_H(1, (2, INF), (1, 1), (1, 1), xs)) == pytest.approx(1 / 3, abs=0.05)


@pytest.mark.criterion(6, "symmetric scan: no false divergence, >= 80% of failures detected")
def test_symmetric_scan():
    report, code = run(["scan", "sym", "--ps", "2,4,inf", "--grid", "0.25,0.5,1"])
    table = report["confusion"]
    fails = table["Fails/Divergent"] + table["Fails/Bounded"]
    print(f"symmetric scan: {report['summary']}")
    assert code == EXIT_OK
    assert table["Holds/Divergent"] == 0
    assert table["Fails/Divergent"] >= 0.8 * fails


@pytest.mark.criterion(7, "scaling-family rate equals A1 - B2")
def test_scaling_rates():
    for A, B, gap in [((1, 1), (0.75, 0.75), 0.25), ((1, 1), (0.5, 0.5), 0.5), ((1.5, 1.5), (0.5, 0.5), 1.0)]:
        res = falsify_symmetric(1, 2, A, B)
        run_up, = [r for r in res.runs if r.family == "scaling-up"]
        assert run_up.rate == pytest.approx(gap, abs=0.05)


@pytest.mark.criterion(8, "random-sign fourth moments sit inside the Khinchin sandwich")
def test_khinchin_sandwich():
    rng = np.random.default_rng(2024)
    for k in range(20):
        c = rng.uniform(-1, 1, 33)
        mean, se = expected_random_sign_norm(TrigPoly(c), 4, trials=128, seed=k)
        s = float(np.sum(c**2))
        assert s**2 - 3 * se <= mean <= 3 * s**2 + 3 * se


def _quad_zero_to_x(a1, a2, x):
    total = integrate.quad(lambda y: y**a1, 0, min(x, 1.0), epsabs=0, epsrel=1e-12, limit=200)[0]
    if x > 1:
        total += integrate.quad(lambda y: y**a2, 1.0, x, epsabs=0, epsrel=1e-12, limit=200)[0]
    return total


def _quad_x_to_inf(a1, a2, x):
    total = 0.0
    if x < 1:
        total += integrate.quad(lambda y: y**-a1, x, 1.0, epsabs=0, epsrel=1e-12, limit=200)[0]
    lo = max(x, 1.0)
    total += integrate.quad(lambda s: lo * (lo / s) ** -a2 / s**2, 0, 1, epsabs=0, epsrel=1e-12,
                            limit=200)[0]
    return total


@pytest.mark.criterion(9, "closed-form weight integrals match quadrature on 1000 cases")
def test_weight_integrals():
    rng = np.random.default_rng(9)
    worst = 0.0
    for i in range(1000):
        x = float(10 ** rng.uniform(-3, 3))
        if i % 2:
            a1, a2 = rng.uniform(-0.95, 3), rng.uniform(-3, 3)
            exact, ref = integral_zero_to_x((a1, a2), x)[0], _quad_zero_to_x(a1, a2, x)
        else:
            a1, a2 = rng.uniform(-3, 3), rng.uniform(1.05, 4)
            exact, ref = integral_x_to_inf((a1, a2), x)[0], _quad_x_to_inf(a1, a2, x)
        worst = max(worst, abs(exact - ref) / abs(ref))
    assert worst <= 1e-8


@pytest.mark.criterion(10, "Hardy-type functionals agree with the local-constant oracle")
def test_hardy_functionals_agree():
    u = WeightSpec((0, 0), "NonIncreasing", cutoff=1.0)
    mismatched = []
    for p, q in [(2, 2), (F(4, 3), 4), (2, 4), (2, INF)]:
        e = ExponentPair(p, q)
        for D in [(0, 0), (0, 1), (F(1, 4), F(1, 2)), (F(1, 2), 1), (1, 2)]:
            c1 = appendix_C1(u, WeightSpec(D, "NonDecreasing"), e)
            if math.isfinite(c1) != local_constant_profile(1, e, D).is_finite:
                mismatched.append((p, q, D))
    assert not mismatched

    u2, v2, e2 = WeightSpec((0, 0), "NonIncreasing", cutoff=0.5), WeightSpec((0.5, 0.5), "NonDecreasing"), (INF, 2)
    pts = [(10.0**k, appendix_C2(u2, v2, e2, truncate=(10.0**-k, 1e30)) ** 2) for k in range(1, 7)]
    assert fit_power_log(pts).logpow == pytest.approx(1.0, abs=0.2)
