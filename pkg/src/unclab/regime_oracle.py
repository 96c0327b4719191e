"""Decision procedures and asymptotic profiles for weighted uncertainty inequalities.

Everything here is symbolic: inputs are exponents, outputs are verdicts
(:class:`Verdict`) or piecewise power-log profiles (:class:`AsymProfile`).
Boundary cases are decided with :mod:`unclab.exponents` comparisons, exact
for rational input.

Notation used throughout (``d`` is the dimension):

``scale``      ``d(1/p + 1/q - 1)``, the homogeneity defect of the pair.
``crit``       ``d(1/2 - 1/p)``, the threshold at which random-sign sums stop
               being controlled.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exponents import (
    ExponentPair,
    Number,
    as_number,
    eq,
    fmt,
    ge,
    gt,
    le,
    lt,
    tidy,
)
from .weights import BrokenWeight, WeightLike

HALF = Fraction(1, 2)


class Verdict(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"

    def __str__(self):
        return self.value.upper()


class LogArg(enum.Enum):
    NEAR_ZERO = "NearZero"  # log+(1/t)
    NEAR_INFINITY = "NearInfinity"  # log(t+1)


@dataclass(frozen=True)
class AsymTerm:
    """``t^power * L(t)^logpow`` with ``L`` chosen by ``logarg``."""

    power: Number
    logpow: Number = Fraction(0)
    logarg: LogArg = LogArg.NEAR_INFINITY

    def __post_init__(self):
        object.__setattr__(self, "power", tidy(as_number(self.power)))
        object.__setattr__(self, "logpow", tidy(as_number(self.logpow)))
        if eq(self.logpow, 0):
            object.__setattr__(self, "logpow", Fraction(0))
            object.__setattr__(self, "logarg", LogArg.NEAR_INFINITY)

    def key(self) -> tuple:
        return (self.power, self.logpow, self.logarg)

    def evaluate(self, t: float) -> float:
        value = float(t) ** float(self.power)
        if self.logpow:
            arg = math.log(t + 1) if self.logarg is LogArg.NEAR_INFINITY else max(math.log(1 / t), 0.0)
            value *= arg ** float(self.logpow)
        return value

    def render(self, var: str = "x") -> str:
        parts = []
        if not eq(self.power, 0):
            parts.append(f"{var}^{fmt(self.power)}")
        if not eq(self.logpow, 0):
            arg = f"log({var}+1)" if self.logarg is LogArg.NEAR_INFINITY else f"log₊(1/{var})"
            parts.append(f"{arg}^{fmt(self.logpow)}")
        return " · ".join(parts) if parts else "1"


@dataclass(frozen=True)
class AsymProfile:
    """Small-argument and large-argument terms, or the infinite profile.

    ``small`` covers arguments below 1 and ``large`` arguments at or above 1.
    Profiles indexed by an integer (the discrete constants) only carry
    ``large``.  ``unknown`` marks parameter corners no case of the theory
    covers.
    """

    small: AsymTerm | None = None
    large: AsymTerm | None = None
    infinite: bool = False
    unknown: bool = False

    @property
    def is_finite(self) -> bool:
        return not self.infinite and not self.unknown

    def key(self):
        if self.infinite:
            return "Infinite"
        if self.unknown:
            return "Unknown"
        return (
            self.small.key() if self.small else None,
            self.large.key() if self.large else None,
        )

    def __eq__(self, other):
        return isinstance(other, AsymProfile) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def term(self, t: float) -> AsymTerm:
        if not self.is_finite:
            raise ValueError("infinite or unknown profiles have no terms")
        if t < 1 and self.small is not None:
            return self.small
        return self.large if self.large is not None else self.small

    def evaluate(self, t: float) -> float:
        if self.infinite:
            return float("inf")
        return self.term(t).evaluate(t)

    def render(self, var: str = "x") -> str:
        if self.infinite:
            return "INFINITE"
        if self.unknown:
            return "UNKNOWN"
        if self.small is None:
            return self.large.render(var)
        return f"{self.small.render(var)} | {self.large.render(var)}"

    def __str__(self):
        return self.render()


INFINITE = AsymProfile(infinite=True)
UNKNOWN = AsymProfile(unknown=True)


def _pair(e) -> ExponentPair:
    if isinstance(e, ExponentPair):
        return e
    p, q = e
    return ExponentPair(p, q)


def _dim(d) -> int:
    if isinstance(d, bool) or int(d) != d or int(d) < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def scale_index(d: int, e: ExponentPair) -> Number:
    """``d(1/p + 1/q - 1)``."""
    return d * (e.inv_p + e.inv_q - 1)


def critical_index(d: int, e: ExponentPair) -> Number:
    """``d(1/2 - 1/p)``."""
    return d * (HALF - e.inv_p)


@dataclass(frozen=True)
class BetaIndex:
    """``(max(B1 + scale, 0), B2 + scale)`` for a given pair of exponents."""

    first: Number
    second: Number

    @classmethod
    def of(cls, d: int, e: ExponentPair, B: BrokenWeight) -> "BetaIndex":
        s = scale_index(d, e)
        first = B.a1 + s
        if lt(first, 0):
            first = Fraction(0)
        return cls(first, B.a2 + s)

    def as_weight(self) -> BrokenWeight:
        return BrokenWeight(self.first, self.second)


# -- nonsymmetric and symmetric verdicts ------------------------------------


def classify_nonsymmetric(d, e, alpha, beta) -> Verdict:
    """Verdict for ``||f||_q^{...} <= C ||f |x|^alpha||_q ... ||f^ |xi|^beta||_p`` with pure powers."""
    d, e = _dim(d), _pair(e)
    alpha, beta = as_number(alpha), as_number(beta)
    if not (gt(alpha, 0) and gt(beta, 0)):
        raise ValueError("alpha and beta must be positive")
    delta = -scale_index(d, e)
    first = (le(e.p, e.q) and e.q != float("inf") and eq(beta, delta)) or gt(beta, delta)
    second = (
        ge(e.q, 2)
        or (le(e.p, 2) and le(e.q, 2))
        or (lt(e.q, 2) and gt(e.p, 2) and gt(beta, critical_index(d, e)))
    )
    return Verdict.HOLDS if first and second else Verdict.FAILS


def classify_symmetric(d, p, A: WeightLike, B: WeightLike) -> Verdict:
    """Verdict for the symmetric inequality with broken weights, ``p >= 2``."""
    d = _dim(d)
    p = as_number(p)
    if lt(p, 2):
        raise ValueError(
            "the symmetric classification expects p >= 2; for p < 2 exchange the "
            "roles of f and its Fourier transform (use p' and swap A with B)"
        )
    A, B = BrokenWeight.parse(A), BrokenWeight.parse(B)
    if not (A.is_positive() and B.is_positive()):
        raise ValueError("all weight exponents must be positive")
    c = critical_index(d, ExponentPair(p, 2))
    if not (ge(B.a2, A.a1) and ge(A.a2, B.a1) and gt(A.a2, c)):
        return Verdict.FAILS
    if lt(A.a1, c):
        ok = ge(B.a2 * B.a2, c * A.a1)
    elif gt(A.a1, c):
        ok = True
    else:
        ok = gt(B.a2, c)
    return Verdict.HOLDS if ok else Verdict.FAILS


# -- local constants ---------------------------------------------------------


def _local_small_term(d: int, e: ExponentPair, D2) -> AsymTerm:
    s = scale_index(d, e)
    dp = d * (1 - e.inv_p)
    if lt(D2, dp):
        return AsymTerm(D2 + s)
    if eq(D2, dp):
        return AsymTerm(d * e.inv_q, 1 - e.inv_p, LogArg.NEAR_ZERO)
    return AsymTerm(d * e.inv_q)


def local_constant_profile(d, e, D: WeightLike) -> AsymProfile:
    """Growth of the local constant ``C(t)`` near ``t = 0`` and ``t = inf``."""
    d, e = _dim(d), _pair(e)
    D = BrokenWeight.parse(D)
    if not D.is_nonnegative():
        raise ValueError("the local-constant weight must be nonnegative")
    inf = float("inf")
    s = scale_index(d, e)
    delta = -s
    dp = d * (1 - e.inv_p)
    c = critical_index(d, e)
    D1, D2 = D.a1, D.a2
    p, q = e.p, e.q

    if gt(p, 1) and le(p, q) and q != inf and ge(D2, delta) and lt(D1, dp):
        large = AsymTerm(D1 + s) if ge(D1, delta) else AsymTerm(0)
        return AsymProfile(_local_small_term(d, e, D2), large)

    if lt(q, p) and (ge(q, 2) or ge(e.p_conj, 2)) and gt(D2, delta) and lt(D1, dp):
        if gt(D1, delta):
            large = AsymTerm(D1 + s)
        elif eq(D1, delta):
            large = AsymTerm(0, e.inv_q - e.inv_p)
        else:
            large = AsymTerm(0)
        return AsymProfile(_local_small_term(d, e, D2), large)

    if lt(q, 2) and gt(p, 2) and gt(D2, c) and lt(D1, dp):
        tail = d * (e.inv_q - HALF)
        if gt(D1, c):
            large = AsymTerm(D1 + s)
        elif eq(D1, c):
            large = AsymTerm(tail, HALF - e.inv_p)
        else:
            large = AsymTerm(tail)
        return AsymProfile(_local_small_term(d, e, D2), large)

    if eq(p, 1) and eq(D1, 0):
        term = AsymTerm(d * e.inv_q)
        return AsymProfile(term, term)

    if q == inf and gt(p, 1) and lt(D1, dp) and lt(dp, D2):
        return AsymProfile(AsymTerm(0), AsymTerm(0))

    return INFINITE


# -- discrete constants ------------------------------------------------------


def discrete_constant_profile(d, e, gamma) -> AsymProfile:
    """Growth in ``M`` of the trigonometric-polynomial constant with weight ``(1+|n|)^gamma``."""
    d, e = _dim(d), _pair(e)
    gamma = as_number(gamma)
    if lt(gamma, 0):
        raise ValueError("gamma must be nonnegative")
    inf = float("inf")
    p, q = e.p, e.q
    delta = d * (1 - e.inv_p - e.inv_q)

    if le(p, q) and q != inf:
        return AsymProfile(large=AsymTerm(delta - gamma) if lt(gamma, delta) else AsymTerm(0))
    if q == inf:
        top = d * (1 - e.inv_p)
        if lt(gamma, top):
            return AsymProfile(large=AsymTerm(top - gamma))
        if eq(gamma, top):
            return AsymProfile(large=AsymTerm(0, 1 - e.inv_p))
        return AsymProfile(large=AsymTerm(0))
    if ge(q, 2):
        if lt(gamma, delta):
            return AsymProfile(large=AsymTerm(delta - gamma))
        if eq(gamma, delta):
            return AsymProfile(large=AsymTerm(0, e.inv_q - e.inv_p))
        return AsymProfile(large=AsymTerm(0))
    # q < 2 and q < p behaves like q = 2
    return discrete_constant_profile(d, ExponentPair(p, 2), gamma)


# -- the optimal H(x) --------------------------------------------------------


def _ratio_term(num, den) -> AsymTerm:
    return AsymTerm(Fraction(0) if eq(num, 0) else num / den)


def _power_profile(A: BrokenWeight, first, second) -> AsymProfile:
    """``x^(b^T / (A + b^T))`` for the index ``b = (first, second)``."""
    small = _ratio_term(second, A.a1 + second)
    large = _ratio_term(first, A.a2 + first)
    return AsymProfile(small, large)


def H_profile(d, e, A: WeightLike, B: WeightLike) -> AsymProfile:
    """Growth of the optimal ``H(x)`` with ``||f||_q <= H(||f|x|^A||_q)`` when ``||f^|xi|^B||_p <= 1``."""
    d, e = _dim(d), _pair(e)
    A, B = BrokenWeight.parse(A), BrokenWeight.parse(B)
    if not (A.is_positive() and B.is_positive()):
        raise ValueError("all weight exponents must be positive")
    inf = float("inf")
    p, q = e.p, e.q
    s = scale_index(d, e)
    delta = -s
    beta = BetaIndex.of(d, e, B)

    if q == inf:
        dp = d * (1 - e.inv_p)
        if not gt(B.a2, dp):
            return INFINITE
        prof = _power_profile(A, beta.first, beta.second)
        if eq(B.a1 - dp, 0):
            return AsymProfile(prof.small, AsymTerm(0, 1 - e.inv_p))
        return prof

    if le(p, q):
        if not ge(B.a2, delta):
            return INFINITE
        return _power_profile(A, beta.first, beta.second)

    # q < p from here on
    if ge(q, 2) or ge(e.p_conj, 2):
        if not gt(B.a2, delta):
            return INFINITE
        prof = _power_profile(A, beta.first, beta.second)
        if eq(B.a1 + s, 0):
            return AsymProfile(prof.small, AsymTerm(0, e.inv_q - e.inv_p))
        return prof

    c = critical_index(d, e)
    if not gt(B.a2, c):
        return INFINITE
    tail = d * (e.inv_q - HALF)
    beta2 = BetaIndex.of(d, ExponentPair(p, 2), B)
    prof = _power_profile(A, beta2.first + tail, beta2.second + tail)
    if eq(B.a1 - c, 0):
        den = A.a2 + tail
        large = AsymTerm(tail / den, A.a2 * (HALF - e.inv_p) / den)
        return AsymProfile(prof.small, large)
    return prof


# -- cross-check between the two classifications -----------------------------


@dataclass(frozen=True)
class Consistency:
    consistent: bool
    detail: str = ""

    def __bool__(self):
        return self.consistent


def consistency_nonsym_vs_H(d, e, alpha, beta) -> Consistency:
    """Check the pure-power verdict against the broken-weight ``H`` profile."""
    d, e = _dim(d), _pair(e)
    alpha, beta = as_number(alpha), as_number(beta)
    verdict = classify_nonsymmetric(d, e, alpha, beta)
    prof = H_profile(d, e, (alpha, alpha), (beta, beta))
    if prof.unknown:
        return Consistency(False, "H profile is unknown for this corner")
    holds = verdict is Verdict.HOLDS
    if holds != prof.is_finite:
        return Consistency(False, f"verdict {verdict.value} but H profile {prof.render()}")
    if holds:
        s = scale_index(d, e)
        expected = _ratio_term(beta + s, alpha + beta + s)
        if prof.small != expected or prof.large != expected:
            return Consistency(
                False, f"expected x^{fmt(expected.power)} in both regimes, got {prof.render()}"
            )
    return Consistency(True)


def sweep_consistency(dims: Iterable[int], ps, qs, alphas, betas) -> list[tuple[tuple, Consistency]]:
    out = []
    for d in dims:
        for p in ps:
            for q in qs:
                e = ExponentPair(p, q)
                for a in alphas:
                    for b in betas:
                        out.append(((d, e.p, e.q, as_number(a), as_number(b)), consistency_nonsym_vs_H(d, e, a, b)))
    return out


__all__ = [
    "AsymProfile",
    "AsymTerm",
    "BetaIndex",
    "Consistency",
    "INFINITE",
    "UNKNOWN",
    "LogArg",
    "Verdict",
    "H_profile",
    "classify_nonsymmetric",
    "classify_symmetric",
    "consistency_nonsym_vs_H",
    "critical_index",
    "discrete_constant_profile",
    "local_constant_profile",
    "scale_index",
    "sweep_consistency",
]
