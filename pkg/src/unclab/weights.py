"""Two-piece power weights and their one-dimensional integrals.

A broken weight ``x^A`` with ``A = (a1, a2)`` equals ``|x|^a1`` for ``|x| < 1``
and ``|x|^a2`` for ``|x| >= 1``.  Besides evaluation and coordinate-wise
arithmetic, the module gives closed forms for

* ``∫_0^x y^A dy``
* ``∫_x^∞ y^(-A) dy``

together with the qualitative shape of each integral as a function of ``x``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exponents import INF, Number, as_number, compare, fmt, ge, gt, le


@dataclass(frozen=True)
class BrokenWeight:
    a1: Number
    a2: Number

    def __post_init__(self):
        object.__setattr__(self, "a1", as_number(self.a1))
        object.__setattr__(self, "a2", as_number(self.a2))
        if math.isinf(self.a1) or math.isinf(self.a2):
            raise ValueError("weight exponents must be finite")

    @classmethod
    def parse(cls, value) -> "BrokenWeight":
        """Accept a weight, a pair, a scalar (pure power) or ``"a1,a2"``."""
        if isinstance(value, BrokenWeight):
            return value
        if isinstance(value, str):
            parts = [s for s in value.replace(";", ",").split(",") if s.strip()]
            if len(parts) == 1:
                parts = parts * 2
            if len(parts) != 2:
                raise ValueError(f"expected 'a1,a2', got {value!r}")
            return cls(parts[0], parts[1])
        if isinstance(value, (tuple, list, np.ndarray)):
            if len(value) != 2:
                raise ValueError("a broken weight needs exactly two exponents")
            return cls(value[0], value[1])
        return cls(value, value)

    @property
    def T(self) -> "BrokenWeight":
        return transpose(self)

    def __iter__(self):
        yield self.a1
        yield self.a2

    def __neg__(self):
        return BrokenWeight(-self.a1, -self.a2)

    def __add__(self, other):
        return combine(self, "add", BrokenWeight.parse(other))

    def __sub__(self, other):
        return combine(self, "sub", BrokenWeight.parse(other))

    def __mul__(self, k):
        return combine(self, ("scale", k))

    __rmul__ = __mul__

    def __call__(self, x):
        return eval_weight(self, x)

    def is_positive(self) -> bool:
        return gt(self.a1, 0) and gt(self.a2, 0)

    def is_nonnegative(self) -> bool:
        return ge(self.a1, 0) and ge(self.a2, 0)

    def floats(self) -> tuple[float, float]:
        return float(self.a1), float(self.a2)

    def __str__(self):
        return f"({fmt(self.a1)},{fmt(self.a2)})"


WeightLike = Union[BrokenWeight, tuple, list, str, float, int]


def eval_weight(w: WeightLike, x):
    """``x^A`` for ``x > 0``; accepts scalars or numpy arrays."""
    w = BrokenWeight.parse(w)
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("broken weights are evaluated at x > 0 only")
    a1, a2 = w.floats()
    with np.errstate(over="ignore"):
        out = np.where(arr < 1.0, arr**a1, arr**a2)
    return float(out) if out.ndim == 0 else out



def radial_weight(w: WeightLike, r):
    """Weight applied to ``|x|`` with ``0^A`` read as a limit (0, 1 or inf)."""
    w = BrokenWeight.parse(w)
    r = np.abs(np.asarray(r, dtype=float))
    a1, a2 = w.floats()
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        small = np.where(r > 0, r**a1, 0.0 if a1 > 0 else (1.0 if a1 == 0 else np.inf))
        out = np.where(r < 1.0, small, r**a2)
    return float(out) if out.ndim == 0 else out


def transpose(w: WeightLike) -> BrokenWeight:
    w = BrokenWeight.parse(w)
    return BrokenWeight(w.a2, w.a1)


def combine(w1: WeightLike, op, w2: WeightLike | None = None) -> BrokenWeight:
    """Coordinate-wise ``add``, ``sub`` or ``("scale", k)``."""
    w1 = BrokenWeight.parse(w1)
    if isinstance(op, tuple) and op[0] == "scale":
        k = as_number(op[1])
        return BrokenWeight(w1.a1 * k, w1.a2 * k)
    w2 = BrokenWeight.parse(w2)
    if op == "add":
        return BrokenWeight(w1.a1 + w2.a1, w1.a2 + w2.a2)
    if op == "sub":
        return BrokenWeight(w1.a1 - w2.a1, w1.a2 - w2.a2)
    raise ValueError(f"unknown weight operation {op!r}")


class IntegralKind(enum.Enum):
    POWER_ONLY = "PowerOnly"
    POWER_PLUS_LOG = "PowerPlusLog"
    POWER_PLUS_INDICATOR = "PowerPlusIndicator"
    INFINITE = "Infinite"


@dataclass(frozen=True)
class IntegralAsym:
    """Shape of a weight integral up to constants.

    ``model(x)`` evaluates the representative ``x^power + extra(x)`` where the
    extra term is ``log(x+1)``, ``log+(1/x)``, ``1_{x>1}`` or ``1_{x<1}`` as
    recorded in ``extra``.
    """

    kind: IntegralKind
    power: BrokenWeight | None = None
    extra: str | None = None

    def __post_init__(self):
        if self.kind is IntegralKind.INFINITE and (self.power is not None or self.extra):
            raise ValueError("an infinite integral carries no finite fields")

    @property
    def logpow(self) -> int:
        return 1 if self.kind is IntegralKind.POWER_PLUS_LOG else 0

    def model(self, x: float) -> float:
        if self.kind is IntegralKind.INFINITE:
            return INF
        value = eval_weight(self.power, x)
        if self.extra == "log(x+1)":
            value += math.log(x + 1)
        elif self.extra == "log+(1/x)":
            value += max(math.log(1 / x), 0.0)
        elif self.extra == "1{x>1}":
            value += 1.0 if x > 1 else 0.0
        elif self.extra == "1{x<1}":
            value += 1.0 if x < 1 else 0.0
        return value


INFINITE_INTEGRAL = IntegralAsym(IntegralKind.INFINITE)


def _power_antiderivative(a: float, lo: float, hi: float) -> float:
    """``∫_lo^hi y^a dy`` for ``0 < lo <= hi < inf``."""
    if a == -1:
        return math.log(hi) - math.log(lo)
    k = a + 1
    return (hi**k - lo**k) / k


def _check_x(x) -> float:
    x = float(x)
    if not x > 0 or math.isinf(x):
        raise ValueError(f"x must be a positive finite number, got {x}")
    return x


def integral_zero_to_x(A: WeightLike, x) -> tuple[float, IntegralAsym]:
    """Exact value and shape of ``∫_0^x y^A dy``."""
    A = BrokenWeight.parse(A)
    x = _check_x(x)
    if le(A.a1, -1):
        return INF, INFINITE_INTEGRAL
    a1, a2 = A.floats()
    if x <= 1:
        exact = x ** (a1 + 1) / (a1 + 1)
    else:
        exact = 1 / (a1 + 1) + _power_antiderivative(a2, 1.0, x)
    power = BrokenWeight(A.a1 + 1, A.a2 + 1)
    c = compare(A.a2, -1)
    if c > 0:
        asym = IntegralAsym(IntegralKind.POWER_ONLY, power)
    elif c == 0:
        asym = IntegralAsym(IntegralKind.POWER_PLUS_LOG, power, "log(x+1)")
    else:
        asym = IntegralAsym(IntegralKind.POWER_PLUS_INDICATOR, power, "1{x>1}")
    return exact, asym


def integral_x_to_inf(A: WeightLike, x) -> tuple[float, IntegralAsym]:
    """Exact value and shape of ``∫_x^∞ y^(-A) dy``."""
    A = BrokenWeight.parse(A)
    x = _check_x(x)
    if le(A.a2, 1):
        return INF, INFINITE_INTEGRAL
    a1, a2 = A.floats()
    tail = 1 / (a2 - 1)
    if x >= 1:
        exact = x ** (1 - a2) / (a2 - 1)
    else:
        exact = _power_antiderivative(-a1, x, 1.0) + tail
    power = BrokenWeight(1 - A.a1, 1 - A.a2)
    c = compare(A.a1, 1)
    if c > 0:
        asym = IntegralAsym(IntegralKind.POWER_ONLY, power)
    elif c == 0:
        asym = IntegralAsym(IntegralKind.POWER_PLUS_LOG, power, "log+(1/x)")
    else:
        asym = IntegralAsym(IntegralKind.POWER_PLUS_INDICATOR, power, "1{x<1}")
    return exact, asym


def radial_power_integral(exponent: WeightLike, lo: float, hi: float) -> float:
    """``∫_lo^hi r^E dr`` for a broken exponent ``E`` and ``0 <= lo <= hi <= inf``.

    Returns ``inf`` when the integral diverges at either end.
    """
    E = BrokenWeight.parse(exponent)
    e1, e2 = E.floats()
    if hi <= lo:
        return 0.0
    total = 0.0
    if lo < 1:
        top = min(hi, 1.0)
        if lo == 0:
            if e1 <= -1:
                return INF
            total += top ** (e1 + 1) / (e1 + 1)
        else:
            total += _power_antiderivative(e1, lo, top)
    if hi > 1:
        bottom = max(lo, 1.0)
        if math.isinf(hi):
            if e2 >= -1:
                return INF
            total += bottom ** (e2 + 1) / (-(e2 + 1))
        else:
            total += _power_antiderivative(e2, bottom, hi)
    return total


__all__ = [
    "BrokenWeight",
    "IntegralAsym",
    "IntegralKind",
    "INFINITE_INTEGRAL",
    "combine",
    "eval_weight",
    "integral_x_to_inf",
    "integral_zero_to_x",
    "radial_power_integral",
    "radial_weight",
    "transpose",
]
