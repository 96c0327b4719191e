"""Exponent arithmetic shared by every module.

Exponents are kept as :class:`fractions.Fraction` whenever the caller supplies
integers, fractions or decimal strings, so that boundary cases such as
``beta == d*(1 - 1/q - 1/p)`` are decided exactly.  Plain floats are accepted
too; comparisons involving a float use a relative tolerance controlled by
:data:`EQUALITY_RTOL`.

Infinite Lebesgue exponents are represented by :data:`INF` (``math.inf``).
It behaves as a distinguished value: ``reciprocal(INF) == 0`` and ``INF``
compares above every finite exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Union

INF = math.inf

# Relative tolerance for deciding equality when a float is involved.  Exact
# rationals never use it.
EQUALITY_RTOL = 1e-12

Number = Union[int, Fraction, float]


def as_number(value) -> Number:
    """Coerce user input to an exact rational when possible.

    Strings are parsed as fractions (``"4/3"``, ``"0.25"``) or as ``"inf"``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().lower()
        if text in {"inf", "infinity", "+inf", "oo", "∞"}:
            return INF
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse exponent {value!r}") from exc
    if isinstance(value, Real):
        value = float(value)
        if math.isnan(value):
            raise ValueError("NaN is not an exponent")
        return value
    raise TypeError(f"unsupported exponent type {type(value).__name__}")


def is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def compare(a: Number, b: Number, rtol: float | None = None) -> int:
    """Three-way comparison, exact for rationals and tolerant for floats."""
    if a == b:
        return 0
    if math.isinf(a) or math.isinf(b):
        return -1 if a < b else 1
    if is_exact(a, b):
        return -1 if a < b else 1
    tol = EQUALITY_RTOL if rtol is None else rtol
    fa, fb = float(a), float(b)
    if abs(fa - fb) <= tol * max(1.0, abs(fa), abs(fb)):
        return 0
    return -1 if fa < fb else 1


def eq(a, b) -> bool:
    return compare(a, b) == 0


def lt(a, b) -> bool:
    return compare(a, b) < 0


def le(a, b) -> bool:
    return compare(a, b) <= 0


def gt(a, b) -> bool:
    return compare(a, b) > 0


def ge(a, b) -> bool:
    return compare(a, b) >= 0


def reciprocal(p: Number) -> Number:
    if math.isinf(p):
        return Fraction(0)
    if is_exact(p):
        return Fraction(1) / Fraction(p)
    return 1.0 / p


def conjugate(p: Number) -> Number:
    """Hölder conjugate ``p'`` with ``1/p + 1/p' = 1``."""
    if eq(p, 1):
        return INF
    if math.isinf(p):
        return Fraction(1)
    inv = 1 - reciprocal(p)
    return reciprocal(inv)


def tidy(value: Number) -> Number:
    """Collapse floats that are within tolerance of a short fraction."""
    if is_exact(value) or math.isinf(value):
        return value
    approx = Fraction(value).limit_denominator(1000)
    if eq(float(approx), value):
        return approx
    return value


def fmt(value: Number) -> str:
    """Short human-readable rendering used by reports and the CLI."""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if isinstance(value, Fraction) and value.denominator == 1:
        return str(value.numerator)
    text = f"{float(value):.6f}".rstrip("0").rstrip(".")
    return "0" if text in {"-0", ""} else text


@dataclass(frozen=True)
class ExponentPair:
    """Lebesgue exponents ``(p, q)`` with ``1 <= p, q <= inf``."""

    p: Number
    q: Number

    def __post_init__(self):
        p, q = as_number(self.p), as_number(self.q)
        for name, v in (("p", p), ("q", q)):
            if lt(v, 1):
                raise ValueError(f"{name} must be >= 1, got {fmt(v)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def p_conj(self) -> Number:
        return conjugate(self.p)

    @property
    def q_conj(self) -> Number:
        return conjugate(self.q)

    @property
    def inv_p(self) -> Number:
        return reciprocal(self.p)

    @property
    def inv_q(self) -> Number:
        return reciprocal(self.q)

    @property
    def r(self) -> Number | None:
        """``1/r = 1/q - 1/p``; ``None`` unless ``q < p``."""
        return _positive_reciprocal(self.inv_q - self.inv_p)

    @property
    def p_sharp(self) -> Number | None:
        """``1/p# = 1/2 - 1/p``; ``None`` unless ``p > 2``."""
        return _positive_reciprocal(Fraction(1, 2) - self.inv_p)

    @property
    def q_sharp(self) -> Number | None:
        """``1/q# = 1/q - 1/2``; ``None`` unless ``q < 2``."""
        return _positive_reciprocal(self.inv_q - Fraction(1, 2))

    def __str__(self):
        return f"(p={fmt(self.p)}, q={fmt(self.q)})"


def _positive_reciprocal(inv: Number) -> Number | None:
    if not gt(inv, 0):
        return None
    return reciprocal(inv)
