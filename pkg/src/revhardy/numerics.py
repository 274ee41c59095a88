"""Extended non-negative reals, exponent helpers and enclosures.

Extended reals are plain Python floats with ``math.inf`` as the distinguished
infinity.  The helpers below implement the arithmetic conventions used
throughout the package::

    1/inf = 0,   0 * inf = 0,   0/0 = 0

Exponents are floats in ``(0, inf]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf
EPS = 2.0**-52

__all__ = [
    "INF",
    "EPS",
    "Enclosure",
    "conjugate",
    "ext_div",
    "ext_mul",
    "ext_pow",
    "ext_recip",
    "holder_rho",
    "check_exponent",
]


def check_exponent(p: float, name: str = "p") -> float:
    p = float(p)
    if not (p > 0):
        raise ValueError(f"exponent {name} must be > 0, got {p!r}")
    return p


def ext_mul(a: float, b: float) -> float:
    """Product with ``0 * inf = 0``."""
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def ext_recip(a: float) -> float:
    """Reciprocal of a non-negative extended real; ``1/0 = inf``, ``1/inf = 0``."""
    if a == 0.0:
        return INF
    if math.isinf(a):
        return 0.0
    return 1.0 / a


def ext_div(a: float, b: float) -> float:
    """Quotient of non-negative extended reals with ``0/0 = 0``.

    ``inf/inf`` has no agreed value and raises ``ValueError``.
    """
    if a == 0.0:
        return 0.0
    if math.isinf(a) and math.isinf(b):
        raise ValueError("inf/inf is undefined")
    if b == 0.0:
        return INF
    return a / b


def ext_pow(x: float, e: float) -> float:
    """``x ** e`` for ``x`` in ``[0, inf]`` and real ``e``."""
    if e == 0.0:
        return 1.0
    if x == 0.0:
        return 0.0 if e > 0 else INF
    if math.isinf(x):
        return INF if e > 0 else 0.0
    return x**e


def conjugate(p: float) -> float:
    """Conjugate exponent, including the ``0 < p < 1`` branch ``p/(1-p)``."""
    p = check_exponent(p)
    if math.isinf(p):
        return 1.0
    if p < 1.0:
        return p / (1.0 - p)
    if p == 1.0:
        return INF
    return p / (p - 1.0)


def holder_rho(p: float, q: float) -> float:
    """Exponent ``rho`` with ``1/rho = (1/p - 1/q)_+``; ``inf`` when ``q <= p``."""
    p = check_exponent(p, "p")
    q = check_exponent(q, "q")
    d = ext_recip(p) - ext_recip(q)
    if d <= 0.0:
        return INF
    return 1.0 / d


@dataclass(frozen=True)
class Enclosure:
    """Closed interval ``[lo, hi]`` certified to contain a non-negative quantity."""

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("enclosure endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"malformed enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float, rel: float = 0.0) -> "Enclosure":
        if math.isinf(x):
            return cls(x, x)
        return cls(max(0.0, x * (1.0 - rel)), x * (1.0 + rel))

    @property
    def width(self) -> float:
        if math.isinf(self.hi):
            return 0.0 if math.isinf(self.lo) else INF
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        if math.isinf(self.hi):
            return self.hi if math.isinf(self.lo) else INF
        return 0.5 * (self.lo + self.hi)

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.lo)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def overlaps(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def widen(self, rel: float) -> "Enclosure":
        """Pad outward by a relative amount (rounding allowance)."""
        lo = self.lo if math.isinf(self.lo) else max(0.0, self.lo * (1.0 - rel))
        hi = self.hi if math.isinf(self.hi) else self.hi * (1.0 + rel)
        return Enclosure(lo, hi)

    def __add__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    def power(self, e: float) -> "Enclosure":
        """Image under ``x -> x**e`` for ``e > 0`` (monotone increasing)."""
        if not e > 0:
            raise ValueError("power exponent must be positive")
        return Enclosure(ext_pow(self.lo, e), ext_pow(self.hi, e))

    def scale(self, c: float) -> "Enclosure":
        return Enclosure(ext_mul(self.lo, c), ext_mul(self.hi, c))

    def as_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi}
