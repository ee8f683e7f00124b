"""Open intervals of the extended real line."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InputError

INF = math.inf


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)``; either endpoint may be infinite."""

    lo: float = -INF
    hi: float = INF

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if math.isnan(lo) or math.isnan(hi):
            raise InputError("interval endpoints must not be NaN")
        if not lo < hi:
            raise DomainError(f"empty interval ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __contains__(self, x) -> bool:
        return self.lo < x < self.hi

    def __iter__(self):
        yield self.lo
        yield self.hi

    def __str__(self):
        return f"({self.lo:g}, {self.hi:g})"

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def intersect(self, other: Interval) -> Interval:
        """Intersection; raises DomainError if it is empty."""
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if not lo < hi:
            raise DomainError(f"intervals {self} and {other} do not overlap", domain=self)
        return Interval(lo, hi)

    def overlaps(self, other: Interval) -> bool:
        return max(self.lo, other.lo) < min(self.hi, other.hi)

    def issubset(self, other: Interval) -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def window(self, span: float = 10.0) -> Interval:
        """A bounded sub-interval suitable for sampling and probing.

        Infinite ends are cut at ``span`` units (scaled by the magnitude of
        the finite end, if any) from the finite part of the interval.
        """
        lo, hi = self.lo, self.hi
        if math.isinf(lo) and math.isinf(hi):
            return Interval(-span, span)
        if math.isinf(hi):
            return Interval(lo, lo + span * max(1.0, abs(lo)))
        if math.isinf(lo):
            return Interval(hi - span * max(1.0, abs(hi)), hi)
        return self

    def interior_point(self) -> float:
        w = self.window()
        mid = 0.5 * (w.lo + w.hi)
        if mid in self:
            return mid
        return w.lo + 0.5 * (w.hi - w.lo)

    def grid(self, n: int, margin: float = 0.0) -> list[float]:
        """``n`` equally spaced interior points of the bounded window.

        With ``margin == 0`` the points are ``lo + (j + 1) * h`` for
        ``h = width / (n + 1)``; a positive margin shrinks the window first.
        """
        w = self.window()
        lo = w.lo + margin * (w.hi - w.lo)
        hi = w.hi - margin * (w.hi - w.lo)
        h = (hi - lo) / (n + 1)
        return [lo + (j + 1) * h for j in range(n)]

    def to_json(self) -> list:
        return [_encode(self.lo), _encode(self.hi)]

    @classmethod
    def from_json(cls, data) -> Interval:
        if not isinstance(data, (list, tuple)) or len(data) != 2:
            raise InputError(f"interval must be a two-element list, got {data!r}")
        return cls(_decode(data[0], -INF), _decode(data[1], INF))


REAL = Interval()
POSITIVE = Interval(0.0, INF)


def _encode(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _decode(x, default: float) -> float:
    if x is None:
        return default
    try:
        return float(x)
    except (TypeError, ValueError):
        raise InputError(f"bad interval endpoint {x!r}") from None
