"""Weighted quasi-arithmetic means.

``mean(g, s)`` is the generic route: ``g^-1(sum w_i g(v_i))`` with no
stability tricks, since nothing is known about the shape of ``g``.  Power
means (and, in :mod:`qamean.family`, exponential generators) get a
log-domain route that survives exponents in the thousands.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, InputError, MeanOverflowError
from .generator import Generator

WEIGHT_SUM_TOL = 1e-9
CONSTANT_RTOL = 1e-12


@dataclass(frozen=True)
class WeightedSample:
    """Values ``v_1..v_n`` with positive weights normalized to sum to one.

    Weights whose sum is off by more than ``WEIGHT_SUM_TOL`` are rejected
    rather than silently renormalized; use :meth:`normalized` for raw
    (unnormalized) weights such as counts.
    """

    values: tuple
    weights: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        weights = tuple(float(w) for w in self.weights)
        if not values:
            raise InputError("a sample needs at least one value")
        if len(values) != len(weights):
            raise InputError(f"{len(values)} values but {len(weights)} weights")
        if not all(math.isfinite(v) for v in values):
            raise InputError("sample values must be finite")
        if not all(w > 0 and math.isfinite(w) for w in weights):
            raise InputError("weights must be positive and finite")
        total = math.fsum(weights)
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise InputError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", tuple(w / total for w in weights))

    @classmethod
    def uniform(cls, values: Iterable[float]) -> WeightedSample:
        values = tuple(values)
        return cls(values, (1.0 / len(values),) * len(values)) if values else cls((), ())

    @classmethod
    def normalized(cls, values: Iterable[float], weights: Iterable[float]) -> WeightedSample:
        weights = tuple(float(w) for w in weights)
        total = math.fsum(weights)
        if not total > 0:
            raise InputError("weights must have a positive sum")
        return cls(tuple(values), tuple(w / total for w in weights))

    def __len__(self):
        return len(self.values)

    @property
    def min(self) -> float:
        return min(self.values)

    @property
    def max(self) -> float:
        return max(self.values)

    def is_constant(self) -> bool:
        hi, lo = self.max, self.min
        return not hi - lo > CONSTANT_RTOL * max(1.0, abs(hi))

    def map(self, fn) -> WeightedSample:
        """Same weights, values transformed by ``fn``."""
        return WeightedSample(tuple(fn(v) for v in self.values), self.weights)


def read_sample_csv(text: str) -> WeightedSample:
    """Parse ``value,weight`` CSV; without a weight column weights are uniform."""
    reader = csv.DictReader(io.StringIO(text))
    fields = [f.strip() for f in reader.fieldnames or ()]
    if "value" not in fields:
        raise InputError("sample CSV needs a 'value' column")
    reader.fieldnames = fields
    values, weights = [], []
    for lineno, row in enumerate(reader, start=2):
        try:
            values.append(float(row["value"]))
            if "weight" in fields:
                weights.append(float(row["weight"]))
        except (TypeError, ValueError):
            raise InputError(f"line {lineno}: cannot parse {row!r}") from None
    if not values:
        raise InputError("sample CSV has no rows")
    if "weight" not in fields:
        return WeightedSample.uniform(values)
    return WeightedSample(values, weights)


def write_sample_csv(s: WeightedSample) -> str:
    lines = ["value,weight"]
    lines += [f"{v!r},{w!r}" for v, w in zip(s.values, s.weights)]
    return "\n".join(lines) + "\n"


def _clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x


def mean(g: Generator, s: WeightedSample) -> float:
    """Weighted quasi-arithmetic mean ``g^-1(sum w_i g(v_i))``."""
    for v in s.values:
        if v not in g.domain:
            raise DomainError(f"sample value {v!r} is outside the domain {g.domain} of {g}", x=v, domain=g.domain)
    if s.is_constant():
        return s.values[0]
    try:
        gv = [g(v) for v in s.values]
        acc = math.fsum(w * y for w, y in zip(s.weights, gv))
    except OverflowError:
        raise MeanOverflowError(
            f"generator {g} overflows on this sample; for power or exponential generators "
            "use power_mean or ScaleFamily.mean_at, which work in the log domain"
        ) from None
    if not math.isfinite(acc):
        raise MeanOverflowError(
            f"accumulated values of {g} are not finite; use power_mean or ScaleFamily.mean_at instead"
        )
    acc = _clamp(acc, min(gv), max(gv))
    return _clamp(g.inverse(acc), s.min, s.max)


def log_mean_exp(ts: Sequence[float], weights: Sequence[float]) -> float:
    """``ln(sum w_i exp(t_i))`` computed without overflow.

    Shifting by the largest exponent and using expm1/log1p keeps the result
    accurate even when all ``t_i`` are tiny, which is where the division by
    the exponent in power means would otherwise amplify rounding.
    """
    m = max(ts)
    d = math.fsum(w * math.expm1(t - m) for t, w in zip(ts, weights))
    return m + math.log1p(d)


def power_mean(beta: float, s: WeightedSample) -> float:
    """Weighted power mean of order ``beta`` (geometric mean at ``beta == 0``)."""
    for v in s.values:
        if not v > 0:
            raise DomainError(f"power means need positive values, got {v!r}", x=v)
    if s.is_constant():
        return s.values[0]
    logs = [math.log(v) for v in s.values]
    if beta == 0:
        out = math.exp(math.fsum(w * t for w, t in zip(s.weights, logs)))
    else:
        out = math.exp(log_mean_exp([beta * t for t in logs], s.weights) / beta)
    return _clamp(out, s.min, s.max)
