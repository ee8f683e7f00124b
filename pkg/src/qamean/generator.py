"""Generators of quasi-arithmetic means as small expression trees.

A generator is a continuous, strictly monotone function on an open
interval.  Instead of arbitrary callables we use a closed set of
primitives (identity, affine, ln, exp, power, negate, periodic) glued by
composition.  That keeps domains, ranges and monotonicity exact and lets
every generator round-trip through JSON.

    >>> g = compose(ln(), affine(1.0, 1.0))
    >>> g.domain
    Interval(lo=-1.0, hi=inf)
    >>> g.inverse(0.0)
    0.0
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, replace
from enum import IntEnum
from functools import cached_property
from typing import NamedTuple

from .errors import ConvergenceError, DomainError, InputError, RangeError
from .interval import INF, POSITIVE, REAL, Interval

TWO_PI = 2.0 * math.pi

INVERSE_RTOL = 1e-12
MAX_BISECT_ITER = 200

_PARAM_NAMES = {
    "identity": (),
    "affine": ("c1", "c0"),
    "ln": (),
    "exp": (),
    "power": ("beta",),
    "negate": (),
    "periodic": ("amplitude", "period"),
    "compose": (),
}


class Direction(IntEnum):
    INCREASING = 1
    DECREASING = -1

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class Generator:
    """One node of a generator expression.

    ``domain`` is optional on construction and acts as a restriction: it is
    intersected with the natural domain of the node, and the stored value is
    always the effective domain.
    """

    op: str
    params: tuple = ()
    outer: Generator | None = None
    inner: Generator | None = None
    domain: Interval | None = None

    def __post_init__(self):
        names = _PARAM_NAMES.get(self.op)
        if names is None:
            raise InputError(f"unknown generator op {self.op!r}")
        params = tuple(float(p) for p in self.params)
        if len(params) != len(names):
            raise InputError(f"{self.op} takes parameters {names}, got {params}")
        if not all(math.isfinite(p) for p in params):
            raise InputError(f"{self.op} parameters must be finite, got {params}")
        object.__setattr__(self, "params", params)
        if self.op == "affine" and params[0] == 0.0:
            raise InputError("affine generator needs c1 != 0")
        if self.op == "power" and params[0] == 0.0:
            raise InputError("power generator needs beta != 0 (use ln for the zero member)")
        if self.op == "periodic":
            amplitude, period = params
            if period <= 0.0:
                raise InputError("periodic generator needs period > 0")
            if TWO_PI * abs(amplitude) >= period:
                raise InputError("periodic generator is not strictly monotone: need 2*pi*|amplitude| < period")
        if self.op == "compose":
            if not isinstance(self.outer, Generator) or not isinstance(self.inner, Generator):
                raise InputError("compose needs outer and inner generators")
        elif self.outer is not None or self.inner is not None:
            raise InputError(f"{self.op} takes no sub-expressions")

        natural = self._natural_domain()
        dom = natural if self.domain is None else natural.intersect(self.domain)
        object.__setattr__(self, "domain", dom)

    def _natural_domain(self) -> Interval:
        if self.op in ("ln", "power"):
            return POSITIVE
        if self.op == "compose":
            return self.inner.preimage(self.outer.domain)
        return REAL

    # -- evaluation -------------------------------------------------------

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def eval(self, x: float) -> float:
        if x not in self.domain:
            raise DomainError(f"{x!r} is outside the domain {self.domain} of {self}", x=x, domain=self.domain)
        try:
            return self._raw(x)
        except ValueError:
            raise DomainError(f"{self} is undefined at {x!r}", x=x, domain=self.domain) from None

    def _raw(self, x: float) -> float:
        op = self.op
        if op == "identity":
            return x
        if op == "affine":
            return self.params[0] * x + self.params[1]
        if op == "ln":
            return math.log(x)
        if op == "exp":
            return math.exp(x)
        if op == "power":
            return x ** self.params[0]
        if op == "negate":
            return -x
        if op == "periodic":
            amplitude, period = self.params
            return x + amplitude * math.sin(TWO_PI * x / period)
        return self.outer._raw(self.inner._raw(x))

    def _edge(self, x: float) -> float:
        """Limit of the function at an (extended) endpoint of its domain."""
        op = self.op
        if op == "ln":
            return -INF if x == 0.0 else math.log(x)
        if op == "exp":
            if x > 709.0:
                return INF
            return math.exp(x)
        if op == "power":
            beta = self.params[0]
            if x == 0.0:
                return 0.0 if beta > 0 else INF
            if math.isinf(x):
                return INF if beta > 0 else 0.0
            try:
                return x ** beta
            except OverflowError:
                return INF
        if op == "periodic" and math.isinf(x):
            return x
        if op == "compose":
            return self.outer._edge(self.inner._edge(x))
        return self._raw(x)

    # -- inversion --------------------------------------------------------

    def inverse(self, y: float) -> float:
        """The unique ``x`` in the domain with ``self(x) == y``."""
        if y not in self.range:
            raise RangeError(f"{y!r} is outside the range {self.range} of {self}", x=y, domain=self.range)
        try:
            x = self._inv(y)
        except OverflowError:
            raise RangeError(f"preimage of {y!r} under {self} is not representable", x=y, domain=self.range) from None
        # rounding can push a preimage onto an open endpoint
        lo, hi = self.domain
        if x <= lo:
            x = math.nextafter(lo, INF)
        elif x >= hi:
            x = math.nextafter(hi, -INF)
        return x

    def _inv(self, y: float) -> float:
        op = self.op
        if op == "identity":
            return y
        if op == "affine":
            return (y - self.params[1]) / self.params[0]
        if op == "ln":
            return math.exp(y)
        if op == "exp":
            return math.log(y)
        if op == "power":
            return y ** (1.0 / self.params[0])
        if op == "negate":
            return -y
        if op == "compose":
            return self.inner._inv(self.outer._inv(y))
        return self._bisect_inverse(y)

    def _bisect_inverse(self, y: float) -> float:
        # phi is increasing whatever the direction of self
        sign = int(self.direction)

        def phi(x):
            return sign * (self._raw(x) - y)

        lo_d, hi_d = self.domain
        x0 = self.domain.interior_point()
        f0 = phi(x0)
        if f0 == 0.0:
            return x0
        step = max(1.0, abs(x0))
        a = b = x0
        for _ in range(MAX_BISECT_ITER):
            if f0 < 0:
                a = b
                b = b + step if math.isinf(hi_d) else 0.5 * (b + hi_d)
                if phi(b) >= 0:
                    break
            else:
                b = a
                a = a - step if math.isinf(lo_d) else 0.5 * (a + lo_d)
                if phi(a) <= 0:
                    break
            step *= 2.0
        else:
            raise ConvergenceError(f"could not bracket the preimage of {y!r} under {self}")

        for _ in range(MAX_BISECT_ITER):
            mid = 0.5 * (a + b)
            if b - a <= INVERSE_RTOL * 1e-2 * max(1.0, abs(mid)) or mid in (a, b):
                return mid
            if phi(mid) < 0:
                a = mid
            else:
                b = mid
        raise ConvergenceError(f"bisection for the preimage of {y!r} under {self} did not converge")

    # -- structure --------------------------------------------------------

    @cached_property
    def direction(self) -> Direction:
        op = self.op
        if op == "affine":
            return Direction.INCREASING if self.params[0] > 0 else Direction.DECREASING
        if op == "power":
            return Direction.INCREASING if self.params[0] > 0 else Direction.DECREASING
        if op == "negate":
            return Direction.DECREASING
        if op == "compose":
            return Direction(int(self.outer.direction) * int(self.inner.direction))
        return Direction.INCREASING

    @property
    def increasing(self) -> bool:
        return self.direction is Direction.INCREASING

    @cached_property
    def range(self) -> Interval:
        return self.image(self.domain)

    def image(self, interval: Interval) -> Interval:
        """Image of a sub-interval of the domain."""
        sub = self.domain.intersect(interval)
        ends = sorted((self._edge(sub.lo), self._edge(sub.hi)))
        return Interval(*ends)

    def preimage(self, interval: Interval) -> Interval:
        """``{x in domain : self(x) in interval}``; DomainError if empty."""
        rng = self.range
        target = rng.intersect(interval)
        lo_d, hi_d = self.domain
        if self.increasing:
            lo = lo_d if target.lo == rng.lo else self._inv(target.lo)
            hi = hi_d if target.hi == rng.hi else self._inv(target.hi)
        else:
            lo = lo_d if target.hi == rng.hi else self._inv(target.hi)
            hi = hi_d if target.lo == rng.lo else self._inv(target.lo)
        return Interval(max(lo, lo_d), min(hi, hi_d))

    def restrict(self, interval: Interval) -> Generator:
        return replace(self, domain=self.domain.intersect(interval))

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        out = {"op": self.op}
        out.update(zip(_PARAM_NAMES[self.op], self.params))
        if self.op == "compose":
            out["outer"] = self.outer.to_json()
            out["inner"] = self.inner.to_json()
        if self.domain != self._natural_domain():
            out["domain"] = self.domain.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> Generator:
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise InputError(f"generator is not valid JSON: {exc}") from None
        if not isinstance(data, dict) or "op" not in data:
            raise InputError(f"generator must be an object with an 'op' key, got {data!r}")
        op = data["op"]
        names = _PARAM_NAMES.get(op)
        if names is None:
            raise InputError(f"unknown generator op {op!r}")
        defaults = {"c0": 0.0, "period": 1.0}
        try:
            params = tuple(data[n] if n in data else defaults[n] for n in names)
        except KeyError as exc:
            raise InputError(f"{op} is missing parameter {exc}") from None
        outer = inner = None
        if op == "compose":
            if "outer" not in data or "inner" not in data:
                raise InputError("compose needs 'outer' and 'inner'")
            outer, inner = cls.from_json(data["outer"]), cls.from_json(data["inner"])
        domain = Interval.from_json(data["domain"]) if "domain" in data else None
        return cls(op, params, outer, inner, domain)

    def __str__(self):
        return self.formula("x")

    def formula(self, var: str) -> str:
        op, p = self.op, self.params
        if op == "identity":
            return var
        if op == "affine":
            return f"{p[0]:g}*{var}{p[1]:+g}"
        if op in ("ln", "exp"):
            return f"{op}({var})"
        if op == "power":
            return f"({var})^{p[0]:g}"
        if op == "negate":
            return f"-({var})"
        if op == "periodic":
            return f"{var}{p[0]:+g}*sin(2pi*{var}/{p[1]:g})"
        return self.outer.formula(self.inner.formula(var))


def identity(domain: Interval | None = None) -> Generator:
    return Generator("identity", domain=domain)


def affine(c1: float, c0: float = 0.0) -> Generator:
    return Generator("affine", (c1, c0))


def ln() -> Generator:
    return Generator("ln")


def exp() -> Generator:
    return Generator("exp")


def power(beta: float) -> Generator:
    return Generator("power", (beta,))


def negate() -> Generator:
    return Generator("negate")


def periodic(amplitude: float, period: float = 1.0) -> Generator:
    """``x + amplitude * sin(2 pi x / period)``; increasing when 2 pi |amplitude| < period."""
    return Generator("periodic", (amplitude, period))


def compose(outer: Generator, inner: Generator, *more: Generator) -> Generator:
    """``outer(inner(...))``; extra arguments nest further to the right."""
    if more:
        inner = compose(inner, *more)
    return Generator("compose", outer=outer, inner=inner)


class AffineFit(NamedTuple):
    """Result of an affine-equivalence test ``g2 == a*g1 + b``."""

    equivalent: bool
    a: float
    b: float
    residual: float

    def __bool__(self):
        return self.equivalent


def is_affine_equivalent(g1: Generator, g2: Generator, probe_count: int = 7, tol: float = 1e-9) -> AffineFit:
    """Decide whether ``g2 = a*g1 + b`` on the common domain.

    Equal quasi-arithmetic means have affinely related generators, so this is
    the numerical test for "same mean".  (a, b) is fitted on the two outermost
    probes of the common domain and validated on the remaining ones.
    """
    if probe_count < 3:
        raise InputError("probe_count must be at least 3")
    common = g1.domain.intersect(g2.domain)
    probes = common.grid(probe_count)
    y1 = [g1(x) for x in probes]
    y2 = [g2(x) for x in probes]
    if y1[-1] == y1[0]:
        raise DomainError(f"common domain {common} is too narrow to probe", domain=common)
    a = (y2[-1] - y2[0]) / (y1[-1] - y1[0])
    b = y2[0] - a * y1[0]
    # residuals are measured against the spread of g2 over the probes, plus
    # an allowance for rounding in large-magnitude values
    spread = max(y2) - min(y2)
    slack = 64 * sys.float_info.epsilon * max(max(abs(v) for v in y2), abs(b))
    worst = 0.0
    for u, v in zip(y1[1:-1], y2[1:-1]):
        worst = max(worst, max(abs(v - (a * u + b)) - slack, 0.0) / spread)
    ok = a != 0.0 and math.isfinite(a) and worst <= tol
    return AffineFit(ok, a, b, worst)
