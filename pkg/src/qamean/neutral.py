"""Neutral maps ``eta(x) = f^-1(a*f(x) + b)`` and their f-roots.

A map is neutral for the mean generated by ``f`` when applying it to every
sample value commutes with taking the mean.  Every such map has the form
above, so a :class:`NeutralMap` is just the pair ``(a, b)`` relative to a
generator, together with its maximal domain.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, InputError, NoRootError
from .generator import Generator, affine, compose as compose_gen, is_affine_equivalent
from .interval import Interval
from .means import WeightedSample, mean

MAX_ROOT_DEPTH = 12


@dataclass(frozen=True)
class NeutralMap:
    gen: Generator
    a: float
    b: float
    dom: Interval

    @property
    def increasing(self) -> bool:
        return self.a > 0

    @property
    def is_involution(self) -> bool:
        return self.a == -1.0

    @property
    def coeffs(self) -> tuple:
        return (self.a, self.b)

    def __call__(self, x: float) -> float:
        return apply(self, x)

    def fixed_point(self) -> float | None:
        """The point with ``eta(x) == x``, if ``a != 1`` and it lies in the domain."""
        if self.a == 1.0:
            return None
        y = self.b / (1.0 - self.a)
        if y not in self.gen.range:
            return None
        x = self.gen.inverse(y)
        return x if x in self.dom else None

    def inverse_map(self) -> NeutralMap:
        return from_coeffs(self.gen, 1.0 / self.a, -self.b / self.a)

    def __str__(self):
        return f"eta(x) = f^-1({self.a:.12g}*f(x){self.b:+.12g}) with f(x) = {self.gen}, on {self.dom}"


def maximal_domain(g: Generator, a: float, b: float) -> Interval:
    """``{x in domain(g) : a*g(x) + b in range(g)}``."""
    shifted = compose_gen(affine(a, b), g)
    return shifted.preimage(g.range)


def from_coeffs(g: Generator, a: float, b: float) -> NeutralMap:
    a, b = float(a), float(b)
    if a == 0.0 or not math.isfinite(a) or not math.isfinite(b):
        raise InputError(f"neutral map needs finite a != 0 and finite b, got a={a}, b={b}")
    if (a, b) == (1.0, 0.0):
        raise InputError("(a, b) = (1, 0) is the identity, not a neutral map")
    try:
        dom = maximal_domain(g, a, b)
    except DomainError:
        raise DomainError(f"x -> f^-1({a}*f(x){b:+}) is defined nowhere for f = {g}", domain=g.domain) from None
    return NeutralMap(g, a, b, dom)


def apply(n: NeutralMap, x: float) -> float:
    if x not in n.dom:
        raise DomainError(f"{x!r} is outside the domain {n.dom} of the neutral map", x=x, domain=n.dom)
    g = n.gen
    y = n.a * g(x) + n.b
    # the maximal domain guarantees y is in range up to rounding at the ends
    lo, hi = g.range
    if not lo < y < hi:
        y = math.nextafter(lo, hi) if y <= lo else math.nextafter(hi, lo)
    return g.inverse(y)


def rebase(n: NeutralMap, g: Generator) -> NeutralMap:
    """Express ``n`` relative to ``g``, which must be affinely equivalent to ``n.gen``."""
    if g == n.gen:
        return n
    fit = is_affine_equivalent(g, n.gen)
    if not fit:
        raise InputError(f"generators {g} and {n.gen} do not generate the same mean")
    # n.gen = alpha*g + beta  =>  g(eta) = a*g + (b + (a - 1)*beta) / alpha
    alpha, beta = fit.a, fit.b
    return from_coeffs(g, n.a, (n.b + (n.a - 1.0) * beta) / alpha)


def compose(n1: NeutralMap, n2: NeutralMap) -> NeutralMap:
    """Coefficients of ``n1 o n2``, on the maximal domain of the result."""
    n2 = rebase(n2, n1.gen)
    a, b = n1.a * n2.a, n1.a * n2.b + n1.b
    if (a, b) == (1.0, 0.0):
        raise InputError("the composition is the identity map")
    return from_coeffs(n1.gen, a, b)


def iterate(n: NeutralMap, k: int) -> NeutralMap:
    """``n`` composed with itself ``k`` times (coefficient level)."""
    if k < 1:
        raise InputError("iteration count must be positive")
    a, b = 1.0, 0.0
    for _ in range(k):
        a, b = n.a * a, n.a * b + n.b
    return from_coeffs(n.gen, a, b)


def root_coeffs(a: float, b: float, k: int) -> tuple:
    """Coefficients ``(p, q)`` of the k-th f-root of ``(a, b)``.

    ``p`` is the real k-th root of ``a`` and ``q = b / (1 + p + ... + p^(k-1))``,
    which is ``b (p - 1) / (a - 1)`` for ``a != 1`` and ``b / k`` for ``a == 1``.
    """
    if k < 1 or int(k) != k:
        raise InputError(f"root order must be a positive integer, got {k!r}")
    k = int(k)
    if a < 0 and k % 2 == 0:
        raise NoRootError(f"a decreasing map (a={a}) has no increasing root of even order {k}")
    if a == 0:
        raise InputError("a must be nonzero")
    if a == 1.0:
        return 1.0, b / k
    p = math.copysign(abs(a) ** (1.0 / k), a)
    q = b / math.fsum(p ** j for j in range(k))
    return p, q


def kth_root(n: NeutralMap, k: int) -> NeutralMap:
    """The unique neutral map of the same monotonicity whose k-th iterate is ``n``."""
    p, q = root_coeffs(n.a, n.b, k)
    return from_coeffs(n.gen, p, q)


def root_sequence(n: NeutralMap, depth: int) -> list:
    """Cube roots taken ``depth`` times: ``eta_i = kth_root(eta_{i-1}, 3)``."""
    if not 1 <= depth <= MAX_ROOT_DEPTH:
        raise InputError(f"depth must be in 1..{MAX_ROOT_DEPTH}, got {depth}")
    out = []
    cur = n
    for _ in range(depth):
        cur = kth_root(cur, 3)
        out.append(cur)
    return out


class NeutralityCheck(NamedTuple):
    passed: bool
    worst_residual: float
    worst_sample: WeightedSample | None
    trials: int

    def __bool__(self):
        return self.passed


def sampling_interval(n: NeutralMap, g: Generator) -> Interval:
    """Points ``x`` where both ``g(x)`` and ``g(eta(x))`` are defined."""
    common = n.dom.intersect(g.domain)
    f = n.gen
    target = g.domain.intersect(f.domain)
    # eta(x) in target  <=>  f(x) in (f(target) - b) / a
    lo, hi = f.image(target)
    ends = sorted(((lo - n.b) / n.a, (hi - n.b) / n.a))
    pulled = f.preimage(Interval(*ends))
    return common.intersect(pulled)


def random_sample(rng: random.Random, where: Interval, min_size: int = 2, max_size: int = 6) -> WeightedSample:
    """Non-constant sample with values drawn inside the bounded window of ``where``."""
    w = where.window()
    lo, hi = w.lo, w.hi
    size = rng.randint(min_size, max_size)
    while True:
        values = [lo + (hi - lo) * rng.uniform(0.01, 0.99) for _ in range(size)]
        weights = [rng.uniform(0.05, 1.0) for _ in range(size)]
        s = WeightedSample.normalized(values, weights)
        if not s.is_constant():
            return s


def is_neutral_for(n: NeutralMap, g: Generator, trials: int = 200, tol: float = 1e-9, seed: int = 0) -> NeutralityCheck:
    """Check ``M_g(eta(v), w) == eta(M_g(v, w))`` on random samples.

    Deterministic for a given seed.  Samples have 2..6 points drawn from the
    part of the domain where both sides are defined.
    """
    try:
        where = sampling_interval(n, g)
    except DomainError:
        raise DomainError(f"no common domain to test {n} against {g}", domain=n.dom) from None
    rng = random.Random(seed)
    worst, worst_sample = 0.0, None
    for _ in range(trials):
        s = random_sample(rng, where)
        lhs = mean(g, s.map(n))
        rhs = apply(n, mean(g, s))
        r = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
        if r > worst or worst_sample is None:
            worst, worst_sample = r, s
    return NeutralityCheck(worst <= tol, worst, worst_sample, trials)
