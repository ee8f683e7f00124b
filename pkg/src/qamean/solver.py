"""Inverse of the scale map ``beta -> mean_at(beta)``."""

from __future__ import annotations

from .errors import ConvergenceError, InputError, NearExtremeError, TargetOutOfRangeError
from .family import BETA_LIMIT, Extreme, ScaleFamily, mean_at
from .means import WeightedSample

MAX_ITER = 500
BETA_XTOL = 1e-12


def solve(fam: ScaleFamily, s: WeightedSample, target: float, tol: float = 1e-9) -> float:
    """Find ``beta`` with ``mean_at(fam, beta, s) == target``.

    The bracket starts at [-1, 1] and doubles until it straddles the target,
    then plain bisection runs until the mean residual is within
    ``tol * max(1, |target|)`` or the bracket is narrower than
    ``1e-12 * max(1, |beta|)``.
    """
    if s.is_constant():
        raise InputError("the scale map is constant on a constant sample; nothing to solve")
    lo_v, hi_v = s.min, s.max
    if not lo_v < target < hi_v:
        raise TargetOutOfRangeError(f"target {target!r} is not strictly inside ({lo_v!r}, {hi_v!r})")

    def phi(beta):
        # increasing in beta whichever way the family runs
        return sign * (mean_at(fam, beta, s) - target)

    sign = 1.0 if mean_at(fam, 1.0, s) > mean_at(fam, -1.0, s) else -1.0
    lo, hi = -1.0, 1.0
    while phi(lo) > 0:
        if lo <= -BETA_LIMIT:
            raise NearExtremeError(_near_msg(target, _extreme(sign, -1)), _extreme(sign, -1))
        hi, lo = lo, max(2.0 * lo, -BETA_LIMIT)
    while phi(hi) < 0:
        if hi >= BETA_LIMIT:
            raise NearExtremeError(_near_msg(target, _extreme(sign, 1)), _extreme(sign, 1))
        lo, hi = hi, min(2.0 * hi, BETA_LIMIT)

    atol = tol * max(1.0, abs(target))
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        r = phi(mid)
        if abs(r) <= atol or hi - lo <= BETA_XTOL * max(1.0, abs(mid)):
            return mid
        if r < 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(f"bisection on beta did not converge in {MAX_ITER} iterations")


def _extreme(sign: float, end: int) -> Extreme:
    return Extreme.MAX if sign * end > 0 else Extreme.MIN


def _near_msg(target, extreme: Extreme) -> str:
    return (
        f"target {target!r} is so close to the sample {extreme.value} that |beta| would exceed "
        f"{BETA_LIMIT:g}"
    )


def sweep(fam: ScaleFamily, s: WeightedSample, betas) -> list:
    """``(beta, mean)`` pairs in input order."""
    return [(float(b), mean_at(fam, b, s)) for b in betas]
