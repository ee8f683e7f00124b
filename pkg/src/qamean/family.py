"""One-parameter families of generators invariant under a neutral map.

Given ``f`` and a neutral map ``eta = (a, b)`` that is not an involution,
the means invariant under ``eta`` and all of its f-roots are exactly:

* scaling case (``a != 1``): with ``h = f + b/(a-1)`` and ``s = h`` or
  ``s = -h`` (whichever is positive on the branch), the generators
  ``s^beta`` for ``beta != 0`` and ``ln s`` at ``beta == 0``;
* translation case (``a == 1``): ``exp(beta*f)`` for ``beta != 0`` and ``f``
  itself at ``beta == 0``.

Either way ``beta -> mean`` is a bijection of the real line onto
``(min v, max v)``; see :mod:`qamean.solver` for the inverse map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, ExcludedInvolutionError, InputError, NoRootError
from .generator import Direction, Generator, affine, compose, exp, ln, negate, power
from .interval import Interval
from .means import WeightedSample, log_mean_exp, power_mean
from .neutral import NeutralMap, from_coeffs, rebase, root_sequence

BETA_LIMIT = 1e6


class Case(str, Enum):
    SCALING = "scaling"
    TRANSLATION = "translation"


class Branch(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class Extreme(str, Enum):
    """Stand-in for a mean at |beta| > BETA_LIMIT, where only the limit is meaningful."""

    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class ScaleFamily:
    case: Case
    base: Generator
    branch: Branch | None
    dom: Interval
    gen: Generator
    a: float
    b: float

    @property
    def inner(self) -> Generator:
        """The generator the family is built on, restricted to the branch.

        For the scaling case this is the positive function ``s`` with members
        ``s^beta``; for the translation case it is ``f``.
        """
        g = self.base.restrict(self.dom)
        if self.branch is Branch.NEGATIVE:
            g = compose(negate(), g)
        return g

    @property
    def direction(self) -> Direction:
        """Direction of ``beta -> mean`` on non-constant samples."""
        return self.inner.direction

    def generator_at(self, beta: float) -> Generator:
        return generator_at(self, beta)

    def mean_at(self, beta: float, s: WeightedSample):
        return mean_at(self, beta, s)

    def to_json(self) -> dict:
        return {
            "case": self.case.value,
            "generator": self.gen.to_json(),
            "a": self.a,
            "b": self.b,
            "branch": None if self.branch is None else self.branch.value,
        }

    @classmethod
    def from_json(cls, data: dict) -> ScaleFamily:
        try:
            g = Generator.from_json(data["generator"])
            fams = build(g, from_coeffs(g, data["a"], data["b"]))
        except KeyError as exc:
            raise InputError(f"family is missing {exc}") from None
        return select_branch(fams, data.get("branch"))

    def __str__(self):
        if self.case is Case.TRANSLATION:
            return f"translation family exp(beta*f) | f, f(x) = {self.base} on {self.dom}"
        return f"scaling family s^beta | ln s, s(x) = {self.inner} on {self.dom}"


def build(g: Generator, n: NeutralMap) -> tuple:
    """All scale families invariant under ``n`` and its f-roots.

    Returns one family in the translation case and one per nonempty sign
    region of the shifted generator in the scaling case.
    """
    if n.gen != g:
        n = rebase(n, g)
    a, b = n.a, n.b
    if (a, b) == (1.0, 0.0):
        raise InputError("(a, b) = (1, 0) is the identity map")
    if a == -1.0:
        raise ExcludedInvolutionError(
            "a = -1 makes the neutral map an involution (eta o eta = id); such maps are excluded "
            "because every odd generator is invariant under them"
        )
    if a == 1.0:
        return (ScaleFamily(Case.TRANSLATION, g, None, g.domain, g, a, b),)
    if a < 0:
        raise NoRootError(
            f"a = {a} < 0: eta has no increasing square root, so the ladder of f-roots cannot be formed"
        )
    shift = b / (a - 1.0)
    base = g if shift == 0.0 else compose(affine(1.0, shift), g)
    fams = []
    for branch, side in ((Branch.POSITIVE, Interval(0.0, math.inf)), (Branch.NEGATIVE, Interval(-math.inf, 0.0))):
        if not base.range.overlaps(side):
            continue
        try:
            dom = base.preimage(side)
        except DomainError:
            continue
        fams.append(ScaleFamily(Case.SCALING, base, branch, dom, g, a, b))
    return tuple(fams)


def select_branch(fams: tuple, branch=None) -> ScaleFamily:
    """Pick one family from ``build`` output; ``branch`` may be None if unambiguous."""
    if branch is None:
        if len(fams) != 1:
            raise InputError("the shifted generator changes sign; choose branch 'positive' or 'negative'")
        return fams[0]
    branch = Branch(branch)
    for fam in fams:
        if fam.branch is branch:
            return fam
    raise InputError(f"no {branch.value} branch for this generator and neutral map")


def generator_at(fam: ScaleFamily, beta: float) -> Generator:
    inner = fam.inner
    if fam.case is Case.TRANSLATION:
        return inner if beta == 0 else compose(exp(), affine(beta, 0.0), inner)
    return compose(ln() if beta == 0 else power(beta), inner)


def _check_sample(fam: ScaleFamily, s: WeightedSample):
    for v in s.values:
        if v not in fam.dom:
            raise DomainError(f"sample value {v!r} is outside the family domain {fam.dom}", x=v, domain=fam.dom)


def mean_at(fam: ScaleFamily, beta: float, s: WeightedSample):
    """Mean generated by the family member at ``beta``, computed in the log domain.

    For ``|beta| > BETA_LIMIT`` an :class:`Extreme` flag is returned instead
    of a number: the mean is then indistinguishable from the sample extreme.
    """
    _check_sample(fam, s)
    if s.is_constant():
        return s.values[0]
    if abs(beta) > BETA_LIMIT:
        up = (beta > 0) == (fam.direction is Direction.INCREASING)
        return Extreme.MAX if up else Extreme.MIN
    inner = fam.inner
    fv = s.map(inner)
    if fam.case is Case.SCALING:
        y = power_mean(beta, fv)
    elif beta == 0:
        y = math.fsum(w * t for w, t in zip(fv.weights, fv.values))
    else:
        y = log_mean_exp([beta * t for t in fv.values], fv.weights) / beta
    y = min(max(y, fv.min), fv.max)
    x = inner.inverse(y)
    return min(max(x, s.min), s.max)


def common_root_domain(n: NeutralMap, depth: int) -> Interval:
    """Intersection of the maximal domains of ``n`` and its first ``depth`` cube roots.

    Raises DomainError when the ladder has no common domain left.
    """
    dom = n.dom
    for root in root_sequence(n, depth):
        try:
            dom = dom.intersect(root.dom)
        except DomainError:
            raise DomainError(f"roots of {n} up to depth {depth} have no common domain", domain=dom) from None
    return dom
