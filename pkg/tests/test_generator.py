import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from qamean import (
    POSITIVE,
    REAL,
    Direction,
    DomainError,
    Generator,
    InputError,
    Interval,
    RangeError,
    affine,
    compose,
    exp,
    identity,
    is_affine_equivalent,
    ln,
    negate,
    periodic,
    power,
)

SINE = periodic(1 / (4 * math.pi))

GENERATORS = [
    identity(),
    affine(3.0, 5.0),
    affine(-0.5, 2.0),
    ln(),
    exp(),
    power(2.0),
    power(-1.5),
    negate(),
    SINE,
    compose(ln(), affine(1.0, 1.0)),
    compose(negate(), ln()),
    compose(power(3.0), affine(1.0, -2.0)),
    compose(exp(), affine(0.5, 0.0), negate()),
    compose(power(0.5), negate(), affine(1.0, -2.0)),
    compose(ln(), SINE),
    compose(affine(2.0, 1.0), SINE, ln()),
]


@pytest.mark.parametrize(
    "g, x, expected",
    [(power(2.0), 7.0, 49.0), (ln(), 1.0, 0.0), (affine(3.0, 5.0), 2.0, 11.0)],
)
def test_eval_examples(g, x, expected):
    assert g(x) == expected


@pytest.mark.parametrize(
    "g, y, expected",
    [(power(2.0), 49.0, 7.0), (exp(), 1.0, 0.0), (compose(ln(), affine(1.0, 1.0)), 0.0, 0.0)],
)
def test_inverse_examples(g, y, expected):
    assert g.inverse(y) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "g, direction",
    [
        (identity(), Direction.INCREASING),
        (negate(), Direction.DECREASING),
        (compose(negate(), ln()), Direction.DECREASING),
        (power(-2.0), Direction.DECREASING),
        (compose(power(-2.0), negate()), Direction.INCREASING),
    ],
)
def test_monotonicity_examples(g, direction):
    assert g.direction is direction


def test_domains_propagate_through_composition():
    assert compose(ln(), affine(1.0, 1.0)).domain == Interval(-1.0, math.inf)
    assert compose(power(2.0), affine(1.0, -2.0)).domain == Interval(2.0, math.inf)
    assert compose(ln(), negate()).domain == Interval(-math.inf, 0.0)
    assert compose(ln(), ln()).domain == Interval(1.0, math.inf)
    assert compose(ln(), ln()).range == REAL
    assert power(-1.0).range == POSITIVE
    assert exp().range == POSITIVE


def test_restriction_narrows_domain_and_range():
    g = identity(Interval(0.0, 1.0))
    assert g.domain == Interval(0.0, 1.0)
    assert g.range == Interval(0.0, 1.0)
    assert ln().restrict(Interval(1.0, 4.0)).range == Interval(0.0, math.log(4.0))


def test_open_endpoints_are_domain_errors():
    with pytest.raises(DomainError) as info:
        ln()(0.0)
    assert info.value.x == 0.0
    assert info.value.domain == POSITIVE
    with pytest.raises(DomainError):
        power(2.0)(-1.0)
    with pytest.raises(DomainError):
        identity(Interval(0.0, 1.0))(1.0)


def test_inverse_outside_range_is_range_error():
    with pytest.raises(RangeError):
        exp().inverse(0.0)
    with pytest.raises(RangeError):
        power(2.0).inverse(-1.0)


@pytest.mark.parametrize(
    "data",
    [
        {"op": "affine", "c1": 0.0, "c0": 1.0},
        {"op": "power", "beta": 0.0},
        {"op": "sqrt"},
        {"op": "compose", "outer": {"op": "ln"}},
        {"op": "periodic", "amplitude": 0.5},
        '{"op": ',
    ],
)
def test_parse_rejects_bad_trees(data):
    with pytest.raises(InputError):
        Generator.from_json(data)


@pytest.mark.parametrize("g", GENERATORS + [identity(Interval(0, 1)), ln().restrict(Interval(2, 3))])
def test_json_round_trip(g):
    assert Generator.from_json(g.dumps()) == g
    assert Generator.from_json(g.to_json()) == g


def test_json_wire_format():
    g = compose(power(2.0), affine(3.0, 5.0))
    assert g.to_json() == {
        "op": "compose",
        "outer": {"op": "power", "beta": 2.0},
        "inner": {"op": "affine", "c1": 3.0, "c0": 5.0},
    }
    assert identity(POSITIVE).to_json() == {"op": "identity", "domain": [0.0, "inf"]}
    assert Generator.from_json({"op": "identity", "domain": [0, None]}) == identity(POSITIVE)


@pytest.mark.parametrize("g", GENERATORS)
def test_round_trip_on_random_points(g):
    rng = random.Random(7)
    w = g.domain.window()
    worst = 0.0
    for _ in range(1000):
        x = w.lo + (w.hi - w.lo) * rng.uniform(0.001, 0.999)
        worst = max(worst, abs(g.inverse(g(x)) - x) / max(1.0, abs(x)))
    assert worst <= 1e-10


@pytest.mark.parametrize("g", GENERATORS)
def test_direction_matches_evaluation(g):
    rng = random.Random(11)
    w = g.domain.window()
    for _ in range(200):
        x, y = sorted(w.lo + (w.hi - w.lo) * rng.uniform(0.001, 0.999) for _ in range(2))
        if x == y:
            continue
        assert math.copysign(1, g(y) - g(x)) == int(g.direction)


def test_periodic_rejects_non_monotone_amplitude():
    with pytest.raises(InputError):
        periodic(1 / (2 * math.pi))
    assert periodic(0.99 / (2 * math.pi)).direction is Direction.INCREASING


def test_periodic_inverse_uses_bisection_near_endpoint():
    g = SINE.restrict(Interval(0.0, 1.0))
    for x in (1e-9, 0.25, 0.999999):
        assert g.inverse(g(x)) == pytest.approx(x, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize(
    "g1, g2, witness",
    [
        (identity(), affine(3.0, 5.0), (3.0, 5.0)),
        (ln(), compose(affine(2.0, 1.0), ln()), (2.0, 1.0)),
    ],
)
def test_affine_equivalence_examples(g1, g2, witness):
    fit = is_affine_equivalent(g1, g2, 7, 1e-9)
    assert fit
    assert (fit.a, fit.b) == pytest.approx(witness, rel=1e-12)


def test_cubic_is_not_affine():
    assert not is_affine_equivalent(identity(), power(3.0), 7, 1e-9)


def test_affine_equivalence_needs_overlap():
    with pytest.raises(DomainError):
        is_affine_equivalent(identity(Interval(0, 1)), identity(Interval(2, 3)))
    with pytest.raises(InputError):
        is_affine_equivalent(identity(), identity(), probe_count=2)


@settings(max_examples=60, deadline=None)
@given(
    index=st.integers(0, len(GENERATORS) - 1),
    log_a=st.floats(-3, 3),
    sign=st.sampled_from([-1.0, 1.0]),
    b=st.floats(-100, 100),
)
def test_affine_equivalence_accepts_post_compositions(index, log_a, sign, b):
    g = GENERATORS[index]
    a = sign * 10.0**log_a
    h = compose(affine(a, b), g)
    assert is_affine_equivalent(g, g)
    fit = is_affine_equivalent(g, h)
    assert fit
    assert fit.a == pytest.approx(a, rel=1e-8)
    # symmetric
    assert is_affine_equivalent(h, g)
