import math
import random

import pytest

from qamean import (
    POSITIVE,
    REAL,
    DomainError,
    InputError,
    Interval,
    NoRootError,
    WeightedSample,
    affine,
    apply,
    compose,
    from_coeffs,
    identity,
    is_neutral_for,
    kth_root,
    ln,
    mean,
    periodic,
    power,
    root_sequence,
)
from qamean import neutral


def coeff_close(n, a, b, rel=1e-12):
    assert n.a == pytest.approx(a, rel=rel, abs=1e-300)
    assert n.b == pytest.approx(b, rel=rel, abs=rel * max(1.0, abs(b)))


@pytest.mark.parametrize(
    "g, a, b, dom",
    [
        (identity(), 1.0, 1.0, REAL),
        (ln(), 1.0, math.log(2.0), POSITIVE),
        (identity(Interval(0, 1)), 2.0, 0.0, Interval(0.0, 0.5)),
        (identity(Interval(0, 1)), -1.0, 1.0, Interval(0.0, 1.0)),
        (compose(ln(), affine(1.0, 1.0)), 2.0, 0.0, Interval(-1.0, math.inf)),
    ],
)
def test_from_coeffs_maximal_domain(g, a, b, dom):
    n = from_coeffs(g, a, b)
    assert n.dom == dom


def test_from_coeffs_errors():
    with pytest.raises(InputError):
        from_coeffs(identity(), 0.0, 1.0)
    with pytest.raises(InputError):
        from_coeffs(identity(), 1.0, 0.0)
    with pytest.raises(DomainError):
        from_coeffs(identity(Interval(0, 1)), 1.0, 5.0)
    with pytest.raises(DomainError):
        # x takes positive values on (0, inf); -x never does
        from_coeffs(identity(POSITIVE), -1.0, 0.0)


@pytest.mark.parametrize(
    "g, a, b, x, expected",
    [
        (identity(), 1.0, 1.0, 3.5, 4.5),
        (ln(), 1.0, math.log(2.0), 3.0, 6.0),
        (identity(), 8.0, 7.0, 1.0, 15.0),
    ],
)
def test_apply_examples(g, a, b, x, expected):
    assert apply(from_coeffs(g, a, b), x) == pytest.approx(expected, rel=1e-15)


def test_apply_outside_domain():
    n = from_coeffs(identity(Interval(0, 1)), 2.0, 0.0)
    with pytest.raises(DomainError):
        apply(n, 0.75)


@pytest.mark.parametrize(
    "c1, c2, expected",
    [((2, 0), (2, 0), (4, 0)), ((1, 2), (1, 3), (1, 5)), ((2, 1), (3, 4), (6, 9))],
)
def test_compose_examples(c1, c2, expected):
    f = identity()
    n = neutral.compose(from_coeffs(f, *c1), from_coeffs(f, *c2))
    assert n.coeffs == expected


def test_compose_rebases_affine_equivalent_generators():
    f = ln()
    h = compose(affine(3.0, -2.0), ln())
    n1 = from_coeffs(f, 1.0, math.log(2.0))  # x -> 2x
    n2 = from_coeffs(h, 1.0, 3 * math.log(3.0))  # x -> 3x, relative to h
    n = neutral.compose(n1, n2)
    assert n.gen == f
    assert apply(n, 1.5) == pytest.approx(9.0, rel=1e-12)


def test_compose_rejects_unrelated_generators():
    with pytest.raises(InputError):
        neutral.compose(from_coeffs(identity(), 2.0, 0.0), from_coeffs(ln(), 2.0, 0.0))
    with pytest.raises(InputError):
        neutral.compose(from_coeffs(identity(), 2.0, 0.0), from_coeffs(identity(), 0.5, 0.0))


@pytest.mark.parametrize(
    "a, b, k, p, q",
    [(8.0, 7.0, 3, 2.0, 1.0), (1.0, 6.0, 3, 1.0, 2.0), (4.0, 0.0, 2, 2.0, 0.0), (-8.0, 3.0, 3, -2.0, 1.0)],
)
def test_kth_root_examples(a, b, k, p, q):
    root = kth_root(from_coeffs(identity(), a, b), k)
    coeff_close(root, p, q)


def test_cube_root_matches_closed_form():
    rng = random.Random(3)
    for _ in range(100):
        a, b = rng.uniform(0.01, 10.0), rng.uniform(-10.0, 10.0)
        root = kth_root(from_coeffs(identity(), a, b), 3)
        p = a ** (1 / 3)
        coeff_close(root, p, b / (a ** (2 / 3) + a ** (1 / 3) + 1))


def test_even_root_of_decreasing_map():
    with pytest.raises(NoRootError):
        kth_root(from_coeffs(identity(), -4.0, 1.0), 2)
    with pytest.raises(InputError):
        kth_root(from_coeffs(identity(), 4.0, 1.0), 0)


@pytest.mark.parametrize("k", [2, 3, 5])
@pytest.mark.parametrize("f", [identity(), ln(), compose(power(-1.0), affine(1.0, 3.0))])
def test_root_identity(f, k):
    rng = random.Random(100 + k)
    for _ in range(30):
        a = rng.uniform(0.01, 10.0)
        if a == 1.0:
            continue
        b = rng.uniform(-3.0, 3.0) if f.range.lo == -math.inf else 0.0
        n = from_coeffs(f, a, b)
        root = kth_root(n, k)
        again = neutral.iterate(root, k)
        coeff_close(again, a, b)
        worst = 0.0
        for x in n.dom.grid(100):
            y = x
            for _ in range(k):
                y = apply(root, y)
            worst = max(worst, abs(y - apply(n, x)) / max(1.0, abs(apply(n, x))))
        assert worst <= 1e-9


@pytest.mark.parametrize("a, k", [(3.0, 2), (0.2, 3), (-8.0, 3), (-0.5, 5)])
def test_root_preserves_monotonicity(a, k):
    n = from_coeffs(identity(), a, 1.0)
    assert kth_root(n, k).increasing == n.increasing


def test_root_sequence_examples():
    seq = root_sequence(from_coeffs(identity(), 2.0, 0.0), 2)
    coeff_close(seq[0], 2 ** (1 / 3), 0.0)
    coeff_close(seq[1], 2 ** (1 / 9), 0.0)
    seq = root_sequence(from_coeffs(identity(), 1.0, 1.0), 2)
    coeff_close(seq[0], 1.0, 1 / 3)
    coeff_close(seq[1], 1.0, 1 / 9)
    (only,) = root_sequence(from_coeffs(identity(), 8.0, 7.0), 1)
    coeff_close(only, 2.0, 1.0)
    with pytest.raises(InputError):
        root_sequence(from_coeffs(identity(), 2.0, 0.0), 13)


@pytest.mark.parametrize("a, b", [(2.0, 0.0), (0.3, 1.0), (1.0, -2.0), (5.0, 5.0)])
def test_root_sequence_converges_to_identity(a, b):
    seq = root_sequence(from_coeffs(identity(), a, b), 8)
    gaps = [abs(r.a - 1.0) for r in seq]
    assert all(x > y for x, y in zip(gaps, gaps[1:])) or all(g == 0 for g in gaps)
    grid = Interval(1.0, 10.0).grid(100)
    sups = [max(abs(apply(r, x) - x) for x in grid) for r in seq]
    assert all(x > y for x, y in zip(sups, sups[1:]))


def test_fixed_point_is_shared_by_roots():
    f = ln()
    n = from_coeffs(f, 2.0, -1.0)  # f(x*) = 1, x* = e
    x_star = n.fixed_point()
    assert x_star == pytest.approx(math.e, rel=1e-14)
    assert apply(n, x_star) == pytest.approx(x_star, rel=1e-10)
    for root in root_sequence(n, 5):
        assert root.fixed_point() == pytest.approx(x_star, rel=1e-10)
        assert apply(root, x_star) == pytest.approx(x_star, rel=1e-10)
    assert from_coeffs(f, 1.0, 1.0).fixed_point() is None


def test_inverse_map():
    n = from_coeffs(identity(), 2.0, 1.0)
    inv = n.inverse_map()
    assert apply(inv, apply(n, 3.0)) == pytest.approx(3.0)


def test_neutral_examples():
    assert is_neutral_for(from_coeffs(ln(), 1.0, math.log(2.0)), ln())
    assert is_neutral_for(from_coeffs(identity(), 1.0, 1.0), identity())


def test_shift_is_not_neutral_for_quadratic_mean():
    n = from_coeffs(identity(), 1.0, 1.0)
    # direct arithmetic: v = (1, 3) gives sqrt(5); v + 1 = (2, 4) gives sqrt(10)
    s = WeightedSample((1.0, 3.0), (0.5, 0.5))
    g = power(2.0)
    assert mean(g, s) == pytest.approx(math.sqrt(5.0), rel=1e-15)
    assert mean(g, s.map(n)) == pytest.approx(math.sqrt(10.0), rel=1e-15)
    assert math.sqrt(10.0) != pytest.approx(math.sqrt(5.0) + 1.0, rel=1e-3)
    check = is_neutral_for(n, g, trials=50, tol=1e-9)
    assert not check
    assert check.worst_residual > 1e-3


def test_neutrality_is_deterministic():
    n = from_coeffs(identity(), 1.0, 1.0)
    g = periodic(0.1)
    assert is_neutral_for(n, g, 30, 1e-9, seed=5) == is_neutral_for(n, g, 30, 1e-9, seed=5)


def test_neutrality_needs_common_domain():
    n = from_coeffs(identity(Interval(-5.0, -1.0)), 1.0, 1.0)
    with pytest.raises(DomainError):
        is_neutral_for(n, ln())


def test_sampling_interval_keeps_images_in_domain():
    n = from_coeffs(identity(), 2.0, 0.0)
    where = neutral.sampling_interval(n, identity(Interval(0.0, 1.0)))
    assert where == Interval(0.0, 0.5)
