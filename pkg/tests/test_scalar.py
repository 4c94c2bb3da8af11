import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from matineq.scalar import (
    FRAC,
    IDENTITY,
    MIN1,
    SQRT,
    SQUARE,
    AngleSum,
    Named,
    angle,
    classify,
    evaluate,
    evaluate_spectrum,
    format_fn,
    ga,
    parse_fn,
    pos_part_shift,
)
from matineq.spectral import DomainError


def test_evaluate_examples():
    assert evaluate(angle(1, (1, 1)), 2.0) == 3.0
    assert evaluate(MIN1, 0.5) == 0.5 and evaluate(MIN1, 3.0) == 1.0
    assert evaluate(ga(0.0), 1.0) == 0.5
    assert evaluate(pos_part_shift(1.0), 0.4) == 0.0
    np.testing.assert_array_equal(evaluate(SQUARE, np.array([1.0, -2.0])), [1.0, 4.0])


@pytest.mark.parametrize("f, x", [(SQRT, -0.1), (FRAC, -1.0), (ga(1.0), -2.0)])
def test_evaluate_outside_domain(f, x):
    with pytest.raises(DomainError):
        evaluate(f, x)


def test_evaluate_spectrum_snaps_roundoff_only():
    np.testing.assert_array_equal(evaluate_spectrum(SQRT, np.array([4.0, -1e-14])), [2.0, 0.0])
    with pytest.raises(DomainError):
        evaluate_spectrum(SQRT, np.array([4.0, -1e-6]))


def test_classify_examples():
    g = classify(angle(1, (1, 1)))
    assert g.convex and g.monotone_increasing and g.zero_at_zero and not g.concave
    m = classify(angle(1, (1, -1)))
    assert m.concave and m.monotone_increasing and not m.strictly_increasing
    z = classify(AngleSum(0.0))
    assert z.convex and z.concave
    assert not classify(angle(1, (1, -2))).monotone_increasing
    assert not classify(angle(1, (1, -2))).nonnegative_on_R_plus
    assert classify(MIN1).concave and classify(SQUARE).convex and classify(ga(3)).convex


def test_min1_matches_its_angle_form():
    xs = np.linspace(-2, 5, 71)
    np.testing.assert_array_equal(evaluate(MIN1, xs), evaluate(angle(1, (1, -1)), xs))


def test_angle_sum_validation_and_addition():
    with pytest.raises(ValueError):
        angle(1, (-0.5, 1))
    with pytest.raises(ValueError):
        angle(1, (1, 1), (1, 2))
    with pytest.raises(ValueError):
        Named("cube")
    with pytest.raises(ValueError):
        ga(-1)
    s = angle(1, (1, 1)) + angle(0.5, (1, -0.5), (2, 1))
    assert s == AngleSum(1.5, ((1.0, 0.5), (2.0, 1.0)))
    xs = np.linspace(0, 4, 9)
    np.testing.assert_allclose(s(xs), angle(1, (1, 1))(xs) + angle(0.5, (1, -0.5), (2, 1))(xs))


def test_convexity_classification_is_sound():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(1000):
        n = int(rng.integers(0, 4))
        f = AngleSum(float(rng.uniform(-1, 2)),
                     tuple(zip(rng.uniform(0, 2, n).tolist(), rng.uniform(-2, 2, n).tolist())))
        cls = classify(f)
        x, y = np.sort(rng.uniform(-1, 4, 2))
        th = rng.uniform(0, 1)
        mid, chord = f(th * x + (1 - th) * y), th * f(x) + (1 - th) * f(y)
        if cls.convex:
            assert mid <= chord + 1e-12
            checked += 1
        if cls.concave:
            assert mid >= chord - 1e-12
            checked += 1
    assert checked > 100


@given(st.lists(st.floats(0, 3, allow_nan=False), min_size=2, max_size=6, unique=True),
       st.floats(0.01, 2), st.lists(st.floats(-1, 1), min_size=6, max_size=6))
def test_monotone_classification_is_sound(x0s, a, bs):
    f = AngleSum(a, tuple(zip(x0s, bs)))
    xs = np.linspace(-1, 4, 201)
    if classify(f).monotone_increasing:
        assert np.all(np.diff(f(xs)) >= -1e-12)
    else:
        assert np.any(np.diff(f(xs)) < 0)


@given(st.floats(0, 20), st.floats(-0.99, 50))
def test_ga_is_linear_minus_frac(a, x):
    assert abs(evaluate(ga(a), x) - (a * x + x - evaluate(FRAC, x))) <= 1e-12 * (1 + abs(a * x) + abs(x))


@pytest.mark.parametrize("f", [IDENTITY, SQRT, SQUARE, MIN1, FRAC, ga(0.5), ga(0.1),
                               angle(1, (1, 1)), angle(0.25, (0.3, -0.1), (1.5, 0.2)), AngleSum(0.0)])
def test_format_parse_roundtrip(f):
    assert parse_fn(format_fn(f)) == f


def test_parse_variants():
    assert parse_fn("angle:a=1,x0=1,b=1") == angle(1, (1, 1))
    assert parse_fn(" MIN1 ") == MIN1
    assert parse_fn("ga:a=2") == ga(2)


@pytest.mark.parametrize("text", ["cube", "angle:b=1,x0=1", "angle:a=1,b=1", "angle:a=x",
                                  "ga:b=1", "sqrt:a=1", "angle:a=1,b=1,y=2", "angle:a=1,b=1,x0=-1"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_fn(text)
