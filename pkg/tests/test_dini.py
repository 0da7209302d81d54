import numpy as np
import pytest

from homricci.dini import (
    argmax_min_derivative,
    comparison_check,
    dini_upper_left,
    left_quotient,
    sup_function,
)


def midpoint_grid(n):
    # n cells on [-1, 1]; the extreme points sit half a cell inside
    d = 2.0 / n
    return -1 + d * (np.arange(n) + 0.5)


def linear_family(t, x):
    return x * t


def test_linear_family_argmax_at_zero():
    x = np.linspace(-1, 1, 21)
    _, arg = sup_function(linear_family, x, [0.0])
    assert len(arg[0]) == 21
    assert argmax_min_derivative(linear_family, lambda t, x: x, x, 0.0) == -1.0


def test_linear_family_quotient_refines_to_minus_one():
    errors = []
    for level in range(4):
        x = midpoint_grid(8 * 2**level)
        q = left_quotient(linear_family, x, 0.0, 1e-3)
        m = argmax_min_derivative(linear_family, lambda t, x: x, x, 0.0)
        assert q == pytest.approx(m, abs=1e-12)
        errors.append(abs(q + 1))
    ratios = np.array(errors[:-1]) / np.array(errors[1:])
    np.testing.assert_allclose(ratios, 2.0, rtol=1e-9)


def test_moving_peak_family():
    def g(t, x):
        return -(x - t) ** 2

    x = np.linspace(-1, 1, 201)
    phi, arg = sup_function(g, x, [0.0, -0.01])
    np.testing.assert_allclose(phi, 0.0, atol=1e-15)
    assert list(x[arg[0]]) == [0.0]
    assert left_quotient(g, x, 0.0, 0.01) == pytest.approx(0.0, abs=1e-12)
    assert argmax_min_derivative(g, lambda t, x: 2 * (x - t), x, 0.0) == 0.0


@pytest.mark.parametrize("seed", range(5))
def test_quadratic_family_refinement(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.uniform(0.5, 2.0, size=2)

    def g(t, x):
        return a * x * t - b * x**2

    # unique maximizer x = 0 at t = 0, so the argmax minimum of dg/dt = a x is 0
    gaps = []
    for level in range(4):
        h = 0.1 / 2**level
        x = np.linspace(-1, 1, 2 * round(1 / h**2) + 1)  # contains 0
        assert argmax_min_derivative(g, lambda t, x: a * x, x, 0.0) == 0.0
        gaps.append(abs(left_quotient(g, x, 0.0, h)))
    ratios = np.array(gaps[:-1]) / np.array(gaps[1:])
    np.testing.assert_allclose(ratios, 2.0, rtol=1e-2)


def test_dini_on_linear_samples():
    t = np.linspace(0, 1, 11)
    d = dini_upper_left(t, 3 - 2 * t)
    assert np.isnan(d[0])
    np.testing.assert_allclose(d[1:], -2.0)


def test_dini_window_takes_max():
    t = np.arange(4.0)
    v = np.array([0.0, 1.0, 0.0, 0.5])
    d = dini_upper_left(t, v, window=2)
    np.testing.assert_allclose(d[1:], [1.0, 0.0, 0.5])


def test_dini_rejects_bad_grids():
    with pytest.raises(ValueError):
        dini_upper_left([0.0], [1.0])
    with pytest.raises(ValueError):
        dini_upper_left([0.0, 0.0], [1.0, 2.0])


def test_comparison_examples():
    t = np.linspace(0, 1, 101)
    assert comparison_check(t, 1 - t, -1.0)  # su2 closed form, equality
    assert comparison_check(t, np.ones_like(t), 0.0)
    assert not comparison_check(t, t, -0.5)
