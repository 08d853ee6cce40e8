import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plotpos import (
    DomainError,
    Exponential,
    Normal,
    Uniform,
    beta_median_bisection,
    epl_curve,
    epl_minimizer,
    expected_pl,
    fpl,
    monotone_map,
    pl_invariance_check,
    probability_loss,
)
from plotpos.loss import expected_pl_quadrature

LATTICE_P = (0.05, 0.25, 0.5, 0.75, 0.95)


def lattice():
    for n in range(1, 51):
        for i in range(1, n + 1):
            for p in LATTICE_P:
                yield n, i, p


def test_probability_loss_examples():
    assert probability_loss(Uniform(), 0.2, 0.7) == pytest.approx(0.5, abs=1e-16)
    assert probability_loss(Uniform(), 0.4, 0.4) == 0.0
    assert probability_loss(Exponential(1.0), 0.0, math.log(2)) == pytest.approx(0.5, abs=1e-16)


@pytest.mark.parametrize("a, b", [(math.nan, 0.1), (0.1, math.inf)])
def test_probability_loss_rejects_non_finite(a, b):
    with pytest.raises(DomainError):
        probability_loss(Uniform(), a, b)


def test_expected_pl_examples():
    assert expected_pl(1, 1, 0.5) == pytest.approx(0.25, abs=1e-16)
    assert expected_pl(1, 1, 0.0) == pytest.approx(0.5, abs=1e-16)
    m = 1 - 2**-0.5
    curve = epl_curve(2, 1, 2001)
    assert expected_pl(2, 1, m) <= curve.loss.min()


@pytest.mark.parametrize("p", [-0.01, 1.01, math.nan])
def test_expected_pl_rejects_bad_p(p):
    with pytest.raises(DomainError):
        expected_pl(3, 2, p)
    with pytest.raises(DomainError):
        fpl(3, 2, p)


def test_expected_pl_array():
    p = np.array([0.1, 0.5, 0.9])
    np.testing.assert_allclose(expected_pl(4, 2, p), [expected_pl(4, 2, x) for x in p], rtol=0, atol=0)


def test_expected_pl_against_mpmath():
    for n, i, p in [(1, 1, 0.3), (4, 2, 0.5), (9, 1, 0.02), (40, 33, 0.81), (300, 150, 0.49)]:
        a, b = i, n + 1 - i
        exact = mpmath.quad(
            lambda u: abs(u - p) * u ** (a - 1) * (1 - u) ** (b - 1) / mpmath.beta(a, b),
            [0, p, 1],
        )
        assert expected_pl(n, i, p) == pytest.approx(float(exact), abs=1e-13)


def test_fpl_examples():
    assert fpl(1, 1, 0.5) == pytest.approx(0.25, abs=1e-16)
    assert fpl(3, 2, 0.5) == pytest.approx(expected_pl(3, 2, 0.5), abs=1e-15)
    m = 1 - 2 ** (-1 / 5)
    grid = np.linspace(0.001, 0.999, 999)
    assert fpl(5, 1, m) <= min(fpl(5, 1, p) for p in grid)


def test_fpl_against_mpmath():
    # integral of G over [0, p] plus integral of 1 - G over [p, 1]
    for n, i, p in [(2, 1, 0.3), (7, 4, 0.6), (50, 2, 0.05)]:
        G = lambda u: mpmath.betainc(i, n + 1 - i, 0, u, regularized=True)  # noqa: E731
        exact = mpmath.quad(G, [0, p]) + mpmath.quad(lambda u: 1 - G(u), [p, 1])
        assert fpl(n, i, p) == pytest.approx(float(exact), abs=1e-14)


def test_fpl_equals_epl_on_lattice():
    worst = max(abs(fpl(n, i, p) - expected_pl(n, i, p)) for n, i, p in lattice())
    assert worst <= 1e-10


@pytest.mark.slow
def test_closed_form_matches_quadrature_on_lattice():
    worst = max(abs(expected_pl_quadrature(n, i, p) - expected_pl(n, i, p)) for n, i, p in lattice())
    assert worst <= 1e-9


@pytest.mark.parametrize("n, i, expected", [(1, 1, 0.5), (2, 2, 2**-0.5), (5, 3, 0.5)])
def test_minimizer_examples(n, i, expected):
    assert epl_minimizer(n, i) == pytest.approx(expected, abs=1e-11)


def test_minimizer_nearest_grid_point():
    grid = np.arange(1, 2002) / 2002
    for n in range(1, 31):
        for i in range(1, n + 1):
            m = epl_minimizer(n, i)
            loss = expected_pl(n, i, grid)
            assert np.argmin(loss) == np.argmin(np.abs(grid - m)), (n, i)


def test_convex_in_p():
    grid = np.arange(1, 2002) / 2002
    for n in (1, 2, 5, 17, 30, 50):
        for i in range(1, n + 1):
            second = np.diff(expected_pl(n, i, grid), 2)
            assert second.min() >= -1e-9


@given(
    a=st.floats(-5, 5),
    b=st.floats(-5, 5),
    mu=st.floats(-3, 3),
    sigma=st.floats(0.1, 4),
)
def test_pl_symmetric(a, b, mu, sigma):
    F = Normal(mu, sigma)
    assert probability_loss(F, a, b) == probability_loss(F, b, a)


@given(xs=st.lists(st.floats(0, 20), min_size=3, max_size=3), rate=st.floats(0.05, 5))
def test_pl_triangle(xs, rate):
    a, b, c = xs
    F = Exponential(rate)
    assert probability_loss(F, a, c) <= probability_loss(F, a, b) + probability_loss(F, b, c) + 1e-15


def test_invariance_examples():
    assert pl_invariance_check(Uniform(), "exp", 0.2, 0.7) == pytest.approx((0.5, 0.5), abs=1e-15)
    left, right = pl_invariance_check(Uniform(), monotone_map("affine", 3.0, 1.0), 0.1, 0.4)
    assert left == pytest.approx(0.3, abs=1e-15) and right == pytest.approx(0.3, abs=1e-15)
    left, right = pl_invariance_check(Exponential(2.0), "exp", 0.5, 1.0)
    assert abs(left - right) <= 1e-12


@given(
    tag=st.sampled_from(["affine", "exp", "expit"]),
    slope=st.floats(0.05, 20),
    intercept=st.floats(-5, 5),
    a=st.floats(-3, 3),
    b=st.floats(-3, 3),
    mu=st.floats(-1, 1),
    sigma=st.floats(0.3, 2),
)
def test_invariance_random(tag, slope, intercept, a, b, mu, sigma):
    phi = monotone_map(tag, slope, intercept) if tag == "affine" else monotone_map(tag)
    left, right = pl_invariance_check(Normal(mu, sigma), phi, a, b)
    assert abs(left - right) <= 1e-12


@pytest.mark.parametrize("tag, slope", [("square", 1.0), ("affine", -2.0), ("affine", 0.0)])
def test_invariance_rejects_non_monotone(tag, slope):
    with pytest.raises(DomainError):
        monotone_map(tag, slope)
