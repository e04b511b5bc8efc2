import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from levykit import IllConditionedInversion, NonConvergedQuadrature
from levykit._quadrature import quad, tail_integral
from levykit.laplace import gaver_stehfest, stehfest_coefficients
from levykit.special import expm1i, expm1i_minus_iz, lower_gamma, lower_gamma_series, upper_gamma

# mpmath.gammainc at 25 digits
UPPER = [
    (-0.5, 0.3, 1.150367047355164337010821),
    (-1.0, 1.0, 0.14849550677592204791836),
    (-2.5, 5.0, 0.0000148091403060868166716851),
    (-1.5, 0.01, 648.9300494125562321611122),
    (0.5, 2.0, 0.08064711796031769078862607),
    (-0.5, 1.0, 0.1781477117815606901925823),
]


@pytest.mark.parametrize("a,x,ref", UPPER)
def test_upper_gamma_oracle(a, x, ref):
    assert upper_gamma(a, x) == pytest.approx(ref, rel=1e-12)


def test_lower_gamma_oracle():
    assert lower_gamma(0.5, 2.0) == pytest.approx(1.691806732945198336509541, rel=1e-14)
    assert lower_gamma_series(0.5, 0.5) == pytest.approx(1.210035619311108903018673, rel=1e-14)
    with pytest.raises(ValueError):
        lower_gamma(-0.5, 1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(-3.0, 3.0).filter(lambda a: abs(a - round(a)) > 1e-3), st.floats(0.05, 30.0))
def test_upper_gamma_recurrence(a, x):
    # Gamma(a + 1, x) = a Gamma(a, x) + x^a e^-x
    lhs = upper_gamma(a + 1, x)
    rhs = a * upper_gamma(a, x) + x ** a * math.exp(-x)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-300)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 5.0), st.floats(0.01, 20.0))
def test_lower_plus_upper(a, x):
    assert lower_gamma(a, x) + upper_gamma(a, x) == pytest.approx(math.gamma(a), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 1.9), st.floats(0.01, 1.5))
def test_lower_series_matches(a, x):
    assert lower_gamma_series(a, x) == pytest.approx(lower_gamma(a, x), rel=1e-10)


@settings(max_examples=80, deadline=None)
@given(st.floats(-50, 50))
def test_kernels_match_direct_formula(z):
    direct = complex(math.cos(z) - 1, math.sin(z))
    assert abs(expm1i(z) - direct) <= 1e-15 * max(1, abs(z))
    assert abs(expm1i_minus_iz(z) - (direct - 1j * z)) <= 1e-14 * max(1, abs(z))


def test_kernels_tiny_arguments():
    assert expm1i_minus_iz(1e-200) == pytest.approx(-0.5e-400 + 0j, abs=0)
    assert expm1i_minus_iz(1e-8) == pytest.approx(complex(-5e-17, -1e-24 / 6), rel=1e-12)


# ------------------------------------------------------------------ quadrature

def test_quad_power_singularity():
    res = quad(lambda x: x ** -0.9, 0.0, 1.0, singular=(0.0,))
    assert res.value == pytest.approx(10.0, rel=1e-10)


def test_quad_vector_and_breakpoint():
    f = lambda x: np.stack([np.abs(x - 0.3), np.where(x < 0.5, 1.0, 2.0)], axis=1)
    res = quad(f, 0.0, 1.0, points=(0.3, 0.5))
    np.testing.assert_allclose(res.value, [0.29, 1.5], rtol=1e-13)


def test_quad_infinite_interval():
    def f(x):
        with np.errstate(over="ignore"):
            return np.exp(-x * x)
    res = quad(f, 0.0, math.inf)
    assert res.value == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-12)


def test_quad_reports_failure():
    with pytest.raises(NonConvergedQuadrature):
        quad(lambda x: np.sin(1.0 / x) / x, 0.0, 1.0, rtol=1e-14, max_intervals=50)


def test_tail_integral_detects_divergence():
    assert math.isinf(tail_integral(lambda x: x ** -1.0, 1.0, "zero").value)
    assert math.isinf(tail_integral(lambda x: x ** -1.0, 1.0, "inf").value)
    assert tail_integral(lambda x: x ** -1.5, 1.0, "inf").value == pytest.approx(2.0, rel=1e-9)
    assert tail_integral(lambda x: x ** -0.5, 1.0, "zero").value == pytest.approx(2.0, rel=1e-9)


# --------------------------------------------------------------------- Laplace

def test_stehfest_coefficients():
    v = stehfest_coefficients(12)
    assert all(isinstance(c, Fraction) for c in v)
    assert sum(v) == 0
    # N = 4 table: -2, 26, -48, 24
    assert stehfest_coefficients(4) == (-2, 26, -48, 24)
    with pytest.raises(ValueError):
        stehfest_coefficients(5)


@pytest.mark.parametrize("F,f,x", [
    (lambda s: 1.0 / (s + 1.0), lambda x: math.exp(-x), 1.0),
    (lambda s: 1.0 / s ** 2, lambda x: x, 2.0),
    (lambda s: 1.0 / (s + 1.0) ** 2, lambda x: x * math.exp(-x), 1.3),
    (lambda s: 1.0 / s - 1.0 / (s + 0.5), lambda x: 1 - math.exp(-0.5 * x), 0.7),
])
def test_gaver_stehfest_known_pairs(F, f, x):
    assert abs(gaver_stehfest(F, x) - f(x)) <= 1e-4 * max(1.0, abs(f(x)))


def test_gaver_stehfest_oscillatory_is_coarse():
    # slowly oscillating originals are only reproduced to a few digits
    assert abs(gaver_stehfest(lambda s: 1.0 / (s * s + 1.0), 1.0) - math.sin(1.0)) < 5e-3


def test_gaver_stehfest_ill_conditioned():
    # cos(8 x) oscillates too fast for 12 real-axis samples
    with pytest.raises(IllConditionedInversion):
        gaver_stehfest(lambda s: s / (s * s + 64.0), 1.0)


def test_gaver_stehfest_threads_identical():
    F = lambda s: 1.0 / (s + 1.0) ** 2
    assert gaver_stehfest(F, 1.5, workers=4) == gaver_stehfest(F, 1.5)
