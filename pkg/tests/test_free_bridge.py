import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from levykit import (Atoms, HalfPlanePoint, InvalidMeasure, LevyTriplet, RealMeasure, bridge_check,
                     cauchy_transform, compound_poisson_f, f_transform, free_levy_khintchine,
                     free_log_cf, inverse_f, voiculescu_scaled, voiculescu_transform)

from conftest import atomic

MEASURES = {
    "atoms": RealMeasure.atoms([-1.0, 0.5, 2.0], [0.2, 0.5, 0.3]),
    "semicircle": RealMeasure.semicircle(1.5),
    "shifted_semicircle": RealMeasure.semicircle(0.7, centre=0.4),
    "mp_small": RealMeasure.free_poisson(0.4, 1.0),
    "mp_large": RealMeasure.free_poisson(2.5, 0.8),
    "cauchy": RealMeasure.cauchy(0.5, 0.3),
}

upper = st.tuples(st.floats(-5, 5), st.floats(0.05, 5)).map(lambda p: complex(*p))


# --------------------------------------------------------------- examples

def test_cauchy_transform_examples():
    assert cauchy_transform(RealMeasure.point_mass(0.0), 2 + 1j) == 1 / (2 + 1j)
    assert abs(cauchy_transform(RealMeasure.cauchy(1.0), 2j) - (-1j / 3)) < 1e-15
    two = RealMeasure.atoms([-1.0, 1.0], [0.5, 0.5])
    assert abs(cauchy_transform(two, 1j) - (-0.5j)) < 1e-15


def test_voiculescu_examples():
    assert abs(voiculescu_transform(RealMeasure.point_mass(0.8), 0.3 + 1j) - 0.8) < 1e-12
    z = 1 + 2j
    assert abs(voiculescu_transform(RealMeasure.semicircle(1.0), z) - 1 / z) < 1e-12
    # Cauchy law: V(z) = -i scale
    assert abs(voiculescu_transform(RealMeasure.cauchy(0.5), z) - (-0.5j)) < 1e-12


def test_real_axis_rejected():
    with pytest.raises(ValueError):
        HalfPlanePoint(1.0)
    with pytest.raises(ValueError):
        cauchy_transform(MEASURES["atoms"], 0.5)
    with pytest.raises(InvalidMeasure):
        RealMeasure([0.0], [-1.0])


def test_free_levy_khintchine_examples():
    z = 0.3 - 0.8j
    assert free_levy_khintchine(LevyTriplet([1.7], [[0.0]]), z) == pytest.approx(1.7 * z, abs=1e-15)
    assert free_levy_khintchine(LevyTriplet.gaussian([[2.0]]), z) == pytest.approx(2.0 * z * z, abs=1e-15)
    v = free_levy_khintchine(atomic([[1.0]], [1.0]), -1j)
    assert abs(v - (-0.5 + 0.5j)) < 1e-15


def test_compound_poisson_f_example():
    assert abs(compound_poisson_f(Atoms([[1.0]], [1.0]), 1.0) - (-1 + 1j) / 2) < 1e-15
    assert abs(compound_poisson_f(RealMeasure.atoms([1.0], [1.0]), 1.0) - (-1 + 1j) / 2) < 1e-15


def test_compound_poisson_f_density():
    # semicircle with variance 1: int i y x / (1 - i y x) against an even density is real
    v = compound_poisson_f(RealMeasure.semicircle(1.0), 0.4)
    assert abs(v.imag) < 1e-13 and v.real < 0


# ------------------------------------------------------------- properties

@pytest.mark.parametrize("name", [k for k in MEASURES if k != "atoms"])
def test_closed_form_matches_quadrature(name):
    mu = MEASURES[name]
    for z in (0.3 + 0.5j, -2 + 0.1j, 4 + 3j, 0.1 - 0.7j):
        a = cauchy_transform(mu, z)
        b = cauchy_transform(mu, z, quadrature=True)
        assert abs(a - b) <= 1e-10 * max(1, abs(a))


@pytest.mark.parametrize("name", MEASURES)
@settings(max_examples=30, deadline=None)
@given(z=upper)
def test_herglotz(name, z):
    mu = MEASURES[name]
    assert cauchy_transform(mu, z).imag < 0
    assert cauchy_transform(mu, z.conjugate()) == pytest.approx(cauchy_transform(mu, z).conjugate(),
                                                                abs=1e-13)


@pytest.mark.parametrize("name", MEASURES)
def test_mass_at_infinity(name):
    mu = MEASURES[name]
    y = 1e7
    assert abs(1j * y * cauchy_transform(mu, 1j * y) - 1.0) < 1e-5
    assert mu.total_mass == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("name", MEASURES)
@settings(max_examples=20, deadline=None)
@given(w=upper)
def test_f_inverse_roundtrip(name, w):
    mu = MEASURES[name]
    z = f_transform(mu, w)
    back = inverse_f(mu, z)
    assert abs(f_transform(mu, back) - z) <= 1e-10 * max(1, abs(z))


@pytest.mark.parametrize("name", ["semicircle", "mp_small", "mp_large", "cauchy"])
def test_free_power_scales_voiculescu(name):
    mu = MEASURES[name]
    z = 0.5 + 2j
    assert abs(voiculescu_transform(mu.free_power(0.5), z) - 0.5 * voiculescu_transform(mu, z)) < 1e-10


def test_scaled_fallback_reaches_small_arguments():
    # 1/(i t) with t = 3 lies outside the range of F for free Poisson(1); the free power fallback
    # recovers V = rate jump z / (z - jump) there
    nu = RealMeasure.free_poisson(1.0, 1.0)
    z = 1 / 3j
    assert abs(voiculescu_scaled(nu, z) - z / (z - 1)) < 1e-10


BRIDGE = [
    (RealMeasure.semicircle(0.8), LevyTriplet.gaussian([[0.8]])),
    (RealMeasure.free_poisson(1.5, 0.5), atomic([[0.5]], [1.5], shift=0.75)),
    (RealMeasure.free_poisson(0.6, 2.0), atomic([[2.0]], [0.6])),
    (RealMeasure.point_mass(-1.2), LevyTriplet([-1.2], [[0.0]])),
]


@pytest.mark.parametrize("k", range(len(BRIDGE)))
@pytest.mark.parametrize("form", ["scaled", "voiculescu"])
def test_bridge_pairs(k, form):
    nu, t = BRIDGE[k]
    assert bridge_check(t, nu, np.linspace(0.1, 3, 15), form=form) <= 1e-9


def test_bridge_detects_wrong_partner():
    assert bridge_check(LevyTriplet.gaussian([[1.0]]), RealMeasure.semicircle(0.8), [0.5, 1.0]) > 0.1


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3), st.floats(-3, 3), st.floats(0, 2), st.floats(-2, 2).filter(lambda x: abs(x) > 0.05),
       st.floats(0.05, 3))
def test_free_lk_matches_exponential_image(t, a, s2, x, m):
    # the free cumulant transform at i t is the e-image exponent at t
    trip = LevyTriplet([a], [[s2]], Atoms([[x]], [m]))
    lhs = free_levy_khintchine(trip, 1j * t)
    assert abs(lhs - free_log_cf(trip, t)) <= 1e-10 * max(1, abs(lhs))


def test_free_lk_rejects_higher_dimension():
    with pytest.raises(ValueError):
        free_levy_khintchine(LevyTriplet.zero(2), 1j)


def test_free_lk_exp_identity():
    # exp of the exponential image equals the free characteristic function
    trip = atomic([[1.0]], [1.0])
    assert abs(cmath.exp(free_levy_khintchine(trip, 1j)) -
               (0.532280730215670714836557791144 - 0.290786288212691848864143254987j)) < 1e-14
