import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from levykit import (Atoms, Dilated, InvalidMeasure, InvalidTriplet, LevyTriplet, NegativePower,
                     Power, PowerExp, RadialParametric, Scaled, Sum, ZeroScale, convolution_power,
                     dilate, eval_levy_exponent, is_symmetric, levy_exponent, radial_moment,
                     validate_levy_measure, zero_measure)
from levykit.levy_core import Exp, measure_from_dict

from conftest import ATOMIC_TRIPLETS, atomic, grid_for, mixed_triplet, radial_triplet

ALL = ATOMIC_TRIPLETS + [radial_triplet(), mixed_triplet()]


def test_empty_triplet_exponent_is_zero():
    t = LevyTriplet.zero(2)
    assert eval_levy_exponent(t, [0.3, -1.0]).value == 0


def test_pure_shift():
    t = LevyTriplet([1.0], [[0.0]])
    assert eval_levy_exponent(t, 2.0).value == 2j


def test_single_small_atom():
    # mpmath, 30 digits: exp(0.5 i) - 1 - 0.5 i
    t = atomic([[0.5]], [1.0])
    v = eval_levy_exponent(t, 1.0).value
    assert abs(v - complex(-0.122417438109627283883718417396, -0.0205744613957969997267120647844)) < 1e-15


def test_radial_exponent_matches_scipy():
    from scipy import integrate
    t = LevyTriplet([0.0], [[0.0]], RadialParametric([[1.0]], [1.0], PowerExp(0.5, 1.0)))
    y = 1.3
    f = lambda r, part: (cmath.exp(1j * y * r) - 1 - (1j * y * r if r <= 1 else 0)).__getattribute__(part) \
        * r ** -1.5 * math.exp(-r)
    ref = sum(integrate.quad(f, a, b, args=(p,), epsabs=1e-13, epsrel=1e-12, limit=200)[0] * w
              for a, b in ((0, 1), (1, np.inf)) for p, w in (("real", 1), ("imag", 1j)))
    assert abs(eval_levy_exponent(t, y).value - ref) < 1e-9


def test_exponent_error_is_reported():
    v = eval_levy_exponent(radial_triplet(), 1.0)
    assert 0 <= v.quadrature_error < 1e-8


def test_convolution_power_examples(atomic_triplet):
    t = atomic_triplet
    assert convolution_power(t, 1) is t
    z = convolution_power(t, 0)
    assert not np.any(z.shift) and not np.any(z.covariance) and z.levy_measure.is_zero()
    t2 = convolution_power(t, 2)
    np.testing.assert_array_equal(t2.shift, 2 * t.shift)
    np.testing.assert_array_equal(t2.covariance, 2 * t.covariance)
    np.testing.assert_array_equal(t2.levy_measure.decompose().masses, 2 * t.levy_measure.decompose().masses)


def test_negative_power_rejected():
    with pytest.raises(NegativePower):
        convolution_power(ATOMIC_TRIPLETS[0], -1)


def test_dilate_gaussian():
    t = LevyTriplet.gaussian([[0.7]])
    np.testing.assert_allclose(dilate(t, 3).covariance, [[9 * 0.7]], rtol=0, atol=1e-15)


def test_dilate_atom_enters_ball():
    out = dilate(atomic([[2.0]], [1.0]), 0.25)
    assert out.shift[0] == pytest.approx(0.5, abs=1e-15)
    dec = out.levy_measure.decompose()
    np.testing.assert_allclose(dec.points, [[0.5]])


def test_dilate_identity_and_zero():
    t = ATOMIC_TRIPLETS[2]
    assert dilate(t, 1) is t
    with pytest.raises(ZeroScale):
        dilate(t, 0)


def test_validate_examples():
    d = validate_levy_measure(Atoms([[1.0]], [5.0]))
    assert d.is_levy and d.small_ball_integral == 5.0 and d.tail_mass == 0.0
    d = validate_levy_measure(RadialParametric([[1.0]], [1.0], Power(1.0, 0.0, 1.0)))
    assert d.is_levy and d.small_ball_integral == pytest.approx(1.0, abs=1e-9) and d.tail_mass == 0.0
    d = validate_levy_measure(RadialParametric([[1.0]], [1.0], Power(2.0, 0.0, 1.0)))
    assert not d.is_levy and d.divergent and d.tail_mass == 0.0


def test_triplet_rejects_bad_input():
    with pytest.raises(InvalidTriplet):
        LevyTriplet([0.0], [[-1.0]])
    with pytest.raises(InvalidTriplet):
        LevyTriplet([0.0, 0.0], [[1.0, 0.5], [0.0, 1.0]])
    with pytest.raises(InvalidMeasure):
        Atoms([[0.0]], [1.0])
    with pytest.raises(InvalidMeasure):
        Atoms([[1.0]], [-1.0])
    with pytest.raises(InvalidMeasure):
        LevyTriplet([0.0], [[0.0]], RadialParametric([[1.0]], [1.0], Power(2.5, 0.0, 1.0)))


def test_dict_roundtrip():
    for t in ALL:
        back = LevyTriplet.from_dict(t.to_dict())
        Y = grid_for(t.dim, 5)
        np.testing.assert_allclose(levy_exponent(back, Y)[0], levy_exponent(t, Y)[0], atol=1e-13)
    m = measure_from_dict({"kind": "dilated", "scale": -2.0,
                           "inner": {"kind": "radial", "directions": [[1.0]], "weights": [1.0],
                                     "family": {"name": "exp", "rate": 2.0}}})
    assert isinstance(m, Dilated)


def test_radial_moment_and_symmetry():
    M = Atoms([[1.0], [-1.0]], [0.5, 0.5])
    assert is_symmetric(M)
    assert not is_symmetric(Atoms([[1.0]], [1.0]))
    assert radial_moment(Atoms([[4.0]], [2.0]), 0.5) == pytest.approx(4.0)
    # int_0^inf r^0.5 r^-1.5 e^-r dr diverges at 0
    assert math.isinf(radial_moment(RadialParametric([[1.0]], [1.0], PowerExp(0.5, 1.0)), 0.5))
    # int_0^inf r^0.7 r^-1.5 e^-r dr = Gamma(0.2)
    assert radial_moment(RadialParametric([[1.0]], [1.0], PowerExp(0.5, 1.0)), 0.7) == \
        pytest.approx(math.gamma(0.2), rel=1e-9)


# ------------------------------------------------------------------ properties

@pytest.mark.parametrize("t", ALL, ids=range(len(ALL)))
def test_zero_and_hermitian(t):
    assert levy_exponent(t, np.zeros(t.dim))[0] == 0
    Y = grid_for(t.dim)
    v, err = levy_exponent(t, Y)
    w, _ = levy_exponent(t, -Y)
    assert np.max(np.abs(w - np.conj(v))) <= 10 * max(err, 1e-13)


@pytest.mark.parametrize("t", ALL, ids=range(len(ALL)))
@pytest.mark.parametrize("c", [0.5, 2.0, 3.7])
def test_additivity(t, c):
    Y = grid_for(t.dim)
    lhs = levy_exponent(convolution_power(t, c), Y)[0]
    assert np.max(np.abs(lhs - c * levy_exponent(t, Y)[0])) <= 1e-9


@pytest.mark.parametrize("t", ALL, ids=range(len(ALL)))
@pytest.mark.parametrize("c", [0.3, -1.7, 2.5])
def test_dilation_consistency(t, c):
    Y = grid_for(t.dim)
    lhs = levy_exponent(dilate(t, c), Y)[0]
    assert np.max(np.abs(lhs - levy_exponent(t, c * Y)[0])) <= 1e-9


coef = st.floats(0.01, 10.0)
scale = st.floats(0.05, 20.0).flatmap(lambda a: st.sampled_from([a, -a]))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(coef, scale), min_size=1, max_size=4), st.integers(0, 3))
def test_closure_under_scale_and_dilation(pairs, which):
    base = [Atoms([[0.4], [-2.0]], [1.0, 3.0]),
            RadialParametric([[1.0]], [1.0], PowerExp(1.5, 1.0)),
            RadialParametric([[1.0]], [2.0], Power(0.5, 0.0, 1.0)),
            RadialParametric([[-1.0]], [1.0], Exp(0.5))][which]
    assert validate_levy_measure(base).is_levy
    M = Sum([Scaled(Dilated(base, a), c) for c, a in pairs])
    assert validate_levy_measure(M).is_levy


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.floats(-5, 5).filter(lambda x: abs(x) > 1e-3), st.floats(0.01, 5)),
                min_size=1, max_size=5),
       st.floats(-3, 3), st.floats(0, 2), st.floats(-4, 4))
def test_atomic_exponent_matches_formula(atoms, a, sigma2, y):
    pts = [[p] for p, _ in atoms]
    ms = [m for _, m in atoms]
    t = LevyTriplet([a], [[sigma2]], Atoms(pts, ms))
    ref = 1j * a * y - 0.5 * sigma2 * y * y + sum(
        m * (cmath.exp(1j * y * p) - 1 - (1j * y * p if abs(p) <= 1 else 0)) for p, m in atoms)
    assert abs(levy_exponent(t, y)[0] - ref) <= 1e-12 * (1 + abs(ref))


def test_zero_measure_dimension():
    assert zero_measure(3).dim == 3 and zero_measure(3).is_zero()
