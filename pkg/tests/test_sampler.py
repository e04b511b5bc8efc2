import math

import numpy as np
import pytest
from scipy import stats

from levykit import (AlphaOutOfRange, Atoms, CharFn, EmptyBatch, EmptyJumpDistribution,
                     ExistenceFailed, Exponential, GridTooCoarse, LevyTriplet, NotInIDAlpha,
                     PointMasses, Power, PowerExp, PowerExpDensity, RadialParametric, RhoAlpha,
                     SimulationScheme, declared_bias, empirical_cf, free_cf, levy_exponent, map_cf,
                     sample_random_integral, sample_tempered_stable, simulate_levy_increments,
                     stable_constant, stable_constant_oracle, stable_limit_experiment,
                     stable_limit_log_cf)
from levykit.sampler import CHUNK, scaled_power_log_cf

from conftest import ATOMIC_TRIPLETS, atomic

N = 100_000
Y20 = np.linspace(-2, 2, 20)[:, None]
DELTA1 = atomic([[1.0]], [1.0])


def sup_diff(batch, Y, exact):
    return float(np.max(np.abs(empirical_cf(batch, Y).values - exact)))


# ------------------------------------------------------------------ increments

def test_gaussian_increments_covariance():
    R = np.array([[2.0, 0.5], [0.5, 1.0]])
    dt = 0.7
    x = simulate_levy_increments(LevyTriplet.gaussian(R), [dt] * N, SimulationScheme(seed=3))
    S = np.cov(x.T)
    target = dt * R
    se = np.sqrt((np.outer(np.diag(target), np.diag(target)) + target ** 2) / N)
    assert np.all(np.abs(S - target) <= 3 * se)
    assert np.all(np.abs(x.mean(axis=0)) <= 3 * np.sqrt(np.diag(target) / N))


def test_compound_poisson_increments_cf():
    # shift equals the compensator so the increment is a plain sum of jumps
    m = Atoms([[0.5], [-2.0]], [1.0, 0.5])
    t = LevyTriplet([0.5], [[0.0]], m)
    dt = 1.3
    x = simulate_levy_increments(t, [dt] * N, SimulationScheme(seed=11))
    y = Y20[:, 0]
    exact = np.exp(dt * (np.exp(0.5j * y) + 0.5 * np.exp(-2j * y) - 1.5))
    assert sup_diff(x, Y20, exact) <= 3 / math.sqrt(N)


def test_poisson_counts_chi_square():
    x = simulate_levy_increments(atomic([[1.0]], [1.0], shift=1.0), np.ones(20_000),
                                 SimulationScheme(seed=5))
    k = np.rint(x[:, 0]).astype(int)
    assert np.allclose(x[:, 0], k)
    cats = 6
    obs = np.bincount(np.minimum(k, cats - 1), minlength=cats)
    p = stats.poisson.pmf(np.arange(cats - 1), 1.0)
    p = np.append(p, 1 - p.sum())
    assert stats.chisquare(obs, p * len(k)).pvalue > 0.01


def test_increment_errors():
    with pytest.raises(EmptyJumpDistribution):
        simulate_levy_increments(atomic([[1e-4]], [1.0]), [1.0], SimulationScheme(seed=0))
    with pytest.raises(ValueError):
        simulate_levy_increments(DELTA1, [-1.0], SimulationScheme())
    assert simulate_levy_increments(DELTA1, [0.0], SimulationScheme())[0, 0] == 0.0


def test_scheme_validation():
    with pytest.raises(ValueError):
        SimulationScheme(jump_truncation=0.0)
    with pytest.raises(ValueError):
        SimulationScheme(time_grid=(1.0, 0.5))
    with pytest.raises(ValueError):
        SimulationScheme(seed=2 ** 64)
    fine = SimulationScheme(time_grid=(0.1, 1.0, 10.0)).refined(Exponential())
    assert fine.jump_truncation == pytest.approx(5e-4)
    np.testing.assert_allclose(fine.time_grid, [0.1, 0.1 ** 0.5, 1.0, 10 ** 0.5, 10.0])


# ------------------------------------------------------------- random integral

@pytest.mark.parametrize("t", [ATOMIC_TRIPLETS[3], ATOMIC_TRIPLETS[5]], ids=["two_atoms", "gauss_atom"])
def test_point_mixing_is_the_process_at_one(t):
    batch = sample_random_integral(t, PointMasses([1.0], [1.0]), SimulationScheme(seed=1), N)
    assert batch.declared_bias == 0.0
    assert sup_diff(batch, Y20, np.exp(levy_exponent(t, Y20)[0])) <= 3 / math.sqrt(N)


def test_point_mixing_two_dimensions():
    t = ATOMIC_TRIPLETS[8]
    Y = np.random.default_rng(2).uniform(-1.5, 1.5, (20, 2))
    batch = sample_random_integral(t, PointMasses([1.0], [1.0]), SimulationScheme(seed=4), N)
    assert sup_diff(batch, Y, np.exp(levy_exponent(t, Y)[0])) <= 3 / math.sqrt(N)


def test_gaussian_exponential_variance():
    batch = sample_random_integral(LevyTriplet.gaussian([[1.0]]), Exponential(), SimulationScheme(seed=9), N)
    v = batch.draws[:, 0].var(ddof=1)
    assert abs(v - 2.0) <= 3 * 2.0 * math.sqrt(2.0 / (N - 1)) + batch.declared_bias


def test_delta_one_exponential_matches_free_cf():
    batch = sample_random_integral(DELTA1, Exponential(), SimulationScheme(seed=21), N)
    assert batch.declared_bias < 1e-3
    assert sup_diff(batch, Y20, free_cf(DELTA1, Y20)) <= 3 / math.sqrt(N) + batch.declared_bias


def test_tempered_stable_cf():
    t = ATOMIC_TRIPLETS[3]
    batch = sample_tempered_stable(t, 0.5, SimulationScheme(seed=8), N)
    exact = np.exp(map_cf(CharFn.from_triplet(t), RhoAlpha(0.5)).log_cf(Y20))
    assert sup_diff(batch, Y20, exact) <= 3 / math.sqrt(N) + batch.declared_bias


def test_tempered_stable_moments_replicate():
    # E|X|^p is finite for p < 1; its estimates agree across seeds
    est = [np.mean(np.abs(sample_tempered_stable(DELTA1, 0.5, SimulationScheme(seed=s), 20_000).draws) ** 0.4)
           for s in range(5)]
    assert np.all(np.isfinite(est))
    assert (max(est) - min(est)) / np.mean(est) < 0.05


def test_tempered_stable_restrictions():
    with pytest.raises(AlphaOutOfRange):
        sample_tempered_stable(DELTA1, 1.2, SimulationScheme(), 10)
    heavy = LevyTriplet([0.0], [[0.0]], RadialParametric([[1.0]], [1.0], Power(0.3, 1.0, math.inf)))
    with pytest.raises(NotInIDAlpha):
        sample_tempered_stable(heavy, 0.5, SimulationScheme(), 10)


def test_empty_batch():
    batch = sample_tempered_stable(DELTA1, 0.5, SimulationScheme(), 0)
    assert batch.n == 0 and batch.draws.shape == (0, 1)
    with pytest.raises(EmptyBatch):
        empirical_cf(batch, [1.0])


def test_existence_failure():
    with pytest.raises(ExistenceFailed):
        sample_random_integral(LevyTriplet([0.7], [[0.0]]), PowerExpDensity(1.0, -2.0, 0.0, 1.0),
                               SimulationScheme(), 10)


def test_determinism_and_seeds():
    a = sample_random_integral(ATOMIC_TRIPLETS[6], Exponential(), SimulationScheme(seed=42), 10_000)
    b = sample_random_integral(ATOMIC_TRIPLETS[6], Exponential(), SimulationScheme(seed=42), 10_000)
    c = sample_random_integral(ATOMIC_TRIPLETS[6], Exponential(), SimulationScheme(seed=43), 10_000)
    assert np.array_equal(a.draws, b.draws)
    assert not np.array_equal(a.draws, c.draws)


def test_thread_count_invariance():
    n = 3 * CHUNK + 17
    one = sample_random_integral(ATOMIC_TRIPLETS[7], Exponential(), SimulationScheme(seed=5), n, threads=1)
    four = sample_random_integral(ATOMIC_TRIPLETS[7], Exponential(), SimulationScheme(seed=5), n, threads=4)
    assert np.array_equal(one.draws, four.draws)


def test_prefix_stability():
    # draws depend only on the seed and their index
    small = sample_random_integral(DELTA1, Exponential(), SimulationScheme(seed=6), CHUNK + 5)
    big = sample_random_integral(DELTA1, Exponential(), SimulationScheme(seed=6), 2 * CHUNK)
    assert np.array_equal(small.draws[:CHUNK], big.draws[:CHUNK])


def test_disjoint_segments_uncorrelated():
    batch = sample_random_integral(ATOMIC_TRIPLETS[2], Exponential(), SimulationScheme(seed=13), N,
                                   segments=(0.5, 2.0))
    parts = batch.partials[:, :, 0]
    np.testing.assert_allclose(parts.sum(axis=1), batch.draws[:, 0], rtol=1e-12, atol=1e-12)
    r = np.corrcoef(parts.T)
    assert np.all(np.abs(r[np.triu_indices(3, 1)]) <= 3 / math.sqrt(N))


def test_refinement_consistency():
    t = ATOMIC_TRIPLETS[1]
    coarse = SimulationScheme(seed=17)
    fine = coarse.refined(Exponential())
    a = sample_random_integral(t, Exponential(), coarse, N)
    b = sample_random_integral(t, Exponential(), fine, N)
    # two independent estimates: the band of their difference is sqrt(2) wider
    gap = np.max(np.abs(empirical_cf(a, Y20).values - empirical_cf(b, Y20).values))
    assert gap <= 3 * math.sqrt(2) / math.sqrt(N) + a.declared_bias + b.declared_bias


def test_coarse_grid_is_reported():
    with pytest.raises(GridTooCoarse):
        sample_random_integral(DELTA1, Exponential(), SimulationScheme(time_grid=(0.5, 1.0, 2.0)), N)
    batch = sample_random_integral(DELTA1, Exponential(), SimulationScheme(time_grid=(0.5, 1.0, 2.0)), N,
                                   check_grid=False)
    assert batch.declared_bias > 0.01


def test_declared_bias_matches_batch():
    s = SimulationScheme(seed=1)
    b = sample_random_integral(DELTA1, Exponential(), s, 100)
    assert declared_bias(DELTA1, Exponential(), s) == b.declared_bias


def test_batch_csv(tmp_path):
    b = sample_random_integral(ATOMIC_TRIPLETS[7], Exponential(), SimulationScheme(seed=2), 5)
    b.to_csv(tmp_path / "d.csv", tmp_path / "d.json")
    rows = (tmp_path / "d.csv").read_text().splitlines()
    assert rows[0].startswith("#") and rows[1] == "x1,x2" and len(rows) == 7
    assert '"seed": 2' in (tmp_path / "d.json").read_text()


# -------------------------------------------------------------- empirical CF

def test_empirical_cf_constant_batch():
    v = np.array([0.3, -1.2])
    Y = np.array([[1.0, 2.0], [-0.5, 0.7]])
    e = empirical_cf(np.tile(v, (7, 1)), Y)
    np.testing.assert_allclose(e.values, np.exp(1j * Y @ v), rtol=1e-15)
    assert e.error_bar == pytest.approx(1 / math.sqrt(7))


@pytest.mark.slow
def test_empirical_cf_gaussian_coverage():
    exact = math.exp(-0.5)
    hits = 0
    for seed in range(100):
        x = np.random.Generator(np.random.Philox(key=seed)).standard_normal(N)
        hits += abs(empirical_cf(x, [1.0]).values[0] - exact) <= 3 / math.sqrt(N)
    assert hits >= 99


# -------------------------------------------------------------- stable limit

def test_stable_constant():
    assert stable_constant(0.5) == pytest.approx(2.50662827463100050241576528481, rel=1e-14)
    for alpha in (0.2, 0.5, 0.8):
        re, im = stable_constant_oracle(alpha)
        assert re == pytest.approx(stable_constant(alpha), rel=1e-9)
        assert im == pytest.approx(stable_constant(alpha) * math.tan(math.pi * alpha / 2), rel=1e-9)
    with pytest.raises(AlphaOutOfRange):
        stable_constant_oracle(1.5)


def test_stable_limit_delta_one():
    tab = stable_limit_experiment(Atoms([[1.0]], [1.0]), 0.5, [1, 0.1, 0.01, 0.001], Y20)
    assert tab.strictly_decreasing and tab.discrepancy[-1] <= 1e-2


def test_stable_limit_symmetric():
    M = Atoms([[1.0], [-1.0]], [0.5, 0.5])
    tab = stable_limit_experiment(M, 0.5, [1, 0.1, 0.01, 0.001], Y20)
    assert tab.strictly_decreasing and tab.discrepancy[-1] <= 1e-2
    assert np.max(np.abs(stable_limit_log_cf(M, 0.5, Y20).imag)) <= 1e-15
    for s in (1.0, 0.01):
        assert np.max(np.abs(scaled_power_log_cf(M, 0.5, s, Y20).imag)) <= 1e-12


def test_stable_limit_at_zero():
    M = Atoms([[1.0]], [1.0])
    assert stable_limit_log_cf(M, 0.5, 0.0) == 0
    for s in (1.0, 0.1):
        assert scaled_power_log_cf(M, 0.5, s, 0.0) == 0


def test_stable_limit_requires_id_alpha():
    heavy = RadialParametric([[1.0]], [1.0], Power(0.3, 1.0, math.inf))
    with pytest.raises(NotInIDAlpha):
        stable_limit_experiment(heavy, 0.5, [1.0], Y20)
    with pytest.raises(AlphaOutOfRange):
        stable_limit_experiment(Atoms([[1.0]], [1.0]), 1.0, [1.0], Y20)


def test_stable_limit_rate_for_infinite_activity():
    # small jumps of index 0.3 slow the approach to s^((alpha - 0.3) / alpha) = s^0.4
    M = RadialParametric([[1.0]], [1.0], PowerExp(0.3, 1.0))
    tab = stable_limit_experiment(M, 0.5, [1e-2, 1e-3, 1e-4], Y20)
    assert tab.strictly_decreasing
    ratios = np.array(tab.discrepancy[:-1]) / np.array(tab.discrepancy[1:])
    np.testing.assert_allclose(np.log10(ratios), 0.4, atol=0.05)
