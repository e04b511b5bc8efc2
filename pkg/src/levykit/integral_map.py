"""The random-integral map K^(lambda): mu -> law of int_0^inf t dY_mu(Lambda(t)).

Two independent routes are provided for the image law.  ``map_triplet``
transforms the triplet [a, R, M] directly; ``map_cf`` integrates the source
log-characteristic function along the ray, log phi(y) = int log phi_mu(t y)
lambda(dt).  The exponential mixing e(dt) = exp(-t) dt gives the free kernel
1/(1 - i<y,x>), and rho_alpha(dt) = t^(-alpha-1) exp(-t) dt gives tempered
stable laws.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._quadrature import quad
from .exceptions import (
    AlphaOutOfRange,
    BranchJump,
    ConsistencyError,
    ExistenceFailed,
    NotInIDAlpha,
)
from .laplace import DEFAULT_TERMS, gaver_stehfest
from .levy_core import (
    LevyMeasure,
    LevyTriplet,
    as_points,
    convolution_power,
    dilate,
    is_symmetric,
    levy_exponent,
    radial_moment,
)
from .mixing import (
    Exponential,
    MixingMeasure,
    MixtureDiagnostic,
    PointMasses,
    RhoAlpha,
    _mix_unchecked,
    _radial_sum,
    check_mixture_integrability,
)

MAP_RTOL = 1e-12


# ------------------------------------------------------------------ existence

@dataclass(frozen=True)
class ExistenceReport:
    first_moment: float          # int t lambda(dt)
    second_moment: float         # int t^2 lambda(dt)
    shift_ok: bool               # (i)
    gaussian_ok: bool            # (ii)
    compensator_value: float     # (iii)
    compensator_ok: bool
    mixture: MixtureDiagnostic   # (iv)
    note: str = ""

    @property
    def exists(self):
        return self.shift_ok and self.gaussian_ok and self.compensator_ok and self.mixture.is_levy

    def failed(self):
        names = []
        if not self.shift_ok:
            names.append("(i) int t lambda(dt) < inf")
        if not self.gaussian_ok:
            names.append("(ii) int t^2 lambda(dt) < inf")
        if not self.compensator_ok:
            names.append("(iii) compensator moment condition")
        if not self.mixture.is_levy:
            names.append("(iv) mixture is a Levy measure")
        return names

    def to_dict(self):
        def num(x):
            return None if not math.isfinite(x) else float(x)
        return {"exists": self.exists,
                "i_first_moment": {"value": num(self.first_moment), "ok": self.shift_ok},
                "ii_second_moment": {"value": num(self.second_moment), "ok": self.gaussian_ok},
                "iii_compensator": {"value": num(self.compensator_value), "ok": self.compensator_ok},
                "iv_mixture": self.mixture.to_dict(),
                "note": self.note}


def _compensator_condition(M: LevyMeasure, lam: MixingMeasure):
    def g(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            inv = 1.0 / r
        inside = r * lam.partial_moments(1.0, inv, math.inf)
        outside = r * lam.partial_moments(1.0, 0.0, inv)
        return np.where(r <= 1.0, inside, outside)
    return _radial_sum(M, g)


def check_existence(t: LevyTriplet, lam: MixingMeasure) -> ExistenceReport:
    """All four conditions for the improper random integral to exist."""
    m1, m2 = lam.moment(1.0), lam.moment(2.0)
    shift_ok = not np.any(t.shift != 0) or math.isfinite(m1)
    gauss_ok = not np.any(t.covariance != 0) or math.isfinite(m2)
    comp = _compensator_condition(t.levy_measure, lam)
    mixture = check_mixture_integrability(t.levy_measure, lam)
    return ExistenceReport(m1, m2, shift_ok, gauss_ok, comp, math.isfinite(comp), mixture)


# ------------------------------------------------------------ mapped triplet

@dataclass(frozen=True, eq=False)
class MappedTriplet:
    input: LevyTriplet
    mixing: MixingMeasure
    output: LevyTriplet
    existence_report: ExistenceReport


def _indicator_shift_inner(M: LevyMeasure, t):
    """int x [1_B(t x) - 1_B(x)] M(dx) for one t, exact over the two shells."""
    dec = M.decompose()
    out = np.zeros(M.dim)
    if len(dec.masses):
        rho = np.linalg.norm(dec.points, axis=1)
        ind = (t * rho <= 1.0).astype(float) - (rho <= 1.0).astype(float)
        out += (dec.masses * ind) @ dec.points
    for ray in dec.rays:
        if t < 1:
            lo, hi, sgn = 1.0, 1.0 / t, 1.0
        elif t > 1:
            lo, hi, sgn = 1.0 / t, 1.0, -1.0
        else:
            continue
        out += sgn * ray.integrate(lambda r: r, lo=lo, hi=hi).value * ray.direction
    return out


def shift_correction(M: LevyMeasure, lam: MixingMeasure, rtol=1e-11):
    """int int [1_B(t x) - 1_B(x)] t x M(dx) lambda(dt), inner x, outer t."""
    dec = M.decompose()
    if M.is_zero():
        return np.zeros(M.dim)
    breaks = [1.0]
    if len(dec.masses):
        breaks += list(1.0 / np.linalg.norm(dec.points, axis=1))
    for ray in dec.rays:
        breaks += [1.0 / x for x in (ray.lo, ray.hi) if 0 < x < math.inf]

    def outer(ts):
        return np.stack([t * _indicator_shift_inner(M, t) for t in ts])
    return np.asarray(lam.integrate(outer, rtol=rtol, atol=1e-14, points=breaks), dtype=float)


def map_triplet(t: LevyTriplet, lam: MixingMeasure) -> MappedTriplet:
    """[a^(lambda), R^(lambda), M^(lambda)] of the image law."""
    report = check_existence(t, lam)
    if not report.exists:
        raise ExistenceFailed("random integral does not exist: " + "; ".join(report.failed()), report)
    return _map_existing(t, lam, report)


def _map_existing(t, lam, report, with_shift=True):
    shift = np.zeros(t.dim)
    if np.any(t.shift != 0):
        shift = report.first_moment * t.shift
    if with_shift:
        shift = shift + shift_correction(t.levy_measure, lam)
    cov = report.second_moment * t.covariance if np.any(t.covariance != 0) else np.zeros_like(t.covariance)
    out = LevyTriplet(shift, cov, _mix_unchecked(t.levy_measure, lam))
    return MappedTriplet(t, lam, out, report)


def exponential_shift_closed_form(t: LevyTriplet):
    """a^(e) in closed form:

        a + int_{|x|>1} x (1 - e^{-1/|x|}(1 + 1/|x|)) M(dx)
          - int_{|x|<=1} x e^{-1/|x|}(1 + 1/|x|) M(dx).
    """
    M = t.levy_measure
    dec = M.decompose()
    out = np.array(t.shift, dtype=float)

    def weight(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            u = 1.0 / r
            tailpart = np.exp(-u) * (1.0 + u)
        tailpart = np.where(r > 0, np.nan_to_num(tailpart), 0.0)
        return np.where(r > 1.0, 1.0 - tailpart, -tailpart)

    if len(dec.masses):
        rho = np.linalg.norm(dec.points, axis=1)
        out += (dec.masses * weight(rho)) @ dec.points
    for ray in dec.rays:
        out += ray.integrate(lambda r: r * weight(r), points=(1.0,)).value * ray.direction
    return out


# --------------------------------------------------------- characteristic fns

class CharFn:
    """Characteristic function with a continuous-branch log accessor."""

    def __init__(self, log_cf: Callable, dim: int, label: str = ""):
        self._log_cf, self.dim, self.label = log_cf, dim, label

    def log_cf(self, y):
        Y, scalar = as_points(y, self.dim)
        vals = np.asarray(self._log_cf(Y), dtype=complex)
        return vals[0] if scalar else vals

    def __call__(self, y):
        return np.exp(self.log_cf(y))

    value = __call__

    @classmethod
    def from_triplet(cls, t: LevyTriplet, label="triplet"):
        return cls(lambda Y: levy_exponent(t, Y)[0], t.dim, label)

    @classmethod
    def from_cf(cls, cf: Callable, dim: int, label="cf", steps=64, max_steps=1 << 14):
        """Wrap a plain CF; the log is continued from 0 along each ray."""
        def log_cf(Y):
            out = np.empty(Y.shape[0], dtype=complex)
            for i, y in enumerate(Y):
                out[i] = _ray_log(cf, y, steps, max_steps)
            return out
        return cls(log_cf, dim, label)

    @classmethod
    def from_samples(cls, draws, label="empirical"):
        draws = np.asarray(draws, dtype=float)
        if draws.ndim == 1:
            draws = draws[:, None]

        def cf(y):
            return np.mean(np.exp(1j * (draws @ np.atleast_1d(y))))
        return cls.from_cf(cf, draws.shape[1], label)


def _ray_log(cf, y, steps, max_steps):
    if not np.any(y):
        return 0j
    n = steps
    while n <= max_steps:
        s = np.linspace(0.0, 1.0, n + 1)
        vals = np.array([complex(cf(si * y)) for si in s])
        if np.any(vals == 0):
            raise BranchJump("characteristic function vanishes on the ray")
        dphi = np.angle(vals[1:] / vals[:-1])
        if np.max(np.abs(dphi)) < math.pi / 4:
            return complex(math.log(abs(vals[-1])), float(np.angle(vals[0]) + dphi.sum()))
        n *= 2
    raise BranchJump("phase still jumps by more than pi/4 per step on the finest grid")


def map_cf(source: CharFn, lam: MixingMeasure, rtol=MAP_RTOL) -> CharFn:
    """log phi(y) = int_0^inf source.log_cf(t y) lambda(dt)."""
    d = source.dim

    def log_cf(Y):
        k = Y.shape[0]

        def f(ts):
            pts = (np.asarray(ts)[:, None, None] * Y[None, :, :]).reshape(-1, d)
            return source.log_cf(pts).reshape(len(ts), k)
        if isinstance(lam, PointMasses):
            return np.asarray(lam.integrate(f), dtype=complex)
        return np.asarray(lam.integrate(f, rtol=rtol, atol=1e-14), dtype=complex)
    return CharFn(log_cf, d, f"mapped {source.label}")


def free_kernel(z, inside):
    """1/(1 - iz) - 1 - iz 1{inside}, written without cancellation."""
    z = np.asarray(z)
    inside = np.broadcast_to(inside, z.shape)
    with np.errstate(over="ignore", invalid="ignore"):
        # the inside branch only matters for |z| <= |y|, far from overflow
        return np.where(inside, -(z * z) / (1.0 - 1j * z), 1j * z / (1.0 - 1j * z))


def free_log_cf(t: LevyTriplet, y, rtol=1e-10, atol=1e-12):
    """i<y,a> - <y,R y> + int (1/(1 - i<y,x>) - 1 - i<y,x> 1_B(x)) M(dx)."""
    Y, scalar = as_points(y, t.dim)
    vals = 1j * (Y @ t.shift) - np.einsum("ki,ij,kj->k", Y, t.covariance, Y)
    vals = vals.astype(complex)
    dec = t.levy_measure.decompose()
    if len(dec.masses):
        inside = np.linalg.norm(dec.points, axis=1) <= 1.0
        vals = vals + free_kernel(Y @ dec.points.T, inside[None, :]) @ dec.masses
    for ray in dec.rays:
        s = Y @ ray.direction
        vals = vals + ray.transform(free_kernel, s, rtol=rtol, atol=atol)[0]
    return vals[0] if scalar else vals


def free_cf(t: LevyTriplet, y):
    return np.exp(free_log_cf(t, y))


def tempered_stable_map(t: LevyTriplet, alpha) -> MappedTriplet:
    """K^(rho_alpha); for alpha in [1, 2) only symmetric M with zero shift."""
    if not 0 < alpha < 2:
        raise AlphaOutOfRange("alpha must lie in (0, 2)")
    if alpha >= 1 and (np.any(t.shift != 0) or not is_symmetric(t.levy_measure)):
        raise AlphaOutOfRange("alpha >= 1 requires a symmetric Levy measure and zero shift")
    if not math.isfinite(radial_moment(t.levy_measure, alpha)):
        raise NotInIDAlpha(f"int |x|^{alpha} M(dx) diverges")
    lam = RhoAlpha(alpha)
    if alpha < 1:
        mapped = map_triplet(t, lam)
    else:
        # symmetric M: the compensator contributions cancel in pairs
        base = check_existence(t, lam)
        report = ExistenceReport(base.first_moment, base.second_moment, True, base.gaussian_ok,
                                 base.compensator_value, True, base.mixture,
                                 note="alpha >= 1: symmetric M, compensator cancels")
        if not report.exists:
            raise ExistenceFailed("random integral does not exist: " + "; ".join(report.failed()), report)
        mapped = _map_existing(t, lam, report, with_shift=False)
    factor = math.gamma(2.0 - alpha)
    if not np.allclose(mapped.output.covariance, factor * t.covariance, rtol=1e-12, atol=0):
        raise ConsistencyError("covariance factor differs from Gamma(2 - alpha)")
    return mapped


# ------------------------------------------------------------------ inverses

def inverse_map_exponential(mapped: CharFn, y, n=DEFAULT_TERMS):
    """Recover log phi_mu(y) from the e-image: invert s^-1 log phi(y/s) at x = 1."""
    Y, _ = as_points(y, mapped.dim)
    if Y.shape[0] != 1:
        raise ValueError("invert one point at a time")
    y0 = Y[0]
    if not np.any(y0):
        return 0j
    return gaver_stehfest(lambda s: complex(mapped.log_cf((y0 / s)[None, :])[0]) / s, 1.0, n)


def inverse_map_tempered(mapped: CharFn, alpha, y, n=DEFAULT_TERMS):
    """Recover log phi_mu(y) from the rho_alpha-image: invert s^alpha log phi(y/s)."""
    if not 0 < alpha < 1:
        raise AlphaOutOfRange("inversion needs 0 < alpha < 1")
    Y, _ = as_points(y, mapped.dim)
    if Y.shape[0] != 1:
        raise ValueError("invert one point at a time")
    y0 = Y[0]
    if not np.any(y0):
        return 0j
    return gaver_stehfest(lambda s: s ** alpha * complex(mapped.log_cf((y0 / s)[None, :])[0]), 1.0, n)


def scaling_identity_check(t: LevyTriplet, lam: MixingMeasure, a, c, y_grid):
    """Compare two routes to the log-CF of (L(a I))^{*c}:
    scale the source then map, versus map then dilate and take the power."""
    if c <= 0:
        raise ValueError("c must be positive")
    Y, _ = as_points(y_grid, t.dim)
    if a == 0:
        return 0.0
    scaled = convolution_power(dilate(t, a), c)
    path1 = map_cf(CharFn.from_triplet(scaled), lam).log_cf(Y)
    path2 = c * map_cf(CharFn.from_triplet(t), lam).log_cf(a * Y)
    return float(np.max(np.abs(path1 - path2)))
