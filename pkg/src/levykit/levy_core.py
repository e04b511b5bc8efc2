"""Levy triplets [a, R, M] on R^d (d <= 3) and their exact algebra.

A Levy measure is stored lazily: wrappers (``Scaled``, ``Dilated``, ``Sum``
and the mixture wrapper from :mod:`levykit.mixing`) are never rewritten
eagerly.  Every measure can be decomposed into finitely many atoms plus
finitely many *rays*, a ray being a radial density carried by one unit
direction.  All integrals over a measure reduce to sums over atoms and
one-dimensional radial quadratures over rays.

The truncation ball is fixed to ``{|x| <= 1}``; atoms on the unit sphere
count as inside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from ._quadrature import NODES, W_KRONROD, QuadResult, quad, tail_integral
from .exceptions import (
    EmptyJumpDistribution,
    InvalidMeasure,
    InvalidTriplet,
    NegativePower,
    ZeroScale,
)
from .special import expm1i, expm1i_minus_iz, upper_gamma

MAX_DIM = 3
RTOL = 1e-10
ATOL = 1e-12


def as_points(y, dim):
    """Coerce ``y`` to an array of shape (k, dim).

    Returns the array and whether the caller passed a single point.  For
    ``dim == 1`` a flat array is read as k scalar points; for ``dim > 1`` a
    flat array of length ``dim`` is one point.
    """
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 0:
        if dim != 1:
            raise ValueError(f"scalar argument for a {dim}-dimensional law")
        return arr.reshape(1, 1), True
    if arr.ndim == 1:
        if dim == 1:
            return arr.reshape(-1, 1), False
        if arr.shape[0] != dim:
            raise ValueError(f"point of length {arr.shape[0]} for dim {dim}")
        return arr.reshape(1, dim), True
    if arr.shape[1] != dim:
        raise ValueError(f"points of dimension {arr.shape[1]} for dim {dim}")
    return arr, False


# ---------------------------------------------------------------- radial laws

class RadialFamily:
    """A radial density on ``(lo, hi)``; subclasses add closed forms."""

    lo = 0.0
    hi = math.inf

    def pdf(self, r):
        raise NotImplementedError

    def tail(self, r0):
        """Mass of ``(r0, hi)``, or ``None`` when there is no closed form."""
        return None

    def to_dict(self):
        raise InvalidMeasure(f"{type(self).__name__} has no JSON form")

    def sample(self, rng, n, r_min):
        return _tabulated_sample(self, rng, n, r_min)


def _tabulated_sample(family, rng, n, r_min):
    # inverse CDF on a log grid, cell masses from a fixed 15-point rule
    lo = max(family.lo, r_min)
    if lo <= 0:
        raise EmptyJumpDistribution("tabulated sampling needs a positive lower radius")
    hi = family.hi
    if math.isinf(hi):
        hi = max(2.0 * lo, 2.0)
        ref = _family_mass(family, lo, hi)
        for _ in range(200):
            nxt = 2.0 * hi
            extra = _family_mass(family, hi, nxt)
            hi = nxt
            if extra <= 1e-15 * max(ref, 1e-300):
                break
            ref += extra
    edges = np.geomspace(lo, hi, 4097)
    a, b = edges[:-1], edges[1:]
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    x = c[:, None] + h[:, None] * NODES[None, :]
    mass = (family.pdf(x.ravel()).reshape(x.shape) @ W_KRONROD) * h
    cdf = np.concatenate([[0.0], np.cumsum(mass)])
    if cdf[-1] <= 0:
        raise EmptyJumpDistribution("radial density has no mass above the truncation")
    u = rng.random(n) * cdf[-1]
    idx = np.clip(np.searchsorted(cdf, u, side="right") - 1, 0, len(a) - 1)
    frac = (u - cdf[idx]) / np.where(mass[idx] > 0, mass[idx], 1.0)
    return a[idx] * (b[idx] / a[idx]) ** np.clip(frac, 0.0, 1.0)


def _family_mass(family, lo, hi):
    return float(quad(family.pdf, lo, hi, rtol=1e-8, atol=1e-300, raise_on_fail=False).value)


class PowerExp(RadialFamily):
    """Density r^(-alpha-1) exp(-rate r) on (0, inf)."""

    def __init__(self, alpha, rate=1.0):
        if rate < 0:
            raise InvalidMeasure("rate must be nonnegative")
        self.alpha, self.rate = float(alpha), float(rate)

    def pdf(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = np.exp(-(self.alpha + 1.0) * np.log(r) - self.rate * r)
        return np.where(r > 0, out, 0.0)

    def tail(self, r0):
        r0 = np.asarray(r0, dtype=float)
        if self.rate > 0:
            return self.rate ** self.alpha * upper_gamma(-self.alpha, self.rate * np.maximum(r0, 0.0))
        if self.alpha > 0:
            with np.errstate(divide="ignore"):
                return r0 ** -self.alpha / self.alpha
        return np.full(r0.shape, math.inf)[()]

    def sample(self, rng, n, r_min):
        if self.alpha > 0 and r_min > 0:
            out = np.empty(0)
            while out.size < n:
                m = max(2 * (n - out.size), 64)
                r = r_min * rng.random(m) ** (-1.0 / self.alpha)
                keep = rng.random(m) < np.exp(-self.rate * (r - r_min))
                out = np.concatenate([out, r[keep]])
            return out[:n]
        return _tabulated_sample(self, rng, n, r_min)

    def to_dict(self):
        return {"name": "power_exp", "alpha": self.alpha, "rate": self.rate}


class Power(RadialFamily):
    """Density r^(-alpha-1) on (r_min, r_max]."""

    def __init__(self, alpha, r_min=0.0, r_max=math.inf):
        if not 0 <= r_min < r_max:
            raise InvalidMeasure("need 0 <= r_min < r_max")
        self.alpha, self.lo, self.hi = float(alpha), float(r_min), float(r_max)

    def pdf(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r > self.lo) & (r <= self.hi)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = np.exp(-(self.alpha + 1.0) * np.log(r))
        return np.where(inside, out, 0.0)

    def _antideriv(self, r):
        if self.alpha == 0:
            return np.log(r)
        with np.errstate(divide="ignore", over="ignore"):
            return -(r ** -self.alpha) / self.alpha

    def tail(self, r0):
        r0 = np.clip(np.asarray(r0, dtype=float), self.lo, self.hi)
        with np.errstate(invalid="ignore"):
            out = self._antideriv(np.full(r0.shape, self.hi)) - self._antideriv(r0)
        return np.where(r0 >= self.hi, 0.0, out)[()]

    def sample(self, rng, n, r_min):
        lo = max(self.lo, r_min)
        if lo >= self.hi:
            raise EmptyJumpDistribution("power law has no mass above the truncation")
        if lo <= 0:
            raise EmptyJumpDistribution("sampling needs a positive lower radius")
        u = rng.random(n)
        a = self.alpha
        if a == 0:
            return lo * (self.hi / lo) ** u
        if math.isinf(self.hi):
            if a < 0:
                raise EmptyJumpDistribution("infinite jump intensity above the truncation")
            return lo * (1.0 - u) ** (-1.0 / a)
        return (lo ** -a - u * (lo ** -a - self.hi ** -a)) ** (-1.0 / a)

    def to_dict(self):
        return {"name": "power", "alpha": self.alpha, "r_min": self.lo,
                "r_max": None if math.isinf(self.hi) else self.hi}


class Exp(RadialFamily):
    """Density exp(-rate r) on (0, inf)."""

    def __init__(self, rate=1.0):
        if rate <= 0:
            raise InvalidMeasure("rate must be positive")
        self.rate = float(rate)

    def pdf(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r > 0, np.exp(-self.rate * r), 0.0)

    def tail(self, r0):
        return np.exp(-self.rate * np.maximum(np.asarray(r0, dtype=float), 0.0)) / self.rate

    def sample(self, rng, n, r_min):
        return r_min + rng.exponential(1.0 / self.rate, n)

    def to_dict(self):
        return {"name": "exp", "rate": self.rate}


class UserDensity(RadialFamily):
    """Arbitrary vectorized radial density on ``(lo, hi)``."""

    def __init__(self, density: Callable, lo=0.0, hi=math.inf, name="user"):
        if not 0 <= lo < hi:
            raise InvalidMeasure("need 0 <= lo < hi")
        self.density, self.lo, self.hi, self.name = density, float(lo), float(hi), name

    def pdf(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r > self.lo) & (r < self.hi)
        safe = np.where(inside, r, 0.5 * (self.lo + min(self.hi, self.lo + 2.0)))
        return np.where(inside, self.density(safe), 0.0)


def family_from_dict(d):
    name = d["name"]
    if name == "power_exp":
        return PowerExp(d["alpha"], d.get("rate", 1.0))
    if name == "power":
        r_max = d.get("r_max")
        return Power(d["alpha"], d.get("r_min", 0.0), math.inf if r_max is None else r_max)
    if name == "exp":
        return Exp(d.get("rate", 1.0))
    raise InvalidMeasure(f"unknown radial family {name!r}")


@dataclass(frozen=True, eq=False)
class Ray:
    """Mass ``weight * pdf(r) dr`` placed on the half-line ``r * direction``."""

    direction: np.ndarray
    weight: float
    family: RadialFamily
    scale: float = 1.0

    @property
    def lo(self):
        return self.family.lo * self.scale

    @property
    def hi(self):
        return self.family.hi * self.scale

    def pdf(self, r):
        return self.family.pdf(np.asarray(r) / self.scale) / self.scale

    def _breaks(self, lo, hi, points):
        pts = {1.0, self.lo, self.hi} | {float(p) for p in points}
        if 0 < lo and hi / lo > 1e3:
            # decade breakpoints keep power-law behaviour near a tiny lower limit resolvable
            top = min(hi, 1e3 * max(lo, 1.0))
            pts |= set(np.geomspace(lo, top, int(np.log10(top / lo)) + 2)[1:-1].tolist())
        return sorted(p for p in pts if lo < p < hi)

    def integrate(self, g, lo=None, hi=None, points=(), rtol=RTOL, atol=ATOL):
        """Integral of ``g(r) * weight * pdf(r)`` over ``(lo, hi)``."""
        lo = self.lo if lo is None else max(lo, self.lo)
        hi = self.hi if hi is None else min(hi, self.hi)
        if self.weight == 0 or lo >= hi:
            probe = np.asarray(g(np.array([1.0])))
            zero = np.zeros(probe.shape[1:], dtype=probe.dtype)
            return QuadResult(zero[()] if zero.ndim == 0 else zero, 0.0)
        w = self.weight

        def integrand(r):
            val = np.asarray(g(r))
            p = self.pdf(r)
            if val.ndim == 2:
                p = p[:, None]
            with np.errstate(invalid="ignore", over="ignore"):
                return np.where((p == 0) | (val == 0), 0.0, w * val * p)

        return quad(integrand, lo, hi, points=self._breaks(lo, hi, points),
                    singular=(0.0,) if lo == 0 else (), rtol=rtol, atol=atol)

    def transform(self, kernel, s, rtol=RTOL, atol=ATOL):
        """``integrate(kernel(r s_j, r <= 1))`` for each projection s_j.

        Projections are grouped by octave of |s| so that slowly oscillating
        columns do not pay for the refinement the fast ones need.
        """
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, dtype=complex)
        err = 0.0
        nz = s != 0
        if not np.any(nz):
            return out, err
        octave = np.floor(np.log2(np.abs(s[nz]))).astype(int)
        idx = np.flatnonzero(nz)
        for o in np.unique(octave):
            cols = idx[octave == o]
            sc = s[cols]
            res = self.integrate(lambda r: kernel(r[:, None] * sc[None, :], (r <= 1.0)[:, None]),
                                 points=(1.0,), rtol=rtol, atol=atol)
            out[cols] = res.value
            err = max(err, float(res.error))
        return out, err

    def integrate_nonneg(self, g, lo=None, hi=None, rtol=RTOL, atol=ATOL):
        """Like :meth:`integrate` for nonnegative scalar ``g``, returning
        ``inf`` when the integral diverges at 0 or at infinity."""
        lo = self.lo if lo is None else max(lo, self.lo)
        hi = self.hi if hi is None else min(hi, self.hi)
        if self.weight == 0 or lo >= hi:
            return 0.0

        def f(r):
            p = self.pdf(r)
            with np.errstate(invalid="ignore", over="ignore"):
                return np.where(p == 0, 0.0, self.weight * np.asarray(g(r)) * p)

        total = 0.0
        a, b = lo, hi
        if a == 0:
            c = min(1.0, b) if not math.isinf(b) else 1.0
            total += tail_integral(f, c, "zero", rtol=rtol, atol=atol,
                                   points=self._breaks(0, c, ())).value
            a = c
        if math.isinf(b):
            c = max(a, 1.0)
            total += tail_integral(f, c, "inf", rtol=rtol, atol=atol,
                                   points=self._breaks(c, math.inf, ())).value
            b = c
        if a < b:
            total += quad(f, a, b, points=self._breaks(a, b, ()), rtol=rtol, atol=atol,
                          raise_on_fail=False).value
        return float(total)

    def tail(self, r0):
        """``weight * mass(r > r0)`` for an array of radii."""
        r0 = np.atleast_1d(np.asarray(r0, dtype=float))
        closed = self.family.tail(r0 / self.scale)
        if closed is not None:
            return self.weight * np.asarray(closed, dtype=float)
        out = np.empty(r0.shape)
        for i, r in enumerate(r0):
            out[i] = self.integrate_nonneg(lambda x: np.ones_like(x), lo=r)
        return out

    def sample_radius(self, rng, n, r_min):
        return self.family.sample(rng, n, r_min / self.scale) * self.scale


class Decomposition(NamedTuple):
    points: np.ndarray   # (k, d)
    masses: np.ndarray   # (k,)
    rays: tuple


# -------------------------------------------------------------- Levy measures

class LevyMeasure:
    """Base class for Levy measures on R^d minus the origin."""

    dim: int

    def decompose(self) -> Decomposition:
        raise NotImplementedError

    def to_dict(self):
        raise InvalidMeasure(f"{type(self).__name__} has no JSON form")

    def is_zero(self):
        dec = self.decompose()
        return (dec.masses.sum() == 0) and all(r.weight == 0 for r in dec.rays)

    def is_atomic(self):
        return len(self.decompose().rays) == 0

    def integrate(self, f, rtol=RTOL, atol=ATOL):
        """Integral of a vectorized ``f`` mapping (n, d) points to (n,) or (n, m)."""
        dec = self.decompose()
        total = 0.0
        if len(dec.masses):
            vals = np.asarray(f(dec.points))
            total = np.tensordot(dec.masses, vals, axes=(0, 0))
        for ray in dec.rays:
            u = ray.direction
            total = total + ray.integrate(lambda r: f(r[:, None] * u[None, :]),
                                          rtol=rtol, atol=atol).value
        return total

    def __add__(self, other):
        return Sum([self, other])

    def __mul__(self, c):
        return Scaled(self, c)

    __rmul__ = __mul__


def _empty_dec(dim):
    return Decomposition(np.zeros((0, dim)), np.zeros(0), ())


class Atoms(LevyMeasure):
    """Finite sum of point masses away from the origin."""

    def __init__(self, points, masses, dim=None):
        masses = np.atleast_1d(np.asarray(masses, dtype=float))
        pts = np.asarray(points, dtype=float)
        if dim is None:
            dim = 1 if pts.ndim <= 1 else pts.shape[1]
        pts = pts.reshape(len(masses), dim) if masses.size else np.zeros((0, dim))
        if dim < 1 or dim > MAX_DIM:
            raise InvalidMeasure(f"dimension must be between 1 and {MAX_DIM}")
        if np.any(masses < 0) or not np.all(np.isfinite(masses)):
            raise InvalidMeasure("atom masses must be finite and nonnegative")
        if masses.size and np.any(np.linalg.norm(pts, axis=1) == 0):
            raise InvalidMeasure("a Levy measure has no atom at the origin")
        pts.setflags(write=False)
        masses.setflags(write=False)
        self.points, self.masses, self.dim = pts, masses, dim

    def decompose(self):
        return Decomposition(self.points, self.masses, ())

    def to_dict(self):
        return {"kind": "atoms", "points": self.points.tolist(), "masses": self.masses.tolist()}

    def __repr__(self):
        return f"Atoms(points={self.points.tolist()}, masses={self.masses.tolist()})"


def zero_measure(dim):
    return Atoms(np.zeros((0, dim)), [], dim=dim)


class RadialParametric(LevyMeasure):
    """Radial family spread over finitely many weighted directions."""

    def __init__(self, directions, weights, family: RadialFamily, dim=None):
        dirs = np.asarray(directions, dtype=float)
        weights = np.atleast_1d(np.asarray(weights, dtype=float))
        if dim is None:
            dim = 1 if dirs.ndim <= 1 else dirs.shape[1]
        dirs = dirs.reshape(len(weights), dim)
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(norms == 0):
            raise InvalidMeasure("directions must be nonzero")
        if np.any(weights < 0):
            raise InvalidMeasure("direction weights must be nonnegative")
        if dim > MAX_DIM:
            raise InvalidMeasure(f"dimension must be at most {MAX_DIM}")
        self.directions = dirs / norms[:, None]
        self.weights, self.family, self.dim = weights, family, dim

    def decompose(self):
        rays = tuple(Ray(u, w, self.family) for u, w in zip(self.directions, self.weights))
        return Decomposition(np.zeros((0, self.dim)), np.zeros(0), rays)

    def to_dict(self):
        return {"kind": "radial", "directions": self.directions.tolist(),
                "weights": self.weights.tolist(), "family": self.family.to_dict()}


class Scaled(LevyMeasure):
    """c * M for c > 0."""

    def __init__(self, inner: LevyMeasure, factor):
        if factor < 0:
            raise NegativePower("measure scale factor must be nonnegative")
        self.inner, self.factor, self.dim = inner, float(factor), inner.dim

    def decompose(self):
        dec = self.inner.decompose()
        rays = tuple(Ray(r.direction, r.weight * self.factor, r.family, r.scale) for r in dec.rays)
        return Decomposition(dec.points, dec.masses * self.factor, rays)

    def to_dict(self):
        return {"kind": "scaled", "factor": self.factor, "inner": self.inner.to_dict()}


class Dilated(LevyMeasure):
    """T_c M, the image of M under x -> c x."""

    def __init__(self, inner: LevyMeasure, scale):
        if scale == 0:
            raise ZeroScale("dilation by zero")
        self.inner, self.scale, self.dim = inner, float(scale), inner.dim

    def decompose(self):
        dec = self.inner.decompose()
        c = self.scale
        rays = tuple(Ray(math.copysign(1.0, c) * r.direction, r.weight, r.family, r.scale * abs(c))
                     for r in dec.rays)
        return Decomposition(dec.points * c, dec.masses, rays)

    def to_dict(self):
        return {"kind": "dilated", "scale": self.scale, "inner": self.inner.to_dict()}


class Sum(LevyMeasure):
    def __init__(self, parts: Sequence[LevyMeasure]):
        parts = list(parts)
        if not parts:
            raise InvalidMeasure("empty sum")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise InvalidMeasure("summands live in different dimensions")
        self.parts, self.dim = parts, dims.pop()

    def decompose(self):
        decs = [p.decompose() for p in self.parts]
        return Decomposition(np.concatenate([d.points for d in decs]),
                             np.concatenate([d.masses for d in decs]),
                             tuple(r for d in decs for r in d.rays))

    def to_dict(self):
        return {"kind": "sum", "parts": [p.to_dict() for p in self.parts]}


def measure_from_dict(d, dim=None):
    kind = d["kind"]
    if kind == "atoms":
        return Atoms(d["points"], d["masses"], dim=dim)
    if kind == "radial":
        return RadialParametric(d["directions"], d["weights"], family_from_dict(d["family"]), dim=dim)
    if kind == "zero":
        return zero_measure(dim or d.get("dim", 1))
    if kind == "scaled":
        return Scaled(measure_from_dict(d["inner"], dim), d["factor"])
    if kind == "dilated":
        return Dilated(measure_from_dict(d["inner"], dim), d["scale"])
    if kind == "sum":
        return Sum([measure_from_dict(p, dim) for p in d["parts"]])
    if kind == "mixture":
        from .mixing import Mixture, mixing_from_dict
        return Mixture(measure_from_dict(d["inner"], dim), mixing_from_dict(d["mixing"]))
    raise InvalidMeasure(f"unknown measure kind {kind!r}")


# ------------------------------------------------------------------- triplets

@dataclass(frozen=True, eq=False)
class LevyTriplet:
    """Shift, Gaussian covariance and Levy measure of an ID law on R^d."""

    shift: np.ndarray
    covariance: np.ndarray
    levy_measure: LevyMeasure = field(default=None)

    def __post_init__(self):
        shift = np.atleast_1d(np.asarray(self.shift, dtype=float)).copy()
        d = shift.shape[0]
        cov = np.asarray(self.covariance, dtype=float).reshape(d, d).copy()
        if not 1 <= d <= MAX_DIM:
            raise InvalidTriplet(f"dimension must be between 1 and {MAX_DIM}")
        if np.max(np.abs(cov - cov.T), initial=0.0) > 1e-12:
            raise InvalidTriplet("covariance is not symmetric")
        if np.min(np.linalg.eigvalsh(cov)) < -1e-12:
            raise InvalidTriplet("covariance is not positive semidefinite")
        measure = self.levy_measure if self.levy_measure is not None else zero_measure(d)
        if measure.dim != d:
            raise InvalidTriplet("Levy measure dimension does not match the shift")
        if not _certified(measure) and not validate_levy_measure(measure).is_levy:
            raise InvalidMeasure("levy_measure does not integrate min(1, |x|^2)")
        shift.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "levy_measure", measure)

    @property
    def dim(self):
        return self.shift.shape[0]

    @classmethod
    def gaussian(cls, covariance, shift=None):
        cov = np.atleast_2d(np.asarray(covariance, dtype=float))
        d = cov.shape[0]
        return cls(np.zeros(d) if shift is None else shift, cov)

    @classmethod
    def zero(cls, dim=1):
        return cls(np.zeros(dim), np.zeros((dim, dim)))

    def log_cf(self, y):
        vals, _ = levy_exponent(self, y)
        return vals

    def cf(self, y):
        return np.exp(self.log_cf(y))

    def to_dict(self):
        return {"dim": self.dim, "shift": self.shift.tolist(),
                "covariance": self.covariance.tolist(),
                "levy_measure": self.levy_measure.to_dict()}

    @classmethod
    def from_dict(cls, d):
        dim = int(d["dim"])
        shift = np.asarray(d.get("shift", np.zeros(dim)), dtype=float).reshape(dim)
        cov = np.asarray(d.get("covariance", np.zeros((dim, dim))), dtype=float).reshape(dim, dim)
        lm = d.get("levy_measure")
        measure = zero_measure(dim) if lm is None else measure_from_dict(lm, dim)
        return cls(shift, cov, measure)


def _certified(measure):
    # mixed rays are only built after the mixture criterion has passed, and
    # re-checking them costs nested quadrature
    return any(getattr(r.family, "certified", False) for r in measure.decompose().rays)


@dataclass(frozen=True)
class LevyExponentValue:
    value: complex
    y: np.ndarray
    quadrature_error: float


@dataclass(frozen=True)
class LevyMeasureDiagnostic:
    is_levy: bool
    small_ball_integral: float
    tail_mass: float
    divergent: bool = False

    def to_dict(self):
        return {"is_levy": self.is_levy, "small_ball_integral": _jsonable(self.small_ball_integral),
                "tail_mass": _jsonable(self.tail_mass), "divergent": self.divergent}


def _jsonable(x):
    return None if not math.isfinite(x) else float(x)


def lk_kernel(z, inside):
    """exp(iz) - 1 - iz * 1{inside}, evaluated stably."""
    inside = np.broadcast_to(inside, np.shape(z))
    return np.where(inside, expm1i_minus_iz(z), expm1i(z))


def levy_exponent(t: LevyTriplet, y, rtol=RTOL, atol=ATOL):
    """Vectorized Levy exponent. Returns (values, quadrature error bound)."""
    Y, scalar = as_points(y, t.dim)
    vals = 1j * (Y @ t.shift) - 0.5 * np.einsum("ki,ij,kj->k", Y, t.covariance, Y)
    vals = vals.astype(complex)
    err = 0.0
    dec = t.levy_measure.decompose()
    if len(dec.masses):
        proj = Y @ dec.points.T
        inside = np.linalg.norm(dec.points, axis=1) <= 1.0
        vals = vals + lk_kernel(proj, inside[None, :]) @ dec.masses
    for ray in dec.rays:
        s = Y @ ray.direction
        v, e = ray.transform(lk_kernel, s, rtol=rtol, atol=atol)
        vals = vals + v
        err += e
    return (vals[0] if scalar else vals), err


def eval_levy_exponent(t: LevyTriplet, y) -> LevyExponentValue:
    Y, _ = as_points(y, t.dim)
    if Y.shape[0] != 1:
        raise ValueError("eval_levy_exponent takes a single point; use levy_exponent for grids")
    vals, err = levy_exponent(t, Y)
    return LevyExponentValue(complex(vals[0]), Y[0], float(err))


def convolution_power(t: LevyTriplet, c) -> LevyTriplet:
    """mu^{*c} = [c a, c R, c M]."""
    if c < 0:
        raise NegativePower("convolution powers need c >= 0")
    if c == 0:
        return LevyTriplet.zero(t.dim)
    if c == 1:
        return t
    return LevyTriplet(c * t.shift, c * t.covariance, Scaled(t.levy_measure, c))


def _shell_correction(measure: LevyMeasure, c):
    """int x [1_B(c x) - 1_B(x)] M(dx)."""
    dec = measure.decompose()
    d = measure.dim
    out = np.zeros(d)
    if len(dec.masses):
        rho = np.linalg.norm(dec.points, axis=1)
        ind = (abs(c) * rho <= 1.0).astype(float) - (rho <= 1.0).astype(float)
        out += (dec.masses * ind) @ dec.points
    ac = abs(c)
    for ray in dec.rays:
        if ac < 1:
            lo, hi, sgn = 1.0, 1.0 / ac, 1.0
        elif ac > 1:
            lo, hi, sgn = 1.0 / ac, 1.0, -1.0
        else:
            continue
        val = ray.integrate(lambda r: r, lo=lo, hi=hi).value
        out += sgn * val * ray.direction
    return out


def dilate(t: LevyTriplet, c) -> LevyTriplet:
    """T_c mu = [a_c, c^2 R, T_c M]."""
    if c == 0:
        raise ZeroScale("dilation by zero")
    if c == 1:
        return t
    shift = c * t.shift + c * _shell_correction(t.levy_measure, c)
    return LevyTriplet(shift, c * c * t.covariance, Dilated(t.levy_measure, c))


def validate_levy_measure(measure: LevyMeasure) -> LevyMeasureDiagnostic:
    """Check that ``measure`` integrates min(1, |x|^2)."""
    dec = measure.decompose()
    small = tail = 0.0
    if len(dec.masses):
        rho = np.linalg.norm(dec.points, axis=1)
        small += float(np.sum(dec.masses * np.where(rho <= 1, rho ** 2, 0.0)))
        tail += float(np.sum(dec.masses[rho > 1]))
    for ray in dec.rays:
        small += ray.integrate_nonneg(lambda r: r * r, hi=1.0)
        if ray.hi > 1:
            closed = ray.family.tail(np.array([max(1.0, ray.lo) / ray.scale]))
            if closed is not None:
                tail += float(ray.weight * np.asarray(closed).ravel()[0])
            else:
                tail += ray.integrate_nonneg(lambda r: np.ones_like(r), lo=1.0)
    finite = math.isfinite(small) and math.isfinite(tail)
    return LevyMeasureDiagnostic(finite, small, tail, not finite)


def radial_moment(measure: LevyMeasure, p, region="all"):
    """int |x|^p M(dx) over all of R^d, the unit ball, or its complement."""
    lo, hi = {"all": (0.0, math.inf), "ball": (0.0, 1.0), "outside": (1.0, math.inf)}[region]
    dec = measure.decompose()
    total = 0.0
    if len(dec.masses):
        rho = np.linalg.norm(dec.points, axis=1)
        sel = (rho > lo) & (rho <= hi) if region != "outside" else rho > 1
        total += float(np.sum(dec.masses[sel] * rho[sel] ** p))
    for ray in dec.rays:
        total += ray.integrate_nonneg(lambda r: r ** p, lo=lo, hi=hi)
    return total


def is_symmetric(measure: LevyMeasure, rtol=1e-9):
    """Whether M(-A) = M(A), comparing atoms and rays pairwise."""
    dec = measure.decompose()
    pts, ms = dec.points, dec.masses
    keep = ms > 0
    pts, ms = pts[keep], ms[keep]
    for x, m in zip(pts, ms):
        near = np.linalg.norm(pts + x, axis=1) <= 1e-12 * max(1.0, np.linalg.norm(x))
        if abs(ms[near].sum() - m) > rtol * m:
            return False
    probe = np.geomspace(1e-3, 1e3, 25)
    prof = [(r.direction, r.pdf(probe) * r.weight) for r in dec.rays if r.weight > 0]
    for u, dens in prof:
        mirror = sum((d for v, d in prof if np.allclose(v, -u, atol=1e-12)), np.zeros_like(probe))
        same = sum((d for v, d in prof if np.allclose(v, u, atol=1e-12)), np.zeros_like(probe))
        if not np.allclose(mirror, same, rtol=rtol, atol=0):
            return False
    return True


def jump_intensity(measure: LevyMeasure, eps):
    """M({|x| >= eps}), with atoms counted exactly."""
    dec = measure.decompose()
    total = 0.0
    if len(dec.masses):
        total += float(dec.masses[np.linalg.norm(dec.points, axis=1) >= eps].sum())
    for ray in dec.rays:
        total += float(ray.tail(np.array([eps]))[0])
    return total
