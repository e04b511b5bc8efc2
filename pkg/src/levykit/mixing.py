"""lambda-mixtures of Levy measures and their integrability criteria.

A mixing measure lambda lives on (0, inf).  Its mixture of a Levy measure M
is ``M^(lambda)(A) = int (T_t M)(A) lambda(dt)``.  Every criterion below is
evaluated in the x-outer form

    int [ |x|^2 int_0^{1/|x|} t^2 lambda(dt) + Lambda(1/|x|) ] M(dx),

which is the t-outer form after Tonelli, so that the inner lambda integrals
are closed-form partial moments for the built-in mixing measures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import special as sc

from ._quadrature import quad, tail_integral
from .exceptions import AlphaOutOfRange, InvalidMeasure, NonPositiveRadius, NotLevyMixture
from .levy_core import (
    Atoms,
    Decomposition,
    Dilated,
    Exp,
    LevyMeasure,
    PowerExp,
    RadialFamily,
    Ray,
    Scaled,
    Sum,
    validate_levy_measure,
)
from .special import lower_gamma, upper_gamma

INNER_RTOL = 1e-10
OUTER_RTOL = 1e-8


# ------------------------------------------------------------ mixing measures

class MixingMeasure:
    """Borel measure on (0, inf), finite on every (a, inf) with a > 0."""

    def tail(self, t):
        """Lambda(t) = lambda((t, inf))."""
        t = np.asarray(t, dtype=float)
        out = np.vectorize(lambda s: self.partial_moment(0.0, s, math.inf), otypes=[float])(t)
        return out[()] if out.ndim == 0 else out

    def partial_moment(self, p, lo, hi):
        """int_{lo < t <= hi} t^p lambda(dt); may be inf."""
        raise NotImplementedError

    def partial_moments(self, p, lo, hi):
        """Vectorized :meth:`partial_moment` over broadcast ``lo`` and ``hi``."""
        f = np.vectorize(lambda a, b: self.partial_moment(p, a, b), otypes=[float])
        out = f(lo, hi)
        return out[()] if out.ndim == 0 else out

    def moment(self, p):
        return self.partial_moment(p, 0.0, math.inf)

    def integrate(self, f, rtol=OUTER_RTOL, atol=1e-12, points=()):
        """int f(t) lambda(dt) for vectorized f: (n,) -> (n,) or (n, m)."""
        raise NotImplementedError

    def radial_family(self) -> RadialFamily:
        """The density of lambda viewed as a radial law (for mixtures of atoms)."""
        raise NotImplementedError

    def to_dict(self):
        raise InvalidMeasure(f"{type(self).__name__} has no JSON form")

    @property
    def is_discrete(self):
        return False

    def __add__(self, other):
        return MixingSum([self, other])


class PointMasses(MixingMeasure):
    def __init__(self, times, masses=None):
        times = np.atleast_1d(np.asarray(times, dtype=float))
        masses = np.ones_like(times) if masses is None else np.atleast_1d(np.asarray(masses, dtype=float))
        if times.shape != masses.shape:
            raise InvalidMeasure("times and masses differ in length")
        if np.any(times <= 0) or not np.all(np.isfinite(times)):
            raise InvalidMeasure("point-mass locations must lie in (0, inf)")
        if np.any(masses < 0) or not np.all(np.isfinite(masses)):
            raise InvalidMeasure("point masses must be finite and nonnegative")
        self.times, self.masses = times, masses

    @property
    def is_discrete(self):
        return True

    def tail(self, t):
        t = np.asarray(t, dtype=float)
        out = (self.masses[None, :] * (self.times[None, :] > t.reshape(-1, 1))).sum(axis=1)
        return out.reshape(t.shape)[()]

    def partial_moment(self, p, lo, hi):
        sel = (self.times > lo) & (self.times <= hi)
        return float(np.sum(self.masses[sel] * self.times[sel] ** p))

    def partial_moments(self, p, lo, hi):
        lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
        t = self.times
        sel = (t > lo[..., None]) & (t <= hi[..., None])
        return (sel * (self.masses * t ** p)).sum(axis=-1)[()]

    def integrate(self, f, rtol=OUTER_RTOL, atol=1e-12, points=()):
        vals = np.asarray(f(self.times))
        return np.tensordot(self.masses, vals, axes=(0, 0))

    def to_dict(self):
        return {"kind": "point_masses", "times": self.times.tolist(), "masses": self.masses.tolist()}

    def __repr__(self):
        return f"PointMasses(times={self.times.tolist()}, masses={self.masses.tolist()})"


def _decade_points(points, lo, hi):
    # a kink far below 1 sits at the start of a long power-law stretch; decade
    # breakpoints from it up to 1 keep that stretch resolvable
    pts = set()
    for p in points:
        if 0 < p < 1e-3:
            pts |= set(np.geomspace(p, 1.0, int(-np.log10(p)) + 1).tolist())
        pts.add(float(p))
    return sorted(p for p in pts if lo < p < hi)


class PowerExpDensity(MixingMeasure):
    """lambda(dt) = c t^p exp(-rate t) dt on (lo, hi)."""

    def __init__(self, coef=1.0, power=0.0, rate=0.0, lo=0.0, hi=math.inf):
        if coef < 0 or rate < 0 or not 0 <= lo < hi:
            raise InvalidMeasure("need coef >= 0, rate >= 0 and 0 <= lo < hi")
        self.coef, self.power, self.rate = float(coef), float(power), float(rate)
        self.lo, self.hi = float(lo), float(hi)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t > self.lo) & (t < self.hi)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = self.coef * np.exp(self.power * np.log(t) - self.rate * t)
        return np.where(inside, out, 0.0)

    def partial_moment(self, p, lo, hi):
        lo, hi = max(float(lo), self.lo), min(float(hi), self.hi)
        if lo >= hi or self.coef == 0:
            return 0.0
        s = p + self.power + 1.0
        if lo == 0 and s <= 0:
            return math.inf
        if self.rate > 0:
            a, b = self.rate * lo, self.rate * hi
            if s > 0 and b <= s + 1.0:
                diff = lower_gamma(s, b) - (lower_gamma(s, a) if a > 0 else 0.0)
            else:
                diff = upper_gamma(s, a) - upper_gamma(s, b)
            return float(self.coef * self.rate ** -s * diff)
        if math.isinf(hi) and s >= 0:
            return math.inf
        if s == 0:
            return self.coef * math.log(hi / lo)
        top = 0.0 if math.isinf(hi) else hi ** s
        bot = 0.0 if lo == 0 else lo ** s
        return self.coef * (top - bot) / s

    def integrate(self, f, rtol=OUTER_RTOL, atol=1e-12, points=()):
        def g(t):
            val = np.asarray(f(t))
            d = self.density(t)
            if val.ndim == 2:
                d = d[:, None]
            with np.errstate(invalid="ignore", over="ignore"):
                return np.where((d == 0) | (val == 0), 0.0, val * d)
        hi = self._effective_hi()
        pts = _decade_points([1.0, *points], self.lo, hi)
        return quad(g, self.lo, hi, points=pts, singular=(0.0,) if self.lo == 0 else (),
                    rtol=rtol, atol=atol).value

    def _effective_hi(self):
        # Integrands here grow at most polynomially (log-CFs, shell moments), so
        # the part of an exponentially decaying density beyond T with
        # T^(p+4) exp(-rate T) = e^-75 is below 1e-30 and is dropped.  This
        # also keeps log-CF evaluations away from absurd frequencies.
        if not (math.isinf(self.hi) and self.rate > 0):
            return self.hi
        T = 75.0 / self.rate
        for _ in range(8):
            T = (75.0 + (max(self.power, 0.0) + 4.0) * math.log(max(T * self.rate, 1.0))) / self.rate
        return max(self.lo + T, 2.0 * self.lo)

    def radial_family(self):
        return _PowerExpRadial(self)

    def to_dict(self):
        d = {"kind": "density", "form": "power_exp", "coef": self.coef, "power": self.power,
             "rate": self.rate, "lo": self.lo}
        d["hi"] = None if math.isinf(self.hi) else self.hi
        return d

    def __repr__(self):
        return (f"PowerExpDensity(coef={self.coef}, power={self.power}, rate={self.rate}, "
                f"lo={self.lo}, hi={self.hi})")


class Exponential(PowerExpDensity):
    """e(dt) = exp(-t) dt."""

    def __init__(self):
        super().__init__(1.0, 0.0, 1.0)

    def tail(self, t):
        return np.exp(-np.maximum(np.asarray(t, dtype=float), 0.0))[()]

    def radial_family(self):
        return Exp(1.0)

    def to_dict(self):
        return {"kind": "exponential"}

    def __repr__(self):
        return "Exponential()"


class RhoAlpha(PowerExpDensity):
    """rho_alpha(dt) = t^(-alpha-1) exp(-t) dt."""

    def __init__(self, alpha):
        if not 0 < alpha < 2:
            raise AlphaOutOfRange("rho_alpha needs 0 < alpha < 2")
        super().__init__(1.0, -alpha - 1.0, 1.0)
        self.alpha = float(alpha)

    def tail(self, t):
        return upper_gamma(-self.alpha, np.asarray(t, dtype=float))

    def radial_family(self):
        return PowerExp(self.alpha, 1.0)

    def to_dict(self):
        return {"kind": "rho_alpha", "alpha": self.alpha}

    def __repr__(self):
        return f"RhoAlpha({self.alpha})"


class GeneralDensity(MixingMeasure):
    """lambda(dt) = density(t) dt for a user callable; moments by quadrature."""

    def __init__(self, density: Callable, lo=0.0, hi=math.inf):
        if not 0 <= lo < hi:
            raise InvalidMeasure("need 0 <= lo < hi")
        self._density, self.lo, self.hi = density, float(lo), float(hi)

    def density(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t > self.lo) & (t < self.hi)
        safe = np.where(inside, t, 0.5 * (self.lo + min(self.hi, self.lo + 2.0)))
        return np.where(inside, self._density(safe), 0.0)

    def partial_moment(self, p, lo, hi):
        lo, hi = max(float(lo), self.lo), min(float(hi), self.hi)
        if lo >= hi:
            return 0.0

        def f(t):
            d = self.density(t)
            with np.errstate(invalid="ignore", over="ignore"):
                return np.where(d == 0, 0.0, t ** p * d)
        total = 0.0
        a, b = lo, hi
        if a == 0:
            c = min(1.0, b)
            total += tail_integral(f, c, "zero").value
            a = c
        if math.isinf(b):
            c = max(1.0, a)
            total += tail_integral(f, c, "inf").value
            b = c
        if a < b:
            total += float(quad(f, a, b, rtol=INNER_RTOL, atol=1e-300, raise_on_fail=False).value)
        return float(total)

    integrate = PowerExpDensity.integrate

    def radial_family(self):
        return _GeneralRadial(self)


class MixingSum(MixingMeasure):
    """lambda_1 + lambda_2 + ...; used for the additivity identity."""

    def __init__(self, parts: Sequence[MixingMeasure]):
        self.parts = list(parts)

    def tail(self, t):
        return sum(p.tail(t) for p in self.parts)

    def partial_moment(self, p, lo, hi):
        return sum(q.partial_moment(p, lo, hi) for q in self.parts)

    def integrate(self, f, rtol=OUTER_RTOL, atol=1e-12, points=()):
        return sum(p.integrate(f, rtol=rtol, atol=atol, points=points) for p in self.parts)

    @property
    def is_discrete(self):
        return all(p.is_discrete for p in self.parts)

    def to_dict(self):
        return {"kind": "sum", "parts": [p.to_dict() for p in self.parts]}


def mixing_from_dict(d) -> MixingMeasure:
    kind = d["kind"]
    if kind == "point_masses":
        return PointMasses(d["times"], d.get("masses"))
    if kind == "exponential":
        return Exponential()
    if kind == "rho_alpha":
        return RhoAlpha(d["alpha"])
    if kind == "density":
        if d.get("form", "power_exp") != "power_exp":
            raise InvalidMeasure(f"unknown density form {d.get('form')!r}")
        hi = d.get("hi")
        return PowerExpDensity(d.get("coef", 1.0), d.get("power", 0.0), d.get("rate", 0.0),
                               d.get("lo", 0.0), math.inf if hi is None else hi)
    if kind == "sum":
        return MixingSum([mixing_from_dict(p) for p in d["parts"]])
    raise InvalidMeasure(f"unknown mixing kind {kind!r}")


class _PowerExpRadial(RadialFamily):
    def __init__(self, lam: PowerExpDensity):
        self.lam, self.lo, self.hi = lam, lam.lo, lam.hi

    def pdf(self, r):
        return self.lam.density(r)

    def tail(self, r0):
        return self.lam.partial_moments(0.0, np.asarray(r0, dtype=float), math.inf)


class _GeneralRadial(RadialFamily):
    def __init__(self, lam: GeneralDensity):
        self.lam, self.lo, self.hi = lam, lam.lo, lam.hi

    def pdf(self, r):
        return self.lam.density(r)


R_FLOOR = 1e-40


class MixedFamily(RadialFamily):
    """Radial density int lambda(dt) p(r/t)/t of a mixed ray."""

    certified = True

    def __init__(self, inner: RadialFamily, inner_scale, lam: MixingMeasure):
        self.inner, self.inner_scale, self.lam = inner, float(inner_scale), lam
        # Below R_FLOOR the nested integrand overflows double precision before
        # its Jacobian can tame it; the dropped piece of any Levy integral is
        # at most int_0^R_FLOOR r^2 M(dr).
        self.lo, self.hi = R_FLOOR, math.inf

    def _inner_pdf(self, r):
        return self.inner.pdf(r / self.inner_scale) / self.inner_scale

    def _scaled_pdf(self, x, t):
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            v = self._inner_pdf(x / t) / t
        return np.where(np.isfinite(v), v, 0.0)

    def _bounds(self, r):
        a, b = self.inner.lo * self.inner_scale, self.inner.hi * self.inner_scale
        return [r / x for x in (a, b) if 0 < x < math.inf]

    def pdf(self, r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.zeros(r.shape)
        for i, x in enumerate(r.ravel()):
            if x <= 0:
                continue
            val = self.lam.integrate(lambda t, x=x: self._scaled_pdf(x, t), rtol=INNER_RTOL,
                                     atol=1e-300, points=self._bounds(x))
            out.ravel()[i] = float(val)
        return out

    def tail(self, r0):
        r0 = np.atleast_1d(np.asarray(r0, dtype=float))
        probe = self.inner.tail(np.array([1.0]))
        if probe is None:
            return None
        out = np.empty(r0.shape)
        for i, x in enumerate(r0.ravel()):
            def g(t):
                return np.asarray(self.inner.tail(x / (t * self.inner_scale)), dtype=float)
            out.ravel()[i] = float(self.lam.integrate(g, rtol=INNER_RTOL, atol=1e-300,
                                                      points=self._bounds(x)))
        return out


class Mixture(LevyMeasure):
    """Lazy M^(lambda) for a continuous mixing measure.

    ``integrate`` runs the nested quadrature int int f(t x) M(dx) lambda(dt),
    inner over M and outer over lambda.  ``decompose`` exposes the same
    measure as rays: an atom of M becomes a ray whose radial law is lambda
    itself, and a ray of M becomes a ray with the mixed radial density.
    """

    def __init__(self, inner: LevyMeasure, mixing: MixingMeasure):
        self.inner, self.mixing, self.dim = inner, mixing, inner.dim

    def decompose(self):
        dec = self.inner.decompose()
        fam = None
        rays = []
        if len(dec.masses):
            fam = self.mixing.radial_family()
            rho = np.linalg.norm(dec.points, axis=1)
            for x, m, r in zip(dec.points, dec.masses, rho):
                rays.append(Ray(x / r, float(m), fam, float(r)))
        for ray in dec.rays:
            rays.append(Ray(ray.direction, ray.weight, MixedFamily(ray.family, ray.scale, self.mixing)))
        return Decomposition(np.zeros((0, self.dim)), np.zeros(0), tuple(rays))

    def integrate(self, f, rtol=OUTER_RTOL, atol=1e-12):
        def outer(ts):
            vals = [np.asarray(self.inner.integrate(lambda x, t=t: f(t * x), rtol=INNER_RTOL))
                    for t in ts]
            return np.stack(vals)
        return self.mixing.integrate(outer, rtol=rtol, atol=atol)

    def to_dict(self):
        return {"kind": "mixture", "inner": self.inner.to_dict(), "mixing": self.mixing.to_dict()}


# ----------------------------------------------------------------- criteria

@dataclass(frozen=True)
class Breakdown:
    gaussian_part_ok: bool
    small_region: float
    large_region: float


@dataclass(frozen=True)
class MixtureDiagnostic:
    is_levy: bool
    criterion_value: float
    breakdown: Breakdown

    def to_dict(self):
        def num(x):
            return None if not math.isfinite(x) else float(x)
        return {"is_levy": self.is_levy, "criterion_value": num(self.criterion_value),
                "infinite": not math.isfinite(self.criterion_value),
                "breakdown": {"gaussian_part_ok": self.breakdown.gaussian_part_ok,
                              "small_region": num(self.breakdown.small_region),
                              "large_region": num(self.breakdown.large_region),
                              "divergent_regions": [name for name, v in
                                                    (("small", self.breakdown.small_region),
                                                     ("large", self.breakdown.large_region))
                                                    if not math.isfinite(v)]}}


def _radial_sum(M: LevyMeasure, g):
    """int g(|x|) M(dx) for a nonnegative vectorized g; inf on divergence."""
    dec = M.decompose()
    total = 0.0
    if len(dec.masses):
        rho = np.linalg.norm(dec.points, axis=1)
        vals = np.asarray(g(rho), dtype=float)
        w = dec.masses > 0
        total += float(np.sum(dec.masses[w] * vals[w]))
    for ray in dec.rays:
        if ray.weight == 0:
            continue
        probe = np.asarray(g(np.geomspace(max(ray.lo, 1e-8), min(ray.hi, 1e8), 5)), dtype=float)
        if np.any(np.isinf(probe)):
            return math.inf
        total += ray.integrate_nonneg(g)
        if not math.isfinite(total):
            return math.inf
    return total


def _two_terms(M, lam, p):
    # |x|^p int_{t <= 1/|x|} t^p lambda(dt)  and  Lambda(1/|x|)
    def small(r):
        with np.errstate(divide="ignore"):
            inv = 1.0 / np.asarray(r, dtype=float)
        return np.asarray(r, dtype=float) ** p * lam.partial_moments(p, 0.0, inv)

    def large(r):
        with np.errstate(divide="ignore"):
            inv = 1.0 / np.asarray(r, dtype=float)
        return np.asarray(lam.partial_moments(0.0, inv, math.inf), dtype=float)

    return _radial_sum(M, small), _radial_sum(M, large)


def check_mixture_integrability(M: LevyMeasure, lam: MixingMeasure) -> MixtureDiagnostic:
    """Necessary and sufficient test that M^(lambda) is a Levy measure."""
    small, large = _two_terms(M, lam, 2)
    value = small + large
    gauss = math.isfinite(lam.moment(2))
    return MixtureDiagnostic(math.isfinite(value), value, Breakdown(gauss, small, large))


def banach_sufficient_check(M: LevyMeasure, lam: MixingMeasure) -> MixtureDiagnostic:
    """First-moment criterion; finiteness is sufficient but not necessary."""
    small, large = _two_terms(M, lam, 1)
    value = small + large
    gauss = math.isfinite(lam.moment(2))
    return MixtureDiagnostic(math.isfinite(value), value, Breakdown(gauss, small, large))


def small_ball_alpha_diagnostic(M: LevyMeasure, alpha, s_values=(0.1, 1.0, 10.0)):
    """int_{0<|x|<=1} |x|^alpha exp(-s/|x|) M(dx) for each s (a necessary
    condition for rho_alpha mixtures; reported only)."""
    out = {}
    for s in s_values:
        def g(r, s=s):
            r = np.asarray(r, dtype=float)
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                v = np.where(r <= 1, r ** alpha * np.exp(-s / r), 0.0)
            return np.nan_to_num(v)
        out[float(s)] = _radial_sum(M, g)
    return out


def mix(M: LevyMeasure, lam: MixingMeasure) -> LevyMeasure:
    """The lambda-mixture M^(lambda)."""
    diag = check_mixture_integrability(M, lam)
    if not diag.is_levy:
        raise NotLevyMixture("the mixture criterion integral diverges", diag)
    return _mix_unchecked(M, lam)


def _mix_unchecked(M, lam):
    if isinstance(lam, PointMasses):
        parts = []
        for t, c in zip(lam.times, lam.masses):
            part = M if t == 1 else Dilated(M, t)
            parts.append(part if c == 1 else Scaled(part, c))
        if len(parts) == 1:
            return parts[0]
        if not parts:
            return Atoms(np.zeros((0, M.dim)), [], dim=M.dim)
        return Sum(parts)
    if isinstance(lam, MixingSum):
        return Sum([_mix_unchecked(M, p) for p in lam.parts])
    return Mixture(M, lam)


def g_exponential(r):
    """2 r^2 [1 - exp(-1/r)(1 + 1/r)], written as 2 r^2 P(2, 1/r) so that
    large r loses nothing to cancellation."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise NonPositiveRadius("g needs r > 0")
    return (2.0 * r * r * sc.gammainc(2.0, 1.0 / r))[()]


def h_alpha(r, alpha):
    """r^2 gamma(2 - alpha, 1/r) + Gamma(-alpha, 1/r)."""
    if not 0 < alpha < 2:
        raise AlphaOutOfRange("h_alpha needs 0 < alpha < 2")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise NonPositiveRadius("h_alpha needs r > 0")
    return (r * r * lower_gamma(2.0 - alpha, 1.0 / r) + upper_gamma(-alpha, 1.0 / r))[()]


# -------------------------------------------------------- spectral function

@dataclass(frozen=True)
class SpectralFunctionQuery:
    """Polar wedge {x : x/|x| in D, |x| > radius}; D is a union of caps
    {u : <u, centre> >= cos(half_angle)}, or the full sphere when empty."""

    radius: float
    caps: tuple = ()

    def __post_init__(self):
        if not self.radius > 0:
            raise NonPositiveRadius("spectral function needs r > 0")
        caps = tuple((tuple(np.atleast_1d(np.asarray(c, dtype=float) / np.linalg.norm(c))), float(h))
                     for c, h in self.caps)
        object.__setattr__(self, "caps", caps)

    @classmethod
    def full(cls, radius):
        return cls(radius)

    @classmethod
    def cap(cls, centre, half_angle, radius):
        return cls(radius, ((centre, half_angle),))

    def with_radius(self, radius):
        return SpectralFunctionQuery(radius, self.caps)

    def contains(self, u):
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if not self.caps:
            return np.ones(u.shape[0], dtype=bool)
        hit = np.zeros(u.shape[0], dtype=bool)
        for c, h in self.caps:
            hit |= u @ np.asarray(c) >= math.cos(h) - 1e-15
        return hit


def _spectral_tails(M: LevyMeasure, q: SpectralFunctionQuery, radii):
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    dec = M.decompose()
    out = np.zeros(radii.shape)
    if len(dec.masses):
        rho = np.linalg.norm(dec.points, axis=1)
        dirs = dec.points / rho[:, None]
        m = dec.masses * q.contains(dirs)
        out += ((rho[None, :] > radii[:, None]) * m[None, :]).sum(axis=1)
    for ray in dec.rays:
        if ray.weight > 0 and q.contains(ray.direction)[0]:
            out += ray.tail(radii)
    return out


def levy_spectral_function(M: LevyMeasure, q: SpectralFunctionQuery) -> float:
    """L_M(D; r) = M({x : x/|x| in D, |x| > r})."""
    return float(_spectral_tails(M, q, [q.radius])[0])


def verify_laplace_identity(M: LevyMeasure, q: SpectralFunctionQuery, r_grid) -> float:
    """Max over r of |L_{M^(e)}(D; r) - r int_0^inf L_M(D; 1/s) exp(-r s) ds|."""
    mixed = mix(M, Exponential())
    dec = M.decompose()
    jumps = []
    if len(dec.masses):
        jumps = list(1.0 / np.linalg.norm(dec.points, axis=1))
    worst = 0.0
    for r in np.atleast_1d(np.asarray(r_grid, dtype=float)):
        left = levy_spectral_function(mixed, q.with_radius(r))

        def f(s, r=r):
            with np.errstate(divide="ignore"):
                inv = 1.0 / s
            return _spectral_tails(M, q, inv) * np.exp(-r * s)
        right = r * float(quad(f, 0.0, math.inf, points=jumps, rtol=1e-12, atol=1e-14).value)
        worst = max(worst, abs(left - right))
    return worst
