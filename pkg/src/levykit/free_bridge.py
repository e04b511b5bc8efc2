"""Cauchy, F and Voiculescu transforms of measures on the real line, the free
Levy-Khintchine formula, and the bridge between free transforms and the
exponential random-integral map.

Conventions: V is computed on the upper half-plane; a point in the lower
half-plane is handled through V(conj z) = conj V(z), valid for every real
measure.  The bridge identity reads

    (i t) V_nu(1 / (i t)) = log of the e-image characteristic function at t,

and 1/(i t) lies in the lower half-plane for t > 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._quadrature import quad
from .exceptions import ConsistencyError, InvalidMeasure, InversionDiverged, NonConvergedQuadrature
from .integral_map import free_log_cf
from .levy_core import LevyMeasure, LevyTriplet, as_points

NEWTON_TOL = 1e-12
NEWTON_MAXITER = 100
G_RTOL = 1e-13
# iterates this close to the real axis mean z lies outside the range of F
AXIS_GAP = 1e-6


@dataclass(frozen=True)
class HalfPlanePoint:
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if abs(z.imag) < 1e-9:
            raise ValueError("point must stay off the real axis (|Im z| >= 1e-9)")
        object.__setattr__(self, "z", z)


def _as_complex(z):
    return z.z if isinstance(z, HalfPlanePoint) else HalfPlanePoint(z).z


@dataclass(frozen=True, eq=False)
class DensityPart:
    fn: Callable
    lo: float
    hi: float
    singular: tuple = ()
    # optional closed form w -> (G, G') of this part on the upper half-plane
    transform: Callable = None


@dataclass(frozen=True, eq=False)
class RealMeasure:
    """Finite positive measure on R: atoms plus densities on intervals."""

    points: np.ndarray = field(default_factory=lambda: np.zeros(0))
    masses: np.ndarray = field(default_factory=lambda: np.zeros(0))
    densities: tuple = ()
    family: tuple = ()   # (name, params) for built-in families, used by free_power

    def __post_init__(self):
        pts = np.atleast_1d(np.asarray(self.points, dtype=float))
        ms = np.atleast_1d(np.asarray(self.masses, dtype=float))
        if pts.shape != ms.shape:
            raise InvalidMeasure("points and masses differ in length")
        if np.any(ms < 0):
            raise InvalidMeasure("masses must be nonnegative")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "masses", ms)

    @property
    def total_mass(self):
        total = float(self.masses.sum())
        for part in self.densities:
            total += float(quad(part.fn, part.lo, part.hi, singular=part.singular,
                                rtol=1e-12, atol=1e-14).value)
        return total

    # built-in families -------------------------------------------------
    @classmethod
    def atoms(cls, points, masses):
        return cls(points, masses)

    @classmethod
    def point_mass(cls, c=0.0, mass=1.0):
        return cls([c], [mass], family=("point", (float(c),)) if mass == 1 else ())

    @classmethod
    def semicircle(cls, variance=1.0, centre=0.0):
        """Semicircle law with the given variance (radius 2 sqrt(variance))."""
        if variance <= 0:
            raise InvalidMeasure("variance must be positive")
        rad = 2.0 * math.sqrt(variance)

        def fn(x):
            return np.sqrt(np.maximum(rad * rad - (x - centre) ** 2, 0.0)) / (2.0 * math.pi * variance)
        def transform(w):
            u = w - centre
            root = np.sqrt(u - rad) * np.sqrt(u + rad)
            # (u - root) / (2 variance) without cancellation for large |u|
            den = u + root
            return 2.0 / den, -2.0 * (1.0 + u / root) / (den * den)
        part = DensityPart(fn, centre - rad, centre + rad, (centre - rad, centre + rad), transform)
        return cls(densities=(part,), family=("semicircle", (float(variance), float(centre))))

    @classmethod
    def free_poisson(cls, rate=1.0, jump=1.0):
        """Marchenko-Pastur law with rate ``rate`` and jump size ``jump``."""
        if rate <= 0 or jump <= 0:
            raise InvalidMeasure("rate and jump must be positive")
        a = jump * (1.0 - math.sqrt(rate)) ** 2
        b = jump * (1.0 + math.sqrt(rate)) ** 2

        def fn(x):
            return np.sqrt(np.maximum((b - x) * (x - a), 0.0)) / (2.0 * math.pi * jump * x)
        def transform(w):
            # continuous part only: the full transform minus the atom (1 - rate)/w
            u = w / jump
            root = np.sqrt(u - a / jump) * np.sqrt(u - b / jump)
            droot = ((u - a / jump) + (u - b / jump)) / (2.0 * root)
            # (u + 1 - rate - root) / (2 u) without cancellation for large |u|
            den = u + 1.0 - rate + root
            g = 2.0 / den
            dg = -2.0 * (1.0 + droot) / (den * den)
            if rate < 1:
                g = g - (1.0 - rate) / u
                dg = dg + (1.0 - rate) / (u * u)
            return g / jump, dg / (jump * jump)
        part = DensityPart(fn, a, b, (a, b), transform)
        pts, ms = ([0.0], [1.0 - rate]) if rate < 1 else ([], [])
        return cls(pts, ms, (part,), family=("free_poisson", (float(rate), float(jump))))

    @classmethod
    def cauchy(cls, scale=1.0, loc=0.0):
        def fn(x):
            with np.errstate(over="ignore"):
                return scale / (math.pi * ((x - loc) ** 2 + scale * scale))
        def transform(w):
            g = 1.0 / (w - loc + 1j * scale)
            return g, -g * g
        return cls(densities=(DensityPart(fn, -math.inf, math.inf, (), transform),),
                   family=("cauchy", (float(scale), float(loc))))

    def free_power(self, s):
        """nu^{boxplus s} for the built-in families (V scales by s)."""
        if s <= 0:
            raise ValueError("free powers need s > 0")
        if not self.family:
            raise InvalidMeasure("free powers are only available for built-in families")
        name, p = self.family
        if name == "semicircle":
            return RealMeasure.semicircle(p[0] * s, p[1] * s)
        if name == "free_poisson":
            return RealMeasure.free_poisson(p[0] * s, p[1])
        if name == "point":
            return RealMeasure.point_mass(p[0] * s)
        if name == "cauchy":
            return RealMeasure.cauchy(p[0] * s, p[1] * s)
        raise InvalidMeasure(f"no free power for family {name!r}")


def _g_and_dg(mu: RealMeasure, w: complex, quadrature=False):
    g = complex(np.sum(mu.masses / (w - mu.points)))
    dg = complex(-np.sum(mu.masses / (w - mu.points) ** 2))
    for part in mu.densities:
        if part.transform is not None and not quadrature:
            flip = w.imag < 0
            pg, pdg = part.transform(w.conjugate() if flip else w)
            g += complex(pg).conjugate() if flip else complex(pg)
            dg += complex(pdg).conjugate() if flip else complex(pdg)
            continue
        pts = [w.real] + [w.real + k * abs(w.imag) for k in (-10.0, 10.0)]
        if math.isinf(part.lo) or math.isinf(part.hi):
            pts += [-10.0 / abs(w.imag), 10.0 / abs(w.imag)]
        pts = [p for p in pts if part.lo < p < part.hi]

        def f(t):
            inv = 1.0 / (w - t)
            dens = part.fn(t)
            return np.stack([inv * dens, -(inv * inv) * dens], axis=1)
        res = quad(f, part.lo, part.hi, points=pts, singular=part.singular,
                   rtol=G_RTOL, atol=1e-15, raise_on_fail=False)
        val = res.value
        if not res.converged and res.error > 1e-10 * max(1e-300, float(np.max(np.abs(val)))):
            raise NonConvergedQuadrature("Cauchy transform quadrature failed", val, res.error)
        g += complex(val[0])
        dg += complex(val[1])
    return g, dg


def cauchy_transform(mu: RealMeasure, z, quadrature=False) -> complex:
    """G_mu(z) = int mu(dt) / (z - t).

    Built-in families use their closed forms unless ``quadrature`` is set,
    which forces adaptive quadrature of the density (the test oracle).
    """
    return _g_and_dg(mu, _as_complex(z), quadrature)[0]


def f_transform(mu: RealMeasure, z) -> complex:
    return 1.0 / cauchy_transform(mu, z)


def inverse_f(mu: RealMeasure, z) -> complex:
    """Solve F_mu(w) = z for w on the same side as z by damped Newton."""
    z = _as_complex(z)
    flip = z.imag < 0
    if flip:
        z = z.conjugate()
    w = z
    tol = NEWTON_TOL * max(1.0, abs(z))
    for _ in range(NEWTON_MAXITER):
        try:
            g, dg = _g_and_dg(mu, w)
        except NonConvergedQuadrature as exc:
            raise InversionDiverged(f"Newton iterate {w} too close to the support") from exc
        if g == 0:
            raise InversionDiverged("Cauchy transform vanished during Newton iteration")
        res = 1.0 / g - z
        if abs(res) <= tol:
            return w.conjugate() if flip else w
        step = res / (-dg / (g * g))
        lam = 1.0
        for _ in range(30):
            cand = w - lam * step
            if cand.imag >= AXIS_GAP * max(1.0, abs(z)):
                try:
                    gc, _ = _g_and_dg(mu, cand)
                except NonConvergedQuadrature:
                    gc = 0
                if gc != 0 and abs(1.0 / gc - z) < abs(res):
                    break
            lam *= 0.5
        else:
            raise InversionDiverged(f"Newton stalled while inverting F at z = {z}")
        w = cand
    raise InversionDiverged(f"Newton did not converge in {NEWTON_MAXITER} iterations at z = {z}")


def voiculescu_transform(mu: RealMeasure, z) -> complex:
    """V_mu(z) = F_mu^{-1}(z) - z."""
    z = _as_complex(z)
    return inverse_f(mu, z) - z


def voiculescu_scaled(nu: RealMeasure, z, max_halvings=40):
    """V_nu(z), falling back to V_nu = V_{nu^{boxplus s}} / s for built-in
    families when z lies outside the range of F_nu."""
    try:
        return voiculescu_transform(nu, z)
    except InversionDiverged:
        if not nu.family:
            raise
    s = 1.0
    for _ in range(max_halvings):
        s *= 0.5
        try:
            return voiculescu_transform(nu.free_power(s), z) / s
        except InversionDiverged:
            continue
    raise InversionDiverged(f"no free power of nu brings z = {z} into the range of F")


def _free_kernel_complex(w, inside):
    # 1/(1 - w) - 1 - w 1{inside}
    return np.where(inside, w * w / (1.0 - w), w / (1.0 - w))


def free_levy_khintchine(t: LevyTriplet, z) -> complex:
    """a z + sigma^2 z^2 + int (1/(1 - z x) - 1 - z x 1_B(x)) M(dx), d = 1."""
    if t.dim != 1:
        raise ValueError("the free Levy-Khintchine formula is one-dimensional")
    z = complex(z)
    val = t.shift[0] * z + t.covariance[0, 0] * z * z
    dec = t.levy_measure.decompose()
    if len(dec.masses):
        x = dec.points[:, 0]
        val += complex(np.sum(dec.masses * _free_kernel_complex(z * x, np.abs(x) <= 1.0)))
    for ray in dec.rays:
        u = ray.direction[0]
        val += complex(ray.integrate(lambda r: _free_kernel_complex(z * u * r, r <= 1.0),
                                     points=(1.0,)).value)
    return val


def bridge_check(t: LevyTriplet, nu: RealMeasure, t_grid, form="scaled") -> float:
    """Max modulus discrepancy between the free transform of nu and the
    e-image log characteristic function of the classical triplet.

    ``form="scaled"`` compares (i t) V_nu(1/(i t)) with log phi(t);
    ``form="voiculescu"`` compares V_nu(i t) with i t log phi(-1/t).
    """
    worst = 0.0
    for s in np.atleast_1d(np.asarray(t_grid, dtype=float)):
        if form == "scaled":
            lhs = 1j * s * voiculescu_scaled(nu, 1.0 / (1j * s))
            rhs = free_log_cf(t, s)
        elif form == "voiculescu":
            lhs = voiculescu_scaled(nu, 1j * s)
            rhs = 1j * s * free_log_cf(t, -1.0 / s)
        else:
            raise ValueError(f"unknown form {form!r}")
        worst = max(worst, abs(lhs - rhs))
    return worst


def compound_poisson_f(m, y, check_tol=1e-10) -> complex:
    """F_m(y) = int i<y,x> / (1 - i<y,x>) m(dx) for a finite measure m.

    The alternative form int 1/(1 - i<y,x>) m(dx) - m(total) is computed as
    well and must agree to ``check_tol``.
    """
    if isinstance(m, RealMeasure):
        y = float(np.asarray(y).ravel()[0])
        direct = complex(np.sum(m.masses * (1j * y * m.points) / (1.0 - 1j * y * m.points)))
        gform = complex(np.sum(m.masses / (1.0 - 1j * y * m.points)))
        total = float(m.masses.sum())
        for part in m.densities:
            def f(x, part=part):
                dens = part.fn(x)
                k = 1.0 / (1.0 - 1j * y * x)
                return np.stack([(1j * y * x) * k * dens, k * dens, dens + 0j], axis=1)
            val = quad(f, part.lo, part.hi, singular=part.singular, rtol=1e-13, atol=1e-15).value
            direct += complex(val[0])
            gform += complex(val[1])
            total += float(val[2].real)
    elif isinstance(m, LevyMeasure):
        Y, _ = as_points(y, m.dim)
        yv = Y[0]

        def f(x):
            w = 1j * (x @ yv)
            k = 1.0 / (1.0 - w)
            return np.stack([w * k, k, np.ones_like(k)], axis=1)
        val = np.asarray(m.integrate(f, rtol=1e-13, atol=1e-15)) if not m.is_zero() else np.zeros(3, complex)
        direct, gform, total = complex(val[0]), complex(val[1]), float(np.real(val[2]))
    else:
        raise TypeError("m must be a RealMeasure or a LevyMeasure")
    alt = gform - total
    if abs(alt - direct) > check_tol * max(1.0, abs(direct)):
        raise ConsistencyError(f"compound Poisson forms disagree: {direct} vs {alt}")
    return direct
