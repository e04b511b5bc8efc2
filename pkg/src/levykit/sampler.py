"""Monte Carlo realisation of Levy processes and of the random integral
int t dY(Lambda(t)), plus the CF-level stable-limit experiment.

Jumps smaller than the truncation radius eps are removed.  In the
compensated convention used throughout the package their contribution has
mean zero, so removal needs no drift fix; optionally their covariance is
put back as a Gaussian.  The random integral over a grid t_0 < ... < t_K is

    sum_i t_i^ (Y(Lambda(t_i)) - Y(Lambda(t_{i+1}))),   t_i^ = sqrt(t_i t_{i+1}),

whose cells are independent with laws mu^{*Delta_i}, Delta_i = Lambda(t_i) -
Lambda(t_{i+1}).  The piece below t_0 is replaced by its mean.

Randomness is counter based: draw chunk j of a batch uses a Philox stream
keyed by (seed, j), so output does not depend on the number of threads.
"""
from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate as si
from scipy import special as sc

from ._quadrature import quad
from .exceptions import (
    AlphaOutOfRange,
    EmptyBatch,
    EmptyJumpDistribution,
    ExistenceFailed,
    GridTooCoarse,
    NotInIDAlpha,
)
from .integral_map import CharFn, check_existence, map_cf
from .levy_core import (
    Atoms,
    Decomposition,
    LevyMeasure,
    LevyTriplet,
    RadialFamily,
    Ray,
    as_points,
    levy_exponent,
    radial_moment,
)
from .mixing import Exponential, MixingMeasure, PointMasses, RhoAlpha

CHUNK = 4096
DEFAULT_EPS = 1e-3


@dataclass(frozen=True)
class SimulationScheme:
    jump_truncation: float = DEFAULT_EPS
    gaussian_correction: bool | None = None   # None: decide from the measure
    time_grid: tuple | None = None            # None: default grid for the mixing measure
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.jump_truncation <= 1:
            raise ValueError("jump_truncation must lie in (0, 1]")
        if self.time_grid is not None:
            g = np.asarray(self.time_grid, dtype=float)
            if g.ndim != 1 or len(g) < 2 or np.any(g <= 0) or np.any(np.diff(g) <= 0) \
                    or not np.all(np.isfinite(g)):
                raise ValueError("time_grid must be strictly increasing inside (0, inf)")
            object.__setattr__(self, "time_grid", tuple(float(x) for x in g))
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "seed", int(self.seed))

    def refined(self, lam: MixingMeasure):
        """Half the truncation radius and twice the grid density."""
        g = np.asarray(self.time_grid or default_time_grid(lam))
        mid = np.sqrt(g[:-1] * g[1:])
        grid = np.sort(np.concatenate([g, mid]))
        return SimulationScheme(self.jump_truncation / 2, self.gaussian_correction, tuple(grid), self.seed)

    def to_dict(self):
        d = asdict(self)
        d["time_grid"] = None if self.time_grid is None else list(self.time_grid)
        return d


def default_time_grid(lam: MixingMeasure):
    grid = np.geomspace(1e-4, 50.0, 400)
    if isinstance(lam, RhoAlpha):
        grid = np.union1d(grid, np.geomspace(1e-4, 1e-1, 200))
    return grid


# ---------------------------------------------------------- truncated model

class _Restricted(RadialFamily):
    """A radial family with the mass below ``cut`` removed."""

    def __init__(self, inner: RadialFamily, cut):
        self.inner, self.cut = inner, float(cut)
        self.lo, self.hi = max(inner.lo, self.cut), inner.hi

    def pdf(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r >= self.cut, self.inner.pdf(r), 0.0)

    def tail(self, r0):
        t = self.inner.tail(np.maximum(np.asarray(r0, dtype=float), self.cut))
        return t

    def sample(self, rng, n, r_min):
        return self.inner.sample(rng, n, max(r_min, self.cut))


class Truncated(LevyMeasure):
    """M restricted to {|x| >= eps}."""

    def __init__(self, inner: LevyMeasure, eps):
        self.inner, self.eps, self.dim = inner, float(eps), inner.dim

    def decompose(self):
        dec = self.inner.decompose()
        keep = np.linalg.norm(dec.points, axis=1) >= self.eps if len(dec.masses) else np.zeros(0, bool)
        rays = tuple(Ray(r.direction, r.weight, _Restricted(r.family, self.eps / r.scale), r.scale)
                     for r in dec.rays if r.hi > self.eps)
        return Decomposition(dec.points[keep], dec.masses[keep], rays)


@dataclass(frozen=True, eq=False)
class JumpModel:
    """Sampling form of the eps-truncated law: drift, covariance, big jumps."""

    drift: np.ndarray          # a - int_{eps <= |x| <= 1} x M(dx)
    covariance: np.ndarray     # R, plus small-jump covariance when corrected
    rate: float                # M(|x| >= eps)
    atoms: np.ndarray
    atom_masses: np.ndarray
    rays: tuple
    ray_masses: np.ndarray
    truncated: LevyTriplet     # same law as a triplet, for analytic CFs

    def sample_jumps(self, rng, n):
        """n jumps from M restricted to {|x| >= eps}, normalised."""
        d = len(self.drift)
        if n == 0:
            return np.zeros((0, d))
        if self.rate <= 0:
            raise EmptyJumpDistribution("no jumps above the truncation radius")
        probs = np.concatenate([self.atom_masses, self.ray_masses]) / self.rate
        comp = rng.choice(len(probs), size=n, p=probs)
        out = np.empty((n, d))
        k = len(self.atom_masses)
        if k:
            sel = comp < k
            out[sel] = self.atoms[comp[sel]]
        for j, ray in enumerate(self.rays):
            sel = comp == k + j
            m = int(sel.sum())
            if m:
                r = ray.sample_radius(rng, m, ray.lo)
                out[sel] = r[:, None] * ray.direction[None, :]
        return out


def jump_model(t: LevyTriplet, eps, gaussian_correction=None) -> JumpModel:
    M = t.levy_measure
    d = t.dim
    dec = M.decompose()
    drift = np.array(t.shift, dtype=float)
    small_cov = np.zeros((d, d))
    pts, ms = np.zeros((0, d)), np.zeros(0)
    if len(dec.masses):
        rho = np.linalg.norm(dec.points, axis=1)
        big = rho >= eps
        pts, ms = dec.points[big], dec.masses[big]
        mid = big & (rho <= 1)
        drift -= dec.masses[mid] @ dec.points[mid]
        small = ~big
        small_cov += (dec.points[small] * dec.masses[small, None]).T @ dec.points[small]
    rays, rmass = [], []
    small_first = 0.0
    for ray in dec.rays:
        if ray.weight == 0:
            continue
        u = ray.direction
        if ray.lo < min(1.0, ray.hi) and ray.hi > eps:
            drift -= ray.integrate(lambda r: r, lo=eps, hi=1.0).value * u
        if ray.lo < eps:
            small_cov += ray.integrate(lambda r: r * r, hi=eps).value * np.outer(u, u)
            small_first += ray.integrate_nonneg(lambda r: r, hi=eps)
        if ray.hi > eps:
            restricted = Ray(u, ray.weight, _Restricted(ray.family, eps / ray.scale), ray.scale)
            mass = float(restricted.tail(np.array([eps]))[0])
            if mass > 0:
                rays.append(restricted)
                rmass.append(mass)
    if gaussian_correction is None:
        gaussian_correction = not math.isfinite(small_first)
    cov = np.array(t.covariance, dtype=float) + (small_cov if gaussian_correction else 0.0)
    cov = 0.5 * (cov + cov.T)
    rate = float(ms.sum() + sum(rmass))
    if rate == 0 and _has_mass(M):
        raise EmptyJumpDistribution("the truncation removes every jump; lower jump_truncation")
    truncated = LevyTriplet(t.shift, cov, Truncated(M, eps))
    return JumpModel(drift, cov, rate, pts, ms, tuple(rays), np.asarray(rmass, dtype=float), truncated)


def simulate_levy_increments(t: LevyTriplet, dt_list, scheme: SimulationScheme, rng=None):
    """Independent increments Y(s + dt) - Y(s) for each dt in ``dt_list``."""
    dts = np.atleast_1d(np.asarray(dt_list, dtype=float))
    if np.any(dts < 0) or not np.all(np.isfinite(dts)):
        raise ValueError("time lengths must be finite and nonnegative")
    rng = _generator(rng, scheme.seed)
    jm = jump_model(t, scheme.jump_truncation, scheme.gaussian_correction)
    d = t.dim
    out = dts[:, None] * jm.drift[None, :]
    if np.any(jm.covariance):
        chol = _cholesky(jm.covariance)
        out += np.sqrt(dts)[:, None] * (rng.standard_normal((len(dts), d)) @ chol.T)
    if jm.rate > 0:
        counts = rng.poisson(jm.rate * dts)
        jumps = jm.sample_jumps(rng, int(counts.sum()))
        owner = np.repeat(np.arange(len(dts)), counts)
        for k in range(d):
            out[:, k] += np.bincount(owner, weights=jumps[:, k], minlength=len(dts))
    return out


def _has_mass(M):
    dec = M.decompose()
    return bool(np.any(dec.masses > 0) or any(r.weight > 0 for r in dec.rays))


def _cholesky(cov):
    w, v = np.linalg.eigh(cov)
    return v * np.sqrt(np.clip(w, 0.0, None))[None, :]


def _generator(rng, seed, chunk=0):
    if isinstance(rng, np.random.Generator):
        return rng
    key = int(seed if rng is None else rng)
    return np.random.Generator(np.random.Philox(key=key + (chunk << 64)))


# ------------------------------------------------------------ random integral

@dataclass(frozen=True, eq=False)
class Cells:
    weights: np.ndarray   # t_i^
    lengths: np.ndarray   # Delta_i
    drift0: np.ndarray    # mean of the piece below the grid
    segment: np.ndarray   # segment index of each cell


def _cells(t: LevyTriplet, lam: MixingMeasure, scheme: SimulationScheme, segments=()):
    if isinstance(lam, PointMasses):
        w, L = lam.times.copy(), lam.masses.copy()
        seg = np.searchsorted(np.asarray(segments, dtype=float), w, side="right")
        return Cells(w, L, np.zeros(t.dim), seg)
    grid = np.asarray(scheme.time_grid or default_time_grid(lam), dtype=float)
    tails = np.asarray(lam.tail(grid), dtype=float)
    L = np.maximum(tails[:-1] - tails[1:], 0.0)
    w = np.sqrt(grid[:-1] * grid[1:])
    seg = np.searchsorted(np.asarray(segments, dtype=float), w, side="right")
    mean = _mean_vector(t)
    drift0 = np.zeros(t.dim)
    if np.any(mean != 0):
        drift0 = mean * lam.partial_moment(1.0, 0.0, grid[0])
    return Cells(w, L, drift0, seg)


def _mean_vector(t: LevyTriplet):
    """E Y(1) = a + int_{|x|>1} x M(dx) (zero for symmetric jump parts)."""
    M = t.levy_measure
    dec = M.decompose()
    out = np.array(t.shift, dtype=float)
    if len(dec.masses):
        rho = np.linalg.norm(dec.points, axis=1)
        out += dec.masses[rho > 1] @ dec.points[rho > 1]
    for ray in dec.rays:
        if ray.hi > 1:
            out += ray.integrate(lambda r: r, lo=1.0).value * ray.direction
    return out


@dataclass(frozen=True, eq=False)
class SampleBatch:
    draws: np.ndarray
    scheme: SimulationScheme
    target: dict
    partials: np.ndarray | None = None     # (n, segments, d) when segments were requested
    declared_bias: float = 0.0

    @property
    def n(self):
        return self.draws.shape[0]

    def scheme_json(self):
        return json.dumps({"scheme": self.scheme.to_dict(), "target": self.target,
                           "declared_bias": self.declared_bias}, indent=2)

    def to_csv(self, path, scheme_path=None):
        d = self.draws.shape[1]
        with open(path, "w", newline="") as fh:
            fh.write("# levykit sample batch v1\n")
            w = csv.writer(fh)
            w.writerow([f"x{k + 1}" for k in range(d)])
            for row in self.draws:
                w.writerow([repr(float(v)) for v in row])
        if scheme_path is not None:
            with open(scheme_path, "w") as fh:
                fh.write(self.scheme_json())


def _threads(threads):
    if threads is None:
        threads = int(os.environ.get("LEVYKIT_THREADS", "1") or 1)
    return max(1, int(threads))


def sample_random_integral(t: LevyTriplet, lam: MixingMeasure, scheme: SimulationScheme, n,
                           rng=None, *, segments=(), threads=None, bias_grid=None,
                           check_grid=True):
    """n draws of int t dY(Lambda(t)) on the scheme's grid."""
    report = check_existence(t, lam)
    if not report.exists:
        raise ExistenceFailed("random integral does not exist: " + "; ".join(report.failed()), report)
    n = int(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    seed = scheme.seed if rng is None else (
        int(rng.integers(0, 2 ** 63)) if isinstance(rng, np.random.Generator) else int(rng))
    d = t.dim
    target = {"triplet": _safe_dict(t), "mixing": _safe_dict(lam)}
    if n == 0:
        return SampleBatch(np.zeros((0, d)), scheme, target,
                           np.zeros((0, len(segments) + 1, d)) if segments else None, 0.0)
    jm = jump_model(t, scheme.jump_truncation, scheme.gaussian_correction)
    cells = _cells(t, lam, scheme, segments)
    nseg = len(segments) + 1
    bias = 0.0
    if not isinstance(lam, PointMasses):
        ys = _bias_grid(d, bias_grid)
        exact = np.exp(map_cf(CharFn.from_triplet(t), lam).log_cf(ys))
        approx = np.exp(scheme_log_cf(jm, cells, ys))
        bias = float(np.max(np.abs(approx - exact)))
        if check_grid:
            fine = scheme.refined(lam)
            jm2 = jump_model(t, fine.jump_truncation, fine.gaussian_correction)
            shift = np.max(np.abs(np.exp(scheme_log_cf(jm2, _cells(t, lam, fine, segments), ys)) - approx))
            if shift > 3.0 / math.sqrt(n):
                raise GridTooCoarse(f"refining the scheme moves the CF by {shift:.3g} "
                                    f"> Monte Carlo band {3 / math.sqrt(n):.3g}")

    # per-segment Gaussian parameters
    seg_mean = np.zeros((nseg, d))
    seg_var = np.zeros(nseg)
    for s in range(nseg):
        sel = cells.segment == s
        seg_mean[s] = jm.drift * np.sum(cells.weights[sel] * cells.lengths[sel])
        seg_var[s] = np.sum(cells.weights[sel] ** 2 * cells.lengths[sel])
    seg_mean[0] += cells.drift0
    chol = _cholesky(jm.covariance) if np.any(jm.covariance) else None
    total_len = float(cells.lengths.sum())
    cum = np.cumsum(cells.lengths)

    def chunk(j):
        m = min(CHUNK, n - j * CHUNK)
        g = _generator(None, seed, j)
        part = np.broadcast_to(seg_mean, (m, nseg, d)).copy()
        if chol is not None:
            z = g.standard_normal((m, nseg, d)) @ chol.T
            part += np.sqrt(seg_var)[None, :, None] * z
        if jm.rate > 0 and total_len > 0:
            counts = g.poisson(jm.rate * total_len, size=m)
            k = int(counts.sum())
            jumps = jm.sample_jumps(g, k)
            cell = np.minimum(np.searchsorted(cum, g.random(k) * total_len, side="right"),
                              len(cum) - 1)
            owner = np.repeat(np.arange(m), counts) * nseg + cells.segment[cell]
            contrib = cells.weights[cell][:, None] * jumps
            flat = part.reshape(m * nseg, d)
            for c in range(d):
                flat[:, c] += np.bincount(owner, weights=contrib[:, c], minlength=m * nseg)
        return part

    nchunks = -(-n // CHUNK)
    workers = _threads(threads)
    if workers > 1 and nchunks > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(chunk, range(nchunks)))
    else:
        parts = [chunk(j) for j in range(nchunks)]
    partials = np.concatenate(parts, axis=0)
    draws = partials.sum(axis=1)
    return SampleBatch(draws, scheme, target, partials if segments else None, bias)


def _safe_dict(obj):
    try:
        return obj.to_dict()
    except Exception:
        return {"repr": repr(obj)}


def _bias_grid(d, grid):
    if grid is not None:
        return as_points(grid, d)[0]
    base = np.linspace(-2.0, 2.0, 20)
    if d == 1:
        return base[:, None]
    rng = np.random.Generator(np.random.Philox(key=12345))
    u = rng.standard_normal((20, d))
    return (u / np.linalg.norm(u, axis=1, keepdims=True)) * base[:, None]


def scheme_log_cf(jm: JumpModel, cells: Cells, ys):
    """Exact log-CF of the discretised random integral."""
    Y = np.asarray(ys, dtype=float)
    k = Y.shape[0]
    keep = cells.lengths > 0
    w, L = cells.weights[keep], cells.lengths[keep]
    pts = (w[:, None, None] * Y[None, :, :]).reshape(-1, Y.shape[1])
    psi = levy_exponent(jm.truncated, pts)[0].reshape(len(w), k)
    return L @ psi + 1j * (Y @ cells.drift0)


def declared_bias(t: LevyTriplet, lam: MixingMeasure, scheme: SimulationScheme, ys=None):
    jm = jump_model(t, scheme.jump_truncation, scheme.gaussian_correction)
    Y = _bias_grid(t.dim, ys)
    exact = np.exp(map_cf(CharFn.from_triplet(t), lam).log_cf(Y))
    return float(np.max(np.abs(np.exp(scheme_log_cf(jm, _cells(t, lam, scheme), Y)) - exact)))


def sample_tempered_stable(t: LevyTriplet, alpha, scheme: SimulationScheme, n, rng=None, **kw):
    """Draws of int t dY(Gamma(-alpha, t)), i.e. lambda = rho_alpha."""
    if not 0 < alpha < 1:
        raise AlphaOutOfRange("tempered stable sampling needs 0 < alpha < 1")
    if not math.isfinite(radial_moment(t.levy_measure, alpha)):
        raise NotInIDAlpha(f"int |x|^{alpha} M(dx) diverges")
    return sample_random_integral(t, RhoAlpha(alpha), scheme, n, rng, **kw)


# --------------------------------------------------------------- empirical CF

@dataclass(frozen=True)
class EmpiricalCF:
    y: np.ndarray
    values: np.ndarray
    error_bar: float       # 1/sqrt(n) per component


def empirical_cf(batch, y_grid) -> EmpiricalCF:
    draws = batch.draws if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)
    if draws.ndim == 1:
        draws = draws[:, None]
    if draws.shape[0] == 0:
        raise EmptyBatch("empirical CF of an empty batch")
    Y, _ = as_points(y_grid, draws.shape[1])
    vals = np.empty(Y.shape[0], dtype=complex)
    for i, y in enumerate(Y):
        vals[i] = np.mean(np.exp(1j * (draws @ y)))
    return EmpiricalCF(Y, vals, 1.0 / math.sqrt(draws.shape[0]))


# ------------------------------------------------------------- stable limit

def stable_constant(alpha):
    """c_alpha = Gamma(1 - alpha) cos(pi alpha / 2) / alpha (closed form)."""
    return math.gamma(1.0 - alpha) * math.cos(math.pi * alpha / 2) / alpha


def stable_constant_oracle(alpha):
    """c_alpha = -Re int_0^inf (e^{iu} - 1) u^(-alpha-1) du by brute-force
    quadrature (Fourier weights on the tail), independent of the closed form.
    Also returns the imaginary part, which equals c_alpha tan(pi alpha / 2)."""
    if not 0 < alpha < 1:
        raise AlphaOutOfRange("oracle needs 0 < alpha < 1")
    opts = dict(limit=500, epsabs=1e-13, epsrel=1e-13)
    # cos u - 1 = -2 sin^2(u/2) avoids cancellation near 0
    re_head = si.quad(lambda u: -2.0 * math.sin(0.5 * u) ** 2 * u ** (-alpha - 1.0), 0.0, 1.0, **opts)[0]
    im_head = si.quad(lambda u: math.sin(u) * u ** (-alpha - 1.0), 0.0, 1.0, **opts)[0]
    cos_tail = si.quad(lambda u: u ** (-alpha - 1.0), 1.0, np.inf, weight="cos", wvar=1.0)[0]
    sin_tail = si.quad(lambda u: u ** (-alpha - 1.0), 1.0, np.inf, weight="sin", wvar=1.0)[0]
    re = re_head + cos_tail - 1.0 / alpha
    im = im_head + sin_tail
    return -re, im


def _rotated_kernel(omega, alpha):
    """int_0^inf (e^{i omega t} - 1) t^(-alpha-1) e^(-t) dt, integrated along
    the ray t = tau e^{i theta}, theta = sign(omega) pi/4, where the
    oscillation turns into decay."""
    if omega == 0:
        return 0j
    theta = math.copysign(math.pi / 4, omega)
    rot = complex(math.cos(theta), math.sin(theta))

    def f(tau):
        tc = tau * rot
        with np.errstate(over="ignore", invalid="ignore"):
            val = np.expm1(1j * omega * tc) * np.exp(-(alpha + 1.0) * np.log(tc) - tc) * rot
        return np.where(np.isfinite(val), val, 0.0)
    pts = sorted({1.0, 1.0 / abs(omega)})
    return complex(quad(f, 0.0, math.inf, points=pts, singular=(0.0,), rtol=1e-12, atol=1e-15).value)


def tempered_kernel_closed(omega, alpha):
    """Gamma(-alpha) ((1 - i omega)^alpha - 1), the same integral in closed form."""
    return complex(sc.gamma(-alpha) * ((1.0 - 1j * np.asarray(omega)) ** alpha - 1.0))


def stable_limit_log_cf(M: LevyMeasure, alpha, y, c_alpha=None):
    """-c_alpha int |<y,x>|^alpha (1 - i tan(pi alpha/2) sign<y,x>) M(dx)."""
    if c_alpha is None:
        c_alpha = stable_constant_oracle(alpha)[0]
    Y, scalar = as_points(y, M.dim)
    tan = math.tan(math.pi * alpha / 2)

    def f(x):
        v = x @ Y.T
        return np.abs(v) ** alpha * (1.0 - 1j * tan * np.sign(v))
    vals = -c_alpha * np.asarray(M.integrate(f), dtype=complex).reshape(-1)
    if vals.shape[0] != Y.shape[0]:
        vals = np.zeros(Y.shape[0], dtype=complex)
    return vals[0] if scalar else vals


def scaled_power_log_cf(M: LevyMeasure, alpha, s, y, compensated=False):
    """log-CF of (L(s^{-1/alpha} X))^{*s}, X = int t dY(Gamma(-alpha, t)),
    = s int_0^inf psi(t s^{-1/alpha} y) rho_alpha(dt).

    psi is the uncompensated exponent int (e^{i<y,x>} - 1) M(dx), i.e. the
    triplet [int_B x M, 0, M]; with ``compensated`` the drift term of the
    triplet [0, 0, M] is added, which grows like s^{1 - 1/alpha}.
    """
    Y, scalar = as_points(y, M.dim)
    scale = s ** (-1.0 / alpha)
    dec = M.decompose()
    out = np.zeros(Y.shape[0], dtype=complex)
    for i, yv in enumerate(Y):
        acc = 0j
        for x, m in zip(dec.points, dec.masses):
            acc += m * _rotated_kernel(scale * float(x @ yv), alpha)
        for ray in dec.rays:
            v = float(ray.direction @ yv)

            def kern(r, v=v):
                # r = inf is probed at the end of the range, where the density vanishes
                with np.errstate(over="ignore", invalid="ignore"):
                    return np.array([tempered_kernel_closed(scale * v * ri, alpha) for ri in r])
            acc += complex(ray.integrate(kern, points=(1.0,)).value)
        out[i] = s * acc
    if compensated:
        ball = np.zeros(M.dim)
        if len(dec.masses):
            inside = np.linalg.norm(dec.points, axis=1) <= 1
            ball += dec.masses[inside] @ dec.points[inside]
        for ray in dec.rays:
            ball += ray.integrate(lambda r: r, hi=1.0).value * ray.direction
        out -= 1j * s * scale * math.gamma(1.0 - alpha) * (Y @ ball)
    return out[0] if scalar else out


@dataclass(frozen=True)
class StableLimitTable:
    s: tuple
    discrepancy: tuple
    c_alpha: float
    strictly_decreasing: bool

    def rows(self):
        return list(zip(self.s, self.discrepancy))


def stable_limit_experiment(M: LevyMeasure, alpha, s_list, y_grid, compensated=False):
    """Sup over y_grid of |log-CF of (L(s^{-1/alpha} X))^{*s} - limit log-CF|."""
    if not 0 < alpha < 1:
        raise AlphaOutOfRange("the stable limit experiment needs 0 < alpha < 1")
    if not math.isfinite(radial_moment(M, alpha)):
        raise NotInIDAlpha(f"int |x|^{alpha} M(dx) diverges")
    c_alpha = stable_constant_oracle(alpha)[0]
    Y, _ = as_points(y_grid, M.dim)
    limit = stable_limit_log_cf(M, alpha, Y, c_alpha)
    disc = []
    for s in s_list:
        vals = scaled_power_log_cf(M, alpha, float(s), Y, compensated)
        disc.append(float(np.max(np.abs(vals - limit))))
    dec = all(b < a for a, b in zip(disc[:-1], disc[1:]))
    return StableLimitTable(tuple(float(s) for s in s_list), tuple(disc), c_alpha, dec)
