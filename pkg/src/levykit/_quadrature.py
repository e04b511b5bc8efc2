"""Vectorized adaptive Gauss-Kronrod (7/15) quadrature.

Integrands are called with a 1-D array of abscissae and must return an array
of shape ``(n,)`` or ``(n, m)``; real and complex values are both fine.
Infinite endpoints and endpoint singularities are handled by exponential
changes of variable so that algebraic behaviour near the endpoint becomes
exponential decay in the new variable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import NonConvergedQuadrature

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
W_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
W_GAUSS = np.zeros(15)
W_GAUSS[1:7:2] = _WG[:3]
W_GAUSS[7] = _WG[3]
W_GAUSS[9:15:2] = _WG[2::-1]

_EPS = np.finfo(float).eps
_U_MAX = 700.0


@dataclass(frozen=True)
class QuadResult:
    value: object
    error: float
    intervals: int = 0
    converged: bool = True


def _plain(p, q):
    def tr(v):
        return v, np.ones_like(v)
    return tr, (p, q)


def _log_left(p, q):
    # x = p + (q - p) exp(-u), u = v / (1 - v)
    span = q - p

    def tr(v):
        with np.errstate(divide="ignore", over="ignore"):
            u = v / (1.0 - v)
            e = np.exp(-np.minimum(u, _U_MAX))
            jac = span * e / (1.0 - v) ** 2
        jac = np.where(u >= _U_MAX, 0.0, jac)
        return p + span * e, jac
    return tr, (0.0, 1.0)


def _log_right(p, q):
    span = q - p

    def tr(v):
        with np.errstate(divide="ignore", over="ignore"):
            u = v / (1.0 - v)
            e = np.exp(-np.minimum(u, _U_MAX))
            jac = span * e / (1.0 - v) ** 2
        jac = np.where(u >= _U_MAX, 0.0, jac)
        return q - span * e, jac
    return tr, (0.0, 1.0)


def _exp_out(p):
    # x = p * exp(u), u = v / (1 - v); covers [p, inf) for p > 0 and (-inf, p] for p < 0
    def tr(v):
        with np.errstate(divide="ignore", over="ignore"):
            u = np.minimum(v / (1.0 - v), _U_MAX)
            x = p * np.exp(u)
            jac = np.abs(x) / (1.0 - v) ** 2
        jac = np.where(u >= _U_MAX, 0.0, jac)
        return x, jac
    return tr, (0.0, 1.0)


def _segments(a, b, points, singular):
    cuts = sorted({float(x) for x in points if a < x < b} | {a, b})
    if cuts[0] == -math.inf and cuts[1] > -1.0:
        cuts.insert(1, min(-1.0, cuts[1] - 1.0))
    if cuts[-1] == math.inf and cuts[-2] < 1.0:
        cuts.insert(-1, max(1.0, cuts[-2] + 1.0))
    sing = {float(s) for s in singular}
    segs = []
    for p, q in zip(cuts[:-1], cuts[1:]):
        if p == -math.inf:
            segs.append(_exp_out(q))
        elif q == math.inf:
            segs.append(_exp_out(p))
        else:
            left, right = p in sing, q in sing
            if left and right:
                m = 0.5 * (p + q)
                segs.append(_log_left(p, m))
                segs.append(_log_right(m, q))
            elif left:
                segs.append(_log_left(p, q))
            elif right:
                segs.append(_log_right(p, q))
            else:
                segs.append(_plain(p, q))
    return segs


def _evaluate(f, segs, lo, hi, sid):
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    v = centre[:, None] + half[:, None] * NODES[None, :]
    x = np.empty_like(v)
    jac = np.empty_like(v)
    for s in np.unique(sid):
        mask = sid == s
        xs, js = segs[s][0](v[mask])
        x[mask] = xs
        jac[mask] = js
    fx = np.asarray(f(x.ravel()))
    scalar = fx.ndim == 1
    fx = fx.reshape(v.shape[0], 15, -1)
    j3 = jac[:, :, None]
    with np.errstate(invalid="ignore", over="ignore"):
        fx = np.where(fx == 0, 0.0, fx * j3)
    # overflow at a transformed endpoint whose Jacobian has collapsed carries no mass
    fx = np.where(j3 == 0.0, 0.0, fx)
    bad = ~np.isfinite(fx)
    if np.any(bad):
        fx = np.where(bad & (np.abs(j3) < 1e-150), 0.0, fx)
        fx = np.where(np.isfinite(fx), fx, np.inf)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        kr = np.einsum("j,pjm->pm", W_KRONROD, fx) * half[:, None]
        ga = np.einsum("j,pjm->pm", W_GAUSS, fx) * half[:, None]
        mean = kr / (2.0 * half[:, None])
        resasc = np.einsum("j,pjm->pm", W_KRONROD, np.abs(fx - mean[:, None, :])) * half[:, None]
        resabs = np.einsum("j,pjm->pm", W_KRONROD, np.abs(fx)) * half[:, None]
        diff = np.abs(kr - ga)
        err = np.where(resasc > 0, resasc * np.minimum(1.0, (200.0 * diff / resasc) ** 1.5), diff)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    err = np.where(np.isfinite(err), err, np.inf)
    return kr, err, scalar


def quad(f, a, b, *, points=(), singular=(), rtol=1e-10, atol=1e-12,
         max_depth=60, max_intervals=4000, raise_on_fail=True):
    """Integrate ``f`` over ``[a, b]`` with global adaptive bisection.

    ``points`` are interior breakpoints (discontinuities, kinks). Endpoints
    listed in ``singular`` get a logarithmic change of variable, which is what
    makes integrable power singularities like ``r**-0.9`` converge.
    """
    a, b = float(a), float(b)
    if a == b:
        out = np.zeros(np.asarray(f(np.array([0.5 * (a + b)]))).shape[1:] or ())
        return QuadResult(out[()] if out.ndim == 0 else out, 0.0, 0, True)
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    segs = _segments(a, b, points, singular)
    lo = np.array([s[1][0] for s in segs], dtype=float)
    hi = np.array([s[1][1] for s in segs], dtype=float)
    sid = np.arange(len(segs))
    depth = np.zeros(len(segs), dtype=int)
    val, err, scalar = _evaluate(f, segs, lo, hi, sid)

    while True:
        total = val.sum(axis=0)
        tot_err = err.sum(axis=0)
        tol = np.maximum(atol, rtol * np.abs(total))
        if np.all(tot_err <= tol):
            converged = True
            break
        ratio = np.max(err / tol[None, :], axis=1)
        splittable = depth < max_depth
        if not np.any(splittable & (ratio > 0)) or len(lo) >= max_intervals:
            converged = False
            break
        cand = np.where(splittable, ratio, -1.0)
        pick = cand >= 0.1 * cand.max()
        pick &= cand > 0
        if len(lo) + pick.sum() > max_intervals:
            order = np.argsort(-cand)
            pick = np.zeros_like(pick)
            pick[order[: max(1, max_intervals - len(lo))]] = True
        mid = 0.5 * (lo[pick] + hi[pick])
        nlo = np.concatenate([lo[pick], mid])
        nhi = np.concatenate([mid, hi[pick]])
        nsid = np.concatenate([sid[pick], sid[pick]])
        ndepth = np.concatenate([depth[pick], depth[pick]]) + 1
        nval, nerr, _ = _evaluate(f, segs, nlo, nhi, nsid)
        keep = ~pick
        lo = np.concatenate([lo[keep], nlo])
        hi = np.concatenate([hi[keep], nhi])
        sid = np.concatenate([sid[keep], nsid])
        depth = np.concatenate([depth[keep], ndepth])
        val = np.concatenate([val[keep], nval])
        err = np.concatenate([err[keep], nerr])

    value = sign * total
    error = float(np.max(tot_err))
    if scalar:
        value = value[0]
    if not converged and raise_on_fail:
        raise NonConvergedQuadrature(
            f"quadrature did not reach tolerance on [{a}, {b}] "
            f"(error {error:.3g} after {len(lo)} intervals)", value, error)
    return QuadResult(value, error, len(lo), converged)


DIVERGENCE_LENGTHS = (25.0, 50.0, 100.0, 200.0)


def _grows(partials):
    # three successive doublings each adding more than 10 %
    for prev, cur in zip(partials[:-1], partials[1:]):
        if not (abs(prev) > 1e-300 and abs(cur - prev) > 0.1 * abs(prev)):
            return False
    return True


def tail_integral(f, c, side, *, rtol=1e-10, atol=1e-12, points=()):
    """Integral of a nonnegative ``f`` over ``(0, c]`` or ``[c, inf)``.

    Returns ``value = inf`` when the logarithmic-window partial integrals keep
    growing by more than 10 % over three successive doublings of the window.
    """
    c = float(c)
    if c <= 0:
        raise ValueError("tail_integral needs c > 0")
    lc = math.log(c)

    def g(u):
        x = np.exp(u)
        return f(x) * x

    partials = []
    for length in DIVERGENCE_LENGTHS:
        lo, hi = (lc - length, lc) if side == "zero" else (lc, lc + length)
        logpts = [math.log(p) for p in points if p > 0 and lo < math.log(p) < hi]
        res = quad(g, lo, hi, points=logpts, rtol=rtol, atol=atol, raise_on_fail=False)
        partials.append(float(np.real(res.value)))
    if _grows(partials) or not np.isfinite(partials[-1]):
        return QuadResult(math.inf, math.inf, 0, True)
    if side == "zero":
        res = quad(f, 0.0, c, points=points, singular=(0.0,), rtol=rtol, atol=atol,
                   raise_on_fail=False)
    else:
        res = quad(f, c, math.inf, points=points, rtol=rtol, atol=atol, raise_on_fail=False)
    if res.converged and np.isfinite(res.value):
        return res
    return QuadResult(partials[-1], abs(partials[-1] - partials[-2]), res.intervals, False)
