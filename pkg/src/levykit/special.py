"""Incomplete gamma functions (negative parameters allowed) and stable
evaluations of ``exp(iz) - 1`` style kernels near zero."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sc

_CF_SWITCH = 2.0


def lower_gamma(a, x):
    """gamma(a, x) = int_0^x t^(a-1) e^-t dt for a > 0."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise ValueError("lower incomplete gamma needs a > 0")
    x = np.asarray(x, dtype=float)
    return sc.gammainc(a, x) * sc.gamma(a)


def lower_gamma_series(a, x, terms=80):
    """Power series x^a * sum (-x)^n / (n! (a + n)); a cross-check for small x."""
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    term = np.ones_like(x)
    for n in range(terms):
        total = total + term / (a + n)
        term = term * (-x) / (n + 1)
    return x ** a * total


def _upper_cf(a, x):
    # modified Lentz on the continued fraction for Gamma(a, x); good for x >~ 1
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + a * math.log(x)) * h


def _upper_scalar(a, x):
    if x <= 0:
        if a > 0:
            return math.gamma(a)
        return math.inf
    if math.isinf(x):
        return 0.0
    if a > 0 and x < a + 1.0:
        return float(sc.gammaincc(a, x) * sc.gamma(a))
    if x >= _CF_SWITCH:
        return _upper_cf(a, x)
    if a > 0:
        return float(sc.gammaincc(a, x) * sc.gamma(a))
    # downward recurrence Gamma(b - 1, x) = (Gamma(b, x) - x^(b-1) e^-x) / (b - 1)
    if a == math.floor(a):
        b = 0.0
        val = float(sc.exp1(x))
    else:
        b = a + math.ceil(-a)
        if b == 0.0:
            b = 1.0
        val = float(sc.gammaincc(b, x) * sc.gamma(b))
    while b - a > 0.5:
        c = b - 1.0
        e = c * math.log(x) - x
        if e > 709.0:
            # Gamma(a, x) ~ x^a / |a| beyond the double range
            return math.inf
        val = (val - math.exp(e)) / c
        b = c
    return val


def upper_gamma(a, x):
    """Gamma(a, x) = int_x^inf t^(a-1) e^-t dt for any real a and x > 0.

    Positive ``a`` goes through scipy; otherwise a continued fraction for
    x >= 2 and the downward recurrence from a positive (or zero) parameter
    below that.
    """
    out = np.vectorize(_upper_scalar, otypes=[float])(a, x)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class IncompleteGamma:
    """Both incomplete gamma functions at a fixed parameter ``a``."""

    a: float

    def lower(self, x):
        return lower_gamma(self.a, x)

    def upper(self, x):
        return upper_gamma(self.a, x)


def expm1i(z):
    """exp(iz) - 1 without cancellation for small |z| (real or complex)."""
    z = np.asarray(z)
    if not np.iscomplexobj(z):
        return -2.0 * np.sin(0.5 * z) ** 2 + 1j * np.sin(z)
    return np.expm1(1j * z)


def expm1i_minus_iz(z):
    """exp(iz) - 1 - iz, accurate down to |z| ~ 1e-300."""
    z = np.asarray(z)
    iz = 1j * z
    small = np.abs(z) < 0.2
    out = np.empty(z.shape, dtype=complex)
    if np.any(~small):
        zz = iz[~small]
        out[~small] = np.expm1(zz) - zz
    if np.any(small):
        zz = iz[small]
        term = zz * zz / 2.0
        acc = term.copy()
        for n in range(3, 20):
            term = term * zz / n
            acc = acc + term
        out[small] = acc
    return out
