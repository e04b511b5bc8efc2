"""Gaver-Stehfest inversion of Laplace transforms sampled on the real axis."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .exceptions import IllConditionedInversion

DEFAULT_TERMS = 12


@lru_cache(maxsize=None)
def stehfest_coefficients(n):
    """Exact Stehfest weights V_1..V_n (n even) as Fractions."""
    if n < 2 or n % 2:
        raise ValueError("Gaver-Stehfest needs an even number of terms")
    h = n // 2
    out = []
    for k in range(1, n + 1):
        s = Fraction(0)
        for j in range((k + 1) // 2, min(k, h) + 1):
            s += Fraction(j ** h * math.factorial(2 * j),
                          math.factorial(h - j) * math.factorial(j) * math.factorial(j - 1)
                          * math.factorial(k - j) * math.factorial(2 * j - k))
        out.append((-1) ** (k + h) * s)
    return tuple(out)


def _combine(values, x, n):
    with mp.workdps(40):
        ln2x = mp.log(2) / mp.mpf(x)
        coeffs = stehfest_coefficients(n)
        re = mp.fsum(mp.mpf(v.numerator) / v.denominator * mp.mpf(f.real) for v, f in zip(coeffs, values))
        im = mp.fsum(mp.mpf(v.numerator) / v.denominator * mp.mpf(f.imag) for v, f in zip(coeffs, values))
        return complex(float(re * ln2x), float(im * ln2x))


def gaver_stehfest(F, x=1.0, n=DEFAULT_TERMS, check=True, workers=None):
    """Approximate f(x) from its Laplace transform F on s > 0.

    Real and imaginary parts are accumulated separately in 40-digit
    arithmetic; the weights themselves are exact.  With ``check`` the
    n - 2 term estimate is formed from the same samples and a relative
    disagreement above 10 % raises :class:`IllConditionedInversion`.
    """
    if x <= 0:
        raise ValueError("inversion point must be positive")
    ln2x = math.log(2.0) / x
    s = [k * ln2x for k in range(1, n + 1)]
    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            values = [complex(v) for v in pool.map(F, s)]
    else:
        values = [complex(F(si)) for si in s]
    if any(not (math.isfinite(v.real) and math.isfinite(v.imag)) for v in values):
        raise IllConditionedInversion("transform is not finite on the sampling abscissae")
    fn = _combine(values, x, n)
    if check and n >= 4:
        fm = _combine(values[: n - 2], x, n - 2)
        if abs(fn - fm) > 0.1 * abs(fn) and abs(fn) > 1e-12:
            raise IllConditionedInversion(
                f"Gaver-Stehfest estimates with {n} and {n - 2} terms disagree ({fn} vs {fm})")
    return fn
