"""Gauss hypergeometric function 2F1(a, b; c; z) for complex parameters, 0 <= z < 1.

Only what the closed-form channel functions need: the power series for
z <= 1/2 and the z -> 1 - z connection formula above that.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.special import loggamma, rgamma

from .errors import DomainError, NumericalError, ValidationError

MAX_TERMS = 20000
_EPS = np.finfo(float).eps


def _is_nonpositive_int(x: complex, tol: float = 1e-12) -> bool:
    x = complex(x)
    return abs(x.imag) < tol and x.real < tol and abs(x.real - round(x.real)) < tol


def hyp2f1_series(a: complex, b: complex, c: complex, z: complex) -> complex:
    """Raw power series; converges for |z| < 1, used directly for small |z|."""
    if _is_nonpositive_int(c):
        raise ValidationError(f"c must not be a non-positive integer, got {c!r}")
    term = 1.0 + 0j
    total = 1.0 + 0j
    scale = 1.0
    small = 0
    for k in range(MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if term == 0:
            return total
        # cancellation leaves |total| << largest partial sum; compare against that
        scale = max(scale, abs(total))
        if abs(term) <= _EPS * max(abs(total), 1e-3 * scale):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NumericalError(f"2F1 series did not converge in {MAX_TERMS} terms (z={z!r})")


def gauss_2f1(a: complex, b: complex, c: complex, z: float) -> complex:
    """2F1(a, b; c; z) for real z in [0, 1).

    For z > 1/2 the result is assembled from two series in 1 - z, which
    requires c - a - b to be non-integer.
    """
    z = float(z)
    if not (0.0 <= z < 1.0):
        raise DomainError(f"z must lie in [0, 1), got {z!r}")
    a, b, c = complex(a), complex(b), complex(c)
    if _is_nonpositive_int(c):
        raise ValidationError(f"c must not be a non-positive integer, got {c!r}")
    if z == 0.0:
        return 1.0 + 0j
    if z <= 0.5:
        return hyp2f1_series(a, b, c, z)
    d = c - a - b
    if abs(d.imag) < 1e-12 and abs(d.real - round(d.real)) < 1e-12:
        raise ValidationError(f"integer c-a-b={d!r} is unsupported")
    w = 1.0 - z
    lg_c = loggamma(c)
    g1 = cmath.exp(lg_c + loggamma(d)) * rgamma(c - a) * rgamma(c - b)
    g2 = cmath.exp(lg_c + loggamma(-d)) * rgamma(a) * rgamma(b)
    t1 = g1 * hyp2f1_series(a, b, 1.0 - d, w) if g1 != 0 else 0j
    t2 = g2 * cmath.exp(d * math.log(w)) * hyp2f1_series(c - a, c - b, 1.0 + d, w) if g2 != 0 else 0j
    return t1 + t2
