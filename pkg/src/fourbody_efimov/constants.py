"""Universal three-body channel constants at infinite scattering length.

The Efimov constant s0 and the continuum constants s_alpha are roots of

    sqrt(3) s cos(pi s / 2) = 8 sin(pi s / 6)

(s0 after the substitution s -> i s).  The root s = 4 solves the equation
exactly but corresponds to an identically vanishing channel function and is
discarded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, ValidationError

GAMMA = 0.30103
SPURIOUS_ROOTS = (4.0,)
SCAN_STEP = 0.01
DEFAULT_S_MAX = 40.0

_SQRT3 = math.sqrt(3.0)


def residual_s(s):
    """Continuum transcendental function; zero at every s_alpha."""
    return _SQRT3 * s * np.cos(0.5 * np.pi * s) - 8.0 * np.sin(np.pi * s / 6.0)


def residual_s0(s):
    """Residual for s0, the analytic continuation s -> i s with i divided out."""
    return _SQRT3 * s * np.cosh(0.5 * np.pi * s) - 8.0 * np.sinh(np.pi * s / 6.0)


def _is_spurious(root: float) -> bool:
    return any(abs(root - r) < 1e-6 for r in SPURIOUS_ROOTS)


def _scan_roots(f, lo: float, hi: float, step: float, tol: float) -> list[float]:
    n = int(round((hi - lo) / step))
    grid = lo + step * np.arange(n + 1)
    vals = f(grid)
    roots = []
    for i in range(n):
        a, b = grid[i], grid[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0:
            roots.append(brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps))
    # de-duplicate exact grid hits that also appear as bracketed roots
    out: list[float] = []
    for r in roots:
        if not out or abs(r - out[-1]) > 10 * tol:
            out.append(r)
    return out


@lru_cache(maxsize=None)
def _continuum_roots(s_max: float, tol: float) -> tuple[float, ...]:
    roots = _scan_roots(residual_s, SCAN_STEP, s_max, SCAN_STEP, tol)
    return tuple(r for r in roots if not _is_spurious(r))


def solve_s_alpha(alpha: int, tol: float = 1e-12, s_max: float = DEFAULT_S_MAX) -> float:
    """Return the alpha-th positive continuum constant (alpha = 1, 2, ...)."""
    if not isinstance(alpha, (int, np.integer)) or alpha < 1:
        raise ValidationError(f"alpha must be an integer >= 1, got {alpha!r}")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    roots = _continuum_roots(float(s_max), float(tol))
    if alpha > len(roots):
        raise ConvergenceError(
            f"only {len(roots)} continuum roots bracketed below s_max={s_max}; raise s_max"
        )
    return roots[alpha - 1]


def solve_s0(tol: float = 1e-12) -> float:
    """Efimov constant s0 ~ 1.00624."""
    if tol <= 0:
        raise ValidationError("tol must be positive")
    lo, hi = 0.5, 1.5
    if residual_s0(lo) * residual_s0(hi) > 0:
        raise ConvergenceError("no sign change for s0 in (0.5, 1.5)")
    return brentq(residual_s0, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps)


@dataclass(frozen=True)
class UniversalConstants:
    s0: float
    gamma: float
    s_alpha: tuple[float, ...]

    @property
    def efimov_ratio(self) -> float:
        """Energy ratio between successive Efimov levels, exp(-2 pi / s0)."""
        return math.exp(-2.0 * math.pi / self.s0)

    @property
    def length_ratio(self) -> float:
        return math.exp(math.pi / self.s0)

    def s(self, alpha: int) -> float:
        if alpha < 1:
            raise ValidationError(f"alpha must be >= 1, got {alpha}")
        if alpha > len(self.s_alpha):
            return solve_s_alpha(alpha)
        return self.s_alpha[alpha - 1]

    def as_dict(self) -> dict:
        return {
            "s0": self.s0,
            "gamma": self.gamma,
            "s_alpha": list(self.s_alpha),
            "efimov_ratio": self.efimov_ratio,
            "length_ratio": self.length_ratio,
        }


@lru_cache(maxsize=None)
def universal_constants(n_alpha: int = 5) -> UniversalConstants:
    return UniversalConstants(
        s0=solve_s0(),
        gamma=GAMMA,
        s_alpha=tuple(solve_s_alpha(a) for a in range(1, n_alpha + 1)),
    )
