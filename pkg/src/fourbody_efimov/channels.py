"""Adiabatic potential curves U, Q and W and atom-trimer/continuum crossings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .constants import UniversalConstants, universal_constants
from .eigen import ChannelSolution, eigenvalues_numeric, make_problem
from .errors import NumericalError, ValidationError
from .system import (
    AtomTrimer,
    ChannelId,
    Continuum,
    ModelParams,
    ParticleSystem,
    hard_core_radius,
)

DEFAULT_H_REL = 1e-3
CORE_CLIP = 2.0  # lower bracket limit for crossing searches, in core radii
ASYMPTOTIC_MIN_RATIO = 10.0


def _check_R4(R4: float, sys: ParticleSystem, params: ModelParams):
    if not R4 > hard_core_radius(sys, params):
        from .errors import DomainError

        raise DomainError(
            f"hyperradius inside regularization core: R4={float(R4):.6g} <= "
            f"{hard_core_radius(sys, params):.6g}"
        )


def _family(channel: ChannelId) -> ChannelId:
    """Representative channel whose eigenproblem contains ``channel`` as a sublevel."""
    if isinstance(channel, AtomTrimer):
        return AtomTrimer(1)
    return Continuum(channel.alpha, 0)


def _level(channel: ChannelId) -> int:
    return channel.n if isinstance(channel, AtomTrimer) else channel.m + 1


def _solve(channel, R4, sys, params, count, **kw) -> ChannelSolution:
    problem = make_problem(_family(channel), R4, sys, params)
    return eigenvalues_numeric(problem, count, **kw)


def potential_U(
    channel: ChannelId, R4: float, sys: ParticleSystem, params: ModelParams, **solver_kw
) -> float:
    """Adiabatic potential (lam**2 - 1/4) / (2 mu4 R4**2)."""
    sol = _solve(channel, R4, sys, params, _level(channel), **solver_kw)
    return float(sol.U(sys.mu4)[_level(channel) - 1])


def _to_t(alpha: np.ndarray) -> np.ndarray:
    return np.log(np.tan(0.5 * alpha))


def _spline_on(sol: ChannelSolution, idx: int, t_eval: np.ndarray) -> np.ndarray:
    t = np.append(_to_t(sol.alpha[:-1]), 0.0)
    # extrapolation continues the solution smoothly a distance O(h_rel) past its wall
    return CubicSpline(t, sol.eigenfunctions[idx], extrapolate=True)(t_eval)


def effective_step(R4: float, sys: ParticleSystem, params: ModelParams, h_rel: float) -> float:
    """Relative R4 step, shrunk near the core so the wall moves by at most
    h_rel times the width of the hyperangular domain."""
    from .system import alpha_min

    a = alpha_min(R4, sys, params)
    width = 0.5 * math.pi - a
    return h_rel * min(1.0, width / math.tan(a))


@dataclass(frozen=True)
class QResult:
    Q: np.ndarray
    orthogonality: np.ndarray  # <u | du/dR4>, ~0 by norm conservation


def q_couplings(
    channel: ChannelId,
    R4: float,
    sys: ParticleSystem,
    params: ModelParams,
    count: int,
    h_rel: float = DEFAULT_H_REL,
    **solver_kw,
) -> QResult:
    """Diagonal couplings <<du/dR4|du/dR4>> for the lowest ``count`` levels of a family.

    Central differences across R4(1 -/+ h_rel) on the grid of the central
    solution.  The neighbours are interpolated in ln tan(a/2); the inner one
    (whose wall sits slightly higher) is continued smoothly past its wall
    rather than by zero, which keeps the difference quotient second order.
    """
    if not 0 < h_rel < 0.5:
        raise ValidationError(f"h_rel must lie in (0, 0.5), got {h_rel!r}")
    h_rel = effective_step(R4, sys, params, h_rel)
    _check_R4(R4 * (1.0 - h_rel), sys, params)
    solver_kw = dict(solver_kw)
    solver_kw.setdefault("richardson", False)
    lo = _solve(channel, R4 * (1.0 - h_rel), sys, params, count, **solver_kw)
    mid = _solve(channel, R4, sys, params, count, **solver_kw)
    hi = _solve(channel, R4 * (1.0 + h_rel), sys, params, count, **solver_kw)
    alpha = mid.alpha
    t = np.append(_to_t(alpha[:-1]), 0.0)
    inner = slice(1, -1)  # boundary points excluded from the quadrature
    weight = np.sin(alpha[inner])  # da = sin(a) dt
    dR = 2.0 * h_rel * R4
    Q = np.empty(count)
    orth = np.empty(count)
    for k in range(count):
        u_mid = mid.eigenfunctions[k]
        u_lo = _spline_on(lo, k, t)
        u_hi = _spline_on(hi, k, t)
        for u in (u_lo, u_hi):
            ov = np.trapezoid((u * u_mid)[inner] * weight, t[inner])
            if abs(ov) < 0.5:
                raise NumericalError(
                    f"sign alignment ambiguous for level {k + 1} at R4={R4} (overlap {ov:.3g})"
                )
            if ov < 0:
                u *= -1.0
        du = (u_hi - u_lo) / dR
        Q[k] = np.trapezoid((du * du)[inner] * weight, t[inner])
        orth[k] = np.trapezoid((u_mid * du)[inner] * weight, t[inner])
    return QResult(Q, orth)


def potential_Q(
    channel: ChannelId,
    R4: float,
    sys: ParticleSystem,
    params: ModelParams,
    h_rel: float = DEFAULT_H_REL,
    **solver_kw,
) -> float:
    level = _level(channel)
    return float(q_couplings(channel, R4, sys, params, level, h_rel, **solver_kw).Q[level - 1])


def potential_W(
    channel: ChannelId,
    R4: float,
    sys: ParticleSystem,
    params: ModelParams,
    h_rel: float = DEFAULT_H_REL,
    **solver_kw,
) -> float:
    """W = U - Q / (2 mu4)."""
    U = potential_U(channel, R4, sys, params, **solver_kw)
    Q = potential_Q(channel, R4, sys, params, h_rel, **solver_kw)
    return U - Q / (2.0 * sys.mu4)


@dataclass(frozen=True)
class ChannelPoint:
    """U, Q, W for the lowest levels of one eigenproblem family at one R4."""

    R4: float
    lambda_sq: np.ndarray
    U: np.ndarray
    Q: np.ndarray
    W: np.ndarray

    def scaled_W(self, mu4: float) -> np.ndarray:
        return 2.0 * mu4 * self.R4**2 * self.W


def channel_point(
    family: ChannelId,
    R4: float,
    sys: ParticleSystem,
    params: ModelParams,
    count: int,
    h_rel: float = DEFAULT_H_REL,
    **solver_kw,
) -> ChannelPoint:
    sol = _solve(family, R4, sys, params, count, **solver_kw)
    U = sol.U(sys.mu4)
    Q = q_couplings(family, R4, sys, params, count, h_rel, **solver_kw).Q
    return ChannelPoint(float(R4), sol.lambda_sq, U, Q, U - Q / (2.0 * sys.mu4))


@dataclass
class PotentialCurve:
    channel: ChannelId
    sublevel: int
    R4_grid: np.ndarray
    U: np.ndarray
    Q: np.ndarray
    W: np.ndarray
    trimer_energy: float | None = None

    def scaled(self, mu4: float, which: str = "W") -> np.ndarray:
        return 2.0 * mu4 * self.R4_grid**2 * getattr(self, which)


def potential_curves(
    channels: Sequence[ChannelId],
    R4_grid: Iterable[float],
    sys: ParticleSystem,
    params: ModelParams,
    h_rel: float = DEFAULT_H_REL,
    with_trimer_energy: bool = False,
    **solver_kw,
) -> list[PotentialCurve]:
    """Curves for every requested channel, one eigen-solve per family and R4."""
    R4_grid = np.asarray(list(R4_grid), dtype=float)
    for R4 in R4_grid:
        _check_R4(R4, sys, params)
    families: dict[ChannelId, int] = {}
    for ch in channels:
        fam = _family(ch)
        families[fam] = max(families.get(fam, 0), _level(ch))
    data = {fam: [channel_point(fam, R4, sys, params, cnt, h_rel, **solver_kw) for R4 in R4_grid]
            for fam, cnt in families.items()}
    curves = []
    for ch in channels:
        pts = data[_family(ch)]
        k = _level(ch) - 1
        e_n = None
        if with_trimer_energy and isinstance(ch, AtomTrimer):
            e_n = trimer_energy(ch.n, sys, params)
        curves.append(
            PotentialCurve(
                ch,
                _level(ch) if isinstance(ch, AtomTrimer) else ch.m,
                R4_grid.copy(),
                np.array([p.U[k] for p in pts]),
                np.array([p.Q[k] for p in pts]),
                np.array([p.W[k] for p in pts]),
                e_n,
            )
        )
    return curves


@lru_cache(maxsize=64)
def _bessel_k_zero(n: int, s0: float) -> float:
    # n-th zero (counted from the largest) of K_{i s0}(x); geometric for small x
    f = lambda y: mpmath.besselk(1j * s0, mpmath.exp(y)).real  # noqa: E731
    gamma = -float(mpmath.arg(mpmath.gamma(1 + 1j * s0)))
    y0 = math.log(2.0) - (gamma + n * math.pi) / s0
    half = 0.5 * math.pi / s0
    with mpmath.workdps(30):
        y = mpmath.findroot(f, (y0 - half, y0 + half), solver="anderson")
    return float(mpmath.exp(y))


def trimer_energy(n: int, sys: ParticleSystem, params: ModelParams) -> float:
    """Hard-wall Efimov trimer energy E_n = -x_n**2 / (2 mu3 R0**2), K_{i s0}(x_n) = 0."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    x = _bessel_k_zero(int(n), universal_constants().s0)
    return -x * x / (2.0 * sys.mu3 * params.R0**2)


def asymptotic_W_bound(n: int, R4: float, sys: ParticleSystem, params: ModelParams) -> float:
    """Large-R4 approximation of the atom-trimer potential in its repulsive region."""
    import warnings

    c = universal_constants()
    if R4 / params.R0 <= ASYMPTOTIC_MIN_RATIO:
        warnings.warn(f"asymptotic form used at R4/R0={R4 / params.R0:.3g} <= 10", stacklevel=2)
    log_term = math.log(sys.mu4 * R4**2 / (sys.mu3 * params.R0**2))
    bracket = (2.0 * (n + c.gamma) - c.s0) / math.pi + 0.5 - c.s0 / math.pi * log_term
    return bracket / (2.0 * sys.mu4 * R4**2)


@dataclass(frozen=True)
class Crossing:
    initial: Continuum
    final_n: int
    R4c: float
    W_c: float
    lambda_c: float
    source: str  # "analytic-formula" | "numeric-root"

    @property
    def valid(self) -> bool:
        return self.W_c > 0 and math.isfinite(self.R4c)


def crossing_lambda(initial: Continuum, consts: UniversalConstants | None = None) -> float:
    c = consts or universal_constants()
    lam_inf = c.s(initial.alpha) + 2 * initial.m + 1.5
    return math.sqrt(lam_inf**2 - 0.25)


def crossing_analytic(
    n: int, initial: Continuum, sys: ParticleSystem, params: ModelParams
) -> Crossing:
    """Closed-form crossing position; W_c taken from the peak-energy formula."""
    from .recombination import peak_energy

    if not isinstance(initial, Continuum):
        raise ValidationError("initial channel must be a continuum channel")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    c = universal_constants()
    lam_c = crossing_lambda(initial, c)
    expo = (math.pi / c.s0) * (n - 0.5 * lam_c + (2 * c.gamma - c.s0) / (2 * math.pi) + 0.25)
    R4c = params.R0 * sys.core_ratio * math.exp(expo)
    W_c = peak_energy(n, initial.alpha, initial.m, sys, params)
    return Crossing(initial, n, R4c, W_c, lam_c, "analytic-formula")


def crossing_is_physical(c: Crossing, sys: ParticleSystem, params: ModelParams) -> bool:
    """Crossing lies outside the regularization core."""
    return c.R4c > hard_core_radius(sys, params)


def scaled_gap(
    n: int, initial: Continuum, R4: float, sys: ParticleSystem, params: ModelParams,
    h_rel: float = DEFAULT_H_REL, **solver_kw,
) -> tuple[float, float]:
    """(2 mu4 R4^2 (W_trimer - W_continuum), W_continuum) at one R4."""
    t = channel_point(AtomTrimer(1), R4, sys, params, n, h_rel, **solver_kw)
    cpt = channel_point(Continuum(initial.alpha, 0), R4, sys, params, initial.m + 1, h_rel, **solver_kw)
    scale = 2.0 * sys.mu4 * R4**2
    return scale * (t.W[n - 1] - cpt.W[initial.m]), float(cpt.W[initial.m])


def crossing_numeric(
    n: int,
    initial: Continuum,
    sys: ParticleSystem,
    params: ModelParams,
    bracket: tuple[float, float] | None = None,
    rtol: float = 1e-8,
    **solver_kw,
) -> Crossing | None:
    """Root of the scaled potential difference, or None when there is no sign change.

    The default bracket is the analytic estimate times/divided by 10.  Its
    lower end is clipped to CORE_CLIP core radii: closer in, the hyperangular
    domain collapses, Q diverges and the difference changes sign for reasons
    unrelated to any crossing.
    """
    core = hard_core_radius(sys, params)
    if bracket is None:
        guess = crossing_analytic(n, initial, sys, params).R4c
        bracket = (guess / 10.0, guess * 10.0)
    lo = max(bracket[0], core * CORE_CLIP)
    hi = bracket[1]
    if hi <= lo:
        return None

    def f(logR):
        return scaled_gap(n, initial, math.exp(logR), sys, params, **solver_kw)[0]

    a, b = math.log(lo), math.log(hi)
    fa, fb = f(a), f(b)
    if fa * fb > 0:
        return None
    logR = brentq(f, a, b, xtol=rtol, rtol=rtol)
    R4c = math.exp(logR)
    _, W_c = scaled_gap(n, initial, R4c, sys, params, **solver_kw)
    lam_c = math.sqrt(max(2.0 * sys.mu4 * R4c**2 * W_c, 0.0))
    return Crossing(initial, n, R4c, W_c, lam_c, "numeric-root")
