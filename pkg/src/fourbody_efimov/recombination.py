"""Landau-Zener recombination at atom-trimer/continuum crossings.

Each (continuum, trimer) pair contributes through its single crossing; closed
crossings (E <= W_c) contribute nothing.  The rate proxy is K4 = P / k**7
with k = sqrt(2 mu4 E) and unit proportionality constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .channels import Crossing, crossing_analytic, crossing_is_physical, crossing_numeric
from .constants import universal_constants
from .errors import ModeError, ValidationError
from .system import Continuum, ModelParams, ParticleSystem

DEFAULT_ALPHA_MAX = 2
DEFAULT_M_MAX = 2
DEFAULT_N_MAX = 6


def peak_energy(n: int, alpha: int, m: int, sys: ParticleSystem, params: ModelParams) -> float:
    """Approximate potential energy at the crossing, where the P_LZ peak sits."""
    c = universal_constants()
    s = c.s(alpha)
    lam = s + 2 * m + 1.5
    expo = -(math.pi / c.s0) * (2 * n - s - 2 * m + (2 * c.gamma - c.s0) / math.pi - 1.0)
    return lam * lam / (2.0 * sys.mu34 * params.R0**2) * math.exp(expo)


def lz_exponent(c: Crossing, sys: ParticleSystem, params: ModelParams) -> float:
    """X in T = exp(-X / k_c); depends only on the crossing geometry."""
    s0 = universal_constants().s0
    coupling = (sys.mu3 / sys.mu_AB * params.a_AB / c.R4c) ** 2
    return (
        sys.core_ratio
        * coupling
        * params.beta**2
        / params.R0
        * 2.0
        * math.pi
        / (2.0 * s0 / math.pi * c.lambda_c + 0.25)
    )


def local_wavenumber(E, W_c: float, mu4: float):
    return np.sqrt(2.0 * mu4 * (np.asarray(E, dtype=float) - W_c))


def lz_T(E: float, c: Crossing, sys: ParticleSystem, params: ModelParams) -> float:
    """Single-passage survival factor T at an open crossing."""
    if not E > c.W_c:
        raise ValidationError(f"crossing is closed at E={E!r} <= W_c={c.W_c!r}")
    k_c = float(local_wavenumber(E, c.W_c, sys.mu4))
    return math.exp(-lz_exponent(c, sys, params) / k_c)


def p_lz(T):
    """Landau-Zener in-and-out probability 4 T (1 - T), relative phase taken as zero."""
    T_arr = np.asarray(T, dtype=float)
    if np.any((T_arr < 0) | (T_arr > 1)) or np.any(np.isnan(T_arr)):
        raise ValidationError(f"T must lie in [0, 1], got {T!r}")
    out = 4.0 * T_arr * (1.0 - T_arr)
    return float(out) if out.ndim == 0 else out


def pair_probability(E, c: Crossing, sys: ParticleSystem, params: ModelParams) -> np.ndarray:
    """P_LZ(E) for one crossing on an energy array, zero where the crossing is closed."""
    E = np.atleast_1d(np.asarray(E, dtype=float))
    out = np.zeros_like(E)
    open_ = E > c.W_c
    if np.any(open_):
        k_c = local_wavenumber(E[open_], c.W_c, sys.mu4)
        T = np.exp(-lz_exponent(c, sys, params) / k_c)
        out[open_] = 4.0 * T * (1.0 - T)
    return out


def lz_peak_energy(c: Crossing, sys: ParticleSystem, params: ModelParams) -> float:
    """Energy of the exact maximum of 4T(1-T), i.e. T = 1/2."""
    k_half = lz_exponent(c, sys, params) / math.log(2.0)
    return c.W_c + k_half**2 / (2.0 * sys.mu4)


def default_pairs(
    alpha_max: int = DEFAULT_ALPHA_MAX,
    m_max: int = DEFAULT_M_MAX,
    n_max: int = DEFAULT_N_MAX,
) -> list[tuple[Continuum, int]]:
    return [
        (Continuum(a, m), n)
        for a in range(1, alpha_max + 1)
        for m in range(0, m_max + 1)
        for n in range(1, n_max + 1)
    ]


def find_crossings(
    pairs: Sequence[tuple[Continuum, int]],
    sys: ParticleSystem,
    params: ModelParams,
    numeric: bool = False,
) -> list[Crossing]:
    """Crossings for every pair that has one outside the regularization core.

    Pairs whose analytic crossing falls inside the core (the lowest trimers)
    have none and are dropped.  With ``numeric`` the position and W_c come
    from root-finding the computed potentials instead.
    """
    if not pairs:
        raise ValidationError("channel set is empty")
    out = []
    for initial, n in pairs:
        c = crossing_analytic(n, initial, sys, params)
        if not crossing_is_physical(c, sys, params):
            continue
        if numeric:
            c = crossing_numeric(n, initial, sys, params)
            if c is None or c.W_c <= 0:
                continue
        out.append(c)
    return out


@dataclass(frozen=True)
class PeakRecord:
    alpha: int
    m: int
    n: int
    R4c: float
    lambda_c: float
    E_peak_formula: float
    E_peak_lz: float


@dataclass
class Spectrum:
    E_grid: np.ndarray
    P_T: np.ndarray
    K4: np.ndarray
    peaks: list[PeakRecord] = field(default_factory=list)

    def local_maxima(self) -> np.ndarray:
        """Grid indices of local maxima of P_T (strictly above the left neighbour)."""
        return local_maxima(self.P_T)


def local_maxima(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y)
    if y.size < 3:
        return np.array([], dtype=int)
    left = y[1:-1] > y[:-2]
    right = y[1:-1] >= y[2:]
    return np.nonzero(left & right & (y[1:-1] > 0))[0] + 1


def total_probability(
    E,
    crossings: Sequence[Crossing],
    sys: ParticleSystem,
    params: ModelParams,
) -> np.ndarray:
    """P_T(E): sum of single-crossing Landau-Zener probabilities."""
    if not crossings:
        raise ValidationError("channel set is empty")
    E = np.atleast_1d(np.asarray(E, dtype=float))
    total = np.zeros_like(E)
    for c in crossings:
        total += pair_probability(E, c, sys, params)
    return total


def k4_rate(E, P_T, sys: ParticleSystem) -> np.ndarray:
    """Rate proxy K4 = P_T / (2 mu4 E)**(7/2) in arbitrary units."""
    E = np.asarray(E, dtype=float)
    if np.any(E <= 0):
        raise ValidationError("energies must be positive")
    return np.asarray(P_T, dtype=float) / (2.0 * sys.mu4 * E) ** 3.5


def default_energy_range(crossings: Sequence[Crossing]) -> tuple[float, float]:
    w = [c.W_c for c in crossings]
    return 0.5 * min(w), 2.0 * max(w)


def spectrum(
    crossings: Sequence[Crossing],
    sys: ParticleSystem,
    params: ModelParams,
    E_min: float | None = None,
    E_max: float | None = None,
    points: int = 2000,
) -> Spectrum:
    """P_T and K4 on a log-spaced energy grid with per-crossing attribution."""
    if not crossings:
        raise ValidationError("channel set is empty")
    lo, hi = default_energy_range(crossings)
    E_min = lo if E_min is None else E_min
    E_max = hi if E_max is None else E_max
    if not (0 < E_min < E_max) or points < 2:
        raise ValidationError("energy grid needs 0 < E_min < E_max and at least 2 points")
    E = np.geomspace(E_min, E_max, points)
    P = total_probability(E, crossings, sys, params)
    peaks = [
        PeakRecord(
            c.initial.alpha,
            c.initial.m,
            c.final_n,
            c.R4c,
            c.lambda_c,
            peak_energy(c.final_n, c.initial.alpha, c.initial.m, sys, params),
            lz_peak_energy(c, sys, params),
        )
        for c in crossings
    ]
    return Spectrum(E, P, k4_rate(E, P, sys), peaks)


def energy_window(sys: ParticleSystem, params: ModelParams) -> tuple[float, float]:
    """(1/(2 mu4 a_AA^2), 1/(2 mu4 a_AB^2)); the lower bound is 0 for infinite a_AA."""
    lo = 0.0 if params.a_AA_is_infinite else 1.0 / (2.0 * sys.mu4 * params.a_AA**2)
    hi = math.inf if params.a_AB == 0 else 1.0 / (2.0 * sys.mu4 * params.a_AB**2)
    return lo, hi


# -- finite a_AA threshold regime -------------------------------------------------


def trimer_wavenumber(n: int, sys: ParticleSystem, params: ModelParams) -> float:
    """Zero-energy wave number k_n for recombination into trimer n."""
    c = universal_constants()
    return 2.0 / params.R0 * sys.mu4 / sys.mu3 * math.exp(-(n * math.pi + c.gamma) / c.s0)


@dataclass(frozen=True)
class ThresholdModel:
    n: int
    a_AA: float
    Phi: float
    k_n: float
    amplitude: float = 1.0

    def __post_init__(self):
        if math.isinf(self.a_AA):
            raise ModeError("threshold law is undefined for infinite a_AA")
        if self.a_AA >= 0:
            raise ValidationError("threshold law needs a negative a_AA")


def threshold_model(n: int, sys: ParticleSystem, params: ModelParams) -> ThresholdModel:
    if params.a_AA_is_infinite:
        raise ModeError("threshold law is undefined for infinite a_AA")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    return ThresholdModel(n, params.a_AA, params.Phi, trimer_wavenumber(n, sys, params))


def dominant_trimer(a_AA: float, sys: ParticleSystem, params: ModelParams) -> int:
    """Most weakly bound trimer that fits inside |a_AA|: largest n with k_n |a_AA| >= 1."""
    k1 = trimer_wavenumber(1, sys, params)
    ratio = universal_constants().length_ratio
    n = 1 + math.floor(math.log(k1 * abs(a_AA)) / math.log(ratio))
    return max(n, 1)


def threshold_probability(k, model: ThresholdModel):
    """P = amplitude (k |a_AA|)^7 sin^2(k_n |a_AA| + Phi)."""
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValidationError("k must be positive")
    a = abs(model.a_AA)
    out = model.amplitude * (k * a) ** 7 * np.sin(model.k_n * a + model.Phi) ** 2
    return float(out) if out.ndim == 0 else out


def threshold_rate(k, model: ThresholdModel):
    return threshold_probability(k, model) / np.asarray(k, dtype=float) ** 7


def count_oscillations(model: ThresholdModel, a_lo: float, a_hi: float) -> int:
    """Number of maxima of sin^2(k_n a + Phi) with a in [a_lo, a_hi]."""
    if not (0 < a_lo <= a_hi):
        raise ValidationError("need 0 < a_lo <= a_hi")
    if a_lo == a_hi:
        return 0
    # maxima at k_n a + Phi = pi/2 + j pi
    j_lo = math.ceil((model.k_n * a_lo + model.Phi - 0.5 * math.pi) / math.pi)
    j_hi = math.floor((model.k_n * a_hi + model.Phi - 0.5 * math.pi) / math.pi)
    return max(0, j_hi - j_lo + 1)


def oscillation_index(model: ThresholdModel, a: float) -> int:
    """Index of the sin^2 period that |a| falls in."""
    return math.floor((model.k_n * abs(a) + model.Phi) / math.pi)
