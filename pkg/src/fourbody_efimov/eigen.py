"""Hyperangular eigenproblem of the four-body channels.

For fixed hyperradius R4 the channel functions solve

    -u''(a) + strength / sin(a)**2 * u(a) = lam_sq * u(a),   alpha_min < a < pi/2,

with u = 0 at both ends.  ``strength`` is -(s0**2 + 1/4) for atom-trimer
channels and s_alpha**2 - 1/4 for four-body continuum channels.

Two independent solvers are provided.  The closed form uses the Gauss
hypergeometric solution regular at pi/2 and root-finds the wall condition;
the numeric solver discretizes the Sturm-Liouville operator on a grid that
is logarithmic near the wall and is the production path.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from .constants import UniversalConstants, universal_constants
from .errors import AccuracyWarning, ConvergenceError, NumericalError, ValidationError
from .hypergeometric import gauss_2f1
from .system import AtomTrimer, ChannelId, Continuum, ModelParams, ParticleSystem, alpha_min

HALF_PI = 0.5 * math.pi
RELIABILITY_CEILING = 30.0
DEFAULT_RESOLUTION = 400  # grid points per unit of ln tan(a/2)
MIN_POINTS = 2000
BISECTION_TOL = 1e-280


@dataclass(frozen=True)
class EigenProblem:
    channel: ChannelId
    R4: float
    alpha_min: float
    strength: float
    s: float  # s0 for atom-trimer channels, s_alpha for continuum channels

    def __post_init__(self):
        if not (0.0 < self.alpha_min < HALF_PI):
            raise ValidationError(f"alpha_min must lie in (0, pi/2), got {self.alpha_min!r}")
        if (self.strength < 0) != isinstance(self.channel, AtomTrimer):
            raise ValidationError("strength must be negative exactly for atom-trimer channels")

    @property
    def is_trimer(self) -> bool:
        return isinstance(self.channel, AtomTrimer)

    @property
    def level(self) -> int:
        """1-based eigenvalue index of ``channel`` within its problem."""
        if isinstance(self.channel, AtomTrimer):
            return self.channel.n
        return self.channel.m + 1


def make_problem(
    channel: ChannelId,
    R4: float,
    sys: ParticleSystem,
    params: ModelParams,
    consts: UniversalConstants | None = None,
) -> EigenProblem:
    consts = consts or universal_constants()
    amin = alpha_min(R4, sys, params)
    if isinstance(channel, AtomTrimer):
        s = consts.s0
        strength = -(s * s + 0.25)
    else:
        s = consts.s(channel.alpha)
        strength = s * s - 0.25
    return EigenProblem(channel, float(R4), amin, strength, s)


def _spectral_exponent(channel: ChannelId, s: float) -> complex:
    # the "i s" of the trimer solution; s -> i s_alpha for the continuum
    if isinstance(channel, AtomTrimer):
        return 1j * s
    return complex(-s)


def u_closed_form(channel: ChannelId, lam: complex, alpha4: float, s: float) -> complex:
    """Unnormalized closed-form channel function, u ~ cos(alpha4) near pi/2."""
    if not (0.0 < alpha4 <= HALF_PI):
        raise ValidationError(f"alpha4 must lie in (0, pi/2], got {alpha4!r}")
    cos_a = math.cos(alpha4)
    if alpha4 == HALF_PI or cos_a == 0.0:
        return 0j
    i_s = _spectral_exponent(channel, s)
    lam = complex(lam)
    a = 0.75 + 0.5 * i_s - 0.5 * lam
    b = 0.75 + 0.5 * i_s + 0.5 * lam
    z = cos_a * cos_a
    pref = cos_a * cmath.exp((0.5 + i_s) * math.log(math.sin(alpha4)))
    return pref * gauss_2f1(a, b, 1.5, z)


def _lam_from_sq(lam_sq: float) -> complex:
    return cmath.sqrt(complex(lam_sq))


# Close to pi/2 the regular solution behaves as cos(a) * 2F1(.., cos(a)**2) with
# the 2F1 factor near 1, so u/cos(a) there has no zero and fixes the global phase.
ALPHA_REF_OFFSET = 1e-4


def _wall_residual(problem: EigenProblem, lam_sq: float, alpha_ref: float) -> float:
    lam = _lam_from_sq(lam_sq)
    ref = u_closed_form(problem.channel, lam, alpha_ref, problem.s)
    phase = cmath.exp(-1j * cmath.phase(ref)) if ref != 0 else 1.0
    wall = u_closed_form(problem.channel, lam, problem.alpha_min, problem.s)
    return (phase * wall).real


def _count_nodes(problem: EigenProblem, lam_sq: float, npts: int = 600) -> int:
    # Sturm oscillation: eigenvalues below lam_sq <-> interior zeros of the
    # solution regular at pi/2
    lam = _lam_from_sq(lam_sq)
    t = np.linspace(math.log(math.tan(0.5 * problem.alpha_min)), 0.0, npts + 2)[1:-1]
    alphas = 2.0 * np.arctan(np.exp(t))
    vals = np.array([u_closed_form(problem.channel, lam, a, problem.s) for a in alphas])
    ref = u_closed_form(problem.channel, lam, HALF_PI - ALPHA_REF_OFFSET, problem.s)
    re = (vals * np.exp(-1j * np.angle(ref))).real
    return int(np.count_nonzero(np.sign(re[1:]) * np.sign(re[:-1]) < 0))


def eigenvalues_closed_form(
    problem: EigenProblem,
    count: int,
    ceiling: float = RELIABILITY_CEILING,
    tol: float = 1e-13,
) -> np.ndarray:
    """Lowest ``count`` eigenvalues lam**2 from the hypergeometric solution.

    The wall condition is root-found in the signed variable t = sign(lam_sq) |lam|,
    scanning upward from -ceiling.  Roots beyond |lam| = ceiling are refused
    because the series loses accuracy there; use eigenvalues_numeric instead.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    alpha_ref = HALF_PI - ALPHA_REF_OFFSET
    if problem.strength < 0:
        v_floor = problem.strength / math.sin(problem.alpha_min) ** 2
    else:
        v_floor = problem.strength
    t_lo = -ceiling
    if v_floor < -ceiling**2:
        if _count_nodes(problem, -ceiling**2) > 0:
            raise NumericalError(
                f"eigenvalues below -{ceiling}**2 exist; closed form beyond its reliability "
                "ceiling, use eigenvalues_numeric"
            )
    else:
        t_lo = -math.sqrt(-v_floor) if v_floor < 0 else math.sqrt(v_floor)

    def f(t):
        return _wall_residual(problem, t * abs(t), alpha_ref)

    roots: list[float] = []
    t = t_lo
    ft = f(t)
    while len(roots) < count:
        step = 0.02
        t_next = min(t + step, ceiling)
        if t_next <= t:
            raise NumericalError(
                f"found only {len(roots)} of {count} eigenvalues below |lam| = {ceiling}; "
                "use eigenvalues_numeric"
            )
        f_next = f(t_next)
        if ft == 0.0:
            roots.append(t)
        elif ft * f_next < 0:
            roots.append(brentq(f, t, t_next, xtol=tol, rtol=1e-15))
        t, ft = t_next, f_next
    roots_arr = np.array(roots[:count])
    return roots_arr * np.abs(roots_arr)


@dataclass
class ChannelSolution:
    problem: EigenProblem
    lambda_sq: np.ndarray  # Richardson-extrapolated eigenvalues
    alpha: np.ndarray  # grid including both Dirichlet endpoints
    eigenfunctions: np.ndarray  # shape (count, len(alpha)), unit L2 norm in alpha
    error_estimate: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def U(self, mu4: float) -> np.ndarray:
        return (self.lambda_sq - 0.25) / (2.0 * mu4 * self.problem.R4**2)


def _grid(alpha_lo: float, npts_interior: int) -> tuple[np.ndarray, float]:
    t_lo = math.log(math.tan(0.5 * alpha_lo))
    return np.linspace(t_lo, 0.0, npts_interior + 2), -t_lo / (npts_interior + 1)


def _discretize(t: np.ndarray, h: float, strength: float):
    # -d/dt (1/g du/dt) + strength/g u = lam_sq g u, with g = da/dt = sin(a)
    ti = t[1:-1]
    g = np.sin(2.0 * np.arctan(np.exp(ti)))
    th = 0.5 * (t[1:] + t[:-1])
    inv_gh = 1.0 / np.sin(2.0 * np.arctan(np.exp(th)))
    diag = (inv_gh[:-1] + inv_gh[1:]) / h**2 + strength / g
    off = -inv_gh[1:-1] / h**2
    w = 1.0 / np.sqrt(g)
    return diag * w * w, off * w[:-1] * w[1:], g


def _solve_grid(problem: EigenProblem, count: int, npts: int, vectors: bool):
    t, h = _grid(problem.alpha_min, npts)
    d, e, g = _discretize(t, h, problem.strength)
    # Sturm-sequence bisection to a tiny absolute tolerance keeps the shallow
    # levels accurate even when the graded grid makes ||T|| enormous.
    out = eigh_tridiagonal(
        d,
        e,
        eigvals_only=not vectors,
        select="i",
        select_range=(0, count - 1),
        lapack_driver="stebz",
        tol=BISECTION_TOL,
    )
    return t, h, g, out


def grid_points(problem: EigenProblem, resolution: int = DEFAULT_RESOLUTION) -> int:
    span = -math.log(math.tan(0.5 * problem.alpha_min))
    if problem.is_trimer and resolution * math.pi / problem.s < 20:
        raise ValidationError("resolution below 20 points per log-period of the Efimov oscillation")
    return max(MIN_POINTS, int(math.ceil(resolution * span)))


def eigenvalues_numeric(
    problem: EigenProblem,
    count: int,
    resolution: int = DEFAULT_RESOLUTION,
    rtol: float = 1e-4,
    strict: bool = False,
    richardson: bool = True,
) -> ChannelSolution:
    """Lowest ``count`` eigenpairs of the discretized operator.

    The grid is uniform in t = ln tan(a/2), which is logarithmic in a near the
    wall and regular at pi/2.  Eigenvalues are Richardson-extrapolated from
    two grids (h and h/2); eigenfunctions come from the finer grid.

    The reported ``error_estimate`` is |fine - coarse| / 3, the error of the
    fine-grid value.  It bounds the extrapolated value conservatively, which
    is typically several orders more accurate; ``rtol`` is checked against it.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    n_coarse = grid_points(problem, resolution)
    n_fine = 2 * n_coarse + 1  # exactly halves the spacing
    t, h, g, (w_fine, v) = _solve_grid(problem, count, n_fine, vectors=True)
    if richardson:
        _, _, _, w_coarse = _solve_grid(problem, count, n_coarse, vectors=False)
        lam_sq = (4.0 * w_fine - w_coarse) / 3.0
        err = np.abs(w_fine - w_coarse) / 3.0
    else:
        lam_sq = w_fine
        err = np.full_like(w_fine, np.nan)
    if richardson:
        bad = err > rtol * np.maximum(1.0, np.abs(lam_sq))
        if np.any(bad):
            msg = (
                f"estimated discretization error {err.max():.3g} exceeds rtol={rtol} "
                f"for {problem.channel} at R4={problem.R4}"
            )
            if strict:
                raise NumericalError(msg)
            warnings.warn(msg, AccuracyWarning, stacklevel=2)

    # v holds sqrt(g h) * u on the interior nodes
    u = v.T / np.sqrt(g * h)[None, :]
    for row in u:
        # fix sign: positive slope off the wall
        k = np.argmax(np.abs(row) > 1e-8 * np.abs(row).max())
        if row[k] < 0:
            row *= -1.0
    alpha = 2.0 * np.arctan(np.exp(t))
    alpha[-1] = HALF_PI
    funcs = np.zeros((count, alpha.size))
    funcs[:, 1:-1] = u
    return ChannelSolution(problem, lam_sq, alpha, funcs, err)


def solve_channel(
    channel: ChannelId,
    R4: float,
    sys: ParticleSystem,
    params: ModelParams,
    count: int | None = None,
    **kwargs,
) -> ChannelSolution:
    """Numeric eigenpairs up to (at least) the level that ``channel`` selects."""
    problem = make_problem(channel, R4, sys, params)
    return eigenvalues_numeric(problem, count or problem.level, **kwargs)


def overlap(solution: ChannelSolution, i: int, j: int) -> float:
    return float(np.trapezoid(solution.eigenfunctions[i] * solution.eigenfunctions[j], solution.alpha))


def node_count(f: np.ndarray, rel: float = 1e-9) -> int:
    scale = np.abs(f).max()
    s = np.sign(np.where(np.abs(f) > rel * scale, f, 0.0))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


__all__ = [
    "EigenProblem",
    "ChannelSolution",
    "make_problem",
    "u_closed_form",
    "eigenvalues_closed_form",
    "eigenvalues_numeric",
    "solve_channel",
    "node_count",
    "overlap",
    "Continuum",
    "ConvergenceError",
]
