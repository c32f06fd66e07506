"""Particle masses, model parameters and channel labels for the A+A+A+B system.

All quantities are in atomic units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class ParticleSystem:
    """Three identical bosons A plus one distinguishable atom B.

    The derived reduced masses follow the hyperspherical construction in
    which the four-body coordinates are built from the three-body ones.
    """

    m_A: float
    m_B: float
    mu_AB: float = field(init=False)
    mu3: float = field(init=False)
    mu34: float = field(init=False)
    mu4: float = field(init=False)

    def __post_init__(self):
        for name in ("m_A", "m_B"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a positive finite mass, got {value!r}")
        m_A, m_B = float(self.m_A), float(self.m_B)
        mu3 = m_A / math.sqrt(3.0)
        mu34 = 3.0 * m_A * m_B / (3.0 * m_A + m_B)
        object.__setattr__(self, "mu_AB", m_A * m_B / (m_A + m_B))
        object.__setattr__(self, "mu3", mu3)
        object.__setattr__(self, "mu34", mu34)
        object.__setattr__(self, "mu4", math.sqrt(mu3 * mu34))

    @property
    def core_ratio(self) -> float:
        """sqrt(mu3/mu4): converts R0 into the hyperradius of the hard core."""
        return math.sqrt(self.mu3 / self.mu4)


INFINITE = math.inf


@dataclass(frozen=True)
class ModelParams:
    """Regularization radius, scattering lengths and coupling constants.

    ``a_AA`` is ``math.inf`` (the main operating mode) or a finite negative
    length; a finite value is only consumed by the threshold law.
    """

    R0: float = 10.0
    a_AB: float = 100.0
    a_AA: float = INFINITE
    beta: float = 1e-3
    Phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.R0) and self.R0 > 0):
            raise ValidationError(f"R0 must be positive, got {self.R0!r}")
        if not math.isfinite(self.a_AB):
            raise ValidationError(f"a_AB must be finite, got {self.a_AB!r}")
        if math.isnan(self.a_AA):
            raise ValidationError("a_AA must be a number or inf")
        if math.isfinite(self.a_AA) and self.a_AA >= 0:
            raise ValidationError(
                f"finite a_AA must be negative (no weakly bound dimers), got {self.a_AA!r}"
            )
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValidationError(f"beta must be positive, got {self.beta!r}")
        if not math.isfinite(self.Phi):
            raise ValidationError(f"Phi must be finite, got {self.Phi!r}")

    @property
    def a_AA_is_infinite(self) -> bool:
        return math.isinf(self.a_AA)


@dataclass(frozen=True, order=True)
class AtomTrimer:
    """Atom-trimer channel; ``n`` labels the Efimov state (1 is the deepest)."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"trimer index n must be an integer >= 1, got {self.n!r}")

    kind = "trimer"


@dataclass(frozen=True, order=True)
class Continuum:
    """Four-body continuum channel built on the three-body continuum constant s_alpha."""

    alpha: int
    m: int = 0

    def __post_init__(self):
        if not isinstance(self.alpha, int) or self.alpha < 1:
            raise ValidationError(f"alpha must be an integer >= 1, got {self.alpha!r}")
        if not isinstance(self.m, int) or self.m < 0:
            raise ValidationError(f"m must be an integer >= 0, got {self.m!r}")

    kind = "continuum"


ChannelId = Union[AtomTrimer, Continuum]


def build_system(m_A: float, m_B: float) -> ParticleSystem:
    return ParticleSystem(m_A, m_B)


def hard_core_radius(sys: ParticleSystem, p: ModelParams) -> float:
    """Hyperradius at which the regularization wall fills the whole hyperangle range."""
    return sys.core_ratio * p.R0


def alpha_min(R4: float, sys: ParticleSystem, p: ModelParams) -> float:
    """Hyperangle below which the channel functions vanish (R3 <= R0).

    Raises DomainError when ``R4`` lies at or inside the regularization core.
    """
    x = sys.core_ratio * p.R0 / R4
    if not (R4 > 0 and x < 1.0):
        raise DomainError(
            f"hyperradius inside regularization core: R4={float(R4):.6g} <= {hard_core_radius(sys, p):.6g}"
        )
    return math.asin(x)
