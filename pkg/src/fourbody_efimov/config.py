"""Run configuration: a flat ``key = value`` text format.

Blank lines and ``#`` comments are ignored.  ``m_A`` and ``m_B`` are required;
everything else has a default, and every default that gets applied is logged.
Optional grid bounds accept ``auto``; ``a_AA`` accepts ``inf``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, fields, replace

from .errors import ValidationError
from .system import ModelParams, ParticleSystem

log = logging.getLogger(__name__)


class ConfigError(ValidationError):
    pass


@dataclass(frozen=True)
class RunConfig:
    m_A: float
    m_B: float
    R0: float = 10.0
    a_AB: float = 100.0
    a_AA: float = math.inf
    beta: float = 1e-3
    Phi: float = 0.0
    alpha_max: int = 2
    m_max: int = 2
    n_max: int = 6
    R4_min: float | None = None  # auto: 1.1 x hard-core radius
    R4_max: float | None = None  # auto: 1e4 R0
    R4_points: int = 120
    E_min: float | None = None  # auto: half the lowest crossing energy
    E_max: float | None = None  # auto: twice the highest crossing energy
    E_points: int = 2000
    a_sweep_factor: float = 515.0
    a_points: int = 2000
    threshold_k: float | None = None  # auto: 1e-3 / largest |a_AA| in the sweep
    strict: bool = False
    numeric_crossings: bool = False

    def __post_init__(self):
        # constructing these runs their own validation
        self.system
        self.params
        for name in ("alpha_max", "n_max"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if self.m_max < 0:
            raise ConfigError("m_max must be >= 0")
        for name in ("R4_points", "E_points", "a_points"):
            if getattr(self, name) < 2:
                raise ConfigError(f"{name} must be >= 2")
        for lo, hi in (("R4_min", "R4_max"), ("E_min", "E_max")):
            a, b = getattr(self, lo), getattr(self, hi)
            for name, v in ((lo, a), (hi, b)):
                if v is not None and not (math.isfinite(v) and v > 0):
                    raise ConfigError(f"{name} must be positive")
            if a is not None and b is not None and not a < b:
                raise ConfigError(f"{lo} must be smaller than {hi}")
        if not self.a_sweep_factor > 1:
            raise ConfigError("a_sweep_factor must exceed 1")
        if self.threshold_k is not None and not self.threshold_k > 0:
            raise ConfigError("threshold_k must be positive")

    @property
    def system(self) -> ParticleSystem:
        return ParticleSystem(self.m_A, self.m_B)

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.R0, self.a_AB, self.a_AA, self.beta, self.Phi)

    def to_dict(self) -> dict:
        return asdict(self)


_FIELDS = {f.name: f for f in fields(RunConfig)}
REQUIRED = ("m_A", "m_B")
_INT_KEYS = {"alpha_max", "m_max", "n_max", "R4_points", "E_points", "a_points"}
_BOOL_KEYS = {"strict", "numeric_crossings"}
_AUTO_KEYS = {"R4_min", "R4_max", "E_min", "E_max", "threshold_k"}


def _parse_value(key: str, raw: str, lineno: int):
    raw = raw.strip().strip('"').strip("'")
    try:
        if key in _BOOL_KEYS:
            low = raw.lower()
            if low in ("true", "yes", "1"):
                return True
            if low in ("false", "no", "0"):
                return False
            raise ValueError(raw)
        if key in _AUTO_KEYS and raw.lower() == "auto":
            return None
        if key == "a_AA" and raw.lower() in ("inf", "infinite", "+inf"):
            return math.inf
        if key in _INT_KEYS:
            return int(raw)
        value = float(raw)
    except ValueError:
        raise ConfigError(f"line {lineno}: malformed value for {key}: {raw!r}") from None
    if math.isnan(value) or (math.isinf(value) and key != "a_AA"):
        raise ConfigError(f"line {lineno}: {key} must be finite, got {raw!r}")
    return value


def parse_config(text: str) -> RunConfig:
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw, lineno)
    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required key(s): {', '.join(missing)}")
    for name, f in _FIELDS.items():
        if name not in values:
            log.info("default applied: %s = %s", name, format_value(f.default))
    try:
        return RunConfig(**values)
    except ValidationError as exc:
        raise ConfigError(str(exc)) from None


def defaults_applied(text: str) -> list[str]:
    present = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if "=" in line:
            present.add(line.split("=", 1)[0].strip())
    return [k for k in _FIELDS if k not in present]


def format_value(v) -> str:
    if v is None:
        return "auto"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "inf" if math.isinf(v) else repr(v)
    return str(v)


def dump_config(cfg: RunConfig) -> str:
    return "".join(f"{k} = {format_value(v)}\n" for k, v in cfg.to_dict().items())


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})
