"""Command-line front end.

    fourbody-efimov {constants,potentials,peaks,spectrum,threshold} --config FILE [--out DIR]

Every subcommand writes ``<name>.csv`` (``constants.json`` for constants) and a
``<name>.meta.json`` sidecar holding the resolved configuration, the tool
version and the wall time.  Exit status: 0 success, 1 validation error,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .channels import potential_curves
from .config import RunConfig, defaults_applied, parse_config, with_overrides
from .constants import universal_constants
from .errors import AccuracyWarning, NumericalError, ValidationError
from .recombination import (
    default_pairs,
    dominant_trimer,
    energy_window,
    find_crossings,
    oscillation_index,
    spectrum,
    threshold_model,
    threshold_probability,
)
from .system import AtomTrimer, Continuum, hard_core_radius

log = logging.getLogger("fourbody_efimov")

SUBCOMMANDS = ("constants", "potentials", "peaks", "spectrum", "threshold")

COLUMNS = {
    "potentials": ["R4", "channel_kind", "alpha", "index", "U", "Q", "W", "W_scaled"],
    "peaks": ["alpha", "m", "n", "R4c", "lambda_c", "E_peak_formula", "E_peak_numeric"],
    "spectrum": ["E", "P_T", "K4"],
    "threshold": ["a_AA", "k", "P", "K4", "oscillation_index"],
}


def fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.11e}"


def render_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


# -- subcommand bodies: each returns (text, extra metadata) ------------------------


def run_constants(cfg: RunConfig):
    return json.dumps(universal_constants().as_dict(), indent=2) + "\n", {}


def potentials_grid(cfg: RunConfig) -> np.ndarray:
    core = hard_core_radius(cfg.system, cfg.params)
    lo = cfg.R4_min if cfg.R4_min is not None else 1.1 * core
    hi = cfg.R4_max if cfg.R4_max is not None else 1e4 * cfg.R0
    if not lo < hi:
        raise ValidationError(f"R4 range empty: R4_min={lo} >= R4_max={hi}")
    return np.geomspace(lo, hi, cfg.R4_points)


def run_potentials(cfg: RunConfig):
    sys_, params = cfg.system, cfg.params
    channels = [AtomTrimer(n) for n in range(1, cfg.n_max + 1)]
    channels += [
        Continuum(a, m) for a in range(1, cfg.alpha_max + 1) for m in range(cfg.m_max + 1)
    ]
    grid = potentials_grid(cfg)
    curves = potential_curves(channels, grid, sys_, params, strict=cfg.strict)
    rows = []
    for i, R4 in enumerate(grid):
        scale = 2.0 * sys_.mu4 * R4**2
        for c in curves:
            ch = c.channel
            if isinstance(ch, AtomTrimer):
                kind, alpha, index = "trimer", 0, ch.n
            else:
                kind, alpha, index = "continuum", ch.alpha, ch.m
            rows.append((R4, kind, alpha, index, c.U[i], c.Q[i], c.W[i], scale * c.W[i]))
    return render_csv(COLUMNS["potentials"], rows), {}


def _crossings(cfg: RunConfig, numeric: bool):
    pairs = default_pairs(cfg.alpha_max, cfg.m_max, cfg.n_max)
    return find_crossings(pairs, cfg.system, cfg.params, numeric=numeric)


def run_peaks(cfg: RunConfig):
    from .recombination import peak_energy
    from .channels import crossing_numeric

    sys_, params = cfg.system, cfg.params
    rows = []
    for c in _crossings(cfg, numeric=False):
        e_num = ""
        if cfg.numeric_crossings:
            cn = crossing_numeric(c.final_n, c.initial, sys_, params, strict=cfg.strict)
            e_num = cn.W_c if cn is not None else ""
        rows.append(
            (
                c.initial.alpha,
                c.initial.m,
                c.final_n,
                c.R4c,
                c.lambda_c,
                peak_energy(c.final_n, c.initial.alpha, c.initial.m, sys_, params),
                e_num,
            )
        )
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return render_csv(COLUMNS["peaks"], rows), {}


def run_spectrum(cfg: RunConfig):
    sys_, params = cfg.system, cfg.params
    crossings = _crossings(cfg, numeric=cfg.numeric_crossings)
    sp = spectrum(crossings, sys_, params, cfg.E_min, cfg.E_max, cfg.E_points)
    rows = zip(sp.E_grid, sp.P_T, sp.K4)
    lo, hi = energy_window(sys_, params)
    meta = {
        "energy_window": {"E_low": lo, "E_high": hi if math.isfinite(hi) else None},
        "peaks": [p.__dict__ for p in sp.peaks],
    }
    return render_csv(COLUMNS["spectrum"], rows), meta


def run_threshold(cfg: RunConfig):
    sys_, params = cfg.system, cfg.params
    threshold_model(1, sys_, params)  # raises ModeError for infinite a_AA
    a0 = abs(cfg.a_AA)
    a_values = -np.geomspace(a0, a0 * cfg.a_sweep_factor, cfg.a_points)
    k = cfg.threshold_k if cfg.threshold_k is not None else 1e-3 / (a0 * cfg.a_sweep_factor)
    rows = []
    for a in a_values:
        p_a = with_overrides(cfg, a_AA=float(a)).params
        model = threshold_model(dominant_trimer(a, sys_, p_a), sys_, p_a)
        P = threshold_probability(k, model)
        rows.append((a, k, P, P / k**7, oscillation_index(model, a)))
    lo, hi = energy_window(sys_, params)
    meta = {"energy_window": {"E_low": lo, "E_high": hi if math.isfinite(hi) else None}}
    return render_csv(COLUMNS["threshold"], rows), meta


RUNNERS = {
    "constants": run_constants,
    "potentials": run_potentials,
    "peaks": run_peaks,
    "spectrum": run_spectrum,
    "threshold": run_threshold,
}


def run(subcommand: str, cfg: RunConfig, out_dir: Path | str, config_text: str | None = None) -> int:
    """Execute one subcommand, writing its output and metadata sidecar into ``out_dir``."""
    if subcommand not in RUNNERS:
        log.error("unknown subcommand %r", subcommand)
        return 1
    out_dir = Path(out_dir)
    t0 = time.perf_counter()
    try:
        with warnings.catch_warnings():
            if cfg.strict:
                warnings.simplefilter("error", AccuracyWarning)
            text, extra = RUNNERS[subcommand](cfg)
    except ValidationError as exc:
        log.error("%s", exc)
        return 1
    except (NumericalError, AccuracyWarning) as exc:
        log.error("numerical failure: %s", exc)
        return 2
    out_dir.mkdir(parents=True, exist_ok=True)
    name = "constants.json" if subcommand == "constants" else f"{subcommand}.csv"
    (out_dir / name).write_text(text)
    if subcommand == "constants":
        sys.stdout.write(text)
    meta = {
        "subcommand": subcommand,
        "tool": "fourbody-efimov",
        "version": __version__,
        "config": {k: ("inf" if isinstance(v, float) and math.isinf(v) else v) for k, v in cfg.to_dict().items()},
        "defaults_applied": defaults_applied(config_text) if config_text is not None else None,
        "output": name,
        "wall_time_s": time.perf_counter() - t0,
    }
    meta.update(extra)
    (out_dir / f"{subcommand}.meta.json").write_text(json.dumps(meta, indent=2, default=float) + "\n")
    log.info("wrote %s", out_dir / name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path, help="key = value config file")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")
    common.add_argument("--strict", action="store_true", help="promote accuracy warnings to errors")
    common.add_argument(
        "--numeric-crossings",
        action="store_true",
        help="root-find crossings on the computed potentials instead of the closed form",
    )
    ap = argparse.ArgumentParser(
        prog="fourbody-efimov",
        description="Four-body A+A+A+B recombination into Efimov trimers",
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="[%(name)s] %(message)s", stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text()
        cfg = parse_config(text)
    except OSError as exc:
        log.error("cannot read config: %s", exc)
        return 1
    except ValidationError as exc:
        log.error("%s", exc)
        return 1
    if args.strict or args.numeric_crossings:
        cfg = with_overrides(
            cfg,
            strict=True if args.strict else None,
            numeric_crossings=True if args.numeric_crossings else None,
        )
    return run(args.subcommand, cfg, args.out, text)


if __name__ == "__main__":
    sys.exit(main())
