"""Run configuration: a flat, fully validated key=value table.

Configs load from a plain-text file (one key=value per line, # comments),
with command-line overrides taking precedence.  Unknown keys are rejected
with an edit-distance suggestion; every constraint violation names the
field, the constraint, and the offending value.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from .errors import ConfigError


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_int_tuple(text: str) -> tuple:
    return tuple(int(part) for part in text.split(",") if part.strip())


def _parse_float_tuple(text: str) -> tuple:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _parse_pairs(text: str) -> tuple:
    """\"64:64;128:128\" -> ((64, 64), (128, 128))"""
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, _, b = chunk.partition(":")
        pairs.append((int(a), int(b)))
    return tuple(pairs)


@dataclass
class RunConfig:
    """Flat parameter table shared by all subcommands."""

    out_dir: str = "out"
    seed: int = 0
    dimension: int = 1
    grid_log2: int = 8
    sigma: float = 0.05
    psf: str = "gauss"
    psf_decay: float = 1.5
    noise_scale: float = 1.0
    prior: str = "besov"
    s: float = 1.0
    p: float = 1.0
    alpha: float = 1.0
    order: int = 2
    proj_kind: str = "fourier_trunc"
    trunc_kind: str = "auto"  # resolved by prior kind
    wavelet_family: int = 4
    n: int = 64
    k: int = 64
    n_ladder: tuple = (8, 16, 32, 64, 128, 256)
    k_ladder: tuple = (8, 16, 32, 64, 128, 256)
    nk_pairs: tuple = ((64, 64), (128, 128), (256, 256))
    mcmc_iters: int = 20000
    mcmc_burn_in: int = -1  # -1: default 20% of the chain
    mcmc_thin: int = 1
    proposal_scale: float = 1.0
    quantile_level: float = 0.95
    measurement_kind: str = "practical_mk"
    truth: str = "bumps"  # bumps | prior | zero
    input_measurement: str = ""
    example: int = 1
    n_samples: int = 4000
    phi: str = "smooth"
    backend: str = "gaussian"
    norm_ladder: tuple = (0.1, 1.0, 10.0)
    deltas: tuple = (1e-2, 1e-3, 1e-4)
    n_directions: int = 3
    alpha_gaussian: float = 0.1
    alpha_besov: float = 4.0
    make_png: bool = True


_PARSERS = {
    int: int,
    float: float,
    str: str,
    bool: _parse_bool,
}

_TUPLE_PARSERS = {
    "n_ladder": _parse_int_tuple,
    "k_ladder": _parse_int_tuple,
    "norm_ladder": _parse_float_tuple,
    "deltas": _parse_float_tuple,
    "nk_pairs": _parse_pairs,
}

# field -> (predicate, constraint description)
_CONSTRAINTS = {
    "dimension": (lambda v: v in (1, 2), "dimension must be 1 or 2"),
    "grid_log2": (lambda v: 0 <= v <= 14, "grid_log2 must be in 0..14"),
    "sigma": (lambda v: v > 0, "sigma must be > 0"),
    "psf": (lambda v: v in ("gauss", "poly"), "psf must be gauss or poly"),
    "psf_decay": (lambda v: v > 0, "psf_decay must be > 0"),
    "noise_scale": (lambda v: v >= 0, "noise_scale must be >= 0"),
    "prior": (lambda v: v in ("besov", "gaussian_smoothness"),
              "prior must be besov or gaussian_smoothness"),
    "p": (lambda v: v >= 1, "p must be >= 1"),
    "alpha": (lambda v: v > 0, "alpha must be > 0"),
    "order": (lambda v: v >= 1, "order must be >= 1"),
    "proj_kind": (lambda v: v in ("fourier_trunc", "wavelet_trunc"),
                  "proj_kind must be fourier_trunc or wavelet_trunc"),
    "trunc_kind": (lambda v: v in ("auto", "fourier_trunc", "wavelet_trunc"),
                   "trunc_kind must be auto, fourier_trunc, or wavelet_trunc"),
    "wavelet_family": (lambda v: 1 <= v <= 8, "wavelet_family must be in 1..8"),
    "n": (lambda v: v >= 1, "n must be >= 1"),
    "k": (lambda v: v >= 1, "k must be >= 1"),
    "mcmc_iters": (lambda v: v >= 10, "mcmc_iters must be >= 10"),
    "mcmc_thin": (lambda v: v >= 1, "mcmc_thin must be >= 1"),
    "proposal_scale": (lambda v: v > 0, "proposal_scale must be > 0"),
    "quantile_level": (lambda v: 0 < v < 1, "quantile_level must be in (0, 1)"),
    "measurement_kind": (lambda v: v in ("continuum_m", "practical_mk", "computational_mkn"),
                         "measurement_kind must be a known model"),
    "truth": (lambda v: v in ("bumps", "prior", "zero"),
              "truth must be bumps, prior, or zero"),
    "example": (lambda v: 1 <= v <= 5, "example must be in 1..5"),
    "n_samples": (lambda v: v >= 1, "n_samples must be >= 1"),
    "phi": (lambda v: v in ("const", "smooth"), "phi must be const or smooth"),
    "backend": (lambda v: v in ("gaussian", "laplace_quadrature"),
                "backend must be gaussian or laplace_quadrature"),
    "n_directions": (lambda v: v >= 1, "n_directions must be >= 1"),
    "alpha_gaussian": (lambda v: v > 0, "alpha_gaussian must be > 0"),
    "alpha_besov": (lambda v: v > 0, "alpha_besov must be > 0"),
}


def _field_types():
    return {f.name: f.type for f in fields(RunConfig)}


def _known_keys():
    return [f.name for f in fields(RunConfig)]


def parse_value(key: str, text: str):
    if key in _TUPLE_PARSERS:
        parser = _TUPLE_PARSERS[key]
    else:
        ftype = {f.name: type(getattr(RunConfig(), f.name)) for f in fields(RunConfig)}[key]
        parser = _PARSERS.get(ftype, str)
    try:
        return parser(text)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"field {key}: cannot parse value {text!r}: {exc}") from exc


def validate(config: RunConfig) -> RunConfig:
    for name, (ok, message) in _CONSTRAINTS.items():
        value = getattr(config, name)
        if not ok(value):
            raise ConfigError(f"field {name}: {message} (got {value!r})")
    return config


def _apply(config: RunConfig, key: str, text: str):
    if key not in _known_keys():
        hint = difflib.get_close_matches(key, _known_keys(), n=1)
        suffix = f"; did you mean {hint[0]!r}?" if hint else ""
        raise ConfigError(f"unknown key {key!r}{suffix}")
    setattr(config, key, parse_value(key, text))


def parse_config(path: Optional[str] = None, overrides=()) -> RunConfig:
    """Load a key=value file (optional) and apply overrides, then validate.

    Overrides are "key=value" strings and win over the file.
    """
    config = RunConfig()
    if path:
        file_path = Path(path)
        if not file_path.exists():
            raise ConfigError(f"config file not found: {path}")
        for lineno, line in enumerate(file_path.read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            _apply(config, key.strip(), value.strip())
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must be key=value, got {item!r}")
        key, _, value = item.partition("=")
        _apply(config, key.strip(), value.strip())
    return validate(config)


def echo_dict(config: RunConfig) -> dict:
    """Resolved configuration as a flat serializable mapping."""
    out = {}
    for f in fields(RunConfig):
        value = getattr(config, f.name)
        if f.name == "nk_pairs":
            value = ";".join(f"{a}:{b}" for a, b in value)
        elif isinstance(value, tuple):
            value = ",".join(str(v) for v in value)
        out[f.name] = value
    return out
