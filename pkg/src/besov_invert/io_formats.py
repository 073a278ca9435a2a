"""Binary and text artifact formats.

Coefficient files: magic "BCF1", little-endian u32 d, u32 J, then 2^(Jd)
float64 coefficients in ell-order.  Grid files: magic "BGF1", same header,
row-major float64 samples.  Sidecars and reports are plain-text key=value;
tables are CSV with fixed headers.  All float formatting uses repr, so
artifact bytes are a pure function of the data.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .forward import Measurement
from .wavelets import CoeffField

COEFF_MAGIC = b"BCF1"
GRID_MAGIC = b"BGF1"
_HEADER = struct.Struct("<4sII")


def _write_payload(path, magic: bytes, d: int, J: int, values: np.ndarray):
    payload = np.ascontiguousarray(values, dtype="<f8")
    expected = 2 ** (J * d)
    if payload.size != expected:
        raise ValueError(f"payload must hold {expected} values, got {payload.size}")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(magic, d, J))
        fh.write(payload.tobytes())


def _read_payload(path, magic: bytes):
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ConfigError(f"{path}: truncated header")
    got, d, J = _HEADER.unpack_from(raw)
    if got != magic:
        raise ConfigError(f"{path}: expected magic {magic!r}, found {got!r}")
    values = np.frombuffer(raw, dtype="<f8", offset=_HEADER.size)
    expected = 2 ** (J * d)
    if values.size != expected:
        raise ConfigError(
            f"{path}: payload holds {values.size} values, header implies {expected}"
        )
    return d, J, values.astype(float)


def write_coeff_file(path, field: CoeffField):
    _write_payload(path, COEFF_MAGIC, field.d, field.J, field.coeffs)


def read_coeff_file(path) -> CoeffField:
    d, J, values = _read_payload(path, COEFF_MAGIC)
    return CoeffField(d=d, J=J, coeffs=values)


def write_grid_file(path, grid: np.ndarray):
    grid = np.asarray(grid, dtype=float)
    d = grid.ndim
    side = grid.shape[0]
    J = int(np.log2(side))
    if grid.shape != (side,) * d or 2 ** J != side:
        raise ValueError(f"grid must be a power-of-two hypercube, got {grid.shape}")
    _write_payload(path, GRID_MAGIC, d, J, grid.ravel())


def read_grid_file(path) -> np.ndarray:
    d, J, values = _read_payload(path, GRID_MAGIC)
    return values.reshape((2 ** J,) * d)


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_keyvalue(path, mapping: dict):
    lines = [f"{key}={format_value(val)}" for key, val in mapping.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def read_keyvalue(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def write_measurement(path_base, meas: Measurement):
    """Grid file plus a key=value sidecar (<path_base>.bgf / .meta)."""
    base = Path(path_base)
    write_grid_file(base.with_suffix(".bgf"), meas.data)
    write_keyvalue(base.with_suffix(".meta"), {
        "kind": meas.kind,
        "k": "" if meas.k is None else meas.k,
        "n": "" if meas.n is None else meas.n,
        "seed": meas.seed,
        "sigma": meas.sigma,
        "noise_scale": meas.noise_scale,
    })


def read_measurement(path_base) -> Measurement:
    base = Path(path_base)
    data = read_grid_file(base.with_suffix(".bgf"))
    meta = read_keyvalue(base.with_suffix(".meta"))
    return Measurement(
        kind=meta["kind"],
        data=data,
        k=int(meta["k"]) if meta.get("k") else None,
        n=int(meta["n"]) if meta.get("n") else None,
        seed=int(meta["seed"]),
        sigma=float(meta["sigma"]),
        noise_scale=float(meta["noise_scale"]),
    )


def write_csv(path, header: str, rows):
    lines = [header]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:] if line]
    return header, rows


STUDY_CSV_HEADER = "n,k,error,eta1,eta2,eta3,ess_min,seed"
PROBE_CSV_HEADER = "norm_m,delta,ratio"


def write_study_csv(path, study):
    rows = [(c.n, c.k, c.error, c.eta1, c.eta2, c.eta3, c.ess_min, c.seed)
            for c in study.cells]
    write_csv(path, STUDY_CSV_HEADER, rows)


def write_probe_csv(path, probe):
    rows = [(r.norm_m, r.delta, r.ratio) for r in probe.records]
    write_csv(path, PROBE_CSV_HEADER, rows)


def write_chain_csv(path, chain):
    n = chain.samples.shape[1]
    header = "iter," + ",".join(f"ell_{i + 1}" for i in range(n))
    rows = [(i, *chain.samples[i]) for i in range(chain.samples.shape[0])]
    write_csv(path, header, rows)


def read_chain_csv(path) -> np.ndarray:
    header, rows = read_csv(path)
    return np.array([[float(v) for v in row[1:]] for row in rows])


def write_quantiles_csv(path, chain):
    header = "ell,lo,mean,hi"
    rows = [(i + 1, chain.coordinate_quantiles[i, 0], chain.mean[i],
             chain.coordinate_quantiles[i, 1])
            for i in range(chain.mean.size)]
    write_csv(path, header, rows)
