"""Periodized Daubechies multiresolution analysis on the 1- and 2-torus.

Grid functions are sampled on 2^J uniform points per axis of the unit torus
and carry the quadrature inner product <u, v> = 2^(-Jd) sum(u*v).  Wavelet
coefficients live in plain Euclidean R^(2^(Jd)) and are numbered by a single
index ell >= 1: ell = 1 is the tensor scaling function, scale j occupies
ell in {2^(jd)+1, ..., 2^((j+1)d)}.  Within a scale, orientations are ordered
by their binary value and translations row-major.  `dwt` / `idwt` form an
exact isometry pair between the two inner products, so coefficients equal
L2 pairings with the (unit-norm) basis functions.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np

from .errors import ConfigError

SUPPORTED_FAMILIES = (1, 2, 3, 4, 5, 6, 7, 8)


@functools.lru_cache(maxsize=None)
def daubechies_lowpass(family: int) -> tuple[float, ...]:
    """Lowpass taps of the orthonormal Daubechies filter with `family`
    vanishing moments (filter length 2*family), normalized to sum sqrt(2).

    Computed by spectral factorization of the Daubechies binomial symbol at
    60 decimal digits, so the float64 taps satisfy the quadrature-mirror
    identities to machine precision.  family=1 is the Haar filter.
    """
    if family not in SUPPORTED_FAMILIES:
        raise ConfigError(
            f"unsupported wavelet family {family}; pick one of {SUPPORTED_FAMILIES}"
        )
    with mp.workdps(60):
        if family == 1:
            taps = [mp.sqrt(2) / 2, mp.sqrt(2) / 2]
        else:
            n = family
            # B(y) = sum_k C(n-1+k, k) y^k, descending coefficients for polyroots.
            bcoef = [mp.binomial(n - 1 + k, k) for k in range(n - 1, -1, -1)]
            yroots = mp.polyroots(bcoef, maxsteps=500, extraprec=200)
            poly = [mp.mpf(1)]
            for y in yroots:
                # z-roots of z^2 - 2(1-2y)z + 1; keep the one inside the unit circle.
                b = 1 - 2 * y
                disc = mp.sqrt(b * b - 1)
                z = b + disc if abs(b + disc) < 1 else b - disc
                poly = _polymul(poly, [mp.mpf(1), -z])
            for _ in range(n):
                poly = _polymul(poly, [mp.mpf(1) / 2, mp.mpf(1) / 2])
            s = sum(poly)
            taps = [mp.re(c) * mp.sqrt(2) / mp.re(s) for c in poly]
    return tuple(float(t) for t in taps)


def _polymul(a, b):
    out = [mp.mpf(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def quadrature_mirror(lowpass: np.ndarray) -> np.ndarray:
    """Highpass g_t = (-1)^t h_{F-1-t} of an orthonormal lowpass filter."""
    taps = np.asarray(lowpass, dtype=float)
    signs = np.where(np.arange(len(taps)) % 2 == 0, 1.0, -1.0)
    return signs * taps[::-1]


@dataclass(frozen=True)
class WaveletBasis:
    """Periodized filter bank for the d-torus at grid resolution 2^Jmax."""

    d: int
    family: int
    lowpass: np.ndarray
    highpass: np.ndarray
    Jmax: int

    @property
    def grid_points(self) -> int:
        return 2 ** self.Jmax

    @property
    def size(self) -> int:
        """Total coefficient count 2^(Jmax*d)."""
        return 2 ** (self.Jmax * self.d)


def build_basis(d: int, family: int, grid_log2: int) -> WaveletBasis:
    """Build a periodized Daubechies basis on T^d sampled at 2^grid_log2
    points per axis.

    Raises ConfigError when the grid is too small to hold the filter.
    """
    if d not in (1, 2):
        raise ConfigError(f"dimension must be 1 or 2, got {d}")
    taps = np.array(daubechies_lowpass(family))
    if 2 ** grid_log2 < len(taps):
        raise ConfigError(
            f"grid of 2^{grid_log2} = {2 ** grid_log2} points cannot hold the "
            f"length-{len(taps)} db{family} filter"
        )
    return WaveletBasis(
        d=d, family=family, lowpass=taps, highpass=quadrature_mirror(taps),
        Jmax=grid_log2,
    )


@dataclass
class CoeffField:
    """Function on T^d stored as wavelet coefficients in ell-order."""

    d: int
    J: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        expected = 2 ** (self.J * self.d)
        if self.coeffs.shape != (expected,):
            raise ValueError(
                f"coefficient vector must have length 2^({self.J}*{self.d}) "
                f"= {expected}, got shape {self.coeffs.shape}"
            )
        if not np.all(np.isfinite(self.coeffs)):
            raise ValueError("coefficient vector contains non-finite entries")

    def copy(self) -> "CoeffField":
        return CoeffField(self.d, self.J, self.coeffs.copy())


# ---------------------------------------------------------------------------
# single-index numbering
# ---------------------------------------------------------------------------

SCALING = "scaling"


def _as_tuple(value, d):
    if np.isscalar(value):
        value = (int(value),) * 1 if d == 1 else (int(value),)
    out = tuple(int(v) for v in value)
    if len(out) != d:
        raise IndexError(f"expected a length-{d} tuple, got {value!r}")
    return out


def encode_index(j: int, nu, k, d: int) -> int:
    """Flat index ell of the basis function (j, nu, k) on T^d.

    `nu` is the string "scaling" (valid only with j=0, k=0) or a length-d
    tuple of 0/1 not identically zero, read as a binary number for ordering.
    `k` is a length-d tuple of translations, 0 <= k_i < 2^j, ordered
    row-major.
    """
    if d not in (1, 2):
        raise IndexError(f"dimension must be 1 or 2, got {d}")
    if nu == SCALING:
        if j != 0 or any(ki != 0 for ki in _as_tuple(k, d)):
            raise IndexError("the scaling function has j=0 and k=0")
        return 1
    nu = _as_tuple(nu, d)
    if any(b not in (0, 1) for b in nu) or all(b == 0 for b in nu):
        raise IndexError(f"orientation must be a nonzero 0/1 tuple, got {nu}")
    if j < 0:
        raise IndexError(f"scale must be nonnegative, got {j}")
    k = _as_tuple(k, d)
    if any(not 0 <= ki < 2 ** j for ki in k):
        raise IndexError(f"translation {k} out of range for scale {j}")
    nu_value = 0
    for b in nu:
        nu_value = 2 * nu_value + b
    k_value = 0
    for ki in k:
        k_value = (2 ** j) * k_value + ki
    return 2 ** (j * d) + (nu_value - 1) * 2 ** (j * d) + k_value + 1


def decode_index(ell: int, d: int):
    """Inverse of encode_index: ell -> (j, nu, k)."""
    if d not in (1, 2):
        raise IndexError(f"dimension must be 1 or 2, got {d}")
    if ell < 1:
        raise IndexError(f"flat index must be >= 1, got {ell}")
    if ell == 1:
        return 0, SCALING, (0,) * d
    j = 0
    while 2 ** ((j + 1) * d) < ell:
        j += 1
    offset = ell - 2 ** (j * d) - 1
    nu_value = offset // 2 ** (j * d) + 1
    bits = tuple((nu_value >> (d - 1 - i)) & 1 for i in range(d))
    rem = offset % 2 ** (j * d)
    k = []
    for _ in range(d):
        k.append(rem % 2 ** j)
        rem //= 2 ** j
    return j, bits, tuple(reversed(k))


@functools.lru_cache(maxsize=None)
def _ell_to_array_position(d: int, J: int) -> np.ndarray:
    """Row-major pyramid-array position of each flat index (0-based)."""
    n_side = 2 ** J
    pos = np.empty(2 ** (J * d), dtype=np.int64)
    pos[0] = 0
    for ell in range(2, 2 ** (J * d) + 1):
        j, nu, k = decode_index(ell, d)
        if d == 1:
            pos[ell - 1] = 2 ** j + k[0]
        else:
            row = nu[0] * 2 ** j + k[0]
            col = nu[1] * 2 ** j + k[1]
            pos[ell - 1] = row * n_side + col
    return pos


# ---------------------------------------------------------------------------
# filter-bank levels
# ---------------------------------------------------------------------------

def _analysis_along(v, axis, h, g):
    v = np.moveaxis(v, axis, -1)
    L = v.shape[-1]
    idx = (2 * np.arange(L // 2)[:, None] + np.arange(len(h))[None, :]) % L
    gathered = v[..., idx]
    a = gathered @ h
    dcoef = gathered @ g
    return np.moveaxis(a, -1, axis), np.moveaxis(dcoef, -1, axis)


def _synthesis_along(a, dcoef, axis, h, g):
    a = np.moveaxis(a, axis, -1)
    dcoef = np.moveaxis(dcoef, axis, -1)
    L = 2 * a.shape[-1]
    out = np.zeros(a.shape[:-1] + (L,))
    base = 2 * np.arange(a.shape[-1])
    for t in range(len(h)):
        cols = (base + t) % L
        out[..., cols] += h[t] * a + g[t] * dcoef
    return np.moveaxis(out, -1, axis)


def _pyramid_analysis(x, basis):
    h, g = basis.lowpass, basis.highpass
    out = np.array(x, dtype=float, copy=True)
    L = out.shape[-1]
    if basis.d == 1:
        while L > 1:
            a, dcoef = _analysis_along(out[:L], 0, h, g)
            out[: L // 2] = a
            out[L // 2: L] = dcoef
            L //= 2
    else:
        while L > 1:
            block = out[:L, :L]
            lo0, hi0 = _analysis_along(block, 0, h, g)
            ll, lh = _analysis_along(lo0, 1, h, g)
            hl, hh = _analysis_along(hi0, 1, h, g)
            half = L // 2
            out[:half, :half] = ll
            out[:half, half:L] = lh
            out[half:L, :half] = hl
            out[half:L, half:L] = hh
            L //= 2
    return out


def _pyramid_synthesis(c, basis):
    h, g = basis.lowpass, basis.highpass
    out = np.array(c, dtype=float, copy=True)
    L = 2
    if basis.d == 1:
        while L <= out.shape[0]:
            out[:L] = _synthesis_along(out[: L // 2], out[L // 2: L], 0, h, g)
            L *= 2
    else:
        while L <= out.shape[0]:
            half = L // 2
            ll = out[:half, :half].copy()
            lh = out[:half, half:L].copy()
            hl = out[half:L, :half].copy()
            hh = out[half:L, half:L].copy()
            lo0 = _synthesis_along(ll, lh, 1, h, g)
            hi0 = _synthesis_along(hl, hh, 1, h, g)
            out[:L, :L] = _synthesis_along(lo0, hi0, 0, h, g)
            L *= 2
    return out


# ---------------------------------------------------------------------------
# public transforms
# ---------------------------------------------------------------------------

def _check_grid(samples, basis):
    shape = (basis.grid_points,) * basis.d
    samples = np.asarray(samples, dtype=float)
    if samples.shape != shape:
        raise ValueError(
            f"grid values must have shape {shape} for d={basis.d}, "
            f"J={basis.Jmax}; got {samples.shape}"
        )
    return samples


def dwt(samples: np.ndarray, basis: WaveletBasis) -> CoeffField:
    """Grid samples -> wavelet coefficients c_ell = <f, psi_ell>_{L2}."""
    samples = _check_grid(samples, basis)
    pyr = _pyramid_analysis(samples, basis)
    perm = _ell_to_array_position(basis.d, basis.Jmax)
    flat = pyr.reshape(-1)[perm] * 2.0 ** (-basis.Jmax * basis.d / 2.0)
    return CoeffField(basis.d, basis.Jmax, flat)


def idwt(coeffs, basis: WaveletBasis) -> np.ndarray:
    """Wavelet coefficients -> grid samples of sum_ell c_ell psi_ell."""
    vec = coeffs.coeffs if isinstance(coeffs, CoeffField) else np.asarray(coeffs, dtype=float)
    if vec.shape != (basis.size,):
        raise ValueError(
            f"coefficient vector must have length {basis.size}, got {vec.shape}"
        )
    perm = _ell_to_array_position(basis.d, basis.Jmax)
    pyr = np.empty(basis.size)
    pyr[perm] = vec * 2.0 ** (basis.Jmax * basis.d / 2.0)
    pyr = pyr.reshape((basis.grid_points,) * basis.d)
    return _pyramid_synthesis(pyr, basis)


def basis_function(ell: int, basis: WaveletBasis) -> np.ndarray:
    """Grid samples of the unit-L2-norm basis function psi_ell."""
    if not 1 <= ell <= basis.size:
        raise IndexError(f"flat index {ell} outside 1..{basis.size}")
    e = np.zeros(basis.size)
    e[ell - 1] = 1.0
    return idwt(e, basis)


def truncate(coeffs: CoeffField, n: int) -> CoeffField:
    """Projection onto the first n basis functions: zero out ell > n."""
    if not 0 <= n <= coeffs.coeffs.size:
        raise IndexError(
            f"kept count {n} outside 0..{coeffs.coeffs.size}"
        )
    out = coeffs.coeffs.copy()
    out[n:] = 0.0
    return CoeffField(coeffs.d, coeffs.J, out)


def grid_inner(u: np.ndarray, v: np.ndarray) -> float:
    """Quadrature approximation of the L2(T^d) inner product."""
    u = np.asarray(u, dtype=float)
    return float(np.sum(u * v) / u.size)


def grid_norm(u: np.ndarray) -> float:
    return float(np.sqrt(max(grid_inner(u, u), 0.0)))
