"""Smoothing forward operator, measurement projections, and noise models.

The continuum measurement is m = A u + eps with A a smoothing Fourier
multiplier (periodic Gaussian blur by default) and eps white noise whose
pairing with any test function phi has variance ||phi||_L2^2.  The practical
datum is m_k = P_k m for an orthogonal rank-k projection P_k (Fourier or
wavelet truncation); the computational model P_k A T_n u + P_k eps shares
the same noise realization, so for a fixed seed the inversion input m_k is
literally the projection of the continuum realization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import fourier, wavelets
from .errors import CapabilityError, ConfigError
from .wavelets import CoeffField, WaveletBasis

MEASUREMENT_KINDS = ("continuum_m", "practical_mk", "computational_mkn")
PROJECTION_KINDS = ("fourier_trunc", "wavelet_trunc")


@dataclass
class ForwardSetup:
    """Forward problem on a fixed master grid of 2^(grid_log2 * d) points.

    psf_sigma configures the default periodic Gaussian blur; multiplier may
    hold an explicit table instead.  proj_kind picks the measurement
    projection family P_k, trunc_kind the unknown-side truncation family
    T_n.  Wavelet-based projections use a Daubechies basis of the given
    family.
    """

    d: int
    grid_log2: int
    psf_sigma: float = 0.05
    multiplier: Optional[np.ndarray] = None
    proj_kind: str = "fourier_trunc"
    trunc_kind: str = "wavelet_trunc"
    k: Optional[int] = None
    noise_scale: float = 1.0
    wavelet_family: int = 4
    _basis: Optional[WaveletBasis] = field(default=None, repr=False)

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ConfigError(f"dimension must be 1 or 2, got {self.d}")
        if self.grid_log2 < 0:
            raise ConfigError(f"grid_log2 must be >= 0, got {self.grid_log2}")
        for kind, name in ((self.proj_kind, "proj_kind"), (self.trunc_kind, "trunc_kind")):
            if kind not in PROJECTION_KINDS:
                raise ConfigError(f"{name} must be one of {PROJECTION_KINDS}, got {kind!r}")
        if self.noise_scale < 0:
            raise ConfigError(f"noise_scale must be >= 0, got {self.noise_scale}")
        if self.multiplier is not None:
            self.multiplier = np.asarray(self.multiplier, dtype=float)
            if self.multiplier.shape != self.grid_shape:
                raise ConfigError(
                    f"multiplier table must have shape {self.grid_shape}, "
                    f"got {self.multiplier.shape}"
                )
            if not np.all(self.multiplier > 0):
                raise ConfigError("multiplier table must be strictly positive")

    @property
    def grid_points(self) -> int:
        return 2 ** self.grid_log2

    @property
    def grid_shape(self) -> tuple:
        return (self.grid_points,) * self.d

    @property
    def grid_size(self) -> int:
        return self.grid_points ** self.d

    def forward_multiplier(self) -> np.ndarray:
        if self.multiplier is not None:
            return self.multiplier
        return fourier.gaussian_blur_symbol(self.d, self.grid_points, self.psf_sigma)

    def basis(self) -> WaveletBasis:
        if self._basis is None:
            self._basis = wavelets.build_basis(self.d, self.wavelet_family, self.grid_log2)
        return self._basis


def as_grid(u, setup: ForwardSetup) -> np.ndarray:
    """Coerce a CoeffField or array to grid samples on the master grid."""
    if isinstance(u, CoeffField):
        return wavelets.idwt(u, setup.basis())
    u = np.asarray(u, dtype=float)
    if u.shape != setup.grid_shape:
        raise ValueError(
            f"grid values must have shape {setup.grid_shape}, got {u.shape}"
        )
    return u


def apply_forward(u, setup: ForwardSetup) -> np.ndarray:
    """Au as a Fourier multiplier acting on grid samples."""
    return fourier.apply_multiplier(as_grid(u, setup), setup.forward_multiplier())


def apply_projection(v: np.ndarray, setup: ForwardSetup, k: int) -> np.ndarray:
    """Orthogonal projection P_k onto the first k measurement dimensions."""
    v = as_grid(v, setup)
    if not 0 <= k <= setup.grid_size:
        raise IndexError(f"projection rank {k} outside 0..{setup.grid_size}")
    if setup.proj_kind == "fourier_trunc":
        return fourier.apply_fourier_projection(v, k)
    coeffs = wavelets.dwt(v, setup.basis())
    return wavelets.idwt(wavelets.truncate(coeffs, k), setup.basis())


def apply_truncation(u: np.ndarray, setup: ForwardSetup, n: int) -> np.ndarray:
    """Unknown-side truncation T_n on grid samples."""
    u = as_grid(u, setup)
    if not 0 <= n <= setup.grid_size:
        raise IndexError(f"truncation rank {n} outside 0..{setup.grid_size}")
    if setup.trunc_kind == "fourier_trunc":
        return fourier.apply_fourier_projection(u, n)
    coeffs = wavelets.dwt(u, setup.basis())
    return wavelets.idwt(wavelets.truncate(coeffs, n), setup.basis())


def unit_noise_rescale(setup: ForwardSetup, data: np.ndarray):
    """Rescale (setup, datum) so the unit-variance likelihood is exact.

    m = A u + zeta eps is equivalent to m / zeta = (A / zeta) u + eps, so
    reconstructors written for identity noise covariance consume the
    rescaled pair.  No-op for noise_scale in {0, 1}."""
    zeta = setup.noise_scale
    if zeta in (0.0, 1.0):
        return setup, data
    from dataclasses import replace
    scaled = replace(setup, multiplier=setup.forward_multiplier() / zeta,
                     noise_scale=1.0, _basis=setup._basis)
    return scaled, np.asarray(data, dtype=float) / zeta


def sample_white_noise(grid_log2: int, d: int, seed) -> np.ndarray:
    """White-noise samples: iid N(0, grid_count) entries, so that the
    quadrature pairing <eps, phi> has variance ||phi||_L2^2."""
    n = 2 ** grid_log2
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n,) * d) * n ** (d / 2.0)


@dataclass
class Measurement:
    """Realized measurement with provenance of its projection sizes."""

    kind: str
    data: np.ndarray
    k: Optional[int]
    n: Optional[int]
    seed: int
    sigma: float
    noise_scale: float

    def __post_init__(self):
        if self.kind not in MEASUREMENT_KINDS:
            raise ConfigError(
                f"measurement kind must be one of {MEASUREMENT_KINDS}, got {self.kind!r}"
            )


def synthesize_measurement(u_true, setup: ForwardSetup, model_kind: str,
                           k: Optional[int] = None, n: Optional[int] = None,
                           seed: int = 0) -> Measurement:
    """Realize one of the three measurement models from a single noise draw.

    All kinds reuse the same noise realization for a fixed seed, so
    practical_mk equals the projection of continuum_m rather than a fresh
    draw.
    """
    if model_kind not in MEASUREMENT_KINDS:
        raise ConfigError(
            f"measurement kind must be one of {MEASUREMENT_KINDS}, got {model_kind!r}"
        )
    u = as_grid(u_true, setup)
    eps = sample_white_noise(setup.grid_log2, setup.d, seed) * setup.noise_scale
    if model_kind == "continuum_m":
        data = apply_forward(u, setup) + eps
    elif model_kind == "practical_mk":
        if k is None:
            raise ConfigError("practical_mk needs the projection rank k")
        data = apply_projection(apply_forward(u, setup) + eps, setup, k)
    else:
        if k is None or n is None:
            raise ConfigError("computational_mkn needs both k and n")
        data = (apply_projection(apply_forward(apply_truncation(u, setup, n), setup), setup, k)
                + apply_projection(eps, setup, k))
    return Measurement(kind=model_kind, data=data, k=k, n=n, seed=seed,
                       sigma=setup.psf_sigma, noise_scale=setup.noise_scale)
