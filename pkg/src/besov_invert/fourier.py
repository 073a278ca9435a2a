"""Fourier-side helpers on the uniform torus grid.

Fourier coefficients use the quadrature normalization fhat(xi) =
2^(-Jd) sum_x f(x) exp(-2 pi i xi.x), so they approximate the continuum
coefficients of functions on the unit torus and Parseval holds against the
quadrature inner product.  Truncation projections are expressed in the real
trigonometric basis (ordered by |xi|^2, ties broken lexicographically on the
integer frequency vector; within a conjugate pair the cosine dimension comes
first) so that any rank k yields a genuine orthogonal projection on real
fields.
"""

from __future__ import annotations

import functools

import numpy as np


def freq_axes(d: int, n: int) -> list[np.ndarray]:
    return [np.fft.fftfreq(n, 1.0 / n).astype(int) for _ in range(d)]


@functools.lru_cache(maxsize=None)
def freq_norm_sq(d: int, n: int) -> np.ndarray:
    """|xi|^2 on the full fft grid."""
    axes = freq_axes(d, n)
    grids = np.meshgrid(*axes, indexing="ij")
    return sum(g.astype(float) ** 2 for g in grids)


@functools.lru_cache(maxsize=None)
def helmholtz_symbol(d: int, n: int) -> np.ndarray:
    """Symbol of (I - Laplacian): 1 + |2 pi xi|^2."""
    return 1.0 + 4.0 * np.pi ** 2 * freq_norm_sq(d, n)


def gaussian_blur_symbol(d: int, n: int, sigma: float) -> np.ndarray:
    """Fourier multiplier of periodic Gaussian blur with width sigma."""
    return np.exp(-2.0 * np.pi ** 2 * sigma ** 2 * freq_norm_sq(d, n))


def apply_multiplier(u: np.ndarray, mult: np.ndarray) -> np.ndarray:
    """Apply a real, even Fourier multiplier to a real grid field."""
    return np.fft.ifftn(np.fft.fftn(u) * mult).real


def coefficients(u: np.ndarray) -> np.ndarray:
    return np.fft.fftn(u) / u.size


# ---------------------------------------------------------------------------
# real trigonometric ordering and truncation projections
# ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def real_mode_table(d: int, n: int) -> tuple:
    """Ordered real dimensions: tuples (kind, xi) with kind in
    {"self", "cos", "sin"}; "self" modes are conjugate-symmetric by
    themselves (DC and Nyquist combinations)."""
    axes = freq_axes(d, n)
    all_modes = [tuple(int(v) for v in combo)
                 for combo in np.stack(np.meshgrid(*axes, indexing="ij"),
                                       axis=-1).reshape(-1, d)]
    all_modes.sort(key=lambda xi: (sum(v * v for v in xi), xi))

    def conj(xi):
        out = []
        for v in xi:
            w = (-v) % n
            if w >= n // 2 + n % 2:
                w -= n
            out.append(w)
        return tuple(out)

    table = []
    seen = set()
    for xi in all_modes:
        if xi in seen:
            continue
        xic = conj(xi)
        if xic == xi:
            table.append(("self", xi))
            seen.add(xi)
        else:
            table.append(("cos", xi))
            table.append(("sin", xi))
            seen.add(xi)
            seen.add(xic)
    return tuple(table)


def _mode_flat_index(xi, n: int) -> int:
    idx = 0
    for v in xi:
        idx = idx * n + (v % n)
    return idx


@functools.lru_cache(maxsize=None)
def projection_masks(d: int, n: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """(keep, real_only) boolean masks over the fft grid for rank-k
    truncation onto the first k real trigonometric dimensions."""
    table = real_mode_table(d, n)
    if not 0 <= k <= len(table):
        raise IndexError(f"projection rank {k} outside 0..{len(table)}")
    shape = (n,) * d
    keep = np.zeros(shape, dtype=bool).reshape(-1)
    real_only = np.zeros(shape, dtype=bool).reshape(-1)

    def conj_idx(xi):
        return _mode_flat_index(tuple(-v for v in xi), n)

    i = 0
    while i < len(table):
        kind, xi = table[i]
        if kind == "self":
            if i < k:
                keep[_mode_flat_index(xi, n)] = True
            i += 1
        else:
            # cos at slot i, sin at slot i+1
            fi, ci = _mode_flat_index(xi, n), conj_idx(xi)
            if i + 1 < k:
                keep[fi] = keep[ci] = True
            elif i < k:
                real_only[fi] = real_only[ci] = True
            i += 2
    return keep.reshape(shape), real_only.reshape(shape)


def apply_fourier_projection(u: np.ndarray, k: int) -> np.ndarray:
    """Orthogonal projection of a real field onto the k lowest real
    trigonometric dimensions."""
    n = u.shape[0]
    keep, real_only = projection_masks(u.ndim, n, k)
    spec = np.fft.fftn(u)
    spec = spec * keep + spec.real * real_only
    return np.fft.ifftn(spec).real


def real_trig_vector(d: int, n: int, dim_index: int) -> np.ndarray:
    """Grid samples of the dim_index-th real trigonometric basis function
    (unit quadrature norm)."""
    table = real_mode_table(d, n)
    if not 0 <= dim_index < len(table):
        raise IndexError(f"dimension index {dim_index} outside 0..{len(table) - 1}")
    kind, xi = table[dim_index]
    coords = np.indices((n,) * d).astype(float) / n
    phase = 2.0 * np.pi * sum(xi[a] * coords[a] for a in range(d))
    if kind == "self":
        return np.cos(phase)
    if kind == "cos":
        return np.sqrt(2.0) * np.cos(phase)
    return np.sqrt(2.0) * np.sin(phase)
