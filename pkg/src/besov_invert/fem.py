"""Piecewise-affine discretization helpers for the variance-limit examples.

Nodal hat bases on uniform periodic meshes (intervals on T^1, criss-cross
right triangles on T^2) have circulant H^1 Gram matrices, so sampling
N(0, H^-1) nodal fields and evaluating quadratic forms reduce to FFTs of
the assembled stencil.
"""

from __future__ import annotations

import functools

import numpy as np


def hat_gram_1d(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(mass, stiffness) first rows of the circulant H^1 Gram of the n
    periodic hat functions with spacing h = 1/n."""
    h = 1.0 / n
    mass = np.zeros(n)
    stiff = np.zeros(n)
    mass[0] = 2.0 * h / 3.0
    mass[1] = mass[-1] = h / 6.0
    stiff[0] = 2.0 / h
    stiff[1] = stiff[-1] = -1.0 / h
    return mass, stiff


def _p1_local_matrices(h: float):
    # right triangle with legs h; vertices (0,0), (h,0), (h,h)
    area = h * h / 2.0
    grads = np.array([[-1.0, 0.0], [1.0, -1.0], [0.0, 1.0]]) / h
    stiff = area * grads @ grads.T
    mass = area / 12.0 * (np.ones((3, 3)) + np.eye(3))
    return mass, stiff


@functools.lru_cache(maxsize=None)
def hat_gram_2d(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(mass, stiffness) stencil images (n x n) of the H^1 Gram of nodal
    hats on the criss-cross triangulation of T^2 with n^2 nodes.

    Each mesh square (i, j) is split by the diagonal from node (i, j) to
    node (i+1, j+1); the stencil row of node (0, 0) is assembled exactly
    from the P1 element matrices.
    """
    h = 1.0 / n
    mass_loc, stiff_loc = _p1_local_matrices(h)
    mass = np.zeros((n, n))
    stiff = np.zeros((n, n))
    # the two triangle types of square (0,0), as node offsets
    tris = (((0, 0), (1, 0), (1, 1)), ((0, 0), (0, 1), (1, 1)))
    for i in range(n):
        for j in range(n):
            for tri in tris:
                nodes = [((i + di) % n, (j + dj) % n) for di, dj in tri]
                for a in range(3):
                    if nodes[a] != (0, 0):
                        continue
                    for b in range(3):
                        off = (nodes[b][0] % n, nodes[b][1] % n)
                        mass[off] += mass_loc[a, b]
                        stiff[off] += stiff_loc[a, b]
    return mass, stiff


def circulant_symbol(first_row: np.ndarray) -> np.ndarray:
    """Eigenvalues of the (nested-)circulant matrix with this first row."""
    return np.fft.fftn(first_row).real


def sample_circulant_gaussian(symbol: np.ndarray, rng: np.random.Generator,
                              size: int) -> np.ndarray:
    """Draw `size` fields with covariance C^-1 where C has the given
    positive circulant symbol."""
    shape = symbol.shape
    z = rng.standard_normal((size,) + shape)
    spec = np.fft.fftn(z, axes=tuple(range(1, 1 + len(shape))))
    spec *= symbol ** -0.5
    return np.fft.ifftn(spec, axes=tuple(range(1, 1 + len(shape)))).real


def quadratic_form_inverse(symbol: np.ndarray, w: np.ndarray) -> float:
    """w' C^-1 w for the circulant C with the given symbol."""
    spec = np.fft.fftn(w)
    return float(np.sum(np.abs(spec) ** 2 / symbol) / w.size)


def hat_loads_1d(n: int, phi_fine: np.ndarray) -> np.ndarray:
    """Pairings <hat_j, phi> by composite quadrature on the fine grid that
    phi is sampled on (size must be a multiple of n)."""
    m = phi_fine.size
    if m % n:
        raise ValueError("fine grid must refine the mesh")
    x = np.arange(m) / m
    nodes = np.arange(n) / n
    loads = np.empty(n)
    for j in range(n):
        dist = np.abs(((x - nodes[j] + 0.5) % 1.0) - 0.5)
        tent = np.maximum(0.0, 1.0 - n * dist)
        loads[j] = np.sum(tent * phi_fine) / m
    return loads


def hat_loads_2d(n: int, phi_fine: np.ndarray) -> np.ndarray:
    """Pairings <hat_(ij), phi> on the criss-cross triangulation, by
    barycentric interpolation weights on the fine grid."""
    m = phi_fine.shape[0]
    if phi_fine.shape != (m, m) or m % n:
        raise ValueError("fine grid must be square and refine the mesh")
    scale = m // n
    loads = np.zeros((n, n))
    ii, jj = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    cell_i, cell_j = ii // scale, jj // scale
    fx = (ii % scale) / scale
    fy = (jj % scale) / scale
    upper = fx <= fy  # triangle ((0,0),(0,1),(1,1)) holds points with fx <= fy
    # barycentric weights for the two triangle types
    w_base = np.where(upper, 1.0 - fy, 1.0 - fx)          # node (0, 0)
    w_mid = np.where(upper, fy - fx, fx - fy)             # node (0,1) or (1,0)
    w_far = np.where(upper, fx, fy)                       # node (1, 1)
    mid_di = np.where(upper, 0, 1)
    mid_dj = np.where(upper, 1, 0)
    weight = phi_fine / (m * m)
    np.add.at(loads, (cell_i % n, cell_j % n), w_base * weight)
    np.add.at(loads, ((cell_i + mid_di) % n, (cell_j + mid_dj) % n), w_mid * weight)
    np.add.at(loads, ((cell_i + 1) % n, (cell_j + 1) % n), w_far * weight)
    return loads
