"""Numba kernels for the Gibbs and Metropolis-Hastings samplers.

The posterior over coefficient vectors c is
    exp(-1/2 c' G c + h' c - alpha sum_l v_l |c_l|^p)
with G the Gram matrix of the projected forward images of the basis
functions and h their pairings with the datum.  For p = 1 every single-site
conditional is exp(-a x^2 / 2 + b x - w |x|), sampled exactly as a two-piece
truncated-Gaussian mixture.
"""

import math

import numpy as np
from numba import njit

_SQRT2 = math.sqrt(2.0)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@njit(cache=True)
def _log_ndtr(t):
    """log Phi(t), asymptotic Mills expansion below the erfc underflow."""
    if t > -37.0:
        return math.log(0.5 * math.erfc(-t / _SQRT2))
    tt = t * t
    return -0.5 * tt - _LOG_SQRT_2PI - math.log(-t) + math.log1p(-1.0 / tt + 3.0 / (tt * tt))


@njit(cache=True)
def _rand_truncnorm_lower(a):
    """Draw Z ~ N(0,1) conditioned on Z >= a."""
    if a < 0.3:
        while True:
            z = np.random.normal()
            if z >= a:
                return z
    else:
        # Robert's exponential-rejection sampler for deep tails.
        lam = 0.5 * (a + math.sqrt(a * a + 4.0))
        while True:
            x = a + np.random.exponential() / lam
            diff = x - lam
            if np.random.random() <= math.exp(-0.5 * diff * diff):
                return x


@njit(cache=True)
def _sample_laplace(rate):
    u = np.random.random()
    if u < 0.5:
        return math.log(2.0 * u) / rate
    return -math.log(2.0 * (1.0 - u)) / rate


@njit(cache=True)
def _sample_conditional(a, b, w):
    """Exact draw from density ~ exp(-a x^2/2 + b x - w|x|), a > 0."""
    sqrt_a = math.sqrt(a)
    mu_pos = (b - w) / a
    mu_neg = (b + w) / a
    log_mass_pos = 0.5 * a * mu_pos * mu_pos + _log_ndtr(mu_pos * sqrt_a)
    log_mass_neg = 0.5 * a * mu_neg * mu_neg + _log_ndtr(-mu_neg * sqrt_a)
    delta = log_mass_neg - log_mass_pos
    if delta > 50.0:
        weight_pos = 0.0
    elif delta < -50.0:
        weight_pos = 1.0
    else:
        weight_pos = 1.0 / (1.0 + math.exp(delta))
    if np.random.random() < weight_pos:
        z = _rand_truncnorm_lower(-mu_pos * sqrt_a)
        return mu_pos + z / sqrt_a
    z = _rand_truncnorm_lower(mu_neg * sqrt_a)
    return mu_neg - z / sqrt_a


@njit(cache=True)
def gibbs_l1_chain(gram, h, weights, iters, burn_in, thin, seed, init):
    """Single-site Gibbs sweep over all coordinates; returns kept samples."""
    np.random.seed(seed)
    n = h.size
    c = init.copy()
    n_keep = 0
    for it in range(iters):
        if it >= burn_in and (it - burn_in) % thin == 0:
            n_keep += 1
    out = np.empty((n_keep, n))
    kept = 0
    for it in range(iters):
        for l in range(n):
            a = gram[l, l]
            s = 0.0
            for m in range(n):
                s += gram[l, m] * c[m]
            b = h[l] - (s - a * c[l])
            if a <= 0.0:
                # forward operator annihilates this basis function: the
                # conditional is the pure Laplace prior factor
                c[l] = _sample_laplace(weights[l])
            else:
                c[l] = _sample_conditional(a, b, weights[l])
        if it >= burn_in and (it - burn_in) % thin == 0:
            out[kept] = c
            kept += 1
    return out


@njit(cache=True)
def _neg_log_post(c, gram, h, weights, p):
    n = c.size
    quad = 0.0
    lin = 0.0
    pen = 0.0
    for i in range(n):
        row = 0.0
        for j in range(n):
            row += gram[i, j] * c[j]
        quad += c[i] * row
        lin += h[i] * c[i]
        pen += weights[i] * abs(c[i]) ** p
    return 0.5 * quad - lin + pen


@njit(cache=True)
def mh_chain(gram, h, weights, p, scales, iters, burn_in, thin, seed, init):
    """Random-walk Metropolis; returns (samples, accepted, max_consecutive_rejects)."""
    np.random.seed(seed)
    n = h.size
    c = init.copy()
    prop = np.empty(n)
    energy = _neg_log_post(c, gram, h, weights, p)
    n_keep = 0
    for it in range(iters):
        if it >= burn_in and (it - burn_in) % thin == 0:
            n_keep += 1
    out = np.empty((n_keep, n))
    kept = 0
    accepted = 0
    consec_rej = 0
    max_consec_rej = 0
    for it in range(iters):
        for i in range(n):
            prop[i] = c[i] + scales[i] * np.random.normal()
        new_energy = _neg_log_post(prop, gram, h, weights, p)
        if math.log(np.random.random()) < energy - new_energy:
            c = prop.copy()
            energy = new_energy
            accepted += 1
            consec_rej = 0
        else:
            consec_rej += 1
            if consec_rej > max_consec_rej:
                max_consec_rej = consec_rej
        if it >= burn_in and (it - burn_in) % thin == 0:
            out[kept] = c
            kept += 1
    return out, accepted, max_consec_rej
