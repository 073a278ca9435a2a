"""Discretization-invariant Bayesian inversion on the torus.

Wavelet-based Besov priors and Gaussian smoothness priors for the
deconvolution model m = A u + noise, with reconstructors (closed-form
conditional means, a quadrature oracle, and exact-conditional MCMC) whose
estimates converge as the measurement and unknown discretizations are
refined.
"""

__version__ = "0.1.0"

from .besov import (BesovParams, PriorSpec, besov_norm, embedding_check,
                    moment_identity, norm_threshold_probe, sample_besov_prior,
                    sample_coeff, sample_gaussian_prior)
from .errors import BesovInvertError, CapabilityError, ConfigError, NumericalError
from .forward import (ForwardSetup, Measurement, apply_forward,
                      apply_projection, sample_white_noise,
                      synthesize_measurement)
from .reconstruct import (ChainResult, PosteriorSpec, gaussian_cm, gibbs_l1,
                          mh_fallback, posterior_probability,
                          quadrature_reconstructor, tikhonov_solve)
from .wavelets import (CoeffField, WaveletBasis, basis_function, build_basis,
                       decode_index, dwt, encode_index, idwt, truncate)

__all__ = [
    "__version__",
    "BesovParams", "PriorSpec", "besov_norm", "embedding_check",
    "moment_identity", "norm_threshold_probe", "sample_besov_prior",
    "sample_coeff", "sample_gaussian_prior",
    "BesovInvertError", "CapabilityError", "ConfigError", "NumericalError",
    "ForwardSetup", "Measurement", "apply_forward", "apply_projection",
    "sample_white_noise", "synthesize_measurement",
    "ChainResult", "PosteriorSpec", "gaussian_cm", "gibbs_l1", "mh_fallback",
    "posterior_probability", "quadrature_reconstructor", "tikhonov_solve",
    "CoeffField", "WaveletBasis", "basis_function", "build_basis",
    "decode_index", "dwt", "encode_index", "idwt", "truncate",
]
