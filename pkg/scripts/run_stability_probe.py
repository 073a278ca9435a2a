#!/usr/bin/env python3
"""Local-Lipschitz probes of the data-to-estimate map on both backends."""

import sys

from besov_invert.cli import main

if __name__ == "__main__":
    rc = main(["stability-probe", "--out", "out/stability_gaussian",
               "--set", "backend=gaussian", "--set", "grid_log2=5",
               "--set", "n=8", "--set", "k=8"] + sys.argv[1:])
    if rc:
        sys.exit(rc)
    sys.exit(main(["stability-probe", "--out", "out/stability_laplace",
                   "--set", "backend=laplace_quadrature", "--set", "grid_log2=4",
                   "--set", "k=4", "--set", "wavelet_family=1"] + sys.argv[1:]))
