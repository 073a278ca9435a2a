#!/usr/bin/env python3
"""Convergence study at the acceptance scale: Gaussian prior, d=1, master
grid 512, ladders 8..256, one frozen realization."""

import sys

from besov_invert.cli import main

if __name__ == "__main__":
    sys.exit(main([
        "converge-study", "--out", "out/converge_study",
        "--set", "dimension=1", "--set", "grid_log2=9",
        "--set", "prior=gaussian_smoothness", "--set", "psf=poly",
        "--set", "n_ladder=8,16,32,64,128,256",
        "--set", "k_ladder=8,16,32,64,128,256",
        "--set", "seed=0",
    ] + sys.argv[1:]))
