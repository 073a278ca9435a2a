#!/usr/bin/env python3
"""End-to-end deblurring demo: Gaussian vs Besov p=1 reconstruction of a
piecewise-regular signal across several (n, k) pairs."""

import sys

from besov_invert.cli import main

if __name__ == "__main__":
    sys.exit(main(["deblur-demo", "--out", "out/deblur_demo"] + sys.argv[1:]))
