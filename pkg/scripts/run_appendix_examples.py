#!/usr/bin/env python3
"""Variance-limit reports for the five discretization examples."""

import sys

from besov_invert.cli import main

if __name__ == "__main__":
    for which in (1, 2, 3, 4, 5):
        rc = main(["appendix-example", "--out", f"out/appendix_example_{which}",
                   "--set", f"example={which}"] + sys.argv[1:])
        if rc:
            sys.exit(rc)
    sys.exit(0)
