#!/usr/bin/env python3
"""Run the H_2 line-signal denoising experiment (both models)."""

import sys

from hypdenoise.cli import main

if __name__ == "__main__":
    sys.exit(main(["synthetic-h2"] + sys.argv[1:]))
