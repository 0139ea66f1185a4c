#!/usr/bin/env python3
"""Run the Gaussian image-series denoising pipeline.

Without --input a built-in synthetic test image is used; pass a
directory of grayscale shots to denoise real data.
"""

import sys

from hypdenoise.cli import main

if __name__ == "__main__":
    sys.exit(main(["gaussian-image"] + sys.argv[1:]))
