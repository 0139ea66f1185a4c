"""Synthetic ground-truth signals and test images.

The line-signal generators interpolate parameter knots with a cubic
spline and lift through the sheet parametrizations.  Default knots keep
the radial parameter bounded away from 0: signals crossing the apex
make the halfspace constraint active, which opens a small relaxation
gap and spoils exact convergence back to the sheet.
"""

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import param_h1, param_h2

DEFAULT_H1_KNOTS = (0.8, 1.6, 0.5, 1.2, 1.8, 0.6, 1.4, 0.9)
DEFAULT_H2_KNOTS_R = (0.9, 1.5, 0.6, 1.1, 1.7, 0.7, 1.3, 1.0)
DEFAULT_H2_KNOTS_S = (0.0, 0.8, 1.6, 1.0, 2.2, 2.8, 2.0, 3.0)


def _spline(knots, n):
    knots = np.asarray(knots, dtype=float)
    if len(knots) < 2:
        raise ValueError("need at least two knots")
    t = np.linspace(0.0, 1.0, len(knots))
    return CubicSpline(t, knots)(np.linspace(0.0, 1.0, n))


def h1_signal(n, knots=DEFAULT_H1_KNOTS):
    """Smooth H_1-valued line signal through the given r-knots."""
    r = _spline(knots, n)
    return param_h1(r), r


def h2_signal(n, knots_r=DEFAULT_H2_KNOTS_R, knots_s=DEFAULT_H2_KNOTS_S):
    """Smooth H_2-valued line signal through the given (r, s)-knots."""
    r = _spline(knots_r, n)
    s = _spline(knots_s, n)
    return param_h2(r, s), np.column_stack([r, s])


def test_image(rows=64, cols=64):
    """Deterministic grayscale test image in [0, 1]: smooth ramp plus
    piecewise-constant blocks and a disc, so both models have work to do."""
    i, j = np.meshgrid(np.linspace(0, 1, rows), np.linspace(0, 1, cols), indexing="ij")
    img = 0.25 + 0.35 * i
    img[(i > 0.15) & (i < 0.45) & (j > 0.1) & (j < 0.4)] = 0.85
    img[(i > 0.55) & (i < 0.9) & (j > 0.55) & (j < 0.8)] = 0.15
    disc = (i - 0.3) ** 2 + (j - 0.72) ** 2 < 0.018
    img[disc] = 0.65
    return img


def noisy_series(image, k, sigma, rng):
    """K noisy shots of `image` under iid additive Gaussian noise."""
    image = np.asarray(image, dtype=float)
    return image[None] + rng.normal(0.0, sigma, size=(k,) + image.shape)
