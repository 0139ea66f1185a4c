"""Gaussian image statistics and the Fisher-metric identification with H_2.

A pixelwise Gaussian N(mu, sigma^2) is mapped to the hyperboloid by the
chain half-plane -> Poincare disc -> sheet:

    p1: (mu, sigma) -> (mu/sqrt(2), sigma)            (half-plane P_2)
    p2: y -> (2 y1, |y|^2 - 1) / (y1^2 + (y2+1)^2)    (Cayley, disc D_2)
    p3: y -> (2 y1, 2 y2, 1 + |y|^2) / (1 - |y|^2)    (stereographic, H_2)

The inverse chain is analytic: p3^-1(x) = (x1, x2)/(1 + x3), p2^-1 is
the inverse Cayley transform, p1^-1(y) = (sqrt(2) y1, y2).
"""

from dataclasses import dataclass

import numpy as np

from .geometry import snap_to_sheet

SIGMA_FLOOR = 1e-6


@dataclass
class GaussImage:
    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        self.mu = np.asarray(self.mu, dtype=float)
        self.sigma = np.asarray(self.sigma, dtype=float)
        if self.mu.shape != self.sigma.shape:
            raise ValueError("mu and sigma must share a shape")
        if np.any(self.sigma <= 0):
            raise ValueError("sigma must be positive everywhere")


def ml_estimates(series):
    """Pixelwise 1/K mean and variance MLEs from a K-image stack."""
    series = np.asarray(series, dtype=float)
    if series.ndim != 3 or series.shape[0] < 2:
        raise ValueError("need a stack of K >= 2 images")
    mu = np.mean(series, axis=0)
    var = np.mean((series - mu) ** 2, axis=0)
    sigma = np.maximum(np.sqrt(var), SIGMA_FLOOR)
    return GaussImage(mu, sigma)


def half_plane(mu, sigma):
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0):
        raise ValueError("sigma must be positive")
    return mu / np.sqrt(2.0), sigma.copy()


def plane_to_disc(y1, y2):
    denom = y1**2 + (y2 + 1.0) ** 2
    return 2.0 * y1 / denom, (y1**2 + y2**2 - 1.0) / denom


def disc_to_sheet(y1, y2):
    nrm2 = y1**2 + y2**2
    denom = 1.0 - nrm2
    return np.stack(
        [2.0 * y1 / denom, 2.0 * y2 / denom, (1.0 + nrm2) / denom], axis=-1
    )


def to_hyperbolic(mu, sigma):
    """Gaussian parameters -> point on H_2 (vectorized)."""
    y1, y2 = half_plane(mu, sigma)
    w1, w2 = plane_to_disc(y1, y2)
    return disc_to_sheet(w1, w2)


def from_hyperbolic(x):
    """Point on H_2 -> (mu, sigma); analytic inverse of to_hyperbolic."""
    x = np.asarray(x, dtype=float)
    x1, x2, x3 = x[..., 0], x[..., 1], x[..., 2]
    # inverse stereographic projection onto the disc
    w1 = x1 / (1.0 + x3)
    w2 = x2 / (1.0 + x3)
    # inverse Cayley transform disc -> half-plane: with p2(z) = i(z-i)/(z+i)
    # the inverse is z = i (1 + q) / (1 - q), q = -i w
    w = w1 + 1j * w2
    q = -1j * w
    z = 1j * (1.0 + q) / (1.0 - q)
    y1, y2 = np.real(z), np.imag(z)
    return np.sqrt(2.0) * y1, y2


def series_to_h2_image(series):
    """Estimate (mu, sigma) pixelwise and lift to an H_2-valued image."""
    est = ml_estimates(series)
    return to_hyperbolic(est.mu, est.sigma)


def h2_image_to_gauss(img, snap=False):
    """Read (mu, sigma) off an H_2-valued image, optionally snapping first."""
    img = np.asarray(img, dtype=float)
    if snap:
        img = snap_to_sheet(img)
    mu, sigma = from_hyperbolic(img)
    if np.any(sigma <= 0):
        raise ValueError("off-sheet pixel produced nonpositive sigma")
    return GaussImage(mu, sigma)
