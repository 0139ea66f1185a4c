"""Seeded noise models for sheet-valued signals."""

from dataclasses import dataclass

import numpy as np

from .geometry import exp_map, tangent_basis


@dataclass(frozen=True)
class NoiseSpec:
    kind: str  # "tangential" | "ambient"
    sigma: float
    seed: int

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.kind not in ("tangential", "ambient"):
            raise ValueError(f"unknown noise kind: {self.kind}")


def make_rng(seed):
    """Counter-based generator (Philox) so draws are reproducible and
    independent of threading."""
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def tangential_noise(x, sigma, rng):
    """Gaussian in the orthonormal tangent frame, pushed through exp.

    Draws d iid N(0, sigma^2) coefficients per point; output stays on
    the sheet up to round-off.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = np.atleast_2d(x)
    d = pts.shape[-1] - 1
    coeffs = rng.normal(0.0, sigma, size=pts.shape[:-1] + (d,))
    bases = tangent_basis(pts)  # (..., d, d+1)
    directions = np.einsum("...k,...kj->...j", coeffs, bases)
    out = exp_map(pts, directions)
    return out[0] if single else out


def ambient_noise(x, sigma, rng):
    """Additive iid N(0, sigma^2) on every embedding coordinate."""
    x = np.asarray(x, dtype=float)
    return x + rng.normal(0.0, sigma, size=x.shape)


def apply_noise(x, spec):
    rng = make_rng(spec.seed)
    if spec.kind == "tangential":
        return tangential_noise(x, spec.sigma, rng)
    return ambient_noise(x, spec.sigma, rng)
