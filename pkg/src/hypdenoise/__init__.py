"""Denoising of hyperbolic-valued signals and images via convex relaxed
Tikhonov / TV models solved by explicit ADMM, plus a Gaussian image
processing pipeline through the Fisher-metric identification with H_2."""

from . import gaussproc, geometry, graphs, metrics, noise, relaxation, solvers, tvprox

__all__ = [
    "gaussproc",
    "geometry",
    "graphs",
    "metrics",
    "noise",
    "relaxation",
    "solvers",
    "tvprox",
]

__version__ = "0.1.0"
