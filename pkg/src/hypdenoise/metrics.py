"""Quality and diagnostic metrics."""

import numpy as np

from .geometry import hyp_distance, minkowski

SNR_CAP_DB = 300.0


def mae_eta(x):
    """Mean absolute deviation of eta(x, x) from -1 over all points."""
    x = np.asarray(x, dtype=float)
    return float(np.mean(np.abs(minkowski(x, x) + 1.0)))


def snr(reference, estimate):
    """10 log10(||ref||^2 / ||ref - est||^2) in dB, capped at exact match."""
    reference = np.asarray(reference, dtype=float)
    estimate = np.asarray(estimate, dtype=float)
    if reference.shape != estimate.shape:
        raise ValueError("shape mismatch")
    ref_power = np.sum(reference**2)
    if ref_power == 0:
        raise ValueError("reference is identically zero")
    err_power = np.sum((reference - estimate) ** 2)
    if err_power == 0:
        return SNR_CAP_DB
    return float(min(10.0 * np.log10(ref_power / err_power), SNR_CAP_DB))


def mean_hyp_error(x, x_ref):
    """Mean pointwise geodesic distance between two sheet-valued signals."""
    x = np.asarray(x, dtype=float)
    x_ref = np.asarray(x_ref, dtype=float)
    if x.shape != x_ref.shape:
        raise ValueError("shape mismatch")
    return float(np.mean(hyp_distance(x, x_ref)))
