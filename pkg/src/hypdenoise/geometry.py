"""Lorentz-model hyperbolic geometry primitives.

Points of H_d live in the Euclidean embedding R^{d+1}; the sheet is
{x : eta(x, x) = -1, x_{d+1} > 0} and sits inside the affine halfspace
A_{d+1} = R^d x [1, inf).
"""

import numpy as np

# |eta(x,x)+1| tolerance for sheet-membership preconditions.
SHEET_TOL = 1e-9

# arcosh arguments in [1 - ARCOSH_CLAMP, 1) are clamped to 1.
ARCOSH_CLAMP = 1e-12


def minkowski(a, b):
    """Minkowski bilinear form: sum_i<=d a_i b_i - a_{d+1} b_{d+1}.

    Works on single vectors or stacked arrays (form taken along the last
    axis).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(
            f"length mismatch: {a.shape[-1]} vs {b.shape[-1]}"
        )
    s = np.sum(a[..., :-1] * b[..., :-1], axis=-1)
    return s - a[..., -1] * b[..., -1]


def tilde(a):
    """Negate the last coordinate: <a, tilde(b)> = eta(a, b)."""
    a = np.asarray(a, dtype=float)
    out = a.copy()
    out[..., -1] = -out[..., -1]
    return out


def on_sheet(a, tol=SHEET_TOL):
    a = np.asarray(a, dtype=float)
    return np.all(np.abs(minkowski(a, a) + 1.0) <= tol) and np.all(a[..., -1] > 0)


def hyp_distance(a, b, tol=SHEET_TOL):
    """Geodesic distance arcosh(-eta(a, b)) between sheet points."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if not on_sheet(a, tol) or not on_sheet(b, tol):
        raise ValueError("hyp_distance requires points on the sheet")
    c = -minkowski(a, b)
    if np.any(c < 1.0 - ARCOSH_CLAMP):
        raise ValueError("arcosh argument below 1: points not on the sheet")
    return np.arccosh(np.maximum(c, 1.0))


def proj_halfspace(a):
    """Euclidean projection onto A_{d+1}: clip the last coordinate at 1."""
    a = np.asarray(a, dtype=float)
    out = a.copy()
    out[..., -1] = np.maximum(out[..., -1], 1.0)
    return out


def snap_to_sheet(a):
    """Radially renormalize to eta = -1 (diagnostic use only)."""
    a = np.asarray(a, dtype=float)
    q = -minkowski(a, a)
    if np.any(q <= 0) or np.any(a[..., -1] <= 0):
        raise ValueError("snap_to_sheet requires eta(a,a) < 0 and a_{d+1} > 0")
    return a / np.sqrt(q)[..., None]


def param_h1(r):
    """r -> (sinh r, cosh r) on H_1."""
    r = np.asarray(r, dtype=float)
    return np.stack([np.sinh(r), np.cosh(r)], axis=-1)


def param_h2(r, s):
    """(r, s) -> (sinh r cos s, sinh r sin s, cosh r) on H_2."""
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    return np.stack(
        [np.sinh(r) * np.cos(s), np.sinh(r) * np.sin(s), np.cosh(r)], axis=-1
    )


def exp_map(base, direction, tol=1e-6):
    """Hyperboloid exponential map of a tangent vector at `base`.

    `direction` must satisfy eta(base, direction) = 0 within tol.  For
    tangent norms below 1e-12 the first-order expansion (the base point)
    is returned.
    """
    base = np.asarray(base, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if np.any(np.abs(minkowski(base, direction)) > tol):
        raise ValueError("direction is not tangent to the sheet at base")
    nrm2 = minkowski(direction, direction)
    nrm = np.sqrt(np.maximum(nrm2, 0.0))
    small = nrm < 1e-12
    safe = np.where(small, 1.0, nrm)
    out = (
        np.cosh(nrm)[..., None] * base
        + (np.sinh(nrm) / safe)[..., None] * direction
    )
    if np.any(small):
        out = np.where(small[..., None], base + direction, out)
    return out


def tangent_basis(base):
    """Orthonormal basis of the tangent space at a sheet point.

    Gram-Schmidt of the spatial unit vectors e_1, ..., e_d against the
    base point under the Minkowski form; deterministic.  For a single
    point returns shape (d, d+1); for stacked points (..., d, d+1).
    """
    base = np.asarray(base, dtype=float)
    d = base.shape[-1] - 1
    basis = []
    for k in range(d):
        t = np.zeros(base.shape)
        t[..., k] = 1.0
        # remove the base component (eta(base, base) = -1)
        t = t + minkowski(t, base)[..., None] * base
        for prev in basis:
            t = t - minkowski(t, prev)[..., None] * prev
        t = t / np.sqrt(minkowski(t, t))[..., None]
        basis.append(t)
    return np.stack(basis, axis=-2)
