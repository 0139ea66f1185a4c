"""PSD certificate matrices for sheet membership and their linear operators.

Per edge (n, m) the certificate is the bordered symmetric (d+5)x(d+5)
matrix Q built from (x_n, x_m, v_n, v_m, f, l); per vertex the TV model
uses the (d+3)x(d+3) matrix V built from (x_n, v_n).  Sheet membership
plus exact auxiliary couplings is equivalent to "PSD and rank d+1".
The affine operators become linear after subtracting the constant
offsets E / E_hat, which collect the identity block and the fixed -1
entries.
"""

from dataclasses import dataclass

import numpy as np

from .geometry import tilde

RANK_TOL = 1e-9


@dataclass
class TikVars:
    """Primal variables of the relaxed Tikhonov model."""

    x: np.ndarray  # (N, d+1)
    ell: np.ndarray  # (M,)
    f: np.ndarray  # (M,)
    v: np.ndarray  # (N,)

    @classmethod
    def zeros(cls, graph, d):
        n, m = graph.n_vertices, graph.n_edges
        return cls(np.zeros((n, d + 1)), np.zeros(m), np.zeros(m), np.zeros(n))

    def dot(self, other):
        return (
            np.vdot(self.x, other.x)
            + np.vdot(self.ell, other.ell)
            + np.vdot(self.f, other.f)
            + np.vdot(self.v, other.v)
        )


@dataclass
class TvVars:
    """Primal variables of the relaxed TV model."""

    x: np.ndarray  # (N, d+1)
    v: np.ndarray  # (N,)

    @classmethod
    def zeros(cls, graph, d):
        n = graph.n_vertices
        return cls(np.zeros((n, d + 1)), np.zeros(n))

    def dot(self, other):
        return np.vdot(self.x, other.x) + np.vdot(self.v, other.v)


def offset_E(d):
    """diag(I_{d+1}, [[0,-1],[-1,0]], [[0,-1],[-1,0]]), size d+5."""
    e = np.zeros((d + 5, d + 5))
    e[: d + 1, : d + 1] = np.eye(d + 1)
    for j in (d + 1, d + 3):
        e[j, j + 1] = e[j + 1, j] = -1.0
    return e


def offset_E_hat(d):
    """diag(I_{d+1}, [[0,-1],[-1,0]]), size d+3."""
    e = np.zeros((d + 3, d + 3))
    e[: d + 1, : d + 1] = np.eye(d + 1)
    e[d + 1, d + 2] = e[d + 2, d + 1] = -1.0
    return e


def build_Q(xn, xm, vn, vm, f, ell):
    """Edge certificate; accepts single vectors or stacked (M, d+1) input."""
    xn = np.asarray(xn, dtype=float)
    xm = np.asarray(xm, dtype=float)
    single = xn.ndim == 1
    xn = np.atleast_2d(xn)
    xm = np.atleast_2d(xm)
    vn = np.atleast_1d(np.asarray(vn, dtype=float))
    vm = np.atleast_1d(np.asarray(vm, dtype=float))
    f = np.atleast_1d(np.asarray(f, dtype=float))
    ell = np.atleast_1d(np.asarray(ell, dtype=float))
    m, dp1 = xn.shape
    d = dp1 - 1
    q = np.zeros((m, d + 5, d + 5))
    q[:, : d + 1, : d + 1] = np.eye(d + 1)
    cols = [xn, tilde(xn), xm, tilde(xm)]
    for j, c in enumerate(cols):
        q[:, : d + 1, d + 1 + j] = c
        q[:, d + 1 + j, : d + 1] = c
    blk = np.zeros((m, 4, 4))
    blk[:, 0, 0] = blk[:, 1, 1] = vn
    blk[:, 2, 2] = blk[:, 3, 3] = vm
    blk[:, 0, 1] = blk[:, 1, 0] = -1.0
    blk[:, 2, 3] = blk[:, 3, 2] = -1.0
    blk[:, 0, 2] = blk[:, 2, 0] = blk[:, 1, 3] = blk[:, 3, 1] = f
    blk[:, 0, 3] = blk[:, 3, 0] = blk[:, 1, 2] = blk[:, 2, 1] = ell
    q[:, d + 1 :, d + 1 :] = blk
    return q[0] if single else q


def build_V(xn, vn):
    """Vertex certificate; accepts single vectors or stacked (N, d+1) input."""
    xn = np.asarray(xn, dtype=float)
    single = xn.ndim == 1
    xn = np.atleast_2d(xn)
    vn = np.atleast_1d(np.asarray(vn, dtype=float))
    n, dp1 = xn.shape
    d = dp1 - 1
    v = np.zeros((n, d + 3, d + 3))
    v[:, : d + 1, : d + 1] = np.eye(d + 1)
    for j, c in enumerate([xn, tilde(xn)]):
        v[:, : d + 1, d + 1 + j] = c
        v[:, d + 1 + j, : d + 1] = c
    v[:, d + 1, d + 1] = v[:, d + 2, d + 2] = vn
    v[:, d + 1, d + 2] = v[:, d + 2, d + 1] = -1.0
    return v[0] if single else v


def check_certificate(mat, tol=RANK_TOL):
    """Return (is_psd, numerical_rank) from the eigenvalues of `mat`."""
    mat = np.asarray(mat, dtype=float)
    w = np.linalg.eigvalsh(0.5 * (mat + mat.T))
    lam_max = w[-1]
    if lam_max <= 1.0:
        is_psd = bool(w[0] >= -tol)
    else:
        is_psd = bool(w[0] >= -tol * lam_max)
    rank = int(np.count_nonzero(w > tol * max(lam_max, 0.0))) if lam_max > 0 else 0
    return is_psd, rank


def op_Q(graph, vars):
    """Linear operator: per-edge certificate minus the constant offset E."""
    d = vars.x.shape[1] - 1
    n_idx, m_idx = graph.edges[:, 0], graph.edges[:, 1]
    q = build_Q(
        vars.x[n_idx], vars.x[m_idx], vars.v[n_idx], vars.v[m_idx], vars.f, vars.ell
    )
    if graph.n_edges == 1:
        q = q[None] if q.ndim == 2 else q
    return q - offset_E(d)


def adj_Q(graph, U):
    """Adjoint of op_Q for stacked symmetric matrices U of shape (M, d+5, d+5)."""
    U = np.asarray(U, dtype=float)
    m, size, _ = U.shape
    if m != graph.n_edges:
        raise ValueError("U does not match the edge count")
    d = size - 5
    n_idx, m_idx = graph.edges[:, 0], graph.edges[:, 1]
    sign = np.ones(d + 1)
    sign[-1] = -1.0
    n_vert = graph.n_vertices

    # x: first-endpoint contributions use border columns d+1/d+2,
    # second-endpoint ones d+3/d+4
    contrib_n = 2.0 * (U[:, : d + 1, d + 1] + sign * U[:, : d + 1, d + 2])
    contrib_m = 2.0 * (U[:, : d + 1, d + 3] + sign * U[:, : d + 1, d + 4])
    x = np.zeros((n_vert, d + 1))
    np.add.at(x, n_idx, contrib_n)
    np.add.at(x, m_idx, contrib_m)

    ell = 2.0 * (U[:, d + 4, d + 1] + U[:, d + 3, d + 2])
    f = 2.0 * (U[:, d + 3, d + 1] + U[:, d + 4, d + 2])

    v = np.zeros(n_vert)
    np.add.at(v, n_idx, U[:, d + 1, d + 1] + U[:, d + 2, d + 2])
    np.add.at(v, m_idx, U[:, d + 3, d + 3] + U[:, d + 4, d + 4])
    return TikVars(x, ell, f, v)


def op_V(graph, vars):
    """Linear operator: per-vertex certificate minus the offset E_hat."""
    d = vars.x.shape[1] - 1
    v = build_V(vars.x, vars.v)
    if graph.n_vertices == 1:
        v = v[None] if v.ndim == 2 else v
    return v - offset_E_hat(d)


def adj_V(graph, U):
    """Adjoint of op_V for stacked symmetric matrices U of shape (N, d+3, d+3)."""
    U = np.asarray(U, dtype=float)
    n, size, _ = U.shape
    if n != graph.n_vertices:
        raise ValueError("U does not match the vertex count")
    d = size - 3
    sign = np.ones(d + 1)
    sign[-1] = -1.0
    x = 2.0 * (U[:, : d + 1, d + 1] + sign * U[:, : d + 1, d + 2])
    v = U[:, d + 1, d + 1] + U[:, d + 2, d + 2]
    return TvVars(x, v)


def proj_psd(mat):
    """Frobenius-nearest PSD matrix; batched over leading axes."""
    mat = np.asarray(mat, dtype=float)
    sym = 0.5 * (mat + np.swapaxes(mat, -1, -2))
    w, vec = np.linalg.eigh(sym)
    w = np.maximum(w, 0.0)
    return np.einsum("...ij,...j,...kj->...ik", vec, w, vec)
