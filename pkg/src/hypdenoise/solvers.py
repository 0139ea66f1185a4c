"""Explicit ADMM iterations for the relaxed Tikhonov and TV models."""

import time
from dataclasses import dataclass, field

import numpy as np

from .geometry import minkowski, proj_halfspace
from .graphs import Graph
from .relaxation import (
    TikVars,
    TvVars,
    adj_Q,
    adj_V,
    offset_E,
    offset_E_hat,
    op_Q,
    op_V,
    proj_psd,
)
from .tvprox import tv_prox_graph, tv_value


@dataclass
class TikhonovProblem:
    graph: Graph
    y: np.ndarray  # (N, d+1) noisy data
    lam: float
    rho: float

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        if self.lam <= 0 or self.rho <= 0:
            raise ValueError("lambda and rho must be positive")
        if self.y.shape[0] != self.graph.n_vertices:
            raise ValueError("data length does not match the graph")


@dataclass
class TvProblem:
    graph: Graph
    y: np.ndarray
    mu: float
    rho: float
    inner_iters: int = 50

    def __post_init__(self):
        self.y = np.asarray(self.y, dtype=float)
        if self.mu <= 0 or self.rho <= 0:
            raise ValueError("mu and rho must be positive")
        if self.y.shape[0] != self.graph.n_vertices:
            raise ValueError("data length does not match the graph")


@dataclass
class StoppingOptions:
    max_iter: int = 20000
    eps_primal: float = 1e-7
    eps_mae: float = 1e-10
    record_every: int = 1


@dataclass
class SolveReport:
    iterations: int
    objective: float
    mae_eta: float
    primal_residuals: tuple
    stop_reason: str
    wall_time: float
    trace: dict = field(default_factory=dict)


def objective_J(problem, vars):
    """Linear Tikhonov objective in (x, f, v)."""
    g = problem.graph
    fid = 0.5 * np.sum(vars.v - 2.0 * np.sum(vars.x * problem.y, axis=1))
    n_idx, m_idx = g.edges[:, 0], g.edges[:, 1]
    reg = 0.5 * problem.lam * np.sum(vars.v[n_idx] + vars.v[m_idx] - 2.0 * vars.f)
    return float(fid + reg)


def objective_K(problem, vars):
    """TV objective in (x, v)."""
    fid = 0.5 * np.sum(vars.v - 2.0 * np.sum(vars.x * problem.y, axis=1))
    return float(fid + problem.mu * tv_value(problem.graph, vars.x))


def _mae_eta(x):
    return float(np.mean(np.abs(minkowski(x, x) + 1.0)))


def stopping_check(iteration, opts, residuals, mae_change):
    """Return a stop reason or None."""
    if iteration >= opts.max_iter:
        return "max_iter"
    if iteration > 0 and all(r < opts.eps_primal for r in residuals):
        if mae_change < opts.eps_mae:
            return "residual"
    return None


def admm_tikhonov(problem, opts=None):
    """ADMM for the relaxed Tikhonov model; zero initialization.

    The l-update coefficient is 1/4 (no 1/rho), from the stationarity
    condition of the x-step; the dual update follows the generic
    two-block iteration.
    """
    opts = opts or StoppingOptions()
    g = problem.graph
    d = problem.y.shape[1] - 1
    n_edges = g.n_edges
    deg = g.degrees.astype(float)
    big_e = offset_E(d)
    rho, lam = problem.rho, problem.lam

    vars = TikVars.zeros(g, d)
    U = np.zeros((n_edges, d + 5, d + 5))
    Z = np.zeros_like(U)

    trace_obj, trace_mae, trace_res = [], [], []
    mae_prev = np.inf
    stop_reason = "max_iter"
    t0 = time.perf_counter()
    it = 0
    while True:
        diff = U - Z
        adj = adj_Q(g, diff)
        vars.x = proj_halfspace((adj.x + problem.y / rho) / (4.0 * deg[:, None]))
        vars.ell = 0.25 * adj.ell
        vars.f = 0.25 * (adj.f + lam / rho)
        vars.v = (adj.v - (1.0 + deg * lam) / (2.0 * rho)) / (2.0 * deg)
        q_op = op_Q(g, vars)
        U = proj_psd(q_op + big_e + Z) - big_e
        Z = Z + q_op - U

        it += 1
        mae = _mae_eta(vars.x)
        res = np.linalg.norm(q_op - U) / max(1.0, np.linalg.norm(U))
        if it % opts.record_every == 0 or it == 1:
            trace_obj.append(objective_J(problem, vars))
            trace_mae.append(mae)
            trace_res.append(res)
        reason = stopping_check(it, opts, (res,), abs(mae - mae_prev))
        mae_prev = mae
        if reason:
            stop_reason = reason
            break

    report = SolveReport(
        iterations=it,
        objective=objective_J(problem, vars),
        mae_eta=mae_prev,
        primal_residuals=(res,),
        stop_reason=stop_reason,
        wall_time=time.perf_counter() - t0,
        trace={"objective": trace_obj, "mae_eta": trace_mae, "residual": trace_res},
    )
    return vars, report


def admm_tv(problem, opts=None):
    """ADMM for the relaxed TV model on a line or grid graph."""
    opts = opts or StoppingOptions()
    g = problem.graph
    d = problem.y.shape[1] - 1
    n = g.n_vertices
    e_hat = offset_E_hat(d)
    rho, mu = problem.rho, problem.mu

    vars = TvVars.zeros(g, d)
    u = np.zeros((n, d + 1))
    z = np.zeros((n, d + 1))
    U = np.zeros((n, d + 3, d + 3))
    Z = np.zeros_like(U)

    trace_obj, trace_mae, trace_res = [], [], []
    mae_prev = np.inf
    stop_reason = "max_iter"
    t0 = time.perf_counter()
    it = 0
    while True:
        diff = U - Z
        adj = adj_V(g, diff)
        arg = (adj.x + problem.y / rho + (u - z)) / 5.0
        vars.x = tv_prox_graph(g, arg, mu / (5.0 * rho), inner_iters=problem.inner_iters)
        vars.v = 0.5 * adj.v - 1.0 / (4.0 * rho)
        v_op = op_V(g, vars)
        U = proj_psd(v_op + e_hat + Z) - e_hat
        u = proj_halfspace(vars.x + z)
        Z = Z + v_op - U
        z = z + vars.x - u

        it += 1
        mae = _mae_eta(vars.x)
        res_mat = np.linalg.norm(v_op - U) / max(1.0, np.linalg.norm(U))
        res_vec = np.linalg.norm(vars.x - u) / max(1.0, np.linalg.norm(u))
        if it % opts.record_every == 0 or it == 1:
            trace_obj.append(objective_K(problem, vars))
            trace_mae.append(mae)
            trace_res.append(max(res_mat, res_vec))
        reason = stopping_check(it, opts, (res_mat, res_vec), abs(mae - mae_prev))
        mae_prev = mae
        if reason:
            stop_reason = reason
            break

    report = SolveReport(
        iterations=it,
        objective=objective_K(problem, vars),
        mae_eta=mae_prev,
        primal_residuals=(res_mat, res_vec),
        stop_reason=stop_reason,
        wall_time=time.perf_counter() - t0,
        trace={"objective": trace_obj, "mae_eta": trace_mae, "residual": trace_res},
    )
    return vars, report
