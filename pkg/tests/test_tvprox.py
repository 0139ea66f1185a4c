import numpy as np
import pytest

from hypdenoise.graphs import grid_graph, line_graph
from hypdenoise.tvprox import (
    tv1d_prox,
    tv2d_objective,
    tv2d_prox,
    tv_prox_graph,
    tv_value,
)


def tv1d_objective(x, y, w):
    return 0.5 * np.sum((x - y) ** 2) + w * np.sum(np.abs(np.diff(x)))


def tv1d_oracle(y, w, iters=100000, tol=1e-13):
    """Projected gradient on the dual problem, independent of the scanner."""
    n = len(y)
    if n == 1:
        return y.copy()
    d = np.zeros((n - 1, n))
    for i in range(n - 1):
        d[i, i + 1], d[i, i] = 1.0, -1.0
    z = np.zeros(n - 1)
    prev = None
    for k in range(iters):
        x = y - d.T @ z
        z = np.clip(z + (d @ x) / 4.0, -w, w)
        if k % 200 == 0:
            if prev is not None and np.max(np.abs(x - prev)) < tol:
                break
            prev = x
    return y - d.T @ z


def tv2d_oracle(y, w, iters=30000):
    """Projected gradient on the dual of the 2D anisotropic problem."""
    r, c = y.shape
    zh = np.zeros((r, c - 1))
    zv = np.zeros((r - 1, c))

    def dt(zh, zv):
        out = np.zeros_like(y)
        out[:, 1:] += zh
        out[:, :-1] -= zh
        out[1:, :] += zv
        out[:-1, :] -= zv
        return out

    for _ in range(iters):
        x = y - dt(zh, zv)
        zh = np.clip(zh + (x[:, 1:] - x[:, :-1]) / 8.0, -w, w)
        zv = np.clip(zv + (x[1:, :] - x[:-1, :]) / 8.0, -w, w)
    return y - dt(zh, zv)


class TestTv1d:
    def test_constant_unchanged(self):
        y = np.full(9, 3.7)
        for w in (0.01, 1.0, 50.0):
            assert np.allclose(tv1d_prox(y, w), y, atol=1e-12)

    def test_two_point_closed_form(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            a, b = rng.normal(size=2) * 2
            w = rng.uniform(0.01, 1.5)
            out = tv1d_prox(np.array([a, b]), w)
            if abs(a - b) >= 2 * w:
                s = np.sign(a - b)
                expected = np.array([a - w * s, b + w * s])
            else:
                expected = np.full(2, 0.5 * (a + b))
            assert np.allclose(out, expected, atol=1e-12)

    def test_matches_oracle_short_signals(self):
        rng = np.random.default_rng(1)
        for _ in range(40):
            n = int(rng.integers(1, 9))
            y = rng.normal(size=n) * rng.uniform(0.5, 3.0)
            w = rng.uniform(0.02, 2.0)
            assert np.max(np.abs(tv1d_prox(y, w) - tv1d_oracle(y, w))) < 1e-8

    def test_objective_optimality(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            y = rng.normal(size=10)
            w = rng.uniform(0.05, 1.0)
            ours = tv1d_objective(tv1d_prox(y, w), y, w)
            oracle = tv1d_objective(tv1d_oracle(y, w), y, w)
            assert ours <= oracle + 1e-10

    def test_mean_preserved(self):
        rng = np.random.default_rng(3)
        y = rng.normal(size=200)
        x = tv1d_prox(y, 0.8)
        assert x.mean() == pytest.approx(y.mean(), abs=1e-12)

    def test_tv_reduced(self):
        rng = np.random.default_rng(4)
        y = rng.normal(size=64)
        x = tv1d_prox(y, 0.3)
        assert np.sum(np.abs(np.diff(x))) <= np.sum(np.abs(np.diff(y))) + 1e-12

    def test_nonexpansive(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            y1, y2 = rng.normal(size=(2, 20))
            w = rng.uniform(0.05, 1.0)
            lhs = np.linalg.norm(tv1d_prox(y1, w) - tv1d_prox(y2, w))
            assert lhs <= np.linalg.norm(y1 - y2) + 1e-12

    def test_rejects_nonpositive_weight(self):
        with pytest.raises(ValueError):
            tv1d_prox(np.ones(3), 0.0)


class TestTv2d:
    def test_constant_unchanged(self):
        y = np.full((5, 7), 1.25)
        assert np.allclose(tv2d_prox(y, 0.4), y, atol=1e-12)

    def test_single_row_matches_1d(self):
        rng = np.random.default_rng(6)
        y = rng.normal(size=(1, 12))
        assert np.allclose(tv2d_prox(y, 0.3), tv1d_prox(y[0], 0.3)[None, :])

    def test_single_col_matches_1d(self):
        rng = np.random.default_rng(7)
        y = rng.normal(size=(9, 1))
        assert np.allclose(tv2d_prox(y, 0.3), tv1d_prox(y[:, 0], 0.3)[:, None])

    def test_matches_oracle_4x4(self):
        rng = np.random.default_rng(8)
        for _ in range(5):
            y = rng.normal(size=(4, 4))
            w = rng.uniform(0.1, 0.8)
            ours = tv2d_prox(y, w, inner_iters=200)
            oracle = tv2d_oracle(y, w)
            gap = tv2d_objective(ours, y, w) - tv2d_objective(oracle, y, w)
            assert gap <= 1e-6

    def test_objective_monotone_over_inner_iterations(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            y = rng.normal(size=(6, 6))
            w = rng.uniform(0.1, 1.0)
            objs = [
                tv2d_objective(tv2d_prox(y, w, inner_iters=k), y, w)
                for k in range(1, 30)
            ]
            diffs = np.diff(objs)
            assert np.max(diffs) <= 1e-12


class TestGraphTv:
    def test_tv_value_examples(self):
        g = line_graph(2)
        x = np.array([[0.0, 0.0], [1.0, 2.0]])
        assert tv_value(g, x) == 3.0
        assert tv_value(g, np.ones((2, 3))) == 0.0

    def test_tv_value_separability(self):
        rng = np.random.default_rng(10)
        g = grid_graph(3, 4)
        x = rng.normal(size=(12, 3))
        per_channel = sum(tv_value(g, x[:, [c]]) for c in range(3))
        assert tv_value(g, x) == pytest.approx(per_channel, abs=1e-12)

    def test_line_prox_channelwise(self):
        rng = np.random.default_rng(11)
        g = line_graph(15)
        y = rng.normal(size=(15, 3))
        out = tv_prox_graph(g, y, 0.4)
        for c in range(3):
            assert np.allclose(out[:, c], tv1d_prox(y[:, c], 0.4))

    def test_channel_permutation_equivariance(self):
        rng = np.random.default_rng(12)
        g = line_graph(10)
        y = rng.normal(size=(10, 3))
        perm = [2, 0, 1]
        assert np.allclose(
            tv_prox_graph(g, y[:, perm], 0.3), tv_prox_graph(g, y, 0.3)[:, perm]
        )

    def test_small_weight_limit(self):
        rng = np.random.default_rng(13)
        g = line_graph(8)
        y = rng.normal(size=(8, 2))
        assert np.allclose(tv_prox_graph(g, y, 1e-14), y, atol=1e-12)

    def test_grid_prox_channelwise(self):
        rng = np.random.default_rng(14)
        g = grid_graph(4, 5)
        y = rng.normal(size=(20, 2))
        out = tv_prox_graph(g, y, 0.25)
        for c in range(2):
            expected = tv2d_prox(y[:, c].reshape(4, 5), 0.25)
            assert np.allclose(out[:, c], expected.ravel())

    def test_rejects_general_graph(self):
        from hypdenoise.graphs import Graph

        g = Graph(3, [[0, 1], [1, 2], [0, 2]])
        with pytest.raises(ValueError):
            tv_prox_graph(g, np.ones((3, 2)), 0.5)
