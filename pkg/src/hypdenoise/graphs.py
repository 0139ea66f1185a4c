"""Connected undirected graphs with ordered edge lists."""

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Graph:
    """Graph on vertices {0, ..., N-1} with edges (n, m), n < m.

    Vertex indices are zero-based internally; constructors accept sizes
    only, so no off-by-one surface is exposed.
    """

    n_vertices: int
    edges: np.ndarray  # (M, 2) int array, each row (n, m) with n < m
    degrees: np.ndarray = field(init=False)

    # optional grid shape, set by grid_graph; None for other graphs
    grid_shape: tuple | None = None

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "edges", edges)
        n = self.n_vertices
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise ValueError("edges must satisfy n < m")
            keys = edges[:, 0] * n + edges[:, 1]
            if len(np.unique(keys)) != len(keys):
                raise ValueError("duplicate edges")
        deg = np.bincount(edges.ravel(), minlength=n)
        object.__setattr__(self, "degrees", deg)
        if not self._connected():
            raise ValueError("graph must be connected")

    def _connected(self):
        parent = np.arange(self.n_vertices)

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for n, m in self.edges:
            parent[find(n)] = find(m)
        roots = {find(v) for v in range(self.n_vertices)}
        return len(roots) == 1

    @property
    def n_edges(self):
        return len(self.edges)

    def degree(self, n):
        if not 0 <= n < self.n_vertices:
            raise IndexError(f"vertex {n} out of range")
        return int(self.degrees[n])


def line_graph(n):
    """Path graph on n vertices."""
    if n < 2:
        raise ValueError("line graph needs n >= 2")
    edges = np.column_stack([np.arange(n - 1), np.arange(1, n)])
    return Graph(n, edges)


def grid_graph(rows, cols):
    """4-neighbor grid, row-major vertex numbering (i, j) -> i*cols + j."""
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("grid needs at least two vertices")
    idx = np.arange(rows * cols).reshape(rows, cols)
    right = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    down = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    edges = np.vstack([right, down])
    return Graph(rows * cols, edges, grid_shape=(rows, cols))
