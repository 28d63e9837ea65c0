"""Finite carriers for (in)complete metric spaces.

A :class:`SampledSpace` is a finite point set with a symmetric distance
table, an optional weighted length-graph structure (used by the conformal
deformation machinery), a flagged subset of boundary sample points, and a
per-interior-point distance-to-boundary function.  The same carrier is used
for model domains, their quasihyperbolizations and uniformizations, and the
outputs of inversion/sphericalization.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

# Dense distance tables are materialized up to this many points; larger
# spaces answer distance queries per source row (cached).
DENSE_LIMIT = 2000

# Tolerances for metric sanity checks: absolute for exact graph metrics,
# relative for sampled continua.
TRI_TOL_ABS = 1e-9
TRI_TOL_REL = 1e-6

Polyline = list  # ordered list of point indices within one SampledSpace


class LengthGraph:
    """Undirected graph with positive edge lengths."""

    def __init__(self, n: int, edges, weights):
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        weights = np.asarray(weights, dtype=float).reshape(-1)
        if len(edges) != len(weights):
            raise ValueError("edges and weights length mismatch")
        if len(weights) and weights.min() <= 0:
            raise ValueError("edge weights must be positive")
        if len(edges) and (edges.min() < 0 or edges.max() >= n):
            raise ValueError("edge endpoint out of range")
        self.n = int(n)
        self.edges = edges
        self.weights = weights
        self._adj = None
        self._nbrs = None

    def adjacency(self) -> csr_matrix:
        if self._adj is None:
            i = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
            j = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
            w = np.concatenate([self.weights, self.weights])
            self._adj = csr_matrix((w, (i, j)), shape=(self.n, self.n))
        return self._adj

    def neighbor_lists(self):
        """Per-vertex (neighbor indices, edge weights), neighbors sorted by index."""
        if self._nbrs is None:
            adj = self.adjacency()
            nbrs = []
            for u in range(self.n):
                lo, hi = adj.indptr[u], adj.indptr[u + 1]
                idx = adj.indices[lo:hi]
                w = adj.data[lo:hi]
                order = np.argsort(idx, kind="stable")
                nbrs.append((idx[order], w[order]))
            self._nbrs = nbrs
        return self._nbrs

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        ncomp, _ = connected_components(self.adjacency(), directed=False)
        return ncomp == 1

    def reweighted(self, weights) -> "LengthGraph":
        return LengthGraph(self.n, self.edges.copy(), np.asarray(weights, dtype=float))

    def subgraph(self, keep) -> tuple["LengthGraph", np.ndarray]:
        """Restrict to the given vertex indices; returns (graph, old->new map)."""
        keep = np.asarray(keep, dtype=np.int64)
        remap = -np.ones(self.n, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        mask = (remap[self.edges[:, 0]] >= 0) & (remap[self.edges[:, 1]] >= 0)
        edges = remap[self.edges[mask]]
        return LengthGraph(len(keep), edges, self.weights[mask]), remap


class SampledSpace:
    """Finite metric space sample with boundary tagging.

    Parameters
    ----------
    n : number of points (interior + boundary samples).
    matrix : optional explicit symmetric distance table.
    coords : optional point coordinates; used for Euclidean metric mode.
    graph : optional LengthGraph on the same index set.
    metric_mode : one of "matrix", "euclid", "graph".  "graph" means the
        distance table is the shortest-path metric of ``graph``.
    boundary : optional boolean mask (or index list) of boundary samples.
    d_omega : optional exact distance-to-boundary values per point
        (overrides the min-over-boundary-samples default).
    boundary_tail : optional per-boundary-point additive tail used when
        boundary samples stand for ideal points beyond a truncation window.
    horizon : optional mask/index list of window-truncation points.
    """

    def __init__(self, n, *, matrix=None, coords=None, graph=None,
                 metric_mode=None, boundary=None, d_omega=None,
                 boundary_tail=None, horizon=None, meta=None):
        self.n = int(n)
        self.coords = None if coords is None else np.asarray(coords, dtype=float)
        self.graph = graph
        self.meta = dict(meta or {})
        self._matrix = None
        self._row_cache: dict[int, np.ndarray] = {}

        if matrix is not None:
            matrix = np.asarray(matrix, dtype=float)
            if matrix.shape != (self.n, self.n):
                raise ValueError("distance table shape mismatch")
            self._matrix = matrix
            self.metric_mode = "matrix"
        elif metric_mode is not None:
            self.metric_mode = metric_mode
        elif graph is not None:
            self.metric_mode = "graph"
        elif self.coords is not None:
            self.metric_mode = "euclid"
        else:
            raise ValueError("need a distance table, coordinates, or a graph")

        if self.metric_mode == "euclid" and self.coords is None:
            raise ValueError("euclid metric mode requires coordinates")
        if self.metric_mode == "graph" and self.graph is None:
            raise ValueError("graph metric mode requires a graph")

        self.boundary_mask = _as_mask(boundary, self.n)
        self.horizon_mask = _as_mask(horizon, self.n)
        self._d_omega = None if d_omega is None else np.asarray(d_omega, dtype=float)
        if boundary_tail is None:
            self.boundary_tail = np.zeros(int(self.boundary_mask.sum()))
        else:
            self.boundary_tail = np.asarray(boundary_tail, dtype=float)

    # -- basic index sets ------------------------------------------------

    @property
    def boundary_idx(self) -> np.ndarray:
        return np.nonzero(self.boundary_mask)[0]

    @property
    def interior_idx(self) -> np.ndarray:
        return np.nonzero(~self.boundary_mask)[0]

    @property
    def horizon_idx(self) -> np.ndarray:
        return np.nonzero(self.horizon_mask)[0]

    @property
    def landmarks(self) -> dict:
        return self.meta.setdefault("landmarks", {})

    def is_incomplete(self) -> bool:
        return bool(self.boundary_mask.any())

    # -- distances --------------------------------------------------------

    @property
    def D(self) -> np.ndarray:
        """Full distance table (dense). Materialized lazily."""
        if self._matrix is None:
            if self.metric_mode == "euclid":
                diff = self.coords[:, None, :] - self.coords[None, :, :]
                self._matrix = np.sqrt((diff * diff).sum(axis=-1))
            elif self.metric_mode == "graph":
                if self.n > 3 * DENSE_LIMIT:
                    raise ValueError(
                        f"{self.n} points: full table too large, use dist_row")
                self._matrix = shortest_path(self.graph.adjacency(),
                                             method="D", directed=False)
                if np.isinf(self._matrix).any():
                    raise ValueError("not rectifiably connected")
            else:
                raise ValueError("no distance source available")
        return self._matrix

    def dist_row(self, i: int) -> np.ndarray:
        if self._matrix is not None:
            return self._matrix[i]
        if self.n <= DENSE_LIMIT:
            return self.D[i]
        if i not in self._row_cache:
            if self.metric_mode == "euclid":
                diff = self.coords - self.coords[i]
                self._row_cache[i] = np.sqrt((diff * diff).sum(axis=-1))
            else:
                row = shortest_path(self.graph.adjacency(), method="D",
                                    directed=False, indices=i)
                if np.isinf(row).any():
                    raise ValueError("not rectifiably connected")
                self._row_cache[i] = row
        return self._row_cache[i]

    def dist(self, i: int, j: int) -> float:
        return float(self.dist_row(int(i))[int(j)])

    # -- boundary distance --------------------------------------------------

    def d_omega_all(self) -> np.ndarray:
        """Distance to the metric boundary, per point (0 on boundary samples)."""
        if self._d_omega is not None:
            return self._d_omega
        if not self.is_incomplete():
            return np.full(self.n, np.inf)
        bidx = self.boundary_idx
        rows = np.stack([self.dist_row(int(b)) + self.boundary_tail[k]
                         for k, b in enumerate(bidx)])
        vals = rows.min(axis=0)
        vals[self.boundary_mask] = 0.0
        self._d_omega = vals
        return vals

    def d_omega(self, i: int) -> float:
        return float(self.d_omega_all()[int(i)])

    # -- geodesics ----------------------------------------------------------

    def geodesic(self, u: int, v: int, *, tol: float = 1e-9) -> Polyline:
        """Shortest-path polyline from u to v.

        Requires the graph carrier with the table equal to the graph metric.
        Ties are broken toward the lexicographically smallest vertex
        sequence (greedy smallest-index admissible neighbor).
        """
        if self.graph is None:
            raise ValueError("need length-graph carrier")
        u, v = int(u), int(v)
        if u == v:
            return [u]
        du = self.dist_row(u)
        dv = self.dist_row(v)
        total = du[v]
        scale = tol * (1.0 + total)
        nbrs = self.graph.neighbor_lists()
        path = [u]
        cur = u
        for _ in range(self.n + 1):
            if cur == v:
                return path
            idx, w = nbrs[cur]
            ok = np.abs(du[cur] + w + dv[idx] - total) <= scale + tol * total
            ok &= dv[idx] < dv[cur]
            cand = idx[ok]
            if len(cand) == 0:
                raise ValueError("geodesic reconstruction failed: table does "
                                 "not match the graph metric")
            cur = int(cand.min())
            path.append(cur)
        raise ValueError("geodesic reconstruction did not terminate")

    # -- restriction ----------------------------------------------------------

    def subspace(self, keep, *, meta=None) -> "SampledSpace":
        """Restrict to the given indices (matrix mode output)."""
        keep = np.asarray(keep, dtype=np.int64)
        sub = self.D[np.ix_(keep, keep)].copy()
        bmask = self.boundary_mask[keep]
        tail = None
        if bmask.any():
            pos = {int(b): k for k, b in enumerate(self.boundary_idx)}
            tail = np.array([self.boundary_tail[pos[int(i)]]
                             for i in keep[bmask]])
        dom = self._d_omega[keep] if self._d_omega is not None else None
        out = SampledSpace(
            len(keep), matrix=sub,
            coords=None if self.coords is None else self.coords[keep],
            boundary=bmask, d_omega=dom, boundary_tail=tail,
            horizon=self.horizon_mask[keep],
            meta=meta if meta is not None else dict(self.meta))
        remap = {int(old): new for new, old in enumerate(keep)}
        out.meta["landmarks"] = {k: remap[v] for k, v in self.landmarks.items()
                                 if int(v) in remap}
        return out


def _as_mask(spec, n: int) -> np.ndarray:
    if spec is None:
        return np.zeros(n, dtype=bool)
    spec = np.asarray(spec)
    if spec.dtype == bool:
        if spec.shape != (n,):
            raise ValueError("mask length mismatch")
        return spec.copy()
    mask = np.zeros(n, dtype=bool)
    mask[spec.astype(np.int64)] = True
    return mask


# -- operations ---------------------------------------------------------------


def shortest_path_metric(graph: LengthGraph) -> SampledSpace:
    """Path metric of a weighted graph as an explicit distance table."""
    if not graph.is_connected():
        raise ValueError("not rectifiably connected")
    D = shortest_path(graph.adjacency(), method="D", directed=False)
    space = SampledSpace(graph.n, matrix=D, graph=graph)
    space.meta["table_is_graph_metric"] = True
    return space


def complete_graph_of(space: SampledSpace) -> LengthGraph:
    """Complete graph weighted by the space's own distance table."""
    n = space.n
    iu, ju = np.triu_indices(n, k=1)
    return LengthGraph(n, np.stack([iu, ju], axis=1), space.D[iu, ju])


def curve_length(space: SampledSpace, polyline) -> float:
    """Length of a vertex polyline: sum of consecutive pair distances."""
    pts = [int(p) for p in polyline]
    for p in pts:
        if p < 0 or p >= space.n:
            raise ValueError(f"unknown point id {p}")
    if len(pts) < 2:
        return 0.0
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if a == b:
            raise ValueError("consecutive polyline points must be distinct")
        total += space.dist(a, b)
    return total


def polyline_prefix_lengths(space: SampledSpace, polyline) -> np.ndarray:
    pts = [int(p) for p in polyline]
    out = np.zeros(len(pts))
    for k in range(1, len(pts)):
        out[k] = out[k - 1] + space.dist(pts[k - 1], pts[k])
    return out


def uniformity_constant(space: SampledSpace, polyline) -> float:
    """Least A >= 1 so the polyline is an A-uniform curve.

    Checks both the quasiconvexity ratio length/d(endpoints) and, at every
    interior vertex, the ratio of the shorter partial length to the
    distance-to-boundary there.  Complete spaces (no boundary) only see the
    first ratio.
    """
    pts = [int(p) for p in polyline]
    if len(pts) < 2:
        raise ValueError("degenerate curve")
    ends = space.dist(pts[0], pts[-1])
    if ends <= 0:
        raise ValueError("degenerate curve")
    prefix = polyline_prefix_lengths(space, pts)
    total = prefix[-1]
    best = total / ends
    if space.is_incomplete():
        dom = space.d_omega_all()
        for k in range(1, len(pts) - 1):
            reach = min(prefix[k], total - prefix[k])
            d = dom[pts[k]]
            if d <= 0:
                return math.inf
            best = max(best, reach / d)
    return max(1.0, best)


def space_diameter(space: SampledSpace) -> tuple[float, bool]:
    """(max sampled pairwise distance, window-truncated flag)."""
    if space.n <= 1:
        return 0.0, bool(space.horizon_mask.any())
    if space.n <= DENSE_LIMIT:
        val = float(space.D.max())
    else:
        val = max(float(space.dist_row(int(i)).max())
                  for i in range(space.n))
    return val, bool(space.horizon_mask.any())


def check_metric_axioms(space: SampledSpace, *, rel_tol: float = TRI_TOL_REL,
                        abs_tol: float = TRI_TOL_ABS) -> dict:
    """Symmetry/diagonal/triangle check over all triples.  Returns worst slacks."""
    D = space.D
    sym = float(np.abs(D - D.T).max()) if space.n else 0.0
    diag = float(np.abs(np.diag(D)).max()) if space.n else 0.0
    worst = 0.0
    for k in range(space.n):
        via = D[:, k][:, None] + D[k, :][None, :]
        slack = D - via
        m = float(slack.max())
        if m > worst:
            worst = m
    scale = float(D.max()) if space.n else 0.0
    tol = max(abs_tol, rel_tol * scale)
    return {
        "symmetry_gap": sym,
        "diagonal_gap": diag,
        "triangle_gap": worst,
        "tolerance": tol,
        "ok": sym <= tol and diag <= tol and worst <= tol,
    }


def boundary_lipschitz_gap(space: SampledSpace) -> float:
    """max over pairs of |d_omega(x) - d_omega(y)| - d(x,y) (should be <= 0)."""
    dom = space.d_omega_all()
    idx = space.interior_idx
    worst = -math.inf
    for i in idx:
        row = space.dist_row(int(i))[idx]
        gap = np.abs(dom[idx] - dom[int(i)]) - row
        gap[idx == int(i)] = -math.inf
        worst = max(worst, float(gap.max()))
    return worst


def sample_distinct_tuples(n: int, k: int, count: int, seed) -> np.ndarray:
    """Seeded sample of ``count`` k-tuples of distinct indices from range(n)."""
    rng = np.random.default_rng(seed)
    if n < k:
        raise ValueError(f"need at least {k} points")
    out = np.empty((count, k), dtype=np.int64)
    filled = 0
    while filled < count:
        block = rng.integers(0, n, size=(2 * (count - filled) + 8, k))
        ok = np.ones(len(block), dtype=bool)
        for a in range(k):
            for b in range(a + 1, k):
                ok &= block[:, a] != block[:, b]
        block = block[ok][: count - filled]
        out[filled:filled + len(block)] = block
        filled += len(block)
    return out
