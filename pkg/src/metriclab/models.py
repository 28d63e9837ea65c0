"""Model space generators.

Every builder returns a :class:`SampledSpace` whose meta records the kind,
window, resolution and seed, so downstream reports can state how a space
was sampled.  Incomplete models carry explicit boundary samples and an
exact distance-to-boundary oracle where an analytic formula exists.
Unbounded models are truncated to a window; the truncation points are
flagged in ``horizon_mask`` (they are ordinary points of the space, not
boundary samples).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import LengthGraph, SampledSpace, shortest_path_metric

MODEL_KINDS = (
    "line", "half_line", "glued_interval_Xt", "glued_domain_Ors",
    "euclidean_disk", "euclidean_half_plane", "square", "random_tree",
    "hyperbolic_grid",
)


@dataclass
class ModelSpec:
    kind: str
    params: dict = field(default_factory=dict)
    window: float | None = None
    resolution: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.resolution is not None and self.resolution < 3:
            raise ValueError("resolution must be >= 3")
        for key, val in self.params.items():
            if isinstance(val, (int, float)) and key != "seed" and val <= 0:
                raise ValueError(f"parameter {key} must be positive")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params),
                "window": self.window, "resolution": self.resolution,
                "seed": self.seed}

    @staticmethod
    def from_dict(d: dict) -> "ModelSpec":
        return ModelSpec(kind=d["kind"], params=dict(d.get("params") or {}),
                         window=d.get("window"), resolution=d.get("resolution"),
                         seed=d.get("seed"))


def build_model_space(spec: ModelSpec) -> SampledSpace:
    builder = {
        "line": _line,
        "half_line": _half_line,
        "glued_interval_Xt": _glued_interval,
        "glued_domain_Ors": _glued_domain,
        "euclidean_disk": _disk,
        "euclidean_half_plane": _half_plane,
        "square": _square,
        "random_tree": _random_tree,
        "hyperbolic_grid": _hyperbolic_grid,
    }[spec.kind]
    space = builder(spec)
    space.meta.setdefault("model", spec.to_dict())
    return space


# -- 1-D pieces ----------------------------------------------------------------


def interval_space(lo: float, hi: float, n: int, *, boundary_lo=False,
                   boundary_hi=False, spacing="uniform", x_min=None,
                   horizon_hi=False, horizon_lo=False) -> SampledSpace:
    """Sampled subinterval of the real line.

    ``boundary_lo/hi`` include the endpoint as a boundary sample (the
    interior samples then stay strictly inside).  Geometric spacing is for
    intervals with the boundary at ``lo = 0``: samples run from ``x_min``
    up to ``hi`` in a geometric progression, resolving the small scales
    where 1/distance densities blow up.
    """
    if hi <= lo:
        raise ValueError("need hi > lo")
    if spacing == "uniform":
        xs = np.linspace(lo, hi, n + boundary_lo + boundary_hi)
        if boundary_lo:
            xs = xs[1:]
        if boundary_hi:
            xs = xs[:-1]
    elif spacing == "geometric":
        if not boundary_lo or lo != 0:
            raise ValueError("geometric spacing expects the boundary at lo = 0")
        xs = np.geomspace(x_min if x_min else hi * 1e-4, hi, n)
    else:
        raise ValueError("spacing must be 'uniform' or 'geometric'")
    pts = list(xs)
    bnd = []
    if boundary_lo:
        bnd.append(lo)
    if boundary_hi:
        bnd.append(hi)
    allx = np.array(pts + bnd)
    n_tot = len(allx)
    D = np.abs(allx[:, None] - allx[None, :])
    boundary = np.zeros(n_tot, dtype=bool)
    boundary[len(pts):] = True
    d_omega = None
    if boundary_lo or boundary_hi:
        cands = []
        if boundary_lo:
            cands.append(allx - lo)
        if boundary_hi:
            cands.append(hi - allx)
        d_omega = np.minimum.reduce(cands)
        d_omega[boundary] = 0.0
    horizon = np.zeros(n_tot, dtype=bool)
    if horizon_hi:
        horizon[np.argmax(allx[:len(pts)])] = True
    if horizon_lo:
        horizon[np.argmin(allx[:len(pts)])] = True
    order = np.argsort(allx, kind="stable")
    graph = LengthGraph(
        n_tot, np.stack([order[:-1], order[1:]], axis=1), np.diff(allx[order]))
    space = SampledSpace(n_tot, matrix=D, coords=allx[:, None], graph=graph,
                         boundary=boundary, d_omega=d_omega, horizon=horizon)
    space.meta["table_is_graph_metric"] = True
    return space


def _line(spec: ModelSpec) -> SampledSpace:
    W = float(spec.window or 50.0)
    n = int(spec.resolution or 1001)
    if n % 2 == 0:
        n += 1  # keep the origin on the grid
    space = interval_space(-W, W, n, horizon_lo=True, horizon_hi=True)
    space.landmarks["origin"] = n // 2
    return space


def _half_line(spec: ModelSpec) -> SampledSpace:
    W = float(spec.window or 50.0)
    n = int(spec.resolution or 501)
    space = interval_space(0.0, W, n, horizon_hi=True)
    space.landmarks["origin"] = 0
    return space


def _glued_interval(spec: ModelSpec) -> SampledSpace:
    """Real line with an interval of length t glued at the origin (a tripod
    whose third arm has finite length t)."""
    t = float(spec.params.get("t", 1.0))
    if t <= 0:
        raise ValueError("arm length t must be positive")
    W = float(spec.window or 30.0)
    n = int(spec.resolution or 601)
    if n % 2 == 0:
        n += 1
    xs = np.linspace(-W, W, n)
    h = xs[1] - xs[0]
    m = max(3, int(np.ceil(t / h)))
    ys = np.linspace(0.0, t, m + 1)[1:]
    return _build_tripod_like(xs, ys, horizon_ends=True,
                              landmark_names=("origin", "tip"))


def tripod_space(arms=(10.0, 10.0, 10.0), step=0.25) -> SampledSpace:
    """Three segments glued at a common core point (helper, not a ModelSpec kind)."""
    a, b, c = arms
    xs = np.concatenate([-np.linspace(a, step, int(np.ceil(a / step))),
                         [0.0],
                         np.linspace(step, b, int(np.ceil(b / step)))])
    ys = np.linspace(0.0, c, max(3, int(np.ceil(c / step))) + 1)[1:]
    return _build_tripod_like(xs, ys, horizon_ends=True,
                              landmark_names=("origin", "tip"))


def _build_tripod_like(xs, ys, *, horizon_ends, landmark_names) -> SampledSpace:
    """Line samples xs (must contain 0) plus an arm at arclengths ys > 0."""
    n_line, n_arm = len(xs), len(ys)
    n = n_line + n_arm
    j0 = int(np.argmin(np.abs(xs)))
    if abs(xs[j0]) > 1e-12:
        raise ValueError("line samples must contain the gluing point 0")
    D = np.zeros((n, n))
    ax = np.abs(xs)
    D[:n_line, :n_line] = np.abs(xs[:, None] - xs[None, :])
    D[:n_line, n_line:] = ax[:, None] + ys[None, :]
    D[n_line:, :n_line] = D[:n_line, n_line:].T
    D[n_line:, n_line:] = np.abs(ys[:, None] - ys[None, :])
    edges, weights = [], []
    order = np.argsort(xs)
    for a, b in zip(order[:-1], order[1:]):
        edges.append((a, b)); weights.append(xs[b] - xs[a])
    edges.append((j0, n_line)); weights.append(ys[0])
    for k in range(n_arm - 1):
        edges.append((n_line + k, n_line + k + 1))
        weights.append(ys[k + 1] - ys[k])
    graph = LengthGraph(n, edges, weights)
    horizon = np.zeros(n, dtype=bool)
    if horizon_ends:
        horizon[int(np.argmin(xs))] = True
        horizon[int(np.argmax(xs))] = True
    coords = np.stack([np.concatenate([xs, np.zeros(n_arm)]),
                       np.concatenate([np.zeros(n_line), ys])], axis=1)
    space = SampledSpace(n, matrix=D, coords=coords, graph=graph,
                         horizon=horizon)
    space.meta["table_is_graph_metric"] = True
    name_origin, name_tip = landmark_names
    space.landmarks[name_origin] = j0
    space.landmarks[name_tip] = n - 1
    space.landmarks["end_pos"] = int(np.argmax(xs))
    space.landmarks["end_neg"] = int(np.argmin(xs))
    return space


def _glued_domain(spec: ModelSpec) -> SampledSpace:
    """Open interval (-r, r) with a closed arm [0, s] glued at 0.

    The metric boundary consists of the two endpoints -r and r; the arm tip
    is an interior point at distance r + s from the boundary.
    """
    r = float(spec.params.get("r", 1.0))
    s = float(spec.params.get("s", 3.0))
    n = int(spec.resolution or 200)
    if n % 2 == 1:
        n += 1
    xs = np.linspace(-r, r, n + 1)[1:-1]
    h = 2 * r / n
    m = max(3, int(np.ceil(s / h)))
    ys = np.linspace(0.0, s, m + 1)[1:]
    n_line, n_arm = len(xs), len(ys)
    ni = n_line + n_arm
    ntot = ni + 2  # two boundary samples
    ax = np.abs(xs)
    D = np.zeros((ntot, ntot))
    D[:n_line, :n_line] = np.abs(xs[:, None] - xs[None, :])
    D[:n_line, n_line:ni] = ax[:, None] + ys[None, :]
    D[n_line:ni, :n_line] = D[:n_line, n_line:ni].T
    D[n_line:ni, n_line:ni] = np.abs(ys[:, None] - ys[None, :])
    # boundary points: index ni = -r, index ni+1 = +r
    D[ni, :n_line] = xs + r
    D[ni, n_line:ni] = r + ys
    D[ni + 1, :n_line] = r - xs
    D[ni + 1, n_line:ni] = r + ys
    D[ni, ni + 1] = 2 * r
    D[:, ni] = D[ni, :]
    D[:, ni + 1] = D[ni + 1, :]
    d_omega = np.concatenate([r - ax, r + ys, [0.0, 0.0]])
    j0 = int(np.argmin(ax))
    edges, weights = [], []
    for a in range(n_line - 1):
        edges.append((a, a + 1)); weights.append(xs[a + 1] - xs[a])
    edges.append((j0, n_line)); weights.append(ys[0])
    for k in range(n_arm - 1):
        edges.append((n_line + k, n_line + k + 1))
        weights.append(ys[k + 1] - ys[k])
    edges.append((ni, 0)); weights.append(xs[0] + r)
    edges.append((ni + 1, n_line - 1)); weights.append(r - xs[-1])
    graph = LengthGraph(ntot, edges, weights)
    boundary = np.zeros(ntot, dtype=bool)
    boundary[ni:] = True
    coords = np.zeros((ntot, 2))
    coords[:n_line, 0] = xs
    coords[n_line:ni, 1] = ys
    coords[ni, 0] = -r
    coords[ni + 1, 0] = r
    space = SampledSpace(ntot, matrix=D, coords=coords, graph=graph,
                         boundary=boundary, d_omega=d_omega)
    space.meta["table_is_graph_metric"] = True
    space.landmarks["junction"] = j0
    space.landmarks["tip"] = ni - 1
    return space


# -- planar models ---------------------------------------------------------------


def _disk(spec: ModelSpec) -> SampledSpace:
    """Unit disk on a polar grid with geometrically refined rings near the rim."""
    K = int(spec.resolution or 24)
    m = max(12, 2 * K)
    gap_min = float(spec.params.get("rim_gap", 0.01))
    g = gap_min ** (1.0 / K)
    radii = 1.0 - g ** np.arange(1, K + 1)
    thetas = 2 * np.pi * np.arange(m) / m
    pts = [(0.0, 0.0)]
    for rk in radii:
        pts.extend((rk * np.cos(t), rk * np.sin(t)) for t in thetas)
    n_int = len(pts)
    pts.extend((np.cos(t), np.sin(t)) for t in thetas)
    coords = np.array(pts)
    n = len(coords)
    boundary = np.zeros(n, dtype=bool)
    boundary[n_int:] = True
    rad = np.sqrt((coords ** 2).sum(axis=1))
    d_omega = 1.0 - rad
    d_omega[boundary] = 0.0

    def ring(k, j):  # interior rings k = 0..K-1, boundary circle as k = K
        base = 1 + k * m if k < K else n_int
        return base + (j % m)

    edges = []
    for j in range(m):
        edges.append((0, ring(0, j)))
    for k in range(K):
        for j in range(m):
            edges.append((ring(k, j), ring(k, j + 1)))  # angular
            edges.append((ring(k, j), ring(k + 1, j)))  # radial (into boundary at k=K-1)
            edges.append((ring(k, j), ring(k + 1, j + 1)))  # diagonal
            edges.append((ring(k + 1, j), ring(k, j + 1)))
    edges = [(a, b) for a, b in edges if a != b]
    ea = np.array(edges, dtype=np.int64)
    # dedupe
    key = np.minimum(ea[:, 0], ea[:, 1]) * n + np.maximum(ea[:, 0], ea[:, 1])
    _, uniq = np.unique(key, return_index=True)
    ea = ea[uniq]
    w = np.sqrt(((coords[ea[:, 0]] - coords[ea[:, 1]]) ** 2).sum(axis=1))
    graph = LengthGraph(n, ea, w)
    space = SampledSpace(n, coords=coords, graph=graph, metric_mode="euclid",
                         boundary=boundary, d_omega=d_omega)
    space.landmarks["center"] = 0
    return space


def _half_plane(spec: ModelSpec) -> SampledSpace:
    """Euclidean upper half-plane window, geometric y-levels, boundary on y=0."""
    W = float(spec.window or 1.0)
    n_y = int(spec.resolution or 120)
    y_min = float(spec.params.get("y_min", 0.01))
    y_max = float(spec.params.get("y_max", 2.0))
    n_x = int(spec.params.get("n_x", 21))
    if n_x % 2 == 0:
        n_x += 1
    xs = np.linspace(-W, W, n_x)
    ys = np.geomspace(y_min, y_max, n_y)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    coords = np.stack([gx.ravel(), gy.ravel()], axis=1)
    n_int = len(coords)
    bcoords = np.stack([xs, np.zeros(n_x)], axis=1)
    coords = np.concatenate([coords, bcoords])
    n = len(coords)
    boundary = np.zeros(n, dtype=bool)
    boundary[n_int:] = True
    d_omega = coords[:, 1].copy()

    def node(i, j):
        return i * n_y + j

    edges = []
    for i in range(n_x):
        for j in range(n_y):
            if j + 1 < n_y:
                edges.append((node(i, j), node(i, j + 1)))
            if i + 1 < n_x:
                edges.append((node(i, j), node(i + 1, j)))
                if j + 1 < n_y:
                    edges.append((node(i, j), node(i + 1, j + 1)))
                    edges.append((node(i + 1, j), node(i, j + 1)))
        edges.append((node(i, 0), n_int + i))  # link down to the boundary sample
    ea = np.array(edges, dtype=np.int64)
    w = np.sqrt(((coords[ea[:, 0]] - coords[ea[:, 1]]) ** 2).sum(axis=1))
    graph = LengthGraph(n, ea, w)
    horizon = np.zeros(n, dtype=bool)
    horizon[[node(i, n_y - 1) for i in range(n_x)]] = True
    space = SampledSpace(n, coords=coords, graph=graph, metric_mode="euclid",
                         boundary=boundary, d_omega=d_omega, horizon=horizon)
    space.meta["grid"] = {"n_x": n_x, "n_y": n_y, "y_min": y_min, "y_max": y_max}
    return space


def _square(spec: ModelSpec) -> SampledSpace:
    """Open unit square with boundary samples along the four sides."""
    n = int(spec.resolution or 16)
    h = 1.0 / n
    xs = np.linspace(h, 1 - h, n - 1)
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    coords = np.stack([gx.ravel(), gy.ravel()], axis=1)
    n_int = len(coords)
    side = np.linspace(0.0, 1.0, n + 1)
    bpts = ([(x, 0.0) for x in side] + [(x, 1.0) for x in side]
            + [(0.0, y) for y in side[1:-1]] + [(1.0, y) for y in side[1:-1]])
    coords = np.concatenate([coords, np.array(bpts)])
    ntot = len(coords)
    boundary = np.zeros(ntot, dtype=bool)
    boundary[n_int:] = True
    x, y = coords[:, 0], coords[:, 1]
    d_omega = np.minimum.reduce([x, 1 - x, y, 1 - y])
    d_omega[boundary] = 0.0

    def node(i, j):
        return i * (n - 1) + j

    edges = []
    for i in range(n - 1):
        for j in range(n - 1):
            if j + 1 < n - 1:
                edges.append((node(i, j), node(i, j + 1)))
            if i + 1 < n - 1:
                edges.append((node(i, j), node(i + 1, j)))
                if j + 1 < n - 1:
                    edges.append((node(i, j), node(i + 1, j + 1)))
                    edges.append((node(i + 1, j), node(i, j + 1)))
    # attach each interior rim point to its nearest boundary sample
    for idx in range(n_int):
        diffs = coords[n_int:] - coords[idx]
        jb = int(np.argmin((diffs ** 2).sum(axis=1)))
        if d_omega[idx] <= 1.5 * h:
            edges.append((idx, n_int + jb))
    ea = np.array(edges, dtype=np.int64)
    w = np.sqrt(((coords[ea[:, 0]] - coords[ea[:, 1]]) ** 2).sum(axis=1))
    graph = LengthGraph(ntot, ea, w)
    space = SampledSpace(ntot, coords=coords, graph=graph, metric_mode="euclid",
                         boundary=boundary, d_omega=d_omega)
    space.landmarks["center"] = node((n - 1) // 2, (n - 1) // 2)
    return space


# -- trees and hyperbolic grid -----------------------------------------------------


def _random_tree(spec: ModelSpec) -> SampledSpace:
    n = int(spec.params.get("n", spec.resolution or 30))
    seed = spec.seed if spec.seed is not None else spec.params.get("seed", 0)
    space = random_tree_space(n, seed)
    return space


def random_tree_space(n: int, seed) -> SampledSpace:
    """Random tree: vertex i attaches to a uniform earlier vertex, weights U(0.5, 1.5)."""
    rng = np.random.default_rng(seed)
    edges = [(int(rng.integers(0, i)), i) for i in range(1, n)]
    weights = rng.uniform(0.5, 1.5, size=n - 1)
    graph = LengthGraph(n, edges, weights)
    space = shortest_path_metric(graph)
    deg = np.zeros(n, dtype=int)
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    space.horizon_mask = deg == 1
    space.landmarks["root"] = 0
    space.meta["tree_edges"] = [(int(a), int(b), float(w))
                                for (a, b), w in zip(edges, weights)]
    return space


def subdivide_tree(space: SampledSpace, factor: int = 2) -> SampledSpace:
    """Insert factor-1 equally spaced points on every tree edge."""
    edges = space.meta.get("tree_edges")
    if edges is None:
        raise ValueError("not a tree space")
    n = space.n
    new_edges = []
    pts = n
    for a, b, w in edges:
        prev = a
        for k in range(1, factor):
            new_edges.append((prev, pts, w / factor))
            prev = pts
            pts += 1
        new_edges.append((prev, b, w / factor))
    graph = LengthGraph(pts, [(a, b) for a, b, _ in new_edges],
                        [w for _, _, w in new_edges])
    out = shortest_path_metric(graph)
    deg = np.zeros(pts, dtype=int)
    for a, b, _ in new_edges:
        deg[a] += 1
        deg[b] += 1
    out.horizon_mask = deg == 1
    out.landmarks.update(space.landmarks)
    out.meta["tree_edges"] = new_edges
    out.meta["parent_points"] = n
    return out


def _hyperbolic_grid(spec: ModelSpec) -> SampledSpace:
    """Upper half-plane with the hyperbolic metric, sampled on an (x, log y) grid.

    Edge weights are exact hyperbolic distances; the table is the graph
    metric, so the sample is a length space in its own right.
    """
    W = float(spec.window or 3.0)
    n_s = int(spec.resolution or 36)
    n_x = int(spec.params.get("n_x", n_s))
    xs = np.linspace(-W, W, n_x)
    ss = np.linspace(-W, W, n_s)
    gx, gs = np.meshgrid(xs, ss, indexing="ij")
    coords = np.stack([gx.ravel(), np.exp(gs.ravel())], axis=1)
    n = len(coords)

    def node(i, j):
        return i * n_s + j

    edges = []
    for i in range(n_x):
        for j in range(n_s):
            if j + 1 < n_s:
                edges.append((node(i, j), node(i, j + 1)))
            if i + 1 < n_x:
                edges.append((node(i, j), node(i + 1, j)))
                if j + 1 < n_s:
                    edges.append((node(i, j), node(i + 1, j + 1)))
                    edges.append((node(i + 1, j), node(i, j + 1)))
    ea = np.array(edges, dtype=np.int64)
    p, q = coords[ea[:, 0]], coords[ea[:, 1]]
    sq = ((p - q) ** 2).sum(axis=1)
    w = np.arccosh(1.0 + sq / (2.0 * p[:, 1] * q[:, 1]))
    graph = LengthGraph(n, ea, w)
    horizon = np.zeros(n, dtype=bool)
    for i in range(n_x):
        horizon[node(i, 0)] = True
        horizon[node(i, n_s - 1)] = True
    for j in range(n_s):
        horizon[node(0, j)] = True
        horizon[node(n_x - 1, j)] = True
    space = SampledSpace(n, graph=graph, coords=coords, metric_mode="graph",
                         horizon=horizon)
    space.meta["table_is_graph_metric"] = True
    space.meta["grid"] = {"n_x": n_x, "n_s": n_s}
    space.landmarks["center"] = node(n_x // 2, n_s // 2)
    space.landmarks["top_center"] = node(n_x // 2, n_s - 1)
    space.landmarks["bottom_center"] = node(n_x // 2, 0)
    return space


def cycle_space(k: int, weight: float = 1.0) -> SampledSpace:
    """k-cycle with equal edge weights (helper for exact hyperbolicity values)."""
    edges = [(i, (i + 1) % k) for i in range(k)]
    return shortest_path_metric(LengthGraph(k, edges, [weight] * k))
