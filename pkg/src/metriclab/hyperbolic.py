"""Hyperbolicity and boundary structure.

Four-point hyperbolicity estimation, Gromov products based at points or at
basepoint functions (distance functions and truncated Busemann functions),
tripod/equiradial analysis of geodesic triangles, rough starlikeness,
boundary spread, and visual quasimetrics on sets of boundary directions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (SampledSpace, curve_length, polyline_prefix_lengths,
                   sample_distinct_tuples)

QUADRUPLE_BUDGET = 2_000_000
QUADRUPLE_SAMPLES = 1_000_000


def _comb4(n: int) -> int:
    return n * (n - 1) * (n - 2) * (n - 3) // 24


def four_point_delta(space: SampledSpace, *, budget: int = QUADRUPLE_BUDGET,
                     n_samples: int = QUADRUPLE_SAMPLES, seed: int = 0,
                     subset=None, return_details: bool = False):
    """Four-point hyperbolicity estimate.

    For each quadruple the three pairwise-sum pairings are sorted as
    L1 >= L2 >= L3 and the deviation is (L1 - L2)/2; the estimate is the
    max over quadruples.  Exhaustive when the number of quadruples fits in
    ``budget``, otherwise a seeded uniform sample of ``n_samples``.

    This is the four-point notion, not the thin-triangle notion; the two
    differ by a bounded factor and reports should state which is measured.
    """
    idx = np.asarray(subset if subset is not None else np.arange(space.n),
                     dtype=np.int64)
    n = len(idx)
    if n < 4:
        raise ValueError("need at least 4 points")
    D = space.D
    exhaustive = _comb4(n) <= budget
    if exhaustive:
        import itertools
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.combinations(range(n), 4)),
            dtype=np.int64, count=4 * _comb4(n))
        quads = flat.reshape(-1, 4)
    else:
        quads = sample_distinct_tuples(n, 4, n_samples, seed)
    best = 0.0
    witness = None
    for lo in range(0, len(quads), 250_000):
        q = idx[quads[lo:lo + 250_000]]
        x, y, z, w = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
        s1 = D[x, y] + D[z, w]
        s2 = D[x, z] + D[y, w]
        s3 = D[x, w] + D[y, z]
        stack = np.sort(np.stack([s1, s2, s3]), axis=0)
        dev = 0.5 * (stack[2] - stack[1])
        k = int(np.argmax(dev))
        if dev[k] >= best:
            best = float(dev[k])
            witness = tuple(int(v) for v in q[k])
    if return_details:
        return best, {"method": "exhaustive" if exhaustive else "sampled",
                      "sample_size": len(quads), "seed": seed,
                      "witness": witness}
    return best


def gromov_product_point(space: SampledSpace, x: int, y: int, z: int) -> float:
    """(x|y)_z = (d(x,z) + d(y,z) - d(x,y)) / 2."""
    return 0.5 * (space.dist(x, z) + space.dist(y, z) - space.dist(x, y))


# -- basepoint functions -------------------------------------------------------


@dataclass
class BasepointFunction:
    """Element of the distance-function / Busemann-function family.

    kind "distance": b(x) = d(x, z) + shift, based at the point z.
    kind "busemann": b(x) = d(gamma(T), x) - T + shift for a geodesic ray
    gamma given as a polyline, truncated at arclength T.  The basepoint tag
    ``omega`` names the direction the ray points to.
    """
    kind: str
    z: int | None = None
    ray: list | None = None
    truncation: float | None = None
    shift: float = 0.0
    omega: object = None

    def __post_init__(self):
        if self.kind not in ("distance", "busemann"):
            raise ValueError("kind must be 'distance' or 'busemann'")
        if self.kind == "distance" and self.z is None:
            raise ValueError("distance kind needs a basepoint z")
        if self.kind == "busemann" and not self.ray:
            raise ValueError("busemann kind needs a ray polyline")

    def _ray_point(self, space: SampledSpace, T: float) -> int:
        prefix = polyline_prefix_lengths(space, self.ray)
        if prefix[-1] + 1e-12 < T:
            raise ValueError("truncation insufficient")
        k = int(np.argmin(np.abs(prefix - T)))
        return int(self.ray[k]), float(prefix[k])

    def values(self, space: SampledSpace, idx=None) -> np.ndarray:
        idx = np.asarray(idx if idx is not None else np.arange(space.n),
                         dtype=np.int64)
        if self.kind == "distance":
            return space.dist_row(int(self.z))[idx] + self.shift
        T = self.truncation
        if T is None:
            T = polyline_prefix_lengths(space, self.ray)[-1]
        far, t_far = self._ray_point(space, T)
        return space.dist_row(far)[idx] - t_far + self.shift

    def __call__(self, space: SampledSpace, x: int) -> float:
        return float(self.values(space, [int(x)])[0])

    def stability_gap(self, space: SampledSpace, x: int) -> float:
        """|b_T(x) - b_{T/2}(x)| for the busemann kind (0 for distance kind)."""
        if self.kind == "distance":
            return 0.0
        T = self.truncation
        if T is None:
            T = polyline_prefix_lengths(space, self.ray)[-1]
        half = BasepointFunction("busemann", ray=self.ray, truncation=T / 2,
                                 shift=self.shift, omega=self.omega)
        return abs(self(space, x) - half(space, x))


def distance_basepoint(space: SampledSpace, z: int, shift: float = 0.0,
                       ) -> BasepointFunction:
    return BasepointFunction("distance", z=int(z), shift=shift, omega=int(z))


def busemann_basepoint(space: SampledSpace, ray, *, truncation=None,
                       normalize_at: int | None = None,
                       omega=None) -> BasepointFunction:
    """Busemann approximation along a geodesic ray, optionally normalized
    so that b(normalize_at) = 0."""
    b = BasepointFunction("busemann", ray=[int(p) for p in ray],
                          truncation=truncation, omega=omega)
    if normalize_at is not None:
        b.shift = -b(space, int(normalize_at))
    return b


def evaluate_basepoint_function(space: SampledSpace, b: BasepointFunction,
                                x: int) -> float:
    return b(space, x)


def gromov_product_base(space: SampledSpace, b: BasepointFunction,
                        x: int, y: int) -> float:
    """(x|y)_b = (b(x) + b(y) - d(x,y)) / 2."""
    return 0.5 * (b(space, x) + b(space, y) - space.dist(x, y))


def gromov_products_base(space: SampledSpace, b: BasepointFunction,
                         pairs: np.ndarray) -> np.ndarray:
    vals = b.values(space)
    pairs = np.asarray(pairs, dtype=np.int64)
    d = np.array([space.dist(int(i), int(j)) for i, j in pairs])
    return 0.5 * (vals[pairs[:, 0]] + vals[pairs[:, 1]] - d)


def basepoint_lipschitz_gap(space: SampledSpace, b: BasepointFunction,
                            idx=None) -> float:
    """max over pairs of |b(x)-b(y)| - d(x,y); <= 0 for a 1-Lipschitz b."""
    idx = np.asarray(idx if idx is not None else np.arange(space.n),
                     dtype=np.int64)
    vals = b.values(space, idx)
    worst = -math.inf
    for k, i in enumerate(idx):
        row = space.dist_row(int(i))[idx]
        gap = np.abs(vals - vals[k]) - row
        gap[k] = -math.inf
        worst = max(worst, float(gap.max()))
    return worst


# -- tripod analysis ---------------------------------------------------------------


@dataclass
class TripodReport:
    equiradial: tuple            # (on yz, on xz, on xy) point ids
    insize: float                # max pairwise distance of equiradial points
    thinness: float              # max over triangle vertices of dist to other sides
    snap_error: float            # worst arclength snapping error
    degenerate: bool = False


def _point_at_arclength(space, polyline, prefix, target):
    k = int(np.argmin(np.abs(prefix - target)))
    return int(polyline[k]), abs(float(prefix[k]) - target)


def tripod_analysis(space: SampledSpace, x: int, y: int, z: int) -> TripodReport:
    """Equiradial points of the geodesic triangle xyz.

    On the side xy the equiradial point sits at arclength (y|z)_x from x;
    likewise on xz, and on yz at arclength (x|z)_y from y.  In a tree all
    three coincide with the median.  Placement snaps to the nearest
    polyline vertex and the snapping error is reported.
    """
    x, y, z = int(x), int(y), int(z)
    if len({x, y, z}) < 3:
        raise ValueError("need three distinct points")
    g_xy = space.geodesic(x, y)
    g_xz = space.geodesic(x, z)
    g_yz = space.geodesic(y, z)
    p_yz = gromov_product_point(space, y, z, x)   # (y|z)_x
    p_xz = gromov_product_point(space, x, z, y)   # (x|z)_y
    degenerate = min(p_yz, p_xz,
                     gromov_product_point(space, x, y, z)) <= 1e-12
    pre_xy = polyline_prefix_lengths(space, g_xy)
    pre_xz = polyline_prefix_lengths(space, g_xz)
    pre_yz = polyline_prefix_lengths(space, g_yz)
    hat_z, e1 = _point_at_arclength(space, g_xy, pre_xy, p_yz)
    hat_y, e2 = _point_at_arclength(space, g_xz, pre_xz, p_yz)
    hat_x, e3 = _point_at_arclength(space, g_yz, pre_yz, p_xz)
    insize = max(space.dist(hat_x, hat_y), space.dist(hat_x, hat_z),
                 space.dist(hat_y, hat_z))
    sides = [g_xy, g_xz, g_yz]
    thinness = 0.0
    for k, side in enumerate(sides):
        others = [pid for j, other in enumerate(sides) if j != k
                  for pid in other]
        others = np.asarray(sorted(set(others)), dtype=np.int64)
        for p in side:
            row = space.dist_row(int(p))[others]
            thinness = max(thinness, float(row.min()))
    return TripodReport(equiradial=(hat_x, hat_y, hat_z), insize=float(insize),
                        thinness=float(thinness),
                        snap_error=float(max(e1, e2, e3)),
                        degenerate=bool(degenerate))


# -- boundary directions -------------------------------------------------------------


@dataclass
class BoundaryDirection:
    """Direction at infinity, represented by a long geodesic ray polyline."""
    ray: list
    name: object = None

    def far_point(self) -> int:
        return int(self.ray[-1])

    def start(self) -> int:
        return int(self.ray[0])


def direction_from(space: SampledSpace, start: int, far: int,
                   name=None) -> BoundaryDirection:
    ray = space.geodesic(int(start), int(far))
    if len(ray) < 2:
        raise ValueError("ray must have increasing prefix lengths")
    return BoundaryDirection(ray=ray, name=name)


def horizon_directions(space: SampledSpace, start: int) -> list[BoundaryDirection]:
    """One direction per window-truncation point, as rays from ``start``."""
    return [direction_from(space, start, int(h), name=int(h))
            for h in space.horizon_idx]


def _dist_point_to_polyline(space, x, polyline) -> float:
    pts = np.asarray(sorted(set(int(p) for p in polyline)), dtype=np.int64)
    return float(space.dist_row(int(x))[pts].min())


def starlikeness_constant(space: SampledSpace, basepoint,
                          rays: list[BoundaryDirection], *,
                          subset=None) -> float:
    """Max over points of the distance to the nearest ray in the given set.

    From an interior basepoint the rays should start there; from a
    direction at infinity pass geodesic lines (rays joining the far point
    of that direction to the far points of the others).  The estimate is a
    lower bound for the true constant that saturates as the ray set covers
    all boundary directions.
    """
    if not rays:
        raise ValueError("empty ray set")
    idx = np.asarray(subset if subset is not None else space.interior_idx,
                     dtype=np.int64)
    polys = [np.asarray(sorted(set(int(p) for p in r.ray)), dtype=np.int64)
             for r in rays]
    worst = 0.0
    for i in idx:
        row = space.dist_row(int(i))
        nearest = min(float(row[p].min()) for p in polys)
        worst = max(worst, nearest)
    return worst


def lines_from_direction(space: SampledSpace, omega: BoundaryDirection,
                         others: list[BoundaryDirection]) -> list[BoundaryDirection]:
    """Geodesic lines starting at the direction omega, one per other direction."""
    out = []
    for other in others:
        if other.far_point() == omega.far_point():
            continue
        out.append(direction_from(space, omega.far_point(), other.far_point(),
                                  name=(omega.name, other.name)))
    if not out:
        raise ValueError("empty ray set")
    return out


def gromov_product_directions(space: SampledSpace, b: BasepointFunction,
                              xi: BoundaryDirection, zeta: BoundaryDirection,
                              ) -> tuple[float, float]:
    """(xi|zeta)_b estimated via far points, with a two-scale stability gap.

    Same direction (same far point) gives +inf.  Busemann bases are
    undefined at their own basepoint direction.
    """
    if b.kind == "busemann" and b.omega is not None:
        if xi.name == b.omega or zeta.name == b.omega:
            raise ValueError("undefined at basepoint")
    if xi.far_point() == zeta.far_point():
        return math.inf, 0.0

    def at_scale(scale):
        u = _ray_point_at_fraction(space, xi, scale)
        v = _ray_point_at_fraction(space, zeta, scale)
        return gromov_product_base(space, b, u, v)

    full = at_scale(1.0)
    half = at_scale(0.5)
    return float(full), float(abs(full - half))


def _ray_point_at_fraction(space, direction: BoundaryDirection, frac: float) -> int:
    prefix = polyline_prefix_lengths(space, direction.ray)
    target = prefix[-1] * frac
    k = int(np.argmin(np.abs(prefix - target)))
    return int(direction.ray[k])


def boundary_spread(space: SampledSpace, x: int,
                    directions: list[BoundaryDirection], *,
                    delta_hat: float = 0.0,
                    bound_pair: tuple[int, int] | None = None) -> dict:
    """S(x) = max over directions omega of min over xi of (omega|xi)_x.

    Estimated with far points on representative rays.  Also returns the
    two-point upper bound (omega|xi)_x + 8*delta_hat for a chosen pair.
    """
    if len(directions) < 2:
        raise ValueError("need at least 2 directions")
    b = distance_basepoint(space, x)
    m = len(directions)
    prod = np.full((m, m), math.inf)
    for i in range(m):
        for j in range(i + 1, m):
            val, _ = gromov_product_directions(space, b, directions[i],
                                               directions[j])
            prod[i, j] = prod[j, i] = val
    spread = float(np.max(np.min(prod, axis=1)))
    i, j = bound_pair if bound_pair is not None else (0, 1)
    upper = float(prod[i, j] + 8.0 * delta_hat)
    return {"spread": spread, "two_point_bound": upper,
            "pair": (directions[i].name, directions[j].name)}


def visual_quasimetric(space: SampledSpace, b: BasepointFunction, eps: float,
                       xi: BoundaryDirection, zeta: BoundaryDirection) -> float:
    """theta_{eps,b}(xi, zeta) = exp(-eps * (xi|zeta)_b); 0 when xi = zeta."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    val, _ = gromov_product_directions(space, b, xi, zeta)
    if math.isinf(val):
        return 0.0
    return math.exp(-eps * val)


def visual_quasimetric_table(space: SampledSpace, b: BasepointFunction,
                             eps: float,
                             directions: list[BoundaryDirection]) -> np.ndarray:
    m = len(directions)
    q = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            q[i, j] = q[j, i] = visual_quasimetric(space, b, eps,
                                                   directions[i], directions[j])
    return q
