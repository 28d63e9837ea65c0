import numpy as np
import pytest

from metriclab.models import (ModelSpec, build_model_space, cycle_space,
                              interval_space, random_tree_space,
                              subdivide_tree, tripod_space)


def test_model_spec_validation():
    with pytest.raises(ValueError, match="unknown model kind"):
        ModelSpec("banana")
    with pytest.raises(ValueError, match="positive"):
        ModelSpec("glued_interval_Xt", params={"t": -1.0})
    with pytest.raises(ValueError, match="resolution"):
        ModelSpec("line", resolution=2)


def test_model_spec_roundtrip():
    spec = ModelSpec("random_tree", params={"n": 12}, seed=4)
    assert ModelSpec.from_dict(spec.to_dict()) == spec


def test_glued_interval_is_three_armed_tree():
    space = build_model_space(ModelSpec("glued_interval_Xt", params={"t": 2.0},
                                        window=5.0, resolution=51))
    origin = space.landmarks["origin"]
    tip = space.landmarks["tip"]
    end_pos = space.landmarks["end_pos"]
    end_neg = space.landmarks["end_neg"]
    assert space.dist(origin, tip) == pytest.approx(2.0, rel=1e-12)
    assert space.dist(end_neg, end_pos) == pytest.approx(10.0, rel=1e-12)
    # through-origin additivity on a tree
    assert space.dist(tip, end_pos) == pytest.approx(7.0, rel=1e-12)
    assert not space.is_incomplete()
    assert space.horizon_mask.sum() == 2


def test_disk_center_boundary_distance():
    space = build_model_space(ModelSpec("euclidean_disk", resolution=12))
    center = space.landmarks["center"]
    assert space.d_omega(center) == pytest.approx(1.0, abs=1e-12)
    # oracle agrees with min over boundary samples within the angular gap
    b = space.boundary_idx
    sampled = min(space.dist(center, int(j)) for j in b)
    assert sampled == pytest.approx(1.0, abs=1e-9)


def test_glued_domain_boundary_distances():
    space = build_model_space(ModelSpec("glued_domain_Ors",
                                        params={"r": 1.0, "s": 3.0},
                                        resolution=100))
    junction = space.landmarks["junction"]
    tip = space.landmarks["tip"]
    assert space.d_omega(junction) == pytest.approx(1.0, abs=1e-6)
    # tip of the glued arm sits at distance r + s from the metric boundary
    assert space.d_omega(tip) == pytest.approx(4.0, abs=1e-9)
    # oracle equals enumeration over the boundary samples {-r, +r}
    for i in map(int, space.interior_idx[:20]):
        enum = min(space.dist(i, int(j)) for j in space.boundary_idx)
        assert space.d_omega(i) == pytest.approx(enum, abs=1e-12)


def test_half_plane_grid():
    space = build_model_space(ModelSpec("euclidean_half_plane", window=1.0,
                                        resolution=50))
    assert space.is_incomplete()
    ys = space.coords[space.interior_idx, 1]
    assert ys.min() > 0
    dom = space.d_omega_all()
    assert np.allclose(dom[space.interior_idx], ys)


def test_square_oracle():
    space = build_model_space(ModelSpec("square", resolution=8))
    x, y = space.coords[:, 0], space.coords[:, 1]
    expect = np.minimum.reduce([x, 1 - x, y, 1 - y])
    expect[space.boundary_mask] = 0
    assert np.allclose(space.d_omega_all(), expect)


def test_interval_space_open_half_line():
    space = interval_space(0.0, 10.0, 100, boundary_lo=True,
                           spacing="geometric", x_min=0.05, horizon_hi=True)
    assert space.is_incomplete()
    xs = space.coords[:, 0]
    interior = space.interior_idx
    assert np.allclose(space.d_omega_all()[interior], xs[interior])
    assert space.boundary_mask.sum() == 1


def test_tripod_busemann_geometry():
    space = tripod_space((6.0, 6.0, 3.0), step=0.5)
    origin = space.landmarks["origin"]
    tip = space.landmarks["tip"]
    assert space.dist(origin, tip) == pytest.approx(3.0, rel=1e-12)


def test_random_tree_horizon_are_leaves():
    space = random_tree_space(30, seed=0)
    deg = np.zeros(space.n, dtype=int)
    for a, b, _ in space.meta["tree_edges"]:
        deg[a] += 1
        deg[b] += 1
    assert np.array_equal(space.horizon_mask, deg == 1)


def test_subdivide_tree_preserves_distances():
    space = random_tree_space(15, seed=2)
    fine = subdivide_tree(space, factor=2)
    assert fine.meta["parent_points"] == space.n
    for u in range(0, 15, 3):
        for v in range(1, 15, 4):
            assert fine.dist(u, v) == pytest.approx(space.dist(u, v), rel=1e-9)


def test_hyperbolic_grid_vertical_distances():
    space = build_model_space(ModelSpec("hyperbolic_grid", window=2.0,
                                        resolution=12))
    grid = space.meta["grid"]
    n_s = grid["n_s"]
    i = grid["n_x"] // 2
    a, b = i * n_s + 2, i * n_s + 7
    ya, yb = space.coords[a, 1], space.coords[b, 1]
    # vertical geodesic: distance = log(yb/ya), realized by the column path
    assert space.dist(a, b) == pytest.approx(np.log(yb / ya), rel=1e-9)


def test_cycle_space():
    space = cycle_space(6, weight=0.5)
    assert space.dist(0, 3) == pytest.approx(1.5)
