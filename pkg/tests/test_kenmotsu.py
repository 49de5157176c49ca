"""Representation formula: forms, diagnostics, reconstruction, interchange."""

import numpy as np
import pytest

from cmcsurf import helicoid, kenmotsu, lingeo
from cmcsurf.errors import DomainError, MeanCurvatureZeroError

PARAMS = helicoid.HelicoidParams(0.5, 1.3)
CASE = (lingeo.EUCLIDEAN, lingeo.RIEMANNIAN, lingeo.SPHERE)


def helicoid_grids(nu, nv):
    us = np.linspace(-0.8, 0.8, nu)
    vs = np.linspace(-0.7, 0.7, nv)
    x, n, x_check, pole = helicoid.eval_grid(PARAMS, us, vs)
    du, dv = us[1] - us[0], vs[1] - vs[0]
    gauss = kenmotsu.GaussMapGrid(n, du, dv, *CASE)
    surface = kenmotsu.SurfaceGrid(x, du, dv, lingeo.EUCLIDEAN,
                                   lingeo.RIEMANNIAN)
    return gauss, surface, x, n, x_check


def sphere_chart(warp=0.0):
    us = np.linspace(0.0, 1.5, 65)
    vs = np.linspace(-0.75, 0.75, 65)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    uu = uu + warp * np.sin(3.0 * vv)
    sech = 1.0 / np.cosh(vv)
    nodes = np.stack([np.cos(uu) * sech, np.sin(uu) * sech,
                      np.tanh(vv)], axis=-1)
    return kenmotsu.GaussMapGrid(nodes, us[1] - us[0], vs[1] - vs[0], *CASE)


# ---------------------------------------------------------------------------
# grid containers


def test_grid_case_validation():
    n = np.zeros((4, 4, 3))
    n[..., 2] = 1.0
    kenmotsu.GaussMapGrid(n, 0.1, 0.1, *CASE)
    with pytest.raises(DomainError):
        kenmotsu.GaussMapGrid(n, 0.1, 0.1, lingeo.EUCLIDEAN,
                              lingeo.RIEMANNIAN, lingeo.HYPERBOLOID)
    with pytest.raises(DomainError):
        kenmotsu.GaussMapGrid(n, 0.1, 0.1, lingeo.LORENTZIAN,
                              lingeo.RIEMANNIAN, lingeo.DE_SITTER)
    with pytest.raises(DomainError):
        kenmotsu.GaussMapGrid(1.001 * n, 0.1, 0.1, *CASE)
    with pytest.raises(DomainError):
        kenmotsu.GaussMapGrid(n[:2], 0.1, 0.1, *CASE)
    with pytest.raises(DomainError):
        kenmotsu.GaussMapGrid(n, -0.1, 0.1, *CASE)
    with pytest.raises(DomainError):
        kenmotsu.SurfaceGrid(np.zeros((4, 4, 3)), 0.1, 0.1, "torus",
                             lingeo.RIEMANNIAN)


def test_minimal_mean_curvature_is_refused():
    gauss, _, _, _, _ = helicoid_grids(5, 5)
    with pytest.raises(MeanCurvatureZeroError):
        kenmotsu.kenmotsu_form(gauss, 0.0)


# ---------------------------------------------------------------------------
# the form and its diagnostics


def test_form_matches_surface_differential():
    gauss, _, x, _, _ = helicoid_grids(33, 33)
    omega = kenmotsu.kenmotsu_form(gauss, -0.5)
    x_u = np.gradient(x, gauss.du, axis=0, edge_order=2)
    x_v = np.gradient(x, gauss.dv, axis=1, edge_order=2)
    assert np.max(np.abs(omega.P - x_u)) < 2e-3
    assert np.max(np.abs(omega.Q - x_v)) < 2e-3


def test_integrability_residual_is_second_order():
    maxima = []
    for nodes in (17, 33, 65):
        gauss, _, _, _, _ = helicoid_grids(nodes, nodes)
        res = kenmotsu.integrability_residual(gauss, -0.5)
        assert res.shape == (nodes - 1, nodes - 1)
        maxima.append(np.max(res[2:-2, 2:-2]))
    # interior plaquettes, clear of the one-sided boundary stencils
    assert maxima[0] / maxima[1] > 3.0
    assert maxima[1] / maxima[2] > 3.0


def test_residual_sees_non_gauss_data():
    clean = np.max(kenmotsu.integrability_residual(sphere_chart(), -0.5))
    bent = np.max(kenmotsu.integrability_residual(sphere_chart(0.05), -0.5))
    assert clean < 5e-2
    assert bent > 0.2


def test_harmonicity_residual_separates_the_chart_from_a_warp():
    clean = np.max(kenmotsu.harmonicity_residual(sphere_chart()))
    bent = np.max(kenmotsu.harmonicity_residual(sphere_chart(0.05)))
    assert clean < 5e-2
    assert bent > 0.2


def test_near_minimal_mask():
    # a constant map is flagged outright
    n = np.zeros((4, 4, 3))
    n[..., 0] = 1.0
    flat = kenmotsu.GaussMapGrid(n, 0.1, 0.1, *CASE)
    assert kenmotsu.near_minimal_mask(flat).all()
    # the catenoid normal is the excluded conformal branch; differences
    # leave an O(h^2) floor, so the tolerance sits just above it
    uu, vv = np.meshgrid(np.linspace(-1.0, 1.0, 41),
                         np.linspace(0.0, 1.5, 41), indexing="ij")
    cat = np.stack([np.cos(vv) / np.cosh(uu), np.sin(vv) / np.cosh(uu),
                    np.tanh(uu)], axis=-1)
    catgrid = kenmotsu.GaussMapGrid(cat, 0.05, 1.5 / 40, *CASE)
    assert kenmotsu.near_minimal_mask(catgrid, rtol=2e-3).all()
    # a genuine cmc Gauss map is nowhere near the degenerate branch
    gauss, _, _, _, _ = helicoid_grids(17, 17)
    assert not kenmotsu.near_minimal_mask(gauss, rtol=2e-3).any()


# ---------------------------------------------------------------------------
# reconstruction


def test_sphere_chart_reconstruction():
    gauss = sphere_chart()
    scaled = 25.0 * (gauss.du ** 2 + gauss.dv ** 2)
    surface, report = kenmotsu.reconstruct(gauss, -0.5,
                                           residual_threshold=scaled)
    wanted = 2.0 * (gauss.nodes - gauss.nodes[:1, :1])
    got = surface.nodes - surface.nodes[:1, :1]
    assert np.max(np.abs(got - wanted)) < 1e-3
    assert report.status == "ok"
    assert report.path_gap < 2e-3
    assert report.near_minimal_fraction == 0.0
    # the library default threshold is strict enough that honest
    # discretization error trips it
    _, strict = kenmotsu.reconstruct(gauss, -0.5)
    assert strict.status == "warning"
    assert strict.max_residual > strict.residual_threshold


def test_reconstruction_is_anchored_and_second_order():
    errors = []
    for nodes in (17, 33):
        gauss, _, x, _, _ = helicoid_grids(nodes, nodes)
        surface, _ = kenmotsu.reconstruct(gauss, -0.5, base_point=x[0, 0])
        assert np.array_equal(surface.nodes[0, 0], x[0, 0])
        gap = np.sqrt(np.sum((surface.nodes - x) ** 2, axis=-1))
        errors.append(np.max(gap))
    assert errors[0] < 5e-3
    assert 3.4 < errors[0] / errors[1] < 4.6


def test_orientation_flip_shifts_by_the_normal():
    # flipping n reconstructs the parallel surface x + n/H up to the
    # base constant
    gauss, _, _, n, _ = helicoid_grids(33, 33)
    flipped = kenmotsu.GaussMapGrid(-n, gauss.du, gauss.dv, *CASE)
    plus, _ = kenmotsu.reconstruct(gauss, -0.5)
    minus, _ = kenmotsu.reconstruct(flipped, -0.5)
    diff = minus.nodes - plus.nodes - n / (-0.5)
    dev = diff - diff.mean(axis=(0, 1))
    assert np.max(np.abs(dev)) < 2e-3


def test_reconstruct_base_point_shape_guard():
    gauss, _, _, _, _ = helicoid_grids(5, 5)
    with pytest.raises(DomainError):
        kenmotsu.reconstruct(gauss, -0.5, base_point=(0.0, 1.0))


# ---------------------------------------------------------------------------
# finite difference geometry


def test_cylinder_geometry():
    h = 1e-3
    us = 0.7 + h * np.arange(-2, 3)
    vs = 0.2 + h * np.arange(-2, 3)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    x = np.stack([np.cos(uu), np.sin(uu), vv], axis=-1)
    surface = kenmotsu.SurfaceGrid(x, h, h, lingeo.EUCLIDEAN,
                                   lingeo.RIEMANNIAN)
    geo = kenmotsu.fd_geometry(surface)
    assert np.max(np.abs(geo.mean_curvature + 0.5)) < 1e-6
    assert np.max(np.abs(geo.gauss_curvature)) < 1e-6
    assert np.max(np.abs(geo.normal - np.stack(
        [np.cos(uu), np.sin(uu), np.zeros_like(uu)], axis=-1))) < 1e-8
    assert not geo.degenerate.any()
    assert np.max(np.abs(geo.first[..., 0, 1])) < 1e-10


def test_helicoid_geometry_and_orientation_pin():
    h = 1e-3
    us = 0.3 + h * np.arange(-2, 3)
    vs = -0.4 + h * np.arange(-2, 3)
    x, n, _, _ = helicoid.eval_grid(PARAMS, us, vs)
    surface = kenmotsu.SurfaceGrid(x, h, h, lingeo.EUCLIDEAN,
                                   lingeo.RIEMANNIAN)
    geo = kenmotsu.fd_geometry(surface, orient_to=n)
    centre = geo.mean_curvature[2, 2]
    assert abs(centre + 0.5) < 1e-6
    flipped = kenmotsu.fd_geometry(surface, orient_to=-n)
    assert abs(flipped.mean_curvature[2, 2] - 0.5) < 1e-6


def test_degenerate_nodes_are_flagged_not_fatal():
    us = np.array([-0.05, 0.0, 0.05])
    vs = np.linspace(0.0, 1.0, 5)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    cone = np.stack([uu * np.cos(vv), uu * np.sin(vv), uu], axis=-1)
    surface = kenmotsu.SurfaceGrid(cone, 0.05, 0.25, lingeo.EUCLIDEAN,
                                   lingeo.RIEMANNIAN)
    geo = kenmotsu.fd_geometry(surface)
    assert geo.degenerate[1].all()
    assert not geo.degenerate[0].any() and not geo.degenerate[2].any()
    assert np.isnan(geo.mean_curvature[1]).all()
    assert np.isfinite(geo.mean_curvature[[0, 2]]).all()


def test_companion_matches_the_closed_form():
    _, surface, x, n, x_check = helicoid_grids(9, 9)
    comp = kenmotsu.companion(surface, -0.5, normals=n)
    assert np.max(np.abs(comp.nodes - x_check)) < 1e-12
    with pytest.raises(DomainError):
        kenmotsu.companion(surface, -0.5, normals=n[:, :, :2])


# ---------------------------------------------------------------------------
# interchange formats


def small_grid():
    us = np.linspace(0.0, 0.3, 4)
    vs = np.linspace(0.0, 0.2, 3)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    sech = 1.0 / np.cosh(vv)
    nodes = np.stack([np.cos(uu) * sech, np.sin(uu) * sech,
                      np.tanh(vv)], axis=-1)
    return kenmotsu.GaussMapGrid(nodes, 0.1, 0.1, *CASE)


def test_csv_round_trip_is_exact(tmp_path):
    grid = small_grid()
    path = tmp_path / "grid.csv"
    kenmotsu.write_grid_csv(grid, path, mean_curvature=-0.5)
    back, h = kenmotsu.read_grid_csv(path, *CASE)
    assert np.array_equal(back.nodes, grid.nodes)
    assert back.du == grid.du and back.dv == grid.dv
    assert np.all(h == -0.5)
    again = tmp_path / "again.csv"
    kenmotsu.write_grid_csv(back, again, mean_curvature=h)
    assert path.read_bytes() == again.read_bytes()


def test_csv_without_curvature_column(tmp_path):
    path = tmp_path / "grid.csv"
    kenmotsu.write_grid_csv(small_grid(), path)
    assert path.read_text().splitlines()[0] == "u,v,nx,ny,nz"
    _, h = kenmotsu.read_grid_csv(path, *CASE)
    assert h is None


def test_csv_parse_errors_carry_line_numbers(tmp_path):
    grid = small_grid()
    path = tmp_path / "grid.csv"
    kenmotsu.write_grid_csv(grid, path)
    lines = path.read_text().splitlines()

    def rewrite(mutated):
        path.write_text("\n".join(mutated) + "\n")

    rewrite(["x,y,z"] + lines[1:])
    with pytest.raises(DomainError, match="header"):
        kenmotsu.read_grid_csv(path, *CASE)
    rewrite(lines[:2] + ["1.0,2.0"] + lines[3:])
    with pytest.raises(DomainError, match="line 3: expected 5 fields"):
        kenmotsu.read_grid_csv(path, *CASE)
    bad = lines[3].replace(lines[3].split(",")[2], "spam", 1)
    rewrite(lines[:3] + [bad] + lines[4:])
    with pytest.raises(DomainError, match="line 4: non-numeric"):
        kenmotsu.read_grid_csv(path, *CASE)
    rewrite(lines[:-1])
    with pytest.raises(DomainError, match="rectangular"):
        kenmotsu.read_grid_csv(path, *CASE)
    skew = lines[:]
    cells = skew[5].split(",")
    cells[0] = repr(float(cells[0]) + 0.013)
    skew[5] = ",".join(cells)
    rewrite(skew)
    with pytest.raises(DomainError, match="uniform"):
        kenmotsu.read_grid_csv(path, *CASE)


def test_json_round_trip_and_schema_guard(tmp_path):
    grid = small_grid()
    path = tmp_path / "grid.json"
    kenmotsu.write_grid_json(grid, path, mean_curvature=-0.5)
    back, h = kenmotsu.read_grid_json(path)
    assert np.array_equal(back.nodes, grid.nodes)
    assert back.metric == grid.metric and back.target == grid.target
    assert np.all(h == -0.5)
    again = tmp_path / "again.json"
    kenmotsu.write_grid_json(back, again, mean_curvature=h)
    assert path.read_bytes() == again.read_bytes()
    path.write_text('{"schema": "other/9"}\n')
    with pytest.raises(DomainError, match="kenmotsu-grid/1"):
        kenmotsu.read_grid_json(path)
