"""Triangulation and the three writers."""

import numpy as np
import pytest

from cmcsurf import mesh_io
from cmcsurf.errors import DegenerateError, DomainError, EmptyMeshError


def cylinder(us, vs):
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    return np.stack([np.cos(uu), np.sin(uu), vv], axis=-1)


# ---------------------------------------------------------------------------
# containers


def test_mesh_validation():
    v = np.zeros((3, 3))
    mesh = mesh_io.TriangleMesh(v, [[0, 1, 2]])
    assert mesh.vertex_count == 3 and mesh.face_count == 1
    assert not mesh.degenerate_flags.any()
    with pytest.raises(DomainError):
        mesh_io.TriangleMesh(v, [[0, 1, 3]])
    with pytest.raises(DomainError):
        mesh_io.TriangleMesh(v, [[-1, 0, 1]])
    with pytest.raises(DomainError):
        mesh_io.TriangleMesh(v, [[0, 1, 2]], normals=np.zeros((2, 3)))
    with pytest.raises(DomainError):
        mesh_io.TriangleMesh(v, [[0, 1, 2]], degenerate_flags=[True])


def test_non_finite_vertices_need_a_flag():
    v = np.zeros((3, 3))
    v[1, 0] = np.nan
    with pytest.raises(DomainError):
        mesh_io.TriangleMesh(v, np.empty((0, 3), dtype=int))
    mesh = mesh_io.TriangleMesh(v, np.empty((0, 3), dtype=int),
                                degenerate_flags=[False, True, False])
    assert mesh.degenerate_flags[1]


def test_profile_curve_validation():
    mesh_io.ProfileCurve([0.0, 1.0], np.zeros((2, 3)))
    with pytest.raises(DomainError):
        mesh_io.ProfileCurve([0.0, 1.0], np.zeros((3, 3)))
    with pytest.raises(DomainError):
        mesh_io.ProfileCurve([1.0, 0.5], np.zeros((2, 3)))
    with pytest.raises(DomainError):
        mesh_io.ProfileCurve([0.0, 0.0], np.zeros((2, 3)))


# ---------------------------------------------------------------------------
# sampling


def test_sample_counts_on_a_clean_grid():
    mesh = mesh_io.sample(cylinder, (0.0, 5.0), (0.0, 1.0), 16, 16)
    assert mesh.vertex_count == 256
    assert mesh.face_count == 2 * 15 * 15
    assert mesh.normals is None


def test_sample_accepts_the_tuple_protocol():
    def with_normals(us, vs):
        x = cylinder(us, vs)
        n = x.copy()
        n[..., 2] = 0.0
        return x, n

    mesh = mesh_io.sample(with_normals, (0.0, 5.0), (0.0, 1.0), 4, 5)
    assert mesh.normals is not None
    assert np.max(np.abs(mesh.normals[:, 2])) == 0.0


def test_bad_nodes_drop_their_faces():
    def one_interior_nan(us, vs):
        x = cylinder(us, vs)
        x[2, 2] = np.nan
        return x

    def one_corner_bad(us, vs):
        x = cylinder(us, vs)
        mask = np.zeros((len(us), len(vs)), dtype=bool)
        mask[0, 0] = True
        return x, None, mask

    clean = mesh_io.sample(cylinder, (0.0, 5.0), (0.0, 1.0), 6, 6)
    interior = mesh_io.sample(one_interior_nan, (0.0, 5.0), (0.0, 1.0), 6, 6)
    corner = mesh_io.sample(one_corner_bad, (0.0, 5.0), (0.0, 1.0), 6, 6)
    assert interior.vertex_count == clean.vertex_count - 1
    assert interior.face_count == clean.face_count - 6
    assert corner.vertex_count == clean.vertex_count - 1
    assert corner.face_count == clean.face_count - 2
    # renumbering keeps every face index valid
    assert interior.faces.max() == interior.vertex_count - 1


def test_sample_guards():
    with pytest.raises(DomainError):
        mesh_io.sample(cylinder, (0.0, 1.0), (0.0, 1.0), 1, 8)

    def all_bad(us, vs):
        return np.full((len(us), len(vs), 3), np.nan)

    with pytest.raises(EmptyMeshError):
        mesh_io.sample(all_bad, (0.0, 1.0), (0.0, 1.0), 3, 3)

    def wrong_shape(us, vs):
        return np.zeros((len(us), len(vs), 2))

    with pytest.raises(DomainError):
        mesh_io.sample(wrong_shape, (0.0, 1.0), (0.0, 1.0), 3, 3)


# ---------------------------------------------------------------------------
# writers


def test_obj_format_and_determinism(tmp_path):
    mesh = mesh_io.sample(cylinder, (0.0, 5.0), (0.0, 1.0), 3, 3)
    first = tmp_path / "a.obj"
    second = tmp_path / "b.obj"
    mesh_io.export_obj(mesh, first)
    mesh_io.export_obj(mesh, second)
    assert first.read_bytes() == second.read_bytes()
    lines = first.read_text().splitlines()
    assert lines[0] == "# 9 vertices, 8 faces"
    assert sum(ln.startswith("v ") for ln in lines) == 9
    assert sum(ln.startswith("f ") for ln in lines) == 8
    indices = [int(tok) for ln in lines if ln.startswith("f ")
               for tok in ln.split()[1:]]
    assert min(indices) == 1 and max(indices) == 9
    # repr floats survive a parse round trip bit for bit
    parsed = np.array([[float(t) for t in ln.split()[1:]]
                       for ln in lines if ln.startswith("v ")])
    assert np.array_equal(parsed, mesh.vertices)


def test_obj_refuses_non_finite_vertices(tmp_path):
    v = np.zeros((3, 3))
    v[0, 1] = np.inf
    mesh = mesh_io.TriangleMesh(v, np.empty((0, 3), dtype=int),
                                degenerate_flags=[True, False, False])
    with pytest.raises(DegenerateError):
        mesh_io.export_obj(mesh, tmp_path / "bad.obj")


def test_empty_mesh_is_still_a_file(tmp_path):
    mesh = mesh_io.TriangleMesh(np.empty((0, 3)), np.empty((0, 3), dtype=int))
    path = tmp_path / "empty.obj"
    mesh_io.export_obj(mesh, path)
    assert path.read_text() == "# 0 vertices, 0 faces\n"


def test_profile_csv(tmp_path):
    us = np.array([0.0, 0.25, 0.5])
    pts = np.stack([np.cos(us), np.sin(us), us], axis=-1)
    curve = mesh_io.ProfileCurve(us, pts, kind="test")
    path = tmp_path / "profile.csv"
    mesh_io.export_profile_csv(curve, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "u,x,y,z"
    assert len(lines) == 4
    assert float(lines[2].split(",")[0]) == 0.25


def test_report_json_is_deterministic(tmp_path):
    report = {"b": 2.0, "a": [1, 2], "nested": {"z": None, "y": "s"}}
    one = tmp_path / "one.json"
    two = tmp_path / "two.json"
    mesh_io.export_report_json(report, one)
    mesh_io.export_report_json({"nested": {"y": "s", "z": None},
                                "a": [1, 2], "b": 2.0}, two)
    assert one.read_bytes() == two.read_bytes()
    text = one.read_text()
    assert text.index('"a"') < text.index('"b"') < text.index('"nested"')
    assert text.endswith("\n")
