"""Sampling parametrized surfaces to triangle meshes and writing them out.

Everything here is deliberately dumb plumbing: a rectangular parameter
grid becomes two triangles per cell, nodes the evaluator marks as bad
(NaN coordinates or an explicit flag) are dropped together with every
face touching them, and the writers format floats with repr so that a
repeated run produces byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, DomainError, EmptyMeshError


@dataclass
class TriangleMesh:
    """Indexed triangle soup with optional per-vertex normals.

    degenerate_flags marks vertices kept despite a known defect (a
    front's cuspidal point, say); only flagged vertices may carry
    non-finite coordinates, and the exporters refuse to write those,
    so bad data never lands in a file silently.
    """

    vertices: np.ndarray
    faces: np.ndarray
    normals: np.ndarray | None = None
    degenerate_flags: np.ndarray | None = None

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=int).reshape(-1, 3)
        n = len(self.vertices)
        if self.normals is not None:
            self.normals = np.asarray(self.normals, dtype=float)
            if self.normals.shape != self.vertices.shape:
                raise DomainError("normals must match vertices in shape")
        if self.degenerate_flags is None:
            self.degenerate_flags = np.zeros(n, dtype=bool)
        else:
            self.degenerate_flags = np.asarray(self.degenerate_flags,
                                               dtype=bool).reshape(-1)
            if len(self.degenerate_flags) != n:
                raise DomainError("one degenerate flag per vertex")
        if self.faces.size and (self.faces.min() < 0
                                or self.faces.max() >= n):
            raise DomainError("face indices out of range")
        bad = ~np.all(np.isfinite(self.vertices), axis=-1)
        if np.any(bad & ~self.degenerate_flags):
            raise DomainError(
                "non-finite vertex without a degenerate flag")

    @property
    def vertex_count(self):
        return len(self.vertices)

    @property
    def face_count(self):
        return len(self.faces)


@dataclass
class ProfileCurve:
    """Sampled profile curve (u, x(u)) with a kind tag for the report."""

    us: np.ndarray
    points: np.ndarray
    kind: str = ""

    def __post_init__(self):
        self.us = np.asarray(self.us, dtype=float).reshape(-1)
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if len(self.us) != len(self.points):
            raise DomainError("one parameter value per point")
        if len(self.us) >= 2 and not np.all(np.diff(self.us) > 0.0):
            raise DomainError("u samples must be strictly increasing")


def sample(evaluator, u_range, v_range, nu, nv):
    """Evaluate a surface on a tensor grid and triangulate it.

    evaluator(us, vs) must return the (nu, nv, 3) position array, or a
    tuple (positions[, normals[, bad_mask]]).  Nodes with non-finite
    positions or normals, or marked in bad_mask, are excluded along
    with every incident face; remaining vertices are renumbered in
    row-major order (index i*nv + j before exclusion).
    """
    nu = int(nu)
    nv = int(nv)
    if nu < 2 or nv < 2:
        raise DomainError("need at least 2 samples per direction")
    us = np.linspace(float(u_range[0]), float(u_range[1]), nu)
    vs = np.linspace(float(v_range[0]), float(v_range[1]), nv)
    out = evaluator(us, vs)
    if isinstance(out, np.ndarray):
        out = (out,)
    x = np.asarray(out[0], dtype=float)
    if x.shape != (nu, nv, 3):
        raise DomainError(
            f"evaluator returned shape {x.shape}, expected {(nu, nv, 3)}")
    normals = None
    if len(out) > 1 and out[1] is not None:
        normals = np.asarray(out[1], dtype=float)
        if normals.shape != x.shape:
            raise DomainError("normals must match positions in shape")
    bad = ~np.all(np.isfinite(x), axis=-1)
    if normals is not None:
        bad |= ~np.all(np.isfinite(normals), axis=-1)
    if len(out) > 2 and out[2] is not None:
        bad |= np.asarray(out[2], dtype=bool)
    keep = ~bad.reshape(-1)
    if not np.any(keep):
        raise EmptyMeshError("every sampled node is degenerate")
    remap = np.full(nu * nv, -1, dtype=int)
    remap[keep] = np.arange(int(np.sum(keep)))
    # two triangles per cell, counterclockwise in the (u, v) plane
    ii, jj = np.meshgrid(np.arange(nu - 1), np.arange(nv - 1), indexing="ij")
    a = (ii * nv + jj).reshape(-1)
    b = a + nv
    c = b + 1
    d = a + 1
    tris = np.concatenate([np.stack([a, b, c], axis=-1),
                           np.stack([a, c, d], axis=-1)])
    ok = keep[tris].all(axis=-1)
    faces = remap[tris[ok]]
    verts = x.reshape(-1, 3)[keep]
    nrm = normals.reshape(-1, 3)[keep] if normals is not None else None
    return TriangleMesh(vertices=verts, faces=faces, normals=nrm)


def _fmt(x):
    return repr(float(x))


def export_obj(mesh, path):
    """Write v / vn / f records, 1-based indices, repr floats.

    An empty mesh still produces a valid file consisting of the
    comment header.  Vertices must be finite: flagged-degenerate
    nodes are for in-memory bookkeeping and must be excluded before
    export.
    """
    if mesh.vertex_count and not np.all(np.isfinite(mesh.vertices)):
        raise DegenerateError(
            "mesh contains non-finite vertices; exclude degenerate "
            "nodes before exporting")
    lines = [f"# {mesh.vertex_count} vertices, {mesh.face_count} faces"]
    for v in mesh.vertices:
        lines.append(f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}")
    if mesh.normals is not None:
        for n in mesh.normals:
            lines.append(f"vn {_fmt(n[0])} {_fmt(n[1])} {_fmt(n[2])}")
    for f in mesh.faces:
        lines.append(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def export_profile_csv(curve, path):
    """Write the profile as u,x,y,z rows with a mandatory header."""
    lines = ["u,x,y,z"]
    for u, pt in zip(curve.us, curve.points):
        lines.append(f"{_fmt(u)},{_fmt(pt[0])},{_fmt(pt[1])},{_fmt(pt[2])}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def export_report_json(report, path):
    """Serialize a report dict deterministically (sorted keys, LF)."""
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
