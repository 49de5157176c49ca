"""Gauss map grids and the reconstruction x = -(1/2H) int (dn + n x (*dn)).

Three ambient cases share one formula.  A surface with nonzero constant
mean curvature H sends its Gauss map n into the unit sphere (Euclidean
ambient space), the hyperboloid <n,n> = -1 (spacelike surface in the
Lorentzian ambient), or the de Sitter sphere <n,n> = +1 (timelike
surface); in conformal respectively null coordinates the differential of
the immersion is recovered from n alone as dx = -(1/2H)(dn + n x (*dn)).
This module discretizes that statement on rectangular parameter grids:
build the one-form from sampled n, test how closed it is, integrate it
back to a surface, and measure the geometry of any sampled surface by
finite differences.

All derivatives are second order (central differences inside, one-sided
three-point stencils on the boundary), and the path integrals use the
trapezoid rule, so every discrete operator here is O(h^2) consistent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import lingeo
from .errors import DomainError, MeanCurvatureZeroError

# how far off the target quadric a Gauss map node may sit
UNIT_TOL = 1e-10

# |dn + n x *dn| below this multiple of |dn| marks near-minimal data:
# the form degenerates and reconstruction cannot see the surface
NEAR_MINIMAL_RTOL = 1e-8

# |H| below this is treated as the (excluded) minimal case
H_TOL = 1e-12

# relative det(I) cutoff for the degenerate-node flag
DEGENERATE_TOL = 1e-12

# default integrability ceiling before reconstruct reports "warning"
RESIDUAL_THRESHOLD = 1e-6

GRID_SCHEMA = "kenmotsu-grid/1"

# (ambient metric, domain signature, Gauss map target); nothing else is
# a case of the representation formula
_CASES = frozenset({
    (lingeo.EUCLIDEAN, lingeo.RIEMANNIAN, lingeo.SPHERE),
    (lingeo.LORENTZIAN, lingeo.RIEMANNIAN, lingeo.HYPERBOLOID),
    (lingeo.LORENTZIAN, lingeo.LORENTZIAN, lingeo.DE_SITTER),
})


def _check_grid_nodes(nodes, du, dv):
    nodes = np.asarray(nodes, dtype=float)
    if nodes.ndim != 3 or nodes.shape[-1] != 3:
        raise DomainError("nodes must be a (nu, nv, 3) array")
    if nodes.shape[0] < 3 or nodes.shape[1] < 3:
        # three nodes per direction so second order differences exist
        raise DomainError("grid needs at least 3 x 3 nodes")
    if not (du > 0.0 and dv > 0.0):
        raise DomainError("grid steps must be positive")
    return nodes


@dataclass
class GaussMapGrid:
    """Sampled Gauss map n(i du, j dv) together with its case data.

    The triple (metric, domain_signature, target) must form one of the
    three cases of the representation formula, and every node must lie
    on the target quadric to UNIT_TOL.  The grid is origin agnostic:
    only the steps du, dv enter any operator.
    """

    nodes: np.ndarray
    du: float
    dv: float
    metric: str
    domain_signature: str
    target: str

    def __post_init__(self):
        self.du = float(self.du)
        self.dv = float(self.dv)
        self.nodes = _check_grid_nodes(self.nodes, self.du, self.dv)
        case = (self.metric, self.domain_signature, self.target)
        if case not in _CASES:
            raise DomainError(
                f"{case} is not a case of the representation formula")
        defect = np.max(np.abs(lingeo.quadric_defect(self.target, self.nodes)))
        if not defect <= UNIT_TOL:
            raise DomainError(
                f"Gauss map leaves the {self.target} quadric by {defect:.3g}")

    @property
    def shape(self):
        return self.nodes.shape[:2]


@dataclass
class SurfaceGrid:
    """Sampled immersion x(i du, j dv); same grid conventions as above."""

    nodes: np.ndarray
    du: float
    dv: float
    metric: str
    domain_signature: str

    def __post_init__(self):
        self.du = float(self.du)
        self.dv = float(self.dv)
        self.nodes = _check_grid_nodes(self.nodes, self.du, self.dv)
        if self.metric not in (lingeo.EUCLIDEAN, lingeo.LORENTZIAN):
            raise DomainError(f"unknown metric {self.metric!r}")
        if self.domain_signature not in lingeo.DOMAIN_SIGNATURES:
            raise DomainError(
                f"unknown domain signature {self.domain_signature!r}")

    @property
    def shape(self):
        return self.nodes.shape[:2]


def _partials(field, du, dv):
    """d/du and d/dv of a gridded field, O(h^2) including the boundary."""
    f_u = np.gradient(field, du, axis=0, edge_order=2)
    f_v = np.gradient(field, dv, axis=1, edge_order=2)
    return f_u, f_v


def _obstruction(grid):
    """Coefficients of dn + n x (*dn) plus the raw derivatives of n."""
    n = grid.nodes
    n_u, n_v = _partials(n, grid.du, grid.dv)
    star = lingeo.hodge_star(
        lingeo.VectorOneForm(n_u, n_v, grid.domain_signature))
    s_p = n_u + lingeo.cross(grid.metric, n, star.P)
    s_q = n_v + lingeo.cross(grid.metric, n, star.Q)
    return s_p, s_q, n_u, n_v


def _h_field(mean_curvature, shape):
    h = np.asarray(mean_curvature, dtype=float)
    if np.any(np.abs(h) < H_TOL):
        raise MeanCurvatureZeroError(
            "mean curvature vanishes somewhere; the representation "
            "formula divides by H")
    return np.broadcast_to(h, shape)


def kenmotsu_form(grid, mean_curvature):
    """The one-form -(1/2H)(dn + n x (*dn)) as a VectorOneForm field.

    mean_curvature may be a scalar or a per-node field; either way it
    must stay away from zero.  On near-minimal data (see
    near_minimal_mask) the form is well defined but close to zero and
    carries no surface; this function does not police that.
    """
    s_p, s_q, _, _ = _obstruction(grid)
    h = _h_field(mean_curvature, grid.shape)
    scale = (-0.5 / h)[..., None]
    return lingeo.VectorOneForm(scale * s_p, scale * s_q,
                                grid.domain_signature)


def near_minimal_mask(grid, rtol=NEAR_MINIMAL_RTOL):
    """Nodes where dn + n x (*dn) nearly vanishes relative to dn.

    That combination is identically zero exactly when the map is
    conformal with the orientation that belongs to a minimal surface
    (the branch the representation formula excludes), and in particular
    for constant maps, where both sides vanish and the node still counts
    as flagged.  Sizes are Euclidean.
    """
    s_p, s_q, n_u, n_v = _obstruction(grid)
    snorm = np.sqrt(np.sum(s_p * s_p + s_q * s_q, axis=-1))
    dnorm = np.sqrt(np.sum(n_u * n_u + n_v * n_v, axis=-1))
    return snorm <= rtol * dnorm


def _circulation(form, du, dv):
    """Trapezoid circulation of a VectorOneForm around each grid cell.

    Counterclockwise in the (u, v) plane; dividing by the cell area
    turns it into the discrete density of the exterior derivative.
    """
    p, q = form.P, form.Q
    bottom = 0.5 * du * (p[:-1, :-1] + p[1:, :-1])
    right = 0.5 * dv * (q[1:, :-1] + q[1:, 1:])
    top = 0.5 * du * (p[1:, 1:] + p[:-1, 1:])
    left = 0.5 * dv * (q[:-1, 1:] + q[:-1, :-1])
    return bottom + right - top - left


def integrability_residual(grid, mean_curvature):
    """Per-cell size of the discrete exterior derivative of the form.

    Exact Gauss maps of cmc-H surfaces give a closed form, so the
    residual is pure discretization error and falls off like h^2; data
    that is not such a Gauss map leaves an O(1) residual.  Shape is
    (nu - 1, nv - 1), one value per plaquette, normalized by cell area.
    """
    omega = kenmotsu_form(grid, mean_curvature)
    circ = _circulation(omega, grid.du, grid.dv)
    return np.sqrt(np.sum(circ * circ, axis=-1)) / (grid.du * grid.dv)


def harmonicity_residual(grid):
    """Per-node size of the tangential part of the discrete d(*dn).

    Gauss maps of cmc surfaces are harmonic into their target, which
    makes d(*dn) point along n; whatever sticks out tangentially is
    discretization error plus genuine non-harmonicity of the data.
    The projection uses the declared ambient metric, the reported size
    is Euclidean so null tangent directions cannot hide a residual.
    """
    n = grid.nodes
    n_u, n_v = _partials(n, grid.du, grid.dv)
    star = lingeo.hodge_star(
        lingeo.VectorOneForm(n_u, n_v, grid.domain_signature))
    # exterior derivative density of A du + B dv is B_u - A_v
    a_v = np.gradient(star.P, grid.dv, axis=1, edge_order=2)
    b_u = np.gradient(star.Q, grid.du, axis=0, edge_order=2)
    w = b_u - a_v
    nn = lingeo.inner(grid.metric, n, n)
    coef = lingeo.inner(grid.metric, w, n) / nn
    tang = w - coef[..., None] * n
    return np.sqrt(np.sum(tang * tang, axis=-1))


def _integrate_u_first(p, q, du, dv, base):
    x = np.empty_like(p)
    x[0, 0] = base
    if p.shape[0] > 1:
        steps = 0.5 * du * (p[:-1, 0] + p[1:, 0])
        x[1:, 0] = base + np.cumsum(steps, axis=0)
    steps = 0.5 * dv * (q[:, :-1] + q[:, 1:])
    x[:, 1:] = x[:, :1] + np.cumsum(steps, axis=1)
    return x


def _integrate_v_first(p, q, du, dv, base):
    x = np.empty_like(p)
    x[0, 0] = base
    if q.shape[1] > 1:
        steps = 0.5 * dv * (q[0, :-1] + q[0, 1:])
        x[0, 1:] = base + np.cumsum(steps, axis=0)
    steps = 0.5 * du * (p[:-1, :] + p[1:, :])
    x[1:, :] = x[:1, :] + np.cumsum(steps, axis=0)
    return x


@dataclass
class ReconstructionReport:
    """What reconstruct found out while integrating.

    status is "ok" or "warning"; the latter means the integrability
    residual exceeded the threshold and the surface depends on the
    integration path beyond discretization error.  path_gap is the
    largest Euclidean disagreement between the rows-first and the
    columns-first integration.
    """

    status: str
    path_gap: float
    residual: np.ndarray
    residual_threshold: float
    near_minimal_fraction: float

    @property
    def max_residual(self):
        return float(np.max(self.residual)) if self.residual.size else 0.0


def reconstruct(grid, mean_curvature, base_point=None,
                residual_threshold=RESIDUAL_THRESHOLD):
    """Integrate the Kenmotsu form to a surface anchored at base_point.

    Returns (SurfaceGrid, ReconstructionReport).  The surface node
    values come from the rows-first path (along u at the first v row,
    then along v), summed with np.cumsum so repeated runs are bit
    identical; the columns-first path only feeds the path_gap figure.

    The one-sided stencils behind the form leave an O(h^2) kink in the
    outermost grid rows; the surface itself converges everywhere, but
    second differences taken across that frame (fd_geometry curvatures)
    stay O(1) there, so trim a few rows before measuring curvature.
    """
    omega = kenmotsu_form(grid, mean_curvature)
    base = np.zeros(3) if base_point is None else \
        np.asarray(base_point, dtype=float)
    if base.shape != (3,):
        raise DomainError("base_point must be a 3-vector")
    x = _integrate_u_first(omega.P, omega.Q, grid.du, grid.dv, base)
    x_alt = _integrate_v_first(omega.P, omega.Q, grid.du, grid.dv, base)
    gap = float(np.max(np.sqrt(np.sum((x - x_alt) ** 2, axis=-1))))
    circ = _circulation(omega, grid.du, grid.dv)
    residual = np.sqrt(np.sum(circ * circ, axis=-1)) / (grid.du * grid.dv)
    status = "ok" if np.max(residual) <= residual_threshold else "warning"
    report = ReconstructionReport(
        status=status,
        path_gap=gap,
        residual=residual,
        residual_threshold=residual_threshold,
        near_minimal_fraction=float(np.mean(near_minimal_mask(grid))),
    )
    surface = SurfaceGrid(x, grid.du, grid.dv, grid.metric,
                          grid.domain_signature)
    return surface, report


@dataclass
class FdGeometry:
    """Per-node finite difference geometry of a sampled surface.

    first and second are the (2, 2) fundamental form matrices in the
    grid coordinates; mean_curvature is tr(I^-1 II)/2 and
    gauss_curvature is <n,n> det II / det I, so spacelike surfaces in
    the Lorentzian ambient get the intrinsic sign.  Nodes where det I
    falls under the degeneracy cutoff are flagged and carry NaN.
    """

    first: np.ndarray
    second: np.ndarray
    mean_curvature: np.ndarray
    gauss_curvature: np.ndarray
    normal: np.ndarray
    degenerate: np.ndarray


def fd_geometry(surface, orient_to=None, degenerate_tol=DEGENERATE_TOL):
    """Fundamental forms, curvatures and unit normal by differences.

    The default normal is the normalized x_u x x_v in the Euclidean
    case and its negative in the Lorentzian one, matching the
    orientation the closed-form surfaces in this package carry along
    their spacelike profile direction.  Pass orient_to (a per-node or
    constant reference field) to flip the normal toward a known Gauss
    map instead; mean curvature changes sign with the normal, so
    comparisons only make sense once the orientation is pinned.
    """
    metric = surface.metric
    x = surface.nodes
    x_u, x_v = _partials(x, surface.du, surface.dv)
    e = lingeo.inner(metric, x_u, x_u)
    f = lingeo.inner(metric, x_u, x_v)
    g = lingeo.inner(metric, x_v, x_v)
    det_i = e * g - f * f
    degenerate = np.abs(det_i) < degenerate_tol * (1.0 + e * e + f * f + g * g)
    raw = lingeo.cross(metric, x_u, x_v)
    if metric == lingeo.LORENTZIAN:
        raw = -raw
    nn = lingeo.inner(metric, raw, raw)
    with np.errstate(divide="ignore", invalid="ignore"):
        n = raw / np.sqrt(np.abs(nn))[..., None]
    if orient_to is not None:
        ref = np.broadcast_to(np.asarray(orient_to, dtype=float), n.shape)
        flip = np.sum(n * ref, axis=-1) < 0.0
        n = np.where(flip[..., None], -n, n)
    x_uu = np.gradient(x_u, surface.du, axis=0, edge_order=2)
    x_vv = np.gradient(x_v, surface.dv, axis=1, edge_order=2)
    # symmetrized so the two mixed stencils agree on the boundary too
    x_uv = 0.5 * (np.gradient(x_u, surface.dv, axis=1, edge_order=2)
                  + np.gradient(x_v, surface.du, axis=0, edge_order=2))
    h11 = lingeo.inner(metric, n, x_uu)
    h12 = lingeo.inner(metric, n, x_uv)
    h22 = lingeo.inner(metric, n, x_vv)
    with np.errstate(divide="ignore", invalid="ignore"):
        mean = 0.5 * (g * h11 - 2.0 * f * h12 + e * h22) / det_i
        eps = np.sign(nn)
        gauss = eps * (h11 * h22 - h12 * h12) / det_i
    first = np.stack([np.stack([e, f], axis=-1),
                      np.stack([f, g], axis=-1)], axis=-2)
    second = np.stack([np.stack([h11, h12], axis=-1),
                       np.stack([h12, h22], axis=-1)], axis=-2)
    if np.any(degenerate):
        mean = np.where(degenerate, np.nan, mean)
        gauss = np.where(degenerate, np.nan, gauss)
        n = np.where(degenerate[..., None], np.nan, n)
    return FdGeometry(first=first, second=second, mean_curvature=mean,
                      gauss_curvature=gauss, normal=n, degenerate=degenerate)


def companion(surface, mean_curvature, normals=None):
    """Parallel surface x + n/(2H) of a sampled cmc-H surface.

    With the exact normals of a cmc-H surface this is the companion of
    constant Gaussian curvature; by default the normal field comes from
    fd_geometry, pass normals to use closed-form ones instead.
    """
    h = _h_field(mean_curvature, surface.shape)
    if normals is None:
        n = fd_geometry(surface).normal
    else:
        n = np.asarray(normals, dtype=float)
        if n.shape != surface.nodes.shape:
            raise DomainError("normals must match the node array")
    nodes = surface.nodes + n / (2.0 * h)[..., None]
    return SurfaceGrid(nodes, surface.du, surface.dv, surface.metric,
                       surface.domain_signature)


# ---------------------------------------------------------------------------
# interchange formats

def _h_column(mean_curvature, shape):
    if mean_curvature is None:
        return None
    return np.broadcast_to(np.asarray(mean_curvature, dtype=float), shape)


def write_grid_csv(grid, path, mean_curvature=None):
    """Write "u,v,nx,ny,nz[,H]" rows, row major, u = i du and v = j dv.

    Floats are written with repr so reading the file back reproduces
    the grid bit for bit.
    """
    nu, nv = grid.shape
    h = _h_column(mean_curvature, grid.shape)
    lines = ["u,v,nx,ny,nz" + (",H" if h is not None else "")]
    for i in range(nu):
        for j in range(nv):
            cells = [repr(float(i * grid.du)), repr(float(j * grid.dv))]
            cells += [repr(float(c)) for c in grid.nodes[i, j]]
            if h is not None:
                cells.append(repr(float(h[i, j])))
            lines.append(",".join(cells))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_grid_csv(path, metric, domain_signature, target):
    """Read a grid written by write_grid_csv; returns (grid, H or None).

    The case triple is not stored in the CSV, so the caller supplies
    it.  Rows must tile a full rectangular grid with uniform steps; the
    origin is dropped.
    """
    with open(path, "r") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines or lines[0] not in ("u,v,nx,ny,nz", "u,v,nx,ny,nz,H"):
        raise DomainError("expected a u,v,nx,ny,nz[,H] header")
    has_h = lines[0].endswith(",H")
    width = 6 if has_h else 5
    rows = []
    for lineno, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) != width:
            raise DomainError(f"line {lineno}: expected {width} fields, "
                              f"got {len(cells)}: {ln!r}")
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            raise DomainError(f"line {lineno}: non-numeric field in "
                              f"{ln!r}") from None
    data = np.asarray(rows, dtype=float)
    us = data[:, 0]
    nv = int(np.sum(us == us[0]))
    if nv == 0 or data.shape[0] % nv != 0:
        raise DomainError("rows do not tile a rectangular grid")
    nu = data.shape[0] // nv
    grid_u = us.reshape(nu, nv)
    grid_v = data[:, 1].reshape(nu, nv)
    if nu < 2 or nv < 2:
        raise DomainError("grid needs at least two steps per direction")
    du = grid_u[1, 0] - grid_u[0, 0]
    dv = grid_v[0, 1] - grid_v[0, 0]
    expect_u = grid_u[0, 0] + du * np.arange(nu)[:, None]
    expect_v = grid_v[0, 0] + dv * np.arange(nv)[None, :]
    scale = 1.0 + np.max(np.abs(data[:, :2]))
    if (np.max(np.abs(grid_u - expect_u)) > 1e-9 * scale
            or np.max(np.abs(grid_v - expect_v)) > 1e-9 * scale):
        raise DomainError("grid steps are not uniform")
    nodes = data[:, 2:5].reshape(nu, nv, 3)
    h = data[:, 5].reshape(nu, nv) if has_h else None
    return GaussMapGrid(nodes, du, dv, metric, domain_signature, target), h


def write_grid_json(grid, path, mean_curvature=None):
    """Write the self describing kenmotsu-grid/1 document."""
    doc = {
        "schema": GRID_SCHEMA,
        "metric": grid.metric,
        "domain_signature": grid.domain_signature,
        "target": grid.target,
        "du": grid.du,
        "dv": grid.dv,
        "shape": list(grid.shape),
        "nodes": grid.nodes.tolist(),
    }
    h = _h_column(mean_curvature, grid.shape)
    if h is not None:
        doc["mean_curvature"] = h.tolist()
    with open(path, "w", newline="\n") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def read_grid_json(path):
    """Read a kenmotsu-grid/1 document; returns (grid, H or None)."""
    with open(path, "r") as fh:
        doc = json.load(fh)
    if doc.get("schema") != GRID_SCHEMA:
        raise DomainError(f"not a {GRID_SCHEMA} document")
    grid = GaussMapGrid(np.asarray(doc["nodes"], dtype=float),
                        float(doc["du"]), float(doc["dv"]),
                        doc["metric"], doc["domain_signature"],
                        doc["target"])
    h = doc.get("mean_curvature")
    if h is not None:
        h = np.asarray(h, dtype=float)
    return grid, h
