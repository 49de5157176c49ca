"""Command-line driver: generate, period, verify, reconstruct.

Exit codes are part of the contract: 0 success, 1 a verification or
obstruction failure, 2 an empty result, 64 usage (bad flags, bad
config, parameters outside their domain).  Every command is
deterministic given its flags, config file and inputs; reports name
output files by basename only so the documents do not depend on where
they were written.
"""

import argparse
import configparser
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import delaunay_lorentz, elliptic, helicoid, kenmotsu, lingeo, \
    mesh_io, period
from .errors import CmcError

OK = 0
FAIL = 1
EMPTY = 2
USAGE = 64

ENV_OUT = "CMCSURF_OUT"

KIND_FLAGS = {
    "spacelike-timelike": delaunay_lorentz.SPACELIKE_TIMELIKE_AXIS,
    "timelike-timelike": delaunay_lorentz.TIMELIKE_TIMELIKE_AXIS,
    "spacelike-spacelike": delaunay_lorentz.SPACELIKE_SPACELIKE_AXIS,
    "timelike-spacelike-1": delaunay_lorentz.TIMELIKE_SPACELIKE_AXIS_1,
    "timelike-spacelike-2": delaunay_lorentz.TIMELIKE_SPACELIKE_AXIS_2,
    "spacelike-lightlike": delaunay_lorentz.SPACELIKE_LIGHTLIKE_AXIS,
    "timelike-lightlike": delaunay_lorentz.TIMELIKE_LIGHTLIKE_AXIS,
}

# pole-free parameter windows of the default moduli; override with
# --u-range when another modulus moves the poles
_U_WINDOWS = {
    delaunay_lorentz.CS_NS: (1.0, 2.6),
    delaunay_lorentz.SN_DN: (0.4, 1.6),
    delaunay_lorentz.PHI: (1.5, 4.0),
}
_V_WINDOWS = {
    lingeo.TIMELIKE: (0.0, 2.0 * math.pi),
    lingeo.SPACELIKE: (-1.5, 1.5),
    lingeo.LIGHTLIKE: (-1.5, 1.5),
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# configuration


@dataclass
class Config:
    """Defaults shared by the commands; flags override field by field."""

    tolerance: float | None = None
    grid_nu: int = 64
    grid_nv: int = 64
    out_dir: str | None = None
    h: float = -0.5
    figures: bool = True


_CONFIG_KEYS = {"tolerance", "grid_nu", "grid_nv", "out_dir", "h", "figures"}


def load_config(path):
    """Parse an INI-style config with a single [cmcsurf] section."""
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise _UsageError(f"config file not readable: {path}")
    if not parser.has_section("cmcsurf"):
        raise _UsageError(f"{path}: missing [cmcsurf] section")
    section = parser["cmcsurf"]
    unknown = sorted(set(section) - _CONFIG_KEYS)
    if unknown:
        raise _UsageError(f"{path}: unknown config keys {unknown}")
    cfg = Config()
    try:
        if "tolerance" in section:
            cfg.tolerance = section.getfloat("tolerance")
        if "grid_nu" in section:
            cfg.grid_nu = section.getint("grid_nu")
        if "grid_nv" in section:
            cfg.grid_nv = section.getint("grid_nv")
        if "out_dir" in section:
            cfg.out_dir = section.get("out_dir")
        if "h" in section:
            cfg.h = section.getfloat("h")
        if "figures" in section:
            cfg.figures = section.getboolean("figures")
    except ValueError as exc:
        raise _UsageError(f"{path}: {exc}") from None
    _check_config(cfg, origin=path)
    return cfg


def _check_config(cfg, origin="config"):
    if cfg.tolerance is not None and not cfg.tolerance > 0.0:
        raise _UsageError(f"{origin}: tolerance must be > 0")
    if cfg.grid_nu < 2 or cfg.grid_nv < 2:
        raise _UsageError(f"{origin}: grid sizes must be >= 2")
    if cfg.h == 0.0 or not math.isfinite(cfg.h):
        raise _UsageError(f"{origin}: h must be nonzero and finite")


def _resolve(args, cfg):
    """Apply flag and environment overrides, resolve the output dir."""
    if getattr(args, "nu", None) is not None:
        cfg.grid_nu = args.nu
    if getattr(args, "nv", None) is not None:
        cfg.grid_nv = args.nv
    if getattr(args, "tolerance", None) is not None:
        cfg.tolerance = args.tolerance
    if getattr(args, "no_figures", False):
        cfg.figures = False
    _check_config(cfg, origin="flags")
    out_dir = args.out or os.environ.get(ENV_OUT) or cfg.out_dir or "."
    return cfg, out_dir


def _fmt(x):
    return repr(float(x))


def _write_field_csv(field, du, dv, path, offset=0.0):
    """Scalar field over the grid as u,v,value rows (row-major)."""
    lines = ["u,v,value"]
    for i in range(field.shape[0]):
        for j in range(field.shape[1]):
            lines.append(f"{_fmt((i + offset) * du)},"
                         f"{_fmt((j + offset) * dv)},{_fmt(field[i, j])}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _emit(out_dir, written, *names):
    for name in names:
        written.append(name)
        print(f"wrote {os.path.join(out_dir, name)}")


# ---------------------------------------------------------------------------
# generate


def _parse_range(text):
    parts = text.split(":")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected LO:HI, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected LO:HI, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"need LO < HI in {text!r}")
    return lo, hi


def _form_dict(form):
    return {"E": form.E, "F": form.F, "G": form.G}


def cmd_generate_helicoid(args, cfg, out_dir):
    try:
        params = helicoid.HelicoidParams(
            args.mu, args.b, args.H if args.H is not None else cfg.h)
    except CmcError as exc:
        raise _UsageError(str(exc)) from None
    if args.u_range is not None:
        u_range = args.u_range
    elif params.mu < 1.0:
        half = 2.0 * elliptic.complete_K(params.mu)
        u_range = (-half, half)
    else:
        u_range = (-3.0, 3.0)
    v_range = args.v_range or (0.0, 2.0 * math.pi * params.b)

    def evaluate(us, vs):
        x, n, _, pole = helicoid.eval_grid(params, us, vs)
        bad = np.broadcast_to(pole[:, None], x.shape[:2])
        return x, n, bad

    mesh = mesh_io.sample(evaluate, u_range, v_range,
                          cfg.grid_nu, cfg.grid_nv)
    tags = sorted(helicoid.classify(params))
    pitch = helicoid.pitch_radius(params)
    rad = helicoid.radii(params)
    written = []
    mesh_io.export_obj(mesh, os.path.join(out_dir, "helicoid.obj"))
    _emit(out_dir, written, "helicoid.obj")

    rotational = params.c1 == 0.0
    us = np.linspace(u_range[0], u_range[1], cfg.grid_nu)
    x_row, _, _, pole = helicoid.eval_grid(params, us, [v_range[0]])
    curve = None
    if rotational and not np.any(pole):
        curve = mesh_io.ProfileCurve(us, x_row[:, 0, :],
                                     kind="+".join(tags))
        mesh_io.export_profile_csv(
            curve, os.path.join(out_dir, "helicoid_profile.csv"))
        _emit(out_dir, written, "helicoid_profile.csv")

    report = {
        "schema": "generate-report/1",
        "surface": "helicoid",
        "mu": params.mu,
        "b": params.b,
        "mean_curvature": params.H,
        "classification": tags,
        "pitch": pitch.lam,
        "outer_radius": pitch.R,
        "inner_radius": pitch.rho,
        "companion_radii": [rad.companion_inner, rad.companion_outer],
        "grid": {"nu": cfg.grid_nu, "nv": cfg.grid_nv,
                 "u_range": list(u_range), "v_range": list(v_range)},
        "vertices": mesh.vertex_count,
        "faces": mesh.face_count,
        "files": None,
    }
    if cfg.figures:
        from . import figures
        x, _, _, _ = helicoid.eval_grid(params, us, np.linspace(
            v_range[0], v_range[1], cfg.grid_nv))
        figures.surface_png(x, os.path.join(out_dir, "helicoid_surface.png"),
                            title=f"helicoid mu={params.mu} b={params.b}")
        _emit(out_dir, written, "helicoid_surface.png")
        if curve is not None:
            figures.profile_png(
                curve, os.path.join(out_dir, "helicoid_profile.png"))
            _emit(out_dir, written, "helicoid_profile.png")
    written.append("helicoid_report.json")
    report["files"] = sorted(written)
    mesh_io.export_report_json(
        report, os.path.join(out_dir, "helicoid_report.json"))
    print(f"wrote {os.path.join(out_dir, 'helicoid_report.json')}")
    return OK


def cmd_generate_delaunay(args, cfg, out_dir):
    kind = KIND_FLAGS[args.kind]
    info = delaunay_lorentz.KIND_INFO[kind]
    variant = None
    if args.variant == "linear":
        variant = delaunay_lorentz.PHI_LINEAR
    elif args.variant == "sinusoidal":
        variant = delaunay_lorentz.PHI_SINUSOIDAL
    if args.k is not None:
        k2 = args.k * args.k
    elif args.k2 is not None:
        k2 = args.k2
    elif variant == delaunay_lorentz.PHI_LINEAR:
        k2 = 0.0
    else:
        raise _UsageError("generate delaunay: need --k or --k2")
    h_target = args.H if args.H is not None else cfg.h
    if h_target == 0.0 or not math.isfinite(h_target):
        raise _UsageError("generate delaunay: H must be nonzero and finite")
    # the family is built at mean curvature -1/2; a homothety moves it
    scale = -0.5 / h_target
    u_range = args.u_range or _U_WINDOWS[info.family]
    v_range = args.v_range or _V_WINDOWS[info.axis]

    def evaluate(us, vs):
        x = delaunay_lorentz.eval_surface(
            kind, k2, us[:, None], vs[None, :],
            variant=variant, c_sign=args.c_sign)
        n = delaunay_lorentz.gauss_map(
            kind, k2, us[:, None], vs[None, :],
            variant=variant, c_sign=args.c_sign)
        return scale * x, n

    try:
        mesh = mesh_io.sample(evaluate, u_range, v_range,
                              cfg.grid_nu, cfg.grid_nv)
        us = np.linspace(u_range[0], u_range[1], cfg.grid_nu)
        x_prof = scale * delaunay_lorentz.eval_surface(
            kind, k2, us, np.zeros_like(us),
            variant=variant, c_sign=args.c_sign)
    except CmcError as exc:
        raise _UsageError(f"generate delaunay: {exc}") from None
    written = []
    mesh_io.export_obj(mesh, os.path.join(out_dir, "delaunay.obj"))
    _emit(out_dir, written, "delaunay.obj")
    finite = np.all(np.isfinite(x_prof), axis=-1)
    curve = mesh_io.ProfileCurve(us[finite], x_prof[finite], kind=kind)
    mesh_io.export_profile_csv(
        curve, os.path.join(out_dir, "delaunay_profile.csv"))
    _emit(out_dir, written, "delaunay_profile.csv")
    report = {
        "schema": "generate-report/1",
        "surface": "delaunay",
        "kind": kind,
        "family": info.family,
        "axis": info.axis,
        "surface_character": info.surface_character,
        "domain_signature": info.domain_signature,
        "gauss_map_target": info.target,
        "k2": k2,
        "k": math.sqrt(k2) if k2 >= 0.0 else None,
        "variant": variant,
        "c_sign": args.c_sign,
        "mean_curvature": h_target,
        "grid": {"nu": cfg.grid_nu, "nv": cfg.grid_nv,
                 "u_range": list(u_range), "v_range": list(v_range)},
        "vertices": mesh.vertex_count,
        "faces": mesh.face_count,
        "files": None,
    }
    if cfg.figures:
        from . import figures
        vs = np.linspace(v_range[0], v_range[1], cfg.grid_nv)
        x = scale * delaunay_lorentz.eval_surface(
            kind, k2, us[:, None], vs[None, :],
            variant=variant, c_sign=args.c_sign)
        figures.surface_png(x, os.path.join(out_dir, "delaunay_surface.png"),
                            title=f"{args.kind} k2={k2}")
        figures.profile_png(
            curve, os.path.join(out_dir, "delaunay_profile.png"))
        _emit(out_dir, written, "delaunay_surface.png",
              "delaunay_profile.png")
    written.append("delaunay_report.json")
    report["files"] = sorted(written)
    mesh_io.export_report_json(
        report, os.path.join(out_dir, "delaunay_report.json"))
    print(f"wrote {os.path.join(out_dir, 'delaunay_report.json')}")
    return OK


# ---------------------------------------------------------------------------
# period


def cmd_period(args, cfg, out_dir):
    tolerance = cfg.tolerance if cfg.tolerance is not None else 1e-8
    try:
        if args.target is not None:
            try:
                target = Fraction(args.target)
            except (ValueError, ZeroDivisionError):
                raise _UsageError(
                    f"period: cannot parse target {args.target!r} "
                    "as q/p") from None
            solutions = period.solve_b(args.mu, target.numerator,
                                       target.denominator)
            targets = [target]
        else:
            result = period.cylinder_search(args.mu, p_max=args.search)
            solutions = list(result.solutions)
            targets = list(result.targets)
    except CmcError as exc:
        raise _UsageError(f"period: {exc}") from None
    gaps = [period.verify_closure(s, grid=(cfg.grid_nu, cfg.grid_nv))
            for s in solutions]
    docs = [period.report_dict(s, g.companion)
            for s, g in zip(solutions, gaps)]
    report = {
        "schema": "period-report/1",
        "mu": args.mu,
        "targets": [f"{t.numerator}/{t.denominator}" for t in targets],
        "tolerance": tolerance,
        "solutions": docs,
        "pass": bool(solutions)
        and all(g.companion < tolerance for g in gaps),
    }
    written = []
    mesh_io.export_report_json(
        report, os.path.join(out_dir, "period_report.json"))
    _emit(out_dir, written, "period_report.json")
    if cfg.figures:
        from . import figures
        bs = np.linspace(1.0 + 1e-3, 1.0 / args.mu - 1e-3, 400)
        vals = np.array([period.phi(args.mu, b) + 0.5 for b in bs])
        figures.phi_png(bs, vals, [float(t) for t in targets], solutions,
                        os.path.join(out_dir, "period_phi.png"),
                        title=f"mu = {args.mu}")
        _emit(out_dir, written, "period_phi.png")
    if not solutions:
        print("no closure solutions in the scanned parameter range")
        return EMPTY
    for sol, gap in zip(solutions, gaps):
        print(f"q/p = {sol.q}/{sol.p}: b = {sol.b:.6f} h = {sol.h:.6f} "
              f"m = {sol.m} coorientable = {sol.coorientable} "
              f"closure = {gap.companion:.3e}")
    return OK if report["pass"] else FAIL


# ---------------------------------------------------------------------------
# verify suites


def _surface_patch_h(x, n, h, domain_signature, metric):
    grid = kenmotsu.SurfaceGrid(x, h, h, metric, domain_signature)
    geometry = kenmotsu.fd_geometry(grid, orient_to=n)
    return float(geometry.mean_curvature[2, 2])


def _helicoid_patch_h(params, u0, v0, h=1e-3):
    us = u0 + h * np.arange(-2, 3)
    vs = v0 + h * np.arange(-2, 3)
    x, n, _, _ = helicoid.eval_grid(params, us, vs)
    return _surface_patch_h(x, n, h, lingeo.RIEMANNIAN, lingeo.EUCLIDEAN)


def _delaunay_patch_h(kind, k2, u0, v0, h=1e-3):
    us = u0 + h * np.arange(-2, 3)
    vs = v0 + h * np.arange(-2, 3)
    x = delaunay_lorentz.eval_surface(kind, k2, us[:, None], vs[None, :])
    n = delaunay_lorentz.gauss_map(kind, k2, us[:, None], vs[None, :])
    signature = delaunay_lorentz.KIND_INFO[kind].domain_signature
    return _surface_patch_h(x, n, h, signature, lingeo.LORENTZIAN)


def _suite_elliptic():
    us = np.linspace(-3.0, 3.0, 61)
    worst_sc = worst_d = 0.0
    for k in (0.0, 0.3, 0.7, 0.95):
        sn, cn, dn = elliptic.jacobi_sncndn(us, k)
        worst_sc = max(worst_sc,
                       float(np.max(np.abs(sn * sn + cn * cn - 1.0))))
        worst_d = max(worst_d, float(np.max(
            np.abs(dn * dn + k * k * sn * sn - 1.0))))
    worst_leg = 0.0
    for k in (0.2, 0.5, 0.8):
        kp = math.sqrt(1.0 - k * k)
        value = elliptic.complete_E(k) * elliptic.complete_K(kp) \
            + elliptic.complete_E(kp) * elliptic.complete_K(k) \
            - elliptic.complete_K(k) * elliptic.complete_K(kp)
        worst_leg = max(worst_leg, abs(value - math.pi / 2.0))
    worst_pi = 0.0
    for k in (0.3, 0.8):
        for ph in np.linspace(-2.0, 2.0, 9):
            worst_pi = max(worst_pi, abs(
                elliptic.ellint_Pi(ph, 0.0, k) - elliptic.ellint_F(ph, k)))
    return [
        ("squares sn2+cn2", worst_sc, 1e-11),
        ("squares dn2+k2sn2", worst_d, 1e-11),
        ("legendre relation", worst_leg, 1e-11),
        ("third kind at n=0", worst_pi, 1e-11),
    ]


def _suite_helicoid():
    worst_h = 0.0
    for mu, b, u0, v0 in ((0.5, 1.3, 0.2, 0.4), (0.3, 1.05, -0.6, 1.1),
                          (0.8, 1.2, 0.5, -0.2)):
        params = helicoid.HelicoidParams(mu, b)
        worst_h = max(worst_h,
                      abs(_helicoid_patch_h(params, u0, v0) + 0.5))
    worst_rt = 0.0
    for mu, b in ((0.5, 1.3), (0.2, 1.8), (0.9, 1.05), (0.0, 1.0)):
        params = helicoid.HelicoidParams(mu, b)
        pr = helicoid.pitch_radius(params)
        back = helicoid.params_from_pitch_radius(pr.lam, pr.R)
        worst_rt = max(worst_rt, abs(back.mu - mu), abs(back.b - b))
    params = helicoid.HelicoidParams(0.5, 1.3)
    qs = np.array([abs(4.0 * params.H * helicoid.fundamental_forms(
        params, u, rescaled=False).hopf)
        for u in np.linspace(-2.0, 2.0, 41)])
    expected = params.b ** 2 * (1.0 - params.mu ** 2)
    return [
        ("mean curvature -1/2", worst_h, 1e-6),
        ("pitch radius round trip", worst_rt, 1e-12),
        ("hopf coefficient constant", float(np.std(qs)), 1e-8),
        ("hopf magnitude", float(np.max(np.abs(qs - expected))), 1e-10),
    ]


def _suite_kenmotsu():
    h = 1e-3
    us = 0.7 + h * np.arange(-2, 3)
    vs = 0.2 + h * np.arange(-2, 3)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    x = np.stack([np.cos(uu), np.sin(uu), vv], axis=-1)
    n = np.stack([np.cos(uu), np.sin(uu), np.zeros_like(uu)], axis=-1)
    cylinder_h = abs(_surface_patch_h(x, n, h, lingeo.RIEMANNIAN,
                                      lingeo.EUCLIDEAN) + 0.5)
    us = np.linspace(0.0, 1.5, 65)
    vs = np.linspace(-0.75, 0.75, 65)
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    sech = 1.0 / np.cosh(vv)
    nodes = np.stack([np.cos(uu) * sech, np.sin(uu) * sech,
                      np.tanh(vv)], axis=-1)
    gmap = kenmotsu.GaussMapGrid(nodes, us[1] - us[0], vs[1] - vs[0],
                                 lingeo.EUCLIDEAN, lingeo.RIEMANNIAN,
                                 lingeo.SPHERE)
    surface, rep = kenmotsu.reconstruct(gmap, -0.5)
    wanted = 2.0 * (nodes - nodes[:1, :1])
    got = surface.nodes - surface.nodes[:1, :1]
    sphere_gap = float(np.max(np.abs(got - wanted)))
    return [
        ("cylinder mean curvature", cylinder_h, 1e-6),
        ("sphere chart reconstruction", sphere_gap, 1e-2),
        ("sphere integrability residual", rep.max_residual, 5e-2),
    ]


def _suite_delaunay():
    k2 = 0.36
    us = np.linspace(0.6, 2.9, 40)
    zero = np.zeros_like(us)
    left = delaunay_lorentz.eval_surface(
        delaunay_lorentz.SPACELIKE_TIMELIKE_AXIS, k2, us, zero)
    right = delaunay_lorentz.eval_surface(
        delaunay_lorentz.TIMELIKE_SPACELIKE_AXIS_1, k2, us, zero)
    reflection = float(np.max(np.abs(left[:, [2, 1, 0]] - right)))
    worst_h = max(
        abs(_delaunay_patch_h(
            delaunay_lorentz.SPACELIKE_TIMELIKE_AXIS, k2, 1.8, 0.3) + 0.5),
        abs(_delaunay_patch_h(
            delaunay_lorentz.TIMELIKE_SPACELIKE_AXIS_2, k2, 0.9, 0.3) + 0.5))
    residual = float(delaunay_lorentz.profile_residual(
        delaunay_lorentz.SPACELIKE_TIMELIKE_AXIS, k2,
        np.linspace(1.0, 2.6, 25), h=1e-5))
    return [
        ("profile reflection", reflection, 1e-10),
        ("mean curvature -1/2", worst_h, 1e-5),
        ("harmonic map equation", residual, 1e-8),
    ]


def _suite_period():
    solutions = period.solve_b(0.5, 2, 1)
    if len(solutions) == 2:
        bs = sorted(s.b for s in solutions)
        roots = max(abs(bs[0] - 1.07213), abs(bs[1] - 1.99434))
    else:
        roots = math.inf
    closure = max((period.verify_closure(s).companion for s in solutions),
                  default=math.inf)
    params = helicoid.HelicoidParams(0.5, 1.3)
    qs = period.quasi_shift(params)
    big_k = elliptic.complete_K(0.5)
    us = np.array([0.15, 0.4, 0.9])
    vs = np.array([-0.3, 0.2, 0.75])
    _, _, c0, _ = helicoid.eval_grid(params, us, vs)
    _, _, c1, _ = helicoid.eval_grid(params, us + 2.0 * big_k, vs)
    rot = np.array([
        [math.cos(qs.rotation), -math.sin(qs.rotation), 0.0],
        [math.sin(qs.rotation), math.cos(qs.rotation), 0.0],
        [0.0, 0.0, 1.0]])
    scale = -1.0 / (2.0 * params.H)
    predicted = c0 @ rot.T + np.array([0.0, 0.0, qs.vertical * scale])
    rigid = float(np.max(np.abs(c1 - predicted)))
    return [
        ("reference roots mu=1/2 target 2", roots, 5e-5),
        ("companion closure", closure, 1e-8),
        ("screw step rigidity", rigid, 1e-10),
    ]


SUITES = {
    "elliptic": _suite_elliptic,
    "helicoid": _suite_helicoid,
    "kenmotsu": _suite_kenmotsu,
    "delaunay": _suite_delaunay,
    "period": _suite_period,
}


def cmd_verify(args, cfg, out_dir):
    names = [args.suite] if args.suite else list(SUITES)
    rows = []
    for name in names:
        for check, value, default_tol in SUITES[name]():
            tol = cfg.tolerance if cfg.tolerance is not None else default_tol
            ok = bool(value < tol)
            rows.append({"suite": name, "check": check, "value": value,
                         "tolerance": tol, "pass": ok})
            print(f"{'PASS' if ok else 'FAIL'} {name}.{check}: "
                  f"{value:.3e} (tolerance {tol:.1e})")
    report = {
        "schema": "verify-summary/1",
        "results": rows,
        "pass": all(row["pass"] for row in rows),
    }
    path = os.path.join(out_dir, "verify_report.json")
    mesh_io.export_report_json(report, path)
    print(f"wrote {path}")
    failed = [row for row in rows if not row["pass"]]
    for row in failed:
        print(f"violated: {row['suite']}.{row['check']} = "
              f"{row['value']:.3e} >= {row['tolerance']:.1e}",
              file=sys.stderr)
    return FAIL if failed else OK


# ---------------------------------------------------------------------------
# reconstruct


def cmd_reconstruct(args, cfg, out_dir):
    path = args.input
    try:
        if path.endswith(".json"):
            grid, stored_h = kenmotsu.read_grid_json(path)
        elif path.endswith(".csv"):
            grid, stored_h = kenmotsu.read_grid_csv(
                path, args.metric, args.signature, args.target)
        else:
            raise _UsageError(
                f"reconstruct: unrecognized input format: {path} "
                "(expected .json or .csv)")
    except OSError as exc:
        raise _UsageError(f"reconstruct: cannot read {path}: {exc}") \
            from None
    except CmcError as exc:
        raise _UsageError(f"reconstruct: {path}: {exc}") from None
    if args.H is not None:
        mean_curvature = args.H
    elif stored_h is not None:
        mean_curvature = stored_h
    else:
        mean_curvature = cfg.h
    if np.any(np.asarray(mean_curvature) == 0.0):
        raise _UsageError("reconstruct: mean curvature must be nonzero")
    if bool(np.all(kenmotsu.near_minimal_mask(grid))):
        print("error: the surface form dn + n x (*dn) vanishes on the "
              "whole grid; this Gauss map belongs to a minimal surface "
              "and the mean-curvature representation cannot recover it",
              file=sys.stderr)
        return FAIL
    # exact data leaves an O(h^2) residual, so the default bar scales
    # with the step; only data the grid cannot represent trips it
    threshold = args.threshold
    if threshold is None:
        threshold = 25.0 * (grid.du ** 2 + grid.dv ** 2)
    surface, rep = kenmotsu.reconstruct(grid, mean_curvature,
                                        residual_threshold=threshold)
    harmonicity = kenmotsu.harmonicity_residual(grid)
    nu, nv = surface.shape
    mesh = mesh_io.sample(lambda us, vs: (surface.nodes, grid.nodes),
                          (0.0, (nu - 1) * surface.du),
                          (0.0, (nv - 1) * surface.dv), nu, nv)
    written = []
    mesh_io.export_obj(mesh, os.path.join(out_dir, "reconstructed.obj"))
    _write_field_csv(rep.residual, surface.du, surface.dv,
                     os.path.join(out_dir, "reconstruct_integrability.csv"),
                     offset=0.5)
    _write_field_csv(harmonicity, surface.du, surface.dv,
                     os.path.join(out_dir, "reconstruct_harmonicity.csv"))
    _emit(out_dir, written, "reconstructed.obj",
          "reconstruct_integrability.csv", "reconstruct_harmonicity.csv")
    if cfg.figures:
        from . import figures
        figures.residual_png(
            rep.residual, surface.du, surface.dv,
            os.path.join(out_dir, "reconstruct_residual.png"),
            title="integrability residual")
        _emit(out_dir, written, "reconstruct_residual.png")
    written.append("reconstruct_report.json")
    report = {
        "schema": "reconstruct-report/1",
        "status": rep.status,
        "path_gap": rep.path_gap,
        "max_integrability_residual": rep.max_residual,
        "residual_threshold": rep.residual_threshold,
        "max_harmonicity_residual": float(np.max(harmonicity)),
        "near_minimal_fraction": rep.near_minimal_fraction,
        "grid": {"nu": nu, "nv": nv, "du": surface.du, "dv": surface.dv},
        "files": sorted(written),
    }
    mesh_io.export_report_json(
        report, os.path.join(out_dir, "reconstruct_report.json"))
    print(f"wrote {os.path.join(out_dir, 'reconstruct_report.json')}")
    print(f"status {rep.status}: path gap {rep.path_gap:.3e}, "
          f"max residual {rep.max_residual:.3e}")
    return OK


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = _Parser(prog="cmcsurf", description=__doc__.split("\n")[0])
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="FILE",
                        help="INI config with a [cmcsurf] section")
    common.add_argument("--out", metavar="DIR",
                        help=f"output directory (else ${ENV_OUT}, "
                             "config out_dir, or .)")
    common.add_argument("--no-figures", action="store_true",
                        help="skip PNG rendering")
    grid = _Parser(add_help=False)
    grid.add_argument("--nu", type=int, metavar="N",
                      help="grid samples in u (default from config, 64)")
    grid.add_argument("--nv", type=int, metavar="N",
                      help="grid samples in v (default from config, 64)")
    tol = _Parser(add_help=False)
    tol.add_argument("--tolerance", type=float, metavar="TOL",
                     help="override every tolerance with TOL")

    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    gen = sub.add_parser("generate", help="sample a surface to OBJ",
                         parents=[])
    gen_sub = gen.add_subparsers(dest="surface", parser_class=_Parser)
    hel = gen_sub.add_parser("helicoid", parents=[common, grid],
                             help="screw-motion-invariant cmc surface")
    hel.add_argument("--mu", type=float, required=True,
                     help="modulus in [0, 1]")
    hel.add_argument("--b", type=float, required=True,
                     help="family parameter in [1, 1/mu]")
    hel.add_argument("--H", type=float, help="mean curvature (default -1/2)")
    hel.add_argument("--u-range", type=_parse_range, metavar="LO:HI")
    hel.add_argument("--v-range", type=_parse_range, metavar="LO:HI")
    hel.set_defaults(func=cmd_generate_helicoid)
    dela = gen_sub.add_parser("delaunay", parents=[common, grid],
                              help="rotational cmc surface in Minkowski "
                                   "3-space")
    dela.add_argument("--kind", required=True, choices=sorted(KIND_FLAGS),
                      help="surface/axis causal characters")
    mod = dela.add_mutually_exclusive_group()
    mod.add_argument("--k", type=float, help="modulus k > 0")
    mod.add_argument("--k2", type=float,
                     help="signed squared modulus (negative allowed)")
    dela.add_argument("--variant", choices=["linear", "sinusoidal"],
                      help="lightlike-axis profile variant")
    dela.add_argument("--c-sign", type=int, choices=[1, -1], default=1,
                      help="branch sign of the (s, c) profile pair")
    dela.add_argument("--H", type=float, help="mean curvature (default -1/2)")
    dela.add_argument("--u-range", type=_parse_range, metavar="LO:HI")
    dela.add_argument("--v-range", type=_parse_range, metavar="LO:HI")
    dela.set_defaults(func=cmd_generate_delaunay)

    per = sub.add_parser("period", parents=[common, grid, tol],
                         help="solve the closing condition at fixed mu")
    per.add_argument("--mu", type=float, required=True,
                     help="modulus in (0, 1)")
    what = per.add_mutually_exclusive_group(required=True)
    what.add_argument("--target", metavar="Q/P",
                      help="rational closure target")
    what.add_argument("--search", type=int, metavar="P_MAX",
                      help="sweep all attainable targets with p <= P_MAX")
    per.set_defaults(func=cmd_period)

    ver = sub.add_parser("verify", parents=[common, tol],
                         help="run the built-in invariant suites")
    ver.add_argument("--suite", choices=sorted(SUITES),
                     help="run one suite only (default: all)")
    ver.set_defaults(func=cmd_verify)

    rec = sub.add_parser("reconstruct", parents=[common],
                         help="integrate a surface from a sampled Gauss map")
    rec.add_argument("--input", required=True, metavar="FILE",
                     help="kenmotsu-grid/1 JSON or u,v,nx,ny,nz[,H] CSV")
    rec.add_argument("--H", type=float,
                     help="mean curvature (default: stored value, else "
                          "config h)")
    rec.add_argument("--threshold", type=float, metavar="R",
                     help="integrability residual above R means warning "
                          "(default scales with the grid step squared)")
    rec.add_argument("--metric", choices=[lingeo.EUCLIDEAN,
                                          lingeo.LORENTZIAN],
                     default=lingeo.EUCLIDEAN,
                     help="ambient metric for CSV input")
    rec.add_argument("--signature", choices=list(lingeo.DOMAIN_SIGNATURES),
                     default=lingeo.RIEMANNIAN,
                     help="domain signature for CSV input")
    rec.add_argument("--target", choices=[lingeo.SPHERE, lingeo.HYPERBOLOID,
                                          lingeo.DE_SITTER],
                     default=lingeo.SPHERE,
                     help="Gauss map target quadric for CSV input")
    rec.set_defaults(func=cmd_reconstruct)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        func = getattr(args, "func", None)
        if func is None:
            raise _UsageError(
                "a command is required; see cmcsurf --help")
        cfg = load_config(args.config) if args.config else Config()
        cfg, out_dir = _resolve(args, cfg)
        os.makedirs(out_dir, exist_ok=True)
        return func(args, cfg, out_dir)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except CmcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
