"""Helicoidal constant mean curvature surfaces in Euclidean 3-space.

The family is parametrized by (mu, b) in the region 0 <= mu <= 1,
1 <= b <= 1/mu, plus the mean curvature H != 0.  With a = mu*b,

    c1 = sqrt((1 - mu^2 b^2)(b^2 - 1)),   c2 = a^2 + b^2 - 1,

the surface, its Gauss map n and the parallel companion
x_check = x + n/(2H) are assembled from the profile data

    n0(u)      = ( sqrt(1 - mu^2 b^2 sn^2),  -mu b sn )            (unit)
    x0_check(u)= ( mu b (b cn dn - i c1 sn)/sqrt(1 - mu^2 b^2 sn^2),
                   (b - 1/b) u - b E(am(u, mu), mu) )
    g(u)       = (c1/b) Pi(am(u, mu), mu^2 b^2, mu)

as -2H x = rot(v/b) rot(g) { n0 + x0_check } + (0, c1 v / b), where
rot(t) multiplies the first (complex) slot by e^{it} and pairs
(complex, real) are read as points of R^3 = C x R.  All elliptic data is
taken at modulus mu; the screw motion u = const advances v.

Coordinates here are the "unit modulus speed" ones: one u-quasiperiod is
2K(mu).  The classical conformal coordinates differ by the factor b,
(u, v) = b (u_conf, v_conf); fundamental_forms can report either flavor.

Degenerate corners: mu = 0 is the circular cylinder (b collapses to a
reparametrization), (mu, b) = (1, 1) the round sphere of radius 1/|H|.
On the boundary mu b = 1 the companion factor 1/sqrt(1 - mu^2 b^2 sn^2)
blows up where sn^2 = 1; those isolated u are flagged as poles of
x_check (the companion front's cuspidal edge locus).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import elliptic, lingeo
from .errors import (BoundaryParameterError, DegenerateError, DomainError,
                     MeanCurvatureZeroError, PoleError)

# sn^2 window (in 1 - mu^2 b^2 sn^2) treated as the companion pole
POLE_TOL = 1e-12

# classification tolerance for boundary parameter detection
_EDGE_TOL = 1e-12

CYLINDER = "cylinder"
SPHERE = "sphere"
UNDULOID = "unduloid"
NODOID = "nodoid"
GENERIC_HELICOID = "generic_helicoid"
ZERO_INNER_RADIUS = "zero_inner_radius"


@dataclass(frozen=True)
class HelicoidParams:
    """Point (mu, b) of the parameter region, with mean curvature H."""

    mu: float
    b: float
    H: float = -0.5

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "H", float(self.H))
        if not 0.0 <= self.mu <= 1.0:
            raise DomainError(f"mu must lie in [0, 1], got {self.mu}")
        if self.b < 1.0:
            raise DomainError(f"b must be >= 1, got {self.b}")
        if self.mu > 0.0 and self.mu * self.b > 1.0 + 1e-15:
            raise DomainError(
                f"(mu, b) = ({self.mu}, {self.b}) lies outside mu*b <= 1")
        if self.H == 0.0 or not math.isfinite(self.H):
            raise MeanCurvatureZeroError("helicoid family needs H != 0")

    @property
    def a(self):
        return self.mu * self.b

    @property
    def c1(self):
        # guard tiny negatives from roundoff at the boundary
        v = (1.0 - (self.mu * self.b) ** 2) * (self.b ** 2 - 1.0)
        return math.sqrt(max(v, 0.0))

    @property
    def c2(self):
        return self.a ** 2 + self.b ** 2 - 1.0


@dataclass
class SurfaceFrame:
    """Surface point with its Gauss map and companion point.

    n0 and x0_check are the (complex, real) profile pairs before the
    screw phase is applied; g_val is the phase correction g(u).
    """

    x: np.ndarray
    n: np.ndarray
    x_check: np.ndarray
    g_val: float
    n0: tuple
    x0_check: tuple
    x_check_pole: bool = False


@dataclass(frozen=True)
class PitchRadius:
    """Screw pitch and the two radii of the helicoid's bounding cylinders."""

    lam: float
    R: float
    rho: float


@dataclass(frozen=True)
class Radii:
    """Axis distances attained by the surface and its companion."""

    inner: float
    outer: float
    companion_inner: float
    companion_outer: float


@dataclass(frozen=True)
class QuasiPeriods:
    """Data of one u-step by 2K(mu).

    g_jump: increment of the phase g; vertical_jump: increment of the
    third coordinate of -2H x_check; K, E, Pi are the complete integrals
    entering them (Pi with characteristic mu^2 b^2).
    """

    g_jump: float
    vertical_jump: float
    K: float
    E: float
    Pi: float


def _pieces(p, u, mirror=False):
    """Profile data at u: elliptic values, phase g, and the (c, r) pairs."""
    mu, b = p.mu, p.b
    u = np.asarray(u, dtype=float)
    sn, cn, dn = elliptic.jacobi_sncndn(u, mu)
    amu = elliptic.jacobi_am(u, mu)
    e_am = elliptic.ellint_E(amu, mu)
    c1 = p.c1
    if c1 > 0.0:
        g = (c1 / b) * elliptic.ellint_Pi(amu, mu * mu * b * b, mu)
    else:
        # rotational boundary (unduloid / nodoid / sphere): no phase drift
        g = np.zeros_like(u)
    if mirror:
        # the gamma = +a sn branch; a rigid motion of the base surface
        sn, cn = -sn, -cn
    n0c2 = 1.0 - (mu * b) ** 2 * sn * sn
    pole = n0c2 < POLE_TOL
    n0c = np.sqrt(np.maximum(n0c2, 0.0))
    n0r = -mu * b * sn
    with np.errstate(divide="ignore", invalid="ignore"):
        xc0c = mu * b * (b * cn * dn - 1j * c1 * sn) / np.where(pole, np.nan, n0c)
    xc0r = (b - 1.0 / b) * u - b * e_am
    return sn, cn, dn, g, n0c, n0r, xc0c, xc0r, pole


def eval_grid(p, us, vs, mirror=False):
    """Evaluate x, n, x_check on the tensor grid us x vs.

    Returns (x, n, x_check, pole) with shapes (nu, nv, 3) and (nu,) for
    the pole mask; x and x_check are NaN on pole rows (mu b = 1 only).
    """
    us = np.atleast_1d(np.asarray(us, dtype=float))
    vs = np.atleast_1d(np.asarray(vs, dtype=float))
    sn, cn, dn, g, n0c, n0r, xc0c, xc0r, pole = _pieces(p, us, mirror=mirror)
    b, c1, H = p.b, p.c1, p.H
    scale = -1.0 / (2.0 * H)
    phase = np.exp(1j * (g[:, None] + vs[None, :] / b))
    xc = phase * (n0c + xc0c)[:, None]
    xr = (n0r + xc0r)[:, None] + (c1 / b) * vs[None, :]
    nc = phase * n0c[:, None]
    ccc = phase * xc0c[:, None]
    ccr = xc0r[:, None] + (c1 / b) * vs[None, :]
    x = scale * lingeo.from_complex_pair(xc, xr)
    n = lingeo.from_complex_pair(nc, np.broadcast_to(n0r[:, None], nc.shape))
    x_check = scale * lingeo.from_complex_pair(ccc, ccr)
    if np.any(pole):
        x[pole, :, :] = np.nan
        x_check[pole, :, :] = np.nan
    return x, n, x_check, pole


def eval_frame(p, u, v, mirror=False):
    """Surface frame at a single parameter point.

    Raises PoleError when (mu b = 1, sn^2 = 1) makes the companion factor
    1/sqrt(1 - mu^2 b^2 sn^2) blow up; x and n have no separate formula
    there, so the whole frame is refused.
    """
    u = float(u)
    v = float(v)
    sn, cn, dn, g, n0c, n0r, xc0c, xc0r, pole = _pieces(p, np.asarray(u), mirror=mirror)
    if bool(pole):
        raise PoleError(
            f"companion pole at u = {u}: mu*b = 1 and sn^2 = 1 "
            "(cuspidal edge of the parallel front)")
    b, c1, H = p.b, p.c1, p.H
    scale = -1.0 / (2.0 * H)
    phase = complex(np.exp(1j * (float(g) + v / b)))
    n0c = float(n0c)
    n0r = float(n0r)
    xc0c = complex(xc0c)
    xc0r = float(xc0r)
    x = scale * lingeo.from_complex_pair(phase * (n0c + xc0c), n0r + xc0r + c1 * v / b)
    n = lingeo.from_complex_pair(phase * n0c, n0r)
    x_check = scale * lingeo.from_complex_pair(phase * xc0c, xc0r + c1 * v / b)
    return SurfaceFrame(x=x, n=n, x_check=x_check, g_val=float(g),
                        n0=(n0c, n0r), x0_check=(xc0c, xc0r))


def gauss_map(p, u, v, mirror=False):
    """Unit normal alone; cheaper than eval_frame and always finite."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    scalar = u.ndim == 0 and v.ndim == 0
    uu = np.atleast_1d(u)
    sn, cn, dn, g, n0c, n0r, _, _, _ = _pieces(p, uu, mirror=mirror)
    phase = np.exp(1j * (g + np.asarray(v) / p.b))
    out = lingeo.from_complex_pair(phase * n0c, np.broadcast_to(n0r, phase.shape))
    return out[0] if scalar else out


def g_phase(p, u):
    """Phase correction g(u); identically 0 on the rotational boundary."""
    u = np.asarray(u, dtype=float)
    if p.c1 == 0.0:
        return np.zeros_like(u) if u.ndim else 0.0
    amu = elliptic.jacobi_am(u, p.mu)
    return (p.c1 / p.b) * elliptic.ellint_Pi(amu, (p.mu * p.b) ** 2, p.mu)


# ---------------------------------------------------------------------------
# fundamental forms


@dataclass(frozen=True)
class FormCoefficients:
    """Symmetric bilinear form E du^2 + 2 F du dv + G dv^2."""

    E: float
    F: float
    G: float

    def matrix(self):
        return np.array([[self.E, self.F], [self.F, self.G]])

    def det(self):
        return self.E * self.G - self.F * self.F


@dataclass(frozen=True)
class FundamentalForms:
    """First/second/third forms of x, Hopf coefficient, companion forms.

    hopf is the coefficient q in q (du + i dv)^2; the companion second
    form uses the shared Gauss map n as its normal.  rescaled=True means
    the coordinates of eval_frame; False the conformal ones smaller by
    the factor b (coefficients of I, III, companion forms then scale by
    b^2, the Hopf coefficient likewise).
    """

    I: FormCoefficients
    II: FormCoefficients
    III: FormCoefficients
    hopf: complex
    companion_I: FormCoefficients
    companion_II: FormCoefficients
    rescaled: bool


def fundamental_forms(p, u, rescaled=True):
    """Coefficient set at profile parameter u (forms are v-independent)."""
    mu, b, H = p.mu, p.b, p.H
    a, c1, c2 = p.a, p.c1, p.c2
    sn, cn, dn = elliptic.jacobi_sncndn(float(u), mu)
    # conformal-coordinate coefficients first; the conformal factor is
    # (a cn + b dn)^2 on this branch and (a cn - b dn)^2 on the mirror one
    lam2 = (a * cn + b * dn) ** 2
    E_I = lam2 / (4.0 * H * H)
    E_II = H * E_I + (c2 - 1.0) / (4.0 * H)
    G_II = H * E_I - (c2 - 1.0) / (4.0 * H)
    F_II = c1 / (2.0 * H)
    s2 = a * a * sn * sn
    I = FormCoefficients(E_I, 0.0, E_I)
    II = FormCoefficients(E_II, F_II, G_II)
    III = FormCoefficients(c2 - s2, c1, 1.0 - s2)
    w = math.sqrt(max(b * b - 1.0, 0.0)) - 1j * math.sqrt(max(1.0 - a * a, 0.0))
    hopf = w * w / (4.0 * H)
    # companion forms as displayed are those of -2H x_check; undo the scale
    cI = FormCoefficients((1.0 - s2) / (4 * H * H), -c1 / (4 * H * H),
                          (c2 - s2) / (4 * H * H))
    cII_val = -a * b * cn * dn / (-2.0 * H)
    cII = FormCoefficients(cII_val, 0.0, cII_val)
    if rescaled:
        # one u-unit here is 1/b conformal units
        s = 1.0 / (b * b)
        I = FormCoefficients(I.E * s, 0.0, I.G * s)
        II = FormCoefficients(II.E * s, II.F * s, II.G * s)
        III = FormCoefficients(III.E * s, III.F * s, III.G * s)
        hopf = hopf * s
        cI = FormCoefficients(cI.E * s, cI.F * s, cI.G * s)
        cII = FormCoefficients(cII.E * s, cII.F * s, cII.G * s)
    return FundamentalForms(I=I, II=II, III=III, hopf=hopf,
                            companion_I=cI, companion_II=cII,
                            rescaled=rescaled)


def hopf_phase(p):
    """Phase theta in [-pi/2, 0] of the (constant) Hopf coefficient factor.

    cos(theta) = sqrt((b^2-1)/(b^2(1-mu^2))), sin(theta) <= 0; theta is
    the argument of w = sqrt(b^2-1) - i sqrt(1-a^2), whose square carries
    the Hopf coefficient.  Undefined on the sphere ray mu = 1 where the
    coefficient vanishes.
    """
    mu, b = p.mu, p.b
    if mu >= 1.0:
        raise DegenerateError("hopf phase undefined at mu = 1 (umbilic sphere)")
    a = p.a
    return math.atan2(-math.sqrt(max(1.0 - a * a, 0.0)),
                      math.sqrt(max(b * b - 1.0, 0.0)))


def isothermic_rotation(p):
    """Constant rotation taking (u, v) to curvature-line coordinates.

    In the rotated coordinates the traceless part of II loses its cross
    term.  Degenerates on the sphere (every direction is principal).
    """
    a, b = p.a, p.b
    den = b * b - a * a
    if den <= _EDGE_TOL:
        raise DegenerateError("isothermic rotation undefined on the sphere ray")
    den = math.sqrt(den)
    ca = math.sqrt(max(1.0 - a * a, 0.0)) / den
    sa = math.sqrt(max(b * b - 1.0, 0.0)) / den
    return np.array([[ca, -sa], [sa, ca]])


# ---------------------------------------------------------------------------
# shape descriptors


def pitch_radius(p):
    """Pitch of the screw motion and outer/inner cylinder radii."""
    s = 1.0 / abs(2.0 * p.H)
    mb2 = p.mu * p.b * p.b
    return PitchRadius(lam=p.c1 * s, R=(1.0 + mb2) * s, rho=abs(1.0 - mb2) * s)


def params_from_pitch_radius(lam, R, H=-0.5):
    """Invert pitch_radius: (lam, R) with lam >= 0, R > 0 determine (mu, b).

    Accepts a PitchRadius in place of lam (ignoring its rho, which is
    determined by the other two).
    """
    if isinstance(lam, PitchRadius):
        if R is None:
            R = lam.R
        lam = lam.lam
    lam = float(lam)
    R = float(R)
    H = float(H)
    if H == 0.0:
        raise MeanCurvatureZeroError("params_from_pitch_radius needs H != 0")
    if lam < 0.0 or R <= 0.0:
        raise DomainError("need pitch lam >= 0 and outer radius R > 0")
    s = abs(2.0 * H)
    lam_n = lam * s
    R_n = R * s
    s1 = math.hypot(lam_n, R_n)
    s2 = math.hypot(lam_n, R_n - 2.0)
    b = 0.5 * (s1 + s2)
    mu = (s1 - s2) / (s1 + s2)
    # clamp roundoff at the family boundary
    mu = min(max(mu, 0.0), 1.0)
    if mu > 0.0:
        b = min(b, 1.0 / mu)
    b = max(b, 1.0)
    return HelicoidParams(mu=mu, b=b, H=H)


def radii(p):
    """Axis-distance ranges of x and of its companion x_check."""
    s = 1.0 / abs(2.0 * p.H)
    mb2 = p.mu * p.b * p.b
    return Radii(inner=abs(1.0 - mb2) * s,
                 outer=(1.0 + mb2) * s,
                 companion_inner=p.a * math.sqrt(p.b * p.b - 1.0) * s,
                 companion_outer=mb2 * s)


def classify(p):
    """Tags of the parameter point.

    Boundary names: mu = 0 cylinder (b is then a reparametrization and is
    ignored); (1, 1) sphere; b = 1 unduloid; mu b = 1 nodoid; otherwise a
    generic helicoid.  mu b^2 = 1 adds the zero_inner_radius flag on top.
    """
    mu, b = p.mu, p.b
    tags = set()
    if mu <= _EDGE_TOL:
        return frozenset({CYLINDER})
    if abs(mu - 1.0) <= _EDGE_TOL and abs(b - 1.0) <= _EDGE_TOL:
        return frozenset({SPHERE})
    if abs(b - 1.0) <= _EDGE_TOL:
        tags.add(UNDULOID)
    elif abs(mu * b - 1.0) <= _EDGE_TOL:
        tags.add(NODOID)
    else:
        tags.add(GENERIC_HELICOID)
    if abs(mu * b * b - 1.0) <= _EDGE_TOL:
        tags.add(ZERO_INNER_RADIUS)
    return frozenset(tags)


def quasi_periods(p):
    """Complete-integral data of the shift u -> u + 2K(mu).

    g jumps by (2 c1 / b) Pi, the third coordinate of -2H x_check by
    2((b - 1/b) K - b E); n0 flips the sign of its real slot.  Undefined
    on the rotational boundary c1 = 0 and on the sphere ray mu = 1.
    """
    mu, b, c1 = p.mu, p.b, p.c1
    if mu >= 1.0:
        raise BoundaryParameterError("quasi-periods diverge at mu = 1 (K infinite)")
    if c1 == 0.0:
        raise BoundaryParameterError(
            "c1 = 0 (rotational boundary): the surface is a surface of "
            "revolution and the screw quasi-period is degenerate")
    K = elliptic.complete_K(mu)
    E = elliptic.complete_E(mu)
    Pi = elliptic.complete_Pi((mu * b) ** 2, mu)
    return QuasiPeriods(g_jump=2.0 * c1 * Pi / b,
                        vertical_jump=2.0 * ((b - 1.0 / b) * K - b * E),
                        K=K, E=E, Pi=Pi)
