"""Rotational constant mean curvature surfaces in Minkowski 3-space.

Seven families, indexed by the causal characters of the surface and of its
rotation axis.  Each family is driven by a scalar profile solving a reduced
harmonic map equation; the immersion is explicit in the profile, its
derivative, and one closed-form integral, with mean curvature -1/2
throughout.  Spacelike families carry a conformal du^2 + dv^2 domain and
their Gauss maps take values in the hyperboloid; timelike families carry
du^2 - dv^2 and map to the de Sitter sphere.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import elliptic, lingeo
from .errors import BranchError, DomainError, MinimalObstructionError

SPACELIKE_TIMELIKE_AXIS = "SpacelikeTimelikeAxis"
TIMELIKE_TIMELIKE_AXIS = "TimelikeTimelikeAxis"
SPACELIKE_SPACELIKE_AXIS = "SpacelikeSpacelikeAxis"
TIMELIKE_SPACELIKE_AXIS_1 = "TimelikeSpacelikeAxis1"
TIMELIKE_SPACELIKE_AXIS_2 = "TimelikeSpacelikeAxis2"
SPACELIKE_LIGHTLIKE_AXIS = "SpacelikeLightlikeAxis"
TIMELIKE_LIGHTLIKE_AXIS = "TimelikeLightlikeAxis"

ALL_KINDS = (
    SPACELIKE_TIMELIKE_AXIS,
    TIMELIKE_TIMELIKE_AXIS,
    SPACELIKE_SPACELIKE_AXIS,
    TIMELIKE_SPACELIKE_AXIS_1,
    TIMELIKE_SPACELIKE_AXIS_2,
    SPACELIKE_LIGHTLIKE_AXIS,
    TIMELIKE_LIGHTLIKE_AXIS,
)

# profile families
CS_NS = "cs_ns"
SN_DN = "sn_dn"
PHI = "phi"

# lightlike-axis profile variants
PHI_LINEAR = "phi_linear"
PHI_SINUSOIDAL = "phi_sinusoidal"

# half-width of the exclusion window around profile poles
POLE_WINDOW = 1e-6


@dataclasses.dataclass(frozen=True)
class KindInfo:
    family: str
    axis: str
    surface_character: str
    domain_signature: str
    target: str


KIND_INFO = {
    SPACELIKE_TIMELIKE_AXIS: KindInfo(
        CS_NS, lingeo.TIMELIKE, lingeo.SPACELIKE,
        lingeo.RIEMANNIAN, lingeo.HYPERBOLOID),
    TIMELIKE_TIMELIKE_AXIS: KindInfo(
        CS_NS, lingeo.TIMELIKE, lingeo.TIMELIKE,
        lingeo.LORENTZIAN, lingeo.DE_SITTER),
    SPACELIKE_SPACELIKE_AXIS: KindInfo(
        CS_NS, lingeo.SPACELIKE, lingeo.SPACELIKE,
        lingeo.RIEMANNIAN, lingeo.HYPERBOLOID),
    TIMELIKE_SPACELIKE_AXIS_1: KindInfo(
        CS_NS, lingeo.SPACELIKE, lingeo.TIMELIKE,
        lingeo.LORENTZIAN, lingeo.DE_SITTER),
    TIMELIKE_SPACELIKE_AXIS_2: KindInfo(
        SN_DN, lingeo.SPACELIKE, lingeo.TIMELIKE,
        lingeo.LORENTZIAN, lingeo.DE_SITTER),
    SPACELIKE_LIGHTLIKE_AXIS: KindInfo(
        PHI, lingeo.LIGHTLIKE, lingeo.SPACELIKE,
        lingeo.RIEMANNIAN, lingeo.HYPERBOLOID),
    TIMELIKE_LIGHTLIKE_AXIS: KindInfo(
        PHI, lingeo.LIGHTLIKE, lingeo.TIMELIKE,
        lingeo.LORENTZIAN, lingeo.DE_SITTER),
}

# generator of the lightlike rotations, in so(2,1)
_A = np.array([
    [0.0, -1.0, 0.0],
    [1.0, 0.0, -1.0],
    [0.0, -1.0, 0.0],
])
_A2 = _A @ _A
# nilpotent of order three, so the exponential series ends at the square
assert not (_A2 @ _A).any()


def null_rotation(v):
    """exp(vA) for the lightlike rotation generator; polynomial in v.

    Broadcasts: scalar v gives a 3x3 matrix, an array of shape S gives
    S + (3, 3).  The null direction (1, 0, 1) is fixed for every v.
    """
    v = np.asarray(v, dtype=float)
    eye = np.broadcast_to(np.eye(3), v.shape + (3, 3))
    vv = v[..., None, None]
    return eye + vv * _A + (0.5 * vv * vv) * _A2


@dataclasses.dataclass(frozen=True)
class DelaunayProfile:
    """Profile functions of one family, with analytic derivatives.

    kind picks the family, k2 the squared modulus (negative means an
    imaginary modulus).  variant applies to the lightlike-axis families
    only; c_sign picks the dn branch of the (s, c) family.
    """

    kind: str
    k2: float
    variant: str | None = None
    c_sign: int = 1

    def __post_init__(self):
        if self.kind not in KIND_INFO:
            raise DomainError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "k2", float(self.k2))
        if self.family == PHI:
            variant = self.variant or PHI_SINUSOIDAL
            if variant not in (PHI_LINEAR, PHI_SINUSOIDAL):
                raise DomainError(f"unknown profile variant {self.variant!r}")
            if variant == PHI_LINEAR and self.k2 != 0.0:
                raise DomainError("the linear profile has no modulus; pass k2=0")
            if variant == PHI_SINUSOIDAL and self.k2 == 0.0:
                raise DomainError("the sinusoidal profile needs k != 0")
            object.__setattr__(self, "variant", variant)
        elif self.variant is not None:
            raise DomainError("variant applies to lightlike-axis kinds only")
        if self.family == SN_DN and self.k2 < 0.0:
            raise DomainError("the (s, c) family needs a real modulus k >= 0")
        if self.c_sign not in (1, -1):
            raise DomainError("c_sign must be +1 or -1")

    @property
    def family(self):
        return KIND_INFO[self.kind].family

    def evaluate(self, u):
        """Profile values and derivatives at u.

        Returns (sigma, gamma, sigma', gamma') for the cs/ns family,
        (s, c, s', c') for the sn/dn family and (phi, phi') for the
        lightlike one.  cs/ns values are infinite at the poles sn = 0;
        use pole_mask to exclude them.
        """
        u = np.asarray(u, dtype=float)
        fam = self.family
        if fam == CS_NS:
            sn, cn, dn = (np.asarray(w) for w in
                          elliptic.jacobi_sncndn(u, elliptic.Modulus(self.k2)))
            with np.errstate(divide="ignore", invalid="ignore"):
                sigma = cn / sn
                gamma = 1.0 / sn
                dsigma = -dn / (sn * sn)
                dgamma = -cn * dn / (sn * sn)
            return sigma, gamma, dsigma, dgamma
        if fam == SN_DN:
            sn, cn, dn = (np.asarray(w) for w in
                          elliptic.jacobi_sncndn(u, elliptic.Modulus(self.k2)))
            k = math.sqrt(self.k2)
            s = k * sn
            c = self.c_sign * dn
            ds = k * cn * dn
            dc = -self.c_sign * self.k2 * sn * cn
            return s, c, ds, dc
        if self.variant == PHI_LINEAR:
            return u + 0.0, np.ones_like(u)
        if self.k2 > 0.0:
            k = math.sqrt(self.k2)
            return np.sin(k * u) / k, np.cos(k * u)
        q = math.sqrt(-self.k2)
        return np.sinh(q * u) / q, np.cosh(q * u)

    def pole_mask(self, u, window=POLE_WINDOW):
        """Nodes within the exclusion window of a profile pole."""
        u = np.asarray(u, dtype=float)
        if self.family == CS_NS:
            sn, _, _ = elliptic.jacobi_sncndn(u, elliptic.Modulus(self.k2))
            return np.abs(np.asarray(sn)) < window
        if self.family == SN_DN:
            return np.zeros(u.shape, dtype=bool)
        phi, _ = self.evaluate(u)
        return np.abs(phi) < window


def _phi_sigma_gamma(phi, dphi):
    # the hyperbolic pair behind a lightlike-axis profile
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / phi
        sigma = 0.5 * (phi - inv)
        gamma = 0.5 * (phi + inv)
        dsigma = 0.5 * dphi * (1.0 + inv * inv)
        dgamma = 0.5 * dphi * (1.0 - inv * inv)
    return sigma, gamma, dsigma, dgamma


def profile(kind, k2, u, variant=None, c_sign=1):
    """Family profile at u; see DelaunayProfile.evaluate."""
    return DelaunayProfile(kind, k2, variant=variant, c_sign=c_sign).evaluate(u)


def profile_residual(kind, k2, us, h=1e-4, variant=None, c_sign=1,
                     profile_fn=None):
    """Largest harmonic-map-equation residual over a grid of u values.

    The first-order bracket is formed from analytic derivatives and its
    outer derivative taken by central differences, so the residual is
    O(h^2)-small on the solution families and order-one on anything else.
    profile_fn overrides the profile (same return convention as evaluate)
    to probe perturbations.  The grid must keep clear of profile poles.
    """
    prof = DelaunayProfile(kind, k2, variant=variant, c_sign=c_sign)
    fn = prof.evaluate if profile_fn is None else profile_fn
    fam = prof.family
    us = np.asarray(us, dtype=float)

    def bracket(u):
        vals = fn(u)
        if fam == SN_DN:
            s, c, ds, dc = vals
            return ds * c - s * dc
        if fam == PHI:
            sigma, gamma, dsigma, dgamma = _phi_sigma_gamma(*vals)
            return dsigma * gamma - sigma * dgamma
        sigma, gamma, dsigma, dgamma = vals
        return dsigma * gamma - sigma * dgamma

    dbracket = (bracket(us + h) - bracket(us - h)) / (2.0 * h)
    vals = fn(us)
    if fam == SN_DN:
        res = dbracket + vals[0] * vals[1]
    elif fam == PHI:
        sigma, gamma, _, _ = _phi_sigma_gamma(*vals)
        res = dbracket + (sigma - gamma) ** 2
    else:
        res = dbracket - vals[0] * vals[1]
    return float(np.max(np.abs(res)))


# ---------------------------------------------------------------------------
# closed-form integrals


@dataclasses.dataclass(frozen=True)
class ClosedIntegrals:
    """Antiderivative values for the integral terms of the immersions.

    gamma2 - sigma2 - u = 0 holds exactly as coded.  Fields the family or
    the modulus regime does not define are None.
    """

    sigma2: np.ndarray | None
    gamma2: np.ndarray | None
    c2: np.ndarray | None


def _cs2_term(u, k2):
    # cn dn / sn + E(am) at a standard-regime modulus; poles at sn = 0
    m = elliptic.Modulus(k2)
    sn, cn, dn = (np.asarray(w) for w in elliptic.jacobi_sncndn(u, m))
    am = elliptic.jacobi_am(u, m)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = cn * dn / sn
    return t + elliptic.ellint_E(am, m)


def _sigma2_antiderivative(k2, u):
    if k2 < 0.0:
        alpha = math.sqrt(1.0 - k2)
        beta2 = -k2 / (1.0 - k2)
        return -alpha * _cs2_term(alpha * u, beta2)
    if k2 > 1.0:
        k = math.sqrt(k2)
        return (k2 - 1.0) * u - k * _cs2_term(k * u, 1.0 / k2)
    return -_cs2_term(u, k2)


def _c2_antiderivative(k2, u):
    if k2 > 1.0:
        k = math.sqrt(k2)
        m = elliptic.Modulus(1.0 / k2)
        return (1.0 - k2) * u + k * elliptic.ellint_E(
            elliptic.jacobi_am(k * u, m), m)
    m = elliptic.Modulus(k2)
    return elliptic.ellint_E(elliptic.jacobi_am(u, m), m)


def _pole_period(k2):
    """Spacing of the sn = 0 lattice where cs and ns blow up."""
    if k2 < 0.0:
        alpha = math.sqrt(1.0 - k2)
        beta2 = -k2 / (1.0 - k2)
        return 2.0 * elliptic.complete_K(elliptic.Modulus(beta2)) / alpha
    if k2 == 1.0:
        return math.inf
    if k2 > 1.0:
        return 2.0 * elliptic.complete_K(elliptic.Modulus(1.0 / k2)) / math.sqrt(k2)
    return 2.0 * elliptic.complete_K(elliptic.Modulus(k2))


def _branch_index(u, k2, window):
    """Index of the pole-free branch containing each u; None within windows."""
    period = _pole_period(k2)
    if math.isinf(period):
        idx = np.where(u >= 0.0, 0.0, -1.0)
        near = np.abs(u) < window
    else:
        idx = np.floor(u / period)
        frac = u - idx * period
        near = (frac < window) | (period - frac < window)
    return idx, near, period


def _require_single_branch(u, k2, window=POLE_WINDOW):
    idx, near, period = _branch_index(u, k2, window)
    if np.any(near) or np.unique(idx).size > 1:
        raise BranchError(
            "u touches or crosses a pole of the profile; shift u by a "
            f"multiple of the period {period:.9g} so the whole interval "
            "sits inside one branch")


def closed_integrals(kind, k2, u):
    """Closed-form values of the integral terms in the surface formulas.

    For the cs/ns families sigma2 and gamma2 are antiderivatives of
    sigma^2 and gamma^2; they have poles on the profile's pole lattice and
    u must stay inside a single branch.  c2 is the entire antiderivative
    of c^2 for the (s, c) family.  The lightlike families integrate
    elementary terms handled directly by eval_surface.
    """
    info = KIND_INFO.get(kind)
    if info is None:
        raise DomainError(f"unknown kind {kind!r}")
    if info.family == PHI:
        raise DomainError(
            "lightlike-axis integral terms are elementary; eval_surface "
            "computes them in place")
    k2 = float(k2)
    u = np.asarray(u, dtype=float)
    if info.family == SN_DN:
        if k2 < 0.0:
            raise DomainError("the (s, c) family needs a real modulus k >= 0")
        return ClosedIntegrals(None, None, _c2_antiderivative(k2, u))
    _require_single_branch(u, k2)
    sigma2 = _sigma2_antiderivative(k2, u)
    c2 = _c2_antiderivative(k2, u) if k2 >= 0.0 else None
    return ClosedIntegrals(sigma2, u + sigma2, c2)


# ---------------------------------------------------------------------------
# immersions and Gauss maps


def _branch_midpoints(u, k2):
    """A pole-free stand-in inside each node's own branch."""
    period = _pole_period(k2)
    if math.isinf(period):
        return np.where(u >= 0.0, 1.0, -1.0)
    return (np.floor(u / period) + 0.5) * period


def eval_surface(kind, k2, u, v, variant=None, c_sign=1):
    """The immersion x(u, v) of the family at mean curvature -1/2.

    u and v broadcast; the result carries a trailing axis of ambient
    components with the third coordinate timelike.  Nodes inside the pole
    window of the profile, or of the s'/c term, come back NaN.  An
    interval of u values spanning more than one pole-free branch raises;
    the two sides would live on different antiderivative branches and do
    not form one chart.
    """
    prof = DelaunayProfile(kind, k2, variant=variant, c_sign=c_sign)
    info = KIND_INFO[kind]
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)

    if info.family == PHI:
        if prof.variant == PHI_LINEAR:
            raise MinimalObstructionError(
                "the linear lightlike profile makes the surface form vanish "
                "identically; its orbit collapses to a point and there is "
                "no H = -1/2 surface on this branch")
        phi, dphi = prof.evaluate(u)
        mask = prof.pole_mask(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / phi
            sigma = 0.5 * (phi - inv)
            gamma = 0.5 * (phi + inv)
            ratio = dphi * inv
        iplus = 0.5 * (u - ratio)
        iminus = 0.5 * (u + ratio)
        zero = np.zeros_like(u)
        if kind == SPACELIKE_LIGHTLIKE_AXIS:
            base = np.stack([sigma - iplus, zero, gamma - iminus], axis=-1)
        else:
            base = np.stack([gamma - iminus, zero, sigma - iplus], axis=-1)
        x = np.einsum("...ij,...j->...i", null_rotation(v), base)
    elif info.family == SN_DN:
        s, c, ds, _ = prof.evaluate(u)
        ints = closed_integrals(kind, k2, u)
        mask = np.abs(c) < POLE_WINDOW
        with np.errstate(divide="ignore", invalid="ignore"):
            rim = c - ds / c
        x = np.stack([s - ints.c2, rim * np.cosh(v), -rim * np.sinh(v)],
                     axis=-1)
    else:
        mask = prof.pole_mask(u)
        usafe = np.where(mask, _branch_midpoints(u, k2), u)
        sigma, gamma, dsigma, _ = prof.evaluate(usafe)
        ints = closed_integrals(kind, k2, usafe)
        tilt = dsigma / gamma
        if kind == SPACELIKE_TIMELIKE_AXIS:
            r = sigma + tilt
            x = np.stack([r * np.cos(v), r * np.sin(v),
                          gamma + ints.sigma2], axis=-1)
        elif kind == TIMELIKE_TIMELIKE_AXIS:
            r = gamma - tilt
            x = np.stack([r * np.cos(v), r * np.sin(v),
                          sigma - ints.gamma2], axis=-1)
        elif kind == SPACELIKE_SPACELIKE_AXIS:
            q = gamma - tilt
            x = np.stack([sigma - ints.gamma2,
                          -q * np.sinh(v), q * np.cosh(v)], axis=-1)
        else:
            q = sigma + tilt
            x = np.stack([gamma + ints.sigma2,
                          -q * np.sinh(v), q * np.cosh(v)], axis=-1)
    if np.any(mask):
        x = np.where(mask[..., None], np.nan, x)
    return x


def gauss_map(kind, k2, u, v, variant=None, c_sign=1):
    """The analytic Gauss map of the family, valued in the kind's target.

    Spacelike kinds map to the hyperboloid <n,n> = -1, timelike ones to
    the de Sitter sphere <n,n> = +1.  Defined wherever the profile is;
    the lightlike linear variant included, since only its surface
    degenerates, not its harmonic map.
    """
    prof = DelaunayProfile(kind, k2, variant=variant, c_sign=c_sign)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)
    fam = prof.family
    if fam == PHI:
        phi, dphi = prof.evaluate(u)
        sigma, gamma, _, _ = _phi_sigma_gamma(phi, dphi)
        zero = np.zeros_like(u)
        if kind == SPACELIKE_LIGHTLIKE_AXIS:
            base = np.stack([sigma, zero, gamma], axis=-1)
        else:
            base = np.stack([gamma, zero, sigma], axis=-1)
        return np.einsum("...ij,...j->...i", null_rotation(v), base)
    if fam == SN_DN:
        s, c, _, _ = prof.evaluate(u)
        return np.stack([s, c * np.cosh(v), -c * np.sinh(v)], axis=-1)
    sigma, gamma, _, _ = prof.evaluate(u)
    if kind == SPACELIKE_TIMELIKE_AXIS:
        return np.stack([sigma * np.cos(v), sigma * np.sin(v), gamma], axis=-1)
    if kind == TIMELIKE_TIMELIKE_AXIS:
        return np.stack([gamma * np.cos(v), gamma * np.sin(v), sigma], axis=-1)
    if kind == SPACELIKE_SPACELIKE_AXIS:
        return np.stack([sigma, -gamma * np.sinh(v), gamma * np.cosh(v)],
                        axis=-1)
    return np.stack([gamma, -sigma * np.sinh(v), sigma * np.cosh(v)], axis=-1)
