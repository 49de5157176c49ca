"""Linear geometry of Euclidean and Lorentzian 3-space.

Vectors are numpy arrays with trailing axis of length 3; every function
broadcasts over leading axes.  The Lorentzian signature is (+, +, -) with
the third coordinate the timelike one, so

    <a, b> = a1 b1 + a2 b2 - a3 b3

and the Lorentzian cross product is the Euclidean one with its third
component negated, which makes <a x b, c> = det[a, b, c] hold in both
metrics.  Domain 2-planes come in the same two flavors; the Hodge star on
vector-valued one-forms P du + Q dv is

    riemannian:  *(P du + Q dv) = -Q du + P dv        ** = -id
    lorentzian:  *(P du + Q dv) =  Q du + P dv        ** = +id

Unit spheres of the ambient metrics: S2 (<v,v> = 1, Euclidean), H2
(<v,v> = -1, Lorentzian, the hyperboloid) and S2_1 (<v,v> = +1,
Lorentzian, de Sitter).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

EUCLIDEAN = "euclidean"
LORENTZIAN = "lorentzian"

RIEMANNIAN = "riemannian"
# domain signatures reuse the metric names: a conformal Lorentzian domain
# carries du^2 - dv^2
DOMAIN_SIGNATURES = (RIEMANNIAN, LORENTZIAN)

SPACELIKE = "spacelike"
TIMELIKE = "timelike"
LIGHTLIKE = "lightlike"

# relative tolerance for the causal-character null test
CAUSAL_TOL = 1e-10

# Gauss map target quadrics
SPHERE = "sphere"
HYPERBOLOID = "hyperboloid"
DE_SITTER = "de_sitter"

_QUADRICS = {
    SPHERE: (EUCLIDEAN, 1.0),
    HYPERBOLOID: (LORENTZIAN, -1.0),
    DE_SITTER: (LORENTZIAN, 1.0),
}


def vec3(x, y, z):
    """Stack components (scalars or broadcastable arrays) into (..., 3)."""
    return np.stack(np.broadcast_arrays(
        np.asarray(x, dtype=float),
        np.asarray(y, dtype=float),
        np.asarray(z, dtype=float)), axis=-1)


def _check_metric(metric):
    if metric not in (EUCLIDEAN, LORENTZIAN):
        raise DomainError(f"unknown metric {metric!r}")


def inner(metric, a, b):
    """Scalar product of the given metric; broadcasts over leading axes."""
    _check_metric(metric)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]
    if metric == EUCLIDEAN:
        return s + a[..., 2] * b[..., 2]
    return s - a[..., 2] * b[..., 2]


def cross(metric, a, b):
    """Cross product compatible with <a x b, c> = det[a, b, c].

    Lorentzian: Euclidean cross product with the third component negated.
    """
    _check_metric(metric)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.cross(a, b)
    if metric == LORENTZIAN:
        c = c * np.array([1.0, 1.0, -1.0])
    return c


def norm(metric, a):
    """sqrt(|<a, a>|); in the Lorentzian case this is the causal magnitude."""
    return np.sqrt(np.abs(inner(metric, a, a)))


def causal_character(v, tol=CAUSAL_TOL):
    """Classify a vector in the Lorentzian metric.

    The null test is relative: |<v,v>| < tol * (1 + |v|_E^2) counts as
    lightlike, so scaling a lightlike vector keeps it lightlike.
    """
    v = np.asarray(v, dtype=float)
    q = inner(LORENTZIAN, v, v)
    scale = 1.0 + np.sum(v * v, axis=-1)
    if q.ndim == 0:
        if abs(q) < tol * scale:
            return LIGHTLIKE
        return SPACELIKE if q > 0 else TIMELIKE
    out = np.where(q > 0, SPACELIKE, TIMELIKE).astype(object)
    out[np.abs(q) < tol * scale] = LIGHTLIKE
    return out


def quadric_defect(target, v):
    """<v, v> minus the defining value of the target quadric.

    Vanishes on the unit sphere, on the hyperboloid <v,v> = -1 and on the
    de Sitter sphere <v,v> = +1, each taken in its own ambient metric.
    """
    try:
        metric, value = _QUADRICS[target]
    except KeyError:
        raise DomainError(f"unknown quadric {target!r}") from None
    return inner(metric, v, v) - value


# ---------------------------------------------------------------------------
# paracomplex numbers and the two flat models of R^3


@dataclass(frozen=True)
class Paracomplex:
    """Number x + j y with j^2 = +1 (split-complex).

    Multiplication: (x + j y)(u + j v) = (x u + y v) + j (x v + y u).
    The exponential of a purely imaginary jv is cosh v + j sinh v, the
    boost analogue of Euler's formula.
    """

    re: float
    jm: float

    def __add__(self, other):
        other = _as_para(other)
        return Paracomplex(self.re + other.re, self.jm + other.jm)

    __radd__ = __add__

    def __neg__(self):
        return Paracomplex(-self.re, -self.jm)

    def __sub__(self, other):
        other = _as_para(other)
        return Paracomplex(self.re - other.re, self.jm - other.jm)

    def __rsub__(self, other):
        return _as_para(other) - self

    def __mul__(self, other):
        other = _as_para(other)
        return Paracomplex(self.re * other.re + self.jm * other.jm,
                           self.re * other.jm + self.jm * other.re)

    __rmul__ = __mul__

    def conj(self):
        return Paracomplex(self.re, -self.jm)

    def modulus2(self):
        """z z-bar = re^2 - jm^2; indefinite, can be negative."""
        return self.re * self.re - self.jm * self.jm


def _as_para(x):
    if isinstance(x, Paracomplex):
        return x
    return Paracomplex(float(x), 0.0)


def pexp(v):
    """exp(j v) = cosh v + j sinh v."""
    return Paracomplex(float(np.cosh(v)), float(np.sinh(v)))


def from_complex_pair(X, x3):
    """(X, x3) in C x R -> (Re X, Im X, x3)."""
    X = np.asarray(X, dtype=complex)
    return vec3(X.real, X.imag, np.asarray(x3, dtype=float))


def to_complex_pair(v):
    """Inverse of from_complex_pair."""
    v = np.asarray(v, dtype=float)
    return v[..., 0] + 1j * v[..., 1], v[..., 2]


def cross_complex_pair(a, b):
    """Euclidean cross product written on C x R pairs.

    For a = (X, x), b = (Y, y) the product is (-i (X y - Y x), Im(X-bar Y)),
    returned as a (complex, real) pair.
    """
    X, x = a
    Y, y = b
    X = complex(X)
    Y = complex(Y)
    return -1j * (X * float(y) - Y * float(x)), (np.conj(X) * Y).imag


def from_paracomplex_pair(x1, w):
    """(x1, w) in R x (split-complex plane) -> (x1, Re w, j-part of w).

    The split-complex plane carries the induced metric dx2^2 - dx3^2, so
    this identification makes paracomplex rotations e^{jv} Lorentz boosts
    of the (x2, x3) plane.
    """
    return vec3(float(x1), w.re, w.jm)


def to_paracomplex_pair(v):
    """Inverse of from_paracomplex_pair (scalar vectors only)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise DomainError("to_paracomplex_pair expects a single vector")
    return float(v[0]), Paracomplex(float(v[1]), float(v[2]))


# ---------------------------------------------------------------------------
# Hodge star on vector-valued one-forms


@dataclass
class VectorOneForm:
    """One-form P du + Q dv with vector coefficients on a 2-plane.

    P, Q are (..., 3) arrays; domain_signature says whether the plane
    carries du^2 + dv^2 or du^2 - dv^2, which fixes the star.
    """

    P: np.ndarray
    Q: np.ndarray
    domain_signature: str

    def __post_init__(self):
        if self.domain_signature not in DOMAIN_SIGNATURES:
            raise DomainError(f"unknown domain signature {self.domain_signature!r}")
        self.P = np.asarray(self.P, dtype=float)
        self.Q = np.asarray(self.Q, dtype=float)
        if self.P.shape != self.Q.shape or self.P.shape[-1:] != (3,):
            raise DomainError("P and Q must be equal-shape (..., 3) arrays")


def hodge_star(form):
    """Star of a vector one-form; ** = -id riemannian, +id lorentzian."""
    if form.domain_signature == RIEMANNIAN:
        return VectorOneForm(-form.Q, form.P, form.domain_signature)
    return VectorOneForm(form.Q, form.P, form.domain_signature)
