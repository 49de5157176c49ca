"""Jacobi elliptic functions and Legendre integrals on the real line.

The amplitude is computed by the descending Landen (AGM) recursion and kept
on its unwrapped branch, so am(u + 2K) = am(u) + pi holds by construction
and sn = sin(am), cn = cos(am), dn = sqrt(1 - k^2 sn^2) satisfy the Jacobi
identities to machine precision.  Incomplete integrals go through Carlson's
symmetric forms with duplication; the quasi-periodic extension beyond
|phi| = pi/2 adds multiples of the complete value.

Moduli are passed either as a nonnegative real number k or as a Modulus
wrapping k^2, which is how purely imaginary moduli (k^2 < 0) are spelled.
The evaluation regimes:

    standard    0 <= k^2 <= 1   direct
    reciprocal  k^2 > 1         (u, k) -> (k u, 1/k)
    imaginary   k^2 < 0         (u, k) -> (alpha u, beta),
                                alpha = sqrt(1 - k^2), beta^2 = -k^2/(1 - k^2)

jacobi_am is defined on the standard regime only; jacobi_sncndn accepts all
three and reduces internally.
"""

import math

import numpy as np

from .errors import DomainError, PoleError, RegimeError, SingularIntegralError

# Iteration cutoff for the AGM tableau.  c_n -> 0 quadratically, so this is
# reached in < 10 steps except within ~1e-13 of k = 1.
DEFAULT_TOL = 1e-13

_MAX_AGM_ITER = 64

# Carlson duplication stop threshold; the truncated series tail scales like
# errtol^6, so 1e-3 leaves ~1e-18 relative truncation error.
_CARLSON_ERRTOL = 1e-3

STANDARD = "standard"
RECIPROCAL = "reciprocal"
IMAGINARY = "imaginary"


class Modulus:
    """Elliptic modulus stored as its square.

    Using k^2 keeps imaginary moduli (k^2 < 0) on the real line.  A bare
    nonnegative float k is accepted anywhere a Modulus is; it means the
    modulus itself, not its square.
    """

    __slots__ = ("k2",)

    def __init__(self, k2):
        self.k2 = float(k2)

    @classmethod
    def from_k(cls, k):
        k = float(k)
        if k < 0.0:
            raise DomainError("modulus k must be nonnegative; use Modulus(k2) for k^2 < 0")
        return cls(k * k)

    @property
    def k(self):
        if self.k2 < 0.0:
            raise RegimeError("imaginary modulus has no real k; use k2")
        return math.sqrt(self.k2)

    @property
    def regime(self):
        if self.k2 < 0.0:
            return IMAGINARY
        if self.k2 > 1.0:
            return RECIPROCAL
        return STANDARD

    def __repr__(self):
        return f"Modulus(k2={self.k2!r})"

    def __eq__(self, other):
        if isinstance(other, Modulus):
            return self.k2 == other.k2
        return NotImplemented

    def __hash__(self):
        return hash(("Modulus", self.k2))


def _k2(k):
    """Coerce a modulus argument (Modulus or nonnegative real k) to k^2."""
    if isinstance(k, Modulus):
        return k.k2
    k = float(k)
    if k < 0.0:
        raise DomainError("modulus k must be nonnegative; use Modulus(k2) for k^2 < 0")
    return k * k


def _asarray(x):
    a = np.asarray(x, dtype=float)
    return a, a.ndim == 0


def _restore(val, scalar):
    return float(val) if scalar else val


def agm(a, b, tol=DEFAULT_TOL):
    """Arithmetic-geometric mean of two positive numbers."""
    a = float(a)
    b = float(b)
    if a <= 0.0 or b <= 0.0:
        raise DomainError("agm requires positive arguments")
    for _ in range(_MAX_AGM_ITER):
        if abs(a - b) <= tol * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def _agm_tableau(k2, tol):
    """AGM scales a_n and half-differences c_n for modulus k, plus K."""
    a = [1.0]
    c = [math.sqrt(k2)]
    b = math.sqrt(1.0 - k2)
    n = 0
    while abs(c[n]) > tol and n < _MAX_AGM_ITER:
        an = 0.5 * (a[n] + b)
        cn = 0.5 * (a[n] - b)
        b = math.sqrt(a[n] * b)
        a.append(an)
        c.append(cn)
        n += 1
    bigk = math.pi / (2.0 * a[n])
    return a, c, n, bigk


def jacobi_am(u, k, tol=DEFAULT_TOL):
    """Jacobi amplitude am(u, k) on its unwrapped branch.

    Defined for the standard regime 0 <= k^2 <= 1 only.  The argument is
    first reduced by am(u + 2sK) = am(u) + s*pi so the Landen descent runs
    with |u| <= K, where the principal arcsin branch is the right one; the
    shift is restored afterwards.  At k = 1 the amplitude is the Gudermannian
    arcsin(tanh u).
    """
    k2 = _k2(k)
    if not 0.0 <= k2 <= 1.0:
        raise RegimeError(f"jacobi_am needs 0 <= k^2 <= 1, got k^2 = {k2}")
    u, scalar = _asarray(u)
    if k2 == 0.0:
        return _restore(u + 0.0, scalar)
    if k2 == 1.0:
        return _restore(np.arcsin(np.tanh(u)), scalar)
    a, c, n, bigk = _agm_tableau(k2, tol)
    s = np.round(u / (2.0 * bigk))
    u0 = u - 2.0 * bigk * s
    phi = (2.0 ** n) * a[n] * u0
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(np.clip(c[i] / a[i] * np.sin(phi), -1.0, 1.0)))
    return _restore(phi + math.pi * s, scalar)


def _sncndn_standard(u, k2, tol):
    am = jacobi_am(u, Modulus(k2), tol=tol)
    sn = np.sin(am)
    cn = np.cos(am)
    dn = np.sqrt(1.0 - k2 * sn * sn)
    return sn, cn, dn


def jacobi_sncndn(u, k, tol=DEFAULT_TOL):
    """Jacobi sn, cn, dn for any real k^2, reduced to the standard regime.

    Reciprocal regime:  sn(u,k) = sn(ku, 1/k)/k,  cn = dn(ku, 1/k),
    dn = cn(ku, 1/k).  Imaginary regime (k^2 < 0): with
    alpha = sqrt(1 - k^2) and beta = sqrt(-k^2)/alpha,
    sn(u,k) = sd(alpha u, beta)/alpha, cn = cd, dn = nd.
    """
    k2 = _k2(k)
    u, scalar = _asarray(u)
    if 0.0 <= k2 <= 1.0:
        sn, cn, dn = _sncndn_standard(u, k2, tol)
    elif k2 > 1.0:
        kk = math.sqrt(k2)
        s, c, d = _sncndn_standard(kk * u, 1.0 / k2, tol)
        sn, cn, dn = s / kk, d, c
    else:
        alpha = math.sqrt(1.0 - k2)
        beta2 = -k2 / (1.0 - k2)
        s, c, d = _sncndn_standard(alpha * u, beta2, tol)
        # d >= sqrt(1 - beta2) > 0 on the standard regime, so no pole here
        sn, cn, dn = s / (alpha * d), c / d, 1.0 / d
    return _restore(sn, scalar), _restore(cn, scalar), _restore(dn, scalar)


def reduce_modulus(u, k):
    """Map (u, k) to standard-regime arguments (u', k') with k'^2 in [0, 1].

    Returns (u', Modulus', regime) where regime labels the input.  The
    transformed pair is the one jacobi_sncndn evaluates internally, so
    callers can reason about poles and periods in the reduced variables.
    """
    k2 = _k2(k)
    u, scalar = _asarray(u)
    if 0.0 <= k2 <= 1.0:
        return _restore(u + 0.0, scalar), Modulus(k2), STANDARD
    if k2 > 1.0:
        return _restore(math.sqrt(k2) * u, scalar), Modulus(1.0 / k2), RECIPROCAL
    alpha = math.sqrt(1.0 - k2)
    return _restore(alpha * u, scalar), Modulus(-k2 / (1.0 - k2)), IMAGINARY


# ---------------------------------------------------------------------------
# Carlson symmetric integrals


def _checked(*vals):
    out = [np.asarray(v, dtype=float) for v in vals]
    for a in out:
        if not np.all(np.isfinite(a)):
            raise DomainError("Carlson integral arguments must be finite")
    return np.broadcast_arrays(*out)


def carlson_rf(x, y, z):
    """Carlson R_F(x, y, z); x, y, z >= 0 with at most one zero."""
    x, y, z = _checked(x, y, z)
    if np.any(x < 0.0) or np.any(y < 0.0) or np.any(z < 0.0):
        raise DomainError("carlson_rf needs nonnegative arguments")
    if np.any((x == 0.0).astype(int) + (y == 0.0) + (z == 0.0) > 1):
        raise DomainError("carlson_rf diverges when two arguments vanish")
    xt = x.copy()
    yt = y.copy()
    zt = z.copy()
    while True:
        sx, sy, sz = np.sqrt(xt), np.sqrt(yt), np.sqrt(zt)
        lam = sx * (sy + sz) + sy * sz
        xt = 0.25 * (xt + lam)
        yt = 0.25 * (yt + lam)
        zt = 0.25 * (zt + lam)
        ave = (xt + yt + zt) / 3.0
        delx = (ave - xt) / ave
        dely = (ave - yt) / ave
        delz = (ave - zt) / ave
        if max(np.max(np.abs(delx)), np.max(np.abs(dely)), np.max(np.abs(delz))) < _CARLSON_ERRTOL:
            break
    e2 = delx * dely - delz * delz
    e3 = delx * dely * delz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / np.sqrt(ave)


def carlson_rc(x, y):
    """Carlson R_C(x, y) = R_F(x, y, y); x >= 0, y > 0."""
    x, y = _checked(x, y)
    if np.any(x < 0.0) or np.any(y <= 0.0):
        raise DomainError("carlson_rc needs x >= 0, y > 0")
    xt = x.copy()
    yt = y.copy()
    while True:
        lam = 2.0 * np.sqrt(xt) * np.sqrt(yt) + yt
        xt = 0.25 * (xt + lam)
        yt = 0.25 * (yt + lam)
        ave = (xt + 2.0 * yt) / 3.0
        s = (yt - ave) / ave
        if np.max(np.abs(s)) < _CARLSON_ERRTOL:
            break
    return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / np.sqrt(ave)


def carlson_rd(x, y, z):
    """Carlson R_D(x, y, z); x, y >= 0 with x + y > 0, z > 0."""
    x, y, z = _checked(x, y, z)
    if np.any(x < 0.0) or np.any(y < 0.0) or np.any(z <= 0.0) or np.any(x + y == 0.0):
        raise DomainError("carlson_rd needs x, y >= 0 (not both 0), z > 0")
    xt = x.copy()
    yt = y.copy()
    zt = z.copy()
    acc = np.zeros_like(xt)
    fac = 1.0
    while True:
        sx, sy, sz = np.sqrt(xt), np.sqrt(yt), np.sqrt(zt)
        lam = sx * (sy + sz) + sy * sz
        acc = acc + fac / (sz * (zt + lam))
        fac = 0.25 * fac
        xt = 0.25 * (xt + lam)
        yt = 0.25 * (yt + lam)
        zt = 0.25 * (zt + lam)
        ave = (xt + yt + 3.0 * zt) / 5.0
        delx = (ave - xt) / ave
        dely = (ave - yt) / ave
        delz = (ave - zt) / ave
        if max(np.max(np.abs(delx)), np.max(np.abs(dely)), np.max(np.abs(delz))) < _CARLSON_ERRTOL:
            break
    ea = delx * dely
    eb = delz * delz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    series = (
        1.0
        + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * delz * ee)
        + delz * (ee / 6.0 + delz * (-9.0 / 22.0 * ec + delz * 3.0 / 26.0 * ea))
    )
    return 3.0 * acc + fac * series / (ave * np.sqrt(ave))


def carlson_rj(x, y, z, p):
    """Carlson R_J(x, y, z, p) for p > 0 and x, y, z >= 0 (at most one zero)."""
    x, y, z, p = _checked(x, y, z, p)
    if np.any(x < 0.0) or np.any(y < 0.0) or np.any(z < 0.0) or np.any(p <= 0.0):
        raise DomainError("carlson_rj needs nonnegative x, y, z and p > 0")
    if np.any((x == 0.0).astype(int) + (y == 0.0) + (z == 0.0) > 1):
        raise DomainError("carlson_rj diverges when two of x, y, z vanish")
    xt = x.copy()
    yt = y.copy()
    zt = z.copy()
    pt = p.copy()
    acc = np.zeros_like(xt)
    fac = 1.0
    while True:
        sx, sy, sz = np.sqrt(xt), np.sqrt(yt), np.sqrt(zt)
        lam = sx * (sy + sz) + sy * sz
        alpha = (pt * (sx + sy + sz) + sx * sy * sz) ** 2
        beta = pt * (pt + lam) ** 2
        acc = acc + fac * carlson_rc(alpha, beta)
        fac = 0.25 * fac
        xt = 0.25 * (xt + lam)
        yt = 0.25 * (yt + lam)
        zt = 0.25 * (zt + lam)
        pt = 0.25 * (pt + lam)
        ave = (xt + yt + zt + 2.0 * pt) / 5.0
        delx = (ave - xt) / ave
        dely = (ave - yt) / ave
        delz = (ave - zt) / ave
        delp = (ave - pt) / ave
        worst = max(
            np.max(np.abs(delx)),
            np.max(np.abs(dely)),
            np.max(np.abs(delz)),
            np.max(np.abs(delp)),
        )
        if worst < _CARLSON_ERRTOL:
            break
    ea = delx * (dely + delz) + dely * delz
    eb = delx * dely * delz
    ec = delp * delp
    ed = ea - 3.0 * ec
    ee = eb + 2.0 * delp * (ea - ec)
    series = (
        1.0
        + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * ee)
        + eb * (1.0 / 6.0 + delp * (-3.0 / 11.0 + delp * 3.0 / 26.0))
        + delp * ea * (1.0 / 3.0 - delp * 3.0 / 22.0)
        - delp * ec / 3.0
    )
    return 3.0 * acc + fac * series / (ave * np.sqrt(ave))


# ---------------------------------------------------------------------------
# Legendre integrals


def complete_K(k):
    """Complete integral of the first kind; needs k^2 < 1 (may be negative)."""
    k2 = _k2(k)
    if k2 >= 1.0:
        raise DomainError(f"complete_K diverges for k^2 >= 1, got {k2}")
    return float(carlson_rf(0.0, 1.0 - k2, 1.0))


def complete_E(k):
    """Complete integral of the second kind; needs k^2 < 1 (may be negative)."""
    k2 = _k2(k)
    if k2 >= 1.0:
        raise DomainError(f"complete_E needs k^2 < 1, got {k2}")
    return float(carlson_rf(0.0, 1.0 - k2, 1.0) - (k2 / 3.0) * carlson_rd(0.0, 1.0 - k2, 1.0))


def complete_Pi(n_char, k):
    """Complete integral of the third kind with characteristic n_char < 1."""
    k2 = _k2(k)
    if k2 >= 1.0:
        raise DomainError(f"complete_Pi needs k^2 < 1, got {k2}")
    n_char = float(n_char)
    if n_char >= 1.0:
        raise PoleError(f"complete_Pi has a pole for characteristic >= 1, got {n_char}")
    val = carlson_rf(0.0, 1.0 - k2, 1.0)
    if n_char != 0.0:
        val = val + (n_char / 3.0) * carlson_rj(0.0, 1.0 - k2, 1.0, 1.0 - n_char)
    return float(val)


def _half_period_split(phi):
    """Split phi = phi_s + c*pi with phi_s in [-pi/2, pi/2)."""
    c = np.floor((phi + 0.5 * math.pi) / math.pi)
    return phi - math.pi * c, c


def ellint_F(phi, k):
    """Incomplete integral of the first kind, quasi-periodically extended.

    Accepts k^2 <= 1 (imaginary moduli included).  At k^2 = 1 the integral
    diverges at |phi| = pi/2, so only |phi| < pi/2 is admitted there.
    """
    k2 = _k2(k)
    if k2 > 1.0:
        raise DomainError("ellint_F needs k^2 <= 1; reciprocal-regime integrals "
                          "stop at the turning point |sin phi| = 1/k")
    phi, scalar = _asarray(phi)
    phs, c = _half_period_split(phi)
    if k2 == 1.0 and np.any(np.abs(phi) >= 0.5 * math.pi):
        raise DomainError("ellint_F diverges at |phi| >= pi/2 when k^2 = 1")
    sn = np.sin(phs)
    cs2 = np.cos(phs) ** 2
    q = 1.0 - k2 * sn * sn
    val = sn * carlson_rf(cs2, q, np.ones_like(q))
    if np.any(c != 0.0):
        val = val + 2.0 * c * complete_K(Modulus(k2))
    return _restore(val, scalar)


def ellint_E(phi, k):
    """Incomplete integral of the second kind, quasi-periodically extended."""
    k2 = _k2(k)
    if k2 > 1.0:
        raise DomainError("ellint_E needs k^2 <= 1")
    phi, scalar = _asarray(phi)
    phs, c = _half_period_split(phi)
    if k2 == 1.0:
        # E(phi, 1) = sin(phi) per half-period branch; stays finite everywhere
        return _restore(np.sin(phs) + 2.0 * c, scalar)
    sn = np.sin(phs)
    cs2 = np.cos(phs) ** 2
    q = 1.0 - k2 * sn * sn
    one = np.ones_like(q)
    val = sn * carlson_rf(cs2, q, one) - (k2 / 3.0) * sn ** 3 * carlson_rd(cs2, q, one)
    if np.any(c != 0.0):
        val = val + 2.0 * c * complete_E(Modulus(k2))
    return _restore(val, scalar)


def ellint_Pi(phi, n_char, k):
    """Incomplete integral of the third kind, quasi-periodically extended.

    The characteristic pole 1 - n_char sin^2(theta) = 0 must not lie on the
    integration path: for n_char >= 1 that confines phi to
    |phi| < arcsin(1/sqrt(n_char)).  Crossing it raises SingularIntegralError
    rather than returning a principal value.
    """
    k2 = _k2(k)
    if k2 > 1.0:
        raise DomainError("ellint_Pi needs k^2 <= 1")
    n_char = float(n_char)
    phi, scalar = _asarray(phi)
    if n_char >= 1.0:
        phi_pole = math.asin(min(1.0, 1.0 / math.sqrt(n_char)))
        if np.any(np.abs(phi) >= phi_pole):
            raise SingularIntegralError(
                f"characteristic {n_char} puts a pole at |phi| = {phi_pole}; "
                "the integration path reaches it")
    phs, c = _half_period_split(phi)
    if k2 == 1.0 and np.any(np.abs(phi) >= 0.5 * math.pi):
        raise DomainError("ellint_Pi diverges at |phi| >= pi/2 when k^2 = 1")
    sn = np.sin(phs)
    cs2 = np.cos(phs) ** 2
    q = 1.0 - k2 * sn * sn
    one = np.ones_like(q)
    val = sn * carlson_rf(cs2, q, one)
    if n_char != 0.0:
        val = val + (n_char / 3.0) * sn ** 3 * carlson_rj(cs2, q, one, 1.0 - n_char * sn * sn)
    if np.any(c != 0.0):
        val = val + 2.0 * c * complete_Pi(n_char, Modulus(k2))
    return _restore(val, scalar)
