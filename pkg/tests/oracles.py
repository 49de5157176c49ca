"""Reference values the tests trust instead of the package under test.

Everything here goes through scipy's adaptive quadrature (or the plain
AGM recursion), so agreement with the Carlson-based code in
cmcsurf.elliptic is a genuine cross-check, not the same algorithm run
twice.  All moduli are passed as k^2 to keep imaginary-modulus cases on
the real line.
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-12, limit=200)


def ellint_F(phi, k2):
    val, _ = quad(lambda t: 1.0 / math.sqrt(1.0 - k2 * math.sin(t) ** 2),
                  0.0, phi, **_QUAD_OPTS)
    return val


def ellint_E(phi, k2):
    val, _ = quad(lambda t: math.sqrt(1.0 - k2 * math.sin(t) ** 2),
                  0.0, phi, **_QUAD_OPTS)
    return val


def ellint_Pi(phi, n, k2):
    def f(t):
        s2 = math.sin(t) ** 2
        return 1.0 / ((1.0 - n * s2) * math.sqrt(1.0 - k2 * s2))
    val, _ = quad(f, 0.0, phi, **_QUAD_OPTS)
    return val


def complete_K(k2):
    return ellint_F(0.5 * math.pi, k2)


def complete_E(k2):
    return ellint_E(0.5 * math.pi, k2)


def complete_Pi(n, k2):
    return ellint_Pi(0.5 * math.pi, n, k2)


def agm_K(k2):
    """K(k) by the arithmetic-geometric mean, K = pi / (2 M(1, k'))."""
    a = 1.0
    b = math.sqrt(1.0 - k2)
    for _ in range(64):
        if abs(a - b) <= 1e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (a + b)


def invert_F(u, k2):
    """The amplitude phi with F(phi, k) = u, found on the quadrature."""
    if u == 0.0:
        return 0.0
    # the integrand is >= 1, so |phi| <= |u| brackets the root
    lo, hi = (0.0, u) if u > 0.0 else (u, 0.0)
    return brentq(lambda p: ellint_F(p, k2) - u, lo, hi, xtol=1e-14)


def integrate(f, lo, hi):
    """Adaptive quadrature of a scalar callable, value only."""
    val, _ = quad(f, lo, hi, **_QUAD_OPTS)
    return val


def ratios(errors):
    """Successive error quotients of a refinement study."""
    e = np.asarray(errors, dtype=float)
    return e[:-1] / e[1:]
