"""Periodicity of companions of cmc helicoids: the Phi criterion.

A helicoid with parameters (mu, b) repeats, up to a screw motion, after
one u-step of 2K(mu).  Its constant-Gaussian-curvature companion closes
up into a cylinder exactly when

    Phi(mu, b) + 1/2 = q / p

for coprime integers q, p; then m = p steps close the companion under
(u, v) -> (u + 2mK, v + h) with the vertical shift h computed below,
the Gauss map returns to (-1)^m times itself, and the cmc surface
itself closes under the same shift for even m and under the doubled
shift (4mK, 2h) for odd m.  m also counts the cuspidal edges of the
companion front, and even m is equivalent to co-orientability.

Phi is evaluated through the complete elliptic integrals K(mu), E(mu)
and Pi(mu^2 b^2, mu).  It blows up like 1/c1 toward both ends of the
interval (1, 1/mu) and is non-monotone in between, so roots of the
closure condition are located by a sign-change scan followed by
bisection; no monotonicity is assumed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import elliptic, helicoid
from .errors import BoundaryParameterError, DomainError

# stay this far from the rotational boundaries b = 1 and b = 1/mu;
# Phi carries a 1/c1 factor and its limit there is not established
BOUNDARY_GUARD = 1e-6

SCAN_POINTS = 10_000
B_TOL = 1e-12

REPORT_SCHEMA = "period-solution/1"


@dataclass(frozen=True)
class PeriodSolution:
    """One root of the closure condition Phi + 1/2 = q/p.

    Records produced by solve_b satisfy the invariants (coprime q/p,
    m = p, cuspidal_edges = m, coorientable iff m even); the class
    itself does not enforce them, so negative controls for
    verify_closure can be built by hand.
    """

    mu: float
    b: float
    p: int
    q: int
    m: int
    h: float
    phi_value: float
    coorientable: bool
    cuspidal_edges: int


class ClosureGaps(NamedTuple):
    """Sup-norm closure defects measured by verify_closure.

    companion: gap of x_check under (u + 2mK, v + h); cmc: gap of x
    under that shift for even m and under (u + 4mK, v + 2h) for odd m;
    gauss_flip: deviation of n(u + 2mK, v + h) from (-1)^m n(u, v).
    """

    companion: float
    cmc: float
    gauss_flip: float


@dataclass(frozen=True)
class QuasiShift:
    """Rigid-motion data of one u-step by 2K(mu).

    rotation is the screw angle of the step acting on x_check (the
    phase jump of g plus the half-turn from the sign flip of the
    profile); on the rotational boundary c1 = 0 the step is a pure
    vertical translation and the rotation is reported as zero.
    """

    rotation: float
    vertical: float


def _check_interior(mu, b):
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    if not 1.0 <= b <= 1.0 / mu:
        raise DomainError(f"b = {b} lies outside [1, 1/mu] for mu = {mu}")
    if b - 1.0 < BOUNDARY_GUARD or 1.0 / mu - b < BOUNDARY_GUARD:
        raise BoundaryParameterError(
            f"b = {b} is within {BOUNDARY_GUARD} of the rotational "
            "boundary; c1 -> 0 makes Phi blow up")


def _c1(mu, b):
    return np.sqrt((1.0 - (mu * b) ** 2) * (b * b - 1.0))


def _phi_values(mu, bs, K, E):
    """Phi on an array of interior b values, complete integrals given."""
    bs = np.asarray(bs, dtype=float)
    c1 = _c1(mu, bs)
    n = (mu * bs) ** 2
    y = 1.0 - mu * mu
    pi_vals = elliptic.carlson_rf(0.0, y, 1.0) \
        + (n / 3.0) * elliptic.carlson_rj(0.0, y, 1.0, 1.0 - n)
    return (c1 * c1 * pi_vals + bs * bs * E + (1.0 - bs * bs) * K) \
        / (math.pi * bs * c1)


def phi(mu, b):
    """The closure function Phi(mu, b).

    Defined on the open strip 1 < b < 1/mu, away from the rotational
    boundaries where c1 = 0 (BoundaryParameterError there).
    """
    mu = float(mu)
    b = float(b)
    _check_interior(mu, b)
    K = elliptic.complete_K(mu)
    E = elliptic.complete_E(mu)
    pi_val = elliptic.complete_Pi((mu * b) ** 2, mu)
    c1 = float(_c1(mu, b))
    return (c1 * c1 * pi_val + b * b * E + (1.0 - b * b) * K) \
        / (math.pi * b * c1)


def _vertical_shift(mu, b, p, K, E):
    # h from the vertical closure: m Delta_z + (c1/b) h = 0
    return (2.0 * p / float(_c1(mu, b))) \
        * (b * b * E + (1.0 - b * b) * K)


def _bisect(f, lo, hi, flo):
    while hi - lo > B_TOL:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (flo < 0.0) == (fm < 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _roots_from_scan(bs, vals, target, f):
    roots = []
    d = vals - target
    for i in range(len(bs) - 1):
        if d[i] == 0.0:
            roots.append(float(bs[i]))
        elif d[i] * d[i + 1] < 0.0:
            roots.append(_bisect(f, float(bs[i]), float(bs[i + 1]),
                                 float(d[i])))
    if d[-1] == 0.0:
        roots.append(float(bs[-1]))
    return roots


def _scan_grid(mu, scan_points):
    # cell midpoints, not endpoints: Phi blows up like 1/c1 at both
    # boundaries, and a sample sitting on the guard line would bracket
    # ill-conditioned roots there that bisection cannot then refine
    lo = 1.0 + BOUNDARY_GUARD
    hi = 1.0 / mu - BOUNDARY_GUARD
    if hi <= lo:
        return None
    step = (hi - lo) / scan_points
    return lo + step * (np.arange(scan_points) + 0.5)


def solve_b(mu, q, p, scan_points=SCAN_POINTS):
    """All b in (1, 1/mu) with Phi(mu, b) + 1/2 = q/p, as PeriodSolutions.

    (q, p) is reduced to lowest terms first (with a warning when that
    changes it, since the returned m = p is the reduced denominator).
    Roots are bracketed on a uniform scan and bisected to B_TOL; a
    target outside the attainable range simply yields an empty list.
    """
    mu = float(mu)
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    q = int(q)
    p = int(p)
    if p < 1:
        raise DomainError(f"p must be a positive integer, got {p}")
    g = math.gcd(q, p)
    if g > 1:
        warnings.warn(f"target {q}/{p} reduced to {q // g}/{p // g}; "
                      "m is the reduced denominator", stacklevel=2)
        q //= g
        p //= g
    bs = _scan_grid(mu, scan_points)
    if bs is None:
        return []
    K = elliptic.complete_K(mu)
    E = elliptic.complete_E(mu)
    vals = _phi_values(mu, bs, K, E) + 0.5
    target = q / p

    def f(b):
        return phi(mu, b) + 0.5 - target

    out = []
    for root in _roots_from_scan(bs, vals, target, f):
        out.append(PeriodSolution(
            mu=mu, b=root, p=p, q=q, m=p,
            h=_vertical_shift(mu, root, p, K, E),
            phi_value=phi(mu, root),
            coorientable=(p % 2 == 0),
            cuspidal_edges=p))
    out.sort(key=lambda s: s.b)
    return out


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a rational-target sweep at fixed mu.

    phi_plus_half_range is the empirical range of Phi + 1/2 on the
    guarded scan window (the true range near the boundaries is not
    established, so targets are only drawn from what the scan saw).
    """

    solutions: tuple
    targets: tuple
    phi_plus_half_range: tuple
    scan_points: int


def cylinder_search(mu, p_max=8, max_targets=32, scan_points=SCAN_POINTS):
    """Sweep coprime targets q/p, p <= p_max, over the observed range.

    Enumerates the Farey fractions inside the scanned range of
    Phi + 1/2 in increasing order, keeps the first max_targets of
    them, and solves each; distinct targets give mutually
    non-congruent closed companions in the same associated family.
    """
    mu = float(mu)
    if not 0.0 < mu < 1.0:
        raise DomainError(f"mu must lie in (0, 1), got {mu}")
    bs = _scan_grid(mu, scan_points)
    if bs is None:
        return SearchResult((), (), (math.nan, math.nan), scan_points)
    K = elliptic.complete_K(mu)
    E = elliptic.complete_E(mu)
    vals = _phi_values(mu, bs, K, E) + 0.5
    lo, hi = float(np.min(vals)), float(np.max(vals))
    targets = set()
    for p in range(1, p_max + 1):
        q0 = math.floor(lo * p) + 1
        q1 = math.ceil(hi * p) - 1
        for q in range(q0, q1 + 1):
            if math.gcd(q, p) == 1:
                targets.add(Fraction(q, p))
    chosen = sorted(targets)[:max_targets]
    solutions = []
    kept = []
    for t in chosen:
        sols = solve_b(mu, t.numerator, t.denominator,
                       scan_points=scan_points)
        if sols:
            kept.append(t)
            solutions.extend(sols)
    solutions.sort(key=lambda s: (s.b, s.p))
    return SearchResult(tuple(solutions), tuple(kept), (lo, hi),
                        scan_points)


def verify_closure(sol, grid=(64, 64)):
    """Measure the closure of companion, surface and Gauss map.

    Samples one fundamental patch u in [0, 2mK], v in [0, |h|] on the
    given (nu, nv) grid and returns ClosureGaps; for a genuine
    PeriodSolution all three gaps are elliptic-evaluation noise, for a
    hand-built non-solution they sit at the size of the actual
    translation misfit.
    """
    nu, nv = grid
    params = helicoid.HelicoidParams(sol.mu, sol.b)
    K = elliptic.complete_K(sol.mu)
    shift_u = 2.0 * sol.m * K
    us = np.linspace(0.0, shift_u, nu)
    vs = np.linspace(0.0, abs(sol.h) if sol.h != 0.0 else 1.0, nv)
    x0, n0, c0, _ = helicoid.eval_grid(params, us, vs)
    x1, n1, c1_, _ = helicoid.eval_grid(params, us + shift_u, vs + sol.h)
    comp_gap = float(np.max(np.abs(c1_ - c0)))
    sign = -1.0 if sol.m % 2 else 1.0
    gauss_gap = float(np.max(np.abs(n1 - sign * n0)))
    if sol.m % 2 == 0:
        cmc_gap = float(np.max(np.abs(x1 - x0)))
    else:
        x2, _, _, _ = helicoid.eval_grid(params, us + 2.0 * shift_u,
                                         vs + 2.0 * sol.h)
        cmc_gap = float(np.max(np.abs(x2 - x0)))
    return ClosureGaps(companion=comp_gap, cmc=cmc_gap,
                       gauss_flip=gauss_gap)


def quasi_shift(p):
    """Rigid screw data of u -> u + 2K for a helicoid parameter point.

    Wraps the quasi-period integrals: rotation 2 c1 Pi / b + pi, and
    vertical translation 2((b - 1/b) K - b E) of the companion per
    step.  On the rotational boundary the rotation is zero (the phase
    half-turn is a reparametrization of a surface of revolution, not a
    motion); at mu = 1 the integrals diverge.
    """
    if p.mu >= 1.0:
        raise BoundaryParameterError(
            "K(1) diverges; the sphere ray mu = 1 has no quasi-period")
    if p.c1 == 0.0:
        K = elliptic.complete_K(p.mu)
        E = elliptic.complete_E(p.mu)
        return QuasiShift(
            rotation=0.0,
            vertical=2.0 * ((p.b - 1.0 / p.b) * K - p.b * E))
    qp = helicoid.quasi_periods(p)
    return QuasiShift(rotation=qp.g_jump + math.pi,
                      vertical=qp.vertical_jump)


def report_dict(sol, closure_gap=None):
    """The period-solution/1 report document as a plain dict."""
    return {
        "schema": REPORT_SCHEMA,
        "mu": sol.mu,
        "b": sol.b,
        "p": sol.p,
        "q": sol.q,
        "m": sol.m,
        "h": sol.h,
        "phi": sol.phi_value,
        "coorientable": sol.coorientable,
        "closure_gap": closure_gap,
    }
