"""Jacobi functions and Legendre integrals against quadrature truth."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from cmcsurf import elliptic
from cmcsurf.elliptic import Modulus
from cmcsurf.errors import (DomainError, PoleError, RegimeError,
                            SingularIntegralError)

K_GRID = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99]


# ---------------------------------------------------------------------------
# amplitude


def test_amplitude_zero_modulus_is_identity():
    us = np.linspace(-5.0, 5.0, 11)
    assert np.max(np.abs(elliptic.jacobi_am(us, 0.0) - us)) == 0.0


@pytest.mark.parametrize("k", [0.3, 0.6, 0.9])
def test_amplitude_at_quarter_period(k):
    K = elliptic.complete_K(k)
    assert abs(elliptic.jacobi_am(K, k) - 0.5 * math.pi) < 1e-13


def test_amplitude_inverts_the_quadrature():
    phi = oracles.invert_F(1.0, 0.25)
    assert abs(elliptic.jacobi_am(1.0, 0.5) - phi) < 1e-12


def test_amplitude_unit_modulus_is_gudermannian():
    us = np.linspace(-3.0, 3.0, 7)
    am = elliptic.jacobi_am(us, 1.0)
    assert np.max(np.abs(am - np.arcsin(np.tanh(us)))) < 1e-15


def test_amplitude_refuses_foreign_regimes():
    with pytest.raises(RegimeError):
        elliptic.jacobi_am(0.5, Modulus(1.5))
    with pytest.raises(RegimeError):
        elliptic.jacobi_am(0.5, Modulus(-0.5))


# ---------------------------------------------------------------------------
# sn, cn, dn


def test_circular_limit():
    us = np.linspace(-4.0, 4.0, 9)
    sn, cn, dn = elliptic.jacobi_sncndn(us, 0.0)
    assert np.max(np.abs(sn - np.sin(us))) < 1e-15
    assert np.max(np.abs(cn - np.cos(us))) < 1e-15
    assert np.max(np.abs(dn - 1.0)) == 0.0


def test_hyperbolic_limit():
    us = np.linspace(-3.0, 3.0, 9)
    sn, cn, dn = elliptic.jacobi_sncndn(us, 1.0)
    assert np.max(np.abs(sn - np.tanh(us))) < 1e-14
    assert np.max(np.abs(cn - 1.0 / np.cosh(us))) < 1e-14
    assert np.max(np.abs(dn - 1.0 / np.cosh(us))) < 1e-14


@pytest.mark.parametrize("k", K_GRID)
def test_square_identities_on_documented_grid(k):
    K = elliptic.complete_K(k) if k > 0.0 else 0.5 * math.pi
    us = np.linspace(-3.0 * K, 3.0 * K, 301)
    sn, cn, dn = elliptic.jacobi_sncndn(us, k)
    assert np.max(np.abs(sn * sn + cn * cn - 1.0)) < 1e-12
    assert np.max(np.abs(dn * dn + k * k * sn * sn - 1.0)) < 1e-12


@pytest.mark.parametrize("u, k", [(0.4, 0.3), (1.7, 0.6), (-2.3, 0.9),
                                  (0.9, 0.99)])
def test_derivative_identities(u, k):
    h = 1e-5
    sp = elliptic.jacobi_sncndn(u + h, k)
    sm = elliptic.jacobi_sncndn(u - h, k)
    sn, cn, dn = elliptic.jacobi_sncndn(u, k)
    d_sn, d_cn, d_dn = [(a - b) / (2.0 * h) for a, b in zip(sp, sm)]
    assert abs(d_sn - cn * dn) < 1e-6 * max(1.0, abs(cn * dn))
    assert abs(d_cn + sn * dn) < 1e-6 * max(1.0, abs(sn * dn))
    assert abs(d_dn + k * k * sn * cn) < 1e-6 * max(1.0, abs(sn * cn))


@pytest.mark.parametrize("k2", [4.0, 2.25])
def test_reciprocal_regime_against_quadrature(k2):
    # sn stays below the turning point 1/k for small u, where the
    # defining integral still makes sense and brackets the value
    u = 0.3
    sn, cn, dn = elliptic.jacobi_sncndn(u, Modulus(k2))
    assert abs(oracles.ellint_F(math.asin(sn), k2) - u) < 1e-12
    assert abs(sn * sn + cn * cn - 1.0) < 1e-14
    assert abs(dn * dn + k2 * sn * sn - 1.0) < 1e-14


def test_imaginary_regime_against_quadrature():
    u = 0.8
    k2 = -1.0
    sn, cn, dn = elliptic.jacobi_sncndn(u, Modulus(k2))
    assert abs(oracles.ellint_F(math.asin(sn), k2) - u) < 1e-12
    assert abs(sn * sn + cn * cn - 1.0) < 1e-14
    assert abs(dn * dn + k2 * sn * sn - 1.0) < 1e-14


def test_reduce_modulus():
    u2, m, regime = elliptic.reduce_modulus(0.7, 2.0)
    assert (u2, m.k2, regime) == (1.4, 0.25, elliptic.RECIPROCAL)
    u2, m, regime = elliptic.reduce_modulus(0.7, Modulus(-1.0))
    assert abs(u2 - 0.7 * math.sqrt(2.0)) < 1e-16
    assert (m.k2, regime) == (0.5, elliptic.IMAGINARY)
    u2, m, regime = elliptic.reduce_modulus(0.7, 0.5)
    assert (u2, m.k2, regime) == (0.7, 0.25, elliptic.STANDARD)


def test_negative_bare_modulus_rejected():
    with pytest.raises(DomainError):
        elliptic.jacobi_sncndn(0.5, -0.3)


# ---------------------------------------------------------------------------
# complete integrals


def test_complete_first_kind_reference_value():
    assert abs(elliptic.complete_K(0.5) - 1.685750354812596) < 1e-14


def test_complete_integrals_at_zero_modulus():
    assert abs(elliptic.complete_K(0.0) - 0.5 * math.pi) < 1e-15
    assert abs(elliptic.complete_E(0.0) - 0.5 * math.pi) < 1e-15


@pytest.mark.parametrize("k", K_GRID)
def test_complete_against_quadrature(k):
    k2 = k * k
    assert abs(elliptic.complete_K(k) - oracles.complete_K(k2)) < 1e-11
    assert abs(elliptic.complete_E(k) - oracles.complete_E(k2)) < 1e-11


@pytest.mark.parametrize("n", [-0.5, 0.3, 0.8])
def test_complete_third_kind_against_quadrature(n):
    val = elliptic.complete_Pi(n, 0.6)
    assert abs(val - oracles.complete_Pi(n, 0.36)) < 1e-11


@pytest.mark.parametrize("k", K_GRID)
def test_complete_against_agm(k):
    assert abs(elliptic.complete_K(k) - oracles.agm_K(k * k)) < 1e-13


def test_agm_classic_value():
    assert abs(elliptic.agm(24.0, 6.0) - 13.458171481725615) < 1e-13
    assert elliptic.agm(1.0, 1.0) == 1.0
    with pytest.raises(DomainError):
        elliptic.agm(-1.0, 2.0)


def test_legendre_relation():
    # E K' + E' K - K K' = pi / 2 on twenty moduli
    for k2 in np.linspace(0.04, 0.96, 20):
        K = elliptic.complete_K(Modulus(k2))
        E = elliptic.complete_E(Modulus(k2))
        Kc = elliptic.complete_K(Modulus(1.0 - k2))
        Ec = elliptic.complete_E(Modulus(1.0 - k2))
        assert abs(E * Kc + Ec * K - K * Kc - 0.5 * math.pi) < 1e-11


def test_complete_divergence_guards():
    with pytest.raises(DomainError):
        elliptic.complete_K(1.0)
    with pytest.raises(DomainError):
        elliptic.complete_E(Modulus(1.3))
    with pytest.raises(PoleError):
        elliptic.complete_Pi(1.0, 0.5)


# ---------------------------------------------------------------------------
# incomplete integrals


def test_second_kind_zero_modulus_is_identity():
    phis = np.linspace(-2.0, 2.0, 9)
    assert np.max(np.abs(elliptic.ellint_E(phis, 0.0) - phis)) < 1e-15


@pytest.mark.parametrize("k", [0.2, 0.5, 0.8])
def test_third_kind_zero_characteristic_reduces_to_first(k):
    phis = np.linspace(-2.5, 2.5, 11)
    f = elliptic.ellint_F(phis, k)
    p = elliptic.ellint_Pi(phis, 0.0, k)
    assert np.max(np.abs(p - f)) < 1e-15


def test_third_kind_reference_point():
    val = elliptic.ellint_Pi(1.2, 0.4, 0.6)
    assert abs(val - oracles.ellint_Pi(1.2, 0.4, 0.36)) < 1e-12


@pytest.mark.parametrize("phi, k2", [(0.7, 0.49), (2.0, 0.49), (1.3, 0.81),
                                     (1.0, -0.5)])
def test_incomplete_against_quadrature(phi, k2):
    m = Modulus(k2)
    assert abs(elliptic.ellint_F(phi, m) - oracles.ellint_F(phi, k2)) < 1e-12
    assert abs(elliptic.ellint_E(phi, m) - oracles.ellint_E(phi, k2)) < 1e-12


def test_third_kind_derivative_is_the_integrand():
    h = 1e-5
    for phi, n, k in [(0.5, 0.4, 0.6), (1.1, -0.7, 0.3), (0.4, 0.9, 0.8)]:
        lhs = (elliptic.ellint_Pi(phi + h, n, k)
               - elliptic.ellint_Pi(phi - h, n, k)) / (2.0 * h)
        s2 = math.sin(phi) ** 2
        rhs = 1.0 / ((1.0 - n * s2) * math.sqrt(1.0 - k * k * s2))
        assert abs(lhs - rhs) < 1e-8


@pytest.mark.parametrize("k", [0.3, 0.7, 0.95])
def test_first_kind_quasi_period(k):
    phis = np.linspace(-1.5, 1.5, 7)
    K = elliptic.complete_K(k)
    lhs = elliptic.ellint_F(phis + math.pi, k)
    rhs = elliptic.ellint_F(phis, k) + 2.0 * K
    assert np.max(np.abs(lhs - rhs)) < 1e-11


def test_third_kind_near_but_not_on_the_pole():
    # characteristic 2 puts the pole at phi = arcsin(1/sqrt(2))
    val = elliptic.ellint_Pi(0.5, 2.0, 0.3)
    assert abs(val - oracles.ellint_Pi(0.5, 2.0, 0.09)) < 1e-12
    with pytest.raises(SingularIntegralError):
        elliptic.ellint_Pi(1.0, 2.0, 0.3)


def test_incomplete_divergence_guards():
    with pytest.raises(DomainError):
        elliptic.ellint_F(0.3, Modulus(1.2))
    with pytest.raises(DomainError):
        elliptic.ellint_F(0.5 * math.pi, 1.0)
    with pytest.raises(DomainError):
        elliptic.ellint_Pi(0.3, 0.2, Modulus(2.0))


# ---------------------------------------------------------------------------
# properties


@settings(deadline=None, max_examples=60)
@given(u=st.floats(-20.0, 20.0), k2=st.floats(0.0, 0.95))
def test_amplitude_shift_and_squares(u, k2):
    m = Modulus(k2)
    K = elliptic.complete_K(m)
    assert abs(elliptic.jacobi_am(u + 2.0 * K, m)
               - elliptic.jacobi_am(u, m) - math.pi) < 1e-10
    sn, cn, _ = elliptic.jacobi_sncndn(u, m)
    assert abs(sn * sn + cn * cn - 1.0) < 1e-12
