"""Theta values, transformed weights, and the cusp approximation."""

import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

import oracles
from theta_tails import (
    GAMMA1,
    GAMMA2,
    GAMMA3,
    GAMMA4,
    InvalidArgumentError,
    IwasawaPoint,
    UnsupportedOperationError,
    WeylSumSpec,
    act_on_iwasawa,
    apply_rho,
    bound_constant,
    cusp_bound,
    cusp_main_term,
    f_phi_numeric,
    gaussian_weight,
    sharp_indicator_weight,
    sigma_phi,
    theta_f,
    theta_pair,
    theta_pair_gaussian_batch,
    weighted_weyl_sum,
)

GAUSS = gaussian_weight()
CHI = sharp_indicator_weight(1.0)


def test_sigma_staircase():
    for nu in range(-3, 4):
        assert sigma_phi(nu * math.pi) == 2 * nu
        assert sigma_phi(nu * math.pi + 0.3) == 2 * nu + 1
        assert sigma_phi((nu + 1) * math.pi - 0.3) == 2 * nu + 1


# ---------------------------------------------------------------------------
# theta values

@pytest.mark.parametrize("x", [-0.7, 0.0, 0.33, 1.5])
@pytest.mark.parametrize("y", [0.4, 1.0, 3.7])
def test_gaussian_theta_matches_mpmath(x, y):
    pt = IwasawaPoint(x=x, y=y, phi=0.0, xi1=0.0, xi2=0.0)
    got = theta_f(GAUSS, pt)
    want = oracles.gaussian_theta_mpmath(x, y)
    assert abs(got - want) <= 1e-12 * (1 + abs(want))


def test_gaussian_theta_at_i_is_the_classical_constant():
    pt = IwasawaPoint(x=0.0, y=1.0, phi=0.0)
    assert abs(theta_f(GAUSS, pt) - oracles.GAUSSIAN_THETA_AT_I) < 1e-13


def test_truncation_tolerance_is_honoured():
    rng = random.Random(3)
    for _ in range(25):
        pt = IwasawaPoint(
            x=rng.uniform(-2, 2),
            y=rng.uniform(0.05, 5),
            phi=0.0,
            xi1=rng.uniform(-3, 3),
            xi2=rng.uniform(-3, 3),
        )
        loose = theta_f(GAUSS, pt, tol=1e-6)
        tight = theta_f(GAUSS, pt, tol=1e-14)
        assert abs(loose - tight) <= 1e-6 * (1 + abs(tight))


def test_weyl_sum_identity_gaussian():
    rng = random.Random(11)
    for _ in range(10):
        x = rng.uniform(-3, 3)
        alpha = Fraction(rng.randrange(-12, 12), rng.randrange(1, 12))
        beta = Fraction(rng.randrange(-12, 12), rng.randrange(1, 12))
        zeta = rng.uniform(-2, 2)
        N = rng.randrange(1, 200)
        spec = WeylSumSpec(alpha=alpha, beta=beta, zeta=zeta, N=N)
        s = weighted_weyl_sum(GAUSS, x, spec) / math.sqrt(N)
        pt = IwasawaPoint(
            x=x, y=1.0 / N**2, phi=0.0, xi1=float(alpha) + float(beta) * x, xi2=0.0
        )
        t = theta_f(GAUSS, pt, zeta=zeta * x)
        assert abs(t - s) <= 1e-10 * (abs(s) + 1)


def test_weyl_sum_identity_indicator_at_dyadic_n():
    # dyadic N makes sqrt(1/N^2) exact, keeping the closed endpoint of the
    # indicator support exact in floating point
    rng = random.Random(12)
    for _ in range(10):
        x = rng.uniform(-3, 3)
        alpha = Fraction(rng.randrange(-12, 12), rng.randrange(1, 12))
        beta = Fraction(rng.randrange(-12, 12), rng.randrange(1, 12))
        N = 2 ** rng.randrange(0, 8)
        spec = WeylSumSpec(alpha=alpha, beta=beta, zeta=0.0, N=N)
        s = weighted_weyl_sum(CHI, x, spec) / math.sqrt(N)
        pt = IwasawaPoint(
            x=x, y=1.0 / N**2, phi=0.0, xi1=float(alpha) + float(beta) * x, xi2=0.0
        )
        t = theta_f(CHI, pt)
        assert abs(t - s) <= 1e-10 * (abs(s) + 1)


# ---------------------------------------------------------------------------
# invariance of the pairing

LETTERS = [GAMMA1, GAMMA2, GAMMA3, GAMMA4]
LETTERS += [g.inverse() for g in LETTERS]


def test_pairing_modulus_is_group_invariant():
    rng = random.Random(7)
    for _ in range(30):
        pt = IwasawaPoint(
            x=rng.uniform(-1, 3),
            y=rng.uniform(0.2, 4),
            phi=rng.uniform(0, math.pi),
            xi1=rng.uniform(-2, 2),
            xi2=rng.uniform(-2, 2),
        )
        g = LETTERS[0] * LETTERS[0]  # identity seed
        for _ in range(rng.randrange(1, 9)):
            g = g * rng.choice(LETTERS)
        base = abs(theta_pair(GAUSS, GAUSS, pt))
        moved = abs(theta_pair(GAUSS, GAUSS, act_on_iwasawa(g, pt)))
        assert math.isclose(base, moved, rel_tol=1e-9, abs_tol=1e-12)


def test_pairing_modulus_is_rho_invariant():
    rng = random.Random(8)
    for _ in range(20):
        pt = IwasawaPoint(
            x=rng.uniform(0.05, 1.9),
            y=rng.uniform(0.1, 2),
            phi=rng.uniform(0, math.pi),
            xi1=rng.uniform(-2, 2),
            xi2=rng.uniform(-2, 2),
        )
        base = abs(theta_pair(GAUSS, GAUSS, pt))
        moved = abs(theta_pair(GAUSS, GAUSS, apply_rho(pt)))
        assert math.isclose(base, moved, rel_tol=1e-9, abs_tol=1e-12)


def test_pairing_is_independent_of_zeta():
    pt = IwasawaPoint(x=0.4, y=0.9, phi=0.0, xi1=0.3, xi2=-0.2)
    a = theta_f(GAUSS, pt, zeta=0.0) * theta_f(CHI, pt, zeta=0.0).conjugate()
    b = theta_f(GAUSS, pt, zeta=0.77) * theta_f(CHI, pt, zeta=0.77).conjugate()
    assert abs(a - b) < 1e-12 * (1 + abs(a))


def test_gaussian_batch_matches_the_scalar_pairing():
    rng = np.random.default_rng(5)
    n = 40
    x = rng.uniform(-1, 3, n)
    y = rng.uniform(math.sqrt(3) / 2, 6, n)
    xi1 = rng.uniform(-1, 2, n)
    xi2 = rng.uniform(-1, 2, n)
    got = theta_pair_gaussian_batch(x, y, xi1, xi2)
    for i in range(n):
        pt = IwasawaPoint(x=x[i], y=y[i], phi=0.0, xi1=xi1[i], xi2=xi2[i])
        want = abs(theta_pair(GAUSS, GAUSS, pt))
        assert abs(got[i] - want) <= 1e-10 * (1 + want)


# ---------------------------------------------------------------------------
# transformed weights

def test_gaussian_transform_closed_form():
    w = np.linspace(-2, 2, 9)
    # at multiples of pi the transform is exact: e(-k/4) f((-1)^k w)
    for k in (-2, -1, 0, 1, 2):
        got = GAUSS.f_phi(k * math.pi, w)
        want = cmath.exp(-2j * math.pi * k / 4) * np.exp(-math.pi * w**2)
        assert np.allclose(got, want, rtol=1e-12, atol=1e-12)
    # away from them the modulus is still exact
    for phi in (0.3, 1.1, 2.9, 4.0):
        assert np.allclose(
            GAUSS.f_phi_modulus(phi, w), np.exp(-math.pi * w**2), rtol=1e-12
        )


def test_gaussian_is_a_rotation_eigenvector_at_zero():
    phis = np.array([0.0, 0.4, 1.0, math.pi, 4.4])
    vals = GAUSS.f_phi0_values(phis)
    assert np.allclose(np.abs(vals), 1.0, rtol=1e-12)
    assert abs(vals[3] - cmath.exp(-2j * math.pi / 4)) < 1e-12


def test_numeric_transform_agrees_with_the_gaussian_closed_form():
    for phi in (0.4, 1.0, 2.0, 2.8):
        for w in (0.0, 0.5, 1.3):
            got = f_phi_numeric(GAUSS, phi, w)
            want = GAUSS.f_phi_modulus(phi, np.asarray([w]))[0]
            assert abs(abs(got) - want) < 1e-7
    exact = f_phi_numeric(GAUSS, math.pi, 0.7)
    want = GAUSS.f_phi(math.pi, np.asarray([0.7]))[0]
    assert abs(exact - want) < 1e-12


def test_numeric_transform_agrees_with_the_fresnel_closed_form():
    for phi in (0.4, 1.2, 2.0, 2.7):
        got = f_phi_numeric(CHI, phi, 0.0)
        want = CHI.f_phi0_value(phi)
        assert abs(got - want) < 1e-6 * (1 + abs(want))


def test_indicator_transform_limits():
    # halfway the rotation acts as a Fourier transform; the integral of the
    # indicator is its length
    assert abs(abs(CHI.f_phi0_value(math.pi / 2)) - 1.0) < 1e-12
    chi3 = sharp_indicator_weight(3.0)
    assert abs(abs(chi3.f_phi0_value(math.pi / 2)) - 3.0) < 1e-12
    # |f_phi(0)|^2 tends to 1/4 at the identity, Fresnel oscillations decay
    assert abs(abs(CHI.f_phi0_value(1e-4)) ** 2 - 0.25) < 0.05
    # on pi Z the sharp transform is the reflected indicator
    vals = CHI.f_phi(math.pi, np.array([-0.5, 0.5]))
    assert abs(vals[0] - cmath.exp(-2j * math.pi / 4)) < 1e-12
    assert abs(vals[1]) == 0.0
    with pytest.raises(UnsupportedOperationError):
        CHI.f_phi(0.5, np.array([0.0]))


def test_kappa_and_bound_constants():
    assert GAUSS.kappa_eta(2.0) == 1.0
    k10 = GAUSS.kappa_eta(10.0)
    assert math.isclose(
        k10, (10 / (2 * math.pi)) ** 5 * math.exp(math.pi - 5), rel_tol=1e-12
    )
    assert math.isinf(CHI.kappa_eta(2.0))
    assert math.isclose(bound_constant(2.0), oracles.CUSP_C2, rel_tol=1e-12)
    with pytest.raises(InvalidArgumentError):
        bound_constant(1.0)


def test_cusp_bound_domain():
    with pytest.raises(InvalidArgumentError):
        cusp_bound(GAUSS, GAUSS, 0.25)
    with pytest.raises(InvalidArgumentError):
        cusp_bound(GAUSS, CHI, 2.0)
    assert cusp_bound(GAUSS, GAUSS, 2.0) == pytest.approx(
        oracles.CUSP_C2 / math.sqrt(2.0), rel=1e-12
    )


def test_cusp_approximation_spot_check():
    rng = random.Random(9)
    for _ in range(100):
        pt = IwasawaPoint(
            x=rng.uniform(0, 2),
            y=math.exp(rng.uniform(math.log(0.5), math.log(500))),
            phi=rng.uniform(0, math.pi),
            xi1=rng.uniform(-0.5, 0.5),
            xi2=rng.uniform(-0.5, 0.5),
        )
        value = abs(theta_pair(GAUSS, GAUSS, pt))
        main = cusp_main_term(GAUSS, GAUSS, pt)
        assert abs(value - main) <= cusp_bound(GAUSS, GAUSS, pt.y) + 1e-9
