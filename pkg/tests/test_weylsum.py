"""Phase-exact Weyl sums against exact-rational recomputation."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from theta_tails import (
    InvalidArgumentError,
    WeightFunction,
    WeylSumSpec,
    gaussian_weight,
    normalize_pair,
    normalized_product,
    partial_sums,
    sharp_indicator_weight,
    weighted_weyl_sum,
    weyl_sum,
    weyl_values_batch,
)
from theta_tails.weylsum import frac, reduced_product, two_prod, veltkamp_split

small_fractions = st.fractions(min_value=-2, max_value=2, max_denominator=24)
xs_floats = st.floats(min_value=-4.0, max_value=4.0)


@given(
    xs_floats,
    small_fractions,
    small_fractions,
    small_fractions,
    st.integers(min_value=1, max_value=200),
)
def test_weyl_sum_matches_exact_rational_phases(x, alpha, beta, zeta, N):
    # the float x is itself a dyadic rational; the reference evaluates the
    # very same real number, so the comparison isolates summation error
    spec = WeylSumSpec(alpha=alpha, beta=beta, zeta=float(zeta), N=N)
    got = weyl_sum(x, spec)
    want = oracles.weyl_sum_exact(Fraction(x), alpha, beta, zeta, N)
    assert abs(got - want) <= 1e-11 * (1 + abs(want))


def test_float_parameters_take_the_float_path():
    # irrational-looking float alpha/beta; cross-check against the oracle at
    # the exact dyadic values the floats denote
    x, alpha, beta = 0.7548776662466927, 0.41421356237309515, 1.3222677868380702
    spec = WeylSumSpec(alpha=alpha, beta=beta, zeta=0.0, N=400)
    assert spec.rational_parts() is None
    got = weyl_sum(x, spec)
    want = oracles.weyl_sum_exact(
        Fraction(x), Fraction(alpha), Fraction(beta), Fraction(0), 400
    )
    assert abs(got - want) <= 1e-9 * (1 + abs(want))


def test_rational_parts_keeps_raw_numerators():
    spec = WeylSumSpec(alpha=Fraction(7, 3), beta=Fraction(-5, 4), zeta=0.0, N=10)
    a, b, q = spec.rational_parts()
    assert Fraction(a, q) == Fraction(7, 3)
    assert Fraction(b, q) == Fraction(-5, 4)


@given(xs_floats, small_fractions, small_fractions, st.integers(min_value=1, max_value=150))
def test_alpha_is_periodic_but_beta_is_not(x, alpha, beta, N):
    base = weyl_sum(x, WeylSumSpec(alpha=alpha, beta=beta, zeta=0.0, N=N))
    shifted = weyl_sum(x, WeylSumSpec(alpha=alpha + 1, beta=beta, zeta=0.0, N=N))
    assert abs(base - shifted) <= 1e-12 * (1 + abs(base))
    # beta + 1 multiplies each term by e(n x): a different sum unless x is
    # nearly integral
    beta_shift = weyl_sum(x, WeylSumSpec(alpha=alpha, beta=beta + 1, zeta=0.0, N=N))
    want = oracles.weyl_sum_exact(Fraction(x), alpha, beta + 1, Fraction(0), N)
    assert abs(beta_shift - want) <= 1e-11 * (1 + abs(want))


def test_beta_shift_changes_the_value_off_integers():
    x = math.sqrt(2) - 1
    spec = WeylSumSpec(alpha=Fraction(1, 3), beta=Fraction(0), zeta=0.0, N=50)
    shifted = WeylSumSpec(alpha=Fraction(1, 3), beta=Fraction(1), zeta=0.0, N=50)
    assert abs(weyl_sum(x, spec) - weyl_sum(x, shifted)) > 1e-6


@given(xs_floats, small_fractions, small_fractions, st.integers(min_value=1, max_value=150))
def test_conjugation_symmetry(x, alpha, beta, N):
    # zeta rides inside the x factor, so negating x conjugates every term
    fwd = weyl_sum(x, WeylSumSpec(alpha=alpha, beta=beta, zeta=0.25, N=N))
    bwd = weyl_sum(-x, WeylSumSpec(alpha=-alpha, beta=beta, zeta=0.25, N=N))
    assert abs(fwd - bwd.conjugate()) <= 1e-10 * (1 + abs(fwd))


def test_partial_sums_walk_in_unit_steps():
    x = 0.3819660112501051
    spec = WeylSumSpec(alpha=Fraction(1, 7), beta=Fraction(2, 7), zeta=0.1, N=500)
    sums = partial_sums(x, spec)
    assert sums.shape == (500,)
    steps = np.diff(sums)
    assert np.allclose(np.abs(steps), 1.0, atol=1e-12)
    assert abs(sums[-1] - weyl_sum(x, spec)) < 1e-10
    assert abs(sums[0]) == pytest.approx(1.0, abs=1e-12)


def test_spec_validation():
    with pytest.raises(InvalidArgumentError):
        WeylSumSpec(alpha=0, beta=0, zeta=0.0, N=0)


# ---------------------------------------------------------------------------
# weighted sums

def test_indicator_weight_reproduces_the_sharp_sum():
    x = 1.2360679774997896
    spec = WeylSumSpec(alpha=Fraction(1, 8), beta=Fraction(3, 8), zeta=0.0, N=120)
    sharp = weyl_sum(x, spec)
    weighted = weighted_weyl_sum(sharp_indicator_weight(1.0), x, spec)
    assert abs(weighted - sharp) < 1e-12 * (1 + abs(sharp))


def test_indicator_weight_with_stretch_reproduces_the_longer_sum():
    x = 0.5235987755982988
    spec = WeylSumSpec(alpha=Fraction(2, 5), beta=Fraction(0), zeta=0.0, N=80)
    longer = WeylSumSpec(alpha=Fraction(2, 5), beta=Fraction(0), zeta=0.0, N=200)
    weighted = weighted_weyl_sum(sharp_indicator_weight(2.5), x, spec)
    assert abs(weighted - weyl_sum(x, longer)) < 1e-11 * (1 + abs(weighted))


@settings(max_examples=20)
@given(xs_floats, small_fractions, small_fractions, st.integers(min_value=5, max_value=80))
def test_gaussian_weighted_sum_matches_the_two_sided_oracle(x, alpha, beta, N):
    g = gaussian_weight()
    spec = WeylSumSpec(alpha=alpha, beta=beta, zeta=0.0, N=N)
    got = weighted_weyl_sum(g, x, spec)
    half = int(g.support_radius(1e-18) * N) + 1
    want = oracles.weighted_weyl_sum_exact(
        lambda n: math.exp(-math.pi * (n / N) ** 2),
        Fraction(x), alpha, beta, Fraction(0), N, half,
    )
    assert abs(got - want) <= 1e-9 * (1 + abs(want))


def test_nondecaying_weight_is_rejected():
    class Flat(WeightFunction):
        name = "flat"
        regular = False
        eta = None

        def evaluate(self, w):
            return np.ones_like(np.asarray(w, dtype=float))

        def support_radius(self, tol):
            return math.inf

    spec = WeylSumSpec(alpha=Fraction(1, 3), beta=0, zeta=0.0, N=10)
    with pytest.raises(InvalidArgumentError):
        weighted_weyl_sum(Flat(), 0.5, spec)


# ---------------------------------------------------------------------------
# normalized products and the batch kernel

def test_normalized_product_consistency():
    x = 2.718281828459045
    spec = WeylSumSpec(alpha=Fraction(1, 2), beta=Fraction(0), zeta=0.0, N=100)
    val = normalized_product(x, spec)
    assert abs(val - weyl_sum(x, spec) * weyl_sum(x, spec).conjugate() / 100) < 1e-12
    big = WeylSumSpec(alpha=Fraction(1, 2), beta=Fraction(0), zeta=0.0, N=250)
    val2 = normalized_product(x, spec, r=2.5)
    assert abs(val2 - weyl_sum(x, spec) * weyl_sum(x, big).conjugate() / 100) < 1e-12
    with pytest.raises(InvalidArgumentError):
        normalized_product(x, spec, r=0.9)


@pytest.mark.parametrize("r", [1.0, 2.0])
def test_batch_kernel_matches_the_scalar_route(r):
    rng = np.random.default_rng(7)
    xs = np.concatenate([rng.normal(size=12) * 3, rng.uniform(0, 1, size=8)])
    pair = normalize_pair(Fraction(1, 2), 0)
    got = weyl_values_batch(xs, pair, 60, r=r)
    for x, v in zip(xs, got):
        spec = WeylSumSpec(alpha=pair.alpha, beta=pair.beta, zeta=0.0, N=60)
        assert abs(v - abs(normalized_product(float(x), spec, r=r))) < 1e-9


def test_batch_kernel_rejects_huge_arguments():
    pair = normalize_pair(Fraction(1, 2), 0)
    with pytest.raises(InvalidArgumentError):
        weyl_values_batch(np.array([2.0**31]), pair, 10)


# ---------------------------------------------------------------------------
# double-double helpers

scaled = st.floats(min_value=-1e8, max_value=1e8).filter(
    lambda v: v == 0.0 or abs(v) >= 1e-30  # stay clear of denormal products
)


@given(scaled, scaled)
def test_two_prod_is_an_exact_split(a, b):
    p, e = two_prod(a, b)
    assert p == a * b
    assert Fraction(a) * Fraction(b) == Fraction(p) + Fraction(e)


@given(scaled)
def test_veltkamp_split_is_exact(a):
    hi, lo = veltkamp_split(a)
    assert hi + lo == a
    assert Fraction(hi) + Fraction(lo) == Fraction(a)


@given(st.floats(min_value=-1e15, max_value=1e15))
def test_frac_is_correctly_rounded_mod_one(v):
    # frac lands in [0, 1]; the closed right end appears only when the true
    # fractional part of a tiny negative v rounds up to 1
    f = float(frac(v))
    assert 0.0 <= f <= 1.0
    d = (Fraction(f) - Fraction(v)) % 1
    assert min(d, 1 - d) <= Fraction(1, 2**52)


@given(st.floats(min_value=-1e7, max_value=1e7), st.floats(min_value=-1e4, max_value=1e4))
def test_reduced_product_is_the_true_product_mod_one(a, b):
    got = reduced_product(a, b)
    d = (Fraction(a) * Fraction(b) - Fraction(float(got))) % 1
    assert min(d, 1 - d) < Fraction(1, 10**13)
