"""Arithmetic and analytic factors of the tail coefficient."""

import csv
import math
from fractions import Fraction

import pytest

import oracles
from theta_tails import (
    C_of_q,
    D_rat_closed,
    D_rat_numeric,
    InvalidArgumentError,
    gaussian_weight,
    normalize_pair,
    sharp_indicator_weight,
    table_reciprocal_C,
    tail_constant,
    write_constants_csv,
)


def test_arithmetic_factor_case_split():
    # odd q
    assert C_of_q(normalize_pair(Fraction(1, 5), 0)) == Fraction(1, 3)
    # single factor of 2, one even numerator
    assert C_of_q(normalize_pair(Fraction(1, 2), 0)) == Fraction(2)
    assert C_of_q(normalize_pair(Fraction(1, 6), 0)) == Fraction(1, 2)
    # single factor of 2, both numerators odd: compact support, zero constant
    assert C_of_q(normalize_pair(Fraction(1, 2), Fraction(1, 2))) == 0
    assert C_of_q(normalize_pair(Fraction(1, 6), Fraction(1, 6))) == 0
    # at least two factors of 2
    assert C_of_q(normalize_pair(Fraction(1, 8), 0)) == Fraction(1, 4)
    assert C_of_q(normalize_pair(Fraction(1, 8), Fraction(1, 8))) == Fraction(1, 4)
    assert C_of_q(normalize_pair(Fraction(1, 12), 0)) == Fraction(1, 8)


def test_reciprocal_table_matches_frozen_and_brute_force():
    table = table_reciprocal_C(100)
    assert table == oracles.RECIPROCAL_C_FIRST_100
    assert table == [oracles.reciprocal_c_brute(q) for q in range(1, 101)]


def test_reciprocal_table_agrees_with_the_pair_constant():
    # the table lists the generic branch, which (1/q, 0) always hits
    table = table_reciprocal_C(100)
    for q in range(1, 101):
        pair = normalize_pair(Fraction(1, q), 0)
        assert C_of_q(pair) * table[q - 1] == 1


def test_csv_writer_roundtrip(tmp_path):
    path = tmp_path / "constants.csv"
    write_constants_csv(path, 12)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["q", "one_over_C", "C"]
    assert len(rows) == 13
    assert rows[1] == ["1", "1/2", "2"]
    assert rows[5] == ["5", "3", "0.333333333"]
    assert rows[12] == ["12", "8", "0.125"]


# ---------------------------------------------------------------------------
# the analytic factor

def test_closed_form_values():
    assert math.isclose(D_rat_closed(1), oracles.TWO_LOG_TWO, rel_tol=1e-15)
    assert math.isclose(D_rat_closed(2), oracles.D_RAT_AT_2, rel_tol=1e-13)


def test_closed_form_is_continuous_at_one_and_increasing():
    assert abs(D_rat_closed(1 + 1e-9) - oracles.TWO_LOG_TWO) < 1e-6
    grid = [1.0, 1.5, 2.0, 4.0, 10.0, 100.0]
    vals = [D_rat_closed(r) for r in grid]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_closed_form_rejects_r_below_one():
    with pytest.raises(InvalidArgumentError):
        D_rat_closed(0.5)


def test_gaussian_pair_integral_is_pi():
    g = gaussian_weight()
    assert abs(D_rat_numeric(g, g, tol=1e-8) - math.pi) < 1e-8


def test_indicator_pair_integral_matches_the_closed_form():
    chi = sharp_indicator_weight(1.0)
    assert abs(D_rat_numeric(chi, chi) - oracles.TWO_LOG_TWO) < 1e-3
    chi2 = sharp_indicator_weight(2.0)
    assert abs(D_rat_numeric(chi, chi2) - oracles.D_RAT_AT_2) < 1e-3


# ---------------------------------------------------------------------------
# assembled coefficient

def test_tail_constant_assembly():
    tc = tail_constant(Fraction(1, 2), 0)
    assert tc.c_of_q == 2
    assert math.isclose(tc.value, oracles.WEYL_HALF_TAIL, rel_tol=1e-13)
    assert math.isclose(tc.value, float(tc.c_of_q) * tc.d_rat / math.pi**2, rel_tol=1e-15)

    compact = tail_constant(Fraction(1, 6), Fraction(1, 6))
    assert compact.value == 0.0

    stretched = tail_constant(Fraction(1, 2), 0, r=2.0)
    assert math.isclose(
        stretched.value, 2 * oracles.D_RAT_AT_2 / math.pi**2, rel_tol=1e-13
    )

    with pytest.raises(InvalidArgumentError):
        tail_constant(Fraction(1, 2), 0, r=0.25)
