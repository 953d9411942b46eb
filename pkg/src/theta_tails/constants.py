"""Closed-form tail constants and the variance integral behind them.

The heavy-tail coefficient factors as T = C(q) * D / pi^2, where C(q) is a
purely arithmetic rational depending on the denominator q = 2^l m (m odd)
and on the parities of the numerators, and D is an integral over the circle
of the paired transformed weights at the origin,

    D(f1, f2) = integral over (0, pi) of |f1_phi(0)|^2 |f2_phi(0)|^2 dphi.

For the Gaussian pair D = pi exactly; for the pair (chi_1, chi_r) of sharp
cutoffs it has the elementary closed form D_rat_closed below. The numerical
evaluator integrates the Fresnel moduli on a mesh graded like the local
oscillation frequency, which stays cheap even though half the oscillations
crowd each endpoint.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from .arith import RationalPair, dedekind_psi, normalize_pair
from .errors import InvalidArgumentError, NumericFailureError

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def C_of_q(pair: RationalPair) -> Fraction:
    """Arithmetic factor of the tail constant, exact.

    With q = 2^l m, m odd: 2/psi(m) when l = 0, or when l = 1 with at least
    one even numerator; 0 when l = 1 with both numerators odd (the
    compact-support case); 1/(2^(l-1) psi(m)) when l >= 2.
    """
    psi_m = dedekind_psi(pair.m)
    if pair.ell == 0:
        return Fraction(2, psi_m)
    if pair.ell == 1:
        if pair.a % 2 == 1 and pair.b % 2 == 1:
            return Fraction(0)
        return Fraction(2, psi_m)
    return Fraction(1, 2 ** (pair.ell - 1) * psi_m)


def table_reciprocal_C(q_max: int) -> list[Fraction]:
    """1/C(q) for q = 1..q_max under the generic-numerator convention.

    Generic means numerators that do not trigger the vanishing l = 1 case,
    so every entry is finite: psi(m)/2 for l <= 1 and 2^(l-1) psi(m) for
    l >= 2.
    """
    if q_max < 1:
        raise InvalidArgumentError(f"q_max must be >= 1, got {q_max}")
    out = []
    for q in range(1, q_max + 1):
        ell = (q & -q).bit_length() - 1
        m = q >> ell
        psi_m = dedekind_psi(m)
        if ell <= 1:
            out.append(Fraction(psi_m, 2))
        else:
            out.append(Fraction(2 ** (ell - 1) * psi_m))
    return out


def D_rat_closed(r: float) -> float:
    """D(chi_1, chi_r) in closed form for r >= 1.

    2 log 2 at r = 1; for r > 1,
    2 r acoth(r) + (1/2) log(r^2 - 1) + (r^2/2) log(1 - 1/r^2).
    Continuous as r -> 1+ (the last two terms cancel in the limit).
    """
    if not (r >= 1.0):
        raise InvalidArgumentError(f"cutoff ratio must satisfy r >= 1, got {r}")
    if r == 1.0:
        return 2.0 * math.log(2.0)
    return (
        2.0 * r * math.atanh(1.0 / r)
        + 0.5 * math.log(r * r - 1.0)
        + 0.5 * r * r * math.log1p(-1.0 / (r * r))
    )


def _oscillation_rate(w1, w2) -> float:
    """Fresnel phase cycles per unit of cot(phi), summed over the pair."""
    rate = 0.0
    for w in (w1, w2):
        r = getattr(w, "r", None)
        if r is not None:
            rate += r * r
    return rate


def D_rat_numeric(w1, w2, tol: float = 1e-4) -> float:
    """D(f1, f2) by quadrature, independent of the closed forms.

    Smooth pairs (both weights regular) go to an adaptive integrator over
    the full interval. Pairs involving a sharp cutoff oscillate like
    cot(phi) near the endpoints; there the integral over (eps, pi - eps) is
    done on a graded Gauss-Legendre mesh holding about one Fresnel cycle
    per panel, and the omitted endpoint mass is bounded by the weights'
    documented edge bounds and absorbed into tol.
    """
    if tol <= 0:
        raise InvalidArgumentError(f"tol must be positive, got {tol}")
    if w1.regular and w2.regular:

        def smooth(phi):
            v1 = abs(w1.f_phi0_value(phi)) ** 2
            v2 = abs(w2.f_phi0_value(phi)) ** 2
            return v1 * v2

        val, err = quad(smooth, 0.0, math.pi, epsabs=tol / 2, epsrel=0.0, limit=200)
        if err > tol:
            raise NumericFailureError(
                f"smooth variance integral stalled at error {err:.2e}"
            )
        return float(val)

    edge = w1.edge_sq_bound * w2.edge_sq_bound
    eps = min(1e-3, tol / (8.0 * edge))
    if eps >= 0.25 * math.pi:
        raise InvalidArgumentError(f"tol={tol} leaves no integration interval")
    rate = max(_oscillation_rate(w1, w2), 1.0)

    # integrand is even about pi/2 for real weights (moduli depend on |cot|)
    panels = [eps]
    phi = eps
    while phi < 0.5 * math.pi:
        s = math.sin(phi)
        step = max(1e-9, min(0.05, 2.0 * s * s / rate))
        phi = min(phi + step, 0.5 * math.pi)
        panels.append(phi)
    edges = np.asarray(panels)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    weights = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()

    v1 = np.abs(w1.f_phi0_values(nodes)) ** 2
    v2 = np.abs(w2.f_phi0_values(nodes)) ** 2
    return 2.0 * float(np.dot(weights, v1 * v2))


@dataclass(frozen=True)
class TailConstant:
    """Heavy-tail coefficient T = C(q) * D / pi^2 with its factors."""

    pair: RationalPair
    r: float
    c_of_q: Fraction
    d_rat: float
    value: float


def tail_constant(alpha, beta=0, r: float = 1.0) -> TailConstant:
    """Coefficient of R^-4 in the survival function of |S_N conj(S_rN)|/N."""
    pair = alpha if isinstance(alpha, RationalPair) else normalize_pair(alpha, beta)
    c = C_of_q(pair)
    d = D_rat_closed(r)
    return TailConstant(
        pair=pair, r=float(r), c_of_q=c, d_rat=d, value=float(c) * d / math.pi**2
    )


def write_constants_csv(path, q_max: int) -> None:
    """CSV with columns q, one_over_C (exact fraction), C (9 significant digits)."""
    table = table_reciprocal_C(q_max)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["q", "one_over_C", "C"])
        for q, inv in enumerate(table, start=1):
            writer.writerow([q, str(inv), format(float(Fraction(1) / inv), ".9g")])
