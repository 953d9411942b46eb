"""Torus orbits of rational pairs: BFS enumeration and closed-form counts.

The orbit of (a/q, b/q) under the affine group is a finite subset of the
q-division points of the torus. The linear generators suffice for closure
(the integer shifts fix every point mod Z^2), and on a finite set the
semigroup they generate is already a group, so a forward BFS reaches the
whole orbit. Counts of the orbit and of its intersections with the special
lines xi2 = 0 and xi2 - xi1 = +-1/2 have closed forms which the test suite
checks against this enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np

from .arith import (
    RationalPair,
    euler_phi,
    factorize,
    jordan_j2,
    normalize_pair,
    split_two_power,
)
from .errors import InvalidArgumentError, ResourceLimitError
from .thetagroup import TorusPoint

DEFAULT_ORBIT_CAP = 2000


@dataclass(frozen=True)
class Representative:
    """Orbit representative tag: Origin, Rep10(q') for (1/q', 0), or Rep11(q')
    for (1/q', 1/q')."""

    kind: str  # "Origin" | "Rep10" | "Rep11"
    q: int

    def __str__(self) -> str:
        return "Origin" if self.kind == "Origin" else f"{self.kind}({self.q})"

    def point_mod(self, q: int) -> tuple[int, int]:
        """The representative as numerators mod q (q must be a multiple of self.q)."""
        if self.kind == "Origin":
            return (0, 0)
        scale = q // self.q
        return (scale, 0) if self.kind == "Rep10" else (scale, scale)


@dataclass
class OrbitData:
    """An enumerated orbit with its counts and line distances.

    points holds the numerators (r, s) mod q as an (n, 2) array, sorted by
    code r*q + s. theta_min_infty is the smallest |xi2| over points off the
    line xi2 = 0 (None when the orbit lies inside that line); theta_min_one
    is the smallest distance |xi2 - xi1 -+ 1/2| over points off the
    corresponding half-shift line, never None for a nonempty orbit.
    """

    pair: RationalPair
    points: np.ndarray
    size_S: int
    size_U: int
    size_V: int
    representative: Representative
    theta_min_infty: Fraction | None
    theta_min_one: Fraction | None

    def contains(self, r: int, s: int) -> bool:
        q = self.pair.q
        code = (r % q) * q + (s % q)
        codes = self.points[:, 0] * q + self.points[:, 1]
        idx = np.searchsorted(codes, code)
        return idx < codes.size and codes[idx] == code

    def torus_points(self) -> list[TorusPoint]:
        q = self.pair.q
        return [TorusPoint(int(r), int(s), q) for r, s in self.points]

    def window_points(self) -> np.ndarray:
        """Float coordinates of the orbit in the window [-1/2, 1/2)^2."""
        q = self.pair.q
        shifted = np.where(2 * self.points >= q, self.points - q, self.points)
        return shifted / float(q)


def _bfs_codes(q: int, seeds: list[tuple[int, int]]) -> np.ndarray:
    """Sorted codes r*q + s of the orbit closure of seeds mod q.

    Generators applied: the order-4 inversion (r, s) -> (-s, r) and the
    shear (r, s) -> (r + 2s, s), with their inverses for fast mixing. The
    two unit shifts act trivially mod Z^2 and contribute nothing here.
    """
    visited = np.zeros(q * q, dtype=bool)
    frontier = np.unique(
        np.array([(r % q) * q + (s % q) for r, s in seeds], dtype=np.int64)
    )
    visited[frontier] = True
    while frontier.size:
        r, s = frontier // q, frontier % q
        nxt = np.concatenate(
            [
                ((q - s) % q) * q + r,  # inversion
                s * q + (q - r) % q,  # its inverse
                ((r + 2 * s) % q) * q + s,  # shear
                ((r - 2 * s) % q) * q + s,  # shear inverse
            ]
        )
        nxt = np.unique(nxt)
        nxt = nxt[~visited[nxt]]
        visited[nxt] = True
        frontier = nxt
    return np.flatnonzero(visited).astype(np.int64)


def _count_U(codes: np.ndarray, q: int) -> int:
    # xi2 integer <=> s = 0 mod q
    return int(np.count_nonzero(codes % q == 0))


def _count_V(codes: np.ndarray, q: int) -> int:
    # xi2 - xi1 = 1/2 mod 1 <=> 2(s - r) = q mod 2q; impossible for odd q
    if q % 2:
        return 0
    r, s = codes // q, codes % q
    return int(np.count_nonzero((2 * (s - r)) % (2 * q) == q))


def _theta_mins_from_codes(
    codes: np.ndarray, q: int
) -> tuple[Fraction | None, Fraction | None]:
    r, s = codes // q, codes % q
    # vertical distances: min over s != 0 of min(s, q - s)/q
    off_u = s[s != 0]
    t_inf = None
    if off_u.size:
        t_inf = Fraction(int(np.min(np.minimum(off_u, q - off_u))), q)
    # distances to the two half-shift lines in window coordinates; a point on
    # one line still contributes its distance to the other
    rw = np.where(2 * r >= q, r - q, r)
    sw = np.where(2 * s >= q, s - q, s)
    dd = 2 * (sw - rw)  # = 2q(xi2 - xi1), ranges over (-4q, 4q)
    best = None
    for line in (q, -q):  # L_V^+ at dd = q, L_V^- at dd = -q
        off = dd[dd != line]
        if off.size:
            cand = int(np.min(np.abs(off - line)))
            best = cand if best is None else min(best, cand)
    t_one = None if best is None else Fraction(best, 2 * q)
    return t_inf, t_one


def _representative_closed(pair: RationalPair) -> Representative:
    """Representative of a canonical pair by the parity rule.

    For gcd(a, b, q) = 1 the exact denominator is orbit-invariant, so the
    representative's denominator equals q; both-odd parity (for even q) is
    preserved by the generators and selects the diagonal representative.
    """
    if pair.q == 1:
        return Representative("Origin", 1)
    if pair.q % 2 == 0 and pair.a % 2 == 1 and pair.b % 2 == 1:
        m_part = pair.m // gcd(pair.a, pair.b, pair.m)
        return Representative("Rep11", (1 << pair.ell) * m_part)
    return Representative("Rep10", pair.q)


def which_representative(
    pair: RationalPair, cap: int = DEFAULT_ORBIT_CAP
) -> Representative:
    """Classify the orbit of a canonical pair.

    Integer pair -> Origin; even q with both numerators odd -> the diagonal
    representative by the closed parity rule; otherwise membership of the
    candidate points (1/q', 0), q' | q, is resolved against the BFS closure.
    """
    if pair.is_integer_pair:
        return Representative("Origin", 1)
    if pair.q % 2 == 0 and pair.a % 2 == 1 and pair.b % 2 == 1:
        return _representative_closed(pair)
    if pair.q > cap:
        raise ResourceLimitError(
            f"q={pair.q} exceeds the enumeration cap {cap}; raise the cap to classify"
        )
    codes = _bfs_codes(pair.q, [(pair.a, pair.b)])
    q = pair.q
    for d in sorted(divisors(q), reverse=True):
        if d == 1:
            continue
        code = (q // d) * q + 0
        idx = np.searchsorted(codes, code)
        if idx < codes.size and codes[idx] == code:
            return Representative("Rep10", d)
    return Representative("Origin", 1)


def enumerate_orbit(pair: RationalPair, cap: int = DEFAULT_ORBIT_CAP) -> OrbitData:
    """BFS closure of a canonical pair with all counts filled in."""
    q = pair.q
    if q > cap:
        raise ResourceLimitError(
            f"q={q} exceeds the enumeration cap {cap} (memory grows like q^2)"
        )
    codes = _bfs_codes(q, [(pair.a, pair.b)])
    t_inf, t_one = _theta_mins_from_codes(codes, q)
    if pair.q % 2 == 0 and pair.a % 2 == 1 and pair.b % 2 == 1:
        rep = _representative_closed(pair)
    elif pair.is_integer_pair:
        rep = Representative("Origin", 1)
    else:
        rep = Representative("Origin", 1)
        for d in sorted(divisors(q), reverse=True):
            if d == 1:
                continue
            code = (q // d) * q
            idx = np.searchsorted(codes, code)
            if idx < codes.size and codes[idx] == code:
                rep = Representative("Rep10", d)
                break
    points = np.stack([codes // q, codes % q], axis=1)
    return OrbitData(
        pair=pair,
        points=points,
        size_S=int(codes.size),
        size_U=_count_U(codes, q),
        size_V=_count_V(codes, q),
        representative=rep,
        theta_min_infty=t_inf,
        theta_min_one=t_one,
    )


def theta_mins(orbit: OrbitData) -> tuple[Fraction | None, Fraction | None]:
    """Minimal line distances of an enumerated orbit, window coordinates."""
    q = orbit.pair.q
    codes = orbit.points[:, 0] * q + orbit.points[:, 1]
    return _theta_mins_from_codes(codes, q)


def divisors(n: int) -> list[int]:
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def orbit_size_formula(pair: RationalPair) -> int:
    """Closed form for the orbit cardinality of a canonical pair."""
    rep = _representative_closed(pair)
    if rep.kind == "Origin":
        return 1
    ell, m = split_two_power(rep.q)
    if rep.kind == "Rep10":
        return jordan_j2(m) if ell == 0 else (1 << (2 * ell - 1)) * jordan_j2(m)
    # diagonal representative exists only for even q'
    return 4 ** (ell - 1) * jordan_j2(m)


def count_U_formula(pair: RationalPair) -> int:
    """Closed form for the count of orbit points on the line xi2 = 0."""
    rep = _representative_closed(pair)
    if rep.kind == "Origin":
        return 1
    return euler_phi(rep.q) if rep.kind == "Rep10" else 0


def count_V_formula(pair: RationalPair) -> int:
    """Closed form for the count of orbit points on xi2 - xi1 = +-1/2."""
    rep = _representative_closed(pair)
    if rep.kind == "Origin":
        return 0
    if rep.kind == "Rep10":
        return 2 * euler_phi(rep.q) if rep.q % 4 == 2 else 0
    return euler_phi(rep.q) if rep.q % 4 == 0 else 0


def leading_constant(pair: RationalPair) -> Fraction:
    """(2|U| + |V|)/|S| as an exact fraction, from the closed forms.

    Vanishes exactly for the compact-support class; equal to the arithmetic
    tail factor of the pair's denominator otherwise.
    """
    return Fraction(
        2 * count_U_formula(pair) + count_V_formula(pair), orbit_size_formula(pair)
    )


def orbit_representatives(q: int) -> list[tuple[RationalPair, int]]:
    """Complete set of orbit representatives of the q-division points.

    One orbit per divisor q' > 1 with representative (1/q', 0), one per even
    divisor with representative (1/q', 1/q'), plus the fixed origin. Sizes
    come from the closed form and sum to q^2.
    """
    if q < 1:
        raise InvalidArgumentError("q must be a positive integer")
    reps: list[tuple[RationalPair, int]] = []
    origin = normalize_pair(0, 0)
    reps.append((origin, 1))
    for d in divisors(q):
        if d > 1:
            p10 = normalize_pair(Fraction(1, d), 0)
            reps.append((p10, orbit_size_formula(p10)))
        if d % 2 == 0:
            p11 = normalize_pair(Fraction(1, d), Fraction(1, d))
            reps.append((p11, orbit_size_formula(p11)))
    reps.sort(key=lambda item: (-item[1], item[0].b, -item[0].q))
    return reps


@dataclass(frozen=True)
class OrbitClass:
    """One orbit inside the q-division points, as found by the partition."""

    representative: Representative
    size: int
    size_U: int
    size_V: int


@lru_cache(maxsize=128)
def orbit_partition(q: int) -> tuple[tuple[OrbitClass, ...], np.ndarray]:
    """Label every q-division point with its orbit.

    Returns (classes, labels) where labels[r*q + s] indexes into classes.
    Each orbit is enumerated once; the class equation (sizes summing to q^2)
    is asserted. Shared by the bulk formula-vs-enumeration checks, which
    would otherwise rerun the BFS for every pair in the same orbit.
    """
    labels = np.full(q * q, -1, dtype=np.int32)
    classes: list[OrbitClass] = []
    for rep_pair, _ in orbit_representatives(q):
        rep = _representative_closed(rep_pair)
        seed = rep.point_mod(q)
        if labels[seed[0] * q + seed[1]] >= 0:
            continue
        codes = _bfs_codes(q, [seed])
        labels[codes] = len(classes)
        classes.append(
            OrbitClass(
                representative=rep,
                size=int(codes.size),
                size_U=_count_U(codes, q),
                size_V=_count_V(codes, q),
            )
        )
    if np.any(labels < 0):
        raise AssertionError(f"orbit partition of q={q} did not cover the torus")
    return tuple(classes), labels


def orbit_report(orbit: OrbitData, include_points: bool = False) -> dict:
    """JSON-ready report of an enumerated orbit (exact values as strings)."""
    pair = orbit.pair
    report = {
        "pair": {
            "alpha": str(pair.alpha),
            "beta": str(pair.beta),
            "a": pair.a,
            "b": pair.b,
            "q": pair.q,
            "kind": pair.kind,
        },
        "sizes": {"S": orbit.size_S, "U": orbit.size_U, "V": orbit.size_V},
        "representative": str(orbit.representative),
        "leading_constant": str(leading_constant(pair)),
        "theta_min_infty": None
        if orbit.theta_min_infty is None
        else str(orbit.theta_min_infty),
        "theta_min_one": None
        if orbit.theta_min_one is None
        else str(orbit.theta_min_one),
    }
    if include_points:
        report["points"] = [[int(r), int(s)] for r, s in orbit.points]
    return report
