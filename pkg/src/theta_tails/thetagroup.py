"""The affine theta group: elements, generators, and its two actions.

Elements are pairs (M, v) of a unimodular integer matrix with even products
ac and bd, and an integer shift vector. They act on exact rational torus
points by (M, v).xi = v + M xi mod Z^2, and on Iwasawa coordinates
(z, phi; xi) by the Moebius map with phi advanced by arg(cz + d).
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class GammaElement:
    """Group element ((a, b; c, d); (v1, v2)) with det = 1 and ac, bd even."""

    a: int
    b: int
    c: int
    d: int
    v1: int = 0
    v2: int = 0

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise InvalidArgumentError("matrix must be unimodular")
        if (self.a * self.c) % 2 or (self.b * self.d) % 2:
            raise InvalidArgumentError("matrix is not in the theta group")

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def shift(self) -> tuple[int, int]:
        return (self.v1, self.v2)

    def __mul__(self, other: "GammaElement") -> "GammaElement":
        # (M, v)(M', v') = (MM', v + Mv'), all integer exact
        a, b, c, d = self.a, self.b, self.c, self.d
        return GammaElement(
            a * other.a + b * other.c,
            a * other.b + b * other.d,
            c * other.a + d * other.c,
            c * other.b + d * other.d,
            self.v1 + a * other.v1 + b * other.v2,
            self.v2 + c * other.v1 + d * other.v2,
        )

    def inverse(self) -> "GammaElement":
        a, b, c, d = self.a, self.b, self.c, self.d
        # M^-1 = (d, -b; -c, a); shift maps to -M^-1 v
        return GammaElement(
            d, -b, -c, a, -(d * self.v1 - b * self.v2), -(-c * self.v1 + a * self.v2)
        )


IDENTITY = GammaElement(1, 0, 0, 1)
GAMMA1 = GammaElement(0, -1, 1, 0)
GAMMA2 = GammaElement(1, 2, 0, 1)
GAMMA3 = GammaElement(1, 0, 0, 1, 1, 0)
GAMMA4 = GammaElement(1, 0, 0, 1, 0, 1)


def generators() -> list[GammaElement]:
    """The four standard generators: inversion, translation by 2, two shifts."""
    return [GAMMA1, GAMMA2, GAMMA3, GAMMA4]


def is_theta_group(matrix) -> bool:
    """True iff the unimodular integer matrix has ac and bd both even.

    Accepts ((a, b), (c, d)) nested pairs or a flat (a, b, c, d).
    """
    try:
        (a, b), (c, d) = matrix
    except (TypeError, ValueError):
        try:
            a, b, c, d = matrix
        except (TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"not a 2x2 integer matrix: {matrix!r}") from exc
    if a * d - b * c != 1:
        raise InvalidArgumentError("matrix must have determinant 1")
    return (a * c) % 2 == 0 and (b * d) % 2 == 0


@dataclass(frozen=True)
class TorusPoint:
    """Exact point (r/q, s/q) of the rational torus, numerators mod q."""

    r: int
    s: int
    q: int

    def __post_init__(self):
        if self.q < 1:
            raise InvalidArgumentError("denominator must be positive")
        object.__setattr__(self, "r", self.r % self.q)
        object.__setattr__(self, "s", self.s % self.q)

    def window_coords(self) -> tuple:
        """Coordinates shifted to [-1/2, 1/2)^2, exact Fractions."""
        from fractions import Fraction

        r = self.r - self.q if 2 * self.r >= self.q else self.r
        s = self.s - self.q if 2 * self.s >= self.q else self.s
        return Fraction(r, self.q), Fraction(s, self.q)


@dataclass(frozen=True)
class IwasawaPoint:
    """Coordinates (x + iy, phi; xi1, xi2) with y > 0."""

    x: float
    y: float
    phi: float
    xi1: float = 0.0
    xi2: float = 0.0

    def __post_init__(self):
        if not self.y > 0:
            raise InvalidArgumentError(f"y must be positive, got {self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


def act_on_torus(g: GammaElement, p: TorusPoint) -> TorusPoint:
    """Affine action v + M xi mod Z^2, exact on numerators mod q."""
    r = g.v1 * p.q + g.a * p.r + g.b * p.s
    s = g.v2 * p.q + g.c * p.r + g.d * p.s
    return TorusPoint(r % p.q, s % p.q, p.q)


def act_on_iwasawa(g: GammaElement, pt: IwasawaPoint) -> IwasawaPoint:
    """Moebius action on z, shear on phi, affine action on xi.

    phi accumulates the principal arg(cz + d); callers that need a canonical
    representative reduce mod 2 pi themselves.
    """
    z = pt.z
    w = g.c * z + g.d
    z2 = (g.a * z + g.b) / w
    return IwasawaPoint(
        x=z2.real,
        y=z2.imag,
        phi=pt.phi + cmath.phase(w),
        xi1=g.v1 + g.a * pt.xi1 + g.b * pt.xi2,
        xi2=g.v2 + g.c * pt.xi1 + g.d * pt.xi2,
    )


def wrap_angle(phi: float, period: float = 2 * cmath.pi) -> float:
    """Reduce an angle into [0, period)."""
    out = phi % period
    # fmod can return the period itself after rounding
    return 0.0 if out >= period else out
