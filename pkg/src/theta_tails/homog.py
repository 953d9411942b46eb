"""Fundamental domain of the theta group, reduction, flows, and samplers.

The domain F is the region 0 <= x < 2 outside the open unit disks centred
at 0 and 2; both boundary circles meet at (1, 0) and the lowest interior
points away from the two cusps sit at height sqrt(3)/2. The hyperbolic area
is pi, so normalized Haar on F x [0, pi) factors as

    (1/pi) dx dy / y^2  *  (1/pi) dphi,

and both marginals invert in closed form: the x-marginal CDF is
arcsin(x)/pi on [0, 1] (mirror on [1, 2]), and conditionally on x the height
is h(x)/u for a uniform u. That gives an exact inverse-CDF sampler, no
rejection step, one uniform triple per point.

Randomness is consumed in fixed-size chunks, each owning the generator
seeded by (seed, chunk_index); results are concatenated in chunk order, so
the output stream is bit-identical no matter how many threads execute the
chunks, and a short draw is a prefix of a longer one.
"""
from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import RationalPair, normalize_pair
from .errors import InvalidArgumentError, NumericFailureError
from .orbits import DEFAULT_ORBIT_CAP, OrbitData, enumerate_orbit
from .thetagroup import (
    GAMMA1,
    GAMMA2,
    GAMMA3,
    GAMMA4,
    GammaElement,
    IDENTITY,
    IwasawaPoint,
    act_on_iwasawa,
    wrap_angle,
)

DEFAULT_SEED = 0xC0FFEE
CHUNK_SIZE = 1 << 15
MAX_REDUCE_ITERATIONS = 100_000

NEG_IDENTITY = GammaElement(-1, 0, 0, -1)
# gamma2 gamma1 gamma2^{-1}: inversion in the circle |z - 2| = 1
_INV_AT_TWO = GammaElement(2, -5, 1, -2)

_SQRT3_HALF = math.sqrt(3.0) / 2.0


def lower_boundary(x: float) -> float:
    """Height of the floor of F above x in [0, 2]: the two unit circles."""
    if not 0.0 <= x <= 2.0:
        raise InvalidArgumentError(f"floor is defined for 0 <= x <= 2, got {x}")
    w = 1.0 - abs(1.0 - x)  # distance to the nearer of the centres 0, 2
    return math.sqrt(max(0.0, (1.0 - w) * (1.0 + w)))


def in_fundamental_domain(z: complex) -> bool:
    """Strict interior test: 0 <= Re z < 2, outside both closed unit disks."""
    x, y = z.real, z.imag
    if y <= 0.0 or not (0.0 <= x < 2.0):
        return False
    return x * x + y * y > 1.0 and (x - 2.0) ** 2 + y * y > 1.0


def cusp_region(z: complex) -> str:
    """Which cusp neighbourhood a domain point belongs to.

    Points of F with |z - 1| >= 1 all have y >= sqrt(3)/2 and drift to the
    cusp at infinity; the horoball |z - 1| < 1 belongs to the cusp at 1.
    """
    x, y = z.real, z.imag
    return "one" if (x - 1.0) ** 2 + y * y < 1.0 else "infinity"


@dataclass(frozen=True)
class ReduceResult:
    point: IwasawaPoint
    word_length: int
    word: tuple  # ((generator, power), ...) in order of application
    element: GammaElement


def reduce(point: IwasawaPoint, max_iterations: int = MAX_REDUCE_ITERATIONS) -> ReduceResult:
    """Move a point into F x [0, pi) x [-1/2, 1/2)^2 by a group element.

    The z-part alternates translations by 2 with inversions in whichever
    unit circle the point fell inside; the group element is composed in
    exact integers and applied to the original point once at the end, so
    the returned point and element agree to machine precision. Points that
    land exactly on a boundary circle are accepted where they stand.
    """
    x, y = point.x, point.y
    total = IDENTITY
    word = []
    letters = 0
    for _ in range(max_iterations):
        k = math.floor(x / 2.0)
        if k != 0:
            total = GammaElement(1, -2 * k, 0, 1) * total
            word.append((GAMMA2, -k))
            letters += abs(k)
            x -= 2.0 * k
        r0 = x * x + y * y
        if r0 < 1.0:
            x, y = -x / r0, y / r0
            total = GAMMA1 * total
            word.append((GAMMA1, 1))
            letters += 1
            continue
        wx = x - 2.0
        r2 = wx * wx + y * y
        if r2 < 1.0:
            x, y = 2.0 - wx / r2, y / r2
            total = _INV_AT_TWO * total
            word.extend([(GAMMA2, -1), (GAMMA1, 1), (GAMMA2, 1)])
            letters += 3
            continue
        break
    else:
        raise NumericFailureError(
            f"reduction did not terminate within {max_iterations} iterations"
        )

    reduced = act_on_iwasawa(total, point)
    if wrap_angle(reduced.phi) >= math.pi:
        total = NEG_IDENTITY * total
        word.append((GAMMA1, 2))
        letters += 2
        reduced = act_on_iwasawa(total, point)
    k1 = math.floor(reduced.xi1 + 0.5)
    k2 = math.floor(reduced.xi2 + 0.5)
    if k1 or k2:
        total = GammaElement(1, 0, 0, 1, -k1, -k2) * total
        if k1:
            word.append((GAMMA3, -k1))
        if k2:
            word.append((GAMMA4, -k2))
        letters += abs(k1) + abs(k2)
        reduced = act_on_iwasawa(total, point)
    final = IwasawaPoint(
        x=reduced.x,
        y=reduced.y,
        phi=wrap_angle(reduced.phi),
        xi1=reduced.xi1,
        xi2=reduced.xi2,
    )
    return ReduceResult(point=final, word_length=letters, word=tuple(word), element=total)


def _frame(pt: IwasawaPoint):
    """Matrix n_x a_y k_phi whose bottom row encodes (y, phi)."""
    ry = math.sqrt(pt.y)
    c, s = math.cos(pt.phi), math.sin(pt.phi)
    return (
        (ry * c + (pt.x / ry) * s, -ry * s + (pt.x / ry) * c),
        (s / ry, c / ry),
    )


def _from_frame(m, phi_old: float, c_old: float, d_old: float, pt: IwasawaPoint):
    c, d = m[1]
    den = c * c + d * d
    y = 1.0 / den
    x = (m[0][0] * c + m[0][1] * d) * y
    # right multiplications never move (c, d) across the atan2 cut, so this
    # increment is the continuous lift of the frame angle
    phi = phi_old + (math.atan2(c, d) - math.atan2(c_old, d_old))
    return IwasawaPoint(x=x, y=y, phi=phi, xi1=pt.xi1, xi2=pt.xi2)


def geodesic_flow(pt: IwasawaPoint, t: float) -> IwasawaPoint:
    """Right multiplication by diag(e^(-t/2), e^(t/2)); xi is untouched."""
    m = _frame(pt)
    et = math.exp(-0.5 * t)
    new = ((m[0][0] * et, m[0][1] / et), (m[1][0] * et, m[1][1] / et))
    return _from_frame(new, pt.phi, m[1][0], m[1][1], pt)


def horocycle_flow(pt: IwasawaPoint, u: float) -> IwasawaPoint:
    """Right multiplication by the upper unipotent with parameter u."""
    m = _frame(pt)
    new = (
        (m[0][0], m[0][0] * u + m[0][1]),
        (m[1][0], m[1][0] * u + m[1][1]),
    )
    return _from_frame(new, pt.phi, m[1][0], m[1][1], pt)


# The cusp at 1 is carried to infinity by z -> 1/(1 - z), an SL(2, Z)
# element outside the theta group (its xi action needs the extra half
# shift in the second slot). Conjugation by it identifies the two cusp
# neighbourhoods; images of the horoball |z - 1| < 1 have y >= sqrt(3)/2.
RHO_MATRIX = ((0, 1), (-1, 1))
RHO_SHIFT = (0.0, 0.5)


def apply_rho(pt: IwasawaPoint) -> IwasawaPoint:
    """(z, phi; xi) -> (1/(1-z), phi + arg(1-z); (xi2, -xi1 + xi2 + 1/2))."""
    w = 1.0 - pt.z
    z2 = 1.0 / w
    return IwasawaPoint(
        x=z2.real,
        y=z2.imag,
        phi=pt.phi + cmath.phase(w),
        xi1=pt.xi2,
        xi2=-pt.xi1 + pt.xi2 + 0.5,
    )


def cusp_mass(T: float) -> float:
    """Haar mass of {y > T} in F, equal to 2/(pi T) once T >= 1."""
    if T < 1.0:
        raise InvalidArgumentError(f"closed form requires T >= 1, got {T}")
    return 2.0 / (math.pi * T)


def chunk_generator(seed: int, index: int) -> np.random.Generator:
    """The generator owning chunk `index` of the stream rooted at `seed`."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, index))))


def open_uniforms(rng: np.random.Generator, shape) -> np.ndarray:
    """Uniforms in the open interval (0, 1): 53-bit integers shifted by 1/2."""
    return (rng.integers(0, 1 << 53, size=shape).astype(np.float64) + 0.5) * 2.0**-53


def haar_from_uniforms(u1, u2, u3):
    """Map uniform triples to Haar-distributed (x, y, phi) on F x [0, pi).

    Inverse CDF throughout: x = sin(pi u1) on the left half (u1 < 1/2),
    mirrored through 2 on the right; the floor height comes out of the same
    evaluation as cos(pi u1), never via sqrt(1 - x^2), so the pair (x, h)
    is consistent to the last bit; y = h/u2; phi = pi u3.
    """
    u1 = np.asarray(u1, dtype=np.float64)
    lo = u1 < 0.5
    t = np.where(lo, u1, 1.0 - u1)
    s = np.sin(np.pi * t)
    h = np.cos(np.pi * t)
    x = np.where(lo, s, 2.0 - s)
    y = h / np.asarray(u2, dtype=np.float64)
    phi = np.pi * np.asarray(u3, dtype=np.float64)
    return x, y, phi


def sample_haar(rng: np.random.Generator, size: int | None = None):
    """(z, phi) Haar-distributed on F x [0, pi); scalars when size is None."""
    n = 1 if size is None else int(size)
    u = open_uniforms(rng, (3, n))
    x, y, phi = haar_from_uniforms(u[0], u[1], u[2])
    z = x + 1j * y
    if size is None:
        return complex(z[0]), float(phi[0])
    return z, phi


def _resolve_pair(alpha, beta) -> RationalPair:
    if isinstance(alpha, RationalPair):
        return alpha
    return normalize_pair(alpha, beta)


class MuAbSampler:
    """Deterministic sampler for the lifted measure attached to (alpha, beta).

    Draws (z, phi) from Haar on F x [0, pi) and xi uniformly over the
    window coordinates of the orbit closure of (alpha, beta). Consumption
    is chunked: a chunk always burns a full block of randomness even when
    only part of it is returned, so draw(k) is a prefix of draw(k') for
    k < k', and worker count never changes the stream.
    """

    def __init__(
        self,
        alpha,
        beta=0,
        seed: int = DEFAULT_SEED,
        orbit: OrbitData | None = None,
        orbit_cap: int = DEFAULT_ORBIT_CAP,
    ):
        self.pair = _resolve_pair(alpha, beta)
        self.orbit = orbit if orbit is not None else enumerate_orbit(self.pair, cap=orbit_cap)
        window = self.orbit.window_points()
        self._wx = np.ascontiguousarray(window[:, 0])
        self._wy = np.ascontiguousarray(window[:, 1])
        self.seed = int(seed)
        self._next_chunk = 0
        self._buffer = None
        self._buffer_pos = 0

    def _chunk(self, index: int, count: int) -> dict:
        rng = chunk_generator(self.seed, index)
        u = open_uniforms(rng, (3, CHUNK_SIZE))
        idx = rng.integers(0, self._wx.size, size=CHUNK_SIZE)
        x, y, phi = haar_from_uniforms(u[0], u[1], u[2])
        sl = slice(0, count)
        return {
            "x": x[sl],
            "y": y[sl],
            "phi": phi[sl],
            "xi1": self._wx[idx[sl]],
            "xi2": self._wy[idx[sl]],
        }

    def draw(self, n: int, workers: int = 1) -> dict:
        """n samples as a dict of arrays x, y, phi, xi1, xi2."""
        if n < 1:
            raise InvalidArgumentError(f"sample count must be >= 1, got {n}")
        jobs = []
        remaining = n
        while remaining > 0:
            take = min(remaining, CHUNK_SIZE)
            jobs.append((self._next_chunk, take))
            self._next_chunk += 1
            remaining -= take
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(lambda j: self._chunk(*j), jobs))
        else:
            parts = [self._chunk(*j) for j in jobs]
        return {
            key: np.concatenate([p[key] for p in parts]) for key in parts[0]
        }


def sample_mu_ab(sampler: MuAbSampler) -> IwasawaPoint:
    """Next single draw from the sampler's stream, buffered chunkwise."""
    if sampler._buffer is None or sampler._buffer_pos >= sampler._buffer["x"].size:
        sampler._buffer = sampler.draw(CHUNK_SIZE)
        sampler._buffer_pos = 0
    i = sampler._buffer_pos
    sampler._buffer_pos += 1
    b = sampler._buffer
    return IwasawaPoint(
        x=float(b["x"][i]),
        y=float(b["y"][i]),
        phi=float(b["phi"][i]),
        xi1=float(b["xi1"][i]),
        xi2=float(b["xi2"][i]),
    )
