"""Exact arithmetic functions and canonicalization of rational parameter pairs.

Everything here is integer/Fraction exact. The multiplicative functions are
evaluated from a trial-division factorization; denominators in this package
stay at desk scale (a few thousand), far below the prime table bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import InvalidArgumentError

_PRIME_BOUND = 10 ** 6
_SMALL_PRIMES: list[int] | None = None


def _primes() -> list[int]:
    # sieve once, on first use; 10^6 bound comfortably covers isqrt of any
    # input this package accepts
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        sieve = bytearray(b"\x01") * (_PRIME_BOUND + 1)
        sieve[0] = sieve[1] = 0
        for p in range(2, isqrt(_PRIME_BOUND) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        _SMALL_PRIMES = [i for i, f in enumerate(sieve) if f]
    return _SMALL_PRIMES


def factorize(n: int) -> dict[int, int]:
    """Prime factorization {p: exponent} by trial division.

    Raises InvalidArgumentError for n < 1 or n beyond the supported range
    (p^2 search is backed by a prime table up to 10^6, so n < 10^12 is safe).
    """
    if n < 1:
        raise InvalidArgumentError(f"factorize expects a positive integer, got {n}")
    out: dict[int, int] = {}
    rem = n
    for p in _primes():
        if p * p > rem:
            break
        while rem % p == 0:
            out[p] = out.get(p, 0) + 1
            rem //= p
    if rem > 1:
        if rem >= _PRIME_BOUND * _PRIME_BOUND:
            raise InvalidArgumentError(f"{n} is beyond the factorization range")
        out[rem] = out.get(rem, 0) + 1
    return out


def euler_phi(n: int) -> int:
    """Euler totient, the count of 1 <= k <= n coprime to n."""
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def dedekind_psi(n: int) -> int:
    """n * prod_{p | n} (1 + 1/p), always an integer."""
    result = n
    for p in factorize(n):
        result = result // p * (p + 1)
    return result


def jordan_j2(n: int) -> int:
    """Second Jordan totient n^2 * prod_{p | n} (1 - 1/p^2).

    Counts pairs (a, b) in [0, n)^2 with gcd(a, b, n) = 1; equals
    euler_phi(n) * dedekind_psi(n).
    """
    result = n * n
    for p in factorize(n):
        result = result // (p * p) * (p * p - 1)
    return result


def split_two_power(q: int) -> tuple[int, int]:
    """Write q = 2^ell * m with m odd; returns (ell, m)."""
    if q < 1:
        raise InvalidArgumentError(f"split_two_power expects q >= 1, got {q}")
    ell = (q & -q).bit_length() - 1
    return ell, q >> ell


@dataclass(frozen=True)
class RationalPair:
    """Canonical form of a rational pair (alpha, beta).

    a/q and b/q are the fractional parts of alpha and beta with the smallest
    common denominator: 0 <= a, b < q and gcd(a, b, q) = 1. ell and m give
    q = 2^ell * m with m odd. kind is "C" exactly when ell = 1 and both
    numerators are odd (the compact-support class); every other pair is "H"
    (the heavy-tail class).
    """

    a: int
    b: int
    q: int
    ell: int
    m: int
    kind: str

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.a, self.q)

    @property
    def beta(self) -> Fraction:
        return Fraction(self.b, self.q)

    @property
    def is_integer_pair(self) -> bool:
        return self.q == 1

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"({self.a}/{self.q}, {self.b}/{self.q})[{self.kind}]"


def normalize_pair(alpha, beta) -> RationalPair:
    """Canonicalize (alpha, beta) to (a, b, q) with gcd(a, b, q) = 1.

    Inputs may be ints, Fractions, or (num, den) tuples, any sign. Floats are
    rejected: the whole point of the pair is exactness.
    """
    fa = _as_fraction(alpha, "alpha")
    fb = _as_fraction(beta, "beta")
    fa -= fa.__floor__()  # true fractional part, lands in [0, 1)
    fb -= fb.__floor__()
    q = fa.denominator * fb.denominator // gcd(fa.denominator, fb.denominator)
    a = fa.numerator * (q // fa.denominator)
    b = fb.numerator * (q // fb.denominator)
    # Fraction already reduced a/q and b/q separately, so gcd(a, b, q) = 1
    ell, m = split_two_power(q)
    kind = "C" if (ell == 1 and a % 2 == 1 and b % 2 == 1) else "H"
    return RationalPair(a=a, b=b, q=q, ell=ell, m=m, kind=kind)


def _as_fraction(value, name: str) -> Fraction:
    if isinstance(value, float):
        raise InvalidArgumentError(
            f"{name} must be an exact rational (int, Fraction, or (num, den)), got a float"
        )
    if isinstance(value, tuple):
        num, den = value
        if den == 0:
            raise InvalidArgumentError(f"{name} has zero denominator")
        return Fraction(num, den)
    try:
        return Fraction(value)
    except ZeroDivisionError as exc:
        raise InvalidArgumentError(f"{name} has zero denominator") from exc
    except (TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"cannot parse {name}={value!r} as a rational") from exc
