"""
Module `modarith` holds the exact integer and modular arithmetic every other
module is built on: Legendre symbols, square roots modulo primes and prime
powers, Hensel lifting, the 2-adic root behind the powers-of-two case,
inverses, primality, factorization and the integer ``ceil(log_3 n)``.

Everything here is a pure function of its arguments. Python integers are
unbounded, so no intermediate product can overflow; :math:`a^3+a` is still
reduced modulo :math:`m` step by step wherever a modulus is known.
"""

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from discrim._checks import (
    CompositeModulusError,
    NotInvertibleError,
    NotLiftableError,
    _check_nonnegative,
    _check_odd_prime,
    _check_positive,
)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_DIVISION_LIMIT = 10**6
_RHO_SEEDS = (2, 3, 5, 7, 11, 13, 17, 19)


@dataclass(frozen=True)
class FactoredModulus:
    """
    A modulus together with its prime factorization.

    :param m: The modulus
    :type m: int
    :param factors: ``(prime, exponent)`` pairs sorted by prime
    :type factors: tuple
    """

    m: int
    factors: tuple

    def __post_init__(self):
        if reduce(lambda acc, f: acc * f[0] ** f[1], self.factors, 1) != self.m:
            raise ValueError(f"Factors {self.factors} do not multiply to {self.m}")
        primes = [p for p, _ in self.factors]
        if primes != sorted(set(primes)):
            raise ValueError("Primes of a factorization should be strictly increasing")
        if any(e < 1 for _, e in self.factors):
            raise ValueError("Exponents of a factorization should be positive")

    @property
    def primes(self):
        return tuple(p for p, _ in self.factors)

    def exponent(self, p):
        """Exponent of `p` in `m`, zero when `p` does not divide it."""

        return dict(self.factors).get(p, 0)


@dataclass(frozen=True)
class QuadraticCongruence:
    """
    The congruence :math:`Ax^2+Bx+C \\equiv 0 \\pmod{p^r}` for an odd prime `p`.
    """

    A: int
    B: int
    C: int
    p: int
    r: int

    @property
    def modulus(self):
        return self.p**self.r

    def holds(self, x):
        q = self.modulus
        return (self.A * x * x + self.B * x + self.C) % q == 0

    def solve(self):
        """
        All solutions in ``[0, p^r)``, ascending. Requires ``p`` not dividing ``2A``;
        the discriminant is handled by :func:`sqrt_mod_prime_power_roots`.

        :return: Sorted solutions
        :rtype: list
        """

        q = self.modulus
        if self.A % self.p == 0:
            raise ValueError("Leading coefficient should be invertible modulo p")
        disc = (self.B * self.B - 4 * self.A * self.C) % q
        inverse = mod_inverse(2 * self.A, q)
        roots = {
            (y - self.B) * inverse % q for y in sqrt_mod_prime_power_roots(disc, self.p, self.r)
        }

        return sorted(x for x in roots if self.holds(x))


def legendre(a, p):
    """
    Legendre symbol :math:`(a/p)` by Euler's criterion.

    :param a: Any integer
    :type a: int
    :param p: Odd prime
    :type p: int
    :return: 0 if `p` divides `a`, 1 for a nonzero square, -1 otherwise
    :rtype: int
    """

    p = _check_odd_prime(p, is_prime)

    return _legendre(a, p)


def _legendre(a, p):
    # Unchecked Euler criterion for hot loops with a validated prime
    symbol = pow(a % p, (p - 1) // 2, p)

    return -1 if symbol == p - 1 else symbol


def jacobi_prime_power(a, p, j):
    """Jacobi symbol :math:`(a/p^j)`, which is :math:`(a/p)^j`."""

    return legendre(a, p) ** j


def sqrt_mod_prime(a, p):
    """
    Smallest square root of `a` modulo the odd prime `p` (Tonelli-Shanks).

    :param a: Any integer
    :type a: int
    :param p: Odd prime
    :type p: int
    :return: Smallest ``x`` in ``[0, p-1]`` with ``x^2 = a (mod p)``, or None
             when `a` is a non-residue
    :rtype: int or None
    """

    p = _check_odd_prime(p, is_prime)

    return _sqrt_mod_prime(a, p)


def _sqrt_mod_prime(a, p):
    a %= p
    if a == 0:
        return 0
    if _legendre(a, p) != 1:
        return None

    if p % 4 == 3:
        x = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while _legendre(z, p) != -1:
            z += 1

        c = pow(z, q, p)
        x = pow(a, (q + 1) // 2, p)
        t = pow(a, q, p)
        m = s
        while t != 1:
            i, t2i = 0, t
            while t2i != 1:
                t2i = t2i * t2i % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            x = x * b % p
            c = b * b % p
            t = t * c % p
            m = i

    return min(x, p - x)


def lift_root_prime_power(x0, a, p, r):
    """
    Hensel-lifts a simple root of :math:`x^2 \\equiv a \\pmod p` to modulus
    :math:`p^r`.

    :param x0: Root modulo `p`
    :type x0: int
    :param a: Target residue
    :type a: int
    :param p: Odd prime
    :type p: int
    :param r: Target exponent, at least 1
    :type r: int
    :raises NotLiftableError: When `p` divides ``2*x0`` (singular root)
    :return: ``x`` in ``[0, p^r)`` with ``x = x0 (mod p)`` and ``x^2 = a (mod p^r)``
    :rtype: int
    """

    p = _check_odd_prime(p, is_prime)
    r = _check_positive("r", r)
    if (x0 * x0 - a) % p != 0:
        raise ValueError(f"{x0} is not a square root of {a} modulo {p}")

    q = p**r
    if r == 1:
        return x0 % p
    if (2 * x0) % p == 0:
        if a % q == 0:
            return x0 % p
        raise NotLiftableError(
            f"Root {x0} of x^2 = {a} is singular modulo {p} and is not lifted"
        )

    x, modulus = x0 % p, p
    while modulus < q:
        modulus = min(modulus * modulus, q)
        # Newton step x <- x - (x^2 - a) / (2x)
        x = (x - (x * x - a) * mod_inverse(2 * x, modulus)) % modulus

    return x


def sqrt_mod_prime_power_roots(a, p, r):
    """
    All square roots of `a` modulo :math:`p^r`, ascending. Simple roots come
    from :func:`sqrt_mod_prime` and :func:`lift_root_prime_power`; when `p`
    divides `a` the roots are found by scanning the multiples of `p`.

    :return: Sorted roots in ``[0, p^r)``
    :rtype: list
    """

    q = p**r
    a %= q
    if a % p != 0:
        x0 = _sqrt_mod_prime(a, p)
        if x0 is None:
            return []
        x = lift_root_prime_power(x0, a, p, r)
        return sorted({x, (q - x) % q})

    candidates = np.arange(0, q, p, dtype=np.int64)
    hits = candidates[(candidates * candidates) % q == a]

    return [int(y) for y in hits]


def solve_quadratic_mod_2r(r):
    """
    Root of :math:`3x^2+5 \\equiv 0 \\pmod{2^r}` by 2-adic lifting.

    Every odd `x` is a root modulo 8. Going from :math:`2^j` to :math:`2^{j+1}`
    the root either already works or is corrected by :math:`2^{j-1}`.

    :param r: Exponent, at least 3
    :type r: int
    :return: Smallest root in ``[3, 2^r)``
    :rtype: int
    """

    r = _check_positive("r", r)
    if r < 3:
        raise ValueError(f"Exponent `r` should be at least 3, got {r}")

    x = 1
    for j in range(3, r):
        if (3 * x * x + 5) % (1 << (j + 1)) != 0:
            x += 1 << (j - 1)

    q = 1 << r
    half = q >> 1
    roots = {x % q, (x + half) % q, (-x) % q, (half - x) % q}

    return min(y for y in roots if y >= 3 and (3 * y * y + 5) % q == 0)


def mod_inverse(d, q):
    """
    Inverse of `d` modulo `q`.

    :raises NotInvertibleError: When ``gcd(d, q) > 1``
    :return: ``d_bar`` in ``[0, q)`` with ``d * d_bar = 1 (mod q)``
    :rtype: int
    """

    q = _check_positive("q", q)
    if q == 1:
        return 0
    if math.gcd(d, q) != 1:
        raise NotInvertibleError(f"{d} has no inverse modulo {q}")

    return pow(d, -1, q)


def is_prime(m):
    """
    Deterministic primality: trial division by small primes, then Miller-Rabin
    with the first twelve prime bases (exact for every 64-bit input).

    :param m: Positive integer
    :type m: int
    :rtype: bool
    """

    m = _check_nonnegative("m", m)
    if m < 2:
        return False
    for p in _SMALL_PRIMES:
        if m % p == 0:
            return m == p

    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _SMALL_PRIMES:
        x = pow(base, d, m)
        if x in (1, m - 1):
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False

    return True


def _pollard_brent(m):
    # Brent's variant of Pollard rho; seeds are fixed so runs are reproducible
    for seed in _RHO_SEEDS:
        y, c, g, r, q = seed, seed + 1, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % m
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % m
                    q = q * abs(x - y) % m
                g = math.gcd(q, m)
                k += 128
            r *= 2
        if g == m:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % m
                g = math.gcd(abs(x - ys), m)
        if g != m:
            return g

    raise ArithmeticError(f"Pollard rho found no factor of {m}")


def _split(m, found):
    if m == 1:
        return
    if is_prime(m):
        found[m] = found.get(m, 0) + 1
        return
    d = _pollard_brent(m)
    _split(d, found)
    _split(m // d, found)


def factorize(m):
    """
    Complete prime factorization of `m`: trial division up to
    ``min(sqrt(m), 10^6)`` and Brent's rho for the cofactor.

    :param m: Positive integer
    :type m: int
    :rtype: FactoredModulus
    """

    m = _check_positive("m", m)
    found = {}
    rest = m
    d = 2
    while d * d <= rest and d <= _TRIAL_DIVISION_LIMIT:
        while rest % d == 0:
            found[d] = found.get(d, 0) + 1
            rest //= d
        d += 1 if d == 2 else 2
    if rest > 1:
        _split(rest, found)

    return FactoredModulus(m=m, factors=tuple(sorted(found.items())))


def ceil_log3(n):
    """Smallest `k` with ``3^k >= n``, integer powering only."""

    n = _check_positive("n", n)
    k, power = 0, 1
    while power < n:
        power *= 3
        k += 1

    return k


def mobius_prime_power(p, j):
    """Möbius function at :math:`p^j`: -1 for ``j == 1``, 0 for ``j >= 2``."""

    _check_positive("p", p)
    j = _check_positive("j", j)

    return -1 if j == 1 else 0


def primes_up_to(limit, start=2):
    """
    Primes in ``[start, limit]`` by a numpy sieve of Eratosthenes.

    :rtype: ndarray
    """

    if limit < 2:
        return np.array([], dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for d in range(2, math.isqrt(limit) + 1):
        if sieve[d]:
            sieve[d * d :: d] = False
    primes = np.flatnonzero(sieve)

    return primes[primes >= start].astype(np.int64)


def iter_primes(limit, start=2, segment=1 << 20):
    """
    Primes in ``[start, limit]`` in increasing order, sieved one segment at a
    time so memory stays bounded by `segment` whatever the limit.

    :param limit: Largest candidate
    :type limit: int
    :param start: Smallest candidate, defaults to 2
    :type start: int, optional
    :param segment: Candidates sieved at once, defaults to 2**20
    :type segment: int, optional
    :rtype: generator of int
    """

    start = max(start, 2)
    base = primes_up_to(math.isqrt(limit)) if limit >= 4 else np.array([], dtype=np.int64)
    for low in range(start, limit + 1, segment):
        high = min(low + segment - 1, limit)
        sieve = np.ones(high - low + 1, dtype=bool)
        for d in base:
            d = int(d)
            if d * d > high:
                break
            first = max(d * d, -(-low // d) * d)
            sieve[first - low :: d] = False
        for offset in np.flatnonzero(sieve):
            yield low + int(offset)


__all__ = [
    "FactoredModulus",
    "QuadraticCongruence",
    "CompositeModulusError",
    "NotInvertibleError",
    "NotLiftableError",
    "legendre",
    "jacobi_prime_power",
    "sqrt_mod_prime",
    "lift_root_prime_power",
    "sqrt_mod_prime_power_roots",
    "solve_quadratic_mod_2r",
    "mod_inverse",
    "factorize",
    "is_prime",
    "ceil_log3",
    "mobius_prime_power",
    "primes_up_to",
    "iter_primes",
]
