"""
Module `charsum` evaluates the character and exponential sums the proof
rests on, exactly. Exponential sums modulo a prime `p` are elements of
:math:`\\mathbb{Z}[\\zeta_p]` stored as integer coefficient vectors, so the
Kloosterman form of :math:`A_p(\\delta,u)` can be compared with the direct
definition without any floating point tolerance. Magnitudes (Weil bound,
Gauss sum norm) are irrational and are only converted to floating point at
the final comparison.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from discrim import _checks
from discrim.modarith import _legendre, is_prime, mod_inverse

WEIL_TOLERANCE = 1e-6


class CyclotomicInt:
    """
    An element :math:`\\sum_j c_j e(j/p)` of :math:`\\mathbb{Z}[\\zeta_p]` in
    canonical form, i.e. with the coefficient at index 0 removed through
    :math:`\\sum_{j=0}^{p-1} e(j/p) = 0`. Two elements are equal iff their
    canonical coefficient vectors are equal. Instances are immutable.

    :param p: Odd prime
    :type p: int
    :param coeffs: Length-`p` integer vector, index `j` holding the
                   coefficient of :math:`e(j/p)`
    :type coeffs: array_like
    """

    __slots__ = ("_p", "_coeffs")

    def __init__(self, p, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.int64)
        if coeffs.shape != (p,):
            raise ValueError(f"Coefficient vector should have length {p}, got {coeffs.shape}")
        canonical = coeffs - coeffs[0]
        canonical.setflags(write=False)
        self._p = p
        self._coeffs = canonical

    @classmethod
    def rational(cls, p, value):
        """The rational integer `value` as an element of the ring."""

        coeffs = np.zeros(p, dtype=np.int64)
        coeffs[0] = value

        return cls(p, coeffs)

    @classmethod
    def from_exponents(cls, p, exponents, weights=None):
        """Accumulates ``sum(weights[i] * e(exponents[i] / p))``."""

        exponents = np.asarray(exponents, dtype=np.int64) % p
        if weights is None:
            weights = np.ones(exponents.shape[0], dtype=np.int64)

        return cls(p, np.bincount(exponents, weights=weights, minlength=p).astype(np.int64))

    @property
    def p(self):
        return self._p

    @property
    def coeffs(self):
        return self._coeffs

    def _check_same_ring(self, other):
        if not isinstance(other, CyclotomicInt) or other.p != self.p:
            raise ValueError("Both operands should live in the same cyclotomic ring")

    def __eq__(self, other):
        if not isinstance(other, CyclotomicInt):
            return NotImplemented

        return self.p == other.p and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.p, self.coeffs.tobytes()))

    def __add__(self, other):
        self._check_same_ring(other)

        return CyclotomicInt(self.p, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check_same_ring(other)

        return CyclotomicInt(self.p, self.coeffs - other.coeffs)

    def __neg__(self):
        return CyclotomicInt(self.p, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return CyclotomicInt(self.p, self.coeffs * int(other))
        self._check_same_ring(other)
        # Cyclic convolution: exponents add modulo p
        full = np.convolve(self.coeffs, other.coeffs)
        folded = full[: self.p].copy()
        folded[: self.p - 1] += full[self.p :]

        return CyclotomicInt(self.p, folded)

    __rmul__ = __mul__

    def conjugate(self):
        """Complex conjugate, the Galois action ``j -> p - j``."""

        return CyclotomicInt(self.p, np.roll(self.coeffs[::-1], 1))

    def is_rational(self):
        return bool(np.all(self.coeffs[1:] == self.coeffs[1]))

    def rational_value(self):
        """
        Integer value of a rational element.

        :raises ValueError: When the element is not rational
        :rtype: int
        """

        if not self.is_rational():
            raise ValueError("Element is not a rational integer")

        return -int(self.coeffs[1])

    def to_complex(self):
        roots = np.exp(2j * np.pi * np.arange(self.p) / self.p)

        return complex(np.dot(self.coeffs.astype(np.float64), roots))

    def magnitude(self):
        return abs(self.to_complex())

    def __repr__(self):
        if self.is_rational():
            return f"CyclotomicInt(p={self.p}, rational={self.rational_value()})"
        terms = " + ".join(
            f"{int(c)}*e({j}/{self.p})" for j, c in enumerate(self.coeffs) if c != 0
        )

        return f"CyclotomicInt(p={self.p}, {terms})"


@dataclass(frozen=True)
class ResidueProfile:
    """
    Counts of :math:`x \\in [1,(p-1)/2]` by the value of
    :math:`((\\delta^2x^2+4)/p)`.
    """

    p: int
    delta: int
    n_plus: int
    n_minus: int
    n_zero: int

    def closed_form(self):
        """``(n_zero, n_plus, n_minus)`` predicted from ``p mod 4``."""

        if self.p % 4 == 1:
            return 1, (self.p - 5) // 4, (self.p - 1) // 4

        return 0, (self.p - 3) // 4, (self.p + 1) // 4

    def matches_closed_form(self):
        return (self.n_zero, self.n_plus, self.n_minus) == self.closed_form()


@lru_cache(maxsize=256)
def character_table(p):
    """
    Quadratic character of every residue modulo `p` as a read-only numpy
    vector, built from the set of squares.

    :param p: Odd prime
    :type p: int
    :rtype: ndarray
    """

    table = np.full(p, -1, dtype=np.int64)
    squares = (np.arange(1, p, dtype=np.int64) ** 2) % p
    table[squares] = 1
    table[0] = 0
    table.setflags(write=False)

    return table


def _symbols(p, delta, xs):
    # ((delta^2 x^2 + 4) / p) for a vector of x
    d2 = delta * delta % p
    values = (d2 * ((xs % p) ** 2 % p) + 4) % p

    return character_table(p)[values]


def _centered(p):
    half = (p - 1) // 2

    return np.arange(-half, half + 1, dtype=np.int64)


def ap_direct(p, delta, u):
    """
    :math:`A_p(\\delta,u)` from its definition, summing
    :math:`((\\delta^2x^2+4)/p)e(ux/p)` over the centred residues.

    :param p: Odd prime
    :type p: int
    :param delta: Integer not divisible by `p`
    :type delta: int
    :param u: Frequency
    :type u: int
    :rtype: CyclotomicInt
    """

    p = _checks._check_odd_prime(p, is_prime)
    delta = _checks._check_coprime_delta(p, delta)
    xs = _centered(p)

    return CyclotomicInt.from_exponents(p, u * xs, _symbols(p, delta, xs))


def ap_kloosterman(p, delta, u):
    """
    :math:`A_p(\\delta,u)` as the Kloosterman-type sum
    :math:`\\sum_{c=1}^{p-1} e((-\\overline{4\\delta^2c}u^2+4c)/p)`.

    :rtype: CyclotomicInt
    """

    p = _checks._check_odd_prime(p, is_prime)
    delta = _checks._check_coprime_delta(p, delta)
    u2 = u * u % p
    base = 4 * delta * delta % p
    exponents = [(-mod_inverse(base * c % p, p) * u2 + 4 * c) % p for c in range(1, p)]

    return CyclotomicInt.from_exponents(p, exponents)


def gauss_sum(p):
    """
    Quadratic Gauss sum :math:`\\tau_p = \\sum_{c=1}^{p-1} (c/p) e(c/p)`.

    :rtype: CyclotomicInt
    """

    p = _checks._check_odd_prime(p, is_prime)

    return CyclotomicInt(p, character_table(p))


def gauss_norm(p):
    """:math:`\\tau_p \\overline{\\tau_p}` as an integer; equals `p`."""

    tau = gauss_sum(p)

    return (tau * tau.conjugate()).rational_value()


def weil_bound_holds(p, delta, u, tolerance=WEIL_TOLERANCE):
    """Whether :math:`|A_p(\\delta,u)| \\le 2\\sqrt{p}` up to `tolerance`."""

    return ap_direct(p, delta, u).magnitude() <= 2 * math.sqrt(p) + tolerance


def half_sum(p, delta):
    """
    :math:`\\sum_{x=1}^{(p-1)/2} ((\\delta^2x^2+4)/p)`, which is always -1.

    :rtype: int
    """

    p = _checks._check_prime_at_least(p, 5, is_prime)
    delta = _checks._check_coprime_delta(p, delta)
    xs = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)

    return int(_symbols(p, delta, xs).sum())


def residue_profile(p, delta):
    """
    Counts of :math:`+1`, :math:`-1` and :math:`0` among
    :math:`((\\delta^2x^2+4)/p)` for :math:`1 \\le x \\le (p-1)/2`.

    :rtype: ResidueProfile
    """

    p = _checks._check_prime_at_least(p, 5, is_prime)
    delta = _checks._check_coprime_delta(p, delta)
    xs = np.arange(1, (p - 1) // 2 + 1, dtype=np.int64)
    symbols = _symbols(p, delta, xs)

    return ResidueProfile(
        p=p,
        delta=delta,
        n_plus=int(np.count_nonzero(symbols == 1)),
        n_minus=int(np.count_nonzero(symbols == -1)),
        n_zero=int(np.count_nonzero(symbols == 0)),
    )


def ell_p(p, delta):
    """
    Smallest :math:`x \\ge 1` with :math:`((-3\\delta^2x^2-12)/p) \\in \\{0,1\\}`.

    :rtype: int
    """

    p = _checks._check_prime_at_least(p, 5, is_prime)
    delta = _checks._check_coprime_delta(p, delta)
    d2 = delta * delta % p
    x = 1
    while _legendre(-3 * d2 * x * x - 12, p) == -1:
        x += 1

    return x


def l_p(p):
    """
    The bound :math:`L_p` on :math:`\\ell_p(\\delta)`, by ``p mod 12``.

    :rtype: int
    """

    p = _checks._check_prime_at_least(p, 5, is_prime)
    shift = {1: 3, 5: -1, 7: 5, 11: 1}[p % 12]

    return (p + shift) // 4


def incomplete_sum_A(p, delta):
    """
    :math:`\\sum_{-Y \\le x \\le Y} ((\\delta^2x^2+4)/p)` with
    :math:`Y = \\lfloor (p-1)/6 \\rfloor`.

    :rtype: int
    """

    p = _checks._check_prime_at_least(p, 5, is_prime)
    delta = _checks._check_coprime_delta(p, delta)
    y = (p - 1) // 6
    xs = np.arange(-y, y + 1, dtype=np.int64)

    return int(_symbols(p, delta, xs).sum())


def incomplete_sum_bound(p):
    """:math:`2\\sqrt{p}(2+\\ln p)`, the completion bound on :math:`|A|`."""

    return 2 * math.sqrt(p) * (2 + math.log(p))
