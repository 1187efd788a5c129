import pytest
import numpy as np
import sympy
from sympy.ntheory import legendre_symbol
from discrim.modarith import (
    FactoredModulus,
    QuadraticCongruence,
    ceil_log3,
    factorize,
    iter_primes,
    is_prime,
    legendre,
    lift_root_prime_power,
    mobius_prime_power,
    mod_inverse,
    primes_up_to,
    solve_quadratic_mod_2r,
    sqrt_mod_prime,
    sqrt_mod_prime_power_roots,
)
from discrim._checks import CompositeModulusError, NotInvertibleError, NotLiftableError


@pytest.fixture
def odd_primes():
    return [int(p) for p in primes_up_to(400, start=3)]


def test_legendre_matches_sympy(odd_primes):
    for p in odd_primes[:20]:
        for a in range(-3, 2 * p):
            assert legendre(a, p) == (0 if a % p == 0 else legendre_symbol(a % p, p))


def test_legendre_rejects_composite():
    with pytest.raises(CompositeModulusError):
        legendre(2, 15)
    with pytest.raises(CompositeModulusError):
        legendre(1, 2)


def test_sqrt_mod_prime(odd_primes):
    for p in odd_primes:
        for a in range(p):
            x = sqrt_mod_prime(a, p)
            if x is None:
                assert legendre(a, p) == -1
            else:
                assert x * x % p == a
                assert x <= p - x or x == 0


def test_sqrt_mod_prime_tonelli_branch():
    # 17 and 41 are 1 mod 8, forcing the full Tonelli-Shanks loop
    assert sqrt_mod_prime(2, 17) == 6
    assert sqrt_mod_prime(3, 7) is None
    x = sqrt_mod_prime(5, 41)
    assert x * x % 41 == 5


def test_lift_root():
    assert lift_root_prime_power(3, 2, 7, 2) == 10
    assert lift_root_prime_power(3, 2, 7, 1) == 3

    x = lift_root_prime_power(3, 2, 7, 6)
    assert x % 7 == 3
    assert (x * x - 2) % 7**6 == 0


def test_lift_root_errors():
    with pytest.raises(ValueError):
        lift_root_prime_power(2, 2, 7, 3)
    with pytest.raises(NotLiftableError):
        lift_root_prime_power(0, 7, 7, 2)


def test_sqrt_mod_prime_power_roots():
    assert sqrt_mod_prime_power_roots(2, 7, 2) == [10, 39]
    assert sqrt_mod_prime_power_roots(3, 7, 2) == []
    assert sqrt_mod_prime_power_roots(0, 3, 2) == [0, 3, 6]
    assert sqrt_mod_prime_power_roots(9, 3, 3) == [3, 6, 12, 15, 21, 24]


def test_quadratic_congruence():
    assert QuadraticCongruence(A=1, B=1, C=-2, p=7, r=2).solve() == [1, 47]
    assert QuadraticCongruence(A=3, B=3, C=2, p=7, r=2).solve() == []

    for C in range(-10, 10):
        congruence = QuadraticCongruence(A=3, B=3, C=C, p=5, r=3)
        assert congruence.solve() == [x for x in range(125) if congruence.holds(x)]


def test_quadratic_congruence_leading_coefficient():
    with pytest.raises(ValueError):
        QuadraticCongruence(A=7, B=1, C=1, p=7, r=1).solve()


def test_solve_quadratic_mod_2r():
    assert solve_quadratic_mod_2r(3) == 3
    for r in range(3, 40):
        x = solve_quadratic_mod_2r(r)
        assert 3 <= x < 2**r
        assert (3 * x * x + 5) % 2**r == 0

    with pytest.raises(ValueError):
        solve_quadratic_mod_2r(2)


def test_mod_inverse():
    assert mod_inverse(3, 7) == 5
    assert mod_inverse(5, 1) == 0
    assert mod_inverse(-2, 9) == 4

    with pytest.raises(NotInvertibleError):
        mod_inverse(6, 9)


def test_is_prime_matches_sympy():
    for m in range(0, 3000):
        assert is_prime(m) == sympy.isprime(m)
    for m in (2**61 - 1, 1_000_000_007, 3_215_031_751, 2**64 - 59, 2**62 + 1):
        assert is_prime(m) == sympy.isprime(m)


def test_factorize_matches_sympy():
    for m in (1, 2, 12, 245, 567, 6561, 2**10 * 3**4, 1_000_000_007 * 998_244_353, 2**62 + 1):
        expected = tuple(sorted(sympy.factorint(m).items()))
        assert factorize(m).factors == expected


def test_factored_modulus():
    factored = factorize(250)

    assert factored.primes == (2, 5)
    assert factored.exponent(5) == 3
    assert factored.exponent(3) == 0

    with pytest.raises(ValueError):
        FactoredModulus(m=12, factors=((2, 1), (3, 1)))


def test_ceil_log3():
    assert [ceil_log3(n) for n in (1, 2, 3, 4, 9, 10, 243, 244)] == [0, 1, 1, 2, 2, 3, 5, 6]
    assert ceil_log3(3**40) == 40
    assert ceil_log3(3**40 + 1) == 41


def test_mobius_prime_power():
    assert mobius_prime_power(7, 1) == -1
    assert mobius_prime_power(7, 2) == 0


def test_primes_up_to():
    primes = primes_up_to(100, start=10)

    assert primes.dtype == np.int64
    assert list(primes) == list(sympy.primerange(10, 101))
    assert len(primes_up_to(1)) == 0


def test_iter_primes_across_segments():
    assert list(iter_primes(10_000, start=5, segment=1000)) == list(sympy.primerange(5, 10_001))
    assert list(iter_primes(1000, segment=7)) == [int(p) for p in primes_up_to(1000)]
    assert list(iter_primes(4)) == [2, 3]
    assert list(iter_primes(1)) == []
