import pytest
from fractions import Fraction
from discrim import CountingRecord, compute_Tj, count_N, count_N_star, decomposition, n_lower_bound
from discrim.casework import first_nstar_collision, nstar_window, tj_closed_form, tt_bound, x_bound
from discrim._checks import BudgetExceededError


@pytest.fixture
def triples():
    return [(5, 1, 1), (5, 2, 1), (5, 2, 3), (7, 1, 2), (7, 2, 1), (11, 2, 2), (13, 1, 3), (5, 3, 2)]


def test_x_bound():
    assert x_bound(7, 1) == 2
    assert x_bound(5, 3) == 25


def test_count_N_small():
    record = count_N(7, 1, 1)

    assert record.N == 0
    assert record.X == 2


def test_sieve_matches_naive(triples):
    for p, t, delta in triples:
        naive = count_N(p, t, delta, method="naive", numba=False)
        sieve = count_N(p, t, delta, method="sieve")
        compiled = count_N(p, t, delta, method="naive")

        assert (naive.N, naive.N_ne) == (sieve.N, sieve.N_ne) == (compiled.N, compiled.N_ne)
        assert naive.N_ne >= naive.N - 2


def test_count_N_budget():
    with pytest.raises(BudgetExceededError):
        count_N(11, 3, 1, method="naive", budget=1000)

    assert count_N(11, 3, 1, budget=1000).N == count_N(11, 3, 1, method="sieve").N
    assert count_N(11, 3, 1, budget=1000).N_star is None


def test_count_N_argument_checks():
    with pytest.raises(ValueError):
        count_N(7, 1, 4)
    with pytest.raises(ValueError):
        count_N(3, 1, 1)
    with pytest.raises(ValueError):
        count_N(7, 1, 1, method="fast")


def test_counting_record_invariant():
    with pytest.raises(ArithmeticError):
        CountingRecord(p=5, t=1, delta=1, X=1, N=5, N_ne=2)


def test_count_N_star():
    for p, t, delta in [(5, 1, 1), (7, 1, 2), (5, 2, 1), (11, 1, 3)]:
        compiled = count_N_star(p, t, delta)
        interpreted = count_N_star(p, t, delta, numba=False)

        assert compiled.N_star == interpreted.N_star
        assert compiled.N_star > 0
        assert (compiled.N, compiled.N_ne) == (None, None)


def test_nstar_window():
    assert nstar_window(5, 2, 1) == (25, 3)
    assert nstar_window(7, 1, 3) == (21, 3)


def test_tj_small_values():
    assert compute_Tj(5, 2, 1, 1).value == 5
    assert compute_Tj(5, 3, 1, 2).value == 0
    assert tj_closed_form(5, 2, 1) == 5


def test_tj_closed_form_and_bound(triples):
    for p, t, delta in triples:
        for j in range(1, t + 1):
            result = compute_Tj(p, t, delta, j)
            assert result.passed
            if j < t:
                assert result.closed_form == tj_closed_form(p, t, j)
            else:
                assert result.bound == tt_bound(p, t)


def test_tj_element_is_rational():
    result = compute_Tj(7, 2, 1, 1, numba=False)

    assert result.element.is_rational()
    assert result.element.rational_value() == result.value


def test_tj_index_check():
    with pytest.raises(ValueError):
        compute_Tj(5, 2, 1, 3)


def test_decomposition(triples):
    for p, t, delta in triples:
        left, right, record = decomposition(p, t, delta)

        assert left == right
        assert isinstance(right, Fraction)
        assert record.N == count_N(p, t, delta).N
        assert len(record.T) == t


def test_n_lower_bound():
    assert n_lower_bound(20011, 2) > 2

    for p, t, delta in [(5, 2, 1), (7, 2, 3), (13, 2, 2)]:
        assert count_N(p, t, delta).N >= n_lower_bound(p, t)


def test_first_nstar_collision():
    for p, t, delta in [(5, 1, 1), (7, 1, 2), (5, 2, 1), (11, 1, 3), (7, 2, 1), (5, 3, 2)]:
        m, k = nstar_window(p, t, delta)
        length = 1 + 3 ** (k - 1)
        values = [(a**3 + a) % m for a in range(1, length + 1)]
        b = next(b for b in range(2, length + 1) if values[b - 1] in values[: b - 1])
        a = values.index(values[b - 1]) + 1

        for numba in (True, False):
            witness = first_nstar_collision(p, t, delta, numba=numba)
            assert (witness.a, witness.b, witness.m) == (a, b, m)
            assert witness.holds()
        assert first_nstar_collision(p, t, delta, prefix=2) == first_nstar_collision(p, t, delta)
        assert count_N_star(p, t, delta).N_star > 0
