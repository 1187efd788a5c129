import numbers
import warnings


class NotInvertibleError(ValueError):
    pass


class NotLiftableError(ValueError):
    pass


class CompositeModulusError(ValueError):
    pass


class InapplicableCaseError(ValueError):
    pass


class BudgetExceededError(ValueError):
    pass


class UnknownSuiteError(ValueError):
    pass


class ConfigurationError(ValueError):
    pass


def _is_integer(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _check_positive(name, value):
    if not _is_integer(value):
        raise ValueError(f"`{name}` should be an integer, got {type(value).__name__}")
    if value < 1:
        raise ValueError(f"`{name}` should be a positive integer, got {value}")

    return int(value)


def _check_nonnegative(name, value):
    if not _is_integer(value):
        raise ValueError(f"`{name}` should be an integer, got {type(value).__name__}")
    if value < 0:
        raise ValueError(f"`{name}` should be a non-negative integer, got {value}")

    return int(value)


def _check_odd_prime(p, is_prime):
    if not _is_integer(p):
        raise CompositeModulusError(
            f"Modulus `p` should be an integer, got {type(p).__name__}"
        )
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise CompositeModulusError(
            f"Modulus `p` should be an odd prime, got {p}. Validate primality before calling"
        )

    return int(p)


def _check_prime_at_least(p, bound, is_prime):
    p = _check_odd_prime(p, is_prime)
    if p < bound:
        raise ValueError(f"Prime `p` should be at least {bound}, got {p}")

    return p


def _check_coprime_delta(p, delta):
    if not _is_integer(delta):
        raise ValueError(f"`delta` should be an integer, got {type(delta).__name__}")
    if delta % p == 0:
        raise ValueError(f"`delta` should not be divisible by p, got delta={delta}, p={p}")

    return int(delta)


def _check_small_delta(delta):
    if not _is_integer(delta) or not 1 <= delta <= 3:
        raise ValueError(f"`delta` should be 1, 2 or 3, got {delta}")

    return int(delta)


def _check_range(n_from, n_to):
    n_from = _check_positive("n_from", n_from)
    n_to = _check_positive("n_to", n_to)
    if n_from > n_to:
        raise ValueError(
            f"Range start should not exceed range end, got n_from={n_from}, n_to={n_to}"
        )

    return n_from, n_to


def _check_workers(workers, n_blocks=None):
    if not _is_integer(workers) or workers < 1:
        raise ValueError("Number of workers should be a positive integer")
    if n_blocks is not None and workers > max(n_blocks, 1):
        warnings.warn(
            f"{workers} workers requested for {n_blocks} blocks of work. Some workers will be idle",
            UserWarning,
        )

    return int(workers)


def _check_numba(numba):
    if not isinstance(numba, bool):
        raise ValueError(
            "`numba` argument specifies whether kernels run through the `Numba` JIT compiler or the Python interpreter, and should be of type `bool`"
        )


def _check_budget(pairs, budget):
    if pairs > budget:
        raise BudgetExceededError(
            f"Naive enumeration needs {pairs} pair operations, above the budget of {budget}. Use the sieved method instead"
        )


def _check_window(n, m, k):
    if not n <= m < 3**k:
        warnings.warn(
            f"m={m} lies outside the window n <= m < 3^k = {3**k} for n={n}; the classification is exploratory",
            UserWarning,
        )
        return False

    return True
