"""
Module `_numba_discrim` stores the kernels used when the public functions in
`discriminator` and `casework` are called with `numba=True`. They are compiled
by `Numba`'s just-in-time compiler and work on preallocated `Numpy` buffers.
The cubic :math:`a^3+a` is stepped through its finite differences
(the third difference is the constant 6), so the inner loops only add and
compare residues below `m`. Detailed docstrings are omitted, as they are
provided in the public modules.
"""

import numpy as np
import numba as nb


@nb.njit(cache=True)
def _step(value, increment, m):
    value += increment
    if value >= m:
        value -= m

    return value


@nb.njit(cache=True)
def _cubic_residues(n, m):
    # (a^3 + a) mod m for a = 1..n

    residues = np.empty(n, dtype=np.int64)
    value = 2 % m
    d1 = 8 % m
    d2 = 12 % m
    d3 = 6 % m
    for a in range(n):
        residues[a] = value
        value = _step(value, d1, m)
        d1 = _step(d1, d2, m)
        d2 = _step(d2, d3, m)

    return residues


@nb.njit(cache=True)
def _first_collision(n, m, stamp, owner, generation):
    # First repeat in increasing b; returns (a, b) or (0, 0) when injective

    value = 2 % m
    d1 = 8 % m
    d2 = 12 % m
    d3 = 6 % m
    for b in range(1, n + 1):
        if stamp[value] == generation:
            return owner[value], b
        stamp[value] = generation
        owner[value] = b
        value = _step(value, d1, m)
        d1 = _step(d1, d2, m)
        d2 = _step(d2, d3, m)

    return 0, 0


@nb.njit(cache=True)
def _smallest_collision(n, m, stamp, owner, generation):
    # Lexicographically smallest (a, b); owner keeps the first a of each class

    best_a = 0
    best_b = 0
    value = 2 % m
    d1 = 8 % m
    d2 = 12 % m
    d3 = 6 % m
    for b in range(1, n + 1):
        if stamp[value] == generation:
            a = owner[value]
            if best_a == 0 or a < best_a:
                best_a = a
                best_b = b
        else:
            stamp[value] = generation
            owner[value] = b
        value = _step(value, d1, m)
        d1 = _step(d1, d2, m)
        d2 = _step(d2, d3, m)

    return best_a, best_b


@nb.njit(parallel=True, cache=True)
def _count_pairs(x_max, delta2, q):
    # Pairs 1 <= a, b <= x_max with delta2 (a^2 + ab + b^2) + 1 = 0 (mod q),
    # and those among them with a == b

    total = 0
    diagonal = 0
    for a in nb.prange(1, x_max + 1):
        aa = a * a % q
        for b in range(1, x_max + 1):
            form = (aa + a * b % q + b * b % q) % q
            if (delta2 * form + 1) % q == 0:
                total += 1
                if a == b:
                    diagonal += 1

    return total, diagonal


@nb.njit(cache=True)
def _pair_histogram(x_max, delta2, q):
    # Number of pairs 1 <= a, b <= x_max for each residue of delta2 (a^2 + ab + b^2) + 1 mod q

    counts = np.zeros(q, dtype=np.int64)
    for a in range(1, x_max + 1):
        aa = a * a % q
        for b in range(1, x_max + 1):
            form = (aa + a * b % q + b * b % q) % q
            counts[(delta2 * form + 1) % q] += 1

    return counts
