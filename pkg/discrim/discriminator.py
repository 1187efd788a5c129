"""
The ``discriminator`` module computes :math:`\\Delta(n)`, the smallest modulus
`m` for which :math:`a^3+a` with :math:`1 \\le a \\le n` are pairwise distinct
modulo `m`, in two independent ways: by brute force over the moduli
:math:`n \\le m \\le 3^{\\lceil \\log_3 n \\rceil}`, and by the closed form that
equals :math:`3^{\\lceil \\log_3 n \\rceil}` except on the exceptional set
:math:`\\{3^{6s+5}+1, 3^{6s+5}+2\\}` where it is :math:`7 \\cdot 3^{6s+4}`.
`verify_range` compares the two over a range of `n`, in parallel and
resumably. As in the rest of the package, `numba=True` selects the compiled
kernels and `numba=False` the pure `Python` oracle.
"""

import logging
from dataclasses import dataclass
from functools import partial
from typing import Optional

import numpy as np

from discrim import _checks, _numba_discrim, _python_discrim
from discrim.modarith import ceil_log3
from discrim.records import VerificationRecord

logger = logging.getLogger(__name__)

SUITE = "delta_verify"


@dataclass(frozen=True)
class CollisionWitness:
    """
    A pair :math:`1 \\le a < b` with :math:`b^3+b \\equiv a^3+a \\pmod m`.

    :param a: Smaller element
    :type a: int
    :param b: Larger element
    :type b: int
    :param m: Modulus
    :type m: int
    :param route: How the pair was found, ``"search"`` for an exhaustive scan
                  or the name of the constructive recipe, defaults to "search"
    :type route: str, optional
    """

    a: int
    b: int
    m: int
    route: str = "search"

    def __post_init__(self):
        if not 1 <= self.a < self.b:
            raise ValueError(f"Witness should satisfy 1 <= a < b, got a={self.a}, b={self.b}")

    def holds(self):
        return verify_witness(self)


@dataclass(frozen=True)
class DiscriminatorResult:
    """
    Value of :math:`\\Delta(n)` with the data it was derived from.

    :param n: Number of cubic values
    :type n: int
    :param k: :math:`\\lceil \\log_3 n \\rceil`
    :type k: int
    :param exceptional: `s` when `n` is in the exceptional set, else None
    :type exceptional: int or None
    :param delta_value: :math:`\\Delta(n)`
    :type delta_value: int
    :param witnesses: Collision witnesses of rejected moduli (brute force only)
    :type witnesses: tuple
    """

    n: int
    k: int
    exceptional: Optional[int]
    delta_value: int
    witnesses: tuple = ()

    def __post_init__(self):
        if not self.n <= self.delta_value <= 3**self.k:
            raise ValueError(
                f"Delta({self.n}) = {self.delta_value} leaves the range [n, 3^k] = [{self.n}, {3**self.k}]"
            )


class InjectivityBuffer:
    """
    Reusable seen-flag buffer for the injectivity kernels. Each call bumps a
    generation counter instead of clearing the arrays, and the arrays grow
    on demand. A buffer belongs to one worker.

    :param capacity: Initial number of residues, defaults to 1024
    :type capacity: int, optional
    """

    def __init__(self, capacity=1024):
        self._stamp = np.zeros(capacity, dtype=np.int64)
        self._owner = np.zeros(capacity, dtype=np.int64)
        self._generation = 0

    @property
    def capacity(self):
        return self._stamp.shape[0]

    def acquire(self, m):
        # Arrays sized for modulus m and a fresh generation
        if m > self.capacity:
            size = max(m, 2 * self.capacity)
            self._stamp = np.zeros(size, dtype=np.int64)
            self._owner = np.zeros(size, dtype=np.int64)
            self._generation = 0
        self._generation += 1

        return self._stamp, self._owner, self._generation


def is_injective(n, m, numba=True, buffer=None):
    """
    Whether :math:`a^3+a` for :math:`1 \\le a \\le n` are pairwise distinct
    modulo `m`. Stops at the first repeated residue.

    :param n: Number of values
    :type n: int
    :param m: Modulus
    :type m: int
    :param numba: Whether to use the compiled kernel, defaults to True
    :type numba: bool, optional
    :param buffer: Buffer reused across calls, defaults to None
    :type buffer: InjectivityBuffer, optional
    :rtype: bool
    """

    _checks._check_numba(numba)
    n = _checks._check_positive("n", n)
    m = _checks._check_positive("m", m)
    if n > m:
        return False

    if not numba:
        return _python_discrim._python_first_collision(n, m) == (0, 0)

    buffer = buffer if buffer is not None else InjectivityBuffer(m)
    a, _ = _numba_discrim._first_collision(n, m, *buffer.acquire(m))

    return a == 0


def find_collision(n, m, numba=True, buffer=None):
    """
    Lexicographically smallest pair :math:`1 \\le a < b \\le n` with
    :math:`b^3+b \\equiv a^3+a \\pmod m`.

    :param n: Number of values
    :type n: int
    :param m: Modulus
    :type m: int
    :param numba: Whether to use the compiled kernel, defaults to True
    :type numba: bool, optional
    :param buffer: Buffer reused across calls, defaults to None
    :type buffer: InjectivityBuffer, optional
    :return: The witness, or None when the values are pairwise distinct
    :rtype: CollisionWitness or None
    """

    _checks._check_numba(numba)
    n = _checks._check_positive("n", n)
    m = _checks._check_positive("m", m)

    if numba:
        buffer = buffer if buffer is not None else InjectivityBuffer(m)
        a, b = _numba_discrim._smallest_collision(n, m, *buffer.acquire(m))
    else:
        a, b = _python_discrim._python_smallest_collision(n, m)
    if a == 0:
        return None

    return CollisionWitness(int(a), int(b), m)


def verify_witness(witness):
    """
    Re-checks :math:`b^3+b \\equiv a^3+a \\pmod m` with `pow`, independently
    of the finite-difference kernels.

    :rtype: bool
    """

    m = witness.m

    return (pow(witness.b, 3, m) + witness.b - pow(witness.a, 3, m) - witness.a) % m == 0


def exceptional_s(n):
    """
    The `s` with :math:`n = 3^{6s+5}+1` or :math:`n = 3^{6s+5}+2`.

    :param n: Positive integer
    :type n: int
    :return: `s`, or None when `n` is not exceptional
    :rtype: int or None
    """

    n = _checks._check_positive("n", n)
    for shift in (1, 2):
        rest, exponent = n - shift, 0
        if rest < 3:
            continue
        while rest % 3 == 0:
            rest //= 3
            exponent += 1
        if rest == 1 and exponent % 6 == 5:
            return (exponent - 5) // 6

    return None


def delta_closed_form(n):
    """
    :math:`\\Delta(n)` from the closed form.

    :param n: Positive integer
    :type n: int
    :rtype: DiscriminatorResult
    """

    n = _checks._check_positive("n", n)
    k = ceil_log3(n)
    s = exceptional_s(n)
    value = 7 * 3 ** (6 * s + 4) if s is not None else 3**k

    return DiscriminatorResult(n=n, k=k, exceptional=s, delta_value=value)


def delta_bruteforce(n, numba=True, record_witnesses=False, buffer=None):
    """
    :math:`\\Delta(n)` by scanning :math:`m = n, n+1, \\dots, 3^k`. The scan
    does not rely on the closed form: injectivity modulo :math:`3^k` is what
    bounds it.

    :param n: Positive integer
    :type n: int
    :param numba: Whether to use the compiled kernels, defaults to True
    :type numba: bool, optional
    :param record_witnesses: Whether to keep the first witness of every
                             rejected modulus, defaults to False
    :type record_witnesses: bool, optional
    :param buffer: Buffer reused across calls, defaults to None
    :type buffer: InjectivityBuffer, optional
    :rtype: DiscriminatorResult
    """

    _checks._check_numba(numba)
    n = _checks._check_positive("n", n)
    k = ceil_log3(n)
    cap = 3**k
    if numba and buffer is None:
        buffer = InjectivityBuffer(cap)

    witnesses = []
    for m in range(n, cap + 1):
        if numba:
            a, b = _numba_discrim._first_collision(n, m, *buffer.acquire(m))
        else:
            a, b = _python_discrim._python_first_collision(n, m)
        if a == 0:
            break
        if record_witnesses:
            witnesses.append(CollisionWitness(int(a), int(b), m))
    else:
        raise ArithmeticError(f"No injective modulus up to 3^{k} for n={n}")

    return DiscriminatorResult(
        n=n, k=k, exceptional=exceptional_s(n), delta_value=m, witnesses=tuple(witnesses)
    )


_worker_buffer = InjectivityBuffer()


def _delta_record(task, numba=True):
    # Compares brute force with the closed form for one n; the module-level
    # buffer is private to the worker process

    _, params = task
    n = params["n"]
    brute = delta_bruteforce(n, numba=numba, buffer=_worker_buffer if numba else None)
    closed = delta_closed_form(n)

    return VerificationRecord.compare(SUITE, params, brute.delta_value, closed.delta_value)


def verify_range(
    n_from, n_to, workers=1, numba=True, block_size=256, completed=None, progress=False
):
    """
    Compares :math:`\\Delta(n)` by brute force and by the closed form for every
    `n` in ``[n_from, n_to]``. Each worker evaluates contiguous blocks of `n`
    with its own buffer; records stream back in block order.

    :param n_from: First `n`
    :type n_from: int
    :param n_to: Last `n`
    :type n_to: int
    :param workers: Number of `joblib` workers, defaults to 1
    :type workers: int, optional
    :param numba: Whether to use the compiled kernels, defaults to True
    :type numba: bool, optional
    :param block_size: Number of `n` per block, defaults to 256
    :type block_size: int, optional
    :param completed: Record keys to skip when resuming, defaults to None
    :type completed: set, optional
    :param progress: Whether to show a progress bar, defaults to False
    :type progress: bool, optional
    :return: One record per `n`
    :rtype: generator of VerificationRecord
    """

    _checks._check_numba(numba)
    n_from, n_to = _checks._check_range(n_from, n_to)
    tasks = ((SUITE, {"n": n}) for n in range(n_from, n_to + 1))

    return _python_discrim._sweep(
        tasks,
        partial(_delta_record, numba=numba),
        workers=workers,
        block_size=block_size,
        completed=completed,
        progress=progress,
    )
