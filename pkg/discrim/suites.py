"""
The ``suites`` module is the registry behind ``lemma verify``. Every suite
identifier maps to a `Suite` that knows how to enumerate its parameter
tuples up to a limit and how to evaluate one of them into a
`VerificationRecord`. Tuple-by-tuple suites go through the same block runner
as `verify_range`, so they share its parallelism and resume behaviour; the
two instant suites (``5.1`` and ``5.5``) are evaluated in one go.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial

import numpy as np

from discrim import _checks, _python_discrim, casework
from discrim.charsum import (
    ap_direct,
    ap_kloosterman,
    ell_p,
    gauss_norm,
    half_sum,
    incomplete_sum_A,
    incomplete_sum_bound,
    l_p,
    residue_profile,
    weil_bound_holds,
)
from discrim.modarith import iter_primes, primes_up_to
from discrim.records import VerificationRecord

logger = logging.getLogger(__name__)

DEFAULT_RNG_SEED = 88
DELTAS_PER_PRIME = 16
LEMMA36_MIN_PRIME = 4000


@dataclass(frozen=True)
class Suite:
    """
    One verification suite.

    :param name: Identifier accepted by ``lemma verify --id``
    :type name: str
    :param runner: ``runner(limit, **options)`` returning a record generator
    :type runner: callable
    :param default_limit: Desk-scale limit
    :type default_limit: int
    :param long_limit: Limit used with the long-run flag
    :type long_limit: int
    :param block_size: Tasks per block when the caller does not choose
    :type block_size: int
    :param description: One-line summary shown by the CLI
    :type description: str
    """

    name: str
    runner: object
    default_limit: int
    long_limit: int
    block_size: int
    description: str


def _prime_power_triples(limit, deltas=(1, 2, 3)):
    # (p, t, delta) with p >= 5 prime and p^t <= limit
    for p in iter_primes(limit, start=5):
        q, t = p, 1
        while q <= limit:
            for delta in deltas:
                yield p, t, delta
            q *= p
            t += 1


def _charsum_tasks(limit, rng_seed):
    tasks = []
    for p in primes_up_to(limit, start=5):
        p = int(p)
        tasks.append(("3.1:gauss", {"p": p}))
        for delta in range(1, p):
            params = {"p": p, "delta": delta}
            tasks += [("3.1", params), ("3.1:u0", params), ("3.1:weil", params)]

    return tasks


def _ell_tasks(limit, rng_seed):
    tasks = []
    for p in primes_up_to(limit, start=5):
        p = int(p)
        for delta in range(1, p):
            params = {"p": p, "delta": delta}
            tasks += [("3.2", params), ("3.2:half_sum", params), ("3.2:profile", params)]

    return tasks


def _incomplete_sum_tasks(limit, rng_seed):
    # A fixed seed gives the same sample, so resumed runs see the same tasks
    rng = np.random.default_rng(rng_seed)
    tasks = []
    for p in primes_up_to(limit, start=LEMMA36_MIN_PRIME):
        p = int(p)
        deltas = sorted({int(d) for d in rng.integers(1, p, size=DELTAS_PER_PRIME)})
        for delta in deltas:
            params = {"p": p, "delta": delta}
            tasks += [("3.6", params), ("3.6:A", params)]

    return tasks


def _evaluate_charsum(task):
    suite, params = task
    p = params["p"]
    if suite == "3.1:gauss":
        return VerificationRecord.compare(suite, params, gauss_norm(p), p)

    delta = params["delta"]
    if suite == "3.1":
        agree = sum(ap_direct(p, delta, u) == ap_kloosterman(p, delta, u) for u in range(p))
        return VerificationRecord.compare(suite, params, agree, p)
    if suite == "3.1:u0":
        return VerificationRecord.compare(suite, params, ap_direct(p, delta, 0).rational_value(), -1)
    if suite == "3.1:weil":
        held = sum(weil_bound_holds(p, delta, u) for u in range(1, p))
        return VerificationRecord.compare(suite, params, held, p - 1)
    if suite == "3.2":
        ell, bound = ell_p(p, delta), l_p(p)
        return VerificationRecord.compare(suite, params, ell, bound, ell <= bound)
    if suite == "3.2:half_sum":
        return VerificationRecord.compare(suite, params, half_sum(p, delta), -1)
    if suite == "3.2:profile":
        profile = residue_profile(p, delta)
        return VerificationRecord.compare(
            suite, params, profile.n_plus, profile.closed_form()[1], profile.matches_closed_form()
        )
    if suite == "3.6":
        ell, bound = ell_p(p, delta), Fraction(p, 6)
        return VerificationRecord.compare(suite, params, ell, bound, ell <= bound)

    value, bound = abs(incomplete_sum_A(p, delta)), incomplete_sum_bound(p)
    return VerificationRecord.compare(suite, params, value, bound, value <= bound)


def _tj_tasks(limit, rng_seed):
    # Tasks of one triple stay adjacent so the histogram cache is hit
    for p, t, delta in _prime_power_triples(limit):
        params = {"p": p, "t": t, "delta": delta}
        for j in range(1, t + 1):
            yield "4.6", {**params, "j": j}
        yield "4.6:decomposition", params


def _lower_bound_tasks(limit, rng_seed):
    return (("4.7", {"p": p, "t": t, "delta": d}) for p, t, d in _prime_power_triples(limit))


def _nstar_tasks(limit, rng_seed):
    return (("4.9", {"p": p, "t": t, "delta": d}) for p, t, d in _prime_power_triples(limit))


@lru_cache(maxsize=4)
def _histogram(p, t, delta, numba):
    counts = casework._pair_histogram(p, t, delta, casework.DEFAULT_BUDGET, numba)
    counts.setflags(write=False)

    return counts


def _evaluate_counting(task, numba=True):
    suite, params = task
    p, t, delta = params["p"], params["t"], params["delta"]
    if suite == "4.6":
        result = casework.compute_Tj(p, t, delta, params["j"], counts=_histogram(p, t, delta, numba))
        expected = result.closed_form if result.closed_form is not None else result.bound
        return VerificationRecord.compare(suite, params, result.value, expected, result.passed)
    if suite == "4.6:decomposition":
        left, right, _ = casework.decomposition(p, t, delta, counts=_histogram(p, t, delta, numba))
        return VerificationRecord.compare(suite, params, left, right)
    if suite == "4.7":
        record = casework.count_N(p, t, delta, numba=numba)
        bound = casework.n_lower_bound(p, t)
        return VerificationRecord.compare(suite, params, record.N, bound, record.N >= bound)

    # N* > 0 exactly when some collision lies in the window; the first one is enough
    witness = casework.first_nstar_collision(p, t, delta, numba=numba)
    length = 1 + 3 ** (casework.nstar_window(p, t, delta)[1] - 1)
    found = 0 if witness is None else witness.b
    return VerificationRecord.compare(suite, params, found, length, witness is not None)


def _skip_completed(records, completed):
    for record in records:
        if not completed or record.key not in completed:
            yield record


def _swept(tasks, evaluate, compiled=False):
    # Runner for a suite evaluated task by task through the block runner
    def runner(
        limit,
        workers=1,
        block_size=256,
        completed=None,
        rng_seed=DEFAULT_RNG_SEED,
        numba=True,
        progress=False,
        **options,
    ):
        return _python_discrim._sweep(
            tasks(limit, rng_seed),
            partial(evaluate, numba=numba) if compiled else evaluate,
            workers=workers,
            block_size=block_size,
            completed=completed,
            progress=progress,
        )

    return runner


def _inequality(name):
    def runner(limit, workers=1, block_size=4096, completed=None, progress=False, previous=(), **options):
        records = casework.verify_inequality(
            name,
            limit,
            workers=workers,
            block_size=block_size,
            completed=completed,
            previous=previous,
            progress=progress,
        )
        return _skip_completed(records, completed)

    return runner


def _run_ell7(limit, completed=None, **options):
    records = (
        VerificationRecord.compare("5.1", {"r": r}, ell, casework.ell7_expected(r))
        for r, ell in casework.ell7_pattern(limit)
    )

    return _skip_completed(records, completed)


def _run_exceptional(limit, completed=None, numba=True, **options):
    return _skip_completed(casework.exceptional_no_collision(limit, numba=numba), completed)


def _run_partition(limit, workers=1, block_size=16, completed=None, numba=True, progress=False, **options):
    return casework.verify_partition(
        limit, workers=workers, numba=numba, block_size=block_size, completed=completed, progress=progress
    )


def _suite(name, runner, default_limit, long_limit, block_size, description):
    return name, Suite(name, runner, default_limit, long_limit, block_size, description)


SUITES = dict(
    [
        _suite(
            "3.1",
            _swept(_charsum_tasks, _evaluate_charsum),
            199,
            499,
            64,
            "A_p direct = Kloosterman form, A_p(delta, 0) = -1, Weil bound, Gauss norm",
        ),
        _suite(
            "3.2",
            _swept(_ell_tasks, _evaluate_charsum),
            997,
            4999,
            1024,
            "ell_p <= L_p, half sum = -1, residue profile closed form",
        ),
        _suite("3.4", _inequality("L34"), 10**6, 10**7, 4096, "p/39 + L_p <= p/3"),
        _suite("3.5", _inequality("L35"), 10**6, 10**7, 4096, "p/13 + L_p <= p/3 for p >= 165"),
        _suite(
            "3.6",
            _swept(_incomplete_sum_tasks, _evaluate_charsum),
            6000,
            20000,
            256,
            "ell_p <= p/6 and the incomplete sum bound for p >= 4000",
        ),
        _suite(
            "4.6",
            _swept(_tj_tasks, _evaluate_counting, compiled=True),
            3000,
            10000,
            32,
            "T_j closed form and the decomposition of N",
        ),
        _suite(
            "4.7",
            _swept(_lower_bound_tasks, _evaluate_counting, compiled=True),
            3000,
            10**5,
            32,
            "N >= lower bound",
        ),
        _suite(
            "4.9",
            _swept(_nstar_tasks, _evaluate_counting, compiled=True),
            10**5,
            20000**2 - 1,
            64,
            "N* > 0 for delta p^t in its window",
        ),
        _suite("5.1", _run_ell7, 17, 600, 1, "ell_7(3^r) follows 2, 3, 1 by r mod 3"),
        _suite("5.5", _run_exceptional, 5, 100, 1, "no collision modulo 7*3^(6s+4) for exceptional n"),
        _suite(
            "partition",
            _run_partition,
            2000,
            48000,
            16,
            "every window modulus is classified and gets a verified witness",
        ),
        _suite("C1", _inequality("C1"), 10**6, 10**7, 4096, "2 sqrt(p) (2 + ln p) < p/3 - 5"),
        _suite("L34", _inequality("L34"), 10**6, 10**7, 4096, "p/39 + L_p <= p/3"),
        _suite("L35", _inequality("L35"), 10**6, 10**7, 4096, "p/13 + L_p <= p/3 for p >= 165"),
        _suite("L41", _inequality("L41"), 10**4, 10**6, 4096, "(p^(r-1) - 3/2)(delta - 3) >= 9/2"),
        _suite("L43", _inequality("L43"), 10**4, 10**6, 4096, "(2^r - 3)(t - 3) >= 9"),
        _suite("L48", _inequality("L48"), 10**5, 10**7, 4096, "q > (500/3)(1 + ln q)^2 + 30"),
        _suite("C45", _inequality("C45"), 100, 1000, 4096, "7 + 2*3^(r+1) < 3^(r+2)"),
    ]
)


def resolve_suite(suite_id):
    """
    The suite registered under `suite_id`.

    :raises UnknownSuiteError: When no suite has that identifier
    :rtype: Suite
    """

    try:
        return SUITES[suite_id]
    except KeyError:
        raise _checks.UnknownSuiteError(
            f"Unknown suite {suite_id!r}; expected one of {', '.join(SUITES)}"
        ) from None


def conforms(record):
    """
    Whether a record agrees with what the proof claims. Inequality rows may
    or must fail at their stated boundaries; every other row has to pass.

    :rtype: bool
    """

    if record.suite.split(":")[0] in casework.INEQUALITIES:
        return casework.inequality_conforms(record)

    return record.passed


def verify_suite(
    suite_id,
    limit=None,
    workers=1,
    block_size=None,
    completed=None,
    previous=(),
    rng_seed=DEFAULT_RNG_SEED,
    long_run=False,
    numba=True,
    progress=False,
):
    """
    Runs one verification suite.

    :param suite_id: Identifier, e.g. ``"3.1"``, ``"L48"`` or ``"partition"``
    :type suite_id: str
    :param limit: Largest prime, modulus or parameter covered, defaults to the
                  suite's desk-scale limit (or its long-run limit)
    :type limit: int, optional
    :param workers: Number of `joblib` workers, defaults to 1
    :type workers: int, optional
    :param block_size: Tasks per block, defaults to the suite's own
    :type block_size: int, optional
    :param completed: Record keys to skip when resuming, defaults to None
    :type completed: set, optional
    :param previous: Records of the run being resumed, used by summary rows
    :type previous: iterable, optional
    :param rng_seed: Seed of sampled parameters, defaults to 88
    :type rng_seed: int, optional
    :param long_run: Whether the default limit is the long-run one,
                     defaults to False
    :type long_run: bool, optional
    :param numba: Whether to use the compiled kernels, defaults to True
    :type numba: bool, optional
    :param progress: Whether to show a progress bar, defaults to False
    :type progress: bool, optional
    :rtype: generator of VerificationRecord
    """

    suite = resolve_suite(suite_id)
    _checks._check_numba(numba)
    if limit is None:
        limit = suite.long_limit if long_run else suite.default_limit
    limit = _checks._check_nonnegative("limit", limit)
    block_size = suite.block_size if block_size is None else _checks._check_positive("block_size", block_size)
    logger.info("Running suite %s up to %d", suite.name, limit)

    return suite.runner(
        limit,
        workers=workers,
        block_size=block_size,
        completed=completed,
        rng_seed=rng_seed,
        numba=numba,
        progress=progress,
        previous=tuple(previous),
    )
