"""
Module `_python_discrim` stores the pure `Python` counterparts of the kernels
in `_numba_discrim`, used when `numba=False` and as the independent oracle
the fast path is tested against. It also holds the block runner every sweep
goes through: tasks are cut into contiguous blocks and the blocks are
evaluated in order, or in parallel by the `joblib` library when more than
one worker is requested. Detailed docstrings are omitted, as they are
provided in the public modules.
"""

import itertools
import sys
import time
import dataclasses
import logging

from joblib import Parallel, delayed
from tqdm import tqdm

from discrim import _checks

logger = logging.getLogger(__name__)


def _python_first_collision(n, m):
    seen = {}
    for b in range(1, n + 1):
        value = (b * b % m * b + b) % m
        if value in seen:
            return seen[value], b
        seen[value] = b

    return 0, 0


def _python_smallest_collision(n, m):
    first = {}
    best = (0, 0)
    for b in range(1, n + 1):
        value = (b * b % m * b + b) % m
        if value in first:
            a = first[value]
            if best[0] == 0 or a < best[0]:
                best = (a, b)
        else:
            first[value] = b

    return best


def _python_count_pairs(x_max, delta2, q):
    total = 0
    diagonal = 0
    for a in range(1, x_max + 1):
        for b in range(1, x_max + 1):
            if (delta2 * (a * a + a * b + b * b) + 1) % q == 0:
                total += 1
                diagonal += a == b

    return total, diagonal


def _evaluate_block(evaluate, block, worker):
    # Evaluates one contiguous block of tasks, stamping timing and worker lane

    records = []
    for task in block:
        start = time.perf_counter_ns()
        record = evaluate(task)
        elapsed_us = (time.perf_counter_ns() - start) // 1000
        records.append(dataclasses.replace(record, elapsed_us=elapsed_us, worker=worker))
    logger.debug(
        "Block of %d tasks on worker %d took %d us", len(records), worker, sum(r.elapsed_us for r in records)
    )

    return records


def _task_key(task):
    suite, params = task

    return suite, tuple(sorted(params.items()))


def _pending(tasks, completed, skipped):
    for task in tasks:
        if completed and _task_key(task) in completed:
            skipped[0] += 1
            continue
        yield task


def _blocks(tasks, block_size, completed, skipped):
    # Contiguous blocks of the pending tasks, cut as the task stream is read
    pending = _pending(tasks, completed, skipped)
    while True:
        block = list(itertools.islice(pending, block_size))
        if not block:
            return
        yield block


def _sweep(tasks, evaluate, workers=1, block_size=256, completed=None, progress=False):
    # Streams the records of `evaluate(task)` for each task not already completed

    if block_size < 1:
        raise ValueError("Block size should be a positive integer")
    n_blocks = None
    if isinstance(tasks, (list, tuple)) and not completed:
        n_blocks = -(-len(tasks) // block_size)
    workers = _checks._check_workers(workers, n_blocks)
    logger.info("Sweeping in blocks of %d tasks on %d workers", block_size, workers)

    skipped = [0]
    blocks = _blocks(tasks, block_size, completed, skipped)
    bar = tqdm(total=n_blocks, unit="block", file=sys.stderr, disable=not progress)
    if workers == 1:
        results = (_evaluate_block(evaluate, block, 0) for block in blocks)
    else:
        results = Parallel(n_jobs=workers, return_as="generator")(
            delayed(_evaluate_block)(evaluate, block, i % workers)
            for i, block in enumerate(blocks)
        )
    evaluated = 0
    try:
        for records in results:
            bar.update(1)
            evaluated += len(records)
            yield from records
        if completed:
            logger.info("Resuming: %d tasks already completed were skipped", skipped[0])
        logger.info("Sweep finished: %d tasks evaluated", evaluated)
    finally:
        bar.close()
