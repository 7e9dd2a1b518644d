"""Process-pool driver for branch-and-bound searches with a shared best size."""

from __future__ import annotations

import multiprocessing as mp
from typing import Callable, Sequence

__all__ = ["parallel_branch_max"]

_shared = None


def _init(value) -> None:
    global _shared
    _shared = value


def _call(payload):
    worker, args, branch = payload
    return worker(*args, branch, _shared)


def parallel_branch_max(worker: Callable, args: tuple, branches: Sequence, jobs: int):
    """Run ``worker(*args, branch, shared)`` for every branch on ``jobs`` processes.

    ``shared`` is a lock-protected integer holding the best size found so far
    by any worker; workers read it to prune and raise it on improvement.  The
    result is the ``(size, witness)`` pair of largest size, ties going to the
    earliest branch so runs are reproducible.
    """
    if jobs < 1:
        raise ValueError("jobs must be positive")
    shared = mp.Value("q", 0)
    payloads = [(worker, args, b) for b in branches]
    with mp.get_context("fork").Pool(jobs, initializer=_init, initargs=(shared,)) as pool:
        results = pool.map(_call, payloads, chunksize=1)
    best, witness = 0, None
    for size, wit in results:
        if size > best:
            best, witness = size, wit
    return best, witness
