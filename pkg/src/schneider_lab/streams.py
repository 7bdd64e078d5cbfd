"""Seeded random streams and the block-parallel runner.

Samples are grouped in fixed-size blocks. Block ``j`` of an experiment seeded
with ``seed`` always draws from ``SeedSequence(seed, spawn_key=(j,))``, so a
sample's value depends only on ``(seed, index)`` and never on how many
workers run the blocks.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

ENV_THREADS = "SCHNEIDER_LAB_THREADS"


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def blocks(samples: int, block_size: int):
    """Yield ``(block_index, count)`` covering ``samples`` items."""
    for j, start in enumerate(range(0, samples, block_size)):
        yield j, min(block_size, samples - start)


def worker_count(workers: int | None = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(ENV_THREADS)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_blocks(func, tasks: list[tuple], workers: int | None = None) -> list:
    """``[func(*t) for t in tasks]``, possibly across processes; order is kept."""
    n = worker_count(workers)
    if n <= 1 or len(tasks) <= 1:
        return [func(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(n, len(tasks))) as pool:
        return list(pool.map(func, *zip(*tasks)))
