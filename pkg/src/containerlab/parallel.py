"""Seed derivation and an order-preserving worker pool.

Every parallel unit gets its own seed derived from ``(root, index)``, so the
number of workers never changes a result.
"""

from concurrent.futures import ProcessPoolExecutor

import numpy as np


def derive_seed(root, *index):
    """Counter-based 64-bit child seed of ``root`` for the task ``index``."""
    ss = np.random.SeedSequence(entropy=int(root) % 2**64, spawn_key=tuple(int(i) for i in index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def rng(seed):
    return np.random.default_rng(np.random.SeedSequence(int(seed) % 2**64))


def pmap(fn, tasks, workers=1):
    """``list(map(fn, tasks))``, fanned out to processes when ``workers > 1``."""
    tasks = list(tasks)
    if workers is None or workers <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))
