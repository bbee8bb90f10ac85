import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

logger = logging.getLogger(__name__)

T = TypeVar("T")


def member_seed(master_seed: int, index: int) -> int:
    """Seed of ensemble member `index`; members never depend on ensemble size."""
    state = np.random.SeedSequence(master_seed, spawn_key=(index,))
    return int(state.generate_state(1, dtype=np.uint64)[0])


def member_seeds(master_seed: int, n_members: int, start: int = 0) -> list[int]:
    return [member_seed(master_seed, i) for i in range(start, start + n_members)]


def map_members(
    fn: Callable[[int], T], seeds: Sequence[int], threads: int = 1
) -> list[T]:
    """Evaluate fn on every seed, results in seed order whatever the pool size."""
    if threads <= 1 or len(seeds) < 2:
        return [fn(seed) for seed in seeds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, seeds))
