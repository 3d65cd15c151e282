"""Monte Carlo bookkeeping shared by the noise and percolation samplers.

Runs are cut into fixed-size blocks and block ``i`` draws from
``PCG64(SeedSequence(seed, spawn_key=(i,)))``.  Which worker handles which
block does not matter, so estimates are identical for any thread count.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

RNG_ALGORITHM = "PCG64/SeedSequence(spawn_key=block)"
DEFAULT_BLOCK = 50_000
THREADS_ENV = "QPYC_THREADS"


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    std_error: float
    runs: int
    seed: int
    rng_algorithm: str = RNG_ALGORITHM
    successes: int | None = None
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_counts(cls, hits: int, runs: int, seed: int, **meta) -> MonteCarloResult:
        p = hits / runs
        return cls(p, math.sqrt(max(p * (1 - p), 0.0) / runs), runs, seed,
                   successes=int(hits), meta=meta)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> MonteCarloResult:
        return cls(**json.loads(text))

    def within(self, value: float, sigmas: float = 3.0) -> bool:
        return abs(self.estimate - value) <= sigmas * self.std_error


def default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return max(1, min(8, os.cpu_count() or 1))


def block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def block_sizes(runs: int, block_size: int = DEFAULT_BLOCK) -> list[int]:
    full, rest = divmod(runs, block_size)
    return [block_size] * full + ([rest] if rest else [])


def run_blocks(work: Callable[[np.random.Generator, int], np.ndarray | float | int],
               runs: int, seed: int, threads: int | None = None,
               block_size: int = DEFAULT_BLOCK) -> list:
    """Call ``work(rng, size)`` for every block and return results in block order."""
    sizes = block_sizes(runs, block_size)
    threads = threads or default_threads()
    jobs = [(block_generator(seed, i), n) for i, n in enumerate(sizes)]
    if threads == 1 or len(jobs) == 1:
        return [work(g, n) for g, n in jobs]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: work(*job), jobs))
