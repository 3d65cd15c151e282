import numpy as np
import pytest

from qpyc.montecarlo import (
    THREADS_ENV,
    MonteCarloResult,
    block_generator,
    block_sizes,
    default_threads,
    run_blocks,
)


def test_block_sizes():
    assert block_sizes(10, 4) == [4, 4, 2]
    assert block_sizes(8, 4) == [4, 4]


def test_thread_count_does_not_change_results():
    work = lambda rng, n: rng.random(n).sum()
    one = run_blocks(work, 100_000, seed=3, threads=1, block_size=7_000)
    many = run_blocks(work, 100_000, seed=3, threads=6, block_size=7_000)
    assert one == many


def test_blocks_are_independent_streams():
    a = block_generator(0, 0).random(5)
    b = block_generator(0, 1).random(5)
    assert not np.allclose(a, b)
    assert np.array_equal(a, block_generator(0, 0).random(5))


def test_env_threads(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert default_threads() == 3
    monkeypatch.delenv(THREADS_ENV)
    assert default_threads() >= 1


def test_result_round_trip():
    r = MonteCarloResult.from_counts(25, 100, seed=1, geometry="toric")
    assert r.estimate == 0.25
    assert r.std_error == pytest.approx(np.sqrt(0.25 * 0.75 / 100))
    assert MonteCarloResult.from_json(r.to_json()) == r
    assert r.within(0.3) and not r.within(0.5)
