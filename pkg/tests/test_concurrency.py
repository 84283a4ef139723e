"""Test concurrency: BatchEvaluator ordering and chunking"""

import threading

import numpy as np
import pytest

from core.concurrency import BatchEvaluator


def _row_sums(rows):
    return [float(r.sum()) for r in rows]


@pytest.mark.parametrize("workers", [1, 2, 4])
def test_results_keep_input_order(workers):
    rows = np.arange(300, dtype=float).reshape(100, 3)
    with BatchEvaluator(_row_sums, workers=workers, chunk_size=7) as batch:
        assert batch(rows) == _row_sums(rows)


def test_chunks_are_identical_for_any_worker_count():
    seen: dict[int, list[int]] = {1: [], 3: []}
    lock = threading.Lock()

    for workers in seen:
        def record(rows, workers=workers):
            with lock:
                seen[workers].append(len(rows))
            return _row_sums(rows)

        with BatchEvaluator(record, workers=workers, chunk_size=10) as batch:
            batch(np.ones((35, 2)))
    assert sorted(seen[1]) == sorted(seen[3]) == [5, 10, 10, 10]


def test_empty_batch():
    batch = BatchEvaluator(_row_sums, workers=2)
    assert batch(np.zeros((0, 3))) == []
    assert batch.calls == 1


def test_pool_created_lazily_and_closed():
    batch = BatchEvaluator(_row_sums, workers=2, chunk_size=2)
    assert batch._pool is None
    batch(np.ones((10, 1)))
    assert batch._pool is not None
    batch.close()
    assert batch._pool is None


def test_invalid_arguments():
    with pytest.raises(ValueError):
        BatchEvaluator(_row_sums, workers=0)
    with pytest.raises(ValueError):
        BatchEvaluator(_row_sums, chunk_size=0)
