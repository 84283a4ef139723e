"""Concurrency utilities: กระจายการประเมิน objective ของหนึ่ง phase ไปหลาย thread

ผลลัพธ์ต้องกลับมาตามลำดับ index เสมอ และการแบ่งก้อนไม่ขึ้นกับจำนวน worker
เพื่อให้ RNG stream และ archive ของ optimizer ซ้ำได้ bit-for-bit
"""

from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

import numpy as np

from core.logger import get_logger

log = get_logger(__name__)

T = TypeVar("T")


class BatchEvaluator:
    """แบ่ง batch เป็นก้อนขนาดคงที่ ส่งให้ thread pool แล้วต่อผลกลับตามลำดับเดิม

    numpy ปล่อย GIL ระหว่างคำนวณ array ใหญ่ จึงได้ประโยชน์จาก thread จริง
    workers=1 ก็ยังแบ่งก้อนแบบเดียวกัน (array shape เท่ากันทุกกรณี)

    Usage:
        evaluator = BatchEvaluator(fn, workers=4)
        results = evaluator(rows)   # == fn(rows) แต่แบ่งทำพร้อมกัน
    """

    def __init__(self, fn: Callable[[np.ndarray], list[T]], workers: int = 1,
                 chunk_size: int = 25):
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        if chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
        self.fn = fn
        self.workers = workers
        self.chunk_size = chunk_size
        self._pool: ThreadPoolExecutor | None = None
        self._lock = threading.Lock()
        self.calls = 0

    def _get_pool(self) -> ThreadPoolExecutor:
        """Lazy init: สร้าง pool ครั้งแรกที่ต้องใช้จริง"""
        with self._lock:
            if self._pool is None:
                self._pool = ThreadPoolExecutor(max_workers=self.workers,
                                                thread_name_prefix="mmdf-eval")
            return self._pool

    def __call__(self, rows: np.ndarray) -> list[T]:
        self.calls += 1
        step = self.chunk_size
        chunks = [rows[a:a + step] for a in range(0, len(rows), step)]
        parts: Iterable[list[T]]
        if self.workers == 1 or len(chunks) < 2:
            parts = map(self.fn, chunks)
        else:
            # pool.map คืนผลตามลำดับ input
            parts = self._get_pool().map(self.fn, chunks)
        results: list[T] = []
        for part in parts:
            results.extend(part)
        return results

    def close(self):
        with self._lock:
            if self._pool is not None:
                self._pool.shutdown(wait=True)
                self._pool = None
                log.debug("Evaluation pool shut down")

    def __enter__(self):
        return self

    def __exit__(self, *_exc):
        self.close()
