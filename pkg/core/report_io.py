"""Report writers: CSV / text ที่เขียนแบบ atomic (temp file แล้ว os.replace)

ตัวเลข objective และ thickness ใช้ 17 significant digits (round-trip),
ตาราง dB ของ band statistics ใช้ 2 ตำแหน่งทศนิยม
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_exponential

from core.logger import get_logger

log = get_logger(__name__)


def fmt_full(value: float) -> str:
    """17 significant digits: parse กลับได้ค่าเดิม bit-for-bit"""
    return format(float(value), ".17g")


def fmt_db(value: float) -> str:
    return f"{float(value):.2f}"


@retry(
    stop=stop_after_attempt(3),
    wait=wait_exponential(multiplier=0.1, min=0.1, max=1),
    retry=retry_if_exception_type((PermissionError, BlockingIOError)),
    reraise=True,
)
def write_text_atomic(path: str | Path, text: str) -> Path:
    """เขียนไฟล์ผ่าน temp file ใน directory เดียวกัน แล้ว rename ทับ"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    log.info("Wrote %s", path)
    return path


def render_csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[str]]) -> Path:
    return write_text_atomic(path, render_csv(header, rows))
