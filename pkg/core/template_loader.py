"""Template Loader: โหลด text template จาก markdown + render ตัวแปร

Usage:
    from core.template_loader import load_template
    text = load_template("reports/knee.md", filter="LP", rows="...")

ไฟล์อยู่ใน templates/ ใต้ project root
- ตัวแปรใช้ str.format() syntax
- Frontmatter (optional) เก็บเป็น metadata เช่น summary ของ subcommand
- Hot reload เมื่อ MMDF_TEMPLATE_HOT_RELOAD=1
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from threading import Lock

from core.config import TEMPLATE_HOT_RELOAD
from core.logger import get_logger

log = get_logger(__name__)

TEMPLATES_DIR = Path(__file__).resolve().parent.parent / "templates"


@dataclass
class _CachedTemplate:
    body: str
    metadata: dict
    mtime: float


_cache: dict[str, _CachedTemplate] = {}
_cache_lock = Lock()


def _split_frontmatter(text: str) -> tuple[dict, str]:
    """แยก frontmatter (key: value ต่อบรรทัด) ออกจาก body"""
    if not text.startswith("---\n"):
        return {}, text

    parts = text.split("\n---\n", 1)
    if len(parts) != 2:
        return {}, text

    metadata: dict = {}
    for line in parts[0][4:].splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#") or ":" not in stripped:
            continue
        key, _, value = stripped.partition(":")
        metadata[key.strip()] = value.strip().strip('"').strip("'")
    return metadata, parts[1].lstrip("\n")


def _read_template_file(rel_path: str) -> _CachedTemplate:
    path = TEMPLATES_DIR / rel_path
    if not path.exists():
        raise FileNotFoundError(f"Template file not found: {rel_path} (absolute: {path})")
    metadata, body = _split_frontmatter(path.read_text(encoding="utf-8"))
    return _CachedTemplate(body=body, metadata=metadata, mtime=path.stat().st_mtime)


def _get_cached(rel_path: str) -> _CachedTemplate:
    with _cache_lock:
        cached = _cache.get(rel_path)
        if cached is not None and not TEMPLATE_HOT_RELOAD:
            return cached

        if TEMPLATE_HOT_RELOAD and cached is not None:
            if (TEMPLATES_DIR / rel_path).stat().st_mtime <= cached.mtime:
                return cached
            log.info("Hot reload: %s", rel_path)

        loaded = _read_template_file(rel_path)
        _cache[rel_path] = loaded
        return loaded


def load_template(rel_path: str, **template_vars) -> str:
    """Render body ของ template (ไม่รวม frontmatter)

    Raises:
        FileNotFoundError: ไม่พบไฟล์
        KeyError: template ใช้ตัวแปรที่ไม่ได้ส่งมา
    """
    cached = _get_cached(rel_path)
    try:
        return cached.body.format(**template_vars)
    except KeyError as e:
        raise KeyError(f"Missing template variable {e} in template {rel_path}") from e


def load_metadata(rel_path: str) -> dict:
    return _get_cached(rel_path).metadata


def find_template_variables(text: str) -> set[str]:
    return set(re.findall(r"\{([a-zA-Z_][a-zA-Z0-9_]*)\}", text))


def validate_all_templates() -> list[str]:
    """Render ทุก template ด้วยค่า dummy: คืน list ของ error message"""
    if not TEMPLATES_DIR.exists():
        log.warning("TEMPLATES_DIR does not exist: %s, skipping validation", TEMPLATES_DIR)
        return []

    errors: list[str] = []
    for path in sorted(TEMPLATES_DIR.rglob("*.md")):
        rel = path.relative_to(TEMPLATES_DIR).as_posix()
        try:
            cached = _read_template_file(rel)
            dummies = {var: "DUMMY" for var in find_template_variables(cached.body)}
            cached.body.format(**dummies)
        except (ValueError, KeyError, IndexError) as e:
            errors.append(f"{rel}: {e}")
    return errors
