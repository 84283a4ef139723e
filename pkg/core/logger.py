"""Structured logging: file + console"""

import logging
from datetime import datetime

from core.config import LOG_DIR, LOG_LEVEL, LOG_TO_FILE


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger

    logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))
    fmt = logging.Formatter("%(asctime)s [%(levelname)s] %(name)s: %(message)s")

    # Console
    ch = logging.StreamHandler()
    ch.setFormatter(fmt)
    logger.addHandler(ch)

    # File (monthly rotation)
    if LOG_TO_FILE:
        fh = logging.FileHandler(
            LOG_DIR / f"mmdf_{datetime.now():%Y%m}.log",
            encoding="utf-8",
        )
        fh.setFormatter(fmt)
        logger.addHandler(fh)

    return logger


def set_level(level: str):
    """เปลี่ยน level ของ logger ทุกตัวที่สร้างผ่าน get_logger (ใช้กับ --log-level)"""
    resolved = getattr(logging, level.upper(), None)
    if not isinstance(resolved, int):
        raise ValueError(f"Unknown log level: {level}")
    for logger in logging.Logger.manager.loggerDict.values():
        if isinstance(logger, logging.Logger) and logger.handlers:
            logger.setLevel(resolved)
