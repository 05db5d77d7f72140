#!/usr/bin/env python3
"""
Настройки из переменных окружения (.env загружается в gorenstein.py).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from tools.errors import ConfigError

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DEFAULT_REPORT_DIR = PROJECT_ROOT / "ai_experiments"
DEFAULT_SEED = 42
DEFAULT_WORKERS = 1


@dataclass(frozen=True)
class Settings:
    workers: int
    report_dir: Path
    trace: bool
    seed: int


def _int_env(key: str, default: int) -> int:
    raw = os.environ.get(key, "").strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{key} должно быть целым числом, получено {raw!r}") from exc


def _flag_env(key: str) -> bool:
    raw = os.environ.get(key, "0").strip().lower()
    if raw in ("1", "true", "yes", "on"):
        return True
    if raw in ("", "0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key} должно быть 0/1, получено {raw!r}")


def load_settings() -> Settings:
    workers = _int_env("MACAULAY_WORKERS", DEFAULT_WORKERS)
    if workers < 1:
        raise ConfigError("MACAULAY_WORKERS must be >= 1")
    raw_dir = os.environ.get("MACAULAY_REPORT_DIR", "").strip()
    # относительный путь считается от корня проекта
    report_dir = Path(raw_dir).expanduser() if raw_dir else DEFAULT_REPORT_DIR
    if not report_dir.is_absolute():
        report_dir = PROJECT_ROOT / report_dir
    return Settings(
        workers=workers,
        report_dir=report_dir,
        trace=_flag_env("MACAULAY_TRACE"),
        seed=_int_env("MACAULAY_SEED", DEFAULT_SEED),
    )
