#!/usr/bin/env python3
"""
Сохранение отчётов воспроизведения: ai_experiments/<case>/results/report.{json,txt}.
Корень задаётся через MACAULAY_REPORT_DIR в .env.
"""
from __future__ import annotations

import json
from pathlib import Path

from tools.errors import ParameterError
from tools.settings import load_settings


def get_report_root(root: Path | None = None) -> Path:
    root = load_settings().report_dir if root is None else Path(root).expanduser().resolve()
    root.mkdir(parents=True, exist_ok=True)
    return root


def _safe_case(case: str) -> str:
    name = case.strip().replace(" ", "_")
    if not name or ".." in name or "/" in name or "\\" in name:
        raise ParameterError(f"недопустимое имя случая: {case!r}")
    return name


def case_dir(case: str, root: Path | None = None) -> Path:
    path = get_report_root(root) / _safe_case(case) / "results"
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_json(records: list[dict], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(records, ensure_ascii=False, indent=2), encoding="utf-8")
    return path


def save_report(case: str, records: list[dict], table: str, root: Path | None = None) -> Path:
    """Пишет report.json и report.txt; возвращает путь к JSON."""
    target = case_dir(case, root)
    (target / "report.txt").write_text(table + "\n", encoding="utf-8")
    return write_json(records, target / "report.json")


def load_report(path: Path) -> list[dict]:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def list_reports(root: Path | None = None) -> list[str]:
    base = get_report_root(root)
    return sorted(p.relative_to(base).as_posix() for p in base.rglob("report.json"))
