#!/usr/bin/env python3
"""
Консольное логирование шагов: тяжёлые вызовы библиотеки и заметные события.
Включается через MACAULAY_TRACE=1 (или enable_tracing()), пишет в stderr.
"""
from __future__ import annotations

import functools
import json
import os
import sys
from datetime import datetime
from typing import Any, Callable, TypeVar

F = TypeVar("F", bound=Callable[..., Any])

_ARGS_PREVIEW = 200
_RESULT_PREVIEW = 80

_enabled: bool | None = None


def enable_tracing(flag: bool | None = True) -> None:
    """None возвращает управление переменной MACAULAY_TRACE."""
    global _enabled
    _enabled = flag


def tracing_enabled() -> bool:
    if _enabled is not None:
        return _enabled
    return os.environ.get("MACAULAY_TRACE", "0").strip().lower() in ("1", "true", "yes", "on")


def _now() -> str:
    return datetime.now().strftime("%Y-%m-%d %H:%M:%S")


def _preview(value: Any, limit: int) -> str:
    text = value if isinstance(value, str) else str(value)
    return text[:limit] + ("..." if len(text) > limit else "")


def log_event(tag: str, message: str) -> None:
    if not tracing_enabled():
        return
    print(f"[{_now()}] [{tag}] {message}", file=sys.stderr)


def traced(name: str) -> Callable[[F], F]:
    """Декоратор: печатает вызов и краткий результат, если трассировка включена."""

    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            if not tracing_enabled():
                return func(*args, **kwargs)
            payload = {"args": [str(a) for a in args], **{k: str(v) for k, v in kwargs.items()}}
            args_preview = _preview(json.dumps(payload, ensure_ascii=False, default=str), _ARGS_PREVIEW)
            print(f"[{_now()}] [step] {name}({args_preview})", file=sys.stderr)
            result = func(*args, **kwargs)
            print(f"[{_now()}] [step] {name} -> {_preview(result, _RESULT_PREVIEW)}", file=sys.stderr)
            return result

        return wrapper  # type: ignore[return-value]

    return decorator
