#!/usr/bin/env python3
"""
Иерархия исключений библиотеки.
CLI переводит MacaulayError в код выхода 1 (или 2 для ошибок ввода).
"""
from __future__ import annotations


class MacaulayError(Exception):
    """Базовое исключение всех вычислительных ошибок."""


class PolySyntaxError(MacaulayError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (позиция {position})")
        self.position = position


class AmbientMismatchError(MacaulayError):
    """Разное число переменных, разные стороны (x/y) или индекс переменной вне диапазона."""


class SingularMatrixError(MacaulayError):
    pass


class NotArtinianError(MacaulayError):
    """Факторкольцо бесконечномерно: у какой-то переменной нет чистой степени среди старших мономов."""


class NormalizationError(MacaulayError):
    """Нарушены предусловия удаления линейной части или нормализации 2-растянутых алгебр."""


class InvariantViolation(MacaulayError):
    """Внутренний контракт нарушен (несовместная система, непроверенный сертификат)."""


class ParameterError(MacaulayError):
    """Параметры b/t вне допустимой области или неизвестный случай."""


class ConfigError(MacaulayError):
    pass
