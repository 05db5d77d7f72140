#!/usr/bin/env python3
"""
Точная линейная алгебра над Q поверх sympy DomainMatrix:
QMatrix (RREF, ядро, обратная), решение систем и инкрементальный эшелон-базис.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from tools.errors import AmbientMismatchError, SingularMatrixError
from tools.poly_core import Rat, format_rational, to_rat

Vector = tuple[Rat, ...]


@dataclass(frozen=True)
class QMatrix:
    rows: int
    cols: int
    entries: tuple[Rat, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise AmbientMismatchError(
                f"{len(self.entries)} entries do not fill a {self.rows}x{self.cols} matrix"
            )

    # --- конструкторы ---
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], cols: int | None = None) -> QMatrix:
        if not rows:
            return cls(0, cols or 0, ())
        width = len(rows[0]) if cols is None else cols
        flat: list[Rat] = []
        for row in rows:
            if len(row) != width:
                raise AmbientMismatchError("rows of different length")
            flat.extend(to_rat(v) for v in row)
        return cls(len(rows), width, tuple(flat))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> QMatrix:
        return cls(rows, cols, (QQ(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls(n, n, tuple(QQ(1) if i == j else QQ(0) for i in range(n) for j in range(n)))

    @classmethod
    def _from_domain(cls, dm: DomainMatrix) -> QMatrix:
        r, c = dm.shape
        return cls(r, c, tuple(to_rat(v) for row in dm.to_list() for v in row))

    def _to_domain(self) -> DomainMatrix:
        return DomainMatrix(self.to_lists(), (self.rows, self.cols), QQ)

    # --- доступ ---
    def __getitem__(self, key: tuple[int, int]) -> Rat:
        i, j = key
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> list[list[Rat]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(format_rational(v) for v in self.row(i)) + "]" for i in range(self.rows))

    # --- операции ---
    def transpose(self) -> QMatrix:
        return QMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def matmul(self, other: QMatrix) -> QMatrix:
        if self.cols != other.rows:
            raise AmbientMismatchError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if 0 in (self.rows, self.cols, other.cols):
            return QMatrix.zeros(self.rows, other.cols)
        return QMatrix._from_domain(self._to_domain().matmul(other._to_domain()))

    def __mul__(self, other: QMatrix) -> QMatrix:
        return self.matmul(other)

    def apply(self, vector: Sequence[object]) -> Vector:
        if len(vector) != self.cols:
            raise AmbientMismatchError(f"vector of length {len(vector)} for {self.cols} columns")
        vec = [to_rat(v) for v in vector]
        return tuple(sum((a * b for a, b in zip(self.row(i), vec)), QQ(0)) for i in range(self.rows))

    def inverse(self) -> QMatrix:
        if self.rows != self.cols:
            raise SingularMatrixError(f"non-square {self.rows}x{self.cols} matrix has no inverse")
        if self.rows == 0:
            return self
        try:
            return QMatrix._from_domain(self._to_domain().inv())
        except DMNonInvertibleMatrixError as exc:
            raise SingularMatrixError("matrix is singular") from exc

    def hstack(self, *others: QMatrix) -> QMatrix:
        rows = self.to_lists()
        for other in others:
            if other.rows != self.rows:
                raise AmbientMismatchError("hstack: row counts differ")
            for i, extra in enumerate(other.to_lists()):
                rows[i].extend(extra)
        return QMatrix.from_rows(rows, self.cols + sum(o.cols for o in others))

    def vstack(self, *others: QMatrix) -> QMatrix:
        entries = list(self.entries)
        for other in others:
            if other.cols != self.cols:
                raise AmbientMismatchError("vstack: column counts differ")
            entries.extend(other.entries)
        return QMatrix(self.rows + sum(o.rows for o in others), self.cols, tuple(entries))

    def rank(self) -> int:
        return len(rref(self)[1])

    def determinant(self) -> Rat:
        if self.rows != self.cols:
            raise AmbientMismatchError(f"determinant of a non-square {self.rows}x{self.cols} matrix")
        if self.rows == 0:
            return QQ(1)
        return to_rat(self._to_domain().det())


def rref(M: QMatrix) -> tuple[QMatrix, list[int]]:
    if M.rows == 0 or M.cols == 0:
        return M, []
    reduced, pivots = M._to_domain().rref()
    return QMatrix._from_domain(reduced), list(pivots)


def kernel_basis(M: QMatrix) -> list[Vector]:
    """Базис правого ядра: пустой список, если M инъективна."""
    if M.cols == 0:
        return []
    if M.rows == 0:
        return _identity_rows(M.cols)
    null = M._to_domain().nullspace()
    return [tuple(to_rat(v) for v in row) for row in null.to_list() if any(row)]


def _identity_rows(n: int) -> list[Vector]:
    return [QMatrix.identity(n).row(i) for i in range(n)]


def solve_linear(A: QMatrix, v: Sequence[object]) -> Vector | None:
    """Одно решение A x = v (свободные переменные = 0) или None при несовместности."""
    if len(v) != A.rows:
        raise AmbientMismatchError(f"right-hand side of length {len(v)} for {A.rows} equations")
    rhs = [to_rat(x) for x in v]
    if A.rows == 0:
        return (QQ(0),) * A.cols
    augmented = A.hstack(QMatrix.from_rows([[x] for x in rhs], 1))
    reduced, pivots = rref(augmented)
    if A.cols in pivots:
        return None
    solution = [QQ(0)] * A.cols
    for i, col in enumerate(pivots):
        solution[col] = reduced[i, A.cols]
    return tuple(solution)


class EchelonBasis:
    """
    Инкрементальный полностью редуцированный эшелон-базис разреженных строк {столбец: Rat}.
    Ведущий столбец строки: её столбец с наибольшим priority; ведущий коэффициент равен 1,
    и ни одна строка не содержит чужих ведущих столбцов.
    """

    def __init__(self, priority: Callable[[Hashable], object]) -> None:
        self.priority = priority
        self.rows: dict[Hashable, dict[Hashable, Rat]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    def pivots(self) -> list[Hashable]:
        return list(self.rows)

    def reduce(self, vector: dict[Hashable, Rat]) -> dict[Hashable, Rat]:
        out = dict(vector)
        for col in [c for c in vector if c in self.rows]:
            coef = out.get(col)
            if not coef:
                continue
            for c, val in self.rows[col].items():
                new = out.get(c, 0) - coef * val
                if new:
                    out[c] = new
                else:
                    out.pop(c, None)
        return out

    def contains(self, vector: dict[Hashable, Rat]) -> bool:
        return not self.reduce(vector)

    def add(self, vector: dict[Hashable, Rat]) -> dict[Hashable, Rat] | None:
        """Добавляет вектор и возвращает новую строку; None, если он уже лежит в оболочке."""
        reduced = self.reduce(vector)
        if not reduced:
            return None
        pivot = max(reduced, key=self.priority)
        inv = 1 / reduced[pivot]
        reduced = {c: v * inv for c, v in reduced.items()}
        for row in self.rows.values():
            coef = row.get(pivot)
            if coef:
                for c, val in reduced.items():
                    new = row.get(c, 0) - coef * val
                    if new:
                        row[c] = new
                    else:
                        row.pop(c, None)
        self.rows[pivot] = reduced
        return reduced

    def extend(self, vectors: Iterable[dict[Hashable, Rat]]) -> int:
        return sum(1 for v in vectors if self.add(v))


def row_space_contains(basis: Sequence[Sequence[object]], vector: Sequence[object]) -> bool:
    echelon = EchelonBasis(priority=lambda col: -col)
    for row in basis:
        echelon.add({j: to_rat(x) for j, x in enumerate(row) if x})
    return echelon.contains({j: to_rat(x) for j, x in enumerate(vector) if x})
