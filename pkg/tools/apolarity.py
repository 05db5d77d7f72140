#!/usr/bin/env python3
"""
Обратные системы Маколея: действие сжатия x^a o y^b, аннуляторы, J-perp,
пространства старших форм (tdf), функции Гильберта и инварианты 2-растянутых алгебр.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Sequence

from sympy import QQ
from sympy.polys.monomials import monomial_div, monomial_mul

from tools.errors import AmbientMismatchError, NormalizationError, ParameterError
from tools.linalg_exact import EchelonBasis, QMatrix, kernel_basis
from tools.poly_core import Monomial, Poly, Rat, monomials_of_degree, monomials_up_to, parse_poly, render_poly
from tools.trace import traced

if TYPE_CHECKING:
    from tools.groebner import GrobnerBasis, TermOrder


def _falling(beta: Monomial, alpha: Monomial) -> int:
    """alpha! * C(beta, alpha) = prod beta_i! / (beta_i - alpha_i)!"""
    out = 1
    for b, a in zip(beta, alpha):
        out *= math.perm(b, a)
    return out


def _monomial_priority(mono: Monomial) -> tuple:
    return (sum(mono), mono)


def _lowest_first(mono: Monomial) -> tuple:
    return (-sum(mono), mono)


@dataclass(frozen=True)
class HilbertFunction:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = list(self.values)
        while vals and vals[-1] == 0:
            vals.pop()
        object.__setattr__(self, "values", tuple(vals))

    def __getitem__(self, d: int) -> int:
        return self.values[d] if 0 <= d < len(self.values) else 0

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def total(self) -> int:
        return sum(self.values)

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class DualGenerator:
    F: Poly

    def __post_init__(self) -> None:
        if self.F.side != "y":
            raise AmbientMismatchError("dual generator must be a polynomial in y-variables")
        if self.F.is_zero():
            raise ParameterError("dual generator must be nonzero")

    @classmethod
    def from_poly(cls, F: Poly) -> DualGenerator:
        return cls(F)

    @property
    def ambient_n(self) -> int:
        return self.F.ambient_n

    @property
    def socle_degree(self) -> int:
        return self.F.degree()

    def component(self, i: int) -> Poly:
        return self.F.homogeneous_component(i)

    def components(self) -> list[Poly]:
        return self.F.components()

    def __str__(self) -> str:
        return render_poly(self.F)


@dataclass
class Ideal:
    """
    Идеал S[n], заданный образующими. truncation = D означает, что образующие
    порождают S_+^D; базис Грёбнера тогда считается в S/S_+^D.
    """

    ambient_n: int
    generators: tuple[Poly, ...]
    truncation: int | None = None
    _gb_cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self) -> None:
        gens = []
        for g in self.generators:
            if g.side != "x" or g.ambient_n != self.ambient_n:
                raise AmbientMismatchError(f"generator {g!r} is not in S[{self.ambient_n}]")
            if not g.is_zero():
                gens.append(g)
        self.generators = tuple(gens)

    @classmethod
    def from_strings(cls, texts: Iterable[str], ambient_n: int) -> Ideal:
        return cls(ambient_n, tuple(parse_poly(t, ambient_n, "x") for t in texts))

    def with_truncation(self, bound: int) -> Ideal:
        """Добавляет все мономы степени bound к образующим."""
        monos = [Poly(self.ambient_n, "x", {m: 1}) for m in monomials_of_degree(self.ambient_n, bound)]
        present = set(self.generators)
        extra = tuple(m for m in monos if m not in present)
        return Ideal(self.ambient_n, self.generators + extra, bound)

    def groebner(self, order: TermOrder) -> GrobnerBasis:
        from tools.groebner import reduced_groebner

        with self._lock:
            cached = self._gb_cache.get(order)
        if cached is not None:
            return cached
        gb = reduced_groebner(list(self.generators), order, truncation=self.truncation)
        with self._lock:
            self._gb_cache.setdefault(order, gb)
        return gb

    def __str__(self) -> str:
        body = ", ".join(render_poly(g) for g in self.generators)
        if self.truncation is not None:
            body += f" + S_+^{self.truncation}"
        return f"({body})"


@dataclass
class GradedSpace:
    """
    Конечномерное пространство двойственных многочленов: basis хранит элементы,
    components[q] хранит независимые старшие формы степени q (RREF-канонично).
    """

    ambient_n: int
    basis: list[Poly]
    components: dict[int, list[Poly]]

    def dims(self) -> HilbertFunction:
        top = max(self.components, default=-1)
        return HilbertFunction(tuple(len(self.components.get(q, [])) for q in range(top + 1)))

    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, G: Poly) -> bool:
        echelon = EchelonBasis(priority=_monomial_priority)
        for p in self.basis:
            echelon.add(dict(p.terms))
        return echelon.contains(dict(G.terms))


def _graded_from_echelon(echelon: EchelonBasis, ambient_n: int) -> GradedSpace:
    basis: list[Poly] = []
    components: dict[int, list[Poly]] = {}
    for pivot, row in sorted(echelon.rows.items(), key=lambda kv: _monomial_priority(kv[0]), reverse=True):
        poly = Poly(ambient_n, "y", row)
        basis.append(poly)
        q = sum(pivot)
        form = poly.homogeneous_component(q)
        components.setdefault(q, []).append(form)
    return GradedSpace(ambient_n, basis, components)


# --- сжатие ---

def contract(g: Poly, F: Poly) -> Poly:
    if g.ambient_n != F.ambient_n:
        raise AmbientMismatchError(f"contraction of S[{g.ambient_n}] on P[{F.ambient_n}]")
    if g.side != "x" or F.side != "y":
        raise AmbientMismatchError("contraction expects an x-side operator and a y-side polynomial")
    out: dict[Monomial, Rat] = {}
    for alpha, a in g.terms.items():
        for beta, b in F.terms.items():
            rest = monomial_div(beta, alpha)
            if rest is None:
                continue
            c = out.get(rest, 0) + a * b * _falling(beta, alpha)
            if c:
                out[rest] = c
            else:
                out.pop(rest, None)
    return Poly(F.ambient_n, "y", out)


def pairing(g: Poly, G: Poly) -> Rat:
    """Свободный член g o G."""
    total = QQ(0)
    for alpha, a in g.terms.items():
        b = G.terms.get(alpha)
        if b:
            total += a * b * math.prod(math.factorial(e) for e in alpha)
    return total


def _contract_monomial(alpha: Monomial, F: Poly) -> dict[Monomial, Rat]:
    out: dict[Monomial, Rat] = {}
    for beta, b in F.terms.items():
        rest = monomial_div(beta, alpha)
        if rest is not None:
            out[rest] = out.get(rest, 0) + b * _falling(beta, alpha)
    return {m: c for m, c in out.items() if c}


def contraction_matrix(
    polys: Sequence[Poly], operators: Sequence[Monomial], targets: Sequence[Monomial] | None = None
) -> QMatrix:
    """Столбец j: координаты x^operators[j] o F для всех F из polys (по мономам targets)."""
    if not polys:
        return QMatrix.zeros(0, len(operators))
    n = polys[0].ambient_n
    if targets is None:
        targets = monomials_up_to(n, max(p.degree() for p in polys))
    index = {m: i for i, m in enumerate(targets)}
    rows = [[QQ(0)] * len(operators) for _ in range(len(targets) * len(polys))]
    for k, F in enumerate(polys):
        offset = k * len(targets)
        for j, alpha in enumerate(operators):
            for mono, coef in _contract_monomial(alpha, F).items():
                rows[offset + index[mono]][j] = coef
    return QMatrix.from_rows(rows, len(operators))


# --- аннуляторы ---

@traced("annihilator_of_space")
def annihilator_of_space(polys: Sequence[Poly], ambient_n: int | None = None) -> Ideal:
    """Ann конечного набора двойственных многочленов, усечение на степени max deg + 1."""
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        raise ParameterError("annihilator of the zero space is the whole ring")
    n = polys[0].ambient_n if ambient_n is None else ambient_n
    s = max(p.degree() for p in polys)
    if s == 0:
        gens = [Poly.variable(i, n, "x") for i in range(1, n + 1)]
        return Ideal(n, tuple(gens), 1)
    operators = monomials_up_to(n, s + 1, start=1)
    matrix = contraction_matrix(polys, operators, monomials_up_to(n, s))

    kernel = EchelonBasis(priority=_monomial_priority)
    for vec in kernel_basis(matrix):
        kernel.add({operators[j]: c for j, c in enumerate(vec) if c})

    by_degree: dict[int, list[dict[Monomial, Rat]]] = {}
    for pivot, row in kernel.rows.items():
        by_degree.setdefault(sum(pivot), []).append(row)

    unit_shifts = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    ideal_part = EchelonBasis(priority=_monomial_priority)
    generators: list[Poly] = []
    for d in range(1, s + 2):
        previous = [dict(row) for row in ideal_part.rows.values()]
        for row in previous:
            for shift in unit_shifts:
                ideal_part.add({monomial_mul(m, shift): c for m, c in row.items()})
        for row in sorted(by_degree.get(d, []), key=lambda r: _monomial_priority(max(r, key=_monomial_priority))):
            reduced = ideal_part.reduce(row)
            if not reduced:
                continue
            lead = reduced[max(reduced, key=_monomial_priority)]
            generators.append(Poly(n, "x", {m: c / lead for m, c in reduced.items()}))
            ideal_part.add(reduced)
    return Ideal(n, tuple(generators), s + 1)


@traced("annihilator")
def annihilator(F: DualGenerator) -> Ideal:
    if F.component(0) or F.component(1):
        raise NormalizationError(
            "F has nonzero components of degree 0 or 1; apply remove_linear_part first"
        )
    return annihilator_of_space([F.F])


def perp_space(J: Ideal, degree_bound: int) -> GradedSpace:
    """J-perp в степенях <= degree_bound: ядро G -> (g_i o G) по образующим."""
    n = J.ambient_n
    duals = monomials_up_to(n, degree_bound)
    echelon = EchelonBasis(priority=_monomial_priority)
    if not J.generators:
        for m in duals:
            echelon.add({m: QQ(1)})
        return _graded_from_echelon(echelon, n)
    index = {m: i for i, m in enumerate(duals)}
    rows: list[list[Rat]] = []
    for g in J.generators:
        block = [[QQ(0)] * len(duals) for _ in duals]
        for j, beta in enumerate(duals):
            image = contract(g, Poly(n, "y", {beta: 1}))
            for mono, coef in image.terms.items():
                block[index[mono]][j] = coef
        rows.extend(r for r in block if any(r))
    for vec in kernel_basis(QMatrix.from_rows(rows, len(duals))):
        echelon.add({duals[j]: c for j, c in enumerate(vec) if c})
    return _graded_from_echelon(echelon, n)


def _derivative_echelon(F: DualGenerator) -> EchelonBasis:
    echelon = EchelonBasis(priority=_monomial_priority)
    for alpha in monomials_up_to(F.ambient_n, F.socle_degree):
        image = _contract_monomial(alpha, F.F)
        if image:
            echelon.add(image)
    return echelon


def tdf(F: DualGenerator) -> GradedSpace:
    return _graded_from_echelon(_derivative_echelon(F), F.ambient_n)


def hilbert_from_tdf(F: DualGenerator) -> HilbertFunction:
    return tdf(F).dims()


def apolar_dim(F: DualGenerator) -> int:
    """Ранг матрицы координат g o F по всем мономам g степени <= s."""
    operators = monomials_up_to(F.ambient_n, F.socle_degree)
    return contraction_matrix([F.F], operators).rank()


def socle_and_capital_degree(F: DualGenerator) -> tuple[int, int]:
    H = hilbert_from_tdf(F)
    capital = max((i for i, v in enumerate(H.values) if v > 1), default=0)
    return F.socle_degree, capital


def g_of_A_hilbert(F: DualGenerator) -> HilbertFunction:
    """H_{G(A)} = H_{S/Ann(F_s)}."""
    return hilbert_from_tdf(DualGenerator(F.component(F.socle_degree)))


def is_two_stretched(F: DualGenerator) -> tuple[int, int] | None:
    """(n, m) при H = (1, n, m, 1, ..., 1) и s >= 3, иначе None."""
    H = hilbert_from_tdf(F)
    s = F.socle_degree
    if s < 3 or len(H) != s + 1:
        return None
    if any(H[i] != 1 for i in range(3, s + 1)):
        return None
    return H[1], H[2]


def graded_associated(J: Ideal, s: int) -> Ideal:
    """
    ldf(J): младшие формы элементов J. J должен содержать S_+^{s+1}; линейная оболочка
    J в усечении строится замыканием образующих относительно умножения на x_i.
    """
    n = J.ambient_n
    echelon = EchelonBasis(priority=_lowest_first)
    unit_shifts = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    queue = [g.truncate(s + 1) for g in J.generators]
    while queue:
        g = queue.pop()
        reduced = echelon.reduce(dict(g.terms))
        if not reduced:
            continue
        echelon.add(reduced)
        poly = Poly(n, "x", reduced)
        for shift in unit_shifts:
            moved = {monomial_mul(m, shift): c for m, c in poly.terms.items() if sum(m) < s}
            if moved:
                queue.append(Poly(n, "x", moved))
    forms: list[Poly] = []
    for pivot, row in echelon.rows.items():
        forms.append(Poly(n, "x", row).homogeneous_component(sum(pivot)))
    forms.extend(Poly(n, "x", {m: 1}) for m in monomials_of_degree(n, s + 1))
    return Ideal(n, tuple(forms), s + 1)


@dataclass(frozen=True)
class QDecomposition:
    """Таблица H_{Q(a)} для 2-растянутой алгебры и инварианты f_h."""

    n: int
    m: int
    s: int
    rows: tuple[tuple[int, HilbertFunction], ...]
    f_values: dict[int, int]

    def sums(self) -> HilbertFunction:
        width = self.s + 1
        return HilbertFunction(tuple(sum(row[d] for _, row in self.rows) for d in range(width)))


def q_decomposition_2stretched(n: int, m: int, s: int) -> QDecomposition:
    if s < 3 or not n >= m >= 1:
        raise ParameterError(f"need s >= 3 and n >= m >= 1, got n={n}, m={m}, s={s}")
    width = s + 1
    table: dict[int, list[int]] = {0: [1] * width}
    middle = [0] * width
    middle[1] = middle[2] = m - 1
    low = [0] * width
    low[1] = n - m
    for index, row in ((s - 3, middle), (s - 2, low)):
        current = table.setdefault(index, [0] * width)
        for d in range(width):
            current[d] += row[d]
    rows = tuple(
        (index, HilbertFunction(tuple(vals))) for index, vals in sorted(table.items()) if any(vals)
    )
    f_values = {2: n, 3: m}
    f_values.update({h: 1 for h in range(4, s + 1)})
    return QDecomposition(n, m, s, rows, f_values)
