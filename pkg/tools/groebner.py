#!/usr/bin/env python3
"""
Мономиальные порядки (degrevlex, lex и блочный порядок product), приведённые
базисы Грёбнера, нормальные формы, функции Гильберта по стандартным мономам,
квадрат идеала и равенство идеалов.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from sympy import QQ
from sympy.polys.groebnertools import groebner
from sympy.polys.monomials import monomial_divides, monomial_mul
from sympy.polys.orderings import ProductOrder, grevlex, lex
from sympy.polys.rings import PolyElement, PolyRing

from tools.apolarity import HilbertFunction, Ideal
from tools.errors import AmbientMismatchError, NotArtinianError, ParameterError
from tools.linalg_exact import EchelonBasis
from tools.poly_core import Monomial, Poly, Rat, monomials_of_degree
from tools.trace import log_event, traced

ORDER_KINDS = ("degrevlex", "lex", "product")

Terms = dict[Monomial, Rat]


@dataclass(frozen=True)
class TermOrder:
    """
    kind + приоритет переменных: priority перечисляет индексы переменных (с нуля)
    от старшей к младшей; None означает x_n > ... > x_1.
    product: degrevlex на всех переменных, кроме младшей, затем lex на младшей.
    """

    kind: str = "degrevlex"
    priority: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ORDER_KINDS:
            raise ParameterError(f"unknown term order {self.kind!r}; expected one of {ORDER_KINDS}")

    @classmethod
    def named(cls, name: str) -> TermOrder:
        return cls(name)

    def key(self, n: int) -> Callable[[Monomial], tuple]:
        return _order_key(self.kind, self.priority, n)

    def __str__(self) -> str:
        return self.kind


DEGREVLEX = TermOrder("degrevlex")
LEX = TermOrder("lex")
PRODUCT = TermOrder("product")


_PRODUCT = ProductOrder((grevlex, lambda m: m[:-1]), (lex, lambda m: m[-1:]))


def _permutation(priority: tuple[int, ...] | None, n: int) -> tuple[int, ...]:
    perm = tuple(range(n - 1, -1, -1)) if priority is None else priority
    if sorted(perm) != list(range(n)):
        raise ParameterError(f"priority {perm} is not a permutation of {n} variables")
    return perm


@lru_cache(maxsize=None)
def _order_key(kind: str, priority: tuple[int, ...] | None, n: int) -> Callable[[Monomial], tuple]:
    perm = _permutation(priority, n)

    def permuted(mono: Monomial) -> Monomial:
        return tuple(mono[i] for i in perm)

    if kind == "lex":
        return lambda mono: lex(permuted(mono))
    if kind == "degrevlex":
        return lambda mono: grevlex(permuted(mono))
    return lambda mono: _PRODUCT(permuted(mono))


def mono_compare(a: Monomial, b: Monomial, order: TermOrder) -> int:
    if len(a) != len(b):
        raise AmbientMismatchError(f"monomials of different length: {a} vs {b}")
    key = order.key(len(a))
    ka, kb = key(a), key(b)
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True)
class GrobnerBasis:
    order: TermOrder
    ambient_n: int
    polys: tuple[Poly, ...]

    def leading_monomials(self) -> list[Monomial]:
        key = self.order.key(self.ambient_n)
        return [max(g.terms, key=key) for g in self.polys]

    def reduce(self, f: Poly) -> Poly:
        return normal_form(f, list(self.polys), self.order)

    def __len__(self) -> int:
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)


# --- кольца sympy ---

@lru_cache(maxsize=None)
def _ring(kind: str, priority: tuple[int, ...] | None, n: int) -> tuple[PolyRing, tuple[int, ...]]:
    """Кольцо sympy с образующими от старшей к младшей; порядок мономов совпадает с TermOrder.key."""
    perm = _permutation(priority, n)
    if kind == "lex":
        order = lex
    elif kind == "degrevlex":
        order = grevlex
    else:
        order = _PRODUCT
    return PolyRing([f"x{i + 1}" for i in perm], QQ, order), perm


def _to_ring(terms: Terms, ring: PolyRing, perm: tuple[int, ...]) -> PolyElement:
    return ring.from_dict({tuple(m[i] for i in perm): c for m, c in terms.items()})


def _from_ring(element: PolyElement, perm: tuple[int, ...]) -> Terms:
    out: Terms = {}
    for mono, c in element.items():
        original = [0] * len(perm)
        for pos, i in enumerate(perm):
            original[i] = mono[pos]
        out[tuple(original)] = c
    return out


def normal_form(f: Poly, G: Sequence[Poly] | GrobnerBasis, order: TermOrder) -> Poly:
    """Остаток полного деления f на G в порядке order."""
    polys = list(G.polys) if isinstance(G, GrobnerBasis) else list(G)
    divisors = [g for g in polys if not g.is_zero()]
    if any(g.ambient_n != f.ambient_n for g in divisors):
        raise AmbientMismatchError("normal form across different ambient rings")
    if not divisors or f.is_zero():
        return f
    ring, perm = _ring(order.kind, order.priority, f.ambient_n)
    remainder = _to_ring(f.terms, ring, perm).rem([_to_ring(g.terms, ring, perm) for g in divisors])
    return Poly(f.ambient_n, f.side, _from_ring(remainder, perm))


# --- усечённый случай ---

def _truncated_basis(polys: list[Terms], key: Callable, n: int, bound: int) -> list[Terms]:
    """
    Приведённый базис идеала, содержащего S_+^bound: замыкание образующих в S/S_+^bound
    относительно умножения на переменные в эшелон-базисе с ведущим мономом как pivot.
    """
    echelon = EchelonBasis(priority=key)
    shifts = [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
    queue = deque({m: c for m, c in p.items() if sum(m) < bound} for p in polys)
    while queue:
        row = echelon.add(queue.popleft())
        if row is None:
            continue
        for shift in shifts:
            moved = {monomial_mul(m, shift): c for m, c in row.items() if sum(m) < bound - 1}
            if moved:
                queue.append(moved)

    pivots = set(echelon.rows)

    def minimal(mono: Monomial) -> bool:
        for i, e in enumerate(mono):
            if e and tuple(v - (k == i) for k, v in enumerate(mono)) in pivots:
                return False
        return True

    basis = [dict(row) for pivot, row in echelon.rows.items() if minimal(pivot)]
    basis.extend({m: QQ(1)} for m in monomials_of_degree(n, bound) if minimal(m))
    return basis


@traced("reduced_groebner")
def reduced_groebner(gens: Sequence[Poly], order: TermOrder = DEGREVLEX, truncation: int | None = None) -> GrobnerBasis:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ParameterError("reduced_groebner needs at least one nonzero generator")
    n = gens[0].ambient_n
    if any(g.ambient_n != n for g in gens):
        raise AmbientMismatchError("generators live in different rings")
    key = order.key(n)
    terms = [dict(g.terms) for g in gens]
    if truncation is not None:
        polys = _truncated_basis(terms, key, n, truncation)
    else:
        ring, perm = _ring(order.kind, order.priority, n)
        basis = groebner([_to_ring(t, ring, perm) for t in terms], ring)
        polys = [_from_ring(g, perm) for g in basis]
        log_event("groebner", f"{len(polys)} elements in the reduced basis ({order})")
    polys.sort(key=lambda p: key(max(p, key=key)), reverse=True)
    return GrobnerBasis(order, n, tuple(Poly(n, "x", p) for p in polys))


def initial_ideal(G: GrobnerBasis) -> list[Monomial]:
    """Минимальные старшие мономы."""
    lms = G.leading_monomials()
    return sorted(
        {m for m in lms if not any(o != m and monomial_divides(o, m) for o in lms)},
        key=G.order.key(G.ambient_n),
        reverse=True,
    )


def standard_monomials(G: GrobnerBasis) -> list[Monomial]:
    n = G.ambient_n
    lms = G.leading_monomials()
    for i in range(n):
        if not any(m[i] > 0 and sum(m) == m[i] for m in lms):
            raise NotArtinianError(f"no pure power of x{i + 1} among the leading monomials")
    start = (0,) * n
    if any(monomial_divides(m, start) for m in lms):
        return []
    seen = {start}
    queue = deque([start])
    while queue:
        mono = queue.popleft()
        for i in range(n):
            nxt = tuple(e + (k == i) for k, e in enumerate(mono))
            if nxt in seen or any(monomial_divides(m, nxt) for m in lms):
                continue
            seen.add(nxt)
            queue.append(nxt)
    return sorted(seen, key=lambda m: (sum(m), tuple(-e for e in m)))


def quotient_hilbert(G: GrobnerBasis) -> HilbertFunction:
    counts: dict[int, int] = {}
    for mono in standard_monomials(G):
        counts[sum(mono)] = counts.get(sum(mono), 0) + 1
    top = max(counts, default=-1)
    return HilbertFunction(tuple(counts.get(d, 0) for d in range(top + 1)))


def ideal_contains(I: Ideal, f: Poly, order: TermOrder = DEGREVLEX) -> bool:
    return normal_form(f, I.groebner(order), order).is_zero()


def ideal_square(I: Ideal) -> Ideal:
    gens = I.generators
    products = [gens[i].mul(gens[j]) for i in range(len(gens)) for j in range(i, len(gens))]
    truncation = None if I.truncation is None else 2 * I.truncation
    return Ideal(I.ambient_n, tuple(products), truncation)


def ideal_equal(I1: Ideal, I2: Ideal, order: TermOrder = DEGREVLEX) -> bool:
    if I1.ambient_n != I2.ambient_n:
        raise AmbientMismatchError("ideals live in different rings")
    gb1 = I1.groebner(order)
    gb2 = I2.groebner(order)
    return all(normal_form(g, gb2, order).is_zero() for g in gb1) and all(
        normal_form(g, gb1, order).is_zero() for g in gb2
    )
