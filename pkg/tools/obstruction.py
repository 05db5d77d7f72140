#!/usr/bin/env python3
"""
Препятствия для алгебр с H = (1,4,4,1,1): канонические кубики, F^{H,b} = y1^4 + y1*Q_b + H,
множество B_H, размерность касательного пространства N = dim S/J^2 - dim S/J,
замкнутые предикаты препятствованности, опубликованные списки образующих
и воспроизведение на случайных точках.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import pandas as pd
from sympy import QQ
from tqdm import tqdm

from tools.apolarity import DualGenerator, HilbertFunction, Ideal, annihilator, contract, hilbert_from_tdf
from tools.errors import InvariantViolation, ParameterError
from tools.groebner import DEGREVLEX, PRODUCT, ideal_equal, ideal_square, quotient_hilbert
from tools.linalg_exact import EchelonBasis, QMatrix
from tools.poly_core import Poly, Rat, format_rational, monomials_of_degree, parse_poly, render_poly, substitute_linear, to_rat
from tools.settings import load_settings
from tools.trace import log_event, traced

N_VARS = 4
SOCLE = 4
ALGEBRA_LENGTH = 11
UNOBSTRUCTED_DIMENSION = 44
OBSTRUCTED_DIMENSION = 49
SAMPLE_RANGE = 5
MAX_SAMPLING_ATTEMPTS = 500

CUBICS: dict[str, str] = {
    "fermat_node": "y2^3 + y3^3 + y2*y3*y4",
    "line_pair": "y2^3 + y2*y3*y4",
    "triangle": "y2*y3*y4",
    "cusp_a": "y2^3 + y3^2*y4",
    "cube_node": "y2^2*y3 + y3^2*y4",
    "cusp_b": "y3^2*y4 - y2^2*y4",
    "cusp_c": "y3^2*y4 - y3*y4^2",
    "conic_line": "y3*y4^2",
    "triple_line": "y4^3",
}
CUBIC_NAMES = ("fermat_t", *CUBICS, "zero")


@dataclass(frozen=True)
class BVector:
    values: tuple[Rat, ...]

    def __post_init__(self) -> None:
        if len(self.values) != 6:
            raise ParameterError(f"b must have 6 coordinates, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(to_rat(v) for v in self.values))

    @classmethod
    def of(cls, *values: object) -> BVector:
        return cls(tuple(values))

    @classmethod
    def zero(cls) -> BVector:
        return cls((0,) * 6)

    def __getitem__(self, i: int) -> Rat:
        return self.values[i]

    def scaled(self, factor: object) -> BVector:
        f = to_rat(factor)
        return BVector(tuple(v * f for v in self.values))

    def to_strings(self) -> list[str]:
        return [format_rational(v) for v in self.values]

    def __str__(self) -> str:
        return "(" + ",".join(self.to_strings()) + ")"


def canonical_cubic(name: str, t: object | None = None) -> Poly:
    if name not in CUBIC_NAMES:
        raise ParameterError(f"unknown cubic {name!r}; expected one of {', '.join(CUBIC_NAMES)}")
    if (name == "fermat_t") != (t is not None):
        raise ParameterError("parameter t is required for fermat_t and only for it")
    if name == "zero":
        return Poly.zero(N_VARS, "y")
    if name == "fermat_t":
        base = parse_poly("y2^3 + y3^3 + y4^3", N_VARS)
        return base + parse_poly("y2*y3*y4", N_VARS).scale(to_rat(t))
    return parse_poly(CUBICS[name], N_VARS)


def Q_b(b: BVector) -> Poly:
    """b0 y2^2 + 2 b1 y2y3 + b2 y3^2 + 2 b3 y2y4 + 2 b4 y3y4 + b5 y4^2."""
    exps = [(0, 2, 0, 0), (0, 1, 1, 0), (0, 0, 2, 0), (0, 1, 0, 1), (0, 0, 1, 1), (0, 0, 0, 2)]
    weights = [1, 2, 1, 2, 2, 1]
    return Poly(N_VARS, "y", {e: w * v for e, w, v in zip(exps, weights, b.values)})


def M_b(b: BVector) -> QMatrix:
    return QMatrix.from_rows([[b[0], b[1], b[3]], [b[1], b[2], b[4]], [b[3], b[4], b[5]]])


def _check_H(H: Poly) -> None:
    if H.ambient_n != N_VARS or H.side != "y":
        raise ParameterError("H must be a y-side polynomial in 4 variables")
    if H and (not H.is_homogeneous() or H.degree() != 3 or 1 in H.variables()):
        raise ParameterError(f"H = {render_poly(H)} is not a cubic form in y2, y3, y4")


def build_F(H: Poly, b: BVector) -> DualGenerator:
    _check_H(H)
    y1 = Poly.variable(1, N_VARS, "y")
    return DualGenerator(y1 ** SOCLE + y1 * Q_b(b) + H)


def membership_BH(H: Poly, b: BVector) -> bool:
    """x_2, x_3, x_4 o (y1 Q_b + H) линейно независимы."""
    _check_H(H)
    G = Poly.variable(1, N_VARS, "y") * Q_b(b) + H
    echelon = EchelonBasis(priority=lambda mono: (sum(mono), mono))
    added = echelon.extend(dict(contract(Poly.variable(i, N_VARS, "x"), G).terms) for i in (2, 3, 4))
    return added == 3


# --- касательное пространство ---

@dataclass(frozen=True)
class TangentSpace:
    """hilbert_J: функция Гильберта алгебры; hilbert_J2: S/in(J^2) в порядке product."""

    hilbert_J: HilbertFunction
    hilbert_J2: HilbertFunction
    N: int

    @property
    def obstructed(self) -> bool:
        return self.hilbert_J.total() == ALGEBRA_LENGTH and self.N > UNOBSTRUCTED_DIMENSION


@traced("tangent_space")
def tangent_space(F: DualGenerator) -> TangentSpace:
    J = annihilator(F)
    hilbert_J = hilbert_from_tdf(F)
    hilbert_J2 = quotient_hilbert(ideal_square(J).groebner(PRODUCT))
    return TangentSpace(hilbert_J, hilbert_J2, hilbert_J2.total() - hilbert_J.total())


def tangent_dimension(F: DualGenerator, expected_length: int | None = ALGEBRA_LENGTH) -> int:
    space = tangent_space(F)
    if expected_length is not None and space.hilbert_J.total() != expected_length:
        raise InvariantViolation(f"dim S/J = {space.hilbert_J.total()}, expected {expected_length}")
    return space.N


# --- предсказание ---

def _zero_set(*coords: int) -> Callable[[BVector], bool]:
    return lambda b: all(b[i] == 0 for i in coords)


def _cusp_c_quadric(b: BVector) -> Rat:
    return -b[1] ** 2 + b[0] * b[2] - b[1] * b[3] - b[3] ** 2 + b[0] * b[4] + b[0] * b[5]


LOCI: dict[str, Callable[[BVector], bool]] = {
    "cusp_a": _zero_set(1, 3, 5),
    "cube_node": lambda b: b[0] == b[4] and b[3] == 0 and b[5] == 0,
    "cusp_c": lambda b: _cusp_c_quadric(b) == 0,
    "conic_line": lambda b: b[1] ** 2 == b[0] * b[2],
}
ALWAYS_OBSTRUCTED = ("zero", "triple_line")
NEVER_OBSTRUCTED = ("fermat_node", "line_pair", "triangle", "cusp_b")


def predicted_obstructed(name: str, b: BVector, t: object | None = None) -> bool:
    H = canonical_cubic(name, t)
    if not membership_BH(H, b):
        raise ParameterError(f"b = {b} lies outside B_H for {name}")
    if name in ALWAYS_OBSTRUCTED:
        return True
    if name in NEVER_OBSTRUCTED:
        return False
    if name == "fermat_t":
        t = to_rat(t)
        if t == 0:
            return _zero_set(1, 3, 4)(b)
        if t ** 3 == 216:
            if any(b.values):
                raise ParameterError("for t = 6 only b = 0 has a closed-form answer")
            return True
        return False
    return LOCI[name](b)


# --- опубликованные образующие ---

def _x() -> list[Poly]:
    return [Poly.zero(N_VARS, "x")] + [Poly.variable(i, N_VARS, "x") for i in range(1, N_VARS + 1)]


def relation_monomials() -> list[Poly]:
    """x^b, |b| = 4, кроме x1^4, и все мономы степени 5."""
    pure = (SOCLE, 0, 0, 0)
    monos = [m for m in monomials_of_degree(N_VARS, SOCLE) if m != pure]
    monos += monomials_of_degree(N_VARS, SOCLE + 1)
    return [Poly(N_VARS, "x", {m: 1}) for m in monos]


def _quadric_cone_list(b: BVector, t: Rat | None) -> list[Poly]:
    _, x1, x2, x3, x4 = _x()
    return [
        x4 ** 2 - x2 ** 2, x3 ** 2 - x2 ** 2, x4 * x3, x4 * x2, x3 * x2,
        12 * x4 ** 2 - x1 ** 3, x2 * x1 ** 2, x3 * x1 ** 2, x4 * x1 ** 2,
    ]


def _fermat_t_list(b: BVector, t: Rat | None) -> list[Poly]:
    _, x1, x2, x3, x4 = _x()
    return [
        x1 * x2, x1 * x3, x1 * x4,
        x2 ** 2 * t - 6 * x3 * x4, x3 ** 2 * t - 6 * x2 * x4, x4 ** 2 * t - 6 * x2 * x3,
        x1 ** 2 * x2, x1 * x2 ** 2, x1 ** 2 * x3, x1 * x2 * x3, x2 ** 2 * x3, x1 * x3 ** 2, x2 * x3 ** 2,
        x1 ** 2 * x4, x1 * x2 * x4, x2 ** 2 * x4, x1 * x3 * x4, x3 ** 2 * x4, x1 * x4 ** 2, x2 * x4 ** 2,
        x3 * x4 ** 2,
        4 * x2 ** 3 - x1 ** 4, 4 * x3 ** 3 - x1 ** 4, 24 * x2 * x3 * x4 - x1 ** 4 * t, 4 * x4 ** 3 - x1 ** 4,
    ]


def _fermat_list(b: BVector, t: Rat | None) -> list[Poly]:
    _, x1, x2, x3, x4 = _x()
    b0, b1, b2, b3, b4, b5 = b.values
    c = x1 ** 3
    q = x1 ** 4
    p1, p2, p3 = x2 ** 2 - c * (b0 / 12), x3 ** 2 - c * (b2 / 12), x4 ** 2 - c * (b5 / 12)
    return [
        3 * x2 * x1 - p1 * b0 - p2 * b1 - p3 * b3,
        3 * x3 * x1 - p1 * b1 - p2 * b2 - p3 * b4,
        12 * x3 * x2 - c * b1,
        3 * x4 * x1 - p1 * b3 - p2 * b4 - p3 * b5,
        12 * x4 * x2 - c * b3,
        12 * x4 * x3 - c * b4,
        x2 * x1 ** 2, 12 * x2 ** 2 * x1 - q * b0, 4 * x2 ** 3 - q,
        x3 * x1 ** 2, 12 * x3 * x2 * x1 - q * b1, x3 * x2 ** 2, 12 * x3 ** 2 * x1 - q * b2, x3 ** 2 * x2,
        4 * x3 ** 3 - q,
        x4 * x1 ** 2, 12 * x4 * x2 * x1 - q * b3, x4 * x2 ** 2, 12 * x4 * x3 * x1 - q * b4, x4 * x3 * x2,
        x4 * x3 ** 2, 12 * x4 ** 2 * x1 - q * b5, x4 ** 2 * x2, x4 ** 2 * x3, 4 * x4 ** 3 - q,
    ]


def _cusp_a_list(b: BVector, t: Rat | None) -> list[Poly]:
    _, x1, x2, x3, x4 = _x()
    b0, b1, b2, b3, b4, b5 = b.values
    c = x1 ** 3
    q = x1 ** 4
    p1, p2, p3 = x2 ** 2 - c * (b0 / 12), x4 * x3 - c * (b4 / 12), x3 ** 2 - c * (b2 / 12)
    return [
        12 * x4 ** 2 - c * b5, 12 * x4 * x2 - c * b3, 12 * x3 * x2 - c * b1,
        3 * x2 * x1 - p1 * b0 - p2 * (3 * b1) - p3 * (3 * b3),
        3 * x3 * x1 - p1 * b1 - p2 * (3 * b2) - p3 * (3 * b4),
        3 * x4 * x1 - p1 * b3 - p2 * (3 * b4) - p3 * (3 * b5),
        x2 * x1 ** 2, 12 * x2 ** 2 * x1 - q * b0, 4 * x2 ** 3 - q,
        x3 * x1 ** 2, 12 * x3 * x2 * x1 - q * b1, x3 * x2 ** 2, 12 * x3 ** 2 * x1 - q * b2, x3 ** 2 * x2, x3 ** 3,
        x4 * x1 ** 2, 12 * x4 * x2 * x1 - q * b3, x4 * x2 ** 2, 12 * x4 * x3 * x1 - q * b4, x4 * x3 * x2,
        12 * x4 * x3 ** 2 - q, 12 * x4 ** 2 * x1 - q * b5, x4 ** 2 * x2, x4 ** 2 * x3, x4 ** 3,
    ]


def _cube_node_list(b: BVector, t: Rat | None) -> list[Poly]:
    _, x1, x2, x3, x4 = _x()
    b0, b1, b2, b3, b4, b5 = b.values
    c = x1 ** 3
    q = x1 ** 4
    p1, p2, p3 = x3 * x2 - c * (b1 / 12), x4 * x3 - c * (b4 / 12), x3 ** 2 - c * (b2 / 12)
    return [
        12 * x4 ** 2 - c * b5, 12 * x4 * x2 - c * b3,
        x2 * x1 - p1 * b0 - p2 * b1 - p3 * b3,
        x2 ** 2 - c * (b0 / 12) - p2,
        x3 * x1 - p1 * b1 - p2 * b2 - p3 * b4,
        x4 * x1 - p1 * b3 - p2 * b4 - p3 * b5,
        x2 * x1 ** 2, 12 * x2 ** 2 * x1 - q * b0, x2 ** 3,
        x3 * x1 ** 2, 12 * x3 * x2 * x1 - q * b1, 12 * x3 * x2 ** 2 - q, 12 * x3 ** 2 * x1 - q * b2,
        x3 ** 2 * x2, x3 ** 3,
        x4 * x1 ** 2, 12 * x4 * x2 * x1 - q * b3, x4 * x2 ** 2, 12 * x4 * x3 * x1 - q * b4, x4 * x3 * x2,
        12 * x4 * x3 ** 2 - q, 12 * x4 ** 2 * x1 - q * b5, x4 ** 2 * x2, x4 ** 2 * x3, x4 ** 3,
    ]


def _mixed_tail(x1: Poly, x2: Poly, x3: Poly, x4: Poly, b: BVector) -> list[Poly]:
    q = x1 ** 4
    return [
        x4 ** 2 * x2, 12 * x4 ** 2 * x1 - q * b[5], x4 * x3 * x2, 12 * x4 * x3 * x1 - q * b[4],
        x4 * x2 ** 2, 12 * x4 * x2 * x1 - q * b[3], x3 ** 3, x3 ** 2 * x2, 12 * x3 ** 2 * x1 - q * b[2],
        x3 * x2 ** 2, 12 * x3 * x2 * x1 - q * b[1], x2 ** 3, 12 * x2 ** 2 * x1 - q * b[0],
        x4 * x1 ** 2, x3 * x1 ** 2, x2 * x1 ** 2,
    ]


def _cusp_c_list(b: BVector, t: Rat | None) -> list[Poly]:
    _, x1, x2, x3, x4 = _x()
    b0, b1, b2, b3, b4, b5 = b.values
    c = x1 ** 3
    u, v = x4 ** 2 - c * (b5 / 12), x3 ** 2 - c * (b2 / 12)
    p1 = x2 * x1 + u * b1 - v * b3
    p2 = x3 * x1 + u * b2 - v * b4
    p3 = x4 * x1 + u * b4 - v * b5
    return [
        12 * x2 ** 2 - c * b0, 12 * x3 * x2 - c * b1, 12 * x4 * x2 - c * b3,
        12 * x3 ** 2 + 12 * x4 * x3 + 12 * x4 ** 2 - c * (b2 + b4 + b5),
        p1 * b1 - p2 * b0, p1 * b3 - p3 * b0, p2 * b3 - p3 * b1,
        x4 ** 3, 12 * x4 ** 2 * x3 + x1 ** 4, 12 * x4 * x3 ** 2 - x1 ** 4,
        *_mixed_tail(x1, x2, x3, x4, b),
    ]


def _conic_line_list(b: BVector, t: Rat | None) -> list[Poly]:
    _, x1, x2, x3, x4 = _x()
    b0, b1, b2, b3, b4, b5 = b.values
    c = x1 ** 3
    u, v = x4 ** 2 - c * (b5 / 12), x4 * x3 - c * (b4 / 12)
    p1 = x2 * x1 - u * b1 - v * b3
    p2 = x3 * x1 - u * b2 - v * b4
    p3 = x4 * x1 - u * b4 - v * b5
    return [
        12 * x2 ** 2 - c * b0, 12 * x3 * x2 - c * b1, 12 * x4 * x2 - c * b3, 12 * x3 ** 2 - c * b2,
        p1 * b1 - p2 * b0, p1 * b3 - p3 * b0, p2 * b3 - p3 * b1,
        x4 ** 3, 12 * x4 ** 2 * x3 - x1 ** 4, x4 * x3 ** 2,
        *_mixed_tail(x1, x2, x3, x4, b),
    ]


def _triple_line_list(b: BVector, t: Rat | None) -> list[Poly]:
    _, x1, x2, x3, x4 = _x()
    b0, b1, b2, b3, b4, b5 = b.values
    c = x1 ** 3
    q = x1 ** 4
    b6 = -M_b(b).determinant()
    return [
        12 * x2 ** 2 - c * b0, 12 * x2 * x3 - c * b1, 12 * x3 ** 2 - c * b2,
        12 * x4 * x2 - c * b3, 12 * x4 * x3 - c * b4,
        (x4 ** 2 - c * (b5 / 12)) * b6
        - x4 * x1 * (3 * (b1 ** 2 - b0 * b2))
        + x3 * x1 * (3 * (b1 * b3 - b0 * b4))
        - x2 * x1 * (3 * (b2 * b3 - b1 * b4)),
        4 * x4 ** 3 - q, x4 ** 2 * x3, x4 ** 2 * x2, 12 * x4 ** 2 * x1 - q * b5,
        x4 * x3 ** 2, x4 * x3 * x2, 12 * x4 * x3 * x1 - q * b4, x4 * x2 ** 2, 12 * x4 * x2 * x1 - q * b3,
        x4 * x1 ** 2, x3 ** 3, x3 ** 2 * x2, 12 * x3 ** 2 * x1 - q * b2, x3 * x2 ** 2,
        12 * x3 * x2 * x1 - q * b1, x3 * x1 ** 2, x2 ** 3, 12 * x2 ** 2 * x1 - q * b0, x2 * x1 ** 2,
    ]


@dataclass(frozen=True)
class PublishedList:
    cubic: str
    build: Callable[[BVector, Rat | None], list[Poly]]
    fixed_b: BVector | None = None


PUBLISHED: dict[str, PublishedList] = {
    "zero": PublishedList("zero", _quadric_cone_list, BVector.of(1, 0, 1, 0, 0, 1)),
    "fermat_t": PublishedList("fermat_t", _fermat_t_list, BVector.zero()),
    "fermat": PublishedList("fermat_t", _fermat_list),
    "cusp_a": PublishedList("cusp_a", _cusp_a_list),
    "cube_node": PublishedList("cube_node", _cube_node_list),
    "cusp_c": PublishedList("cusp_c", _cusp_c_list),
    "conic_line": PublishedList("conic_line", _conic_line_list),
    "triple_line": PublishedList("triple_line", _triple_line_list),
}


def _published_parameters(
    case: str, b: BVector | None, t: object | None
) -> tuple[PublishedList, BVector, Rat | None, Poly]:
    entry = PUBLISHED.get(case)
    if entry is None:
        raise ParameterError(f"no published list for {case!r}; expected one of {', '.join(PUBLISHED)}")
    if entry.fixed_b is not None:
        b = entry.fixed_b
    if b is None:
        raise ParameterError(f"case {case} needs b")
    if case == "fermat":
        t = QQ(0)
    elif case == "fermat_t":
        if t is None:
            raise ParameterError("case fermat_t needs t")
        t = to_rat(t)
    else:
        t = None
    H = canonical_cubic(entry.cubic, t)
    if not membership_BH(H, b):
        raise ParameterError(f"b = {b} lies outside B_H for {case}")
    return entry, b, t, H


def published_generators(case: str, b: BVector | None = None, t: object | None = None) -> Ideal:
    """Список образующих вместе с мономами степеней 4 и 5 (кроме x1^4); усечение 5."""
    entry, b, t, _ = _published_parameters(case, b, t)
    gens = entry.build(b, t) + relation_monomials()
    return Ideal(N_VARS, tuple(gens), SOCLE + 1)


@traced("verify_published_generators")
def verify_published_generators(case: str, b: BVector | None = None, t: object | None = None) -> bool:
    entry, b, t, H = _published_parameters(case, b, t)
    listed = Ideal(N_VARS, tuple(entry.build(b, t) + relation_monomials()), SOCLE + 1)
    return ideal_equal(listed, annihilator(build_F(H, b)), DEGREVLEX)


# --- масштабирование ---

def rescale_F(F: DualGenerator, t: object) -> DualGenerator:
    """y1 -> t^3 y1, y_j -> t^4 y_j."""
    t = to_rat(t)
    if t == 0:
        raise ParameterError("rescaling needs t != 0")
    diag = QMatrix.from_rows(
        [[t ** 3 if (i == j == 0) else (t ** 4 if i == j else 0) for j in range(N_VARS)] for i in range(N_VARS)]
    )
    return DualGenerator(substitute_linear(F.F, diag))


def rescaled_b(b: BVector, t: object) -> BVector:
    """rescale_F(F^{H,b}, t) = t^12 F^{H, b/t}."""
    return b.scaled(1 / to_rat(t))


# --- воспроизведение ---

@dataclass(frozen=True)
class Case:
    name: str
    cubic: str
    t: Rat | None = None
    sample_t: bool = False
    fixed_b: BVector | None = None


CASES: dict[str, Case] = {
    "zero": Case("zero", "zero"),
    "fermat": Case("fermat", "fermat_t", QQ(0)),
    "fermat_t": Case("fermat_t", "fermat_t", sample_t=True),
    "fermat_t1": Case("fermat_t1", "fermat_t", QQ(1)),
    "fermat_t6": Case("fermat_t6", "fermat_t", QQ(6), fixed_b=BVector.zero()),
    **{name: Case(name, name) for name in CUBICS},
}


def _draw(rng: np.random.Generator) -> BVector:
    return BVector(tuple(int(v) for v in rng.integers(-SAMPLE_RANGE, SAMPLE_RANGE + 1, size=6)))


def _draw_t(rng: np.random.Generator) -> Rat:
    while True:
        t = int(rng.integers(-SAMPLE_RANGE, SAMPLE_RANGE + 1))
        if t != 0:
            return QQ(t)


def _on_locus(case: Case, b: BVector) -> BVector:
    v = list(b.values)
    name = case.name
    if name == "fermat":
        v[1] = v[3] = v[4] = QQ(0)
    elif name == "cusp_a":
        v[1] = v[3] = v[5] = QQ(0)
    elif name == "cube_node":
        v[4], v[3], v[5] = v[0], QQ(0), QQ(0)
    elif name == "cusp_c" and v[0]:
        v[2] = (v[1] ** 2 + v[1] * v[3] + v[3] ** 2 - v[0] * v[4] - v[0] * v[5]) / v[0]
    elif name == "conic_line" and v[0]:
        v[2] = v[1] ** 2 / v[0]
    return BVector(tuple(v))


@dataclass(frozen=True)
class Sample:
    b: BVector
    t: Rat | None
    on_locus: bool


def has_locus(case: Case) -> bool:
    return case.name == "fermat" or case.cubic in LOCI


def sample_parameters(case_name: str, index: int, seed: int) -> Sample:
    """Чётные индексы берутся на предсказанном множестве, нечётные вне его."""
    case = _case(case_name)
    if case.fixed_b is not None:
        return Sample(case.fixed_b, case.t, True)
    rng = np.random.default_rng([seed, index])
    want_on = index % 2 == 0 if has_locus(case) else None
    for attempt in range(MAX_SAMPLING_ATTEMPTS):
        t = _draw_t(rng) if case.sample_t else case.t
        b = _draw(rng)
        if want_on:
            b = _on_locus(case, b)
        H = canonical_cubic(case.cubic, t)
        if not membership_BH(H, b):
            continue
        predicted = predicted_obstructed(case.cubic, b, t)
        if want_on is not None and predicted != want_on:
            continue
        if attempt:
            log_event("sampling", f"{case_name}[{index}] resampled {attempt} times")
        return Sample(b, t, predicted)
    raise InvariantViolation(f"could not sample {case_name}[{index}] after {MAX_SAMPLING_ATTEMPTS} attempts")


def _case(name: str) -> Case:
    if name not in CASES:
        raise ParameterError(f"unknown case {name!r}; expected one of {', '.join(CASES)}")
    return CASES[name]


@dataclass(frozen=True)
class ObstructionReport:
    case: str
    index: int
    H: str
    b: BVector
    t: Rat | None
    in_BH: bool
    hilbert_J: HilbertFunction
    hilbert_J2: HilbertFunction
    N: int
    predicted_obstructed: bool
    computed_obstructed: bool

    @property
    def agree(self) -> bool:
        return self.predicted_obstructed == self.computed_obstructed

    def to_record(self) -> dict:
        return {
            "case": self.case,
            "index": self.index,
            "H": self.H,
            "b": self.b.to_strings(),
            "t": None if self.t is None else format_rational(self.t),
            "in_BH": self.in_BH,
            "hilbert_J": str(self.hilbert_J),
            "hilbert_J2": str(self.hilbert_J2),
            "N": self.N,
            "predicted": self.predicted_obstructed,
            "computed": self.computed_obstructed,
            "agree": self.agree,
        }


def evaluate_sample(case_name: str, index: int, seed: int) -> ObstructionReport:
    case = _case(case_name)
    sample = sample_parameters(case_name, index, seed)
    H = canonical_cubic(case.cubic, sample.t)
    space = tangent_space(build_F(H, sample.b))
    if space.hilbert_J != HilbertFunction((1, 4, 4, 1, 1)):
        raise InvariantViolation(f"{case_name}[{index}]: H(S/J) = {space.hilbert_J}")
    if space.N not in (UNOBSTRUCTED_DIMENSION, OBSTRUCTED_DIMENSION):
        log_event("obstruction", f"{case_name}[{index}]: unexpected N = {space.N} at b = {sample.b}")
    return ObstructionReport(
        case=case_name,
        index=index,
        H=render_poly(H) if H else "0",
        b=sample.b,
        t=sample.t,
        in_BH=True,
        hilbert_J=space.hilbert_J,
        hilbert_J2=space.hilbert_J2,
        N=space.N,
        predicted_obstructed=sample.on_locus,
        computed_obstructed=space.obstructed,
    )


def _evaluate_packed(args: tuple[str, int, int]) -> ObstructionReport:
    return evaluate_sample(*args)


def reproduce_case(
    case_name: str, samples: int, seed: int, workers: int | None = None, progress: bool = False
) -> list[ObstructionReport]:
    case = _case(case_name)
    if samples < 1:
        raise ParameterError("samples must be >= 1")
    if case.fixed_b is not None:
        samples = 1
    workers = load_settings().workers if workers is None else workers
    jobs = [(case_name, index, seed) for index in range(samples)]
    bar = tqdm(total=len(jobs), desc=f"Случай {case_name}", leave=False, disable=not progress)
    reports: list[ObstructionReport] = []
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            # map сохраняет порядок индексов
            for report in pool.map(_evaluate_packed, jobs):
                reports.append(report)
                bar.update(1)
    else:
        for job in jobs:
            reports.append(_evaluate_packed(job))
            bar.update(1)
    bar.close()
    disagreements = [r.index for r in reports if not r.agree]
    if disagreements:
        log_event("obstruction", f"{case_name}: predicted and computed differ at samples {disagreements}")
    return reports


def reports_frame(reports: Sequence[ObstructionReport]) -> pd.DataFrame:
    frame = pd.DataFrame([r.to_record() for r in reports])
    if not frame.empty:
        frame["b"] = frame["b"].map(lambda vals: "(" + ",".join(vals) + ")")
    return frame


def format_table(reports: Sequence[ObstructionReport]) -> str:
    frame = reports_frame(reports)
    return "(пусто)" if frame.empty else frame.to_string(index=False)
