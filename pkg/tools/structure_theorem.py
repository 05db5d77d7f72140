#!/usr/bin/env python3
"""
Структурная теорема для 2-растянутых горенштейновых алгебр:
удаление линейной части, нормализация экзотических слагаемых, матрицы Delta и U,
решатель для F_2, автоморфизмы S/S_+^{s+1} и сертифицированная нормализация.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sympy import QQ

from tools.apolarity import (
    DualGenerator,
    HilbertFunction,
    Ideal,
    annihilator,
    annihilator_of_space,
    contract,
    contraction_matrix,
    hilbert_from_tdf,
    pairing,
)
from tools.errors import (
    AmbientMismatchError,
    InvariantViolation,
    NormalizationError,
    ParameterError,
    SingularMatrixError,
)
from tools.groebner import DEGREVLEX, ideal_equal
from tools.linalg_exact import EchelonBasis, QMatrix, kernel_basis, solve_linear
from tools.poly_core import (
    Monomial,
    Poly,
    Rat,
    format_rational,
    monomials_of_degree,
    monomials_up_to,
    render_poly,
    substitute,
)
from tools.trace import log_event, traced

MAX_SAMPLING_ATTEMPTS = 200


def _unit(n: int, i: int) -> Monomial:
    return tuple(1 if k == i else 0 for k in range(n))


def _factorial(mono: Monomial) -> int:
    return math.prod(math.factorial(e) for e in mono)


def dual_coordinates(G: Poly, basis: Sequence[Monomial]) -> tuple[Rat, ...]:
    """Координаты G в базисе y^a/a!: <x^a, G>."""
    return tuple(G.coeff(alpha) * _factorial(alpha) for alpha in basis)


def from_dual_coordinates(coords: Sequence[Rat], basis: Sequence[Monomial], n: int) -> Poly:
    return Poly(n, "y", {alpha: c / _factorial(alpha) for alpha, c in zip(basis, coords) if c})


@dataclass(frozen=True)
class XAutomorphism:
    """
    Автоморфизм S/S_+^truncation: images[j] = phi(x_{j+1}), порядок >= 1,
    степени < truncation. Линейная часть обязана быть обратимой.
    """

    ambient_n: int
    images: tuple[Poly, ...]
    truncation: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(self.images) != self.ambient_n:
            raise AmbientMismatchError(f"{len(self.images)} images for {self.ambient_n} variables")
        trimmed = []
        for img in self.images:
            if img.side != "x" or img.ambient_n != self.ambient_n:
                raise AmbientMismatchError("automorphism images must be x-side polynomials in S[n]")
            if img.homogeneous_component(0):
                raise ParameterError("automorphism images must have order >= 1")
            trimmed.append(img.truncate(self.truncation))
        object.__setattr__(self, "images", tuple(trimmed))
        if self.linear_part().rank() < self.ambient_n:
            raise SingularMatrixError("linear part of the automorphism is singular")

    @classmethod
    def identity(cls, n: int, truncation: int) -> XAutomorphism:
        return cls(n, tuple(Poly.variable(j, n, "x") for j in range(1, n + 1)), truncation)

    @classmethod
    def from_coefficients(
        cls, n: int, coefficients: dict[tuple[Monomial, int], Rat], truncation: int
    ) -> XAutomorphism:
        """phi(x_j) = x_j + sum b_{gamma,j} x^gamma; ключи (gamma, j), j с единицы."""
        images = []
        for j in range(1, n + 1):
            extra = {g: c for (g, jj), c in coefficients.items() if jj == j and c}
            images.append(Poly.variable(j, n, "x") + Poly(n, "x", extra))
        return cls(n, tuple(images), truncation)

    def linear_part(self) -> QMatrix:
        """A[i][j] = коэффициент при x_i в phi(x_j)."""
        n = self.ambient_n
        return QMatrix.from_rows(
            [[self.images[j].coeff(_unit(n, i)) for j in range(n)] for i in range(n)], n
        )

    def is_identity(self) -> bool:
        return all(img == Poly.variable(j + 1, self.ambient_n, "x") for j, img in enumerate(self.images))

    def apply(self, g: Poly) -> Poly:
        if g.ambient_n != self.ambient_n or g.side != "x":
            raise AmbientMismatchError("automorphism acts on x-side polynomials of S[n]")
        images = self._monomial_images()
        out = Poly.zero(self.ambient_n, "x")
        for mono, coef in g.terms.items():
            if sum(mono) >= self.truncation:
                continue
            out = out + images[mono].scale(coef)
        return out

    def _monomial_images(self) -> dict[Monomial, Poly]:
        cached = self._cache.get("monomials")
        if cached is not None:
            return cached
        n = self.ambient_n
        images: dict[Monomial, Poly] = {(0,) * n: Poly.constant(n, "x")}
        for alpha in monomials_up_to(n, self.truncation - 1, start=1):
            i = next(k for k, e in enumerate(alpha) if e)
            prev = tuple(e - (k == i) for k, e in enumerate(alpha))
            images[alpha] = images[prev].mul(self.images[i], self.truncation)
        self._cache["monomials"] = images
        return images

    def compose(self, other: XAutomorphism) -> XAutomorphism:
        """(self o other)(x_j) = self(other(x_j))."""
        if other.ambient_n != self.ambient_n:
            raise AmbientMismatchError("composition across different rings")
        bound = min(self.truncation, other.truncation)
        return XAutomorphism(self.ambient_n, tuple(self.apply(img).truncate(bound) for img in other.images), bound)

    def inverse(self) -> XAutomorphism:
        cached = self._cache.get("inverse")
        if cached is not None:
            return cached
        n = self.ambient_n
        A_inv_t = self.linear_part().transpose().inverse()
        nonlinear = [img.drop_below(2) for img in self.images]
        variables = [Poly.variable(j, n, "x") for j in range(1, n + 1)]
        h = [Poly.zero(n, "x") for _ in range(n)]
        # h = (A^T)^{-1} (x - N(h)); каждая итерация уточняет одну степень
        for _ in range(max(self.truncation - 1, 1)):
            rhs = [variables[j] - substitute(nonlinear[j], h, self.truncation) for j in range(n)]
            h = [
                sum((rhs[k].scale(A_inv_t[i, k]) for k in range(n)), Poly.zero(n, "x")).truncate(self.truncation)
                for i in range(n)
            ]
        inv = XAutomorphism(n, tuple(h), self.truncation)
        self._cache["inverse"] = inv
        return inv

    def matrix(self) -> QMatrix:
        """M(phi) в базисе мономов степени 0..truncation-1: столбец = координаты phi(x^b)."""
        basis = monomials_up_to(self.ambient_n, self.truncation - 1)
        images = self._monomial_images()
        columns = [[images[beta].coeff(alpha) for alpha in basis] for beta in basis]
        return QMatrix.from_rows(columns, len(basis)).transpose()

    def dual_matrix(self) -> QMatrix:
        """Матрица действия на двойственной стороне в базисе y^a/a!: transpose(inverse(M(phi)))."""
        return self.matrix().inverse().transpose()

    def __str__(self) -> str:
        return "; ".join(
            f"x{j + 1} -> {render_poly(img)}" for j, img in enumerate(self.images)
        )


def apply_x_automorphism(target: Ideal | Poly | DualGenerator, phi: XAutomorphism):
    """
    Идеал I -> phi(I) (подстановка и усечение); двойственный G -> G' с Ann(G') = phi(Ann(G)),
    т.е. <x^a, G'> = <phi^{-1}(x^a), G>.
    """
    if isinstance(target, Ideal):
        bound = target.truncation if target.truncation is not None else phi.truncation
        if bound > phi.truncation:
            raise ParameterError(
                f"ideal truncation {bound} exceeds automorphism truncation {phi.truncation}"
            )
        gens = tuple(phi.apply(g).truncate(bound) for g in target.generators)
        return Ideal(target.ambient_n, gens).with_truncation(bound)
    if isinstance(target, DualGenerator):
        return DualGenerator(apply_x_automorphism(target.F, phi))
    G = target
    if G.side != "y" or G.ambient_n != phi.ambient_n:
        raise AmbientMismatchError("dual action expects a y-side polynomial of P[n]")
    if G.degree() >= phi.truncation:
        raise ParameterError(f"polynomial of degree {G.degree()} beyond truncation {phi.truncation}")
    inverse_images = phi.inverse()._monomial_images()
    out = {}
    for alpha, img in inverse_images.items():
        value = pairing(img, G)
        if value:
            out[alpha] = value / _factorial(alpha)
    return Poly(G.ambient_n, "y", out)


# --- линейная часть ---

def remove_linear_part(F: Poly, verify: bool = False) -> DualGenerator:
    """Отбрасывает F_0 и F_1; требует, чтобы Ann(F) не содержал элементов порядка 1."""
    if F.side != "y" or F.is_zero():
        raise NormalizationError("remove_linear_part expects a nonzero y-side polynomial")
    n, s = F.ambient_n, F.degree()
    operators = monomials_up_to(n, max(s, 1), start=1)
    linear = set(monomials_of_degree(n, 1))
    for vec in kernel_basis(contraction_matrix([F], operators, monomials_up_to(n, s))):
        if any(c for op, c in zip(operators, vec) if op in linear):
            raise NormalizationError(
                "Ann(F) contains an element of order 1: some variable acts degenerately on F"
            )
    trimmed = DualGenerator(F.drop_below(2))
    if verify and not ideal_equal(annihilator_of_space([F]), annihilator(trimmed)):
        raise InvariantViolation("annihilator changed after dropping degrees <= 1")
    return trimmed


# --- экзотические слагаемые ---

@dataclass(frozen=True)
class ExoticNormalization:
    source: DualGenerator
    F: DualGenerator
    m: int
    substitution: tuple[Poly, ...]  # p_j(x1), j = 2..m
    unit: Poly
    theta: XAutomorphism  # Ann(F) = theta(Ann(source))


def _check_outside_terms(F: Poly, m: int) -> None:
    """Вне P[m] допускаются только y_j^2 с коэффициентом 1."""
    n = F.ambient_n
    for mono, coef in F.terms.items():
        outside = [k for k in range(m, n) if mono[k]]
        if outside and not (sum(mono) == 2 and len(outside) == 1 and mono[outside[0]] == 2 and coef == 1):
            raise NormalizationError(
                f"term {render_poly(Poly(n, 'y', {mono: coef}))} leaves P[{m}] + sum y_j^2"
            )


def _check_normal_shape(F: Poly, m: int) -> None:
    n, s = F.ambient_n, F.degree()
    _check_outside_terms(F, m)
    for mono, coef in F.terms.items():
        d = sum(mono)
        if d >= 4 and not (d == s and mono[0] == s):
            raise NormalizationError(
                f"term {render_poly(Poly(n, 'y', {mono: coef}))} of degree {d} survives normalization"
            )


def _normal_form_errors(F: Poly, m: int) -> list[str]:
    n, s = F.ambient_n, F.degree()
    errors = []
    try:
        _check_normal_shape(F, m)
    except NormalizationError as exc:
        errors.append(str(exc))
    if F.homogeneous_component(s) != Poly.monomial(tuple([s] + [0] * (n - 1)), "y"):
        errors.append("top component is not y1^s")
    x1sq = Poly.monomial(tuple([2] + [0] * (n - 1)), "x")
    F3 = F.homogeneous_component(3) if s > 3 else Poly.zero(n, "y")
    F2 = _inner_quadric(F, m)
    if contract(x1sq, F3) or contract(x1sq, F2):
        errors.append("x1^2 does not kill F_3 and F_2")
    if m >= 2 and _derivative_rank(F3, range(2, m + 1)) < m - 1:
        errors.append(f"x_2 o F_3, ..., x_{m} o F_3 are linearly dependent")
    return errors


def _inner_quadric(F: Poly, m: int) -> Poly:
    """F_2 без квадратов y_j^2, j > m."""
    n = F.ambient_n
    return Poly(n, "y", {mono: c for mono, c in F.homogeneous_component(2).terms.items() if not any(mono[m:])})


def _derivative_rank(F3: Poly, indices: Sequence[int]) -> int:
    echelon = EchelonBasis(priority=lambda mono: (sum(mono), mono))
    for j in indices:
        echelon.add(dict(contract(Poly.variable(j, F3.ambient_n, "x"), F3).terms))
    return len(echelon)


@traced("exotic_transform")
def exotic_transform(F: DualGenerator, m: int) -> ExoticNormalization:
    n, s = F.ambient_n, F.socle_degree
    if s == 3:
        raise NormalizationError("s = 3 is the homogeneous cubic case; need s >= 4")
    if s < 3 or not 1 <= m <= n:
        raise NormalizationError(f"need s >= 4 and 1 <= m <= n, got s={s}, m={m}, n={n}")
    top = F.component(s)
    pure_top = tuple([s] + [0] * (n - 1))
    if set(top.terms) != {pure_top}:
        raise NormalizationError("top component must be c*y1^s")
    G = F.F.scale(1 / top.coeff(pure_top))
    _check_outside_terms(G.drop_below(2), m)

    def x1_power(a: int) -> Poly:
        return Poly.monomial(tuple([a] + [0] * (n - 1)), "x")

    def moment(a: int) -> Rat:
        return pairing(x1_power(a), G)

    # p_j: <x1^a x_j, G> = sum_e p_{j,e} <x1^{a+e}, G>, a = s-2 .. 2; ведущий коэффициент s!
    top_moment = QQ(math.factorial(s))
    substitution: list[Poly] = []
    theta_images = [Poly.variable(1, n, "x")]
    psi_images = [Poly.variable(1, n, "x")]
    for j in range(2, n + 1):
        xj = Poly.variable(j, n, "x")
        p: dict[int, Rat] = {}
        if j <= m:
            for a in range(s - 2, 1, -1):
                target = pairing(x1_power(a).mul(xj), G)
                known = sum((p[e] * moment(a + e) for e in range(2, s - a)), QQ(0))
                p[s - a] = (target - known) / top_moment
        pj = sum((x1_power(e).scale(c) for e, c in p.items()), Poly.zero(n, "x"))
        if j <= m:
            substitution.append(pj)
        psi_images.append(xj - pj)
        theta_images.append(xj + pj)
    psi = XAutomorphism(n, tuple(psi_images), s + 1)
    theta = XAutomorphism(n, tuple(theta_images), s + 1)

    # G_hat = psi^* G: <x^a, G_hat> = <psi(x^a), G>
    images = psi._monomial_images()
    G_hat = Poly(n, "y", {alpha: pairing(img, G) / _factorial(alpha) for alpha, img in images.items()})

    # u = 1 + sum c_i x1^i: чистая y1-часть u o G_hat равна y1^s плюс степени <= 1
    pure = {mono[0]: c for mono, c in G_hat.terms.items() if not any(mono[1:])}
    c: dict[int, Rat] = {}
    for d in range(s - 1, 1, -1):
        # [u o P]_d = f_d + sum_i c_i f_{d+i} (d+i)!/d!
        value = pure.get(d, QQ(0)) + sum(
            (c[i] * pure.get(d + i, QQ(0)) * math.perm(d + i, i) for i in range(1, s - d)), QQ(0)
        )
        c[s - d] = -value / math.perm(s, s - d)
    unit = Poly.constant(n, "x") + sum((x1_power(i).scale(v) for i, v in c.items()), Poly.zero(n, "x"))
    result = contract(unit, G_hat).drop_below(2)

    problems = _normal_form_errors(result, m)
    if problems:
        raise NormalizationError("input is outside the reach of the x1-substitution: " + "; ".join(problems))
    log_event("exotic", f"{render_poly(F.F)} -> {render_poly(result)}")
    return ExoticNormalization(F, DualGenerator(result), m, tuple(substitution), unit, theta)


def normalize_exotic_summands(F: DualGenerator, m: int) -> DualGenerator:
    return exotic_transform(F, m).F


# --- Delta, U и решатель ---

def _check_cubic(F3: Poly, n: int) -> None:
    if F3.ambient_n != n or F3.side != "y":
        raise AmbientMismatchError(f"F3 must be a y-side polynomial in {n} variables")
    if F3 and (not F3.is_homogeneous() or F3.degree() != 3):
        raise ParameterError("F3 must be homogeneous of degree 3")


def build_delta(F3: Poly, n: int) -> QMatrix:
    """Строка t: координаты x_t o F3 в базисе y^g/g!, |g| = 2."""
    _check_cubic(F3, n)
    quad = monomials_of_degree(n, 2)
    rows = []
    for t in range(1, n + 1):
        rows.append(list(dual_coordinates(contract(Poly.variable(t, n, "x"), F3), quad)))
    return QMatrix.from_rows(rows, len(quad))


def build_U(F3: Poly, n: int) -> QMatrix:
    """
    Матрица системы на b_{g,j}: строки = пары (i <= k) в порядке базиса мономов степени 2,
    столбцы = (j, g) сгруппированы по j. Коэффициент b_{g,k} в уравнении (i, k) равен Delta[i][g],
    b_{g,i} равен Delta[k][g]; при i = k коэффициент 2*Delta[i][g].
    Блок U(h) (строки (h, k), столбцы j = h) совпадает с блочной записью через строки Delta.
    """
    delta = build_delta(F3, n)
    quad = monomials_of_degree(n, 2)
    width = len(quad)
    pairs = _pairs(n)
    rows = []
    for i, k in pairs:
        row = [QQ(0)] * (n * width)
        for g in range(width):
            if i == k:
                row[(i - 1) * width + g] = 2 * delta[i - 1, g]
            else:
                row[(k - 1) * width + g] += delta[i - 1, g]
                row[(i - 1) * width + g] += delta[k - 1, g]
        rows.append(row)
    return QMatrix.from_rows(rows, n * width)


def u_block(U: QMatrix, n: int, h: int) -> QMatrix:
    width = len(monomials_of_degree(n, 2))
    pairs = _pairs(n)
    rows = [
        [U[r, (h - 1) * width + g] for g in range(width)]
        for r, (i, _) in enumerate(pairs)
        if i == h
    ]
    return QMatrix.from_rows(rows, width)


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, k) for i in range(1, n + 1) for k in range(i, n + 1)]


def n2_monomials(n: int, m: int) -> list[Monomial]:
    """Мономы степени 2 от x1..xm, кроме x1^2."""
    return [g for g in monomials_of_degree(n, 2) if not any(g[m:]) and g[0] != 2]


@dataclass(frozen=True)
class F2Removal:
    automorphism: XAutomorphism
    coefficients: dict[tuple[Monomial, int], Rat]
    used_x1_column: bool
    F_simple: DualGenerator
    x1_shift: dict[int, Rat] = field(default_factory=dict)


def _x1_shift(F: Poly, m: int) -> dict[int, Rat]:
    """c_k с x1 o F3 = sum_{k=2..m} c_k x_k o F3; пусто, если x1 o F3 = 0 или не лежит в этой оболочке."""
    n = F.ambient_n
    F3 = F.homogeneous_component(3)
    quad = monomials_of_degree(n, 2)
    first = dual_coordinates(contract(Poly.variable(1, n, "x"), F3), quad)
    if m < 2 or not any(first):
        return {}
    others = [dual_coordinates(contract(Poly.variable(k, n, "x"), F3), quad) for k in range(2, m + 1)]
    A = QMatrix.from_rows([[col[r] for col in others] for r in range(len(quad))], len(others))
    c = solve_linear(A, first)
    if c is None:
        return {}
    return {k: value for k, value in zip(range(2, m + 1), c) if value}


def _separate_x1(F: Poly, shift: dict[int, Rat]) -> tuple[XAutomorphism, Poly]:
    """
    x1 -> x1 + sum c_k x_k (двойственно y_k -> y_k - c_k y1) обнуляет x1 o F3;
    появившийся q y1^2 убирается единицей 1 - (2q/(c s!)) x1^{s-2}, где c при y1^s;
    константа отбрасывается.
    """
    n, s = F.ambient_n, F.degree()
    x1 = Poly.variable(1, n, "x")
    shifted = x1 + sum((Poly.variable(k, n, "x").scale(c) for k, c in shift.items()), Poly.zero(n, "x"))
    images = [shifted] + [Poly.variable(j, n, "x") for j in range(2, n + 1)]
    linear = XAutomorphism(n, tuple(images), s + 1)
    moved = apply_x_automorphism(F, linear)
    q = moved.coeff(tuple([2] + [0] * (n - 1)))
    lead = moved.coeff(tuple([s] + [0] * (n - 1)))
    unit = Poly.constant(n, "x") - (x1 ** (s - 2)).scale(2 * q / (lead * math.factorial(s)))
    return linear, contract(unit, moved).drop_below(2)


def f2_removal_system(F: DualGenerator, m: int) -> F2Removal:
    """
    Решает U b = v для phi(x_j) = x_j + sum b_{g,j} x^g, g из N(2), j = 2..m, так что
    phi^* F_simple = F. Если система несовместна, разрешаются и b_{g,1}.
    Если x1 o F3 лежит в оболочке x_k o F3, k >= 2, сначала делается линейная замена x1,
    и F3 в F_simple меняется.
    """
    n, s = F.ambient_n, F.socle_degree
    G = F.F
    shift = _x1_shift(G, m)
    linear = None
    if shift:
        linear, G = _separate_x1(G, shift)
        log_event("solver", f"x1 o F3 depends on x_2..x_{m}; shifting x1 by {shift}")
    F3 = G.homogeneous_component(3)
    F2 = _inner_quadric(G, m)
    F_simple = G - F2
    U = build_U(F3, n)
    quad = monomials_of_degree(n, 2)
    width = len(quad)
    v = list(dual_coordinates(F2, quad))
    allowed_g = [quad.index(g) for g in n2_monomials(n, m)]

    def attempt(first_j: int) -> tuple[list[tuple[int, int]], tuple[Rat, ...] | None]:
        columns = [(j, g) for j in range(first_j, m + 1) for g in allowed_g]
        sub = QMatrix.from_rows(
            [[U[r, (j - 1) * width + g] for j, g in columns] for r in range(U.rows)], len(columns)
        )
        return columns, solve_linear(sub, v)

    columns, solution = attempt(2)
    fallback = False
    if solution is None:
        columns, solution = attempt(1)
        fallback = True
        log_event("solver", "system with b_{g,1} = 0 is inconsistent; allowing the x1 column")
    if solution is None:
        raise InvariantViolation("the F2-removal system is inconsistent")
    coefficients = {(quad[g], j): value for (j, g), value in zip(columns, solution) if value}
    phi = XAutomorphism.from_coefficients(n, coefficients, s + 1)
    if linear is not None:
        phi = phi.compose(linear)
    return F2Removal(phi, coefficients, fallback, DualGenerator(F_simple), shift)


@traced("solve_F2_removal")
def solve_F2_removal(F: DualGenerator, m: int | None = None) -> XAutomorphism:
    if m is None:
        m = hilbert_from_tdf(F)[2]
    return f2_removal_system(F, m).automorphism


# --- нормальная форма ---

@dataclass(frozen=True)
class NormalizationCertificate:
    source: DualGenerator
    exotic: ExoticNormalization
    F_simple: DualGenerator
    automorphism: XAutomorphism  # chi(Ann(source)) = Ann(F_simple)
    coefficients: dict[tuple[Monomial, int], Rat]
    used_x1_column: bool
    hilbert: HilbertFunction
    ideal_equal: bool
    hilbert_equal: bool
    x1_shift: dict[int, Rat] = field(default_factory=dict)

    @property
    def verified(self) -> bool:
        return self.ideal_equal and self.hilbert_equal

    def to_record(self) -> dict:
        return {
            "F": render_poly(self.source.F),
            "exotic_free": render_poly(self.exotic.F.F),
            "F_simple": render_poly(self.F_simple.F),
            "automorphism": str(self.automorphism),
            "hilbert": str(self.hilbert),
            "used_x1_column": self.used_x1_column,
            "x1_shift": {f"x{k}": format_rational(c) for k, c in self.x1_shift.items()},
            "verified": self.verified,
        }


def two_stretched_shape(F: DualGenerator) -> tuple[HilbertFunction, int]:
    n, s = F.ambient_n, F.socle_degree
    H = hilbert_from_tdf(F)
    if s < 4:
        raise NormalizationError(f"socle degree {s} < 4; s = 3 is the homogeneous cubic case")
    expected_tail = [1] * (s - 2)
    if len(H) != s + 1 or H[0] != 1 or H[1] != n or list(H.values[3:]) != expected_tail:
        raise NormalizationError(f"H = {H} is not of the form (1,{n},m,1,...,1)")
    return H, H[2]


@traced("normalize_2stretched")
def normalize_2stretched(F: DualGenerator) -> NormalizationCertificate:
    H, m = two_stretched_shape(F)
    exotic = exotic_transform(F, m)
    removal = f2_removal_system(exotic.F, m)
    chi = removal.automorphism.compose(exotic.theta)

    source_ann = annihilator_of_space([F.F])
    image = apply_x_automorphism(source_ann, chi)
    same_ideal = ideal_equal(image, annihilator(removal.F_simple), DEGREVLEX)
    same_hilbert = hilbert_from_tdf(removal.F_simple) == H
    cert = NormalizationCertificate(
        source=F,
        exotic=exotic,
        F_simple=removal.F_simple,
        automorphism=chi,
        coefficients=removal.coefficients,
        used_x1_column=removal.used_x1_column,
        hilbert=H,
        ideal_equal=same_ideal,
        hilbert_equal=same_hilbert,
        x1_shift=removal.x1_shift,
    )
    if not cert.verified:
        raise InvariantViolation(
            f"normalization certificate failed (ideal_equal={same_ideal}, hilbert_equal={same_hilbert})"
        )
    return cert


def build_two_stretched(F3: Poly, n: int, m: int, s: int) -> DualGenerator:
    """y1^s + F3 + sum_{j>m} y_j^2."""
    F = Poly.monomial(tuple([s] + [0] * (n - 1)), "y") + F3
    for j in range(m + 1, n + 1):
        F = F + Poly.variable(j, n, "y") ** 2
    return DualGenerator(F)


def check_if_direction(F3: Poly, n: int, m: int, s: int) -> HilbertFunction:
    _check_cubic(F3, n)
    if s < 3 or not 1 <= m <= n:
        raise NormalizationError(f"need s >= 3 and 1 <= m <= n, got s={s}, m={m}, n={n}")
    if any(any(mono[m:]) for mono in F3.terms):
        raise NormalizationError(f"F3 must lie in P[{m}]")
    x1sq = Poly.monomial(tuple([2] + [0] * (n - 1)), "x")
    if contract(x1sq, F3):
        raise NormalizationError("x1^2 o F3 must vanish")
    if _derivative_rank(F3, range(2, m + 1)) < m - 1:
        raise NormalizationError(f"x_2 o F3, ..., x_{m} o F3 must be linearly independent")

    F = build_two_stretched(F3, n, m, s)
    H = hilbert_from_tdf(F)
    expected = HilbertFunction(tuple([1, n, m] + [1] * (s - 2)))
    if H != expected:
        raise InvariantViolation(f"built F has H = {H}, expected {expected}")

    # tdf в степени 1: <s! y1, x^g o F3 : |g| = 2> = <y1, ..., y_m>
    echelon = EchelonBasis(priority=lambda mono: (sum(mono), mono))
    echelon.add({_unit(n, 0): QQ(math.factorial(s))})
    for g in monomials_of_degree(n, 2):
        echelon.add(dict(contract(Poly(n, "x", {g: 1}), F3).terms))
    expected_span = {_unit(n, i) for i in range(m)}
    if set(echelon.pivots()) != expected_span:
        raise InvariantViolation("degree-1 top forms do not span <y1, ..., y_m>")
    return H


# --- случайные экземпляры ---

def _random_coefficient(rng: np.random.Generator, low: int = -3, high: int = 3) -> Rat:
    return QQ(int(rng.integers(low, high + 1)))


def _random_form(
    rng: np.random.Generator, monomials: Sequence[Monomial], n: int, density: float = 0.6
) -> Poly:
    terms = {}
    for mono in monomials:
        if rng.random() < density:
            terms[mono] = _random_coefficient(rng)
    return Poly(n, "y", terms)


def random_two_stretched(n: int, m: int, s: int, rng: np.random.Generator) -> DualGenerator:
    """
    F = y1^s + F3 + F2 + sum_{j>m} y_j^2 в нормальной форме: x1^2 убивает F3 и F2,
    x_2 o F3, ..., x_m o F3 независимы.
    """
    if not 1 <= m <= n or s < 4:
        raise ParameterError(f"need 1 <= m <= n and s >= 4, got n={n}, m={m}, s={s}")
    cubic_monos = [g for g in monomials_of_degree(n, 3) if not any(g[m:]) and g[0] <= 1]
    quad_monos = [g for g in monomials_of_degree(n, 2) if not any(g[m:]) and g[0] <= 1]
    for attempt in range(MAX_SAMPLING_ATTEMPTS):
        F3 = _random_form(rng, cubic_monos, n)
        if m >= 2 and _derivative_rank(F3, range(2, m + 1)) < m - 1:
            continue
        F2 = _random_form(rng, quad_monos, n)
        F = build_two_stretched(F3, n, m, s).F + F2
        if attempt:
            log_event("sampling", f"random_two_stretched resampled F3 {attempt} times")
        return DualGenerator(F)
    raise InvariantViolation(f"no admissible F3 found for n={n}, m={m} after {MAX_SAMPLING_ATTEMPTS} attempts")


def random_exotic(n: int, m: int, s: int, rng: np.random.Generator) -> tuple[DualGenerator, DualGenerator]:
    """
    (F, F') где F' = random_two_stretched, а F = u o psi^* F' с psi(x_j) = x_j - q_j(x1)
    и единицей u из k[x1]; normalize_exotic_summands(F) восстанавливает F'.
    """
    target = random_two_stretched(n, m, s, rng)
    x1 = Poly.variable(1, n, "x")
    images = [x1]
    for j in range(2, n + 1):
        q = Poly.zero(n, "x")
        if j <= m:
            for e in range(2, s - 1):
                q = q + (x1 ** e).scale(_random_coefficient(rng))
        images.append(Poly.variable(j, n, "x") - q)
    psi = XAutomorphism(n, tuple(images), s + 1)
    moved = Poly(
        n,
        "y",
        {alpha: pairing(img, target.F) / _factorial(alpha) for alpha, img in psi._monomial_images().items()},
    )
    unit = Poly.constant(n, "x")
    for i in range(1, s - 1):
        unit = unit + (x1 ** i).scale(_random_coefficient(rng))
    return DualGenerator(contract(unit, moved)), target
