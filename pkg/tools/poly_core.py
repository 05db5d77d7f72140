#!/usr/bin/env python3
"""
Разреженные многочлены над Q: операторная сторона (x1..xn) и двойственная (y1..yn).
Разбор и печать выражений вида "20*x1^2*x2 - x1^4", однородные компоненты, подстановки.
"""
from __future__ import annotations

import re
from typing import TYPE_CHECKING, Iterator, Mapping, Sequence

from sympy import QQ
from sympy.polys.monomials import monomial_mul
from sympy.polys.orderings import grevlex

from tools.errors import AmbientMismatchError, ParameterError, PolySyntaxError

if TYPE_CHECKING:
    from tools.linalg_exact import QMatrix

Rat = type(QQ(0))
Monomial = tuple[int, ...]

SIDES = ("x", "y")


def to_rat(value: object) -> Rat:
    """int, элемент QQ или любое число с numerator/denominator -> элемент QQ."""
    if isinstance(value, Rat):
        return value
    if isinstance(value, int):
        return QQ(value)
    num = getattr(value, "numerator", None)
    den = getattr(value, "denominator", None)
    if num is None or den is None:
        raise TypeError(f"not a rational number: {value!r}")
    return QQ(int(num), int(den))


def parse_rational(text: str) -> Rat:
    match = re.fullmatch(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if match is None:
        raise ParameterError(f"ожидалось рациональное число p или p/q, получено {text!r}")
    den = int(match.group(2) or 1)
    if den == 0:
        raise ParameterError(f"нулевой знаменатель в {text!r}")
    return QQ(int(match.group(1)), den)


def format_rational(value: Rat) -> str:
    num, den = int(value.numerator), int(value.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """Мономы степени d, экспоненты в лексикографически убывающем порядке."""
    if n == 0:
        return [()] if d == 0 else []
    if n == 1:
        return [(d,)]
    out: list[Monomial] = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first, *rest))
    return out


def monomials_up_to(n: int, d: int, start: int = 0) -> list[Monomial]:
    out: list[Monomial] = []
    for k in range(start, d + 1):
        out.extend(monomials_of_degree(n, k))
    return out


def render_key(mono: Monomial) -> tuple:
    return grevlex(mono)


class Poly:
    __slots__ = ("ambient_n", "side", "terms", "_hash")

    def __init__(self, ambient_n: int, side: str, terms: Mapping[Monomial, object] | None = None) -> None:
        if side not in SIDES:
            raise AmbientMismatchError(f"unknown side {side!r}")
        clean: dict[Monomial, Rat] = {}
        for mono, coef in (terms or {}).items():
            if len(mono) != ambient_n:
                raise AmbientMismatchError(f"monomial {mono} has length {len(mono)}, expected {ambient_n}")
            c = to_rat(coef)
            if c:
                clean[tuple(mono)] = c
        self.ambient_n = ambient_n
        self.side = side
        self.terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, ambient_n: int, side: str, terms: dict[Monomial, Rat]) -> Poly:
        # terms уже без нулей
        obj = cls.__new__(cls)
        obj.ambient_n = ambient_n
        obj.side = side
        obj.terms = terms
        obj._hash = None
        return obj

    # --- конструкторы ---
    @classmethod
    def zero(cls, ambient_n: int, side: str) -> Poly:
        return cls(ambient_n, side)

    @classmethod
    def constant(cls, ambient_n: int, side: str, value: object = 1) -> Poly:
        return cls(ambient_n, side, {(0,) * ambient_n: value})

    @classmethod
    def monomial(cls, exponents: Sequence[int], side: str, coef: object = 1) -> Poly:
        return cls(len(exponents), side, {tuple(exponents): coef})

    @classmethod
    def variable(cls, index: int, ambient_n: int, side: str) -> Poly:
        """Переменная x_index / y_index, индекс с единицы."""
        if not 1 <= index <= ambient_n:
            raise AmbientMismatchError(f"variable index {index} outside 1..{ambient_n}")
        exps = [0] * ambient_n
        exps[index - 1] = 1
        return cls(ambient_n, side, {tuple(exps): 1})

    # --- доступ ---
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __iter__(self) -> Iterator[tuple[Monomial, Rat]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, mono: Monomial) -> Rat:
        return self.terms.get(tuple(mono), QQ(0))

    def sorted_terms(self) -> list[tuple[Monomial, Rat]]:
        return sorted(self.terms.items(), key=lambda kv: render_key(kv[0]), reverse=True)

    def degree(self) -> int:
        """Полная степень; -1 у нуля."""
        return max((sum(m) for m in self.terms), default=-1)

    def order(self) -> int:
        """Наименьшая степень монома; -1 у нуля."""
        return min((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def variables(self) -> list[int]:
        used = set()
        for mono in self.terms:
            used.update(i + 1 for i, e in enumerate(mono) if e)
        return sorted(used)

    def homogeneous_component(self, d: int) -> Poly:
        return Poly._raw(self.ambient_n, self.side, {m: c for m, c in self.terms.items() if sum(m) == d})

    def components(self) -> list[Poly]:
        return [self.homogeneous_component(d) for d in range(self.degree() + 1)]

    def truncate(self, bound: int) -> Poly:
        """Отбрасывает мономы степени >= bound."""
        return Poly._raw(self.ambient_n, self.side, {m: c for m, c in self.terms.items() if sum(m) < bound})

    def drop_below(self, bound: int) -> Poly:
        """Отбрасывает мономы степени < bound."""
        return Poly._raw(self.ambient_n, self.side, {m: c for m, c in self.terms.items() if sum(m) >= bound})

    # --- арифметика ---
    def _check(self, other: Poly) -> None:
        if self.ambient_n != other.ambient_n or self.side != other.side:
            raise AmbientMismatchError(
                f"ambient mismatch: {self.side}[{self.ambient_n}] vs {other.side}[{other.ambient_n}]"
            )

    def __add__(self, other: Poly | object) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(self.ambient_n, self.side, other)
        self._check(other)
        out = dict(self.terms)
        for mono, coef in other.terms.items():
            c = out.get(mono, 0) + coef
            if c:
                out[mono] = c
            else:
                out.pop(mono, None)
        return Poly._raw(self.ambient_n, self.side, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self.ambient_n, self.side, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Poly | object) -> Poly:
        if not isinstance(other, Poly):
            other = Poly.constant(self.ambient_n, self.side, other)
        return self + (-other)

    def __rsub__(self, other: object) -> Poly:
        return (-self) + other

    def scale(self, factor: object) -> Poly:
        f = to_rat(factor)
        if not f:
            return Poly.zero(self.ambient_n, self.side)
        return Poly._raw(self.ambient_n, self.side, {m: c * f for m, c in self.terms.items()})

    def mul(self, other: Poly, truncation: int | None = None) -> Poly:
        """Произведение; при truncation мономы степени >= truncation отбрасываются."""
        self._check(other)
        out: dict[Monomial, Rat] = {}
        for m1, c1 in self.terms.items():
            d1 = sum(m1)
            for m2, c2 in other.terms.items():
                if truncation is not None and d1 + sum(m2) >= truncation:
                    continue
                mono = monomial_mul(m1, m2)
                c = out.get(mono, 0) + c1 * c2
                if c:
                    out[mono] = c
                else:
                    out.pop(mono, None)
        return Poly._raw(self.ambient_n, self.side, out)

    def __mul__(self, other: Poly | object) -> Poly:
        if isinstance(other, Poly):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other: object) -> Poly:
        return self.scale(other)

    def __pow__(self, k: int) -> Poly:
        result = Poly.constant(self.ambient_n, self.side)
        for _ in range(k):
            result = result.mul(self)
        return result

    # --- сравнение ---
    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly):
            return self.ambient_n == other.ambient_n and self.side == other.side and self.terms == other.terms
        if isinstance(other, (int, Rat)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * self.ambient_n: to_rat(other)}
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ambient_n, self.side, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self.side}[{self.ambient_n}]: {render_poly(self)})"

    def __str__(self) -> str:
        return render_poly(self)


def poly_arith(op: str, a: Poly, b: Poly | object) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        if not isinstance(b, Poly):
            raise TypeError("mul expects a Poly; use scale for numbers")
        return a.mul(b)
    if op == "scale":
        return a.scale(b)
    raise ParameterError(f"unsupported operation: {op}")


def linear_form(coeffs: Sequence[object], side: str) -> Poly:
    n = len(coeffs)
    terms = {}
    for i, c in enumerate(coeffs):
        exps = [0] * n
        exps[i] = 1
        terms[tuple(exps)] = c
    return Poly(n, side, terms)


def substitute(P: Poly, images: Sequence[Poly], truncation: int | None = None) -> Poly:
    """Подставляет images[i] вместо i-й переменной; степени >= truncation отбрасываются."""
    if len(images) != P.ambient_n:
        raise AmbientMismatchError(f"expected {P.ambient_n} images, got {len(images)}")
    if not images:
        return P
    n_out, side_out = images[0].ambient_n, images[0].side
    one = Poly.constant(n_out, side_out)
    powers: list[list[Poly]] = [[one] for _ in images]

    def power(i: int, e: int) -> Poly:
        cache = powers[i]
        while len(cache) <= e:
            cache.append(cache[-1].mul(images[i], truncation))
        return cache[e]

    result = Poly.zero(n_out, side_out)
    for mono, coef in P.terms.items():
        term = one.scale(coef)
        for i, e in enumerate(mono):
            if e:
                term = term.mul(power(i, e), truncation)
            if not term:
                break
        result = result + term
    return result


def substitute_linear(P: Poly, A: QMatrix) -> Poly:
    """v_i -> сумма A[k][i] v_k (столбец i матрицы A)."""
    n = P.ambient_n
    if A.rows != n or A.cols != n:
        raise AmbientMismatchError(f"matrix {A.rows}x{A.cols} does not act on {n} variables")
    A.inverse()  # SingularMatrixError для вырожденной замены
    images = [linear_form([A[k, i] for k in range(n)], P.side) for i in range(n)]
    return substitute(P, images)


# --- разбор ---

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[xy])\s*(?P<idx>\d+)|(?P<op>[-+*/^]))")


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens: list[tuple[str, object, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise PolySyntaxError(f"неожиданный символ {text[start]!r}", start)
        start = pos + len(text[pos:]) - len(text[pos:].lstrip())
        if match.group("num") is not None:
            tokens.append(("num", int(match.group("num")), start))
        elif match.group("var") is not None:
            tokens.append(("var", (match.group("var"), int(match.group("idx"))), start))
        else:
            tokens.append((match.group("op"), None, start))
        pos = match.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Рекурсивный спуск по грамматике expression := term (('+'|'-') term)*."""

    def __init__(self, text: str, ambient_n: int, side: str) -> None:
        self.tokens = _tokenize(text)
        self.i = 0
        self.n = ambient_n
        self.side = side

    def peek(self) -> tuple[str, object, int]:
        return self.tokens[self.i]

    def take(self, kind: str) -> tuple[str, object, int]:
        tok = self.peek()
        if tok[0] != kind:
            raise PolySyntaxError(f"ожидалось {kind!r}, найдено {tok[0]!r}", tok[2])
        self.i += 1
        return tok

    def expression(self) -> Poly:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take(self.peek()[0])[0] == "-" else 1
        result = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            t = self.term()
            result = result + t if op == "+" else result - t
        self.take("end")
        return result

    def term(self) -> Poly:
        coef = QQ(1)
        if self.peek()[0] == "num":
            coef = self.coef()
            if self.peek()[0] != "*":
                return Poly.constant(self.n, self.side, coef)
            self.take("*")
        exps = [0] * self.n
        self.factor(exps)
        while self.peek()[0] == "*":
            self.take("*")
            self.factor(exps)
        return Poly(self.n, self.side, {tuple(exps): coef})

    def coef(self) -> Rat:
        num = self.take("num")[1]
        if self.peek()[0] == "/":
            self.take("/")
            _, den, pos = self.take("num")
            if den == 0:
                raise PolySyntaxError("нулевой знаменатель", pos)
            return QQ(num, den)
        return QQ(num)

    def factor(self, exps: list[int]) -> None:
        _, (letter, idx), pos = self.take("var")
        if letter != self.side:
            raise AmbientMismatchError(f"переменная {letter}{idx} (позиция {pos}) не на стороне {self.side}")
        if not 1 <= idx <= self.n:
            raise AmbientMismatchError(f"индекс переменной {letter}{idx} (позиция {pos}) вне 1..{self.n}")
        power = 1
        if self.peek()[0] == "^":
            self.take("^")
            _, power, ppos = self.take("num")
            if power == 0:
                raise PolySyntaxError("показатель должен быть положительным", ppos)
        exps[idx - 1] += power


def parse_poly(text: str, ambient_n: int, side: str = "y") -> Poly:
    if side not in SIDES:
        raise AmbientMismatchError(f"unknown side {side!r}")
    return _Parser(text, ambient_n, side).expression()


def render_poly(P: Poly) -> str:
    if not P.terms:
        return "0"
    parts: list[str] = []
    for mono, coef in P.sorted_terms():
        factors = [
            f"{P.side}{i + 1}" + (f"^{e}" if e > 1 else "")
            for i, e in enumerate(mono)
            if e
        ]
        magnitude = abs(coef)
        if not factors:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = format_rational(magnitude) + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if coef < 0 else "") + body)
        else:
            parts.append(("- " if coef < 0 else "+ ") + body)
    return " ".join(parts)
