import pytest
from sympy import QQ

from tools.errors import AmbientMismatchError, ParameterError, PolySyntaxError, SingularMatrixError
from tools.linalg_exact import QMatrix
from tools.poly_core import (
    Poly,
    format_rational,
    monomials_of_degree,
    monomials_up_to,
    parse_poly,
    parse_rational,
    poly_arith,
    render_poly,
    substitute,
    substitute_linear,
)


def x(text, n=2):
    return parse_poly(text, n, "x")


def test_parse_and_render():
    p = x("20*x1^2*x2 - x1^4")
    assert p.terms == {(2, 1): QQ(20), (4, 0): QQ(-1)}
    assert render_poly(p) == "-x1^4 + 20*x1^2*x2"


def test_parse_rational_coefficient_and_constant():
    p = parse_poly("-1/12*y2^2 + y1^4 + 3", 2)
    assert p.coeff((0, 2)) == QQ(-1, 12)
    assert p.coeff((0, 0)) == 3
    assert render_poly(p) == "y1^4 - 1/12*y2^2 + 3"


def test_repeated_variables_multiply():
    assert parse_poly("y1*y1^2*y2", 2) == Poly.monomial((3, 1), "y")


def test_syntax_error_position():
    with pytest.raises(PolySyntaxError) as excinfo:
        parse_poly("y1 + * y2", 2)
    assert excinfo.value.position == 5


def test_unknown_character():
    with pytest.raises(PolySyntaxError) as excinfo:
        parse_poly("y1 $ y2", 2)
    assert excinfo.value.position == 3


def test_zero_exponent_rejected():
    with pytest.raises(PolySyntaxError):
        parse_poly("y1^0", 1)


def test_wrong_side_or_index():
    with pytest.raises(AmbientMismatchError):
        parse_poly("x1", 2, "y")
    with pytest.raises(AmbientMismatchError):
        parse_poly("y3", 2)


def test_mixed_rings_do_not_add():
    with pytest.raises(AmbientMismatchError):
        x("x1") + parse_poly("y1", 2)
    with pytest.raises(AmbientMismatchError):
        x("x1") + x("x1", 3)


def test_arithmetic():
    a, b = x("x1 + x2"), x("x1 - x2")
    assert a * b == x("x1^2 - x2^2")
    assert a ** 2 == x("x1^2 + 2*x1*x2 + x2^2")
    assert 3 * a == x("3*x1 + 3*x2")
    assert a - a == 0
    assert Poly.constant(2, "x", 3) == 3


def test_poly_arith_dispatch():
    a, b = x("x1 + x2"), x("x1 - x2")
    assert poly_arith("add", a, b) == x("2*x1")
    assert poly_arith("sub", a, b) == x("2*x2")
    assert poly_arith("mul", a, b) == x("x1^2 - x2^2")
    assert poly_arith("scale", a, QQ(1, 3)) == x("1/3*x1 + 1/3*x2")
    with pytest.raises(TypeError):
        poly_arith("mul", a, 2)
    with pytest.raises(ParameterError):
        poly_arith("div", a, b)


def test_truncated_product():
    a = x("x1 + x2^2")
    assert a.mul(a, truncation=3) == x("x1^2")
    assert (a ** 2).truncate(3) == x("x1^2")


def test_components():
    p = parse_poly("y1^5 + y1^3*y2 + y2^2 + y1", 2)
    assert p.degree() == 5
    assert p.order() == 1
    assert p.homogeneous_component(4) == parse_poly("y1^3*y2", 2)
    assert p.drop_below(2) == parse_poly("y1^5 + y1^3*y2 + y2^2", 2)
    assert not p.is_homogeneous()
    assert p.variables() == [1, 2]


def test_monomial_enumeration():
    assert monomials_of_degree(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert monomials_up_to(2, 1) == [(0, 0), (1, 0), (0, 1)]
    assert len(monomials_of_degree(4, 3)) == 20


def test_substitute():
    p = x("x1*x2")
    assert substitute(p, [x("x1 + x2"), x("x2")]) == x("x1*x2 + x2^2")
    assert substitute(p, [x("x1 + x2"), x("x2")], truncation=2) == 0


def test_substitute_linear():
    p = parse_poly("y1^2*y2", 2)
    A = QMatrix.from_rows([[2, 0], [0, 3]])
    assert substitute_linear(p, A) == parse_poly("12*y1^2*y2", 2)
    with pytest.raises(SingularMatrixError):
        substitute_linear(p, QMatrix.from_rows([[1, 1], [1, 1]]))


def test_rationals():
    assert parse_rational("6/8") == QQ(3, 4)
    assert parse_rational("-5") == QQ(-5)
    assert format_rational(QQ(-3, 4)) == "-3/4"
    assert format_rational(QQ(7)) == "7"
    with pytest.raises(ParameterError):
        parse_rational("1/0")
    with pytest.raises(ParameterError):
        parse_rational("abc")


def _random_poly(rng, n, d, side="x"):
    terms = {}
    for mono in monomials_up_to(n, d):
        if rng.random() < 0.5:
            terms[mono] = QQ(int(rng.integers(-4, 5)), int(rng.integers(1, 4)))
    return Poly(n, side, terms)


def _random_invertible(rng, n):
    while True:
        A = QMatrix.from_rows(rng.integers(-2, 3, size=(n, n)).tolist())
        if A.determinant():
            return A


def test_ring_axioms_on_random_polynomials(rng):
    for _ in range(10):
        a, b, c = (_random_poly(rng, 3, 3) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0
        assert a * Poly.constant(3, "x") == a


def test_render_parse_roundtrip_on_random_polynomials(rng):
    for side in ("x", "y"):
        for _ in range(10):
            p = _random_poly(rng, 3, 4, side)
            assert parse_poly(render_poly(p), 3, side) == p


def test_components_sum_to_polynomial(rng):
    for _ in range(10):
        p = _random_poly(rng, 3, 5, "y")
        assert sum(p.components(), Poly.zero(3, "y")) == p
        assert all(q.is_homogeneous() for q in p.components())


def test_substitute_linear_composes(rng):
    for _ in range(10):
        p = _random_poly(rng, 3, 3, "y")
        A, B = _random_invertible(rng, 3), _random_invertible(rng, 3)
        assert substitute_linear(substitute_linear(p, A), B) == substitute_linear(p, B * A)
        assert substitute_linear(p, QMatrix.identity(3)) == p


def test_space_between_letter_and_index():
    assert parse_poly("2*y 1^2 + y  2", 2) == parse_poly("2*y1^2 + y2", 2)
    with pytest.raises(PolySyntaxError) as excinfo:
        parse_poly("y1 + y + 1", 2)
    assert excinfo.value.position == 5
