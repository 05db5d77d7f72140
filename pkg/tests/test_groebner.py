import pytest

from tools.apolarity import DualGenerator, HilbertFunction, Ideal, annihilator
from tools.errors import NotArtinianError, ParameterError
from tools.groebner import (
    DEGREVLEX,
    LEX,
    PRODUCT,
    TermOrder,
    ideal_contains,
    ideal_equal,
    ideal_square,
    initial_ideal,
    mono_compare,
    normal_form,
    quotient_hilbert,
    reduced_groebner,
    standard_monomials,
)
from tools.poly_core import Poly, monomials_of_degree, parse_poly


def x(text, n=2):
    return parse_poly(text, n, "x")


def test_term_orders():
    # x4*x3*x2 > x4^2*x1 в порядке product
    assert mono_compare((0, 1, 1, 1), (1, 0, 0, 2), PRODUCT) == 1
    assert mono_compare((0, 2), (1, 1), DEGREVLEX) == 1
    assert mono_compare((3,), (2,), LEX) == 1
    assert mono_compare((1, 1), (1, 1), LEX) == 0
    # product: x1 младше любой степени остальных переменных
    assert mono_compare((0, 1), (5, 0), PRODUCT) == 1
    assert mono_compare((0, 1), (5, 0), DEGREVLEX) == -1


def test_priority_permutation():
    order = TermOrder("lex", priority=(0, 1))
    assert mono_compare((1, 0), (0, 3), order) == 1
    with pytest.raises(ParameterError):
        TermOrder("lex", priority=(0, 0)).key(2)
    with pytest.raises(ParameterError):
        TermOrder("weighted")


def test_degrevlex_basis():
    gens = [x("x2^3 - 2*x2*x1"), x("x2^2*x1 + x2 - 2*x1^2")]
    gb = reduced_groebner(gens, DEGREVLEX)
    assert set(gb) == {x("x2^2"), x("x1*x2"), x("x1^2 - 1/2*x2")}
    assert standard_monomials(gb) == [(0, 0), (1, 0), (0, 1)]


def test_lex_basis():
    gens = [x("x2^2 + 2*x2*x1^2"), x("x2*x1 + 2*x1^3 - 1")]
    gb = reduced_groebner(gens, LEX)
    assert set(gb) == {x("x2"), x("x1^3 - 1/2")}


def test_truncated_basis_keeps_order_one_generator():
    ideal = Ideal(2, (x("x2^2 - x1"),)).with_truncation(3)
    gb = ideal.groebner(DEGREVLEX)
    assert set(gb) == {x("x2^2 - x1"), x("x1*x2"), x("x1^2")}
    assert quotient_hilbert(gb) == HilbertFunction((1, 2))


@pytest.mark.parametrize("order", [DEGREVLEX, LEX, PRODUCT])
def test_truncated_and_buchberger_agree(order):
    gens = [x("x2^2"), x("x1^4 - 20*x1^2*x2")]
    plain = reduced_groebner(gens, order)
    monomials = [Poly(2, "x", {m: 1}) for m in monomials_of_degree(2, 6)]
    truncated = reduced_groebner(gens + monomials, order, truncation=6)
    assert set(plain) == set(truncated)
    assert quotient_hilbert(plain).total() == 8


def test_initial_ideal_and_normal_form():
    gb = reduced_groebner([x("x2^2"), x("x1^4 - 20*x1^2*x2")], DEGREVLEX)
    assert (0, 2) in initial_ideal(gb)
    assert normal_form(x("x1*x2^2 + x1"), gb, DEGREVLEX) == x("x1")
    assert gb.reduce(x("x1^4")) == x("20*x1^2*x2")


def test_not_artinian():
    gb = reduced_groebner([x("x1^2")], DEGREVLEX)
    with pytest.raises(NotArtinianError):
        quotient_hilbert(gb)


def test_empty_generators():
    with pytest.raises(ParameterError):
        reduced_groebner([Poly.zero(2, "x")])


def test_membership_and_equality():
    J = annihilator(DualGenerator(parse_poly("y1^5 + y1^3*y2", 2)))
    assert ideal_contains(J, x("x1*x2^2"))
    assert ideal_contains(J, x("x1^6"))
    assert not ideal_contains(J, x("x1"))
    assert ideal_equal(Ideal(2, (x("x1^2"), x("x2"))), Ideal(2, (x("x2"), x("x1^2 + x2"))))
    assert not ideal_equal(Ideal(2, (x("x1^2"), x("x2"))), Ideal(2, (x("x1"), x("x2"))))


def test_ideal_square():
    square = ideal_square(Ideal(2, (x("x1"), x("x2"))))
    assert quotient_hilbert(reduced_groebner(square.generators, DEGREVLEX)) == HilbertFunction((1, 2))
    truncated = ideal_square(Ideal(2, (x("x1"), x("x2")), 1))
    assert truncated.truncation == 2


def test_groebner_cache_per_order():
    J = annihilator(DualGenerator(parse_poly("y1^3 + y2^3", 2)))
    assert J.groebner(LEX) is J.groebner(LEX)
    assert J.groebner(LEX) is not J.groebner(DEGREVLEX)


def test_product_basis_in_four_variables():
    gb = reduced_groebner([x("x2^2", 4), x("20*x1^2*x2 - x1^4", 4)], PRODUCT)
    assert set(gb) == {x("x2^2", 4), x("x1^2*x2 - 1/20*x1^4", 4), x("x1^6", 4)}
    assert gb.leading_monomials()[-1] == (6, 0, 0, 0)


def test_priority_changes_the_basis():
    gens = [x("x1 - x2^2"), x("x2^3")]
    assert set(reduced_groebner(gens, LEX)) == {x("x2^2 - x1"), x("x1*x2"), x("x1^2")}
    assert set(reduced_groebner(gens, TermOrder("lex", (0, 1)))) == {x("x1 - x2^2"), x("x2^3")}


def test_normal_form_without_divisors():
    assert normal_form(x("x1 + x2"), [Poly.zero(2, "x")], DEGREVLEX) == x("x1 + x2")


def test_ideal_from_strings():
    ideal = Ideal.from_strings(["x1^2", "x2^2"], 2)
    assert quotient_hilbert(ideal.groebner(DEGREVLEX)) == HilbertFunction((1, 2, 1))
