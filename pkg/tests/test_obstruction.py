import pytest
from sympy import QQ

from tools.apolarity import DualGenerator, HilbertFunction, annihilator
from tools.errors import InvariantViolation, ParameterError
from tools.groebner import PRODUCT, quotient_hilbert
from tools.obstruction import (
    CASES,
    CUBICS,
    BVector,
    M_b,
    ObstructionReport,
    Q_b,
    build_F,
    canonical_cubic,
    evaluate_sample,
    format_table,
    membership_BH,
    predicted_obstructed,
    published_generators,
    reports_frame,
    reproduce_case,
    rescale_F,
    rescaled_b,
    sample_parameters,
    tangent_dimension,
    tangent_space,
    verify_published_generators,
)
from tools.poly_core import Poly, monomials_of_degree, parse_poly
from tools.structure_theorem import (
    XAutomorphism,
    apply_x_automorphism,
    normalize_2stretched,
    remove_linear_part,
)

QUADRIC_CONE_B = BVector.of(1, 0, 1, 0, 0, 1)


def y(text):
    return parse_poly(text, 4, "y")


# --- построение F^{H,b} ---

def test_canonical_cubics():
    assert canonical_cubic("triple_line") == y("y4^3")
    assert canonical_cubic("zero").is_zero()
    assert canonical_cubic("fermat_t", 0) == y("y2^3 + y3^3 + y4^3")
    assert canonical_cubic("fermat_t", 2) == y("y2^3 + y3^3 + y4^3 + 2*y2*y3*y4")
    with pytest.raises(ParameterError):
        canonical_cubic("fermat_t")
    with pytest.raises(ParameterError):
        canonical_cubic("cusp_a", 1)
    with pytest.raises(ParameterError):
        canonical_cubic("nodal")


def test_build_F():
    assert build_F(canonical_cubic("zero"), QUADRIC_CONE_B).F == y("y1^4 + y1*y2^2 + y1*y3^2 + y1*y4^2")
    b = BVector.of(0, 1, 0, 0, 0, 0)
    assert build_F(y("y4^3"), b).F == y("y1^4 + 2*y1*y2*y3 + y4^3")


def test_build_F_rejects_bad_cubic():
    with pytest.raises(ParameterError):
        build_F(y("y1^3"), QUADRIC_CONE_B)
    with pytest.raises(ParameterError):
        build_F(y("y2^2"), QUADRIC_CONE_B)


def test_quadric_and_matrix():
    b = BVector.of(1, 2, 3, 4, 5, 6)
    assert Q_b(b) == y("y2^2 + 4*y2*y3 + 3*y3^2 + 8*y2*y4 + 10*y3*y4 + 6*y4^2")
    assert M_b(b).to_lists() == [[1, 2, 4], [2, 3, 5], [4, 5, 6]]


def test_bvector():
    assert str(QUADRIC_CONE_B) == "(1,0,1,0,0,1)"
    assert BVector.of(2, 4, 0, 0, 0, 6).scaled(QQ(1, 2)) == BVector.of(1, 2, 0, 0, 0, 3)
    with pytest.raises(ParameterError):
        BVector.of(1, 2, 3)


def test_membership():
    assert membership_BH(canonical_cubic("fermat_t", 0), BVector.zero())
    assert membership_BH(canonical_cubic("zero"), QUADRIC_CONE_B)
    assert not membership_BH(canonical_cubic("zero"), BVector.zero())
    assert not membership_BH(y("y4^3"), BVector.zero())
    assert not membership_BH(y("y3*y4^2"), BVector.of(0, 0, 1, 0, 0, 0))


# --- предсказание ---

def test_prediction_for_fixed_families():
    b = BVector.of(1, 2, 3, 4, 5, 6)
    assert predicted_obstructed("zero", QUADRIC_CONE_B)
    assert predicted_obstructed("triple_line", BVector.of(1, 0, 0, 0, 1, 0))
    for name in ("fermat_node", "line_pair", "triangle", "cusp_b"):
        assert not predicted_obstructed(name, b)


def test_prediction_on_loci():
    assert predicted_obstructed("cusp_a", BVector.of(1, 0, 2, 0, 3, 0))
    assert not predicted_obstructed("cusp_a", BVector.of(1, 1, 2, 0, 3, 0))
    assert predicted_obstructed("cube_node", BVector.of(2, 1, 1, 0, 2, 0))
    assert not predicted_obstructed("cube_node", BVector.of(2, 1, 1, 0, 3, 0))
    assert predicted_obstructed("cusp_c", BVector.of(1, 0, 0, 0, 0, 0))
    assert not predicted_obstructed("cusp_c", BVector.of(1, 0, 1, 0, 0, 0))
    assert predicted_obstructed("conic_line", BVector.of(1, 1, 1, 0, 0, 0))
    assert not predicted_obstructed("conic_line", BVector.of(1, 1, 2, 0, 0, 0))


def test_prediction_for_fermat_pencil():
    assert predicted_obstructed("fermat_t", QUADRIC_CONE_B, 0)
    assert not predicted_obstructed("fermat_t", BVector.of(1, 1, 1, 1, 1, 1), 0)
    assert not predicted_obstructed("fermat_t", BVector.zero(), 1)
    assert predicted_obstructed("fermat_t", BVector.zero(), 6)
    with pytest.raises(ParameterError):
        predicted_obstructed("fermat_t", QUADRIC_CONE_B, 6)


def test_prediction_outside_BH():
    with pytest.raises(ParameterError):
        predicted_obstructed("triple_line", BVector.zero())


# --- касательное пространство ---

def test_quadric_cone_is_obstructed():
    F = build_F(canonical_cubic("zero"), QUADRIC_CONE_B)
    space = tangent_space(F)
    assert space.hilbert_J == HilbertFunction((1, 4, 4, 1, 1))
    assert space.hilbert_J2 == HilbertFunction((1, 4, 10, 20, 20, 4, 1))
    assert space.N == 49
    assert space.obstructed
    assert quotient_hilbert(annihilator(F).groebner(PRODUCT)) == HilbertFunction((1, 4, 4, 1, 1))


def test_fermat_tangent_dimensions():
    fermat = canonical_cubic("fermat_t", 0)
    assert tangent_dimension(build_F(fermat, BVector.of(1, 1, 1, 1, 1, 1))) == 44
    assert tangent_dimension(build_F(fermat, QUADRIC_CONE_B)) == 49


def test_tangent_dimension_checks_length():
    with pytest.raises(InvariantViolation):
        tangent_dimension(DualGenerator(y("y1^4 + y2^2")))
    assert tangent_dimension(DualGenerator(y("y1^4 + y2^2")), expected_length=None) > 0


# --- опубликованные списки ---

def test_published_quadric_cone():
    assert verify_published_generators("zero")
    assert published_generators("zero").truncation == 5


def test_published_fermat():
    assert verify_published_generators("fermat", BVector.of(1, 2, 3, 4, 5, 6))


def test_published_fermat_pencil():
    assert verify_published_generators("fermat_t", t=2)


def test_published_cusp():
    assert verify_published_generators("cusp_a", BVector.of(1, 2, 3, 4, 5, 6))


def test_published_triple_line():
    assert verify_published_generators("triple_line", BVector.of(1, 0, 0, 0, 1, 0))


def test_published_lists_need_parameters():
    with pytest.raises(ParameterError):
        verify_published_generators("triangle", BVector.zero())
    with pytest.raises(ParameterError):
        verify_published_generators("cusp_a")
    with pytest.raises(ParameterError):
        verify_published_generators("fermat_t")
    with pytest.raises(ParameterError):
        verify_published_generators("triple_line", BVector.zero())


@pytest.mark.slow
@pytest.mark.parametrize("case", ["fermat", "cusp_a", "cube_node", "cusp_c", "conic_line", "triple_line"])
def test_published_lists_at_sampled_points(case):
    for index in range(4):
        sample = sample_parameters(case, index, 11)
        assert verify_published_generators(case, sample.b)


# --- масштабирование ---

def test_rescaling_identity():
    b = BVector.of(1, 2, 3, 4, 5, 6)
    for name in ("triple_line", "cusp_c", "zero"):
        H = canonical_cubic(name)
        for t in (QQ(2), QQ(1, 2)):
            scaled = rescale_F(build_F(H, b), t)
            assert scaled.F == build_F(H, rescaled_b(b, t)).F.scale(t ** 12)
    with pytest.raises(ParameterError):
        rescale_F(build_F(canonical_cubic("zero"), b), 0)


@pytest.mark.slow
@pytest.mark.parametrize("case", ["cusp_a", "triple_line", "zero"])
@pytest.mark.parametrize("t", [QQ(2), QQ(1, 2)])
def test_rescaling_preserves_tangent_dimension(case, t):
    for index in range(4):
        sample = sample_parameters(case, index, 5)
        F = build_F(canonical_cubic(case), sample.b)
        N = tangent_dimension(F)
        assert tangent_dimension(rescale_F(F, t)) == N
        assert predicted_obstructed(case, rescaled_b(sample.b, t)) == sample.on_locus
        assert (N > 44) == sample.on_locus


# --- выборка и воспроизведение ---

def test_sampling_is_deterministic():
    assert sample_parameters("cusp_c", 3, 42) == sample_parameters("cusp_c", 3, 42)


def test_sampling_alternates_on_and_off_locus():
    for index in range(4):
        sample = sample_parameters("cube_node", index, 42)
        assert membership_BH(canonical_cubic("cube_node"), sample.b)
        assert sample.on_locus == (index % 2 == 0)
        assert predicted_obstructed("cube_node", sample.b) == sample.on_locus


def test_sampling_pencil_draws_t():
    sample = sample_parameters("fermat_t", 0, 42)
    assert sample.t is not None and sample.t != 0
    assert sample_parameters("fermat_t1", 3, 42).t == 1
    fixed = sample_parameters("fermat_t6", 4, 42)
    assert (fixed.b, fixed.t, fixed.on_locus) == (BVector.zero(), QQ(6), True)


def test_reproduce_quadric_cone():
    reports = reproduce_case("zero", 1, 7)
    assert len(reports) == 1
    report = reports[0]
    assert report.in_BH
    assert report.hilbert_J == HilbertFunction((1, 4, 4, 1, 1))
    assert report.computed_obstructed and report.agree


def test_reproduce_fixed_case_runs_once():
    reports = reproduce_case("fermat_t6", 5, 7)
    assert len(reports) == 1
    assert reports[0].agree


def test_reproduce_rejects_bad_arguments():
    with pytest.raises(ParameterError):
        reproduce_case("zero", 0, 7)
    with pytest.raises(ParameterError):
        reproduce_case("nodal", 1, 7)


def test_evaluate_sample_record():
    record = evaluate_sample("triple_line", 0, 3).to_record()
    assert record["case"] == "triple_line"
    assert record["H"] == "y4^3"
    assert record["hilbert_J"] == "(1,4,4,1,1)"
    assert record["predicted"] is True
    assert record["agree"] is True


def test_report_table():
    report = ObstructionReport(
        case="zero",
        index=0,
        H="0",
        b=QUADRIC_CONE_B,
        t=None,
        in_BH=True,
        hilbert_J=HilbertFunction((1, 4, 4, 1, 1)),
        hilbert_J2=HilbertFunction((1, 4, 10, 20, 20, 4, 1)),
        N=49,
        predicted_obstructed=True,
        computed_obstructed=True,
    )
    frame = reports_frame([report])
    assert list(frame["N"]) == [49]
    assert frame["b"][0] == "(1,0,1,0,0,1)"
    assert "agree" in format_table([report])
    assert format_table([]) == "(пусто)"


@pytest.mark.slow
@pytest.mark.parametrize("case", sorted(set(CASES) - {"fermat_t6"}))
def test_reproduction_agrees(case):
    reports = reproduce_case(case, 10, 42)
    assert all(r.agree for r in reports)


@pytest.mark.slow
def test_pencil_member_at_t_one_is_unobstructed():
    reports = reproduce_case("fermat_t1", 5, 42)
    assert len(reports) == 5
    for report in reports:
        assert report.t == 1
        assert report.N == 44
        assert not report.predicted_obstructed
        assert report.agree


@pytest.mark.slow
def test_pencil_singular_member_is_obstructed():
    reports = reproduce_case("fermat_t6", 1, 42)
    assert reports[0].computed_obstructed


def test_case_table_covers_cubics():
    assert set(CUBICS) <= set(CASES)


# --- инвариантность N ---

def _moving_automorphism(rng):
    """x1 неподвижна, к x2..x4 добавляются случайные квадратичные члены."""
    images = [Poly.variable(1, 4, "x")]
    for j in range(2, 5):
        image = Poly.variable(j, 4, "x")
        for g in monomials_of_degree(4, 2):
            if rng.random() < 0.3:
                image = image + Poly.monomial(g, "x", int(rng.integers(-2, 3)))
        images.append(image)
    return XAutomorphism(4, tuple(images), 5)


@pytest.mark.slow
@pytest.mark.parametrize("case", ["zero", "fermat", "fermat_t1", "cusp_a", "cube_node", "triple_line"])
def test_tangent_dimension_survives_normalization(case, rng):
    sample = sample_parameters(case, 0, 13)
    F = build_F(canonical_cubic(CASES[case].cubic, sample.t), sample.b)
    moved = remove_linear_part(apply_x_automorphism(F.F, _moving_automorphism(rng)))
    cert = normalize_2stretched(moved)
    assert cert.hilbert == HilbertFunction((1, 4, 4, 1, 1))
    N = tangent_dimension(F)
    assert tangent_dimension(moved) == N
    assert tangent_dimension(cert.F_simple) == N
