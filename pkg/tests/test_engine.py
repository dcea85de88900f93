"""engine: matrices, exact kernels, covering, certificates, verification."""

import math
import random
from fractions import Fraction

import pytest

from detmethod import (
    AuxiliaryCertificate,
    DegenerateIdealError,
    HeightBox,
    InputError,
    Ordering,
    Polynomial,
    TheoreticalFalsificationError,
    affine_pipeline,
    auxiliary_for_box,
    build_matrix,
    chart_norm_bound,
    choose_delta,
    cover_and_construct,
    enumerate_projective,
    exact_kernel,
    groebner,
    homogenize_ideal,
    matrix_rank,
    parabola_chart,
    staircase,
    theoretical_rho,
    verify_certificate,
)

from conftest import make_ideal
from oracles import exact_determinant, rational_rank

GRLEX = Ordering.GRLEX_LEFT


def _conic_setup(delta=2):
    ideal = make_ideal(["x0*x2 - x1^2"], 3)
    gb = groebner(ideal, GRLEX, degree_cap=max(delta, 9))
    return gb, staircase(gb, delta)


# -- matrices --------------------------------------------------------------


def test_build_matrix_entries():
    gb, sc = _conic_setup()
    mat = build_matrix([(4, 2, 1), (1, 1, 1)], sc)
    assert len(mat.entries) == 5
    row = dict(zip(mat.exponents, mat.entries))
    assert row[(2, 0, 0)] == (16, 1)  # x0^2 at both points
    assert row[(0, 0, 2)] == (1, 1)  # x2^2


def test_build_matrix_dimension_mismatch():
    gb, sc = _conic_setup()
    with pytest.raises(InputError):
        build_matrix([(1, 2)], sc)


def test_matrix_rank_vs_oracle():
    gb, sc = _conic_setup()
    rng = random.Random(3)
    for _ in range(15):
        pts = []
        while len(pts) < 4:
            t = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
            p = (t.denominator**2, t.denominator * t.numerator, t.numerator**2)
            if p not in pts:
                pts.append(p)
        mat = build_matrix(pts, sc)
        assert matrix_rank(mat) == rational_rank(
            [[mat.entries[i][j] for j in range(len(pts))] for i in range(5)]
        )


# -- kernels ---------------------------------------------------------------


def test_kernel_empty_for_full_rank():
    gb, sc = _conic_setup(1)  # staircase {x0, x1, x2}, mu = 3
    mat = build_matrix([(1, 0, 0), (0, 1, 0), (0, 0, 1)], sc)
    assert exact_kernel(mat) == []


def test_kernel_repeated_point():
    gb, sc = _conic_setup(1)
    mat = build_matrix([(1, 1, 1), (1, 1, 1)], sc)
    kernel = exact_kernel(mat)
    assert len(kernel) == 2
    for vec in kernel:
        assert sum(c * v for c, v in zip(vec, (1, 1, 1))) == 0


def test_kernel_vectors_primitive_and_sign_fixed():
    gb, sc = _conic_setup()
    pts = [(1, 1, 1), (4, 2, 1), (9, 3, 1)]
    for vec in exact_kernel(build_matrix(pts, sc)):
        g = 0
        for v in vec:
            g = math.gcd(g, v)
        assert g == 1
        assert next(v for v in vec if v != 0) > 0


def test_kernel_annihilates_columns():
    gb, sc = _conic_setup()
    pts = [(1, 1, 1), (4, 2, 1), (1, -1, 1), (0, 0, 1)]
    mat = build_matrix(pts, sc)
    for vec in exact_kernel(mat):
        for j in range(len(pts)):
            assert sum(vec[i] * mat.entries[i][j] for i in range(5)) == 0


# -- auxiliary polynomials ---------------------------------------------------


def test_auxiliary_small_point_set_always_certifies():
    gb, sc = _conic_setup()  # mu = 5
    pts = [(1, 1, 1), (4, 2, 1), (9, 3, 1), (4, -2, 1)]  # q = 4 <= mu - 1
    cert = auxiliary_for_box(pts, range(4), sc, gb, [(0, 9)] * 3)
    assert cert is not None
    assert cert.nonmembership_ok
    for p in pts:
        assert cert.poly.evaluate(p) == 0


def test_auxiliary_full_rank_returns_none():
    gb, sc = _conic_setup()
    # five points in general position on the conic: Vandermonde-type full rank
    ts = [Fraction(t) for t in (-2, -1, 0, 1, 2)]
    pts = [(1, t, t * t) for t in ts]
    pts = [tuple(int(v) for v in p) for p in pts]
    assert auxiliary_for_box(pts, range(5), sc, gb, [(-2, 4)] * 3) is None


def test_verify_accepts_constructor_output():
    gb, sc = _conic_setup()
    pts = [(1, 1, 1), (4, 2, 1)]
    cert = auxiliary_for_box(pts, (0, 1), sc, gb, [(1, 4)] * 3)
    assert verify_certificate(cert, pts, gb).ok


def test_verify_rejects_perturbed_coefficient():
    gb, sc = _conic_setup()
    pts = [(1, 1, 1), (4, 2, 1)]
    cert = auxiliary_for_box(pts, (0, 1), sc, gb, [(1, 4)] * 3)
    e0 = sorted(cert.poly.support())[0]
    bad = Polynomial(
        {**cert.poly.terms, e0: cert.poly.terms[e0] + 1}, cert.poly.num_vars
    )
    res = verify_certificate(
        AuxiliaryCertificate(bad, cert.support_delta, cert.points_covered,
                             cert.box, True),
        pts,
        gb,
    )
    assert not res.ok
    assert any("vanish" in msg for msg in res.failures)


def test_verify_rejects_support_in_lt():
    gb, sc = _conic_setup()
    pts = [(1, 1, 1), (4, 2, 1)]
    cert = auxiliary_for_box(pts, (0, 1), sc, gb, [(1, 4)] * 3)
    # move mass onto x1^2, the excluded leading monomial
    bad = cert.poly + Polynomial({(0, 2, 0): Fraction(1)}, 3)
    res = verify_certificate(
        AuxiliaryCertificate(bad, 2, cert.points_covered, cert.box, True), pts, gb
    )
    assert not res.ok
    assert any("LT" in msg for msg in res.failures)


def test_verify_rejects_ideal_member():
    gb, sc = _conic_setup()
    member = Polynomial({(1, 0, 1): Fraction(1), (0, 2, 0): Fraction(-1)}, 3)
    res = verify_certificate(
        AuxiliaryCertificate(member, 2, (), ((0, 1),) * 3, True), [], gb
    )
    assert not res.ok
    assert any("ideal" in msg for msg in res.failures)


# -- integer dichotomy -------------------------------------------------------


def test_integer_minor_dichotomy():
    """Square minors of the integer monomial matrix are integers, so each
    determinant is either 0 or at least 1 in absolute value."""
    gb, sc = _conic_setup()
    rng = random.Random(17)
    for _ in range(40):
        pts = []
        while len(pts) < 5:
            t = rng.randint(-6, 6)
            p = (1, t, t * t)
            if p not in pts:
                pts.append(p)
        mat = build_matrix(pts, sc)
        det = exact_determinant([[mat.entries[i][j] for j in range(5)] for i in range(5)])
        assert det.denominator == 1
        assert det == 0 or abs(det) >= 1


# -- theoretical rho ----------------------------------------------------------


def test_theoretical_rho_vandermonde_scale():
    # mu=3, m=1, nu=2, f=3, unit norms, unit box: rho ~ (1/(3! * 3^3))^(1/3)
    box = HeightBox((1, 1))
    rho, cubes = theoretical_rho(box, (0, 0), 3, 3, 2, 1, 1)
    assert 0 < rho <= (1 / 162) ** (1 / 3)
    assert cubes == math.ceil(2 / rho)


def test_theoretical_rho_certifies_strictly():
    box = HeightBox((1, 100, 10000))
    rho, _ = theoretical_rho(box, (2, 4, 4), 8, 5, 2, 1, Fraction(3))
    lhs = (
        math.factorial(5) * 3**5 * 3.0**5 * (100.0**4) * (10000.0**4) * rho**8
    )
    assert lhs < 1


def test_theoretical_rho_monotone_in_height():
    small = HeightBox((1, 10, 100))
    large = HeightBox((1, 100, 10000))
    r1, _ = theoretical_rho(small, (2, 4, 4), 8, 5, 2, 1, 1)
    r2, _ = theoretical_rho(large, (2, 4, 4), 8, 5, 2, 1, 1)
    assert r2 < r1 <= 0.5


def test_theoretical_rho_rejects_f_zero():
    with pytest.raises(DegenerateIdealError):
        theoretical_rho(HeightBox((1, 1)), (0, 0), 0, 1, 0, 1, 1)


# -- choose_delta -------------------------------------------------------------


def test_choose_delta_conic():
    ih = make_ideal(["x0*x2 - x1^2"], 3)
    delta, report = choose_delta(ih, 0.25, d=2, m=1)
    assert delta == 2
    assert report["delta"] == 2
    assert max(r - l for r, l in zip(report["ratios"], report["limits"])) <= 0.25


def test_choose_delta_huge_epsilon_picks_smallest_usable():
    ih = make_ideal(["x0*x2 - x1^2"], 3)
    delta, _ = choose_delta(ih, 100.0, d=2, m=1)
    assert delta == 1


def test_choose_delta_impossible_epsilon():
    ih = make_ideal(["x0*x2 - x1^2"], 3)
    with pytest.raises(InputError):
        choose_delta(ih, 1e-9, d=2, m=1, delta_max=4)


def test_choose_delta_rejects_bad_inputs():
    ih = make_ideal(["x0*x2 - x1^2"], 3)
    with pytest.raises(InputError):
        choose_delta(ih, -1.0, d=2, m=1)
    with pytest.raises(DegenerateIdealError):
        choose_delta(ih, 0.5, d=2, m=0)


# -- covering / pipeline -------------------------------------------------------


def test_cover_conic_projective():
    ih = make_ideal(["x0*x2 - x1^2"], 3)
    report = cover_and_construct(ih, HeightBox((4, 4, 4)), 2)
    assert report.mu == 5
    assert (report.dimension, report.degree) == (1, 2)
    assert len(report.points) == 8
    assert report.class_counts == (5, 0, 3)
    covered = set()
    for c in report.certificates:
        covered.update(c.points_covered)
    assert covered == set(range(8))


def test_affine_pipeline_parabola():
    report = affine_pipeline(make_ideal(["x1 - x0^2"], 2), 100, delta=2)
    assert len(report.affine_points) == 21
    assert report.mu == 5
    assert report.vacuous is False
    assert report.k_actual == 2 * len(report.certificates)
    assert report.ordering_bound.holds
    # bisection depth never exceeds the per-axis binary-split budget
    assert report.max_depth <= math.ceil(math.log2(2 * 100)) + 1


def test_affine_pipeline_epsilon_mode():
    report = affine_pipeline(make_ideal(["x1 - x0^2"], 2), 100, epsilon=0.25)
    assert report.delta == 2
    assert report.delta_report["delta"] == 2


def test_affine_pipeline_delta_xor_epsilon():
    parabola = make_ideal(["x1 - x0^2"], 2)
    with pytest.raises(InputError):
        affine_pipeline(parabola, 10)
    with pytest.raises(InputError):
        affine_pipeline(parabola, 10, delta=2, epsilon=0.5)


def test_affine_pipeline_empty_variety_is_vacuous():
    report = affine_pipeline(make_ideal(["x0^2 + 1"], 2), 50, delta=2)
    assert report.vacuous
    assert report.certificates == []


def test_affine_pipeline_single_point_degenerate():
    with pytest.raises(DegenerateIdealError):
        affine_pipeline(make_ideal(["x0 - 2", "x1 - 3"], 2), 10, delta=2)


def test_theoretical_strategy_parabola_chart():
    chart = parabola_chart(100)
    report = affine_pipeline(
        make_ideal(["x1 - x0^2"], 2), 100, delta=2,
        strategy="theoretical", chart=chart,
    )
    assert report.rho is not None and 0 < report.rho <= 0.5
    assert report.cube_count >= len(report.certificates)
    covered = set()
    for c in report.certificates:
        covered.update(c.points_covered)
    assert covered == set(range(21))


def test_parabola_chart_requires_square_height():
    with pytest.raises(InputError):
        parabola_chart(50)


def test_chart_norm_bound_dominates_component_sup():
    chart = parabola_chart(100)
    ih = homogenize_ideal(make_ideal(["x1 - x0^2"], 2))
    gb = groebner(ih, GRLEX, degree_cap=9)
    sc = staircase(gb, 2)
    nb = chart_norm_bound(chart, sc, 2)
    # psi for exponent (0,0,2) is t^4: sup of its second derivative is 12
    assert nb >= 12


def test_theoretical_norm_bound_too_small_is_falsified():
    # an understated norm bound makes rho too large; the engine must notice
    with pytest.raises((TheoreticalFalsificationError, InputError)):
        affine_pipeline(
            make_ideal(["x1 - x0^2"], 2), 100, delta=2,
            strategy="theoretical", norm_bound=Fraction(1, 10**12),
        )


def test_cover_requires_homogeneous():
    with pytest.raises(ValueError):
        cover_and_construct(make_ideal(["x1 - x0^2"], 2), HeightBox((4, 4)), 2)


def test_report_roundtrip_is_json_serializable():
    import json

    report = affine_pipeline(make_ideal(["x1 - x0^2"], 2), 25, delta=2)
    text = json.dumps(report.to_dict(), sort_keys=True, indent=2)
    data = json.loads(text)
    assert data["point_count"] == len(report.affine_points)
    assert data["vacuous"] is False
