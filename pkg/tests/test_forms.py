from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfcert.exact import ExactMatrix, MultiPoly, rank_exact, ParamPoly, ParamRat, monomials_of_degree, parse_polynomial
from pfcert.forms import (
    Certificate,
    FamilyError,
    FamilySpec,
    JacobianData,
    NotSmoothError,
    OrderBoundExceeded,
    PoleForm,
    base_form,
    certificate_to_affine,
    check_generic_smooth,
    gm_derivative,
    picard_fuchs,
    picard_fuchs_full,
    reduce_full,
    reduce_once,
    verify_certificate,
    verify_reduction_step,
)
from pfcert.odes import DiffOperator, indicial_polynomial, singular_points

QV = ["x0", "x1", "x2", "x3"]
LV = ["x0", "x1", "x2"]

FERMAT_QUARTIC = FamilySpec.from_text("fermat quartic", 3, QV, "t", "x0^4 + x1^4 + x2^4 + x3^4", constant=True)
FERMAT_JD = JacobianData(FERMAT_QUARTIC)

small = st.integers(-3, 3)
coef = st.builds(lambda a, b: ParamRat(ParamPoly([a, b])), small, small)


@st.composite
def numerators(draw, spec, k, max_terms=3):
    mons = monomials_of_degree(spec.n + 1, spec.numerator_degree(k))
    picked = draw(st.lists(st.sampled_from(mons), min_size=1, max_size=max_terms, unique=True))
    return MultiPoly(spec.n + 1, {e: draw(coef) for e in picked}, degree=spec.numerator_degree(k))


def _legendre_classical():
    t = ParamRat.t()
    return DiffOperator([ParamRat(Fraction(-1, 4)), 1 - 2 * t, t * (1 - t)])


# family data


def test_family_validation():
    with pytest.raises(FamilyError):
        FamilySpec.from_text("bad", 2, ["x", "y"], "t", "x^3 + y^3 - t*x*y^2")
    with pytest.raises(FamilyError):
        FamilySpec.from_text("no t", 2, LV, "t", "x0^3 + x1^3 + x2^3")
    with pytest.raises(FamilyError):
        FamilySpec.from_text("linear", 1, ["x0", "x1"], "t", "x0 - t*x1")


def test_fermat_complement_contains_product():
    assert (1, 1, 1, 1) in FERMAT_JD.complement_basis(4)


def test_legendre_complement_dimension(legendre):
    jd = JacobianData(legendre)
    dims = [jd.level_for_order(k).dim for k in (1, 2)]
    # elliptic curve: one class at each pole order
    assert dims == [1, 1]
    assert jd.dimension() == 2


def test_quartic_complement_dimensions(quartic_jd):
    dims = [quartic_jd.level_for_order(k).dim for k in (1, 2, 3, 4)]
    # primitive cohomology of a quartic surface: 1 + 19 + 1
    assert dims == [1, 19, 1, 0]


def test_check_generic_smooth(legendre, quartic, quartic_jd):
    assert check_generic_smooth(quartic, quartic_jd)
    assert check_generic_smooth(legendre)
    cone = FamilySpec.from_text("cone", 3, QV, "t", "x0^4 + x1^4 + x2^4", constant=True)
    assert not check_generic_smooth(cone)
    with pytest.raises(NotSmoothError):
        picard_fuchs(cone)


# Gauss-Manin derivative


def test_gm_derivative_quartic(quartic):
    d = gm_derivative(base_form(quartic), quartic)
    assert d.k == 2
    assert d.P == MultiPoly.monomial((1, 1, 1, 1))


def test_gm_derivative_legendre(legendre):
    d = gm_derivative(base_form(legendre), legendre)
    # -df/dt with df/dt = x0*x2*(x0 - x2), differentiated by hand
    assert d.k == 2
    assert d.P == parse_polynomial("-x0^2*x2 + x0*x2^2", LV, "t")


def test_gm_derivative_constant():
    pf = PoleForm(MultiPoly.monomial((1, 1, 1, 1)), 2)
    d = gm_derivative(pf, FERMAT_QUARTIC)
    assert d.k == 3 and d.P.is_zero()


# single reduction steps


def test_reduce_once_pure_ideal_element():
    P = parse_polynomial("4*x0^3*x1", QV, "t")
    rem, red, term, _ = reduce_once(PoleForm(P, 2), FERMAT_JD)
    assert rem.P.is_zero()
    assert red.P.is_zero() and red.k == 1
    assert term.A[0] == MultiPoly.monomial((0, 1, 0, 0))
    assert all(a.is_zero() for a in term.A[1:])
    assert term.scalar == ParamRat(1)


def test_reduce_once_complement_element(quartic_jd):
    P = MultiPoly.monomial((1, 1, 1, 1))
    rem, red, term, _ = reduce_once(PoleForm(P, 2), quartic_jd)
    assert rem.P == P
    assert red.P.is_zero()
    assert all(a.is_zero() for a in term.A)


def test_reduce_once_polynomial_identity(quartic, quartic_jd):
    P = parse_polynomial("x0^8 + t*x1^3*x2^5 - x0*x1*x2*x3^5", QV, "t")
    rem, red, term, _ = reduce_once(PoleForm(P, 3), quartic_jd)
    ideal = MultiPoly.zero(4, 8)
    for i, a in enumerate(term.A):
        ideal = ideal + a * quartic.f.diff(i)
    assert rem.P + ideal == P
    assert term.scalar == ParamRat(Fraction(1, 2))


@pytest.mark.parametrize("chart", [0, 1, 2, 3])
@given(data=st.data())
def test_single_step_certificate_fermat(chart, data):
    k = data.draw(st.sampled_from([2, 3]))
    P = data.draw(numerators(FERMAT_QUARTIC, k))
    assert verify_reduction_step(PoleForm(P, k), FERMAT_JD, chart).ok


@given(data=st.data())
def test_single_step_certificate_quartic(quartic_jd, data):
    P = data.draw(numerators(quartic_jd.spec, 2))
    assert verify_reduction_step(PoleForm(P, 2), quartic_jd).ok


def test_single_step_tamper_detected(quartic_jd):
    P = parse_polynomial("x0^4 + x1*x2^3", QV, "t")
    rem, red, term, _ = reduce_once(PoleForm(P, 2), quartic_jd)
    quartic = quartic_jd.spec
    good = certificate_to_affine(Certificate((term,)), quartic).d()
    bad = certificate_to_affine(Certificate((term,)).perturbed(), quartic).d()
    assert not (good - bad).is_zero()


# full reduction


def test_reduce_full_order_one(legendre):
    cls, cert = reduce_full(base_form(legendre), JacobianData(legendre))
    assert len(cert) == 0
    assert cls.vector(2)[0] != 0


@given(data=st.data())
def test_reduce_full_linear(quartic_jd, data):
    spec = quartic_jd.spec
    k = data.draw(st.sampled_from([2, 3]))
    u = PoleForm(data.draw(numerators(spec, k)), k)
    v = PoleForm(data.draw(numerators(spec, k)), k)
    a, b = data.draw(coef), data.draw(coef)
    cu, _ = reduce_full(u, quartic_jd)
    cv, _ = reduce_full(v, quartic_jd)
    cw, cert_w = reduce_full(u.scale(a) + v.scale(b), quartic_jd)
    K = quartic_jd.max_pole_order
    lhs = cw.vector(K)
    rhs = [a * x + b * y for x, y in zip(cu.vector(K), cv.vector(K))]
    assert lhs == rhs


def test_legendre_second_derivative_coordinates(legendre, legendre_pf):
    second = legendre_pf.classes[2]
    assert len(second.vector(2)) == 2
    assert not second.is_zero()


# Picard-Fuchs operators


def test_legendre_operator(legendre_pf):
    D = legendre_pf.operator
    assert D.order == 2
    assert D.same_operator(_legendre_classical())
    t = ParamRat.t()
    # normalized: integer coefficients, content 1, positive leading integer
    assert D.coeffs == (ParamRat(1), 8 * t - 4, 4 * t * t - 4 * t)


def test_quartic_operator(quartic_pf):
    D = quartic_pf.operator
    assert D.order == 3
    lead = D.leading.num
    quart = ParamPoly([-256, 0, 0, 0, 1])
    assert (lead % quart).is_zero()


def test_constant_family_operator():
    fam = FamilySpec.from_text("fermat cubic", 2, LV, "t", "x0^3 + x1^3 + x2^3", constant=True)
    D, cert = picard_fuchs(fam)
    assert D == DiffOperator.d()
    assert len(cert) == 0
    assert verify_certificate(D, fam, cert).ok


def test_order_bound(legendre_pf, quartic_pf):
    assert legendre_pf.order == legendre_pf.dimension == 2
    # the quartic's 21 classes include 18 algebraic ones that omega never reaches
    assert quartic_pf.order == 3
    assert quartic_pf.dimension == 21


@pytest.mark.parametrize("name", ["legendre_pf", "quartic_pf"])
def test_order_is_rank_of_derivatives(request, name):
    res = request.getfixturevalue(name)
    K = max(res.classes[0].levels)
    vecs = [c.vector(min(K, 4)) for c in res.classes]
    r = res.order
    assert rank_exact(ExactMatrix.from_columns(vecs[:r], len(vecs[0]))) == r
    assert rank_exact(ExactMatrix.from_columns(vecs, len(vecs[0]))) == r


def test_order_bound_exceeded(legendre):
    with pytest.raises(OrderBoundExceeded) as info:
        picard_fuchs(legendre, max_order=1)
    assert info.value.rank == 2


def test_scale_invariance(legendre, legendre_pf):
    base = legendre_pf.operator
    # constant rescaling leaves the normalized operator untouched
    D3, _ = picard_fuchs(legendre, start=PoleForm(MultiPoly.constant(3, 3), 1))
    assert D3 == base
    # rescaling by t: same singular locus, exponents shifted by integers
    Dt, cert = picard_fuchs(legendre, start=PoleForm(MultiPoly.constant(3, ParamRat.t()), 1))
    assert verify_certificate(Dt, legendre, cert, start=PoleForm(MultiPoly.constant(3, ParamRat.t()), 1)).ok
    assert singular_points(Dt).factors == singular_points(base).factors
    for loc in (Fraction(0), Fraction(1), "inf"):
        e1 = sorted(r for r, _ in indicial_polynomial(base, loc).exponents)
        e2 = sorted(r for r, _ in indicial_polynomial(Dt, loc).exponents)
        assert len(e1) == len(e2)
        assert all((a - b).denominator == 1 for a, b in zip(e1, e2))


# verification


def test_certificate_to_affine_empty(legendre):
    assert certificate_to_affine(Certificate(), legendre).is_zero()


@pytest.mark.parametrize("chart", [0, 1, 2])
def test_verify_legendre(legendre, legendre_pf, chart):
    assert verify_certificate(legendre_pf.operator, legendre, legendre_pf.certificate, chart).ok


def test_verify_zero_operator(legendre):
    assert verify_certificate(DiffOperator([]), legendre, Certificate()).ok


def test_verify_tamper(legendre, legendre_pf):
    res = verify_certificate(legendre_pf.operator, legendre, legendre_pf.certificate.perturbed(0, 1))
    assert not res.ok
    assert not res.residual.is_zero()


def test_verify_wrong_operator(legendre, legendre_pf):
    D = legendre_pf.operator + DiffOperator.mult(1)
    assert not verify_certificate(D, legendre, legendre_pf.certificate).ok


def test_verify_quartic(quartic, quartic_pf):
    assert verify_certificate(quartic_pf.operator, quartic, quartic_pf.certificate).ok
    assert not verify_certificate(quartic_pf.operator, quartic, quartic_pf.certificate.perturbed(1, 1)).ok
