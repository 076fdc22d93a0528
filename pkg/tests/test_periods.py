from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfcert.exact import ParamRat
from pfcert.odes import INF, DiffOperator, PeriodSeries
from pfcert.periods import (
    DworkSpec,
    annihilation_check,
    dwork_coefficient,
    dwork_coefficient_expanded,
    dwork_period_series,
    dwork_shift_window,
    hypergeometric_series,
    pochhammer,
    scan_shift,
    substitute_power,
)

t = ParamRat.t()
LEGENDRE = DiffOperator([ParamRat(1), 8 * t - 4, 4 * t * t - 4 * t])
HALF = Fraction(1, 2)


def test_dwork_examples():
    assert dwork_coefficient(3, 0) == 1
    assert dwork_coefficient_expanded(3, 4, 1) == 24
    assert dwork_coefficient_expanded(3, 4, 2) == 2520
    assert dwork_coefficient(3, 2) == 2520


@pytest.mark.parametrize("n,m", [(2, 3), (3, 4)])
def test_dwork_multinomial_oracle(n, m):
    for k in range(7):
        assert dwork_coefficient(n, k) == dwork_coefficient_expanded(n, m, k)


def test_dwork_spec_validation():
    with pytest.raises(ValueError):
        DworkSpec(3, 3)
    with pytest.raises(ValueError):
        DworkSpec(0, 1)
    s = dwork_period_series(DworkSpec(3, 4, 30))
    assert len(s.coeffs) == 31 and s.coeffs[1] == 24


def test_hypergeometric_examples():
    h = hypergeometric_series(HALF, HALF, 1, 5)
    assert h.coeffs[:3] == (1, Fraction(1, 4), Fraction(9, 64))
    assert hypergeometric_series(Fraction(2, 3), 5, Fraction(1, 7), 3).coeffs[0] == 1
    with pytest.raises(ValueError):
        hypergeometric_series(1, 1, -2, 5)


@given(st.fractions(max_denominator=6), st.fractions(max_denominator=6),
       st.fractions(min_value=Fraction(1, 6), max_value=5, max_denominator=6))
def test_hypergeometric_recurrence(a, b, c):
    h = hypergeometric_series(a, b, c, 30)
    for k in range(30):
        assert h.coeffs[k + 1] * (c + k) * (k + 1) == h.coeffs[k] * (a + k) * (b + k)
        assert h.coeffs[k] == pochhammer(a, k) * pochhammer(b, k) / (pochhammer(c, k) * pochhammer(Fraction(1), k))


def test_substitute_power_examples():
    s = PeriodSeries(0, 0, [1, 2, 3])
    assert substitute_power(s, 1, 0) == s
    one = substitute_power(PeriodSeries(0, 0, [1]), -4, -1)
    assert one.location == INF and one.exponent == 1 and one.coeffs == (1,)
    sq = substitute_power(s, 2, Fraction(1, 2))
    assert sq.exponent == HALF and sq.coeffs == (1, 0, 2, 0, 3)
    with pytest.raises(ValueError):
        substitute_power(s, 0)


ints = st.lists(st.integers(-4, 4), min_size=1, max_size=6)


@given(ints, ints, st.sampled_from([-3, -2, 2, 3]))
def test_substitute_power_ring_map(a, b, e):
    n = min(len(a), len(b))
    A = PeriodSeries(0, 0, a[:n])
    B = PeriodSeries(0, 0, b[:n])
    lhs = substitute_power(A * B, e)
    rhs = substitute_power(A, e) * substitute_power(B, e)
    assert lhs.agrees_with(rhs)


def test_annihilation_examples():
    h = hypergeometric_series(HALF, HALF, 1, 30)
    rep = annihilation_check(LEGENDRE, h)
    assert rep.zero and rep.first_nonzero_index == -1
    assert annihilation_check(DiffOperator.d(), PeriodSeries(0, 0, [5])).zero
    bad = list(h.coeffs)
    bad[3] += 1
    rep = annihilation_check(LEGENDRE, PeriodSeries(0, 0, bad))
    assert not rep.zero
    # the perturbed t^3 first shows up through the t*D^2 term at t^2
    assert rep.first_nonzero_exponent == 2


def test_quartic_series_annihilated(quartic_pf):
    D = quartic_pf.operator
    s = dwork_period_series(DworkSpec(3, 4, 30))
    a = scan_shift(D, s, -4, dwork_shift_window(3))
    assert a == -1
    rep = annihilation_check(D, substitute_power(s, -4, a))
    assert rep.zero
    assert rep.checked_terms == 121


def test_quartic_other_shifts_fail(quartic_pf):
    s = dwork_period_series(DworkSpec(3, 4, 10))
    for a in (0, -2, -3, -4):
        assert not annihilation_check(quartic_pf.operator, substitute_power(s, -4, a)).zero


def test_legendre_shift_scan_at_zero(legendre_pf):
    h = hypergeometric_series(HALF, HALF, 1, 20)
    assert scan_shift(legendre_pf.operator, h, 1, [0, -1]) == 0


def test_cubic_dwork_family():
    # the Hesse pencil x^3 + y^3 + z^3 - t xyz has the same kind of period series
    from pfcert.forms import FamilySpec, picard_fuchs

    fam = FamilySpec.from_text("hesse", 2, ["x0", "x1", "x2"], "t", "x0^3 + x1^3 + x2^3 - t*x0*x1*x2")
    D, _ = picard_fuchs(fam)
    s = dwork_period_series(DworkSpec(2, 3, 30))
    a = scan_shift(D, s, -3, dwork_shift_window(2))
    assert a is not None
    assert annihilation_check(D, substitute_power(s, -3, a)).zero
