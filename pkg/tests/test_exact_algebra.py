from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfcert.exact import (
    DimensionError,
    ExactMatrix,
    HomogeneityError,
    MultiPoly,
    ParamPoly,
    ParamRat,
    ParseError,
    SparseEliminator,
    UnknownSymbolError,
    grlex_key,
    mk_rational,
    monomials_of_degree,
    parampoly_gcd,
    parse_polynomial,
    solve_exact,
)

T = ParamPoly.t()
small_int = st.integers(-6, 6)
fractions = st.builds(Fraction, small_int, st.integers(1, 5))
polys = st.lists(fractions, max_size=4).map(ParamPoly)
nonzero_polys = polys.filter(lambda p: not p.is_zero())
rats = st.builds(ParamRat, polys, nonzero_polys)
nonzero_rats = rats.filter(lambda r: not r.is_zero())

VARS3 = ["x0", "x1", "x2"]


@st.composite
def multipolys(draw, nvars=3, degree=2, coeffs=rats):
    mons = monomials_of_degree(nvars, degree)
    picked = draw(st.lists(st.sampled_from(mons), max_size=4, unique=True))
    return MultiPoly(nvars, {e: draw(coeffs) for e in picked}, degree=degree)


# rationals


def test_mk_rational_examples():
    assert mk_rational(6, -4) == Fraction(-3, 2)
    z = mk_rational(0, 7)
    assert (z.numerator, z.denominator) == (0, 1)
    assert mk_rational(1, 1) == 1
    with pytest.raises(ZeroDivisionError):
        mk_rational(1, 0)


@given(small_int, st.integers(-9, 9).filter(bool))
def test_mk_rational_canonical(a, b):
    r = mk_rational(a, b)
    assert r.denominator > 0
    assert Fraction(a, b) == r


# univariate


def test_parampoly_gcd_examples():
    assert parampoly_gcd(T * T - 1, T - 1) == T - 1
    assert parampoly_gcd(T, T + 1) == ParamPoly([1])
    assert parampoly_gcd(ParamPoly(), ParamPoly()).is_zero()
    assert parampoly_gcd(2 * T + 4, ParamPoly()) == T + 2


@given(polys, polys)
def test_parampoly_gcd_divides(a, b):
    g = parampoly_gcd(a, b)
    if g.is_zero():
        assert a.is_zero() and b.is_zero()
        return
    assert (a % g).is_zero() and (b % g).is_zero()
    assert g.lc > 0


@given(rats, rats)
def test_paramrat_add_sub_roundtrip(a, b):
    assert (a + b) - b == a


@given(rats, nonzero_rats)
def test_paramrat_mul_div_roundtrip(a, b):
    assert (a * b) / b == a


@given(rats)
def test_paramrat_canonical_denominator(a):
    d = a.den
    assert d.lc > 0
    assert all(c.denominator == 1 for c in d.coeffs)
    assert parampoly_gcd(a.num, d) == ParamPoly([1]) or a.is_zero()


def test_paramrat_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        ParamRat(1, 0)


@given(polys, polys)
def test_parampoly_ring_identities(a, b):
    assert (a + b) - b == a
    assert a * b == b * a
    if not b.is_zero():
        q, r = divmod(a, b)
        assert q * b + r == a


# multivariate


@given(multipolys(), multipolys())
def test_multipoly_add_sub_roundtrip(a, b):
    assert (a + b) - b == a


@given(multipolys(), nonzero_rats)
def test_multipoly_scale_roundtrip(a, c):
    assert a.scale(c).scale(c.inverse()) == a


@given(multipolys(coeffs=polys.map(ParamRat.from_poly)))
def test_print_parse_roundtrip(p):
    if p.is_zero():
        return
    assert parse_polynomial(p.to_string(VARS3), VARS3, "t") == p


def test_parse_quartic():
    p = parse_polynomial("x0^4 + x1^4 + x2^4 + x3^4 - t*x0*x1*x2*x3", ["x0", "x1", "x2", "x3"], "t")
    assert p.degree == 4
    assert len(p) == 5
    assert p.coefficient((1, 1, 1, 1)) == -ParamRat.t()


def test_parse_legendre():
    p = parse_polynomial("x1^2*x2 - x0*(x0 - x2)*(x0 - t*x2)", VARS3, "t")
    assert p.degree == 3
    assert p.coefficient((3, 0, 0)) == ParamRat(-1)
    assert p.coefficient((1, 0, 2)) == -ParamRat.t()


def test_parse_non_homogeneous():
    with pytest.raises(HomogeneityError) as info:
        parse_polynomial("x0 + x1^2", ["x0", "x1"], "t")
    assert info.value.degrees == (1, 2)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as info:
        parse_polynomial("x0 + * x1", ["x0", "x1"], "t")
    assert info.value.column == 6
    with pytest.raises(UnknownSymbolError):
        parse_polynomial("x0 + y", ["x0", "x1"], "t")


def test_parse_rationals():
    p = parse_polynomial("3/4*x0^2 - 1/2*t*x0*x1", ["x0", "x1"], "t")
    assert p.coefficient((2, 0)) == ParamRat(Fraction(3, 4))
    assert p.coefficient((1, 1)) == ParamRat(ParamPoly([0, Fraction(-1, 2)]))


# monomials


def test_monomials_examples():
    assert len(monomials_of_degree(4, 1)) == 4
    assert monomials_of_degree(2, 2) == [(2, 0), (1, 1), (0, 2)]
    # 455 = C(15, 3), counted here by brute force
    brute = sum(1 for a in range(13) for b in range(13) for c in range(13) if a + b + c <= 12)
    assert brute == 455
    assert len(monomials_of_degree(4, 12)) == brute


@given(st.integers(1, 4), st.integers(0, 6))
def test_monomials_count_and_order(v, d):
    mons = monomials_of_degree(v, d)
    assert len(mons) == comb(d + v - 1, v - 1)
    assert all(sum(e) == d for e in mons)
    keys = [grlex_key(e) for e in mons]
    assert all(a < b for a, b in zip(keys, keys[1:]))


# linear algebra


def test_solve_exact_examples():
    t = ParamRat.t()
    x = solve_exact(ExactMatrix.identity(2), [t, t.inverse()])
    assert x == [t, t.inverse()]
    assert solve_exact(ExactMatrix([[t]]), [t * t]) == [t]
    assert solve_exact(ExactMatrix([[t, t], [1, 1]]), [1, 0]) is None
    with pytest.raises(DimensionError):
        solve_exact(ExactMatrix([[1, 0]]), [1, 2])


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_solve_exact_residual_is_zero(r, c, data):
    A = ExactMatrix([[data.draw(rats) for _ in range(c)] for _ in range(r)])
    b = [data.draw(rats) for _ in range(r)]
    x = solve_exact(A, b)
    if x is None:
        # inconsistent: b must lie outside the column span, so adding b raises the rank
        from pfcert.exact import rank_exact

        Ab = ExactMatrix([list(A.entries[i]) + [b[i]] for i in range(r)])
        assert rank_exact(Ab) == rank_exact(A) + 1
        return
    assert all((lhs - rhs).is_zero() for lhs, rhs in zip(A.apply(x), b))


def test_underdetermined_sets_free_to_zero():
    x = solve_exact(ExactMatrix([[1, 1]]), [3])
    assert x == [ParamRat(3), ParamRat(0)]


@given(st.data())
def test_sparse_eliminator_reconstructs(data):
    nrows, ncols = data.draw(st.integers(1, 4)), data.draw(st.integers(1, 4))
    cols = []
    for _ in range(ncols):
        cols.append({r: data.draw(rats) for r in range(nrows) if data.draw(st.booleans())})
    el = SparseEliminator(nrows, cols)
    rhs = [data.draw(rats) for _ in range(nrows)]
    x, residual = el.solve(rhs)
    recon = [ParamRat()] * nrows
    for j, col in enumerate(cols):
        for r, v in col.items():
            recon[r] = recon[r] + v * x[j]
    for r in range(nrows):
        assert recon[r] + residual.get(r, ParamRat()) == rhs[r]
    assert set(residual) <= set(el.free_rows)
