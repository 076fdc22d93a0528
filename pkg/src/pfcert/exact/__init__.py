"""Exact arithmetic over Q and Q(t): scalars, polynomials, linear algebra, parsing."""

from pfcert.exact.rational import BigRational, mk_rational
from pfcert.exact.parampoly import ParamPoly, ParamRat, parampoly_gcd
from pfcert.exact.multipoly import (
    HomogeneityError,
    MultiPoly,
    count_monomials,
    grlex_key,
    monomials_of_degree,
)
from pfcert.exact.linalg import DimensionError, ExactMatrix, SparseEliminator, rank_exact, solve_exact
from pfcert.exact.parser import ParseError, UnknownSymbolError, parse_expression, parse_polynomial

__all__ = [
    "BigRational",
    "mk_rational",
    "ParamPoly",
    "ParamRat",
    "parampoly_gcd",
    "MultiPoly",
    "HomogeneityError",
    "monomials_of_degree",
    "count_monomials",
    "grlex_key",
    "ExactMatrix",
    "SparseEliminator",
    "DimensionError",
    "solve_exact",
    "rank_exact",
    "ParseError",
    "UnknownSymbolError",
    "parse_expression",
    "parse_polynomial",
]
