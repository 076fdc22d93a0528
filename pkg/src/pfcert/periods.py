"""Exact period series used as ground truth for computed operators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from pfcert.odes import INF, DiffOperator, PeriodSeries, apply_to_series

DEFAULT_TERMS = 30


@dataclass(frozen=True)
class DworkSpec:
    """The family sum x_i^m - t prod x_i in projective n-space, m = n+1."""

    n: int
    m: int
    N: int = DEFAULT_TERMS

    def __post_init__(self):
        if self.m != self.n + 1 or self.m < 2:
            raise ValueError(f"need m = n+1 >= 2, got n={self.n}, m={self.m}")
        if self.N < 0:
            raise ValueError("truncation must be non-negative")


def dwork_coefficient(n: int, k: int) -> int:
    """((n+1)k)! / (k!)^(n+1)."""
    return factorial((n + 1) * k) // factorial(k) ** (n + 1)


def dwork_coefficient_expanded(n: int, m: int, k: int) -> int:
    """Coefficient of prod x_i^(mk) in (sum x_i^m)^((n+1)k) by expanding the
    power one factor at a time (exponents of x_i^m only, pruned at k)."""
    nv = n + 1
    poly = {(0,) * nv: 1}
    for _ in range(nv * k):
        nxt = {}
        for e, c in poly.items():
            for i in range(nv):
                if e[i] == k:
                    continue
                f = e[:i] + (e[i] + 1,) + e[i + 1:]
                nxt[f] = nxt.get(f, 0) + c
        poly = nxt
    return poly.get((k,) * nv, 0)


def dwork_period_series(spec: DworkSpec, cross_check_upto: int = 6) -> PeriodSeries:
    """sum_k c_k z^k with the factorial formula, cross-checked against the
    direct expansion for k <= cross_check_upto."""
    coeffs = []
    for k in range(spec.N + 1):
        c = dwork_coefficient(spec.n, k)
        if k <= cross_check_upto and c != dwork_coefficient_expanded(spec.n, spec.m, k):
            raise ArithmeticError(f"multinomial mismatch at k={k}")
        coeffs.append(c)
    return PeriodSeries(0, 0, coeffs)


def pochhammer(a: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def hypergeometric_series(a, b, c, N: int = DEFAULT_TERMS) -> PeriodSeries:
    """2F1(a, b; c; t) to order N."""
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if c.denominator == 1 and c <= 0:
        raise ValueError("c must not be a non-positive integer")
    coeffs = [Fraction(1)]
    for k in range(N):
        coeffs.append(coeffs[-1] * (a + k) * (b + k) / ((c + k) * (k + 1)))
    return PeriodSeries(0, 0, coeffs)


def substitute_power(s: PeriodSeries, e: int, a=0) -> PeriodSeries:
    """Substitute z = t^e and multiply by t^a.

    For e < 0 the result is a germ at infinity in s = 1/t.
    """
    if e == 0:
        raise ValueError("exponent must be nonzero")
    a = Fraction(a)
    step = abs(e)
    coeffs = []
    for i, c in enumerate(s.coeffs):
        if i:
            coeffs.extend([Fraction(0)] * (step - 1))
        coeffs.append(c)
    if e > 0:
        loc = 0 if s.location == 0 else s.location
        return PeriodSeries(loc, s.exponent * e + a, coeffs)
    if s.location != 0:
        raise ValueError("inversion z = t^e with e < 0 needs a germ at z = 0")
    return PeriodSeries(INF, s.exponent * step - a, coeffs)


@dataclass(frozen=True)
class AnnihilationReport:
    zero: bool
    first_nonzero_index: int  # index into the applied series, -1 if zero
    first_nonzero_exponent: object  # power of the local coordinate, None if zero
    checked_terms: int
    top_exponent: Fraction  # highest power of s known exactly after applying D
    applied: PeriodSeries

    def as_dict(self) -> dict:
        return {
            "zero": self.zero,
            "first_nonzero_index": self.first_nonzero_index,
            "first_nonzero_exponent": None if self.first_nonzero_exponent is None else str(self.first_nonzero_exponent),
            "checked_terms": self.checked_terms,
            "top_exponent": str(self.top_exponent),
        }


def annihilation_check(D: DiffOperator, s: PeriodSeries) -> AnnihilationReport:
    """Exact check of D(s) = 0 on every coefficient the truncation determines."""
    out = apply_to_series(D, s)
    for i, c in enumerate(out.coeffs):
        if c:
            return AnnihilationReport(False, i, out.exponent + i, len(out.coeffs), out.top_exponent, out)
    return AnnihilationReport(True, -1, None, len(out.coeffs), out.top_exponent, out)


def scan_shift(D: DiffOperator, s: PeriodSeries, e: int, shifts):
    """First shift a (in the given order) with D(t^a s(t^e)) = 0, or None."""
    for a in shifts:
        if annihilation_check(D, substitute_power(s, e, a)).zero:
            return Fraction(a)
    return None


def dwork_shift_window(n: int) -> list:
    return [Fraction(-j) for j in range(n + 2)]
