"""Sparse multivariate polynomials over Q(t)."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from pfcert.exact.parampoly import ParamPoly, ParamRat, as_paramrat


def grlex_key(e: tuple) -> tuple:
    """Sort key under which ``monomials_of_degree`` is strictly increasing."""
    return (sum(e), tuple(-x for x in e))


@lru_cache(maxsize=None)
def _monomials(nvars: int, d: int) -> tuple:
    if nvars == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in _monomials(nvars - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def monomials_of_degree(nvars: int, d: int) -> list:
    """All exponent vectors of length nvars summing to d, x_0^d first."""
    if nvars < 1 or d < 0:
        raise ValueError("need nvars >= 1 and d >= 0")
    return list(_monomials(nvars, d))


def count_monomials(nvars: int, d: int) -> int:
    return comb(d + nvars - 1, nvars - 1)


class HomogeneityError(ValueError):
    def __init__(self, degrees):
        self.degrees = tuple(sorted(degrees))
        super().__init__(
            "polynomial is not homogeneous: found terms of degrees "
            + " and ".join(str(d) for d in self.degrees)
        )


class MultiPoly:
    """Polynomial in x_0..x_{nvars-1} with coefficients in Q(t).

    ``terms`` maps exponent tuples to nonzero ParamRat coefficients. With
    ``homogeneous=True`` (the default) every term must have the same total
    degree; chart restrictions and other affine work pass ``False``.
    """

    __slots__ = ("nvars", "terms", "homogeneous", "_degree")

    def __init__(self, nvars: int, terms=None, homogeneous: bool = True, degree=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                c = as_paramrat(c)
                if c:
                    if len(e) != nvars:
                        raise ValueError(f"exponent {e} does not have {nvars} entries")
                    clean[tuple(e)] = c
        self.terms = clean
        self.homogeneous = homogeneous
        if homogeneous:
            degs = {sum(e) for e in clean}
            if len(degs) > 1:
                ds = sorted(degs)
                raise HomogeneityError((ds[0], ds[1]) if len(ds) == 2 else (ds[0], ds[-1]))
            if degs:
                d = degs.pop()
                if degree is not None and degree != d:
                    raise HomogeneityError((degree, d))
                self._degree = d
            else:
                self._degree = degree
        else:
            self._degree = None

    @classmethod
    def _wrap(cls, nvars, terms, homogeneous, degree):
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj.homogeneous = homogeneous
        obj._degree = degree
        return obj

    @classmethod
    def zero(cls, nvars: int, degree=None, homogeneous: bool = True) -> "MultiPoly":
        return cls._wrap(nvars, {}, homogeneous, degree if homogeneous else None)

    @classmethod
    def constant(cls, nvars: int, c=1) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, e: tuple, c=1, homogeneous: bool = True) -> "MultiPoly":
        return cls(len(e), {tuple(e): c}, homogeneous=homogeneous)

    # ------------------------------------------------------------------
    @property
    def degree(self):
        """Declared total degree (homogeneous) or the maximum total degree."""
        if self.homogeneous:
            return self._degree
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, e) -> ParamRat:
        return self.terms.get(tuple(e), ParamRat())

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def _result(self, terms, other=None, degree=None):
        hom = self.homogeneous and (other is None or other.homogeneous)
        if hom:
            if terms:
                degree = sum(next(iter(terms)))
            elif degree is None:
                degree = self._degree
            return MultiPoly._wrap(self.nvars, terms, True, degree)
        return MultiPoly._wrap(self.nvars, terms, False, None)

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        if self.homogeneous and other.homogeneous and self.terms and other.terms and self._degree != other._degree:
            raise HomogeneityError((self._degree, other._degree))
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        deg = self._degree if self._degree is not None else other._degree
        return self._result(out, other, deg)

    def __neg__(self):
        return self._result({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "MultiPoly":
        c = as_paramrat(c)
        if not c:
            return self._result({})
        return self._result({e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly, ParamRat)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                v = out.get(e)
                out[e] = p if v is None else v + p
        out = {e: c for e, c in out.items() if c}
        deg = None
        if self.homogeneous and other.homogeneous and self._degree is not None and other._degree is not None:
            deg = self._degree + other._degree
        return self._result(out, other, deg)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly, ParamRat)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = MultiPoly.constant(self.nvars, 1)
        if not self.homogeneous:
            out = out.as_affine()
        for _ in range(k):
            out = out * self
        return out

    def mul_monomial(self, e, c=None) -> "MultiPoly":
        out = {}
        for e1, c1 in self.terms.items():
            out[tuple(a + b for a, b in zip(e1, e))] = c1 if c is None else c1 * c
        out = {k: v for k, v in out.items() if v}
        deg = None if self._degree is None else self._degree + sum(e)
        return self._result(out, None, deg)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # calculus ---------------------------------------------------------
    def diff(self, i: int) -> "MultiPoly":
        """Partial derivative in x_i."""
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = list(e)
                ne[i] = k - 1
                out[tuple(ne)] = c * k
        deg = None if self._degree is None else max(self._degree - 1, 0)
        return self._result(out, None, deg)

    def diff_t(self) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            dc = c.derivative()
            if dc:
                out[e] = dc
        return self._result(out)

    def depends_on_t(self) -> bool:
        return any(not c.is_constant() for c in self.terms.values())

    def map_coefficients(self, fn) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            v = as_paramrat(fn(c))
            if v:
                out[e] = v
        return self._result(out)

    def restrict_chart(self, j: int) -> "MultiPoly":
        """Set x_j = 1; returns an affine polynomial in the remaining variables."""
        out = {}
        for e, c in self.terms.items():
            ne = e[:j] + e[j + 1:]
            v = out.get(ne)
            out[ne] = c if v is None else v + c
        out = {e: c for e, c in out.items() if c}
        return MultiPoly._wrap(self.nvars - 1, out, False, None)

    def as_affine(self) -> "MultiPoly":
        return MultiPoly._wrap(self.nvars, dict(self.terms), False, None)

    def evaluate(self, point, t=None):
        """Numeric/exact evaluation at x = point and parameter t."""
        acc = 0
        for e, c in self.terms.items():
            v = c(t) if t is not None else c.constant_value()
            for xi, k in zip(point, e):
                if k:
                    v = v * xi ** k
            acc = acc + v
        return acc

    # printing ---------------------------------------------------------
    def to_string(self, variables=None, parameter: str = "t") -> str:
        if variables is None:
            variables = [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(variables, e) if k
            )
            parts.append(_format_term(c, mon, parameter, first=not parts))
        return "".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"MultiPoly({self.to_string()!r})"


def _format_term(c: ParamRat, mon: str, parameter: str, first: bool) -> str:
    if c.is_constant():
        v = c.constant_value()
        neg = v < 0
        a = -v if neg else v
        if mon:
            body = mon if a == 1 else f"{a}*{mon}"
        else:
            body = str(a)
    else:
        num = c.num
        terms = [k for k, x in enumerate(num.coeffs) if x]
        if c.is_poly() and len(terms) == 1:
            lead = num.coeffs[terms[0]]
            neg = lead < 0
            body_c = (-c if neg else c).to_string(parameter)
        else:
            neg = False
            body_c = f"({c.to_string(parameter)})"
        body = f"{body_c}*{mon}" if mon else body_c
    if first:
        return "-" + body if neg else body
    return (" - " if neg else " + ") + body
