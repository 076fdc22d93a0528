"""Univariate polynomials and rational functions in the deformation parameter t.

Both classes are immutable values. Internally a polynomial is an integer
coefficient list plus one positive integer denominator, which keeps the hot
arithmetic on machine-friendly Python ints; the public ``coeffs`` view hands
back Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from pfcert.exact._backend import kernel as K

_strip = K.strip


def _int_normalize(ints, den):
    """Reduce an (integer list, positive int) pair to lowest terms."""
    if not ints:
        return (), 1
    if den < 0:
        ints = [-x for x in ints]
        den = -den
    if den != 1:
        g = gcd(K.content(ints), den)
        if g != 1:
            ints = [x // g for x in ints]
            den //= g
    return tuple(ints), den


def _from_rationals(coeffs):
    fr = [c if isinstance(c, Fraction) else Fraction(c) for c in coeffs]
    den = 1
    for c in fr:
        d = c.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    ints = [c.numerator * (den // c.denominator) for c in fr]
    return _int_normalize(_strip(ints), den)


def _fmt_coeff_term(c: Fraction, power: int, var: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    a = -c if c < 0 else c
    if power == 0:
        body = str(a)
    else:
        mon = var if power == 1 else f"{var}^{power}"
        body = mon if a == 1 else f"{a}*{mon}"
    if first:
        return body if sign == "+" else "-" + body
    return f" {sign} {body}"


class ParamPoly:
    """Dense polynomial in t with rational coefficients.

    ``ParamPoly([c0, c1, c2])`` is c0 + c1*t + c2*t^2.
    """

    __slots__ = ("_c", "_d", "_hash")

    def __init__(self, coeffs=()):
        self._c, self._d = _from_rationals(coeffs)
        self._hash = None

    @classmethod
    def _raw(cls, ints, den=1):
        obj = object.__new__(cls)
        obj._c, obj._d = _int_normalize(_strip(list(ints)), den)
        obj._hash = None
        return obj

    @classmethod
    def _trusted(cls, ints: tuple, den: int):
        obj = object.__new__(cls)
        obj._c, obj._d = ints, den
        obj._hash = None
        return obj

    @classmethod
    def t(cls) -> "ParamPoly":
        return cls._trusted((0, 1), 1)

    @classmethod
    def monomial(cls, k: int, c=1) -> "ParamPoly":
        return cls([0] * k + [c])

    # ------------------------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        d = self._d
        return tuple(Fraction(x, d) for x in self._c)

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    @property
    def lc(self) -> Fraction:
        return Fraction(self._c[-1], self._d) if self._c else Fraction(0)

    def valuation(self) -> int:
        for i, x in enumerate(self._c):
            if x:
                return i
        return -1

    # arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return ParamPoly._raw(K.add_scaled(list(self._c), 1, list(other._c), 1), d1)
        g = gcd(d1, d2)
        return ParamPoly._raw(
            K.add_scaled(list(self._c), d2 // g, list(other._c), d1 // g), d1 // g * d2
        )

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly._trusted(tuple(-x for x in self._c), self._d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return ParamPoly._raw([x * other.numerator for x in self._c], self._d * other.denominator)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return ParamPoly._raw(K.mul(list(self._c), list(other._c)), self._d * other._d)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out = ParamPoly([1])
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r, s = K.pseudo_divmod(list(self._c), list(other._c))
        # s*self*d1 = q*B + r with B = other*d2  =>  self = q*d2/(s*d1) * other + r/(s*d1)
        return (
            ParamPoly._raw(q, s * self._d) * other._d,
            ParamPoly._raw(r, s * self._d),
        )

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "ParamPoly") -> "ParamPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def __eq__(self, other):
        if isinstance(other, ParamPoly):
            return self._c == other._c and self._d == other._d
        if isinstance(other, (int, Fraction)):
            return self == ParamPoly([other])
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._c, self._d))
        return self._hash

    def __bool__(self):
        return bool(self._c)

    # calculus and evaluation ------------------------------------------
    def derivative(self) -> "ParamPoly":
        return ParamPoly._raw(K.derivative(list(self._c)), self._d)

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            x = Fraction(x)
            acc = Fraction(0)
            for c in reversed(self._c):
                acc = acc * x + c
            return acc / self._d
        acc = 0
        for c in reversed(self._c):
            acc = acc * x + c
        return acc / self._d

    def shift(self, a) -> "ParamPoly":
        """p(t + a)."""
        a = Fraction(a)
        out = ParamPoly()
        lin = ParamPoly([a, 1])
        for c in reversed(self.coeffs):
            out = out * lin + c
        return out

    def content_primitive(self):
        """(c, p) with self = c*p, p primitive in Z[t] with positive lc."""
        if not self._c:
            return Fraction(0), ParamPoly()
        prim = K.primitive(list(self._c))
        c = Fraction(self._c[-1], prim[-1] * self._d)
        return c, ParamPoly._trusted(tuple(prim), 1)

    def int_coeffs(self) -> tuple:
        """Integer numerator coefficients (valid when the denominator is 1)."""
        return self._c

    # printing ---------------------------------------------------------
    def to_string(self, var: str = "t") -> str:
        if not self._c:
            return "0"
        parts = []
        cs = self.coeffs
        for k in range(len(cs) - 1, -1, -1):
            if cs[k]:
                parts.append(_fmt_coeff_term(cs[k], k, var, not parts))
        return "".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"ParamPoly({self.to_string()!r})"


def parampoly_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """Primitive integer gcd with positive leading coefficient; gcd(0, 0) = 0."""
    if a.is_zero() and b.is_zero():
        return ParamPoly()
    return ParamPoly._trusted(tuple(K.gcd_poly(list(a._c), list(b._c))), 1)


class ParamRat:
    """Element of Q(t) kept as num/den in lowest terms.

    The denominator is a primitive integer polynomial with positive leading
    coefficient, so two equal functions have identical stored data.
    """

    __slots__ = ("_n", "_nd", "_dn", "_hash")

    def __init__(self, num=0, den=1):
        if isinstance(num, ParamRat) or isinstance(den, ParamRat):
            val = _as_rat(num) / _as_rat(den)
            self._n, self._nd, self._dn, self._hash = val._n, val._nd, val._dn, None
            return
        num = num if isinstance(num, ParamPoly) else ParamPoly([num])
        den = den if isinstance(den, ParamPoly) else ParamPoly([den])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator in ParamRat")
        # num/den = (Nn * dd) / (Nd * nd)
        self._set(K.scale(list(num._c), den._d), list(den._c), num._d)
        self._hash = None

    def _set(self, N, D, nd):
        """Store N / (nd * D) canonically; N, D integer lists, nd positive int."""
        if not N:
            self._n, self._nd, self._dn = (), 1, (1,)
            return
        if len(D) > 1:
            g = K.gcd_poly(N, D)
            if len(g) > 1:
                N = K.divides_exact(N, g)
                D = K.divides_exact(D, g)
        c = K.content(D)
        if D[-1] < 0:
            c = -c
        if c != 1:
            D = [x // c for x in D]
            nd = nd * c
        self._n, self._nd = _int_normalize(N, nd)
        self._dn = tuple(D)

    @classmethod
    def _make(cls, N, D, nd):
        obj = object.__new__(cls)
        obj._set(N, D, nd)
        obj._hash = None
        return obj

    @classmethod
    def _trusted(cls, n, nd, dn):
        obj = object.__new__(cls)
        obj._n, obj._nd, obj._dn, obj._hash = n, nd, dn, None
        return obj

    @classmethod
    def from_poly(cls, p: ParamPoly) -> "ParamRat":
        return cls._trusted(p._c, p._d, (1,))

    @classmethod
    def t(cls) -> "ParamRat":
        return cls._trusted((0, 1), 1, (1,))

    # views ------------------------------------------------------------
    @property
    def num(self) -> ParamPoly:
        return ParamPoly._trusted(self._n, self._nd)

    @property
    def den(self) -> ParamPoly:
        return ParamPoly._trusted(self._dn, 1)

    def is_zero(self) -> bool:
        return not self._n

    def is_poly(self) -> bool:
        return self._dn == (1,)

    def is_constant(self) -> bool:
        return self._dn == (1,) and len(self._n) <= 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Fraction(self._n[0], self._nd) if self._n else Fraction(0)

    def __bool__(self):
        return bool(self._n)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._n:
            return self
        if not self._n:
            return other
        n1, d1, D1 = self._n, self._nd, self._dn
        n2, d2, D2 = other._n, other._nd, other._dn
        g = gcd(d1, d2)
        m1, m2 = d2 // g, d1 // g
        nd = d1 * m1
        if D1 == D2:
            N = K.add_scaled(list(n1), m1, list(n2), m2)
            if D1 == (1,):
                return ParamRat._trusted(*_poly_pair(N, nd))
            return ParamRat._make(N, list(D1), nd)
        if D2 == (1,):
            N = K.add_scaled(list(n1), m1, K.mul(list(n2), list(D1)), m2)
            return ParamRat._make(N, list(D1), nd)
        if D1 == (1,):
            N = K.add_scaled(K.mul(list(n1), list(D2)), m1, list(n2), m2)
            return ParamRat._make(N, list(D2), nd)
        gg = K.gcd_poly(list(D1), list(D2))
        if len(gg) > 1:
            E1 = K.divides_exact(list(D1), gg)
            E2 = K.divides_exact(list(D2), gg)
        else:
            E1, E2 = list(D1), list(D2)
        N = K.add_scaled(K.mul(list(n1), E2), m1, K.mul(list(n2), E1), m2)
        return ParamRat._make(N, K.mul(K.mul(E1, E2), gg), nd)

    __radd__ = __add__

    def __neg__(self):
        return ParamRat._trusted(tuple(-x for x in self._n), self._nd, self._dn)

    def __sub__(self, other):
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return ParamRat()
            other = Fraction(other)
            n, nd = _int_normalize([x * other.numerator for x in self._n], self._nd * other.denominator)
            return ParamRat._trusted(n, nd, self._dn)
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        if not self._n or not other._n:
            return ParamRat()
        N1, D1 = list(self._n), list(self._dn)
        N2, D2 = list(other._n), list(other._dn)
        if len(D2) > 1:
            g = K.gcd_poly(N1, D2)
            if len(g) > 1:
                N1, D2 = K.divides_exact(N1, g), K.divides_exact(D2, g)
        if len(D1) > 1:
            g = K.gcd_poly(N2, D1)
            if len(g) > 1:
                N2, D1 = K.divides_exact(N2, g), K.divides_exact(D1, g)
        N = K.mul(N1, N2)
        D = K.mul(D1, D2)
        nd = self._nd * other._nd
        c = K.content(D)
        if D[-1] < 0:
            c = -c
        if c != 1:
            D = [x // c for x in D]
            nd *= c
        n, nd = _int_normalize(N, nd)
        return ParamRat._trusted(n, nd, tuple(D))

    __rmul__ = __mul__

    def inverse(self) -> "ParamRat":
        if not self._n:
            raise ZeroDivisionError("inverse of zero ParamRat")
        return ParamRat._make(K.scale(list(self._dn), self._nd), list(self._n), 1)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        other = _coerce_rat(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce_rat(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = ParamRat(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, ParamRat):
            return self._n == other._n and self._nd == other._nd and self._dn == other._dn
        o = _coerce_rat(other)
        if o is NotImplemented:
            return NotImplemented
        return self == o

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, self._nd, self._dn))
        return self._hash

    # calculus ---------------------------------------------------------
    def derivative(self) -> "ParamRat":
        N, D = list(self._n), list(self._dn)
        if D == [1]:
            return ParamRat._trusted(*_poly_pair(K.derivative(N), self._nd))
        num = K.add_scaled(K.mul(K.derivative(N), D), 1, K.mul(N, K.derivative(D)), -1)
        return ParamRat._make(num, K.mul(D, D), self._nd)

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def shift(self, a) -> "ParamRat":
        """r(t + a)."""
        return ParamRat(self.num.shift(a), self.den.shift(a))

    def compose_inverse(self):
        """(p, q, e) describing r(1/s) = s^e * p(s)/q(s) with p(0), q(0) != 0."""
        num, den = self.num, self.den
        if num.is_zero():
            return ParamPoly(), ParamPoly([1]), 0
        pn = ParamPoly(tuple(reversed(num.coeffs)))
        pd = ParamPoly(tuple(reversed(den.coeffs)))
        return pn, pd, den.degree - num.degree

    # printing ---------------------------------------------------------
    def to_string(self, var: str = "t") -> str:
        num = self.num.to_string(var)
        if self._dn == (1,):
            return num
        den = self.den.to_string(var)
        if not _is_atom(num):
            num = f"({num})"
        if not _is_atom(den):
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"ParamRat({self.to_string()!r})"


def _is_atom(text: str) -> bool:
    # a bare number, variable or power needs no parentheses
    return not any(ch in text[1:] for ch in " +-*/") and not text.startswith("-")


def _poly_pair(N, nd):
    n, nd = _int_normalize(_strip(N), nd)
    return n, nd, (1,)


def _coerce_rat(x):
    if isinstance(x, ParamRat):
        return x
    if isinstance(x, (int, Fraction)):
        if not x:
            return ParamRat._trusted((), 1, (1,))
        x = Fraction(x)
        return ParamRat._trusted((x.numerator,), x.denominator, (1,))
    if isinstance(x, ParamPoly):
        return ParamRat.from_poly(x)
    return NotImplemented


def _as_rat(x) -> ParamRat:
    r = _coerce_rat(x)
    if r is NotImplemented:
        raise TypeError(f"cannot interpret {x!r} as an element of Q(t)")
    return r


as_paramrat = _as_rat

ZERO = ParamRat()
ONE = ParamRat(1)
