"""Linear differential operators in d/dt over Q(t).

An operator is stored as its coefficient list a_0..a_r together with a basis
flag: ``"d"`` for sum a_j D^j with D = d/dt, ``"theta"`` for sum a_j T^j with
T = t d/dt. Local work at a point (indicial equations, Frobenius series,
applying an operator to a germ) goes through :func:`local_form`, which
rewrites the operator as ``sum_i s^(v+i) Q_i(theta_s)`` in a local
coordinate s.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from pfcert.exact import ParamPoly, ParamRat, parampoly_gcd, parse_expression
from pfcert.exact.parampoly import as_paramrat

INF = "inf"

D_BASIS = "d"
THETA_BASIS = "theta"


class IrregularSingularityError(ValueError):
    pass


# ----------------------------------------------------------------------------
# small helpers on polynomials in one variable with Fraction coefficients
# (lists, index = power); used for polynomials in theta and truncated series


def _padd(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    while out and out[-1] == 0:
        out.pop()
    return out


def _pscale(a, c):
    return [x * c for x in a] if c else []


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _peval(a, x):
    acc = Fraction(0) if isinstance(x, (int, Fraction)) else 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _ptaylor(a, x0):
    """Coefficients of a(x0 + e) as a polynomial in e."""
    out = []
    cur = list(a)
    k = 0
    while cur:
        out.append(_peval(cur, x0) / factorial(k))
        cur = [i * cur[i] for i in range(1, len(cur))]
        k += 1
    while out and out[-1] == 0:
        out.pop()
    return out


@lru_cache(maxsize=None)
def _falling(j: int) -> tuple:
    """theta (theta-1) ... (theta-j+1) as a coefficient tuple."""
    out = [Fraction(1)]
    for i in range(j):
        out = _pmul(out, [Fraction(-i), Fraction(1)])
    return tuple(out)


@lru_cache(maxsize=None)
def stirling1(n: int, k: int) -> int:
    """Signed Stirling numbers of the first kind."""
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return stirling1(n - 1, k - 1) - (n - 1) * stirling1(n - 1, k)


@lru_cache(maxsize=None)
def stirling2(n: int, k: int) -> int:
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def series_of_rat(r: ParamRat, t0, nterms: int):
    """Laurent expansion of r around t = t0 (or t = inf via s = 1/t).

    Returns ``(v, coeffs)`` with r = sum_i coeffs[i] s^(v+i), exact to
    ``nterms`` coefficients.
    """
    if r.is_zero():
        return 0, [Fraction(0)] * nterms
    if t0 == INF:
        p, q, e = r.compose_inverse()
        num, den = list(p.coeffs), list(q.coeffs)
        shift = e
    else:
        t0 = Fraction(t0)
        num = list(r.num.shift(t0).coeffs)
        den = list(r.den.shift(t0).coeffs)
        shift = 0
    vn = next(i for i, x in enumerate(num) if x)
    vd = next(i for i, x in enumerate(den) if x)
    num, den = num[vn:], den[vd:]
    out = []
    d0 = den[0]
    for k in range(nterms):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / d0)
    return vn - vd + shift, out


# ----------------------------------------------------------------------------


class DiffOperator:
    """Operator sum_j a_j X^j with X = d/dt (basis "d") or X = t d/dt ("theta")."""

    __slots__ = ("coeffs", "basis")

    def __init__(self, coeffs, basis: str = D_BASIS):
        if basis not in (D_BASIS, THETA_BASIS):
            raise ValueError(f"unknown basis {basis!r}")
        cs = [as_paramrat(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.basis = basis

    @classmethod
    def d(cls) -> "DiffOperator":
        return cls([0, 1])

    @classmethod
    def theta(cls) -> "DiffOperator":
        return cls([0, 1], THETA_BASIS)

    @classmethod
    def mult(cls, c, basis: str = D_BASIS) -> "DiffOperator":
        return cls([c], basis)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> ParamRat:
        return self.coeffs[-1] if self.coeffs else ParamRat()

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, j: int) -> ParamRat:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else ParamRat()

    # ring structure -----------------------------------------------------
    def _same_basis(self, other):
        if self.basis != other.basis:
            raise ValueError("operators are in different bases")

    def __add__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        self._same_basis(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOperator([self.coefficient(j) + other.coefficient(j) for j in range(n)], self.basis)

    def __neg__(self):
        return DiffOperator([-c for c in self.coeffs], self.basis)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiffOperator":
        """Left multiplication by a function c(t)."""
        c = as_paramrat(c)
        return DiffOperator([c * a for a in self.coeffs], self.basis)

    def _delta(self, c: ParamRat) -> ParamRat:
        """Commutator [X, c] for the basis derivation X."""
        dc = c.derivative()
        return dc if self.basis == D_BASIS else ParamRat.t() * dc

    def __mul__(self, other):
        """Composition self o other, using X o c = c X + X(c)."""
        if isinstance(other, (int, Fraction, ParamPoly, ParamRat)):
            return self.scale(other)
        if not isinstance(other, DiffOperator):
            return NotImplemented
        self._same_basis(other)
        if self.is_zero() or other.is_zero():
            return DiffOperator([], self.basis)
        out = [ParamRat() for _ in range(self.order + other.order + 1)]
        for j, b in enumerate(other.coeffs):
            # X^i o b = sum_l C(i,l) delta^l(b) X^(i-l)
            derivs = [b]
            for _ in range(self.order):
                derivs.append(self._delta(derivs[-1]))
            for i, a in enumerate(self.coeffs):
                if a.is_zero():
                    continue
                for l in range(i + 1):
                    d = derivs[l]
                    if d:
                        out[i - l + j] = out[i - l + j] + a * d * comb(i, l)
        return DiffOperator(out, self.basis)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, ParamPoly, ParamRat)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return self.basis == other.basis and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.basis, self.coeffs))

    # basis changes -------------------------------------------------------
    def to_theta_form(self) -> "DiffOperator":
        """D^j = t^-j theta(theta-1)...(theta-j+1)."""
        if self.basis == THETA_BASIS:
            return self
        t = ParamRat.t()
        out = [ParamRat() for _ in range(len(self.coeffs))]
        for j, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            aj = a / t ** j
            for i in range(j + 1):
                s = stirling1(j, i)
                if s:
                    out[i] = out[i] + aj * s
        return DiffOperator(out, THETA_BASIS)

    def from_theta_form(self) -> "DiffOperator":
        """theta^i = sum_j S(i,j) t^j D^j."""
        if self.basis == D_BASIS:
            return self
        t = ParamRat.t()
        out = [ParamRat() for _ in range(len(self.coeffs))]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(i + 1):
                s = stirling2(i, j)
                if s:
                    out[j] = out[j] + a * t ** j * s
        return DiffOperator(out, D_BASIS)

    def to_d_form(self) -> "DiffOperator":
        return self.from_theta_form()

    # normalization -------------------------------------------------------
    def normalization_factor(self) -> ParamRat:
        """lambda with lambda*self having coprime Q[t] coefficients, integer
        content 1 and positive top coefficient of the leading coefficient."""
        if self.is_zero():
            return ParamRat(1)
        den = ParamPoly([1])
        for c in self.coeffs:
            if not c.is_poly():
                g = parampoly_gcd(den, c.den)
                den = (den * c.den).exact_div(g)
        lam = ParamRat.from_poly(den)
        polys = [(c * lam).num for c in self.coeffs]
        g = ParamPoly()
        for p in polys:
            g = parampoly_gcd(g, p)
        lam = lam / ParamRat.from_poly(g)
        polys = [(c * lam).num for c in self.coeffs]
        # integer content
        den_l = 1
        for p in polys:
            for x in p.coeffs:
                den_l = den_l * x.denominator // _gcd(den_l, x.denominator)
        num_g = 0
        for p in polys:
            for x in p.coeffs:
                num_g = _gcd(num_g, (x * den_l).numerator)
        scale = Fraction(den_l, num_g)
        if polys[-1].lc < 0:
            scale = -scale
        return lam * scale

    def normalized(self) -> "DiffOperator":
        return self.scale(self.normalization_factor())

    def same_operator(self, other: "DiffOperator") -> bool:
        """Equality of normalized forms (same basis)."""
        a = self if self.basis == other.basis else self.to_d_form()
        b = other if self.basis == other.basis else other.to_d_form()
        return a.normalized() == b.normalized()

    # numeric -------------------------------------------------------------
    def coefficient_values(self, t):
        return [c(t) for c in self.coeffs]

    # text ---------------------------------------------------------------
    def to_string(self, var: str = "t") -> str:
        sym = "D" if self.basis == D_BASIS else "theta"
        parts = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c.is_zero():
                continue
            op = "" if j == 0 else (sym if j == 1 else f"{sym}^{j}")
            if c.is_constant():
                v = c.constant_value()
                neg = v < 0
                a = -v if neg else v
                body = op if (a == 1 and op) else (f"{a}*{op}" if op else str(a))
            else:
                neg = False
                body = f"({c.to_string(var)})" + (f"*{op}" if op else "")
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts) if parts else "0"

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"DiffOperator({self.to_string()!r}, basis={self.basis!r})"

    @classmethod
    def parse(cls, text: str, basis: str = THETA_BASIS, parameter: str = "t") -> "DiffOperator":
        """Parse e.g. ``(t^4-256)*theta^3 + 2*t^4*theta^2``; coefficients act
        by left multiplication."""
        sym = "D" if basis == D_BASIS else "theta"
        p = parse_expression(text, [sym], parameter)
        deg = max((e[0] for e in p.terms), default=-1)
        coeffs = [ParamRat() for _ in range(deg + 1)]
        for e, c in p.terms.items():
            coeffs[e[0]] = coeffs[e[0]] + c
        return cls(coeffs, basis)


def _gcd(a, b):
    from math import gcd

    return gcd(a, b)


# ----------------------------------------------------------------------------
# symbols and singularities


@dataclass(frozen=True)
class SymbolValue:
    m: int
    value: ParamRat


def symbol(D: DiffOperator, m: int) -> SymbolValue:
    """Image of D in the order-m graded piece: a_m if ord D = m, else 0."""
    if D.basis != D_BASIS:
        D = D.to_d_form()
    return SymbolValue(m, D.leading if D.order == m else ParamRat())


@dataclass
class SingularLocus:
    factors: list  # list of ParamPoly, squarefree, pairwise coprime
    infinity: bool
    leading: ParamPoly = None

    def contains_factor(self, p: ParamPoly) -> bool:
        return self.leading is not None and (self.leading % p).is_zero()


def rational_roots(p):
    """Rational roots with multiplicity of a polynomial given by Fraction coeffs."""
    coeffs = [Fraction(x) for x in p]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    roots = []
    if len(coeffs) <= 1:
        return roots, coeffs
    while coeffs and coeffs[0] == 0:
        roots.append(Fraction(0))
        coeffs = coeffs[1:]
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]

    def divisors(n):
        n = abs(n)
        out = set()
        i = 1
        while i * i <= n:
            if n % i == 0:
                out.add(i)
                out.add(n // i)
            i += 1
        return sorted(out)

    cands = set()
    for a in divisors(ints[0]):
        for b in divisors(ints[-1]):
            cands.add(Fraction(a, b))
            cands.add(Fraction(-a, b))
    for r in sorted(cands):
        while len(coeffs) > 1 and _peval(coeffs, r) == 0:
            roots.append(r)
            # synthetic division
            q = [Fraction(0)] * (len(coeffs) - 1)
            acc = Fraction(0)
            for i in range(len(coeffs) - 1, 0, -1):
                acc = acc * r + coeffs[i]
                q[i - 1] = acc
            coeffs = q
    return roots, coeffs


def singular_points(D: DiffOperator) -> SingularLocus:
    """Finite singular points as coprime squarefree factors of the leading
    coefficient (rational roots split off as linear factors), plus a flag for
    the point at infinity."""
    if D.basis != D_BASIS:
        D = D.to_d_form()
    N = D.normalized()
    lead = N.leading.num
    sq = lead.exact_div(parampoly_gcd(lead, lead.derivative())) if lead.degree > 0 else ParamPoly([1])
    roots, rest = rational_roots(sq.coeffs)
    factors = [ParamPoly([-r, 1]).content_primitive()[1] for r in sorted(set(roots))]
    if len(rest) > 1:
        factors.append(ParamPoly(rest).content_primitive()[1])
    infinity = D.order > 0 and not is_ordinary(D, INF)
    return SingularLocus(factors, infinity, lead)


# ----------------------------------------------------------------------------
# local theory


@dataclass
class LocalForm:
    """D = sum_{i>=0} s^(v+i) Q_i(theta_s) near ``location``.

    ``Q[i]`` is a Fraction coefficient list in theta; only i < len(Q) is
    known.
    """

    location: object
    v: int
    Q: list


def local_form(D: DiffOperator, location, nterms: int) -> LocalForm:
    """Rewrite D in theta_s at s = t - t0 (or s = 1/t at infinity)."""
    if D.is_zero():
        return LocalForm(location, 0, [[] for _ in range(nterms)])
    contrib = []  # (start power, series coeff list, theta poly)
    if location == INF:
        T = D.to_theta_form()
        for j, a in enumerate(T.coeffs):
            if a.is_zero():
                continue
            # theta_t = -theta_s
            poly = [Fraction(0)] * j + [Fraction((-1) ** j)]
            contrib.append((a, 0, tuple(poly)))
    else:
        Dd = D.to_d_form()
        for j, a in enumerate(Dd.coeffs):
            if a.is_zero():
                continue
            contrib.append((a, -j, _falling(j)))
    extra = 0
    while True:
        length = nterms + extra + 2 * len(contrib) + 2
        parts = []
        for a, shift, poly in contrib:
            v, ser = series_of_rat(a, location, length)
            parts.append((v + shift, ser, poly))
        vmin = min(p[0] for p in parts)
        top = min(p[0] + length for p in parts)  # first unknown power
        acc = {}
        for start, ser, poly in parts:
            for i, c in enumerate(ser):
                pw = start + i
                if pw >= top:
                    break
                if c:
                    acc[pw] = _padd(acc.get(pw, []), _pscale(list(poly), c))
        nz = [pw for pw, q in acc.items() if q]
        v = min(nz) if nz else vmin
        if v + nterms <= top:
            return LocalForm(location, v, [acc.get(v + i, []) for i in range(nterms)])
        extra += nterms


def is_ordinary(D: DiffOperator, location) -> bool:
    """Ordinary point: after dividing by the leading coefficient all
    coefficients (in d/ds) are analytic at s = 0."""
    r = D.order
    if location == INF:
        # rewrite in s = 1/t with d/ds coefficients via theta_s
        lf = local_form(D, INF, r + 2)
        return _ordinary_from_local(lf, r)
    Dd = D.to_d_form()
    lead = Dd.leading
    for a in Dd.coeffs:
        q = a / lead
        if q.den(Fraction(location)) == 0:
            return False
    return True


def _ordinary_from_local(lf: LocalForm, r: int) -> bool:
    # in d/ds form, theta_s^j has a factor s^j; rebuild d/ds coefficients
    # sum_i s^(v+i) Q_i(theta) = sum_j b_j(s) d^j/ds^j; convert theta^k = sum S(k,j) s^j d^j
    coeff_series = {}
    for i, q in enumerate(lf.Q):
        for k, c in enumerate(q):
            if not c:
                continue
            for j in range(k + 1):
                s2 = stirling2(k, j)
                if s2:
                    coeff_series.setdefault(j, {})
                    pw = lf.v + i + j
                    coeff_series[j][pw] = coeff_series[j].get(pw, 0) + c * s2
    lead = coeff_series.get(r, {})
    lead_v = min((p for p, c in lead.items() if c), default=None)
    if lead_v is None:
        return False
    for j, ser in coeff_series.items():
        vj = min((p for p, c in ser.items() if c), default=None)
        if vj is not None and vj < lead_v:
            return False
    return True


@dataclass
class IndicialData:
    location: object
    polynomial: list  # Fraction coefficients in rho, low to high
    exponents: list  # [(root, multiplicity)] for rational roots
    irrational_factors: list = field(default_factory=list)  # Fraction coefficient lists
    regular: bool = True

    def poly_string(self, var: str = "rho") -> str:
        return ParamPoly(self.polynomial).to_string(var)


def indicial_polynomial(D: DiffOperator, location) -> IndicialData:
    """Indicial polynomial from the lowest-order term of the local theta form,
    normalized monic."""
    lf = local_form(D, location, 1)
    q = list(lf.Q[0])
    regular = len(q) - 1 == D.order
    if q:
        lc = q[-1]
        q = [c / lc for c in q]
    roots, rest = rational_roots(q)
    mult = {}
    for r in roots:
        mult[r] = mult.get(r, 0) + 1
    irr = [rest] if len(rest) > 1 else []
    return IndicialData(location, q, sorted(mult.items()), irr, regular)


# ----------------------------------------------------------------------------
# series germs


@dataclass(frozen=True)
class PeriodSeries:
    """Truncated germ s^exponent * sum_k coeffs[k] s^k with exact coefficients.

    ``location`` is t0 (coordinate s = t - t0) or ``INF`` (s = 1/t). Terms
    are known through s^(exponent + len(coeffs) - 1).
    """

    location: object
    exponent: Fraction
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponent", Fraction(self.exponent))
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def truncation(self) -> int:
        return len(self.coeffs) - 1

    @property
    def top_exponent(self) -> Fraction:
        return self.exponent + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def normalized(self) -> "PeriodSeries":
        """Strip leading zeros, keeping the same known range."""
        k = 0
        while k < len(self.coeffs) and self.coeffs[k] == 0:
            k += 1
        if k == len(self.coeffs) or k == 0:
            return self
        return PeriodSeries(self.location, self.exponent + k, self.coeffs[k:])

    def coefficient_at(self, power):
        k = Fraction(power) - self.exponent
        if k.denominator != 1 or k < 0:
            return Fraction(0)
        k = int(k)
        if k >= len(self.coeffs):
            raise IndexError(f"s^{power} is beyond the truncation")
        return self.coeffs[k]

    def agrees_with(self, other: "PeriodSeries") -> bool:
        """Equality on the common known range."""
        if self.location != other.location:
            return False
        top = min(self.top_exponent, other.top_exponent)
        lo = min(self.exponent, other.exponent)
        if (self.exponent - other.exponent).denominator != 1:
            return self.is_zero() and other.is_zero()
        p = lo
        while p <= top:
            if self.coefficient_at(p) != other.coefficient_at(p):
                return False
            p += 1
        return True

    def __mul__(self, other: "PeriodSeries") -> "PeriodSeries":
        if self.location != other.location:
            raise ValueError("series at different points")
        n = min(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i in range(n):
            a = self.coeffs[i]
            if a:
                for j in range(n - i):
                    out[i + j] += a * other.coeffs[j]
        return PeriodSeries(self.location, self.exponent + other.exponent, out)

    def evaluate(self, s):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * s + float(c) if isinstance(s, float) else acc * s + c
        return acc * s ** self.exponent


def apply_to_series(D: DiffOperator, ser: PeriodSeries) -> PeriodSeries:
    """Exact D(ser), truncated to what the input determines.

    The result is reported relative to exponent ``ser.exponent + v`` where
    s^v is the lowest power in the local form of D, and has the same number
    of coefficients as the input.
    """
    N = len(ser.coeffs)
    if D.is_zero():
        return PeriodSeries(ser.location, ser.exponent, [0] * N)
    lf = local_form(D, ser.location, N)
    e = ser.exponent
    out = [Fraction(0)] * N
    for m in range(N):
        acc = Fraction(0)
        for i in range(m + 1):
            q = lf.Q[i]
            c = ser.coeffs[m - i]
            if q and c:
                acc += _peval(q, e + (m - i)) * c
        out[m] = acc
    return PeriodSeries(ser.location, e + lf.v, out)


# ----------------------------------------------------------------------------
# Frobenius


@dataclass
class FrobeniusSolution:
    """s^exponent * sum_l log(s)^l * sum_k components[l][k] s^k."""

    location: object
    exponent: Fraction
    components: list  # list over log power of Fraction lists
    log_depth: int

    def series(self, log_power: int = 0) -> PeriodSeries:
        return PeriodSeries(self.location, self.exponent, self.components[log_power])


def _ser_mul_poly(ser, poly, L):
    out = [Fraction(0)] * L
    for i, a in enumerate(ser[:L]):
        if a:
            for j, b in enumerate(poly):
                if i + j >= L:
                    break
                out[i + j] += a * b
    return out


def frobenius_solutions(D: DiffOperator, location, N: int) -> list:
    """Basis of formal solutions at a regular singular (or ordinary) point.

    Roots of the indicial polynomial are grouped by integer differences; for
    a root rho of multiplicity mu with M roots (counted with multiplicity)
    above it in its group, the germ y(eps) = sum c_k(eps) s^(rho+eps+k) with
    c_0 = eps^M is built from the recurrence and its eps-derivatives of
    orders M..M+mu-1 at eps = 0 give the solutions attached to rho.
    """
    ind = indicial_polynomial(D, location)
    if not ind.regular:
        raise IrregularSingularityError(f"irregular singular point at {location}")
    if ind.irrational_factors:
        raise ValueError("indicial polynomial has non-rational roots; Frobenius series not supported")
    lf = local_form(D, location, N + 1)
    Q = lf.Q
    Q0 = Q[0]
    roots = ind.exponents
    sols = []
    for rho, mu in roots:
        above = sum(m for r, m in roots if r > rho and (r - rho).denominator == 1)
        offsets = {int(r - rho): m for r, m in roots if r > rho and (r - rho).denominator == 1}
        L = 2 * above + mu
        c = [[Fraction(0)] * L for _ in range(N + 1)]
        c[0][above] = Fraction(1)
        for k in range(1, N + 1):
            num = [Fraction(0)] * L
            for i in range(1, min(k, len(Q) - 1) + 1):
                if not Q[i]:
                    continue
                poly = _ptaylor(Q[i], rho + k - i)
                term = _ser_mul_poly(c[k - i], poly, L)
                num = [a - b for a, b in zip(num, term)]
            den = _ptaylor(Q0, rho + k)
            z = offsets.get(k, 0)
            if any(num[:z]):
                raise ArithmeticError("Frobenius recurrence lost exactness")
            num = num[z:] + [Fraction(0)] * z
            den = den[z:]
            out = []
            for j in range(L):
                acc = num[j]
                for l in range(1, min(j, len(den) - 1) + 1):
                    acc -= den[l] * out[j - l]
                out.append(acc / den[0])
            c[k] = out
        for j in range(above, above + mu):
            comps = []
            for l in range(j + 1):
                fac = comb(j, l) * factorial(j - l)
                comps.append([fac * c[k][j - l] for k in range(N + 1)])
            while len(comps) > 1 and not any(comps[-1]):
                comps.pop()
            sols.append(_trim_solution(location, rho, comps))
    return sols


def _trim_solution(location, rho, comps):
    first = min((next((k for k, x in enumerate(cs) if x), len(cs)) for cs in comps))
    if first == len(comps[0]):
        return FrobeniusSolution(location, rho, comps, len(comps) - 1)
    comps = [cs[first:] for cs in comps]
    return FrobeniusSolution(location, rho + first, comps, len(comps) - 1)


def solutions_rank(sols) -> int:
    """Rank over Q of the solution coefficient vectors (independence check)."""
    vecs = []
    width = max(len(s.components) for s in sols)
    exps = sorted({s.exponent for s in sols})
    for s in sols:
        v = {}
        for l, cs in enumerate(s.components):
            for k, x in enumerate(cs):
                if x:
                    v[(l, s.exponent + k)] = x
        vecs.append(v)
    del width, exps
    rank = 0
    pivots = []
    for v in vecs:
        v = dict(v)
        for key, pv in pivots:
            if key in v:
                f = v[key] / pv[key]
                for kk, x in pv.items():
                    v[kk] = v.get(kk, 0) - f * x
                v = {kk: x for kk, x in v.items() if x}
        if v:
            key = min(v)
            pivots.append((key, v))
            rank += 1
    return rank


def op_multiply(a: DiffOperator, b: DiffOperator) -> DiffOperator:
    return a * b


def to_theta_form(D: DiffOperator) -> DiffOperator:
    return D.to_theta_form()


def from_theta_form(D: DiffOperator) -> DiffOperator:
    return D.from_theta_form()
