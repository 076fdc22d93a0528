"""Pole-order reduction of rational forms P*Omega/f^k with exactness witnesses.

Omega = sum_i (-1)^i x_i dx_0..^dx_i..dx_n. One reduction step writes
P = P_rem + sum_i A_i df/dx_i with P_rem in a fixed monomial complement of
the Jacobian ideal and uses

    d( eta ) = P Omega/f^k - P_rem Omega/f^k - (sum_i dA_i/dx_i)/(k-1) Omega/f^(k-1)

with eta = 1/(k-1) * sum_{i<j} (x_i A_j - x_j A_i) (-1)^(i+j) dx_^i^j / f^(k-1),
where dx_^i^j is the wedge of all dx_l with l not in {i, j}. The collected
eta's form the certificate of an inhomogeneous Picard-Fuchs equation, which
:func:`verify_certificate` checks by an exterior derivative in an affine chart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from pfcert.exact import (
    MultiPoly,
    ParamRat,
    SparseEliminator,
    monomials_of_degree,
    parse_polynomial,
    solve_exact,
    ExactMatrix,
    rank_exact,
)
from pfcert.odes import D_BASIS, DiffOperator


class FamilyError(ValueError):
    pass


class NotSmoothError(ValueError):
    pass


class ReductionError(ArithmeticError):
    pass


class OrderBoundExceeded(RuntimeError):
    def __init__(self, max_order: int, rank: int):
        self.max_order = max_order
        self.rank = rank
        super().__init__(f"order bound exceeded: no relation up to order {max_order} (rank {rank})")


@dataclass(frozen=True)
class FamilySpec:
    """Hypersurface family f(x; t) = 0 in projective n-space."""

    name: str
    n: int
    variables: tuple
    parameter: str
    f: MultiPoly
    constant: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(self.variables) != self.n + 1:
            raise FamilyError(f"expected {self.n + 1} variables, got {len(self.variables)}")
        if self.f.nvars != self.n + 1 or not self.f.homogeneous:
            raise FamilyError("f must be a homogeneous polynomial in the listed variables")
        if self.f.is_zero() or self.f.degree is None or self.f.degree < 2:
            raise FamilyError("f must have degree at least 2")
        if not self.constant and not self.f.depends_on_t():
            raise FamilyError(f"f does not depend on {self.parameter}; mark the family constant")

    @classmethod
    def from_text(cls, name, n, variables, parameter, polynomial, constant=False) -> "FamilySpec":
        f = parse_polynomial(polynomial, variables, parameter)
        return cls(name, n, tuple(variables), parameter, f, constant)

    @property
    def m(self) -> int:
        return self.f.degree

    def numerator_degree(self, k: int) -> int:
        return k * self.m - (self.n + 1)


@dataclass(frozen=True)
class PoleForm:
    """P * Omega / f^k."""

    P: MultiPoly
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("pole order must be positive")

    def check(self, spec: FamilySpec):
        want = spec.numerator_degree(self.k)
        if self.P.terms and self.P.degree != want:
            raise ValueError(f"numerator has degree {self.P.degree}, pole order {self.k} needs {want}")
        return self

    def __add__(self, other):
        if self.k != other.k:
            raise ValueError("pole orders differ")
        return PoleForm(self.P + other.P, self.k)

    def scale(self, c) -> "PoleForm":
        return PoleForm(self.P.scale(c), self.k)


def base_form(spec: FamilySpec) -> PoleForm:
    """Omega/f when deg f = n+1; otherwise the lowest pole order whose
    numerator degree is non-negative, with numerator x_0^d."""
    if spec.numerator_degree(1) == 0:
        return PoleForm(MultiPoly.constant(spec.n + 1, 1), 1)
    k = 1
    while spec.numerator_degree(k) < 0:
        k += 1
    d = spec.numerator_degree(k)
    return PoleForm(MultiPoly.monomial((d,) + (0,) * spec.n), k)


omega = base_form


# ----------------------------------------------------------------------------


class _Level:
    """Multiplication map (A_0..A_n) -> sum A_i df/dx_i into degree D."""

    def __init__(self, partials, nvars: int, D: int):
        self.D = D
        self.monomials = monomials_of_degree(nvars, D)
        self.index = {e: r for r, e in enumerate(self.monomials)}
        dm = D - partials[0].degree if partials[0].degree is not None else -1
        self.mu = monomials_of_degree(nvars, dm) if dm >= 0 else []
        columns = []
        for p in partials:
            for mu in self.mu:
                col = {}
                for e, c in p.terms.items():
                    col[self.index[tuple(a + b for a, b in zip(e, mu))]] = c
                columns.append(col)
        self.elim = SparseEliminator(len(self.monomials), columns)
        self.complement = [self.monomials[r] for r in self.elim.free_rows]

    @property
    def dim(self) -> int:
        return len(self.complement)


class JacobianData:
    """Partials of f and, per degree, the ideal-membership eliminator."""

    def __init__(self, spec: FamilySpec):
        self.spec = spec
        self.nvars = spec.n + 1
        self.partials = [spec.f.diff(i) for i in range(self.nvars)]
        self.df_dt = spec.f.diff_t()
        self._levels = {}

    def level(self, D: int) -> _Level:
        lv = self._levels.get(D)
        if lv is None:
            lv = _Level(self.partials, self.nvars, D)
            self._levels[D] = lv
        return lv

    def complement_basis(self, D: int) -> list:
        return list(self.level(D).complement)

    def level_for_order(self, k: int) -> _Level:
        return self.level(self.spec.numerator_degree(k))

    @property
    def max_pole_order(self) -> int:
        """Pole orders above this have an empty complement (smooth case)."""
        return self.spec.n

    def dimension(self) -> int:
        return sum(self.level_for_order(k).dim for k in range(1, self.max_pole_order + 1))

    def membership(self, P: MultiPoly, D: int):
        """P = P_rem + sum A_i df/dx_i; returns (coords, P_rem, A)."""
        lv = self.level(D)
        rhs = [ParamRat()] * len(lv.monomials)
        for e, c in P.terms.items():
            rhs[lv.index[e]] = c
        x, residual = lv.elim.solve(rhs)
        coords = [residual.get(r, ParamRat()) for r in lv.elim.free_rows]
        rem_terms = {lv.monomials[r]: c for r, c in residual.items()}
        P_rem = MultiPoly(self.nvars, rem_terms, degree=D)
        A = []
        nmu = len(lv.mu)
        for i in range(self.nvars):
            terms = {}
            for j, mu in enumerate(lv.mu):
                v = x[i * nmu + j]
                if v:
                    terms[mu] = v
            A.append(MultiPoly(self.nvars, terms, degree=max(D - self.spec.m + 1, 0)))
        return coords, P_rem, tuple(A)


def jacobian_ideal_data(spec: FamilySpec) -> JacobianData:
    return JacobianData(spec)


def check_generic_smooth(spec: FamilySpec, jd: JacobianData = None) -> bool:
    """The Jacobian ideal fills the degree (n+1)(m-2)+1 piece over Q(t)."""
    jd = jd or JacobianData(spec)
    D = (spec.n + 1) * (spec.m - 2) + 1
    return jd.level(D).dim == 0


def gm_derivative(pf: PoleForm, spec: FamilySpec) -> PoleForm:
    """d/dt (P Omega/f^k) = (f dP/dt - k P df/dt) Omega/f^(k+1)."""
    f = spec.f
    num = f * pf.P.diff_t() - (pf.P * f.diff_t()).scale(pf.k)
    if num.is_zero():
        num = MultiPoly.zero(spec.n + 1, spec.numerator_degree(pf.k + 1))
    return PoleForm(num, pf.k + 1)


# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class CertTerm:
    """One summand scalar * sum_{i<j} (x_i A_j - x_j A_i) Omega_ij / f^(k-1)."""

    k: int
    A: tuple
    scalar: ParamRat

    def scaled(self, c) -> "CertTerm":
        return CertTerm(self.k, self.A, self.scalar * c)


@dataclass(frozen=True)
class Certificate:
    terms: tuple = ()

    def __add__(self, other):
        return Certificate(self.terms + other.terms)

    def scale(self, c) -> "Certificate":
        c = ParamRat(c) if not isinstance(c, ParamRat) else c
        if c.is_zero():
            return Certificate()
        return Certificate(tuple(t.scaled(c) for t in self.terms))

    def perturbed(self, index: int = 0, delta=1) -> "Certificate":
        """Copy with one scalar shifted by delta (used to test the verifier)."""
        ts = list(self.terms)
        t = ts[index]
        ts[index] = CertTerm(t.k, t.A, t.scalar + delta)
        return Certificate(tuple(ts))

    def __len__(self):
        return len(self.terms)


@dataclass
class ReducedClass:
    """Coordinates in the complement basis, per pole order."""

    levels: dict = field(default_factory=dict)

    def vector(self, max_k: int) -> list:
        out = []
        for k in range(1, max_k + 1):
            out.extend(self.levels[k])
        return out

    def is_zero(self) -> bool:
        return all(not c for v in self.levels.values() for c in v)


def reduce_once(pf: PoleForm, jd: JacobianData):
    """One step at pole order k >= 2: (remainder, reduced form, certificate term)."""
    k = pf.k
    if k < 2:
        raise ValueError("reduce_once needs pole order at least 2")
    D = jd.spec.numerator_degree(k)
    coords, P_rem, A = jd.membership(pf.P, D)
    lower = jd.spec.numerator_degree(k - 1)
    red = MultiPoly.zero(jd.nvars, lower)
    for i, a in enumerate(A):
        if a:
            red = red + a.diff(i)
    scalar = ParamRat(Fraction(1, k - 1))
    red = red.scale(scalar)
    if red.is_zero():
        red = MultiPoly.zero(jd.nvars, lower)
    return PoleForm(P_rem, k), PoleForm(red, k - 1), CertTerm(k, A, scalar), coords


def reduce_full(pf: PoleForm, jd: JacobianData):
    """Reduce to pole order 1; returns (ReducedClass, Certificate)."""
    levels = {}
    terms = []
    cur = pf
    while cur.k >= 2:
        if cur.P.is_zero():
            levels[cur.k] = [ParamRat()] * jd.level_for_order(cur.k).dim
            cur = PoleForm(MultiPoly.zero(jd.nvars, jd.spec.numerator_degree(cur.k - 1)), cur.k - 1)
            continue
        _, red, term, coords = reduce_once(cur, jd)
        levels[cur.k] = coords
        if any(a for a in term.A):
            terms.append(term)
        cur = red
    if cur.P.is_zero():
        levels[1] = [ParamRat()] * jd.level_for_order(1).dim
    else:
        coords, P_rem, _ = jd.membership(cur.P, jd.spec.numerator_degree(1))
        levels[1] = coords
    for k in range(1, jd.max_pole_order + 1):
        levels.setdefault(k, [ParamRat()] * jd.level_for_order(k).dim)
    for k in list(levels):
        if k > jd.max_pole_order and any(levels[k]):
            raise ReductionError(f"unexpected reduction failure at pole order {k}")
    return ReducedClass(levels), Certificate(tuple(terms))


@dataclass
class PicardFuchsResult:
    operator: DiffOperator
    certificate: Certificate
    order: int
    dimension: int
    classes: list


def picard_fuchs(spec: FamilySpec, max_order: int = None, jd: JacobianData = None, start: PoleForm = None):
    """Minimal-order D with D(omega) = d(beta); returns (operator, certificate).

    ``start`` defaults to Omega/f (or :func:`base_form` when deg f != n+1).
    """
    res = picard_fuchs_full(spec, max_order, jd, start)
    return res.operator, res.certificate


def picard_fuchs_full(spec: FamilySpec, max_order: int = None, jd: JacobianData = None, start: PoleForm = None) -> PicardFuchsResult:
    jd = jd or JacobianData(spec)
    if not check_generic_smooth(spec, jd):
        raise NotSmoothError(f"family {spec.name!r} is not generically smooth")
    K = jd.max_pole_order
    dim = jd.dimension()
    if max_order is None:
        max_order = dim
    form = (start or base_form(spec)).check(spec)
    classes, certs, vecs = [], [], []
    cls, cert = reduce_full(form, jd)
    classes.append(cls)
    certs.append(cert)
    vecs.append(cls.vector(K))
    for r in range(1, max_order + 1):
        form = gm_derivative(form, spec)
        cls, cert = reduce_full(form, jd)
        classes.append(cls)
        certs.append(cert)
        vecs.append(cls.vector(K))
        A = ExactMatrix.from_columns(vecs[:r], len(vecs[r]))
        sol = solve_exact(A, [-x for x in vecs[r]])
        if sol is None:
            continue
        op = DiffOperator(list(sol) + [ParamRat(1)], D_BASIS)
        lam = op.normalization_factor()
        D = op.scale(lam)
        beta = Certificate()
        for j, a in enumerate(D.coeffs):
            if a:
                beta = beta + certs[j].scale(a)
        return PicardFuchsResult(D, beta, r, dim, classes)
    rank = rank_exact(ExactMatrix.from_columns(vecs, len(vecs[0])))
    raise OrderBoundExceeded(max_order, rank)


# ----------------------------------------------------------------------------
# affine charts and verification


class AffineForm:
    """Differential form sum_I N_I dy_I / f_aff^pole in a chart x_chart = 1.

    ``components`` maps sorted index tuples I (positions among the chart
    variables) to affine MultiPoly numerators over Q(t).
    """

    def __init__(self, chart: int, nvars: int, f_aff: MultiPoly, pole: int, components=None):
        self.chart = chart
        self.nvars = nvars
        self.f_aff = f_aff
        self.pole = pole
        self.components = {tuple(I): N for I, N in (components or {}).items() if not N.is_zero()}

    @property
    def degree(self):
        return len(next(iter(self.components))) if self.components else None

    def is_zero(self) -> bool:
        return not self.components

    def raised(self, pole: int) -> "AffineForm":
        if pole < self.pole:
            raise ValueError("cannot lower the pole order")
        if pole == self.pole:
            return self
        g = self.f_aff ** (pole - self.pole)
        return AffineForm(self.chart, self.nvars, self.f_aff, pole, {I: N * g for I, N in self.components.items()})

    def __add__(self, other: "AffineForm") -> "AffineForm":
        q = max(self.pole, other.pole)
        a, b = self.raised(q), other.raised(q)
        comps = dict(a.components)
        for I, N in b.components.items():
            comps[I] = comps[I] + N if I in comps else N
        return AffineForm(self.chart, self.nvars, self.f_aff, q, comps)

    def __neg__(self):
        return AffineForm(self.chart, self.nvars, self.f_aff, self.pole, {I: -N for I, N in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def d(self) -> "AffineForm":
        """Exterior derivative in the chart variables (t is a constant)."""
        q = self.pole
        df = [self.f_aff.diff(l) for l in range(self.nvars)]
        comps = {}
        for I, N in self.components.items():
            for l in range(self.nvars):
                if l in I:
                    continue
                # d/dy_l (N/f^q) = (N_l f - q N f_l)/f^(q+1)
                term = N.diff(l) * self.f_aff
                if q:
                    term = term - (N * df[l]).scale(q)
                if term.is_zero():
                    continue
                J = tuple(sorted(I + (l,)))
                sign = -1 if sum(1 for i in I if i < l) % 2 else 1
                if sign < 0:
                    term = -term
                comps[J] = comps[J] + term if J in comps else term
        return AffineForm(self.chart, self.nvars, self.f_aff, q + 1, comps)

    def to_strings(self, variables=None, parameter="t") -> dict:
        out = {}
        for I, N in sorted(self.components.items()):
            out["^".join(f"d{variables[i]}" if variables else f"dy{i}" for i in I)] = N.to_string(variables, parameter)
        return out


def _chart_pos(o: int, c: int) -> int:
    return o if o < c else o - 1


def chart_variables(spec: FamilySpec, chart: int) -> list:
    return [v for i, v in enumerate(spec.variables) if i != chart]


def certificate_to_affine(cert: Certificate, spec: FamilySpec, chart: int = None) -> AffineForm:
    """eta restricted to x_chart = 1 as an (n-1)-form."""
    c = spec.n if chart is None else chart
    if not 0 <= c <= spec.n:
        raise ValueError(f"chart index {c} out of range")
    f_aff = spec.f.restrict_chart(c)
    nv = spec.n
    full = tuple(range(nv))
    out = AffineForm(c, nv, f_aff, 0, {})
    for term in cert.terms:
        comps = {}
        Ac = term.A[c].restrict_chart(c)
        for o in range(spec.n + 1):
            if o == c:
                continue
            # pair {o, c}: (x_i A_j - x_j A_i)(-1)^(i+j) with i<j
            xo = MultiPoly.variable(spec.n + 1, o).restrict_chart(c)
            g = xo * Ac - term.A[o].restrict_chart(c)
            if o > c:
                g = -g
            if (o + c) % 2:
                g = -g
            g = g.scale(term.scalar)
            if g.is_zero():
                continue
            p = _chart_pos(o, c)
            comps[tuple(i for i in full if i != p)] = g
        out = out + AffineForm(c, nv, f_aff, term.k - 1, comps)
    return out


def operator_on_omega(D: DiffOperator, spec: FamilySpec, chart: int = None, start: PoleForm = None) -> AffineForm:
    """D applied to the base form, as a top-degree form in the chart."""
    c = spec.n if chart is None else chart
    D = D.to_d_form()
    f_aff = spec.f.restrict_chart(c)
    nv = spec.n
    vol = tuple(range(nv))
    out = AffineForm(c, nv, f_aff, 0, {})
    form = start or base_form(spec)
    for j, a in enumerate(D.coeffs):
        if j:
            form = gm_derivative(form, spec)
        if a.is_zero():
            continue
        N = form.P.restrict_chart(c).scale(a)
        if c % 2:
            N = -N
        out = out + AffineForm(c, nv, f_aff, form.k, {vol: N})
    return out


@dataclass
class VerificationResult:
    ok: bool
    residual: AffineForm

    def __bool__(self):
        return self.ok


def verify_certificate(D: DiffOperator, spec: FamilySpec, cert: Certificate, chart: int = None, start: PoleForm = None) -> VerificationResult:
    """Check D(omega) - d(eta) == 0 exactly in the chart x_chart = 1."""
    lhs = operator_on_omega(D, spec, chart, start)
    rhs = certificate_to_affine(cert, spec, chart).d()
    res = lhs - rhs
    return VerificationResult(res.is_zero(), res)


def verify_reduction_step(pf: PoleForm, jd: JacobianData, chart: int = None) -> VerificationResult:
    """Single-step identity P/f^k - P_rem/f^k - red/f^(k-1) = d(eta)."""
    spec = jd.spec
    c = spec.n if chart is None else chart
    rem, red, term, _ = reduce_once(pf, jd)
    f_aff = spec.f.restrict_chart(c)
    vol = tuple(range(spec.n))
    sgn = -1 if c % 2 else 1

    def top(P, k):
        return AffineForm(c, spec.n, f_aff, k, {vol: P.restrict_chart(c).scale(sgn)})

    lhs = top(pf.P, pf.k) - top(rem.P, rem.k) - top(red.P, red.k)
    res = lhs - certificate_to_affine(Certificate((term,)), spec, c).d()
    return VerificationResult(res.is_zero(), res)
