"""Numeric normal functions on the Legendre family y^2 = x(x-1)(x-t).

The fiber form is omega = dx/(2y), the residue of Omega/f for the
homogenized cubic f = y^2 z - x(x-z)(x-tz). With this normalization the
closed cycle around [0, t] has period pi * 2F1(1/2, 1/2; 1; t).

Integrals run along x-plane polylines. On each segment y is written as
g(u) * sqrt(u)^[start is a branch point] * sqrt(1-u)^[end is a branch point]
with g analytic and nonvanishing, and the sign of g is followed
continuously from a declared starting value.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from pfcert.odes import DiffOperator

DEFAULT_DIGITS = 30
DEFAULT_CLEARANCE = 0.1
_SAMPLES_PER_SEGMENT = 256


class AdmissibilityError(ValueError):
    pass


class GridCoverageError(ValueError):
    pass


class RankDeficientError(ValueError):
    pass


class LegendreFiber:
    """The fiber E_t, admissible when t keeps distance >= delta from 0 and 1."""

    def __init__(self, t, delta: float = DEFAULT_CLEARANCE, bound: float = 50.0):
        if delta <= 0:
            raise ValueError("clearance must be positive")
        self.t = mpmath.mpc(t)
        self.delta = delta
        if abs(self.t) < delta or abs(self.t - 1) < delta:
            raise AdmissibilityError(f"t = {t} is within {delta} of a degenerate fiber")
        if abs(self.t) > bound:
            raise AdmissibilityError(f"|t| = {abs(self.t)} exceeds the bound {bound}")

    @property
    def branch_points(self):
        return [mpmath.mpc(0), mpmath.mpc(1), self.t]

    def y2(self, x):
        return x * (x - 1) * (x - self.t)

    def is_branch_point(self, x, tol=1e-20) -> bool:
        return any(abs(x - e) < tol for e in self.branch_points)


def _seg_distance(p, q, z) -> float:
    d = q - p
    if d == 0:
        return float(abs(z - p))
    u = ((z - p) * mpmath.conj(d)).real / abs(d) ** 2
    u = min(max(u, 0), 1)
    return float(abs(p + u * d - z))


class _Segment:
    """Branch-tracked integrand of dx/(2y) on one segment."""

    def __init__(self, fiber: LegendreFiber, p, q, start_y):
        self.p, self.q = mpmath.mpc(p), mpmath.mpc(q)
        self.fiber = fiber
        self.a = fiber.is_branch_point(self.p)
        self.b = fiber.is_branch_point(self.q)
        for e in fiber.branch_points:
            if (self.a and abs(e - self.p) < 1e-20) or (self.b and abs(e - self.q) < 1e-20):
                continue
            if _seg_distance(self.p, self.q, e) < fiber.delta:
                raise AdmissibilityError(
                    f"path segment {complex(self.p)} -> {complex(self.q)} passes within "
                    f"{fiber.delta} of the branch point {complex(e)}"
                )
        self.us = [mpmath.mpf(i) / _SAMPLES_PER_SEGMENT for i in range(_SAMPLES_PER_SEGMENT + 1)]
        g0 = self._g_principal(self.us[0])
        # start_y is the value of g at u = 0 (up to the sign we are fixing)
        if abs(g0 - start_y) > abs(g0 + start_y):
            g0 = -g0
        gs = [g0]
        for u in self.us[1:]:
            g = self._g_principal(u)
            if abs(g - gs[-1]) > abs(g + gs[-1]):
                g = -g
            gs.append(g)
        self.gs = gs

    def _g_principal(self, u):
        # y^2 = prod (x - z) over branch points; the factor for a branch point
        # at the segment start is u*d, at the end -(1-u)*d
        x = self.p + u * (self.q - self.p)
        d = self.q - self.p
        val = mpmath.mpc(1)
        for z in self.fiber.branch_points:
            if self.a and abs(z - self.p) < 1e-20:
                val *= d
            elif self.b and abs(z - self.q) < 1e-20:
                val *= -d
            else:
                val *= x - z
        return mpmath.sqrt(val)

    def g(self, u):
        val = self._g_principal(u)
        i = bisect.bisect_left(self.us, u)
        i = min(max(i, 0), len(self.us) - 1)
        ref = self.gs[i]
        if i > 0 and abs(self.us[i - 1] - u) < abs(self.us[i] - u):
            ref = self.gs[i - 1]
        return val if abs(val - ref) <= abs(val + ref) else -val

    def y(self, u):
        val = self.g(u)
        if self.a:
            val *= mpmath.sqrt(u)
        if self.b:
            val *= mpmath.sqrt(1 - u)
        return val

    def integrand(self, u):
        return (self.q - self.p) / (2 * self.y(u))

    def end_g(self):
        return self.gs[-1]


@dataclass(frozen=True)
class PathIntegral:
    value: object
    error: object
    end_y: object  # y at the final vertex (0 at a branch point)
    end_g: object  # branch datum at the final vertex; starts the reversed path on the same sheet


def integrate_path(fiber: LegendreFiber, vertices, start_hint=1, digits: int = DEFAULT_DIGITS) -> PathIntegral:
    """Integrate dx/(2y) along the polyline.

    ``start_hint`` selects the starting branch: the sign of y (or of y/sqrt(u)
    at a branch point start) closest to it is used.
    """
    with mpmath.workdps(digits + 10):
        vs = [mpmath.mpc(v) for v in vertices]
        if len(vs) < 2 or all(abs(v - vs[0]) < 1e-30 for v in vs):
            return PathIntegral(mpmath.mpc(0), mpmath.mpf(0), None, None)
        for v in vs[1:-1]:
            if fiber.is_branch_point(v):
                raise AdmissibilityError("interior path vertices must avoid branch points")
        total = mpmath.mpc(0)
        err = mpmath.mpf(0)
        hint = mpmath.mpc(start_hint)
        end_y = None
        for p, q in zip(vs, vs[1:]):
            if abs(q - p) < 1e-30:
                continue
            seg = _Segment(fiber, p, q, hint)
            val, e = mpmath.quad(seg.integrand, [0, mpmath.mpf(1) / 2, 1], error=True)
            total += val
            err += e
            end_y = mpmath.mpc(0) if seg.b else seg.end_g()
            hint = seg.end_g()
        return PathIntegral(+total, +err, end_y, hint)


# ----------------------------------------------------------------------------
# chains


@dataclass(frozen=True)
class Endpoint:
    """A 2-torsion point ("0", "1", "t") or a point with fixed x on a section.

    For a section, ``x`` is the fixed x-coordinate and ``y_of_s`` gives the
    y-coordinate as a function of the cover coordinate s.
    """

    kind: str  # "torsion" or "section"
    label: str = ""
    x: object = None
    y_of_s: object = None

    def x_at(self, t):
        if self.kind == "torsion":
            return {"0": mpmath.mpc(0), "1": mpmath.mpc(1), "t": mpmath.mpc(t)}[self.label]
        return mpmath.mpc(self.x)


def torsion(label: str) -> Endpoint:
    if label not in ("0", "1", "t"):
        raise ValueError("2-torsion points are 0, 1 and t (infinity is not supported)")
    return Endpoint("torsion", label)


@dataclass(frozen=True)
class Cover:
    """Base cover t = t_of_s(s) with local inverse s_of_t near the grid."""

    name: str
    t_of_s: object
    s_of_t: object


@dataclass(frozen=True)
class ChainSpec:
    """Chain from P0 to P1 along x-plane vertices (callables of t allowed)."""

    name: str
    start: Endpoint
    end: Endpoint
    via: tuple = ()
    start_hint: object = None  # callable of t giving the starting branch hint
    cover: Cover = None

    def vertices(self, t):
        pts = [self.start.x_at(t)]
        for v in self.via:
            pts.append(mpmath.mpc(v(t) if callable(v) else v))
        pts.append(self.end.x_at(t))
        return pts

    def is_empty(self) -> bool:
        return self.start == self.end and not self.via


def chain_integral(chain: ChainSpec, t, digits: int = DEFAULT_DIGITS, delta: float = DEFAULT_CLEARANCE):
    """Integral of omega over the chain at t: returns (value, error)."""
    r = _chain_path(chain, t, digits, delta)
    return r.value, r.error


def _chain_path(chain: ChainSpec, t, digits, delta=DEFAULT_CLEARANCE) -> PathIntegral:
    if chain.is_empty():
        return PathIntegral(mpmath.mpc(0), mpmath.mpf(0), None, None)
    fiber = LegendreFiber(t, delta)
    hint = chain.start_hint(t) if chain.start_hint else 1
    r = integrate_path(fiber, chain.vertices(t), hint, digits)
    if chain.end.kind == "section":
        s = chain.cover.s_of_t(mpmath.mpc(t))
        target = chain.end.y_of_s(s)
        if min(abs(r.end_y - target), abs(r.end_y + target)) > 1e-10 * max(1, abs(target)):
            raise AdmissibilityError("section endpoint is not on the fiber")
        if abs(r.end_y - target) > abs(r.end_y + target):
            # the other starting sheet ends at the requested point
            r = PathIntegral(-r.value, r.error, -r.end_y, -r.end_g)
    return r


def reversed_chain(chain: ChainSpec) -> ChainSpec:
    """The same chain traversed backwards, starting on the sheet where the
    original ends."""
    if chain.end.kind == "section":
        cover = chain.cover

        def hint(t):
            return chain.end.y_of_s(cover.s_of_t(mpmath.mpc(t)))
    else:

        def hint(t):
            return _chain_path(chain, t, DEFAULT_DIGITS).end_g

    return ChainSpec(chain.name + " reversed", chain.end, chain.start, tuple(reversed(chain.via)), hint, chain.cover)


def period_full(t, cycle: str = "a", digits: int = DEFAULT_DIGITS, delta: float = DEFAULT_CLEARANCE):
    """Closed-cycle period of omega.

    ``"a"`` encircles [0, t] and equals pi*2F1(1/2,1/2;1;t) (principal
    branch); ``"b"`` encircles [t, 1]. Each is twice the integral between
    the two branch points, the cycle being the double cover of the segment.
    """
    fiber = LegendreFiber(t, delta)
    t = fiber.t
    with mpmath.workdps(digits + 10):
        if cycle == "a":
            verts, hint = [mpmath.mpc(0), t], t
        elif cycle == "b":
            # g(t)^2 = -t(t-1)^2 at the start; this sign gives -i*pi*2F1(1-t)
            verts, hint = [t, mpmath.mpc(1)], -1j * mpmath.sqrt(t) * (t - 1)
        else:
            raise ValueError(f"unknown cycle {cycle!r}")
        return 2 * integrate_path(fiber, verts, hint, digits).value


def period_series_value(t, digits: int = DEFAULT_DIGITS):
    with mpmath.workdps(digits):
        return mpmath.pi * mpmath.hyp2f1(0.5, 0.5, 1, t)


@dataclass(frozen=True)
class TruncatedAJ:
    """(-1)^n (2 pi i)^power * integral, with the prefactor kept symbolic."""

    sign: int
    two_pi_i_power: int
    integral: object
    error: object

    def value(self):
        return self.sign * (2j * mpmath.pi) ** self.two_pi_i_power * self.integral


def truncated_aj(chain: ChainSpec, t, p: int = 1, n: int = 0, d: int = 1, digits: int = DEFAULT_DIGITS) -> TruncatedAJ:
    val, err = chain_integral(chain, t, digits)
    return TruncatedAJ((-1) ** n, p - d, val, err)


# standard chains ------------------------------------------------------------

def _half_period_via(t):
    return mpmath.mpc(t) + 0.5j


HALF_PERIOD_CHAIN = ChainSpec("(0,0)->(1,0)", torsion("0"), torsion("1"), (_half_period_via,))
MOVING_TORSION_CHAIN = ChainSpec("(0,0)->(t,0)", torsion("0"), torsion("t"), (), lambda t: t)

SECTION_X2_COVER = Cover(
    "t = 2 - 2s^2",
    lambda s: 2 - 2 * s ** 2,
    lambda t: mpmath.sqrt((2 - t) / 2),
)
SECTION_X2_CHAIN = ChainSpec(
    "(0,0)->(2,2s)",
    torsion("0"),
    Endpoint("section", "x=2", 2, lambda s: 2 * s),
    (0.5 + 0.8j, 2.3 + 0.8j),
    None,
    SECTION_X2_COVER,
)


def closed_cycle_chain(cycle: str = "a") -> "ClosedCycle":
    return ClosedCycle(cycle)


@dataclass(frozen=True)
class ClosedCycle:
    cycle: str = "a"
    name: str = "closed"


def normal_function(chain, digits: int = DEFAULT_DIGITS):
    """nu(t) = integral of omega over the chain (or closed cycle)."""
    if isinstance(chain, ClosedCycle):
        return lambda t: period_full(t, chain.cycle, digits)
    return lambda t: chain_integral(chain, t, digits)[0]


# ----------------------------------------------------------------------------
# sampling and finite differences


@dataclass
class NormalFunctionSamples:
    coordinate: str
    grid: list
    values: list
    digits: int = DEFAULT_DIGITS
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.grid) != len(self.values):
            raise ValueError("grid and values differ in length")
        keys = [self._key(x) for x in self.grid]
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise ValueError("grid must be strictly increasing")
        for v in self.values:
            if not mpmath.isfinite(v):
                raise ValueError("non-finite sample")
        self._keys = keys

    @staticmethod
    def _key(x):
        x = mpmath.mpc(x)
        return (x.real, x.imag)

    def value_at(self, x, tol=None):
        # grid points are matched up to rounding of the stencil arithmetic
        tol = tol if tol is not None else mpmath.mpf(10) ** -12 * max(1, abs(mpmath.mpc(x)))
        k = self._key(x)
        i = bisect.bisect_left(self._keys, (k[0] - tol, -mpmath.inf))
        while i < len(self.grid):
            if abs(mpmath.mpc(self.grid[i]) - mpmath.mpc(x)) <= tol:
                return self.values[i]
            if self._keys[i][0] > k[0] + tol:
                break
            i += 1
        raise GridCoverageError(f"no sample at {complex(x)}")


def _central_weights(j: int):
    """Central difference weights on offsets -p..p, second-order accurate."""
    p = max(1, (j + 1) // 2)
    offs = list(range(-p, p + 1))
    n = len(offs)
    # solve sum_k w_k k^i = i! delta_{ij} exactly
    from math import factorial

    A = [[Fraction(o) ** i for o in offs] for i in range(n)]
    b = [Fraction(factorial(j)) if i == j else Fraction(0) for i in range(n)]
    # Gaussian elimination over Q
    M = [row + [bv] for row, bv in zip(A, b)]
    for c in range(n):
        r = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[r] = M[r], M[c]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * bb for a, bb in zip(M[r], M[c])]
    w = [M[i][n] / M[i][i] for i in range(n)]
    return dict(zip(offs, w))


def stencil_points(t0, h, order: int):
    """Grid t0 + k*h/2 needed for derivatives up to ``order`` at spacings h and h/2."""
    p = max(1, (order + 1) // 2)
    with mpmath.workdps(DEFAULT_DIGITS + 10):
        t0 = mpmath.mpc(t0)
        h = mpmath.mpf(h)
        return [t0 + k * h / 2 for k in range(-2 * p, 2 * p + 1)]


def sample(func, points, coordinate: str = "t", digits: int = DEFAULT_DIGITS, meta=None) -> NormalFunctionSamples:
    with mpmath.workdps(digits + 10):
        pts = sorted((mpmath.mpc(p) for p in points), key=NormalFunctionSamples._key)
        vals = [mpmath.mpc(func(p)) for p in pts]
    return NormalFunctionSamples(coordinate, pts, vals, digits, meta or {})


def _derivative(samples, t0, h, j):
    w = _central_weights(j)
    acc = mpmath.mpc(0)
    for k, wk in w.items():
        if wk:
            acc += mpmath.mpf(wk.numerator) / wk.denominator * samples.value_at(t0 + k * h)
    return acc / h ** j


def apply_operator_numeric(D: DiffOperator, samples: NormalFunctionSamples, t0, h):
    """D(nu)(t0) from samples at t0 + k*h/2; returns (value, error estimate).

    Each derivative uses second-order central differences at spacings h and
    h/2 combined by one Richardson step (fourth order overall); the error
    estimate is the size of that correction.
    """
    D = D.to_d_form()
    with mpmath.workdps(samples.digits + 10):
        t0 = mpmath.mpc(t0)
        h = mpmath.mpf(h)
        total = mpmath.mpc(0)
        err = mpmath.mpf(0)
        for j, a in enumerate(D.coeffs):
            if a.is_zero():
                continue
            coef = _eval_rat(a, t0)
            if j == 0:
                total += coef * samples.value_at(t0)
                continue
            d1 = _derivative(samples, t0, h, j)
            d2 = _derivative(samples, t0, h / 2, j)
            ext = d2 + (d2 - d1) / 3
            total += coef * ext
            err += abs(coef) * abs(d2 - d1) / 3
        return +total, +err


def _eval_rat(r, x):
    num = mpmath.mpc(0)
    for c in reversed(r.num.coeffs):
        num = num * x + mpmath.mpf(c.numerator) / c.denominator
    den = mpmath.mpc(0)
    for c in reversed(r.den.coeffs):
        den = den * x + mpmath.mpf(c.numerator) / c.denominator
    return num / den


# ----------------------------------------------------------------------------
# rational fitting


@dataclass
class RationalFitResult:
    num_degree: int
    den_degree: int
    numerator: list  # complex coefficients, low to high
    denominator: list  # monic: last entry is 1
    residual: float
    nearest: list = field(default_factory=list)  # per coefficient report

    def max_rational_distance(self) -> float:
        return max((r["distance"] for r in self.nearest), default=0.0)

    def __call__(self, x):
        n = sum(c * x ** i for i, c in enumerate(self.numerator))
        d = sum(c * x ** i for i, c in enumerate(self.denominator))
        return n / d


def nearest_rational(z, max_den: int = 64) -> dict:
    z = complex(z)
    re = Fraction(z.real).limit_denominator(max_den)
    im = Fraction(z.imag).limit_denominator(max_den)
    dist = abs(complex(float(re), float(im)) - z)
    return {"value": [z.real, z.imag], "re": str(re), "im": str(im), "distance": dist}


def rational_fit(xs, ys, num_degree: int, den_degree: int, max_den: int = 64, digits: int = DEFAULT_DIGITS) -> RationalFitResult:
    """Least squares for num(x) - y*den(x) = 0 with den monic of exact degree."""
    p, q = num_degree, den_degree
    nunk = p + 1 + q
    if len(xs) != len(ys):
        raise ValueError("xs and ys differ in length")
    if len(xs) < p + q + 2:
        raise ValueError(f"need at least {p + q + 2} samples, got {len(xs)}")
    with mpmath.workdps(digits + 10):
        xs = [mpmath.mpc(x) for x in xs]
        ys = [mpmath.mpc(y) for y in ys]
        rows, rhs = [], []
        for x, y in zip(xs, ys):
            row = [x ** i for i in range(p + 1)] + [-y * x ** j for j in range(q)]
            rows.append(row)
            rhs.append(y * x ** q)
        m = len(rows)
        A = mpmath.matrix(m, nunk)
        b = mpmath.matrix(m, 1)
        for i in range(m):
            for j in range(nunk):
                A[i, j] = rows[i][j]
            b[i] = rhs[i]
        sv = mpmath.svd_c(A, compute_uv=False)
        smax = max(abs(x) for x in sv)
        smin = min(abs(x) for x in sv)
        if smin <= smax * mpmath.mpf(10) ** (-(digits - 5)):
            raise RankDeficientError(
                f"fit matrix is rank deficient (singular values down to {mpmath.nstr(smin, 3)})"
            )
        sol, _ = mpmath.qr_solve(A, b)
        coeffs = [mpmath.mpc(sol[j]) for j in range(nunk)]
        rnorm = mpmath.mpf(0)
        bnorm = mpmath.mpf(0)
        for row, r in zip(rows, rhs):
            e = sum(a * c for a, c in zip(row, coeffs)) - r
            rnorm += abs(e) ** 2
            bnorm += abs(r) ** 2
        residual = float(mpmath.sqrt(rnorm) / mpmath.sqrt(bnorm)) if bnorm else float(mpmath.sqrt(rnorm))
        numer = [complex(c) for c in coeffs[: p + 1]]
        denom = [complex(c) for c in coeffs[p + 1:]] + [1.0 + 0j]
    nearest = [nearest_rational(c, max_den) for c in numer + denom[:-1]]
    return RationalFitResult(p, q, numer, denom, residual, nearest)


# ----------------------------------------------------------------------------
# mu-equation checks


@dataclass
class MuReport:
    chain: str
    grid: list
    values: list  # D(nu) at each grid point
    errors: list
    max_abs: float
    tolerance: float
    fit: RationalFitResult = None

    @property
    def ok(self) -> bool:
        if self.fit is not None:
            return self.fit.residual < self.tolerance
        return self.max_abs < self.tolerance

    def as_dict(self) -> dict:
        out = {
            "chain": self.chain,
            "grid": [_cstr(g) for g in self.grid],
            "D_nu": [_cstr(v) for v in self.values],
            "error_estimates": [float(e) for e in self.errors],
            "max_abs": self.max_abs,
            "tolerance": self.tolerance,
            "ok": self.ok,
        }
        if self.fit is not None:
            out["fit"] = fit_to_dict(self.fit)
        return out


def _cstr(z, digits: int = 17) -> str:
    z = mpmath.mpc(z)
    return f"{mpmath.nstr(z.real, digits)}{'+' if z.imag >= 0 else '-'}{mpmath.nstr(abs(z.imag), digits)}j"


def fit_to_dict(fit: RationalFitResult) -> dict:
    return {
        "num_degree": fit.num_degree,
        "den_degree": fit.den_degree,
        "numerator": [[c.real, c.imag] for c in fit.numerator],
        "denominator": [[c.real, c.imag] for c in fit.denominator],
        "residual": fit.residual,
        "nearest_rationals": fit.nearest,
        "max_rational_distance": fit.max_rational_distance(),
    }


def mu_equation_check(D: DiffOperator, chain, grid, h: float = 1e-3, digits: int = DEFAULT_DIGITS,
                      tolerance: float = 1e-6, fit_degrees=(2, 3)) -> MuReport:
    """D(nu) along the grid.

    For fixed 2-torsion endpoints (and closed cycles) the boundary terms
    vanish and D(nu) must be zero. For a section chain the grid is in the
    cover coordinate s and D(nu) is fitted by a rational function of s.
    """
    nu = normal_function(chain, digits)
    cover = getattr(chain, "cover", None)
    vals, errs, pts = [], [], []
    for g in grid:
        t0 = cover.t_of_s(mpmath.mpf(g)) if cover else mpmath.mpc(g)
        s = sample(nu, stencil_points(t0, h, D.order), digits=digits)
        v, e = apply_operator_numeric(D, s, t0, h)
        vals.append(v)
        errs.append(e)
        pts.append(g)
    fit = None
    if cover is not None:
        fit = rational_fit([mpmath.mpf(g) for g in grid], vals, fit_degrees[0], fit_degrees[1], digits=digits)
    max_abs = float(max(abs(v) for v in vals)) if vals else 0.0
    name = chain.name if hasattr(chain, "name") else str(chain)
    return MuReport(name, list(pts), vals, errs, max_abs, tolerance, fit)
