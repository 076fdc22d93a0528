"""Command line entry point: pfcert {compute,verify,indicial,series,numeric}.

Exit codes: 0 ok, 2 parse error, 3 singular family, 4 order bound exceeded,
5 verification failure, 6 numeric admissibility failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from pfcert import __version__
from pfcert.exact import HomogeneityError, ParamPoly, ParamRat, ParseError, parse_polynomial
from pfcert.exact._backend import BACKEND
from pfcert.forms import (
    FamilyError,
    FamilySpec,
    JacobianData,
    NotSmoothError,
    OrderBoundExceeded,
    check_generic_smooth,
    picard_fuchs_full,
    verify_certificate,
)
from pfcert.odes import (
    INF,
    THETA_BASIS,
    DiffOperator,
    IrregularSingularityError,
    frobenius_solutions,
    indicial_polynomial,
    rational_roots,
    singular_points,
)
from pfcert.periods import (
    DworkSpec,
    annihilation_check,
    dwork_period_series,
    dwork_shift_window,
    hypergeometric_series,
    scan_shift,
    substitute_power,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SINGULAR = 3
EXIT_ORDER = 4
EXIT_VERIFY = 5
EXIT_NUMERIC = 6

FAMILY_KEYS = ("name", "ambient_dim", "variables", "parameter", "polynomial", "constant")
REQUIRED_KEYS = ("name", "ambient_dim", "variables", "parameter", "polynomial")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    family: str = None
    max_order: int = None  # None: dimension of the reduced-class space
    terms: int = 30
    chart: int = None  # None: the last variable
    digits: int = 30
    grid: str = None
    output: str = None
    compare_paper_operator: str = None
    at: str = None
    chains: list = field(default_factory=list)

    def validate(self):
        for name in ("max_order", "terms", "digits"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise CliError(f"--{name.replace('_', '-')} must be positive", EXIT_PARSE)
        if self.chart is not None and self.chart < 0:
            raise CliError("--chart must be non-negative", EXIT_PARSE)
        return self


# ----------------------------------------------------------------------------
# files


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    data = resources.files("pfcert") / "data"
    for cand in (path, path + ".fam", path + ".op"):
        q = data / cand
        if q.is_file():
            return Path(str(q))
    raise CliError(f"file not found: {path}", EXIT_PARSE)


def _key_values(text: str, source: str):
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if ":" not in line:
            raise CliError(f"{source}:{lineno}: expected 'key: value'", EXIT_PARSE)
        key, value = line.split(":", 1)
        key = key.strip()
        col = len(line) - len(value.lstrip()) + 1
        out[key] = (value.strip(), lineno, col)
    return out


def load_family(path: str) -> FamilySpec:
    """Parse a family file; raises CliError with exit code 2 on bad input."""
    p = _resolve(path)
    kv = _key_values(p.read_text(), str(p))
    for k in kv:
        if k not in FAMILY_KEYS:
            raise CliError(f"{p}:{kv[k][1]}: unknown key {k!r}", EXIT_PARSE)
    for k in REQUIRED_KEYS:
        if k not in kv:
            raise CliError(f"{p}: missing key {k!r}", EXIT_PARSE)
    try:
        n = int(kv["ambient_dim"][0])
    except ValueError:
        raise CliError(f"{p}:{kv['ambient_dim'][1]}: ambient_dim must be an integer", EXIT_PARSE)
    variables = [v for v in kv["variables"][0].replace(",", " ").split() if v]
    parameter = kv["parameter"][0]
    constant = kv.get("constant", ("false",))[0].lower() in ("true", "yes", "1")
    text, lineno, col = kv["polynomial"]
    try:
        f = parse_polynomial(text, variables, parameter)
    except HomogeneityError as exc:
        raise CliError(f"{p}:{lineno}: {exc}", EXIT_PARSE)
    except ParseError as exc:
        raise CliError(f"{p}:{lineno}:{col + exc.column - 1}: {exc}", EXIT_PARSE)
    try:
        return FamilySpec(kv["name"][0], n, tuple(variables), parameter, f, constant)
    except FamilyError as exc:
        raise CliError(f"{p}: {exc}", EXIT_PARSE)


def load_operator(path: str) -> DiffOperator:
    p = _resolve(path)
    kv = _key_values(p.read_text(), str(p))
    if "operator" not in kv:
        raise CliError(f"{p}: missing key 'operator'", EXIT_PARSE)
    basis = kv.get("basis", ("d",))[0]
    basis = THETA_BASIS if basis in ("theta", "θ") else "d"
    parameter = kv.get("parameter", ("t",))[0]
    text, lineno, col = kv["operator"]
    try:
        return DiffOperator.parse(text, basis, parameter)
    except ParseError as exc:
        raise CliError(f"{p}:{lineno}:{col + exc.column - 1}: {exc}", EXIT_PARSE)


# ----------------------------------------------------------------------------
# documents


def operator_doc(D: DiffOperator, var: str = "t") -> dict:
    T = D.to_theta_form().normalized()
    return {
        "basis": D.basis,
        "order": D.order,
        "coefficients": [c.to_string(var) for c in D.coeffs],
        "text": D.to_string(var),
        "theta_form": {"coefficients": [c.to_string(var) for c in T.coeffs], "text": T.to_string(var)},
    }


def certificate_doc(cert, spec: FamilySpec) -> list:
    out = []
    for term in cert.terms:
        out.append(
            {
                "k": term.k,
                "scalar": term.scalar.to_string(spec.parameter),
                "witness": [a.to_string(list(spec.variables), spec.parameter) for a in term.A],
            }
        )
    return out


def family_doc(spec: FamilySpec) -> dict:
    return {
        "name": spec.name,
        "ambient_dim": spec.n,
        "degree": spec.m,
        "variables": list(spec.variables),
        "parameter": spec.parameter,
        "polynomial": spec.f.to_string(list(spec.variables), spec.parameter),
        "constant": spec.constant,
    }


def singular_doc(D: DiffOperator, var: str = "t") -> dict:
    loc = singular_points(D)
    return {
        "factors": [f.to_string(var) for f in loc.factors],
        "infinity": loc.infinity,
        "leading_coefficient": loc.leading.to_string(var),
    }


def _dwork_like(spec: FamilySpec) -> bool:
    nv = spec.n + 1
    if spec.m != nv:
        return False
    want = {}
    for i in range(nv):
        e = [0] * nv
        e[i] = nv
        want[tuple(e)] = ParamRat(1)
    want[(1,) * nv] = -ParamRat.t()
    return spec.f.terms == want


def _legendre_like(spec: FamilySpec) -> bool:
    if spec.n != 2:
        return False
    try:
        g = parse_polynomial("y^2*z - x*(x - z)*(x - t*z)", ["x", "y", "z"], "t")
    except ParseError:
        return False
    return spec.f.terms == g.terms


def series_check(D: DiffOperator, spec: FamilySpec, terms: int) -> dict:
    """Annihilation of an independent period series, where one is known."""
    if _dwork_like(spec):
        s = dwork_period_series(DworkSpec(spec.n, spec.m, terms))
        e = -spec.m
        a = scan_shift(D, s, e, dwork_shift_window(spec.n))
        if a is None:
            rep = annihilation_check(D, substitute_power(s, e, 0))
            return {"status": "nonzero", "oracle": "dwork", "shift": None, "report": rep.as_dict(),
                    "truncation": terms}
        rep = annihilation_check(D, substitute_power(s, e, a))
        return {"status": "zero", "oracle": "dwork", "substitution": f"z = t^{e}", "shift": str(a),
                "report": rep.as_dict(), "truncation": terms}
    if _legendre_like(spec):
        h = hypergeometric_series(Fraction(1, 2), Fraction(1, 2), 1, terms)
        rep = annihilation_check(D, h)
        return {"status": "zero" if rep.zero else "nonzero", "oracle": "2F1(1/2,1/2;1;t)",
                "report": rep.as_dict(), "truncation": terms}
    return {"status": "unavailable", "truncation": terms}


def compare_operators(computed: DiffOperator, printed: DiffOperator, spec: FamilySpec = None, terms: int = 30) -> dict:
    """equal / proportional / mismatch, with a coefficient-wise diff in theta form."""
    a = computed.to_theta_form()
    b = printed.to_theta_form()
    var = spec.parameter if spec else "t"
    if a == b:
        verdict = "equal"
    elif a.normalized() == b.normalized():
        verdict = "proportional"
    else:
        verdict = "mismatch"
    na, nb = a.normalized(), b.normalized()
    rows = []
    for j in range(max(len(na.coeffs), len(nb.coeffs))):
        ca, cb = na.coefficient(j), nb.coefficient(j)
        rows.append(
            {
                "theta_power": j,
                "computed": ca.to_string(var),
                "printed": cb.to_string(var),
                "difference": (ca - cb).to_string(var),
            }
        )
    out = {"paper_operator_match": verdict, "computed": na.to_string(var), "printed": nb.to_string(var), "diff": rows}
    if spec is not None:
        sc = series_check(printed.to_d_form(), spec, terms)
        out["printed_series_annihilation"] = sc["status"]
        if "report" in sc:
            out["printed_first_nonzero_exponent"] = sc["report"]["first_nonzero_exponent"]
    return out


def _dump(doc: dict, cfg: RunConfig, started: float):
    doc = dict(doc)
    doc["config"] = asdict(cfg)
    doc["metadata"] = {
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "elapsed_seconds": round(time.time() - started, 3),
        "version": __version__,
        "backend": BACKEND,
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    if cfg.output:
        Path(cfg.output).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")


# ----------------------------------------------------------------------------
# commands


def _load_checked(cfg: RunConfig):
    spec = load_family(cfg.family)
    jd = JacobianData(spec)
    if not check_generic_smooth(spec, jd):
        raise CliError(f"family {spec.name!r} is not generically smooth", EXIT_SINGULAR)
    if cfg.chart is not None and cfg.chart > spec.n:
        raise CliError(f"--chart must be at most {spec.n}", EXIT_PARSE)
    return spec, jd


def _picard_fuchs(spec, jd, cfg):
    try:
        return picard_fuchs_full(spec, cfg.max_order, jd)
    except NotSmoothError as exc:
        raise CliError(str(exc), EXIT_SINGULAR)
    except OrderBoundExceeded as exc:
        raise CliError(str(exc), EXIT_ORDER)


def cmd_compute(cfg: RunConfig):
    started = time.time()
    spec, jd = _load_checked(cfg)
    res = _picard_fuchs(spec, jd, cfg)
    D = res.operator
    ver = verify_certificate(D, spec, res.certificate, cfg.chart)
    series = series_check(D, spec, cfg.terms)
    doc = {
        "command": "compute",
        "family": family_doc(spec),
        "operator": operator_doc(D, spec.parameter),
        "reduced_dimension": res.dimension,
        "singular_points": singular_doc(D, spec.parameter),
        "certificate": certificate_doc(res.certificate, spec),
        "checks": {
            "certificate_verified": ver.ok,
            "chart": spec.n if cfg.chart is None else cfg.chart,
            "series_annihilation": series,
        },
    }
    if cfg.compare_paper_operator:
        doc["comparison"] = compare_operators(D, load_operator(cfg.compare_paper_operator), spec, cfg.terms)
    _dump(doc, cfg, started)
    if not ver.ok or series["status"] == "nonzero":
        return EXIT_VERIFY
    return EXIT_OK


def cmd_verify(cfg: RunConfig):
    started = time.time()
    spec, jd = _load_checked(cfg)
    res = _picard_fuchs(spec, jd, cfg)
    charts = [cfg.chart] if cfg.chart is not None else list(range(spec.n + 1))
    verdicts = {}
    for c in charts:
        verdicts[str(c)] = verify_certificate(res.operator, spec, res.certificate, c).ok
    tampered = None
    if len(res.certificate):
        tampered = verify_certificate(res.operator, spec, res.certificate.perturbed(0, 1), charts[0]).ok
    doc = {
        "command": "verify",
        "family": family_doc(spec),
        "operator": operator_doc(res.operator, spec.parameter),
        "checks": {"certificate_verified": all(verdicts.values()), "per_chart": verdicts,
                   "tampered_certificate_verified": tampered},
    }
    _dump(doc, cfg, started)
    return EXIT_OK if all(verdicts.values()) else EXIT_VERIFY


def _parse_location(text: str):
    text = text.strip()
    if text.lower() in ("inf", "infinity", "oo"):
        return INF
    try:
        return Fraction(text)
    except ValueError:
        raise CliError(f"bad location {text!r}", EXIT_PARSE)


def _default_locations(D: DiffOperator):
    locs = {Fraction(0)}
    for f in singular_points(D).factors:
        if f.degree == 1:
            roots, _ = rational_roots(f.coeffs)
            locs.update(roots)
    return sorted(locs) + [INF]


def cmd_indicial(cfg: RunConfig):
    started = time.time()
    spec, jd = _load_checked(cfg)
    D = _picard_fuchs(spec, jd, cfg).operator
    locs = [_parse_location(x) for x in cfg.at.split(",")] if cfg.at else _default_locations(D)
    rows = []
    for loc in locs:
        ind = indicial_polynomial(D, loc)
        row = {
            "location": "inf" if loc == INF else str(loc),
            "polynomial": ind.poly_string("rho"),
            "exponents": [{"exponent": str(r), "multiplicity": m} for r, m in ind.exponents],
            "irrational_factors": [ParamPoly(f).to_string("rho") for f in ind.irrational_factors],
            "regular": ind.regular,
        }
        if ind.regular and not ind.irrational_factors:
            try:
                sols = frobenius_solutions(D, loc, min(cfg.terms, 10))
                row["frobenius"] = [
                    {"exponent": str(s.exponent), "log_depth": s.log_depth} for s in sols
                ]
                row["solution_count"] = len(sols)
            except IrregularSingularityError as exc:
                row["frobenius_error"] = str(exc)
        rows.append(row)
    doc = {
        "command": "indicial",
        "family": family_doc(spec),
        "operator": operator_doc(D, spec.parameter),
        "singular_points": singular_doc(D, spec.parameter),
        "indicial": rows,
    }
    _dump(doc, cfg, started)
    return EXIT_OK


def cmd_series(cfg: RunConfig):
    started = time.time()
    spec, jd = _load_checked(cfg)
    D = _picard_fuchs(spec, jd, cfg).operator
    series = series_check(D, spec, cfg.terms)
    doc = {
        "command": "series",
        "family": family_doc(spec),
        "operator": operator_doc(D, spec.parameter),
        "checks": {"series_annihilation": series},
    }
    _dump(doc, cfg, started)
    return EXIT_VERIFY if series["status"] == "nonzero" else EXIT_OK


def _parse_grid(text: str, default):
    if not text:
        return default
    try:
        if ":" in text:
            a, b, n = text.split(":")
            a, b, n = float(a), float(b), int(n)
            if n < 2:
                raise ValueError
            return [a + (b - a) * i / (n - 1) for i in range(n)]
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"bad grid {text!r}; use start:stop:count or a comma list", EXIT_PARSE)


NUMERIC_CHAINS = ("closed", "half", "moving", "section", "empty", "control")


def cmd_numeric(cfg: RunConfig):
    from pfcert import numeric as nm

    started = time.time()
    spec, jd = _load_checked(cfg)
    if not _legendre_like(spec):
        raise CliError("numeric checks are implemented for the Legendre family only", EXIT_NUMERIC)
    D = _picard_fuchs(spec, jd, cfg).operator
    chains = cfg.chains or list(NUMERIC_CHAINS)
    t_grid = _parse_grid(cfg.grid, [0.3, 0.45, 0.6, 0.75])
    s_grid = _parse_grid(cfg.grid, [0.3 + 0.3 * i / 11 for i in range(12)])
    digits = cfg.digits
    reports = {}
    ok = True
    try:
        for name in chains:
            if name == "closed":
                r = nm.mu_equation_check(D, nm.ClosedCycle("a"), t_grid, digits=digits)
            elif name == "half":
                r = nm.mu_equation_check(D, nm.HALF_PERIOD_CHAIN, t_grid, digits=digits)
            elif name == "moving":
                r = nm.mu_equation_check(D, nm.MOVING_TORSION_CHAIN, t_grid, digits=digits)
            elif name == "section":
                r = nm.mu_equation_check(D, nm.SECTION_X2_CHAIN, s_grid, digits=digits)
            elif name == "empty":
                empty = nm.ChainSpec("empty", nm.torsion("0"), nm.torsion("0"))
                v = nm.truncated_aj(empty, t_grid[0], digits=digits)
                reports[name] = {"chain": "empty", "value": nm._cstr(v.value()), "ok": v.integral == 0}
                continue
            elif name == "control":
                import mpmath

                xs = [-2 + 4 * i / 19 for i in range(20)]
                fit = nm.rational_fit(xs, [mpmath.exp(x) for x in xs], 1, 1, digits=digits)
                reports[name] = {"input": "exp(s)", "fit": nm.fit_to_dict(fit), "expected": "residual > 1e-2",
                                 "ok": fit.residual > 1e-2}
                ok = ok and fit.residual > 1e-2
                continue
            else:
                raise CliError(f"unknown chain {name!r}", EXIT_PARSE)
            d = r.as_dict()
            if r.fit is not None:
                d["ok"] = r.fit.residual < 1e-6 and r.fit.max_rational_distance() < 1e-6
                d["cover"] = nm.SECTION_X2_COVER.name
            reports[name] = d
            ok = ok and d["ok"]
    except nm.AdmissibilityError as exc:
        raise CliError(f"numeric admissibility: {exc}", EXIT_NUMERIC)
    doc = {
        "command": "numeric",
        "family": family_doc(spec),
        "operator": operator_doc(D, spec.parameter),
        "omega": "dx/(2y)",
        "precision": {"digits": digits, "finite_difference_step": 1e-3, "richardson_levels": 2},
        "checks": reports,
        "all_ok": ok,
    }
    _dump(doc, cfg, started)
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "indicial": cmd_indicial,
    "series": cmd_series,
    "numeric": cmd_numeric,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pfcert", description="Certified Picard-Fuchs operators for hypersurface families.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("family", nargs="?" if name == "numeric" else None, default="legendre",
                       help="family file (or the name of a bundled family)")
        p.add_argument("--max-order", type=int, default=None)
        p.add_argument("--terms", type=int, default=30)
        p.add_argument("--chart", type=int, default=None)
        p.add_argument("--digits", type=int, default=30)
        p.add_argument("--grid", default=None, help="start:stop:count or comma list")
        p.add_argument("--output", "-o", default=None)
        p.add_argument("--compare-paper-operator", default=None, metavar="FILE")
        if name == "indicial":
            p.add_argument("--at", default=None, help="comma list of points, 'inf' for infinity")
        if name == "numeric":
            p.add_argument("--chain", action="append", choices=NUMERIC_CHAINS, default=None)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        family=args.family,
        max_order=args.max_order,
        terms=args.terms,
        chart=args.chart,
        digits=args.digits,
        grid=args.grid,
        output=args.output,
        compare_paper_operator=args.compare_paper_operator,
        at=getattr(args, "at", None),
        chains=getattr(args, "chain", None) or [],
    )
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except CliError as exc:
        print(f"pfcert: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
