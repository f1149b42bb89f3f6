"""
Named verification suites run by ``epscalc verify <suite>``.

Each suite gathers CheckReports from the geometric checks, the jet
contracts and the theorem procedures into one SuiteReport. Failed checks
are recorded, never raised; an engine error inside a check marks that
check failed and the suite moves on.
"""

import logging
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from ..analysis.integral import ftc_jet, integrate, verify_ftc
from ..analysis.meanvalue import (
    cmvt_witness,
    find_critical,
    lhopital_00,
    lhopital_general,
    mvt_witness,
)
from ..analysis.taylor import TaylorJet, tjet_from_expr, tjet_mul, verify_peano
from ..core.envelope import (
    ErrorEnvelope,
    env_compose,
    env_dominates,
    env_scale_bounded,
    env_sum,
    funnel_boxes,
)
from ..core.jet import check_uniqueness, verify_contract
from ..errors import EpscalcError
from ..expr import ExprEvaluator, eval_jet, parse
from ..geometry.areas import CurveId, pi
from ..geometry.checks import (
    CheckReport,
    CheckResult,
    closed_form_table,
    exp_negative_region_check,
    matrix_maps_curve,
    pythagorean_residuals,
    verify_deriv_zero_inequalities,
    verify_summation,
)
from ..geometry.functions import (
    exp_extension_steps,
    geo_cos_sin,
    geo_cosh_sinh,
    geo_exp,
    geo_ln,
    hyperbolic_extension_steps,
    parallelogram_bound,
)
from ..geometry.roots import sqrt
from ..utils.grids import symmetric_halving_grid

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ("check", "cases", "max_residual", "pass")

CLOSURE_CASES = 1000
CLOSURE_POINTS = 129
CLOSURE_SEED = 20240
SUMMATION_POINTS = 16
DERIV_ZERO_GRID = [0.5 * 2.0**-k for k in range(20)]
EXTENDED_TRIG = 64

# (expression, base point) pairs for the jet rules
RULE_CORPUS: Tuple[Tuple[str, float], ...] = (
    ("x^2", 3.0),
    ("x*x*x - 2*x", -1.5),
    ("sin(x)*cos(x)", 0.7),
    ("exp(x)/x", 1.3),
    ("ln(x)", 2.0),
    ("sqrt(x)", 2.0),
    ("sin(x^2)", 0.5),
    ("cosh(x) - sinh(x)", 0.4),
    ("1/(1 + x^2)", 0.5),
    ("x^(1/3)", 8.0),
    ("abs(x)", -2.0),
    ("exp(sin(x))", 1.1),
)

# Two rule paths to the same function
RULE_PATHS: Tuple[Tuple[str, str, float], ...] = (
    ("x^2", "x*x", 3.0),
    ("sqrt(x)", "x^(1/2)", 2.0),
    ("sin(2*x)", "2*sin(x)*cos(x)", 0.6),
    ("exp(2*x)", "exp(x)*exp(x)", 0.3),
)

Config = Mapping[str, Any]


@dataclass
class SuiteReport:
    """Outcome of one named suite."""

    name: str
    reports: List[CheckReport] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def add(self, report: CheckReport) -> CheckReport:
        self.reports.append(report)
        return report

    def failures(self) -> List[CheckResult]:
        return [f for r in self.reports for f in r.failures()]

    def rows(self) -> List[Dict[str, object]]:
        """One row per (report, check) with case count and worst residual."""
        rows: Dict[str, Dict[str, Any]] = {}
        for report in self.reports:
            for result in report.results:
                key = f"{report.name}.{result.check}"
                row = rows.setdefault(
                    key, {"check": key, "cases": 0, "max_residual": 0.0, "pass": True}
                )
                row["cases"] += 1
                row["max_residual"] = max(row["max_residual"], result.residual)
                row["pass"] = row["pass"] and result.passed
        return list(rows.values())

    def to_dict(self) -> Dict[str, object]:
        return {
            "suite": self.name,
            "pass": self.passed,
            "reports": [r.to_dict() for r in self.reports],
        }


def _settings(config: Optional[Config]) -> Tuple[float, int, int]:
    """(tolerance, grid points, depth) from a loaded config."""
    if config is None:
        return 1e-9, 4097, 40
    cert = config.get("certification", {})
    return (
        float(config.get("tolerance", {}).get("default", 1e-9)),
        int(cert.get("grid_points", 4097)),
        int(cert.get("depth", 40)),
    )


def _search_settings(config: Optional[Config]) -> Dict[str, int]:
    search = (config or {}).get("search", {})
    return {
        "scan_points": int(search.get("scan_points", 1024)),
        "max_iter": int(search.get("refine_iterations", 200)),
    }


def _integration_settings(config: Optional[Config]) -> Dict[str, Any]:
    integration = (config or {}).get("integration", {})
    return {
        "tol": float(integration.get("width", 1e-6)),
        "scan_points": int(integration.get("scan_points", 257)),
        "max_panels": int(integration.get("max_panels", 2**20)),
        "max_segments": int(integration.get("max_segments", 64)),
    }


def _record(
    report: CheckReport,
    check: str,
    point: object,
    passed: bool,
    lhs: float = 0.0,
    rhs: float = 0.0,
    residual: float = 0.0,
) -> None:
    report.results.append(CheckResult(check, point, lhs, rhs, residual, bool(passed)))


@contextmanager
def _guard(report: CheckReport, check: str, point: object) -> Iterator[None]:
    """Record an engine error raised inside the block as a failed check."""
    try:
        yield
    except (EpscalcError, ArithmeticError) as e:
        logger.warning("[verify] %s at %s raised: %s", check, point, e)
        _record(report, check, point, False, residual=float("inf"))


def _power_sampler(coeff: float, power: float, sign: float) -> Callable[[float], float]:
    return lambda eps: sign * coeff * abs(eps) ** power


def _bounded_factor(bound: float) -> Callable[[float], float]:
    return lambda eps: bound * (1.0 - eps * eps) / (1.0 + eps * eps)


# -- envelope --------------------------------------------------------------------


def envelope_suite(config: Optional[Config] = None) -> SuiteReport:
    """Randomized closure of the envelope algebra, plus worked examples."""
    _, _, depth = _settings(config)
    suite = SuiteReport("envelope")

    closure = suite.add(CheckReport("closure"))
    rng = np.random.default_rng(CLOSURE_SEED)
    ops = ("sum", "product", "compose")
    for i in range(CLOSURE_CASES):
        op = ops[i % len(ops)]
        ca, cb = rng.uniform(0.1, 4.0, 2)
        pa, pb = rng.uniform(0.5, 3.0, 2)
        ra, rb = rng.uniform(0.1, 2.0, 2)
        sa, sb = rng.choice([-1.0, 1.0], 2)
        a = ErrorEnvelope.analytic(ca, pa, ra, _power_sampler(ca, pa, sa))
        b = ErrorEnvelope.analytic(cb, pb, rb, _power_sampler(cb, pb, sb))
        with _guard(closure, op, i):
            if op == "sum":
                env = env_sum(a, b)
            elif op == "product":
                m = float(rng.uniform(0.0, 3.0))
                env = env_scale_bounded(a, m, _bounded_factor(m))
            else:
                env = env_compose(a, b)
            ok = env.sampler is not None and env_dominates(
                env, env.sampler, points=CLOSURE_POINTS, depth=depth
            )
            _record(closure, op, i, ok)

    worked = suite.add(CheckReport("worked_examples"))
    square = _power_sampler(1.0, 2.0, 1.0)
    linear = _power_sampler(1.0, 1.0, 1.0)
    total = env_sum(
        ErrorEnvelope.analytic(1.0, 2.0, 1.0, square), ErrorEnvelope.analytic(1.0, 1.0, 1.0, linear)
    )
    worked.add_equal("sum_coeff", "eps^2+eps", total.coeff, 2.0, 0.0)
    worked.add_equal("sum_power", "eps^2+eps", total.power, 1.0, 0.0)
    with _guard(worked, "funnel_widths", "eps^2"):
        boxes = funnel_boxes(ErrorEnvelope.analytic(1.0, 2.0, 1.0, square), 3, 0.25, CLOSURE_POINTS)
        for box, y in zip(boxes, (0.25, 0.125, 0.0625)):
            worked.add_equal("funnel_widths", y, box.x_hi, sqrt(y), 1e-12)
        for outer, inner in zip(boxes, boxes[1:]):
            _record(worked, "funnel_nested", inner.y_hi, outer.contains(inner))
    return suite


# -- jet rules -------------------------------------------------------------------


def _central_difference(f: Callable[[float], float], x0: float) -> float:
    h = 1e-5 * max(1.0, abs(x0))
    return (f(x0 + h) - f(x0 - h)) / (2.0 * h)


def rules_suite(config: Optional[Config] = None) -> SuiteReport:
    """Jet contracts, finite-difference agreement and slope uniqueness."""
    tol, points, depth = _settings(config)
    suite = SuiteReport("rules")

    contracts = suite.add(CheckReport("jets"))
    for src, x0 in RULE_CORPUS:
        e = parse(src)
        f = ExprEvaluator(e, tol)
        with _guard(contracts, "contract", src):
            jet = eval_jet(e, x0, tol)
            verdict = verify_contract(jet, f, points, depth)
            _record(contracts, "contract", [src, x0], verdict.passed)
            reference = _central_difference(f, x0)
            contracts.add_equal("finite_difference", [src, x0], jet.slope, reference, 1e-6)

    unique = suite.add(CheckReport("uniqueness"))
    for left, right, x0 in RULE_PATHS:
        with _guard(unique, "same_slope", [left, right]):
            a = eval_jet(parse(left), x0, tol)
            b = eval_jet(parse(right), x0, tol)
            r = min(a.radius, b.radius)
            verdict = check_uniqueness(a, b, symmetric_halving_grid(r, depth))
            _record(unique, "same_slope", [left, right, x0], verdict.passed, a.slope, b.slope,
                    verdict.slope_gap)
    return suite


# -- geometric functions -----------------------------------------------------------


def _summation_grid() -> np.ndarray:
    return np.linspace(-2.0, 2.0, SUMMATION_POINTS)


def _curve_suite(name: str, curve: CurveId) -> SuiteReport:
    suite = SuiteReport(name)
    summation = suite.add(CheckReport(f"summation_{curve.value}"))
    grid = _summation_grid()
    for a in grid:
        for b in grid:
            summation.extend(verify_summation(curve, float(a), float(b)))
    suite.add(verify_deriv_zero_inequalities(curve, DERIV_ZERO_GRID))
    suite.add(matrix_maps_curve(curve, 0.7, [float(a) for a in grid]))
    return suite


def trig_suite(config: Optional[Config] = None) -> SuiteReport:
    """Closed-form table, identities on extended ranges and circle rules."""
    tol, _, _ = _settings(config)
    suite = _curve_suite("trig", CurveId.CIRCLE)
    suite.add(closed_form_table(min(tol, 1e-9)))
    p = pi()
    extended = [float(a) for a in np.linspace(-10.0 * p, 10.0 * p, EXTENDED_TRIG)]
    suite.add(pythagorean_residuals(extended))

    periodic = suite.add(CheckReport("periodicity"))
    for a in extended[:8]:
        c, s = geo_cos_sin(a)
        c2, s2 = geo_cos_sin(a + 2.0 * p)
        periodic.add_equal("cos", a, c2, c, 1e-8)
        periodic.add_equal("sin", a, s2, s, 1e-8)
    return suite


def hyperbolic_suite(config: Optional[Config] = None) -> SuiteReport:
    """Hyperbola rules, the parallelogram bound and the solvable-area ladder."""
    suite = _curve_suite("hyperbolic", CurveId.HYPERBOLA)

    bound = suite.add(CheckReport("parallelogram"))
    expected = 5.0 / (2.0 * sqrt(8.0) + 3.0 * sqrt(3.0)) / 3.0
    bound.add_equal("value_at_1", 1.0, parallelogram_bound(1.0), expected, 1e-12)
    for x in (1.0, 2.0, 10.0, 1e3, 1e6):
        bound.add_leq("above_5_36", x, 5.0 / 36.0, parallelogram_bound(x), 0.0)

    ladder = suite.add(CheckReport("extension_ladder"))
    for a in (1.0, 4.0, 10.0):
        with _guard(ladder, "certified", a):
            steps = hyperbolic_extension_steps(a)
            ladder.add_leq("certified", a, steps.target, steps.certified_area, 0.0)
            ladder.add_leq("step_count", a, steps.steps, 9.0 * steps.target + 1.0, 0.0)

    tol = _settings(config)[0]
    doubled = suite.add(CheckReport("forced_doubling"))
    for a in (0.5, 1.0, 1.5, 2.0):
        c0, s0 = geo_cosh_sinh(a, tol)
        c, s = geo_cosh_sinh(a, tol, window=0.25 * a)
        doubled.add_equal("cosh", a, c, c0, tol)
        doubled.add_equal("sinh", a, s, s0, tol)
    return suite


def exp_suite(config: Optional[Config] = None) -> SuiteReport:
    """exp/ln rules, the alternate exp(-A) regions and the rectangle ladder."""
    suite = _curve_suite("exp", CurveId.SKEW)
    for a in (0.5, 1.0):
        suite.add(exp_negative_region_check(a, tol=1e-5))

    ladder = suite.add(CheckReport("extension_ladder"))
    for a in (1.0, 4.0, 10.0):
        steps = exp_extension_steps(a)
        ladder.add_leq("certified", a, steps.target, steps.certified_area, 0.0)

    inverse = suite.add(CheckReport("ln_inverse"))
    for a in (-3.0, -0.25, 0.5, 2.0, 7.0):
        inverse.add_equal("ln_exp", a, geo_ln(geo_exp(a)), a, 1e-12)
    return suite


# -- theorems --------------------------------------------------------------------


def _expr_pair(src: str, tol: float) -> Tuple[ExprEvaluator, Callable[[float], Any]]:
    e = parse(src)
    return ExprEvaluator(e, tol), lambda x: eval_jet(e, x, tol)


def meanvalue_suite(config: Optional[Config] = None) -> SuiteReport:
    """Witness searches and L'Hopital limits on known cases."""
    tol, points, depth = _settings(config)
    search = _search_settings(config)
    suite = SuiteReport("meanvalue")
    witnesses = suite.add(CheckReport("witnesses"))

    with _guard(witnesses, "critical", "sin"):
        f, fj = _expr_pair("sin(x)", tol)
        w = find_critical(f, fj, 0.0, pi(), tol=1e-8, **search)
        _record(witnesses, "critical", "sin on [0, pi]", w.passed, w.c or 0.0, 0.5 * pi(),
                w.residual)
        witnesses.add_equal("critical_point", "sin", w.c or 0.0, 0.5 * pi(), 1e-6)

    with _guard(witnesses, "mvt", "x^3"):
        f, fj = _expr_pair("x^3", tol)
        w = mvt_witness(f, fj, 0.0, 2.0, tol=1e-8, **search)
        _record(witnesses, "mvt", "x^3 on [0, 2]", w.passed, residual=w.residual)
        witnesses.add_equal("mvt_point", "x^3", w.c or 0.0, 2.0 / sqrt(3.0), 1e-6)

    with _guard(witnesses, "cmvt", "x^2, x^3"):
        f, fj = _expr_pair("x^2", tol)
        g, gj = _expr_pair("x^3", tol)
        w = cmvt_witness(f, g, fj, gj, 1.0, 2.0, tol=1e-8, **search)
        _record(witnesses, "cmvt", "x^2/x^3 on [1, 2]", w.passed, residual=w.residual)
        witnesses.add_equal("cmvt_point", "x^2/x^3", w.c or 0.0, 14.0 / 9.0, 1e-6)

    limits = suite.add(CheckReport("limits"))
    with _guard(limits, "lhopital_00", "sin(x)/x"):
        f, fj = _expr_pair("sin(x)", tol)
        g, gj = _expr_pair("x", tol)
        verdict = lhopital_00(fj(0.0), gj(0.0), f, g, points, depth)
        _record(limits, "lhopital_00", "sin(x)/x", verdict.passed)
        limits.add_equal("limit", "sin(x)/x", verdict.limit, 1.0, 1e-9)

    for side in (1, -1):
        with _guard(limits, "sinc", side):
            f, fj = _expr_pair("sin(x)", tol)
            g, gj = _expr_pair("x", tol)
            verdict = lhopital_general(f, g, 0.0, side, 1.0, fj, gj, depth=depth, points=points)
            _record(limits, "sinc", side, verdict.passed)

    with _guard(limits, "x_ln_x", "0+"):
        f, fj = _expr_pair("ln(x)", tol)
        g, gj = _expr_pair("1/x", tol)
        verdict = lhopital_general(f, g, 0.0, 1, 0.0, fj, gj, depth=depth, points=points)
        _record(limits, "x_ln_x", "0+", verdict.passed and verdict.case == "unbounded")
        fit = verdict.derivative_fit
        _record(limits, "derivative_ratio_fit", "-x", fit is not None)
        if fit is not None:
            limits.add_equal("derivative_ratio_C", "-x", fit.fitted_coeff, 1.0, 0.1)
            limits.add_equal("derivative_ratio_p", "-x", fit.fitted_power, 1.0, 0.1)
    return suite


def _reference_series(name: str, n: int) -> List[float]:
    """Maclaurin coefficients with exact factorials."""
    out = []
    fact = Fraction(1)
    for k in range(n + 1):
        if k:
            fact *= k
        if name == "exp":
            out.append(float(1 / fact))
        elif name == "sin":
            out.append(float((-1) ** (k // 2) / fact) if k % 2 else 0.0)
        else:
            out.append(0.0 if k % 2 else float((-1) ** (k // 2) / fact))
    return out


def taylor_suite(config: Optional[Config] = None) -> SuiteReport:
    """Order-5 jets at 0, the Peano check and the wrong-coefficient counterexample."""
    tol, points, depth = _settings(config)
    suite = SuiteReport("taylor")
    coefficients = suite.add(CheckReport("coefficients"))
    peano = suite.add(CheckReport("peano"))
    jets: Dict[str, TaylorJet] = {}

    for name in ("exp", "sin", "cos"):
        with _guard(peano, "certified", name):
            tj = tjet_from_expr(parse(f"{name}(x)"), 0.0, 5, tol, points=points, depth=depth)
            jets[name] = tj
            for k, (got, ref) in enumerate(zip(tj.coeffs, _reference_series(name, 5))):
                coefficients.add_equal(name, k, got, ref, 1e-10)
            verdict = verify_peano(tj, ExprEvaluator(parse(f"{name}(x)"), tol), points=points,
                                   depth=depth)
            _record(peano, "certified", name, verdict.passed)

    with _guard(peano, "wrong_c3_rejected", "sin"):
        wrong = list(_reference_series("sin", 5))
        wrong[3] = -wrong[3]
        probe = TaylorJet(0.0, tuple(wrong), ErrorEnvelope.zero(0.5))
        verdict = verify_peano(probe, ExprEvaluator(parse("sin(x)"), tol), points=points,
                               depth=depth)
        _record(peano, "wrong_c3_rejected", "sin", not verdict.passed)

    if "sin" in jets and "cos" in jets:
        with _guard(peano, "product_rule", "sin*cos"):
            product = tjet_mul(jets["sin"], jets["cos"])
            verdict = verify_peano(product, ExprEvaluator(parse("sin(x)*cos(x)"), tol),
                                   points=points, depth=depth)
            _record(peano, "product_rule", "sin*cos", verdict.passed)
    return suite


# (integrand, lower limit, upper limit, exact integral)
FTC_CORPUS: Tuple[Tuple[str, float, float, Callable[[], float]], ...] = (
    ("1/x", 1.0, 2.0, lambda: geo_ln(2.0)),
    ("cos(x)", 0.0, 1.0, lambda: geo_cos_sin(1.0)[1]),
    ("exp(x)", 0.0, 0.5, lambda: geo_exp(0.5) - 1.0),
    ("x^2", 0.0, 1.5, lambda: 1.125),
)


def ftc_suite(config: Optional[Config] = None) -> SuiteReport:
    """FTC jets, integral brackets and the ln round trip."""
    tol, points, depth = _settings(config)
    integration = _integration_settings(config)
    width = integration["tol"]
    suite = SuiteReport("ftc")
    brackets = suite.add(CheckReport("brackets"))
    jets = suite.add(CheckReport("ftc_jets"))

    for src, a, b, exact in FTC_CORPUS:
        f = ExprEvaluator(parse(src), tol)
        with _guard(brackets, "contains_exact", src):
            bracket = integrate(f, a, b, **integration)
            value = exact()
            _record(brackets, "contains_exact", [src, a, b], bracket.contains(value, 1e-12),
                    bracket.mid, value, abs(bracket.mid - value))
        with _guard(jets, "contract", src):
            jet = ftc_jet(f, a, b, width, points=points, depth=depth)
            check = verify_ftc(f, jet, a)
            _record(jets, "contract", [src, b], check.passed)

    round_trip = suite.add(CheckReport("ln_round_trip"))
    for a in (0.25, 0.5, 1.0, 1.5, 2.0):
        with _guard(round_trip, "integral_of_1_over_t", a):
            bracket = integrate(lambda t: 1.0 / t, 1.0, geo_exp(a), **integration)
            _record(round_trip, "integral_of_1_over_t", a, bracket.contains(a, 1e-8),
                    bracket.mid, a, abs(bracket.mid - a))
    return suite


SUITES: Dict[str, Callable[[Optional[Config]], SuiteReport]] = {
    "envelope": envelope_suite,
    "rules": rules_suite,
    "trig": trig_suite,
    "hyperbolic": hyperbolic_suite,
    "exp": exp_suite,
    "meanvalue": meanvalue_suite,
    "taylor": taylor_suite,
    "ftc": ftc_suite,
}

SUITE_NAMES = tuple(SUITES) + ("all",)


def run_suite(name: str, config: Optional[Config] = None) -> SuiteReport:
    """
    Run a named suite, or every suite for ``"all"``.

    Raises:
        KeyError: For an unknown suite name
    """
    if name == "all":
        combined = SuiteReport("all")
        for key, suite_fn in SUITES.items():
            part = suite_fn(config)
            for report in part.reports:
                report.name = f"{key}/{report.name}"
                combined.add(report)
        return _finish(combined)
    try:
        suite_fn = SUITES[name]
    except KeyError:
        raise KeyError(f"unknown suite '{name}' (choose from {', '.join(SUITE_NAMES)})")
    return _finish(suite_fn(config))


def _finish(suite: SuiteReport) -> SuiteReport:
    total = sum(len(r.results) for r in suite.reports)
    failed = len(suite.failures())
    logger.info("suite %s: %d checks, %d failed", suite.name, total, failed)
    return suite
