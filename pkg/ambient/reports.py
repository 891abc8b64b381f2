# coding=utf-8
"""
Verification suites over a ConstructionBundle and the report document they produce.
"""
import time
from collections import OrderedDict
from fractions import Fraction

import jmespath
import numpy as np

from .constructions import (
    AMBIENT_RHO,
    AMBIENT_T,
    ConstructionBundle,
    cone_chart,
    lift,
    projective_change,
    pw_ricci_constant,
    scale_map,
    thomas_cone,
)
from .corpus import random_polynomial
from .errors import AmbientError
from .expr import Chart, Expr, to_fraction
from .log_utils import get_default_logger
from .qcurv import ambient_laplacian_power, horizontal_annihilation_check, q_report
from .tensor import (
    CheckReport,
    TensorField,
    check_homothety,
    check_isotropic,
    check_parallel_distribution,
    covariant_derivative,
    equality_report,
    levi_civita,
    lie_derivative,
    pullback_connection,
    ricci,
    zero_report,
)
from .tensor.checks import component_witness

log = get_default_logger(__name__)

HORIZONTAL_SAMPLES = 10
PW_RICCI_CONSTANT = Fraction(2)


class VerificationReport(object):
    """
    Ordered list of check results for one connection.
    """

    def __init__(self, name, suite, timing=True):
        self.name = name
        self.suite = suite
        self.timing = timing
        self.checks = []

    def __repr__(self):
        return f"VerificationReport({self.name!r}, suite={self.suite!r}, passed={self.passed})"

    @property
    def passed(self):
        return all(entry["verdict"] == "pass" for entry in self.checks)

    def record(self, check, seconds=None):
        entry = OrderedDict(check.to_dict())
        if self.timing and seconds is not None:
            entry["timing"] = round(seconds, 3)
        self.checks.append(entry)
        return check

    def run(self, name, function):
        """
        Run one check, turning an AmbientError into a failed entry.

        :param name: string: check name used in the report
        :param function: callable returning a CheckReport
        """
        started = time.perf_counter()
        try:
            check = function()
        except AmbientError as e:
            log.warning("Check %s raised %s", name, e)
            check = CheckReport(name, False, witness={"error": e.code, "message": str(e)})
        check.name = name
        log.info("%s: %s", name, "pass" if check.passed else "fail")
        return self.record(check, time.perf_counter() - started)

    def to_dict(self):
        data = OrderedDict()
        data["name"] = self.name
        data["suite"] = self.suite
        data["verdict"] = "pass" if self.passed else "fail"
        data["summary"] = summarize(self.checks)
        data["checks"] = list(self.checks)
        return data


def summarize(checks):
    return OrderedDict(
        [
            ("total", len(checks)),
            ("passed", len(jmespath.search("[?verdict=='pass']", checks) or [])),
            ("failed", jmespath.search("[?verdict=='fail'].check", checks) or []),
        ]
    )


def _metric_ricci_flat(g, seed):
    return zero_report("ricci-flat", ricci(levi_civita(g)), seed)


def ricci_suite(report, bundle):
    seed = bundle.seed
    report.run("thomas-cone-ricci-flat", lambda: zero_report("", ricci(bundle.get("thomas")), seed))
    report.run("cone-metric-ricci-flat", lambda: _metric_ricci_flat(bundle.get("g_cone"), seed))
    report.run("ambient-ricci-flat", lambda: _metric_ricci_flat(bundle.get("g_ambient"), seed))


def _restriction_check(bundle):
    ambient = bundle.get("g_ambient")
    g = bundle.get("g_pw")
    n = bundle.n
    restricted = TensorField.from_function(
        g.chart,
        "dd",
        lambda index: ambient[index[0] + 1, index[1] + 1].substitute({AMBIENT_T: 1, AMBIENT_RHO: 0}, g.chart),
    )
    report = equality_report("", restricted, g, bundle.seed)
    report.details = {"dimension": 2 * n}
    return report


def _euler_identity_check(bundle):
    thomas = bundle.get("thomas")
    z = bundle.get("fields")["Z"]
    derivative = covariant_derivative(thomas, z)
    identity = TensorField.from_function(thomas.chart, "du", lambda index: 1 if index[0] == index[1] else 0)
    return equality_report("", derivative, identity, bundle.seed)


def diagram_suite(report, bundle):
    seed = bundle.seed
    report.run(
        "cone-routes-agree", lambda: equality_report("", bundle.get("g_cone_thomas"), bundle.get("g_cone"), seed)
    )
    report.run(
        "normal-form-agrees", lambda: equality_report("", bundle.get("g_normalized"), bundle.get("g_ambient"), seed)
    )
    report.run("ambient-restricts-to-pw", lambda: _restriction_check(bundle))
    report.run("cone-euler-identity", lambda: _euler_identity_check(bundle))


def _homothety(bundle, field, expected):
    def check():
        result = check_homothety(bundle.get("g_ambient"), bundle.get("fields")[field], bundle.seed)
        if result.passed and result.details.get("constant") != expected:
            result.passed = False
            result.witness = {"expected": expected, "constant": result.details.get("constant")}
        return result

    return check


def _killing_check(bundle):
    derivative = lie_derivative(bundle.get("fields")["killing"], bundle.get("g_ambient"))
    return zero_report("", derivative, bundle.seed)


def _field_sum_check(bundle):
    fields = bundle.get("fields")
    return equality_report("", fields["euler"], fields["killing"] + fields["k"], bundle.seed)


def symmetry_suite(report, bundle):
    report.run("euler-homothety", _homothety(bundle, "euler", "2"))
    report.run("k-homothety", _homothety(bundle, "k", "2"))
    report.run("killing-field", lambda: _killing_check(bundle))
    report.run("euler-decomposition", lambda: _field_sum_check(bundle))


def distribution_suite(report, bundle):
    def check():
        g = bundle.get("g_ambient")
        chart = g.chart
        fibers = chart.coords[bundle.n + 1 :]
        frame = [TensorField.vector(chart, {coord: 1}) for coord in fibers]
        return check_parallel_distribution(g, frame, bundle.seed)

    report.run("parallel-isotropic-distribution", check)


def _pw_ricci_support(bundle):
    g = bundle.get("g_pw")
    curvature = ricci(levi_civita(g))
    n = bundle.n
    for (i, j), value in curvature.nonzero_components():
        if i >= n or j >= n:
            return CheckReport("", False, witness=component_witness(curvature, (i, j), bundle.seed))
    return CheckReport("", True)


def pw_ricci_constant_check(bundle, expected=PW_RICCI_CONSTANT):
    """
    Ric(g_pw) = expected pi^* Ric(D), or Ric(g_pw) = 0 when Ric(D) = 0.

    :param bundle: ConstructionBundle
    :param expected: rational the pulled-back base Ricci tensor is scaled by
    :return: CheckReport
    """
    g = bundle.get("g_pw")
    constant = pw_ricci_constant(bundle.connection, g)
    details = {"constant": None if constant is None else str(constant)}
    if constant is None:
        check = zero_report("", ricci(levi_civita(g)), bundle.seed)
        check.details = details
        return check
    expected = to_fraction(expected)
    if constant != expected:
        return CheckReport("", False, witness={"constant": str(constant), "expected": str(expected)}, details=details)
    return CheckReport("", True, details=details)


def isotropy_suite(report, bundle):
    def ricci_isotropic():
        g = bundle.get("g_pw")
        return check_isotropic(g, ricci(levi_civita(g)), bundle.seed)

    def derivative_isotropic():
        g = bundle.get("g_pw")
        conn = levi_civita(g)
        return check_isotropic(g, covariant_derivative(conn, ricci(conn)), bundle.seed)

    report.run("pw-ricci-isotropic", ricci_isotropic)
    report.run("pw-ricci-derivative-isotropic", derivative_isotropic)
    report.run("pw-ricci-horizontal-support", lambda: _pw_ricci_support(bundle))
    report.run("pw-ricci-constant", lambda: pw_ricci_constant_check(bundle))


def default_scale(chart):
    """1 + x_1^2, positive on the whole chart."""
    first = Expr.symbol(chart, chart.coords[0])
    return 1 + first**2


def scale_suite(report, bundle, scale=None):
    conn = bundle.connection

    def check():
        h = scale or default_scale(conn.chart)
        changed = projective_change(conn, h)
        changed.validate()
        cone = cone_chart(conn.chart)
        pulled = pullback_connection(scale_map(conn, h), thomas_cone(changed), cone)
        return equality_report("", pulled.christoffel, bundle.get("thomas").christoffel, bundle.seed)

    report.run("thomas-cone-scale-independent", check)


def horizontal_samples(chart, n, count, seed):
    """Random polynomials of degree <= 2 in (t, x^A), read on the ambient chart."""
    horizontal = Chart("horizontal", chart.coords[: n + 1])
    rng = np.random.default_rng(seed)
    samples = []
    while len(samples) < count:
        value = random_polynomial(horizontal, 2, rng)
        if not value.is_constant:
            samples.append(lift(value, chart))
    return samples


def qcurv_suite(report, bundle, samples=HORIZONTAL_SAMPLES):
    def vanishing():
        result = q_report(bundle.get("g_ambient"))
        check = CheckReport("", result.vanishes, details=result.to_dict())
        if not result.vanishes:
            check.witness = {"Q": str(result.value)}
        return check

    def first_power():
        g = bundle.get("g_ambient")
        value = ambient_laplacian_power(g, 1)
        return CheckReport("", value.is_zero, witness=None if value.is_zero else {"value": str(value)})

    report.run("laplacian-log-t-vanishes", first_power)
    report.run("q-curvature-vanishes", vanishing)

    def horizontal():
        g = bundle.get("g_ambient")
        failures = []
        functions = [Expr.log(g.chart, AMBIENT_T)] + horizontal_samples(g.chart, bundle.n, samples, bundle.seed)
        for f in functions:
            result = horizontal_annihilation_check(g, f)
            if not result.passed:
                failures.append(result.witness)
        witness = failures[0] if failures else None
        return CheckReport("", not failures, witness=witness, details={"functions": len(functions)})

    report.run("horizontal-annihilation", horizontal)


SUITES = OrderedDict(
    [
        ("ricci", ricci_suite),
        ("diagram", diagram_suite),
        ("symmetry", symmetry_suite),
        ("distribution", distribution_suite),
        ("isotropy", isotropy_suite),
        ("scale", scale_suite),
        ("qcurv", qcurv_suite),
    ]
)
ALL_SUITES = ("ricci", "diagram", "symmetry", "distribution", "isotropy")


def verify(conn, suite="all", seed=0, timing=True):
    """
    Run a named suite ("all" runs ricci, diagram, symmetry, distribution and isotropy).

    :param conn: AffineConnection: validated before any suite runs
    :param suite: string
    :param seed: int (default is 0)
    :param timing: bool (default is True): include per-check timings
    :return: VerificationReport
    """
    if suite != "all" and suite not in SUITES:
        raise KeyError(f"Unknown suite [{suite}], expected one of {['all'] + list(SUITES)}")
    bundle = ConstructionBundle(conn, seed=seed)
    report = VerificationReport(conn.name or conn.chart.name, suite, timing=timing)
    names = ALL_SUITES if suite == "all" else (suite,)
    for name in names:
        log.info("Running suite %s on %r", name, conn)
        SUITES[name](report, bundle)
    return report
