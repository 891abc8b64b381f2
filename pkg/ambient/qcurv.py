# coding=utf-8
"""
Q-curvature by the ambient method: iterate the ambient Laplacian on ln t and restrict to rho = 0, t = 1.
"""
from .constructions import AMBIENT_RHO, AMBIENT_T
from .errors import DimensionError, HorizontalityError, NormalFormError
from .expr import Chart, Expr
from .log_utils import get_default_logger
from .tensor import CheckReport, laplacian

log = get_default_logger(__name__)


class QReport(object):
    """
    Intermediate scalars Delta^j ln t (j = 1..n) on the ambient chart, the restricted value
    -Delta^n ln t at rho = 0, t = 1 on the chart of M, and the verdict (Q = 0).
    """

    def __init__(self, powers, value, chart):
        self.powers = powers
        self.value = value
        self.chart = chart

    def __repr__(self):
        return f"QReport(n={len(self.powers)}, Q={self.value})"

    @property
    def n(self):
        return len(self.powers)

    @property
    def vanishes(self):
        return self.value.is_zero

    def to_dict(self):
        return {
            "laplacian_powers": {str(j): str(value) for j, value in enumerate(self.powers, start=1)},
            "Q": str(self.value),
            "verdict": "pass" if self.vanishes else "fail",
        }


def laplacian_powers(metric, power):
    """
    [Delta ln t, Delta^2 ln t, ..., Delta^power ln t].

    :param metric: MetricTensor on a chart with a positive coordinate t
    :param power: int >= 1
    :return: list of Expr
    """
    if power < 1:
        raise DimensionError(f"Laplacian power must be positive, got {power}")
    value = Expr.log(metric.chart, AMBIENT_T)
    powers = []
    for j in range(power):
        if powers and value.is_zero:
            powers.append(value)
            continue
        value = laplacian(metric, value)
        log.debug("Delta^%s ln t = %s", j + 1, value)
        powers.append(value)
    return powers


def ambient_laplacian_power(metric, power):
    """
    Delta^power ln t for the ambient Laplacian of metric.

    :param metric: MetricTensor
    :param power: int >= 1
    :return: Expr
    """
    return laplacian_powers(metric, power)[-1]


def normal_form_witness(metric):
    """
    First violated condition of the normal form g_tt = 2 rho, g_t,rho = t, g_rho,rho = 0,
    g_t,i = g_rho,i = 0, g_ij = t^2 h_ij(x, rho), or None.
    """
    chart = metric.chart
    coords = chart.coords
    if AMBIENT_T not in coords or AMBIENT_RHO not in coords:
        return f"chart {chart!r} has no [{AMBIENT_T}] and [{AMBIENT_RHO}] coordinates"
    if not chart.is_positive(AMBIENT_T):
        return f"coordinate [{AMBIENT_T}] is not declared positive"
    t_index, rho_index = chart.coord_index(AMBIENT_T), chart.coord_index(AMBIENT_RHO)
    t = Expr.symbol(chart, AMBIENT_T)
    rho = Expr.symbol(chart, AMBIENT_RHO)
    if metric[t_index, t_index] != 2 * rho:
        return f"g_t,t = {metric[t_index, t_index]}"
    if metric[t_index, rho_index] != t:
        return f"g_t,rho = {metric[t_index, rho_index]}"
    if not metric[rho_index, rho_index].is_zero:
        return f"g_rho,rho = {metric[rho_index, rho_index]}"
    others = [k for k in range(metric.dim) if k not in (t_index, rho_index)]
    for k in others:
        for special in (t_index, rho_index):
            if not metric[special, k].is_zero:
                return f"g_{coords[special]},{coords[k]} = {metric[special, k]}"
    for i in others:
        for j in others:
            quotient = metric[i, j] / t**2
            if quotient.depends_on(AMBIENT_T) or quotient.depends_on(f"ln({AMBIENT_T})"):
                return f"g_{coords[i]},{coords[j]} is not t^2 times a t-independent function"
    return None


def restrict(value, chart):
    """Substitute rho = 0, t = 1 and read the result on the chart of M."""
    return value.substitute({AMBIENT_RHO: 0, AMBIENT_T: 1}, chart)


def base_chart_of(metric):
    chart = metric.chart
    coords = [c for c in chart.coords if c not in (AMBIENT_T, AMBIENT_RHO)]
    return Chart(f"M({chart.name})", coords, positive=[c for c in coords if chart.is_positive(c)])


def q_report(metric):
    """
    -Delta^n ln t at rho = 0, t = 1 for an ambient metric in normal form over M of dimension m = 2n.

    :param metric: MetricTensor
    :return: QReport
    """
    problem = normal_form_witness(metric)
    if problem is not None:
        raise NormalFormError(f"Metric is not in ambient normal form: {problem}")
    m = metric.dim - 2
    if m % 2:
        raise DimensionError(f"Q-curvature needs an even-dimensional M, got m = {m}")
    powers = laplacian_powers(metric, m // 2)
    chart = base_chart_of(metric)
    value = restrict(-powers[-1], chart)
    log.info("Q-curvature on %r: %s", chart, value)
    return QReport(powers, value, chart)


def q_curvature(metric):
    """
    Q-curvature scalar of the metric induced on M.

    :param metric: MetricTensor: ambient metric in normal form
    :return: Expr on the chart of M
    """
    return q_report(metric).value


def horizontal_coordinates(chart):
    """
    Coordinates (t, x^A) of an ambient Patterson-Walker chart (t, x^A, p_A, rho).
    """
    coords = chart.coords
    if len(coords) < 6 or len(coords) % 2 or coords[0] != AMBIENT_T or coords[-1] != AMBIENT_RHO:
        raise NormalFormError(f"{chart!r} is not an ambient Patterson-Walker chart (t, x, p, rho)")
    n = (len(coords) - 2) // 2
    return coords[: n + 1]


def horizontal_annihilation_check(metric, f):
    """
    Delta f = 0 for a function of (t, x^A) only.

    :param metric: MetricTensor: ambient Patterson-Walker metric
    :param f: Expr on the metric's chart
    :return: CheckReport
    """
    allowed = horizontal_coordinates(metric.chart)
    vertical = [c for c in f.free_coordinates() if c not in allowed]
    if vertical:
        raise HorizontalityError(f"Function {f} depends on fiber coordinates {vertical}")
    value = laplacian(metric, f)
    witness = None if value.is_zero else {"function": str(f), "laplacian": str(value)}
    return CheckReport("horizontal-annihilation", value.is_zero, witness=witness)
