# coding=utf-8
"""
Order-by-order solver for the ambient metric ansatz

    g~ = t^2 g_ij(x, rho) dx^i dx^j + 2 rho dt^2 + 2 t dt drho,  g_ij(x, rho) = sum_k rho^k phi^(k)_ij

At order k the entries of phi^(k) are fresh constant symbols. The coefficient of rho^(k-1) in Ric_ij and,
for k >= 2, of rho^(k-2) in Ric_rho,rho are affine in them; the linear system is solved exactly, the
solution substituted, and the solved orders re-verified with the unknown-free metric.
"""
from fractions import Fraction

import numpy as np

from .constructions import AMBIENT_RHO, AMBIENT_T, ambient_chart, lift
from .errors import DimensionError, ExpansionError, NonlinearSystemError, TensorSymmetryError
from .expr import Expr, solve_linear
from .log_utils import get_default_logger
from .tensor import (
    AffineConnection,
    CheckReport,
    MetricTensor,
    TensorField,
    christoffel_components,
    levi_civita,
    ricci,
)
from .tensor.checks import component_witness
from .tensor.fields import empty_components

log = get_default_logger(__name__)


def unknown_name(order, i, j):
    return f"phi{order}_{i}_{j}"


class FgAnsatz(object):
    """
    Base metric g^(0) on an m-dimensional chart plus coefficient tensors phi^(1..K).
    """

    def __init__(self, base, coefficients=None, order=None):
        """
        :param base: MetricTensor: g^(0)
        :param coefficients: list of TensorField "dd" on base's chart (may carry parameters)
        :param order: int (default is len(coefficients)): truncation order K
        """
        coefficients = list(coefficients or [])
        order = len(coefficients) if order is None else order
        if order < len(coefficients):
            coefficients = coefficients[:order]
        for k, coefficient in enumerate(coefficients, start=1):
            if coefficient.slots != "dd" or not coefficient.chart.same_coordinates(base.chart):
                raise DimensionError(f"Coefficient phi^({k}) must be a (0,2) tensor on {base.chart!r}")
            if not coefficient.is_symmetric():
                raise TensorSymmetryError(f"Coefficient phi^({k}) is not symmetric")
        self.base = base
        self.coefficients = coefficients
        self.order = order
        self.chart = ambient_chart(base.chart, fiber_prefix=None)

    def __repr__(self):
        return f"FgAnsatz(m={self.base.dim}, K={self.order})"

    @property
    def m(self):
        return self.base.dim

    def coefficient(self, k):
        if k == 0:
            return self.base
        if k <= len(self.coefficients):
            return self.coefficients[k - 1]
        return TensorField.zeros(self.base.chart, "dd")

    def _parameters(self):
        names = list(self.base.chart.parameters)
        for coefficient in self.coefficients:
            names.extend(p for p in coefficient.chart.parameters if p not in names)
        return names

    def ambient_chart(self):
        return self.chart.with_parameters(self._parameters())

    def family(self, chart=None):
        """g_ij(x, rho) as an m x m list of Expr on the ambient chart."""
        chart = chart or self.ambient_chart()
        rho = Expr.symbol(chart, AMBIENT_RHO)
        m = self.m
        block = [[Expr.zero(chart) for _ in range(m)] for _ in range(m)]
        for k in range(self.order + 1):
            coefficient = self.coefficient(k)
            power = rho**k
            for i in range(m):
                for j in range(m):
                    value = coefficient[i, j]
                    if not value.is_zero:
                        block[i][j] = block[i][j] + power * lift(value, chart)
        return block

    def metric(self, inverse=None):
        """The assembled ambient metric."""
        chart = self.ambient_chart()
        t = Expr.symbol(chart, AMBIENT_T)
        rho = Expr.symbol(chart, AMBIENT_RHO)
        m = self.m
        block = self.family(chart)
        components = empty_components(m + 2, 2)
        for index in np.ndindex(components.shape):
            components[index] = Expr.zero(chart)
        components[0, 0] = 2 * rho
        components[0, m + 1] = t
        components[m + 1, 0] = t
        for i in range(m):
            for j in range(m):
                components[i + 1, j + 1] = t**2 * block[i][j]
        return MetricTensor(chart, components, inverse=inverse, check=False)

    def truncated_inverse(self, order):
        """
        Inverse of the assembled metric modulo rho^(order+1): the (t, rho) block inverted exactly,
        g_ij(x, rho)^-1 by the Neumann series of g^(0)^-1 (g - g^(0)).
        """
        chart = self.ambient_chart()
        t = Expr.symbol(chart, AMBIENT_T)
        rho = Expr.symbol(chart, AMBIENT_RHO)
        m = self.m
        base_inverse = [[lift(self.base.inverse[i, j], chart) for j in range(m)] for i in range(m)]
        block = self.family(chart)
        perturbation = [[block[i][j] - lift(self.base[i, j], chart) for j in range(m)] for i in range(m)]
        # step = -g0^-1 H
        step = [[Expr.zero(chart) for _ in range(m)] for _ in range(m)]
        for i in range(m):
            for j in range(m):
                total = Expr.zero(chart)
                for k in range(m):
                    if not base_inverse[i][k].is_zero and not perturbation[k][j].is_zero:
                        total = total - base_inverse[i][k] * perturbation[k][j]
                step[i][j] = total.truncate(AMBIENT_RHO, order)
        term = base_inverse
        series = [row[:] for row in base_inverse]
        for _ in range(order):
            following = [[Expr.zero(chart) for _ in range(m)] for _ in range(m)]
            for i in range(m):
                for j in range(m):
                    total = Expr.zero(chart)
                    for k in range(m):
                        if not step[i][k].is_zero and not term[k][j].is_zero:
                            total = total + step[i][k] * term[k][j]
                    following[i][j] = total.truncate(AMBIENT_RHO, order)
            term = following
            if all(value.is_zero for row in term for value in row):
                break
            for i in range(m):
                for j in range(m):
                    series[i][j] = series[i][j] + term[i][j]
        inverse = empty_components(m + 2, 2)
        for index in np.ndindex(inverse.shape):
            inverse[index] = Expr.zero(chart)
        inverse[0, m + 1] = 1 / t
        inverse[m + 1, 0] = 1 / t
        inverse[m + 1, m + 1] = -2 * rho / t**2
        for i in range(m):
            for j in range(m):
                inverse[i + 1, j + 1] = series[i][j] / t**2
        return inverse

    def ricci_to_order(self, order):
        """
        Ricci tensor of the assembled metric, exact in its coefficients of rho^l for l < order
        (Christoffel symbols and the inverse are truncated past rho^order).
        """
        metric = self.metric()
        inverse = self.truncated_inverse(order)
        christoffel = christoffel_components(metric, inverse, truncate=(AMBIENT_RHO, order))
        connection = AffineConnection(metric.chart, christoffel)
        return ricci(connection, check_symmetry=False, truncate=(AMBIENT_RHO, order))


def assemble_ansatz(base, coefficients, order=None):
    """
    Ambient metric t^2 (sum_k rho^k phi^(k))_ij dx^i dx^j + 2 rho dt^2 + 2 t dt drho with phi^(0) = base.

    :param base: MetricTensor on an m-dimensional chart
    :param coefficients: list of TensorField "dd": phi^(1), phi^(2), ...
    :param order: int (default is len(coefficients)): truncation order K
    :return: MetricTensor on (t, x, rho)
    """
    return FgAnsatz(base, coefficients, order).metric()


class ExpansionResult(object):
    """
    Solved coefficients phi^(1..K), residual tensors per order (coefficient of rho^(k-1) in Ric_ij after
    substitution), the trace-free residual at the critical order m/2 and the unknowns left free.
    """

    def __init__(self, base, order):
        self.base = base
        self.order = order
        self.coefficients = []
        self.residuals = {}
        self.free = {}
        self.inconsistent = []
        self.obstruction = None

    def __repr__(self):
        return f"ExpansionResult(m={self.m}, K={self.order}, free_orders={sorted(self.free)})"

    @property
    def m(self):
        return self.base.dim

    @property
    def critical_order(self):
        return self.m // 2 if self.m % 2 == 0 else None

    def coefficient(self, k):
        return self.coefficients[k - 1]

    def ansatz(self):
        return FgAnsatz(self.base, self.coefficients, self.order)

    def metric(self):
        return self.ansatz().metric()

    def last_nonzero_order(self):
        """Highest k with phi^(k) != 0, 0 when the expansion is constant in rho."""
        for k in range(len(self.coefficients), 0, -1):
            if not self.coefficients[k - 1].is_zero:
                return k
        return 0

    @property
    def obstructed(self):
        return self.obstruction is not None and not self.obstruction.is_zero


def _trace_free(tensor, base):
    m = base.dim
    trace = base.trace(tensor)
    return tensor - base.scale(trace / m)


def _unknown_tensor(base, order):
    m = base.dim
    names = [unknown_name(order, i, j) for i in range(m) for j in range(i, m)]
    chart = base.chart.with_parameters(names)
    components = empty_components(m, 2)
    for i in range(m):
        for j in range(i, m):
            symbol = Expr.symbol(chart, unknown_name(order, i, j))
            components[i, j] = symbol
            components[j, i] = symbol
    return names, TensorField(chart, "dd", components, symmetries=[(0, 1)], check_symmetry=False)


def _equations(curvature, base, order):
    """
    Coefficient of rho^(order-1) in Ric_ij (i <= j) and of rho^(order-2) in Ric_rho,rho.

    At the critical order 2 order = m the Ric_ij equations only see the trace of phi^(order); they are
    replaced by their g^(0)-trace so the trace is fixed independently of component order.
    """
    m = base.dim
    chart = curvature.chart
    ij = {}
    for i in range(m):
        for j in range(i, m):
            ij[i, j] = curvature[i + 1, j + 1].taylor_coefficient(AMBIENT_RHO, order - 1)
    if 2 * order == m:
        trace = Expr.zero(chart)
        for (i, j), value in ij.items():
            weight = lift(base.inverse[i, j], chart)
            trace = trace + (weight if i == j else 2 * weight) * value
        equations = [trace]
    else:
        equations = list(ij.values())
    if order >= 2:
        equations.append(curvature[m + 1, m + 1].taylor_coefficient(AMBIENT_RHO, order - 2))
    return equations


def _residual_tensor(curvature, base, order):
    m = base.dim
    components = empty_components(m, 2)
    for i in range(m):
        for j in range(m):
            components[i, j] = lift(curvature[i + 1, j + 1].taylor_coefficient(AMBIENT_RHO, order - 1), base.chart)
    return TensorField(base.chart, "dd", components, check_symmetry=False)


def fg_expand(base, order=None):
    """
    Determine phi^(1..K) making the ambient Ricci tensor vanish order by order.

    :param base: MetricTensor: g^(0), nondegenerate
    :param order: int (default is m/2 + 1, n + 1 for a Patterson-Walker metric in dimension 2n)
    :return: ExpansionResult
    """
    base.check_nondegenerate()
    m = base.dim
    order = m // 2 + 1 if order is None else order
    if order < 1:
        raise ExpansionError(f"Expansion order must be at least 1, got {order}")
    result = ExpansionResult(base, order)
    solved = []
    for k in range(1, order + 1):
        names, unknown = _unknown_tensor(base, k)
        trial = FgAnsatz(base, solved + [unknown], k)
        equations = _equations(trial.ricci_to_order(k), base, k)
        try:
            solution = solve_linear(equations, names)
        except NonlinearSystemError as e:
            raise ExpansionError(f"Order {k} equations are not affine in phi^({k})", reason=e)
        values = empty_components(m, 2)
        for i in range(m):
            for j in range(i, m):
                value = solution.get(unknown_name(k, i, j))
                if any(value.depends_on(name) for name in names):
                    raise ExpansionError(f"Solution for phi^({k}) still depends on unknowns")
                values[i, j] = lift(value, base.chart)
                values[j, i] = values[i, j]
        coefficient = TensorField(base.chart, "dd", values, symmetries=[(0, 1)], check_symmetry=False)
        if 2 * k == m:
            # only the trace is determined at the critical order, keep the pure-trace part
            coefficient = base.scale(base.trace(coefficient) / m)
        if solution.free:
            result.free[k] = [name for name in solution.free]
            log.info("Order %s: unknowns %s left undetermined", k, solution.free)
        solved.append(coefficient)
        check = FgAnsatz(base, solved, k).ricci_to_order(k)
        residual = _residual_tensor(check, base, k)
        result.residuals[k] = residual
        rho_residual = Expr.zero(check.chart)
        if k >= 2:
            rho_residual = check[m + 1, m + 1].taylor_coefficient(AMBIENT_RHO, k - 2)
        if 2 * k == m:
            result.obstruction = _trace_free(residual, base)
            if not result.obstruction.is_zero:
                log.warning("Nonzero obstruction residual at order %s", k)
            residual = residual - result.obstruction
        if not residual.is_zero or not rho_residual.is_zero:
            if solution.consistent:
                raise ExpansionError(f"Guard re-check failed: Ricci coefficient at order {k} does not vanish")
            result.inconsistent.append(k)
            log.warning("Order %s equations are inconsistent (%s residual equations)", k, len(solution.residuals))
        log.debug("Order %s solved", k)
    result.coefficients = solved
    return result


def obstruction_residual(base):
    """
    Trace-free residual of the order m/2 equations, zero iff the expansion continues unobstructed.

    :param base: MetricTensor on a chart of even dimension m
    :return: TensorField "dd"
    """
    m = base.dim
    if m % 2:
        raise DimensionError(f"The obstruction residual is defined for even m, got m = {m}")
    return fg_expand(base, m // 2).obstruction


def assemble_einstein_expansion(base, lam, order):
    """
    Coefficients of (1 + lam rho)^2 g: phi^(1) = 2 lam g, phi^(2) = lam^2 g, zero beyond.

    :param base: MetricTensor
    :param lam: rational
    :param order: int
    :return: list of TensorField
    """
    lam = Fraction(lam)
    factors = [2 * lam, lam**2]
    coefficients = []
    for k in range(1, order + 1):
        factor = factors[k - 1] if k <= 2 else 0
        coefficients.append(TensorField(base.chart, "dd", base.scale(factor).components, symmetries=[(0, 1)]))
    return coefficients


def ricci_flat_report(metric, seed=0):
    """
    Ricci tensor of a metric component by component, with a verdict and a witness point for the first
    nonzero component.

    :param metric: MetricTensor
    :param seed: int
    :return: CheckReport with details["components"] mapping "a,b" -> printed component
    """
    curvature = ricci(levi_civita(metric))
    components = {}
    witness = None
    for a in range(metric.dim):
        for b in range(a, metric.dim):
            value = curvature[a, b]
            components[curvature.component_name((a, b))] = str(value)
            if witness is None and not value.is_zero:
                witness = component_witness(curvature, (a, b), seed)
    return CheckReport("ricci-flat", witness is None, witness=witness, details={"components": components})
