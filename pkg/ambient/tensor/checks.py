# coding=utf-8
from fractions import Fraction
from itertools import product

import numpy as np

from ..errors import DimensionError, EvaluationError, ExprError
from ..expr import Expr, row_echelon, solve_linear
from ..log_utils import get_default_logger
from .curvature import covariant_derivative, levi_civita
from .lie import lie_derivative

log = get_default_logger(__name__)

POINT_ATTEMPTS = 25


class CheckReport(object):
    """
    Outcome of one exact check: a verdict plus, on failure, the offending component and a rational
    point where it evaluates to something nonzero (when one is found).
    """

    def __init__(self, name, passed, witness=None, details=None):
        self.name = name
        self.passed = bool(passed)
        self.witness = witness
        self.details = details or {}

    def __bool__(self):
        return self.passed

    def __repr__(self):
        verdict = "pass" if self.passed else "fail"
        return f"CheckReport({self.name!r}, {verdict})"

    def to_dict(self):
        data = {"check": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.witness is not None:
            data["witness"] = self.witness
        if self.details:
            data["details"] = self.details
        return data


def random_point(chart, rng, spread=7):
    """
    Random rational point with small numerators and denominators; positive coordinates get positive values.

    :param chart: Chart
    :param rng: numpy Generator
    :param spread: int: bound on numerators and denominators
    :return: dict coordinate -> Fraction
    """
    point = {}
    for coord in chart.coords:
        numerator = int(rng.integers(1, spread + 1))
        denominator = int(rng.integers(1, spread + 1))
        value = Fraction(numerator, denominator)
        if not chart.is_positive(coord) and rng.integers(0, 2):
            value = -value
        point[coord] = value
    return point


def witness_point(e, seed=0, attempts=POINT_ATTEMPTS):
    """
    A rational point where a nonzero scalar evaluates to a nonzero value.

    :param e: Expr
    :param seed: int
    :return: (dict coordinate -> string, string value) or None when no point was found
    """
    if e.is_zero:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        point = random_point(e.chart, rng)
        try:
            value = e.evaluate(point)
        except EvaluationError:
            # pole, logarithm or leftover parameter
            if e.has_logarithm() or any(e.depends_on(p) for p in e.chart.parameters):
                return None
            continue
        if value != 0:
            return {coord: str(value) for coord, value in point.items()}, str(value)
    return None


def component_witness(tensor, index, seed=0):
    """Witness document for a nonzero tensor component."""
    value = tensor[index]
    witness = {"component": tensor.component_name(index), "value": str(value)}
    found = witness_point(value, seed=seed)
    if found is not None:
        witness["point"], witness["point_value"] = found
    return witness


def zero_report(name, tensor, seed=0):
    """
    Pass iff every component is the zero scalar.

    :param name: string: check name
    :param tensor: TensorField
    :return: CheckReport
    """
    for index, value in tensor.items():
        if not value.is_zero:
            return CheckReport(name, False, witness=component_witness(tensor, index, seed))
    return CheckReport(name, True)


def equality_report(name, left, right, seed=0):
    """Pass iff two tensors (or connections' Christoffel arrays) agree component-wise."""
    index = left.difference_witness(right)
    if index is None:
        return CheckReport(name, True)
    difference = left - right
    return CheckReport(name, False, witness=component_witness(difference, index, seed))


def _perfect_matchings(slots):
    if not slots:
        yield []
        return
    first = slots[0]
    for k in range(1, len(slots)):
        pair = (first, slots[k])
        rest = slots[1:k] + slots[k + 1 :]
        for matching in _perfect_matchings(rest):
            yield [pair] + matching


def check_isotropic(g, tensor, seed=0):
    """
    Total isotropy: every full contraction of T (x) T against inverse-metric pairings is zero.

    :param g: MetricTensor
    :param tensor: TensorField, fully covariant
    :return: CheckReport, failing contractions listed in details
    """
    if set(tensor.slots) != {"d"}:
        raise DimensionError(f"Isotropy is defined for covariant tensors, got slots [{tensor.slots}]")
    rank = tensor.rank
    inverse = g.inverse
    entries = [(i, j, inverse[i, j]) for i, j in np.ndindex(inverse.shape) if not inverse[i, j].is_zero]
    chart = g.chart.union(tensor.chart)
    failures = []
    for matching in _perfect_matchings(list(range(2 * rank))):
        total = Expr.zero(chart)
        for choice in product(entries, repeat=rank):
            index = [0] * (2 * rank)
            weight = None
            for (first, second), (i, j, value) in zip(matching, choice):
                index[first], index[second] = i, j
                weight = value if weight is None else weight * value
            left = tensor[tuple(index[:rank])]
            if left.is_zero:
                continue
            right = tensor[tuple(index[rank:])]
            if right.is_zero:
                continue
            total = total + weight * left * right
        if not total.is_zero:
            failures.append({"pairing": [list(pair) for pair in matching], "value": str(total)})
    passed = not failures
    witness = None
    if failures:
        witness = failures[0]
    log.debug("Isotropy of rank %s tensor: %s failing contractions", rank, len(failures))
    return CheckReport("isotropic", passed, witness=witness, details={"failures": failures} if failures else None)


def _frame_rank(frame, chart, seed):
    rng = np.random.default_rng(seed)
    for _ in range(POINT_ATTEMPTS):
        point = random_point(chart, rng)
        try:
            rows = [[Expr.constant(chart, vector[k].evaluate(point)) for k in range(chart.dim)] for vector in frame]
        except EvaluationError:
            continue
        pivots, _, _ = row_echelon(rows, chart.dim)
        return len(pivots), point
    raise ExprError("No admissible rational point found for the frame independence test")


def check_parallel_distribution(g, frame, seed=0):
    """
    The span of the frame is totally isotropic and preserved by the Levi-Civita connection.

    :param g: MetricTensor
    :param frame: list of TensorField vector fields
    :param seed: int: seed of the independence test point
    :return: CheckReport
    """
    chart = g.chart
    rank, point = _frame_rank(frame, chart, seed)
    if rank < len(frame):
        raise DimensionError(
            f"Frame of {len(frame)} vectors has rank {rank} at {({c: str(v) for c, v in point.items()})}"
        )
    for i, first in enumerate(frame):
        for j in range(i, len(frame)):
            value = g.pair(first, frame[j])
            if not value.is_zero:
                return CheckReport(
                    "parallel-distribution",
                    False,
                    witness={"isotropy": [i, j], "value": str(value)},
                )
    conn = levi_civita(g)
    unknowns = [f"frame_c{k}" for k in range(len(frame))]
    for v, vector in enumerate(frame):
        derivative = covariant_derivative(conn, vector)
        for x, coord in enumerate(chart.coords):
            target = chart.with_parameters(unknowns)
            coefficients = [Expr.symbol(target, u) for u in unknowns]
            equations = []
            for k in range(chart.dim):
                total = -derivative[x, k].in_chart(target)
                for coefficient, member in zip(coefficients, frame):
                    if not member[k].is_zero:
                        total = total + coefficient * member[k]
                equations.append(total)
            solution = solve_linear(equations, unknowns)
            if not solution.consistent:
                return CheckReport(
                    "parallel-distribution",
                    False,
                    witness={"direction": coord, "vector": v, "residual": str(solution.residuals[0])},
                )
    return CheckReport("parallel-distribution", True)


def check_homothety(g, vector, seed=0):
    """
    L_X g = c g for a constant c.

    :param g: MetricTensor
    :param vector: TensorField vector field
    :return: CheckReport with the constant in details["constant"] when it passes
    """
    derivative = lie_derivative(vector, g)
    ratio = None
    for index, value in g.items():
        if not value.is_zero:
            ratio = derivative[index] / value
            break
    if ratio is None or not ratio.is_constant:
        witness = None if ratio is None else {"ratio": str(ratio)}
        return CheckReport("homothety", False, witness=witness)
    difference = derivative - g.scale(ratio)
    report = zero_report("homothety", difference, seed)
    report.details = {"constant": str(ratio)}
    return report
