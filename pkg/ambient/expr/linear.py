# coding=utf-8
"""
Exact linear algebra over the field of chart scalars.

Each row is first multiplied by the lcm of its denominators, then elimination is fraction-free
(Bareiss) over the polynomial ring: every update divides exactly by the previous pivot, so no
rational-function gcd is taken during elimination. Pivots are chosen per column as the entry with
the fewest terms.
"""
from ..errors import DegenerateMetricError, ExprError
from ..log_utils import get_default_logger
from .core import Expr
from .frame import poly_lcm

log = get_default_logger(__name__)


class LinearSolution(object):
    """
    Outcome of solve_linear.

    values: dict unknown -> Expr (free unknowns included, set to zero)
    residuals: list of Expr, the constant parts of equations that reduced to 0 = r with r != 0,
               each up to a nonzero factor
    free: list of unknowns left undetermined by the system
    """

    def __init__(self, values, residuals, free):
        self.values = values
        self.residuals = residuals
        self.free = free

    def __repr__(self):
        solved = len(self.values) - len(self.free)
        return f"LinearSolution(solved={solved}, free={self.free}, residuals={len(self.residuals)})"

    @property
    def consistent(self):
        return not self.residuals

    def get(self, unknown):
        return self.values[unknown]


def _shared_chart(rows):
    chart = None
    for row in rows:
        for value in row:
            chart = value.chart if chart is None else chart.union(value.chart)
    return chart


def _cleared(row, chart):
    """Polynomial row proportional to a row of Expr, and the factor it was multiplied by."""
    values = [value.in_chart(chart).value for value in row]
    factor = chart.field.ring.one
    for value in values:
        factor = poly_lcm(factor, value.denom)
    return [value.numer * factor.exquo(value.denom) for value in values], factor


def _pick_pivot(rows, start, column):
    best = None
    for index in range(start, len(rows)):
        entry = rows[index][column]
        if not entry:
            continue
        if best is None or len(entry) < len(rows[best][column]):
            best = index
    return best


def _eliminate(rows, columns, factors=None, reduce_above=False):
    """
    Fraction-free elimination of polynomial rows, in place.

    With reduce_above the pivot rows are reduced too (Gauss-Jordan); a full-rank square block then
    ends as last_pivot times the identity.

    :param rows: list of list of PolyElement
    :param columns: int: number of leading columns to pivot on
    :param factors: list (default is None): per-row values swapped along with the rows
    :return: (pivot_columns, last_pivot, swaps)
    """
    ring = rows[0][0].ring
    previous = ring.one
    pivot_columns = []
    swaps = 0
    rank = 0
    for column in range(columns):
        if rank == len(rows):
            break
        index = _pick_pivot(rows, rank, column)
        if index is None:
            continue
        if index != rank:
            rows[rank], rows[index] = rows[index], rows[rank]
            if factors is not None:
                factors[rank], factors[index] = factors[index], factors[rank]
            swaps += 1
        pivot_row = rows[rank]
        pivot = pivot_row[column]
        targets = range(len(rows)) if reduce_above else range(rank + 1, len(rows))
        for r in targets:
            if r == rank:
                continue
            row = rows[r]
            factor = row[column]
            for c in range(len(row)):
                if c == column:
                    continue
                entry = row[c]
                if not entry and not (factor and pivot_row[c]):
                    continue
                value = pivot * entry - factor * pivot_row[c] if factor else pivot * entry
                row[c] = value if previous == ring.one else value.exquo(previous)
            row[column] = ring.zero
        previous = pivot
        pivot_columns.append(column)
        rank += 1
    return pivot_columns, previous, swaps


def row_echelon(rows, columns):
    """
    Fraction-free forward elimination, in place.

    :param rows: list of list of Expr: the (augmented) matrix
    :param columns: int: number of leading columns to pivot on
    :return: (pivot_columns, last_pivot, swaps); every row is replaced by a nonzero multiple of
             the corresponding plain Gaussian-elimination row
    """
    if not rows:
        return [], None, 0
    chart = _shared_chart(rows)
    polys = []
    factors = []
    for row in rows:
        cleared, factor = _cleared(row, chart)
        polys.append(cleared)
        factors.append(factor)
    pivot_columns, last_pivot, swaps = _eliminate(polys, columns, factors)
    field = chart.field
    for r, row in enumerate(polys):
        rows[r] = [Expr(chart, field(value) / field(factors[r])) for value in row]
    return pivot_columns, Expr(chart, field(last_pivot)), swaps


def _common_chart(exprs, unknowns):
    chart = None
    for e in exprs:
        chart = e.chart if chart is None else chart.union(e.chart)
    if chart is None:
        return None
    clashes = [u for u in unknowns if u in chart.coords]
    if clashes:
        raise ExprError(f"Unknowns {clashes} clash with coordinates of {chart!r}")
    return chart.with_parameters(unknowns)


def solve_linear(equations, unknowns):
    """
    Solve a system of equations sum_i c_i u_i + c_0 = 0, affine in the unknowns.

    :param equations: list of Expr: left-hand sides
    :param unknowns: list of string: parameter names to solve for
    :return: LinearSolution
    """
    unknowns = list(unknowns)
    chart = _common_chart(equations, unknowns)
    if chart is None:
        return LinearSolution({}, [], [])
    width = len(unknowns)
    rows = []
    for equation in equations:
        coefficients, constant = equation.in_chart(chart).linear_parts(unknowns)
        if all(c.is_zero for c in coefficients) and constant.is_zero:
            continue
        rows.append(coefficients + [-constant])
    log.debug("Solving %s equations in %s unknowns", len(rows), width)
    pivot_columns, last_pivot, _ = row_echelon(rows, width)
    rank = len(pivot_columns)
    residuals = []
    for row in rows[rank:]:
        if not row[width].is_zero:
            residuals.append(-row[width] / last_pivot)
    values = {}
    free = [u for k, u in enumerate(unknowns) if k not in pivot_columns]
    for u in free:
        values[u] = Expr.zero(chart)
    for r in reversed(range(rank)):
        column = pivot_columns[r]
        row = rows[r]
        total = row[width]
        for c in range(column + 1, width):
            if not row[c].is_zero:
                total = total - row[c] * values[unknowns[c]]
        values[unknowns[column]] = total / row[column]
    if free:
        log.info("Unknowns left free and set to zero: %s", free)
    if residuals:
        log.info("System is inconsistent: %s residual equations", len(residuals))
    return LinearSolution(values, residuals, free)


def _square(matrix, what):
    rows = [list(row) for row in matrix]
    size = len(rows)
    if not size or any(len(row) != size for row in rows):
        raise ExprError(f"{what} of a non-square matrix")
    return rows, size


def determinant(matrix):
    """
    Exact determinant of a square matrix of Expr.

    :param matrix: sequence of sequences of Expr
    :return: Expr
    """
    rows, size = _square(matrix, "Determinant")
    chart = _shared_chart(rows)
    polys = []
    scale = chart.field.ring.one
    for row in rows:
        cleared, factor = _cleared(row, chart)
        polys.append(cleared)
        scale = scale * factor
    pivot_columns, last_pivot, swaps = _eliminate(polys, size)
    if len(pivot_columns) < size:
        return Expr.zero(chart)
    field = chart.field
    value = Expr(chart, field(last_pivot) / field(scale))
    return -value if swaps % 2 else value


def invert_matrix(matrix):
    """
    Exact inverse of a square matrix of Expr.

    Rows are cleared of denominators, M = diag(f) A, and fraction-free Gauss-Jordan turns [M | I]
    into [d I | d M^-1], so that A^-1 = d M^-1 diag(f) / d.

    :param matrix: sequence of sequences of Expr
    :return: list of list of Expr
    """
    rows, size = _square(matrix, "Inverse")
    chart = _shared_chart(rows)
    ring = chart.field.ring
    polys = []
    factors = []
    for k, row in enumerate(rows):
        cleared, factor = _cleared(row, chart)
        polys.append(cleared + [ring.one if j == k else ring.zero for j in range(size)])
        factors.append(factor)
    pivot_columns, last_pivot, _ = _eliminate(polys, size, reduce_above=True)
    if len(pivot_columns) < size:
        raise DegenerateMetricError(f"Matrix of size {size} is singular (rank {len(pivot_columns)})")
    field = chart.field
    denominator = field(last_pivot)
    return [
        [Expr(chart, field(polys[i][size + j] * factors[j]) / denominator) for j in range(size)] for i in range(size)
    ]
