# coding=utf-8
"""
Scalars over one chart sharing a single polynomial denominator.

A value is a pair (N, k) standing for N / D^k, with D fixed for the whole frame and N a polynomial
of the chart's ring. Sums, products and partial derivatives never leave the polynomial ring, so the
gcd of numerator and denominator is taken once, when a value is read back as an Expr.
"""
from sympy.polys.domains import QQ
from sympy.polys.polyerrors import ExactQuotientFailed

from ..errors import ExprError
from ..log_utils import get_default_logger
from .chart import log_name
from .core import Expr, to_fraction

log = get_default_logger(__name__)


def poly_lcm(first, second):
    """Least common multiple of two polynomials of one ring."""
    if second.is_ground:
        return first
    if first.is_ground:
        return second
    return first * second.exquo(first.gcd(second))


class DenominatorFrame(object):
    """
    Polynomial arithmetic on pairs (N, k) meaning N / D^k.

    Differentiation along a positive coordinate x with ln(x) present in N needs x | D; frames built by
    spanning() include such coordinates in D.
    """

    def __init__(self, chart, denominator=None):
        """
        :param chart: Chart
        :param denominator: PolyElement of chart.field.ring (default is 1)
        """
        self.chart = chart
        self.ring = chart.field.ring
        self.denominator = self.ring.one if denominator is None else denominator
        self._powers = [self.ring.one, self.denominator]
        self._partials = {}
        self._cofactors = {}

    def __repr__(self):
        return f"DenominatorFrame({self.chart!r}, terms={len(self.denominator)})"

    @classmethod
    def spanning(cls, chart, values):
        """
        Frame whose denominator is the lcm of the denominators of the given scalars.

        :param chart: Chart
        :param values: iterable of Expr
        :return: DenominatorFrame
        """
        ring = chart.field.ring
        denominator = ring.one
        seen = set()
        logs = set()
        for value in values:
            if value.chart != chart:
                value = value.in_chart(chart)
            denom = value.value.denom
            if not denom.is_ground and denom not in seen:
                seen.add(denom)
                denominator = poly_lcm(denominator, denom)
            for coord in chart.positive:
                if coord not in logs and value.depends_on(log_name(coord)):
                    logs.add(coord)
        for coord in sorted(logs):
            denominator = poly_lcm(denominator, ring.gens[chart.generator_index(coord)])
        return cls(chart, denominator)

    @property
    def zero(self):
        return self.ring.zero, 0

    def power(self, k):
        while len(self._powers) <= k:
            self._powers.append(self._powers[-1] * self.denominator)
        return self._powers[k]

    def lift(self, value):
        """
        :param value: Expr whose denominator divides D
        :return: (N, k)
        """
        if value.chart != self.chart:
            value = value.in_chart(self.chart)
        numer, denom = value.value.numer, value.value.denom
        if not numer:
            return self.zero
        if denom == self.ring.one:
            return numer, 0
        try:
            return numer * self.denominator.exquo(denom), 1
        except ExactQuotientFailed as e:
            raise ExprError(f"Denominator of {value} does not divide the frame denominator", reason=e)

    def to_expr(self, item):
        numer, k = item
        field = self.chart.field
        if not numer:
            return Expr.zero(self.chart)
        if k == 0 or self.denominator == self.ring.one:
            return Expr(self.chart, field(numer))
        return Expr(self.chart, field(numer) / field(self.power(k)))

    @staticmethod
    def is_zero(item):
        return not item[0]

    def add(self, first, second):
        (p, j), (q, k) = first, second
        if not q:
            return first
        if not p:
            return second
        if j < k:
            p, j, q, k = q, k, p, j
        if j == k:
            return p + q, j
        return p + q * self.power(j - k), j

    def neg(self, item):
        return -item[0], item[1]

    def sub(self, first, second):
        return self.add(first, self.neg(second))

    def mul(self, first, second):
        (p, j), (q, k) = first, second
        if not p or not q:
            return self.zero
        return p * q, j + k

    def scale(self, item, factor):
        """Multiply by a rational constant."""
        factor = to_fraction(factor)
        if factor == 0 or not item[0]:
            return self.zero
        return item[0].mul_ground(QQ(factor.numerator, factor.denominator)), item[1]

    def _partial(self, index):
        if index not in self._partials:
            self._partials[index] = self.denominator.diff(self.ring.gens[index])
        return self._partials[index]

    def _cofactor(self, index):
        # D / x for a positive coordinate x
        if index not in self._cofactors:
            try:
                self._cofactors[index] = self.denominator.exquo(self.ring.gens[index])
            except ExactQuotientFailed as e:
                raise ExprError("Frame denominator lacks the coordinate of a logarithm", reason=e)
        return self._cofactors[index]

    def diff(self, item, coord):
        """
        Partial derivative d(N / D^k) = (dN D - k N dD + d_ln N D / x) / D^(k+1).

        :param item: (N, k)
        :param coord: string: coordinate of the chart
        """
        numer, k = item
        if not numer:
            return self.zero
        index = self.chart.coord_index(coord)
        result = numer.diff(self.ring.gens[index])
        logarithmic = None
        if self.chart.is_positive(coord):
            log_index = self.chart.generator_index(log_name(coord))
            if numer.degree(log_index) > 0:
                logarithmic = numer.diff(self.ring.gens[log_index]) * self._cofactor(index)
        if logarithmic is None and (k == 0 or self.denominator.is_ground):
            return result, k
        total = result * self.denominator
        if k:
            partial = self._partial(index)
            if partial:
                total = total - numer * partial * k
        if logarithmic is not None:
            total = total + logarithmic
        return total, k + 1

    def truncate(self, item, coord, order):
        """
        Drop the terms of degree > order in a coordinate D does not depend on.

        :param item: (N, k)
        :param coord: string
        :param order: int
        """
        numer, k = item
        if not numer:
            return item
        index = self.chart.generator_index(coord)
        if self.denominator.degree(index) > 0:
            raise ExprError(f"Cannot truncate in [{coord}]: the frame denominator depends on it")
        if numer.degree(index) <= order:
            return item
        return self.ring({monom: coeff for monom, coeff in numer.terms() if monom[index] <= order}), k
