# coding=utf-8
from fractions import Fraction
from math import factorial

from sympy import sstr
from sympy.polys.domains import QQ

from ..errors import (
    ChartMismatchError,
    EvaluationError,
    ExprError,
    LogarithmError,
    NonlinearSystemError,
    UnknownCoordinateError,
)
from ..log_utils import get_default_logger
from .chart import log_name

log = get_default_logger(__name__)


def to_fraction(value):
    """
    Exact rational from an int, Fraction, decimal/fraction string or a sympy QQ element.

    >>> to_fraction("3/4")
    Fraction(3, 4)
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise EvaluationError(f"Expected a rational number, got [{value!r}]")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as e:
            raise EvaluationError(f"Not a rational literal: [{value}]", reason=e)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Fraction(int(value.numerator), int(value.denominator))
    raise EvaluationError(f"Expected a rational number, got [{value!r}]")


def _poly_image(poly, images, target_field):
    """Image of a polynomial under generator -> field element substitution."""
    result = target_field.zero
    for monom, coeff in poly.terms():
        term = target_field(coeff)
        for image, exponent in zip(images, monom):
            if exponent:
                term = term * image**exponent
        result = result + term
    return result


def _poly_value(poly, values):
    """Exact Fraction value of a polynomial at generator values (None for unused generators)."""
    total = Fraction(0)
    for monom, coeff in poly.terms():
        term = to_fraction(coeff)
        for value, exponent in zip(values, monom):
            if exponent:
                term *= value**exponent
        total += term
    return total


class Expr(object):
    """
    Exact scalar on a chart: an element of Q(x_1, ..., x_d)[ln x_j] kept in the canonical
    (expanded, gcd-reduced) numerator/denominator form of sympy's rational function field.

    Logarithms of positive coordinates enter with degree at most one and never in a denominator.
    Instances are immutable.
    """

    __slots__ = ("_chart", "_value")

    def __init__(self, chart, value):
        """
        :param chart: Chart: the chart whose field holds the value
        :param value: FracElement of chart.field
        """
        self._chart = chart
        self._value = value
        self._check_logarithms()

    def _check_logarithms(self):
        if not self._chart.positive:
            return
        numer, denom = self._value.numer, self._value.denom
        for coord in self._chart.positive:
            index = self._chart.generator_index(log_name(coord))
            if denom.degree(index) > 0:
                raise LogarithmError(f"ln({coord}) may not appear in a denominator")
            if numer.degree(index) > 1:
                raise LogarithmError(f"ln({coord}) appears with degree {numer.degree(index)} > 1")

    # constructors

    @classmethod
    def constant(cls, chart, value):
        value = to_fraction(value)
        return cls(chart, chart.field(QQ(value.numerator, value.denominator)))

    @classmethod
    def zero(cls, chart):
        return cls(chart, chart.field.zero)

    @classmethod
    def one(cls, chart):
        return cls(chart, chart.field.one)

    @classmethod
    def symbol(cls, chart, name):
        """
        Coordinate or parameter of the chart as an Expr.

        :param chart: Chart
        :param name: string: coordinate or parameter name
        :return: Expr
        """
        if name not in chart.coords and name not in chart.parameters:
            raise UnknownCoordinateError(f"Unknown coordinate [{name}] for chart [{chart.name}]")
        return cls(chart, chart.field.gens[chart.generator_index(name)])

    @classmethod
    def log(cls, chart, coord):
        """
        ln(coord) for a coordinate declared positive.

        :param chart: Chart
        :param coord: string
        :return: Expr
        """
        if coord not in chart.coords:
            raise UnknownCoordinateError(f"Unknown coordinate [{coord}] for chart [{chart.name}]")
        if not chart.is_positive(coord):
            raise LogarithmError(f"ln({coord}) requires [{coord}] to be declared positive")
        return cls(chart, chart.field.gens[chart.generator_index(log_name(coord))])

    # plumbing

    @property
    def chart(self):
        return self._chart

    @property
    def value(self):
        return self._value

    @property
    def size(self):
        """Number of terms in numerator and denominator, a pivoting heuristic."""
        return len(self._value.numer) + len(self._value.denom)

    def in_chart(self, chart):
        """
        The same scalar in a chart with the same coordinates and more parameters.

        :param chart: Chart
        :return: Expr
        """
        if chart == self._chart:
            return self
        if not chart.same_coordinates(self._chart):
            raise ChartMismatchError(f"Cannot move {self._chart!r} scalar into {chart!r}")
        missing = [p for p in self._chart.parameters if p not in chart.parameters]
        if missing:
            # dropping a parameter is only allowed when the value does not use it
            if any(self.depends_on(p) for p in missing):
                raise ChartMismatchError(f"Scalar depends on parameters {missing} absent from {chart!r}")
        images = []
        for gen in self._chart.generators:
            if chart.has_generator(gen):
                images.append(chart.field.gens[chart.generator_index(gen)])
            else:
                images.append(chart.field.zero)
        return Expr(chart, self._transport(images, chart.field))

    def _transport(self, images, target_field):
        numer = _poly_image(self._value.numer, images, target_field)
        denom = _poly_image(self._value.denom, images, target_field)
        if not denom.numer:
            raise ExprError("Substitution divides by an identically zero denominator")
        return numer / denom

    def _coerce(self, other):
        if isinstance(other, Expr):
            if other._chart == self._chart:
                return self, other
            chart = self._chart.union(other._chart)
            return self.in_chart(chart), other.in_chart(chart)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self, Expr.constant(self._chart, other)
        return None, None

    # arithmetic

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Expr(a._chart, a._value + b._value)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Expr(a._chart, a._value - b._value)

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Expr(a._chart, b._value - a._value)

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return Expr(a._chart, a._value * b._value)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if b.is_zero:
            raise ExprError("Division by an identically zero expression")
        return Expr(a._chart, a._value / b._value)

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a.is_zero:
            raise ExprError("Division by an identically zero expression")
        return Expr(a._chart, b._value / a._value)

    def __neg__(self):
        return Expr(self._chart, -self._value)

    def __pos__(self):
        return self

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or isinstance(exponent, bool):
            raise ExprError(f"Only integer exponents are supported, got [{exponent!r}]")
        if exponent < 0:
            if self.is_zero:
                raise ExprError("Negative power of an identically zero expression")
            return Expr(self._chart, self._value.field.one / self._value ** (-exponent))
        return Expr(self._chart, self._value**exponent)

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return (a._value - b._value).numer.is_zero

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(str(self))

    def __bool__(self):
        return not self.is_zero

    def __str__(self):
        return sstr(self._value.as_expr()).replace("**", "^")

    def __repr__(self):
        return f"Expr({str(self)!r})"

    @property
    def is_zero(self):
        return self._value.numer.is_zero

    @property
    def is_constant(self):
        return self._value.numer.is_ground and self._value.denom.is_ground

    def depends_on(self, name):
        """
        True if the canonical form contains the coordinate, ln-generator or parameter.

        :param name: string: generator name, e.g. "x1", "ln(t)" or "phi1_0_0"
        """
        if not self._chart.has_generator(name):
            return False
        index = self._chart.generator_index(name)
        return self._value.numer.degree(index) > 0 or self._value.denom.degree(index) > 0

    def has_logarithm(self):
        return any(self.depends_on(log_name(c)) for c in self._chart.positive)

    def free_coordinates(self):
        """Coordinates the scalar depends on, in chart order (a logarithm counts for its coordinate)."""
        return [c for c in self._chart.coords if self.depends_on(c) or self.depends_on(log_name(c))]

    def degree(self, name):
        """Degree of the numerator in one generator (the denominator must be free of it)."""
        index = self._chart.generator_index(name)
        if self._value.denom.degree(index) > 0:
            raise ExprError(f"[{name}] appears in the denominator of {self}")
        return max(self._value.numer.degree(index), 0)

    def to_fraction(self):
        """The value of a constant scalar."""
        if not self.is_constant:
            raise EvaluationError(f"{self} is not constant")
        return to_fraction(self._value.numer.LC if self._value.numer else 0) / to_fraction(self._value.denom.LC)

    # calculus

    def differentiate(self, coord):
        """
        Exact partial derivative, d ln(x)/dx = 1/x for positive coordinates.

        :param coord: string: coordinate of the chart (parameters are constants)
        :return: Expr
        """
        if coord not in self._chart.coords:
            raise UnknownCoordinateError(f"Cannot differentiate in [{coord}]: not a coordinate of {self._chart!r}")
        field = self._chart.field
        ring = field.ring
        numer, denom = self._value.numer, self._value.denom
        index = self._chart.generator_index(coord)
        x = ring.gens[index]
        result = field(numer.diff(x) * denom - numer * denom.diff(x)) / field(denom**2)
        if self._chart.is_positive(coord):
            log_index = self._chart.generator_index(log_name(coord))
            if numer.degree(log_index) > 0:
                # the denominator is free of ln(coord), so only the numerator contributes
                lx = ring.gens[log_index]
                result = result + field(numer.diff(lx)) / (field(denom) * field.gens[index])
        return Expr(self._chart, result)

    def substitute(self, mapping, chart=None):
        """
        Substitute scalars for coordinates.

        :param mapping: dict: coordinate name -> Expr (over `chart`) or rational number
        :param chart: Chart (default is the own chart): chart of the result; coordinates of the own chart
                      missing from `mapping` must exist there under the same name
        :return: Expr on `chart`
        """
        target = chart or self._chart
        if self._chart.parameters:
            target = target.with_parameters(self._chart.parameters)
        images = []
        coordinate_images = {}
        for coord in self._chart.coords:
            if coord in mapping:
                image = mapping[coord]
                if isinstance(image, Expr):
                    image = image.in_chart(target.union(image.chart) if image.chart != target else target)
                    if image.chart != target:
                        target = image.chart
                else:
                    image = Expr.constant(target, image)
            elif coord in target.coords:
                image = Expr.symbol(target, coord)
            elif not (self.depends_on(coord) or self.depends_on(log_name(coord))):
                image = Expr.zero(target)
            else:
                raise UnknownCoordinateError(f"No image given for coordinate [{coord}]")
            coordinate_images[coord] = image
        for gen in self._chart.generators:
            if gen in coordinate_images:
                images.append(coordinate_images[gen].in_chart(target).value)
            elif gen.startswith("ln("):
                coord = gen[3:-1]
                images.append(self._log_image(coord, coordinate_images[coord], target))
            else:
                images.append(target.field.gens[target.generator_index(gen)])
        return Expr(target, self._transport(images, target.field))

    def _log_image(self, coord, image, target):
        if not self.depends_on(log_name(coord)):
            return target.field.zero
        image = image.in_chart(target)
        if image == 1:
            return target.field.zero
        for candidate in target.positive:
            if image == Expr.symbol(target, candidate):
                return target.field.gens[target.generator_index(log_name(candidate))]
        raise LogarithmError(f"ln({coord}) can only be mapped to the logarithm of a positive coordinate, got {image}")

    def taylor_coefficient(self, coord, order):
        """
        Coefficient of coord^order in the Taylor expansion at coord = 0.

        :param coord: string
        :param order: int
        :return: Expr free of `coord`
        """
        if order < 0:
            return Expr.zero(self._chart)
        if self._chart.is_positive(coord):
            raise ExprError(f"Cannot expand around {coord} = 0 for a positive coordinate")
        index = self._chart.generator_index(coord)
        numer, denom = self._value.numer, self._value.denom
        if denom.degree(index) <= 0:
            ring = numer.ring
            picked = {}
            for monom, coeff in numer.terms():
                if monom[index] == order:
                    picked[monom[:index] + (0,) + monom[index + 1 :]] = coeff
            field = self._chart.field
            return Expr(self._chart, field(ring(picked)) / field(denom))
        derivative = self
        for _ in range(order):
            derivative = derivative.differentiate(coord)
        return derivative.substitute({coord: 0}) / factorial(order)

    def truncate(self, coord, order):
        """
        Drop all terms of degree > order in a coordinate the denominator does not depend on.

        :param coord: string
        :param order: int
        :return: Expr
        """
        index = self._chart.generator_index(coord)
        numer, denom = self._value.numer, self._value.denom
        if denom.degree(index) > 0:
            raise ExprError(f"Cannot truncate in [{coord}]: it appears in the denominator")
        kept = {monom: coeff for monom, coeff in numer.terms() if monom[index] <= order}
        field = self._chart.field
        return Expr(self._chart, field(numer.ring(kept)) / field(denom))

    def linear_parts(self, unknowns):
        """
        Split an expression affine in the given parameters into coefficients and constant part.

        :param unknowns: list of string: parameter names
        :return: (list of Expr coefficients, Expr constant)
        """
        indices = [self._chart.generator_index(u) for u in unknowns]
        numer, denom = self._value.numer, self._value.denom
        for index, name in zip(indices, unknowns):
            if denom.degree(index) > 0:
                raise NonlinearSystemError(f"Unknown [{name}] appears in a denominator")
        buckets = [dict() for _ in indices]
        constant = {}
        for monom, coeff in numer.terms():
            hits = [k for k, index in enumerate(indices) if monom[index]]
            if not hits:
                constant[monom] = coeff
                continue
            if len(hits) > 1 or monom[indices[hits[0]]] > 1:
                raise NonlinearSystemError(f"Equation is not affine in the unknowns: {self}")
            k = hits[0]
            index = indices[k]
            buckets[k][monom[:index] + (0,) + monom[index + 1 :]] = coeff
        field = self._chart.field
        ring = numer.ring
        den = field(denom)
        coefficients = [Expr(self._chart, field(ring(bucket)) / den) for bucket in buckets]
        return coefficients, Expr(self._chart, field(ring(constant)) / den)

    def evaluate(self, point):
        """
        Exact value at a rational point.

        :param point: dict: coordinate name -> rational (int, Fraction or string)
        :return: Fraction
        """
        if self.has_logarithm():
            raise EvaluationError(f"Cannot evaluate an expression containing a logarithm: {self}")
        for parameter in self._chart.parameters:
            if self.depends_on(parameter):
                raise EvaluationError(f"Cannot evaluate: expression depends on parameter [{parameter}]")
        values = []
        for gen in self._chart.generators:
            if gen in self._chart.coords:
                if gen not in point:
                    if self.depends_on(gen):
                        raise EvaluationError(f"No value given for coordinate [{gen}]")
                    values.append(Fraction(0))
                    continue
                value = to_fraction(point[gen])
                if self._chart.is_positive(gen) and value <= 0:
                    raise EvaluationError(f"Coordinate [{gen}] is declared positive, got {value}")
                values.append(value)
            else:
                values.append(Fraction(0))
        unknown = set(point) - set(self._chart.coords)
        if unknown:
            raise UnknownCoordinateError(f"Unknown coordinates {sorted(unknown)} for chart [{self._chart.name}]")
        denominator = _poly_value(self._value.denom, values)
        if denominator == 0:
            raise EvaluationError(f"Division by zero evaluating {self} at {point}")
        return _poly_value(self._value.numer, values) / denominator


def differentiate(e, coord):
    """
    Exact partial derivative of an Expr.

    :param e: Expr
    :param coord: string: coordinate of e's chart
    :return: Expr
    """
    return e.differentiate(coord)


def evaluate(e, point):
    """
    Exact rational value of an Expr at a point.

    :param e: Expr
    :param point: dict: coordinate -> rational
    :return: Fraction
    """
    return e.evaluate(point)
