# coding: utf8
"""Tests for exact scalars, charts and the expression parser"""
from fractions import Fraction
from unittest import TestCase

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambient.errors import (
    ChartError,
    ExprError,
    ChartMismatchError,
    EvaluationError,
    ExprSyntaxError,
    LogarithmError,
    NonlinearSystemError,
    UnknownCoordinateError,
)
from ambient.expr import Chart, DenominatorFrame, Expr, differentiate, evaluate, parse_expr, to_fraction
from ambient.tensor.checks import random_point

CHART = Chart("N", ["x", "y"])
LOG_CHART = Chart("M", ["t", "x", "rho"], positive=["t"])
MONOMIALS = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (1, 2)]
SHIFTED = Chart("NH", ["x", "y", "h"])
SAMPLE_POINTS = [random_point(CHART, np.random.default_rng(seed)) for seed in range(20)]

coefficient_lists = st.lists(st.integers(min_value=-6, max_value=6), min_size=len(MONOMIALS), max_size=len(MONOMIALS))
points = st.tuples(st.integers(min_value=-9, max_value=9), st.integers(min_value=-9, max_value=9))


def polynomial(coefficients):
    x = Expr.symbol(CHART, "x")
    y = Expr.symbol(CHART, "y")
    total = Expr.zero(CHART)
    for coefficient, (i, j) in zip(coefficients, MONOMIALS):
        if coefficient:
            total = total + coefficient * x**i * y**j
    return total


class TestChart(TestCase):
    def test_generators_include_logarithms(self):
        self.assertEqual(LOG_CHART.generators, ("t", "x", "rho", "ln(t)"))
        self.assertTrue(LOG_CHART.is_positive("t"))
        self.assertFalse(LOG_CHART.is_positive("x"))

    def test_duplicate_coordinates(self):
        with self.assertRaises(ChartError):
            Chart("bad", ["x", "x"])

    def test_reserved_name(self):
        with self.assertRaises(ChartError):
            Chart("bad", ["ln", "x"])

    def test_unknown_positive(self):
        with self.assertRaises(ChartError):
            Chart("bad", ["x"], positive=["t"])

    def test_parameters(self):
        extended = CHART.with_parameters(["a", "b"])
        self.assertEqual(extended.parameters, ("a", "b"))
        self.assertTrue(extended.same_coordinates(CHART))
        self.assertEqual(extended.without_parameters(), CHART)
        self.assertEqual(CHART.union(extended), extended)

    def test_union_mismatch(self):
        with self.assertRaises(ChartMismatchError):
            CHART.union(Chart("other", ["u", "v"]))

    def test_coord_index(self):
        self.assertEqual(CHART.coord_index("y"), 1)
        with self.assertRaises(UnknownCoordinateError):
            CHART.coord_index("z")


class TestExpr(TestCase):
    def test_canonical_equality(self):
        self.assertEqual(parse_expr("x^2 + 2*x*y + y^2", CHART), parse_expr("(x+y)^2", CHART))
        self.assertEqual(parse_expr("(x^2 - 1)/(x - 1)", CHART), parse_expr("x + 1", CHART))
        self.assertTrue(parse_expr("x - x", CHART).is_zero)
        self.assertEqual(parse_expr("x - x", CHART), 0)

    def test_printing(self):
        self.assertEqual(str(parse_expr("x*y", CHART)), "x*y")
        self.assertEqual(str(parse_expr("x**3", CHART)), "x^3")
        self.assertEqual(str(Expr.zero(CHART)), "0")

    def test_rational_constants(self):
        value = parse_expr("3/4 + 0.25", CHART)
        self.assertTrue(value.is_constant)
        self.assertEqual(value.to_fraction(), Fraction(1))
        self.assertEqual(to_fraction("3/4"), Fraction(3, 4))

    def test_to_fraction_rejects_non_constant(self):
        with self.assertRaises(EvaluationError):
            Expr.symbol(CHART, "x").to_fraction()

    def test_differentiate(self):
        value = parse_expr("x^3*y + y/x", CHART)
        self.assertEqual(differentiate(value, "x"), parse_expr("3*x^2*y - y/x^2", CHART))
        self.assertEqual(value.differentiate("y"), parse_expr("x^3 + 1/x", CHART))

    def test_differentiate_logarithm(self):
        value = parse_expr("t^2*ln(t) + x*ln(t)", LOG_CHART)
        self.assertEqual(value.differentiate("t"), parse_expr("2*t*ln(t) + t + x/t", LOG_CHART))
        self.assertEqual(value.differentiate("x"), Expr.log(LOG_CHART, "t"))

    def test_differentiate_unknown(self):
        with self.assertRaises(UnknownCoordinateError):
            Expr.symbol(CHART, "x").differentiate("z")

    def test_logarithm_degree(self):
        logarithm = Expr.log(LOG_CHART, "t")
        with self.assertRaises(LogarithmError):
            logarithm**2
        with self.assertRaises(LogarithmError):
            1 / logarithm

    def test_logarithm_needs_positive_coordinate(self):
        with self.assertRaises(LogarithmError):
            parse_expr("ln(x)", LOG_CHART)

    def test_substitute(self):
        value = parse_expr("x^2 + y", CHART)
        self.assertEqual(value.substitute({"x": 2}), parse_expr("4 + y", CHART))
        self.assertEqual(value.substitute({"x": Expr.symbol(CHART, "y")}), parse_expr("y^2 + y", CHART))

    def test_substitute_into_other_chart(self):
        target = Chart("uv", ["u", "v"])
        value = parse_expr("x*y", CHART)
        image = value.substitute({"x": parse_expr("u + v", target), "y": parse_expr("u - v", target)}, target)
        self.assertEqual(image, parse_expr("u^2 - v^2", target))

    def test_substitute_logarithm(self):
        value = parse_expr("t*ln(t) + x", LOG_CHART)
        self.assertEqual(value.substitute({"t": 1}), Expr.symbol(LOG_CHART, "x"))
        with self.assertRaises(LogarithmError):
            value.substitute({"t": Expr.symbol(LOG_CHART, "x")})

    def test_taylor_coefficient(self):
        chart = Chart("R", ["x", "rho"])
        value = parse_expr("1 + 2*rho*x + 3*rho^2", chart)
        self.assertEqual(value.taylor_coefficient("rho", 1), parse_expr("2*x", chart))
        self.assertEqual(parse_expr("1/(1 - rho)", chart).taylor_coefficient("rho", 3), 1)
        self.assertTrue(parse_expr("x", chart).taylor_coefficient("rho", -1).is_zero)

    def test_truncate(self):
        chart = Chart("R", ["x", "rho"])
        value = parse_expr("(1 + rho + rho^2 + rho^3)/x", chart)
        self.assertEqual(value.truncate("rho", 1), parse_expr("(1 + rho)/x", chart))

    def test_linear_parts(self):
        chart = CHART.with_parameters(["a", "b"])
        coefficients, constant = parse_expr("2*a + x*b + 3", chart).linear_parts(["a", "b"])
        self.assertEqual(coefficients, [Expr.constant(chart, 2), Expr.symbol(chart, "x")])
        self.assertEqual(constant, 3)
        with self.assertRaises(NonlinearSystemError):
            parse_expr("a*b", chart).linear_parts(["a", "b"])

    def test_evaluate(self):
        self.assertEqual(evaluate(parse_expr("x/y", CHART), {"x": 1, "y": 2}), Fraction(1, 2))
        self.assertEqual(parse_expr("x^2", CHART).evaluate({"x": "3/2"}), Fraction(9, 4))

    def test_evaluate_errors(self):
        with self.assertRaises(EvaluationError):
            parse_expr("x/y", CHART).evaluate({"x": 1, "y": 0})
        with self.assertRaises(EvaluationError):
            Expr.log(LOG_CHART, "t").evaluate({"t": 1})
        with self.assertRaises(EvaluationError):
            Expr.symbol(LOG_CHART, "t").evaluate({"t": -1})
        with self.assertRaises(UnknownCoordinateError):
            Expr.symbol(CHART, "x").evaluate({"x": 1, "z": 2})

    def test_free_coordinates(self):
        self.assertEqual(parse_expr("x*ln(t) + 1", LOG_CHART).free_coordinates(), ["t", "x"])


class TestParser:
    @pytest.mark.parametrize("text", ["x +", "(x", "x y", "x $ y", "", "x^y", "x^1.5"])
    def test_syntax_errors(self, text):
        with pytest.raises(ExprSyntaxError):
            parse_expr(text, CHART)

    def test_error_position(self):
        with pytest.raises(ExprSyntaxError) as error:
            parse_expr("x + * y", CHART)
        assert error.value.position == 4, "Result of [parse_expr()] error position"
        assert ">>" in str(error.value)

    def test_division_by_zero(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("x/(y - y)", CHART)
        with pytest.raises(ExprSyntaxError):
            parse_expr("(x - x)^-1", CHART)

    def test_unknown_coordinate(self):
        with pytest.raises(UnknownCoordinateError):
            parse_expr("x + z", CHART)

    def test_power_forms(self):
        assert parse_expr("x**2", CHART) == parse_expr("x^2", CHART)
        assert parse_expr("x^(-2)", CHART) == parse_expr("1/x^2", CHART)
        assert parse_expr("-x^2", CHART) == -parse_expr("x^2", CHART)


class TestExprLaws:
    @settings(max_examples=250, deadline=None)
    @given(coefficient_lists, coefficient_lists, coefficient_lists)
    def test_distributivity(self, first, second, third):
        a, b, c = polynomial(first), polynomial(second), polynomial(third)
        assert (a + b) * c == a * c + b * c

    @settings(max_examples=250, deadline=None)
    @given(coefficient_lists, coefficient_lists)
    def test_product_rule(self, first, second):
        a, b = polynomial(first), polynomial(second)
        assert (a * b).differentiate("x") == a.differentiate("x") * b + a * b.differentiate("x")

    @settings(max_examples=250, deadline=None)
    @given(coefficient_lists, coefficient_lists, points)
    def test_evaluation_is_a_homomorphism(self, first, second, point):
        a, b = polynomial(first), polynomial(second)
        values = {"x": point[0], "y": point[1]}
        assert (a * b - a).evaluate(values) == a.evaluate(values) * b.evaluate(values) - a.evaluate(values)

    @settings(max_examples=150, deadline=None)
    @given(coefficient_lists, coefficient_lists)
    def test_quotient_rule(self, first, second):
        a = polynomial(first)
        b = polynomial(second) ** 2 + 1
        derivative = (a / b).differentiate("y")
        assert derivative == (a.differentiate("y") * b - a * b.differentiate("y")) / b**2

    @settings(max_examples=150, deadline=None)
    @given(coefficient_lists)
    def test_printed_form_parses_back(self, coefficients):
        value = polynomial(coefficients) / (polynomial(coefficients) ** 2 + 1)
        assert parse_expr(str(value), CHART) == value

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(min_value=-5, max_value=5), min_size=6, max_size=6))
    def test_mixed_partials_commute(self, c):
        numerator = f"({c[0]})*t^2*x + ({c[1]})*x^2 + ({c[2]})*t*ln(t) + ({c[3]})*x*ln(t)"
        text = f"({numerator}) / (({c[4]})*t^2 + ({c[5]})*x^2 + 1)"
        value = parse_expr(text, LOG_CHART)
        assert value.differentiate("t").differentiate("x") == value.differentiate("x").differentiate("t")
        assert value.differentiate("rho").is_zero

    @settings(max_examples=150, deadline=None)
    @given(coefficient_lists, coefficient_lists, coefficient_lists, st.booleans())
    def test_is_zero_agrees_with_evaluation(self, first, second, third, cancels):
        a, b = polynomial(first), polynomial(second)
        other = b * a if cancels else polynomial(third)
        value = (a * b - other) / (polynomial(third) ** 2 + 1)
        vanishes = all(value.evaluate(point) == 0 for point in SAMPLE_POINTS)
        assert value.is_zero == vanishes, f"Result of [is_zero] for {value}"

    @settings(max_examples=150, deadline=None)
    @given(coefficient_lists, points, st.integers(min_value=1, max_value=5))
    def test_derivative_matches_difference_quotient(self, coefficients, point, step):
        # five-point stencil, exact for degree <= 4
        value = polynomial(coefficients)
        x, y = Fraction(point[0]), Fraction(point[1])
        h = Fraction(1, step)

        def at(shift):
            return value.evaluate({"x": x + shift * h, "y": y})

        quotient = (8 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12 * h)
        assert differentiate(value, "x").evaluate({"x": x, "y": y}) == quotient

    @settings(max_examples=100, deadline=None)
    @given(coefficient_lists, coefficient_lists)
    def test_derivative_is_first_taylor_coefficient(self, first, second):
        value = polynomial(first) / (polynomial(second) ** 2 + 1)
        shifted = value.substitute({"y": parse_expr("y + h", SHIFTED)}, SHIFTED)
        expected = value.differentiate("y").substitute({}, SHIFTED)
        assert shifted.taylor_coefficient("h", 1) == expected


class TestDenominatorFrame(TestCase):
    def setUp(self):
        self.values = [
            parse_expr("x/(t*(1 + x^2))", LOG_CHART),
            parse_expr("rho*ln(t) + x", LOG_CHART),
            parse_expr("1/(1 + x^2)^2", LOG_CHART),
        ]
        self.frame = DenominatorFrame.spanning(LOG_CHART, self.values)

    def test_spanning_denominator(self):
        denominator = self.frame.to_expr((self.frame.ring.one, 1))
        self.assertEqual(denominator, parse_expr("1/(t*(1 + x^2)^2)", LOG_CHART))

    def test_lift_and_read_back(self):
        for value in self.values:
            self.assertEqual(self.frame.to_expr(self.frame.lift(value)), value)

    def test_arithmetic(self):
        first, second, third = (self.frame.lift(value) for value in self.values)
        total = self.frame.add(self.frame.mul(first, second), self.frame.scale(third, "3/2"))
        self.assertEqual(self.frame.to_expr(total), self.values[0] * self.values[1] + Fraction(3, 2) * self.values[2])
        self.assertTrue(self.frame.is_zero(self.frame.sub(first, first)))

    def test_derivatives(self):
        for value in self.values:
            item = self.frame.lift(value)
            for coord in LOG_CHART.coords:
                self.assertEqual(self.frame.to_expr(self.frame.diff(item, coord)), value.differentiate(coord))

    def test_truncate(self):
        item = self.frame.lift(parse_expr("(1 + rho + rho^2)/(1 + x^2)", LOG_CHART))
        expected = parse_expr("(1 + rho)/(1 + x^2)", LOG_CHART)
        self.assertEqual(self.frame.to_expr(self.frame.truncate(item, "rho", 1)), expected)
        with self.assertRaises(ExprError):
            self.frame.truncate(item, "x", 1)

    def test_foreign_denominator(self):
        with self.assertRaises(ExprError):
            self.frame.lift(parse_expr("1/(x - 1)", LOG_CHART))
