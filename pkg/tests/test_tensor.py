# coding: utf8
"""Tests for tensor fields, curvature, Lie derivatives and the exact checks"""
from unittest import TestCase

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambient.constructions import ambient_pw
from ambient.corpus import random_connection
from ambient.errors import (
    ConnectionValidationError,
    DegenerateMetricError,
    DimensionError,
    TensorSymmetryError,
)
from ambient.expr import Chart, Expr, parse_expr
from ambient.tensor import (
    AffineConnection,
    MetricTensor,
    TensorField,
    check_homothety,
    check_isotropic,
    check_metric_compatibility,
    check_parallel_distribution,
    covariant_derivative,
    first_bianchi_witness,
    laplacian,
    levi_civita,
    lie_bracket,
    lie_derivative,
    pullback_connection,
    pullback_metric,
    ricci,
    ricci_scalar,
    riemann,
    zero_report,
)

from .mockup import e1_connection, flat_metric, sphere_metric

PLANE = Chart("plane", ["x", "y"])
UV = Chart("uv", ["u", "v"])
AB = Chart("ab", ["a", "b"])

small = st.integers(min_value=-3, max_value=3)


def connection(chart, entries, volume=None):
    """Connection from a sparse mapping (A, C, B) -> expression string, entered as given."""
    components = np.zeros((chart.dim,) * 3, dtype=object)
    for index, text in entries.items():
        components[index] = parse_expr(text, chart)
    return AffineConnection(chart, components, volume=volume)


def euclidean(chart):
    return MetricTensor.from_entries(chart, {(coord, coord): 1 for coord in chart.coords})


class TestTensorField(TestCase):
    def test_vector(self):
        field = TensorField.vector(PLANE, {"y": parse_expr("x", PLANE)})
        self.assertEqual(field.slots, "u")
        self.assertTrue(field[0].is_zero)
        self.assertEqual(field[1], parse_expr("x", PLANE))

    def test_symmetry_is_checked(self):
        with self.assertRaises(TensorSymmetryError):
            MetricTensor(PLANE, [[1, parse_expr("x", PLANE)], [0, 1]])

    def test_bad_shape(self):
        with self.assertRaises(DimensionError):
            TensorField(PLANE, "dd", [[1, 0, 0], [0, 1, 0]])

    def test_arithmetic(self):
        g = euclidean(PLANE)
        doubled = g + g
        self.assertEqual(doubled, g.scale(2))
        self.assertTrue((g - g).is_zero)
        self.assertEqual(g.difference_witness(doubled), (0, 0))


class TestMetricTensor(TestCase):
    def test_inverse_and_determinant(self):
        g = sphere_metric()
        self.assertEqual(g.determinant, parse_expr("16/(1+x^2+y^2)^4", g.chart))
        self.assertEqual(g.inverse[0, 0], parse_expr("(1+x^2+y^2)^2/4", g.chart))
        self.assertTrue(g.inverse[0, 1].is_zero)

    def test_walker_inverse(self):
        chart = Chart("walker", ["x", "p"])
        g = MetricTensor.from_entries(chart, {("x", "x"): parse_expr("x^2", chart), ("x", "p"): 1})
        self.assertTrue(g.inverse[0, 0].is_zero)
        self.assertEqual(g.inverse[0, 1], 1)
        self.assertEqual(g.inverse[1, 1], parse_expr("-x^2", chart))

    def test_degenerate(self):
        g = MetricTensor.from_entries(PLANE, {("x", "x"): 1})
        with self.assertRaises(DegenerateMetricError):
            g.check_nondegenerate()
        with self.assertRaises(DegenerateMetricError):
            g.inverse

    def test_pair_and_lower(self):
        g = euclidean(PLANE)
        field = TensorField.vector(PLANE, {"x": 2, "y": parse_expr("y", PLANE)})
        self.assertEqual(g.pair(field, field), parse_expr("4 + y^2", PLANE))
        self.assertEqual(g.lower(field)[1], parse_expr("y", PLANE))


class TestConnection(TestCase):
    def test_validate(self):
        conn = connection(PLANE, {(0, 1, 0): "x*y"})
        self.assertTrue(conn.validate())

    def test_torsion(self):
        conn = connection(PLANE, {(0, 0, 1): "x"})
        self.assertEqual(conn.torsion_witness(), (0, 0, 1))
        with self.assertRaises(ConnectionValidationError):
            conn.validate()

    def test_volume(self):
        conn = connection(PLANE, {(0, 0, 0): "1"})
        self.assertEqual(conn.volume_witness(), 0)
        with self.assertRaises(ConnectionValidationError):
            conn.validate()

    def test_volume_density(self):
        conn = connection(PLANE, {(0, 0, 0): "2*x/(x^2 + 1)"}, volume=parse_expr("x^2 + 1", PLANE))
        self.assertIsNone(conn.volume_witness())
        self.assertTrue(conn.validate())

    def test_zero_volume(self):
        with self.assertRaises(ConnectionValidationError):
            connection(PLANE, {}, volume=Expr.zero(PLANE))


class TestCurvature(TestCase):
    def test_sphere_is_einstein(self):
        g = sphere_metric()
        self.assertEqual(ricci(levi_civita(g)), g)
        self.assertEqual(ricci_scalar(g), 2)

    def test_levi_civita_is_compatible(self):
        self.assertEqual(check_metric_compatibility(sphere_metric()), [])
        self.assertTrue(levi_civita(sphere_metric()).validate())

    def test_flat_metric(self):
        g = flat_metric(3)
        self.assertTrue(levi_civita(g).christoffel.is_zero)
        self.assertTrue(ricci(levi_civita(g)).is_zero)

    def test_ricci_is_riemann_trace(self):
        conn = connection(PLANE, {(0, 1, 0): "x*y"})
        curvature = riemann(conn)
        contracted = ricci(conn)
        for b in range(2):
            for c in range(2):
                total = curvature[0, b, c, 0] + curvature[1, b, c, 1]
                self.assertEqual(total, contracted[b, c])
        self.assertEqual(contracted[0, 0], parse_expr("x", PLANE))

    def test_laplacian(self):
        g = euclidean(PLANE)
        self.assertEqual(laplacian(g, parse_expr("x^2 + y^2", PLANE)), 4)
        self.assertEqual(laplacian(sphere_metric(), Expr.zero(sphere_metric().chart)), 0)


class TestLie(TestCase):
    def test_euler_field_is_homothetic(self):
        g = euclidean(PLANE)
        euler = TensorField.vector(PLANE, {"x": parse_expr("x", PLANE), "y": parse_expr("y", PLANE)})
        self.assertEqual(lie_derivative(euler, g), g.scale(2))
        report = check_homothety(g, euler)
        self.assertTrue(report.passed)
        self.assertEqual(report.details["constant"], "2")

    def test_rotation_is_killing(self):
        g = euclidean(PLANE)
        rotation = TensorField.vector(PLANE, {"x": parse_expr("-y", PLANE), "y": parse_expr("x", PLANE)})
        self.assertTrue(lie_derivative(rotation, g).is_zero)

    def test_bracket(self):
        first = TensorField.vector(PLANE, {"x": 1})
        second = TensorField.vector(PLANE, {"y": parse_expr("x", PLANE)})
        self.assertEqual(lie_bracket(first, second), TensorField.vector(PLANE, {"y": 1}))

    def test_not_homothetic(self):
        g = euclidean(PLANE)
        field = TensorField.vector(PLANE, {"x": parse_expr("x^2", PLANE)})
        self.assertFalse(check_homothety(g, field).passed)

    def test_pullback_metric(self):
        mapping = {"x": parse_expr("u + v", UV), "y": parse_expr("u - v", UV)}
        pulled = pullback_metric(mapping, euclidean(PLANE), UV)
        self.assertEqual(pulled, MetricTensor.from_entries(UV, {("u", "u"): 2, ("v", "v"): 2}))

    def test_pullback_connection(self):
        mapping = {"x": parse_expr("u + v^2", UV), "y": parse_expr("v", UV)}
        pulled = pullback_connection(mapping, connection(PLANE, {}), UV)
        self.assertEqual(pulled.gamma(1, 0, 1), 2)
        self.assertTrue(pulled.gamma(0, 0, 0).is_zero)
        self.assertTrue(pulled.validate())
        self.assertTrue(ricci(pulled).is_zero)


class TestIsotropy:
    def test_null_square_is_isotropic(self):
        chart = Chart("walker", ["x", "p"])
        g = MetricTensor.from_entries(chart, {("x", "p"): 1})
        tensor = TensorField.from_function(chart, "dd", lambda index: 1 if index == (0, 0) else 0)
        assert check_isotropic(g, tensor).passed, "Result of [check_isotropic()] for dx*dx"

    def test_euclidean_square_is_not(self):
        g = euclidean(PLANE)
        tensor = TensorField.from_function(PLANE, "dd", lambda index: 1 if index == (0, 0) else 0)
        report = check_isotropic(g, tensor)
        assert not report.passed
        assert report.details["failures"]

    def test_contravariant_rejected(self):
        with pytest.raises(DimensionError):
            check_isotropic(euclidean(PLANE), TensorField.vector(PLANE, {"x": 1}))


class TestBianchi:
    @pytest.mark.parametrize("seed", [0, 1])
    def test_random_connections(self, seed):
        conn = random_connection(3, 1, np.random.default_rng(seed))
        assert conn.validate()
        assert first_bianchi_witness(riemann(conn)) is None, "Result of [first_bianchi_witness()]"

    def test_zero_report_witness(self):
        g = euclidean(PLANE)
        report = zero_report("euclidean", g)
        assert not report.passed
        assert report.witness["component"] == g.component_name((0, 0))
        assert report.witness["point_value"] == "1"


def quadratic(chart, coefficients):
    """c0 + c1 u + c2 v + c3 u v + c4 v^2 in the chart's two coordinates."""
    u, v = (Expr.symbol(chart, coord) for coord in chart.coords)
    c = coefficients
    return c[0] + c[1] * u + c[2] * v + c[3] * u * v + c[4] * v**2


class TestTransformationLaws:
    @settings(max_examples=40, deadline=None)
    @given(st.lists(small, min_size=20, max_size=20))
    def test_pullback_composes(self, c):
        g = MetricTensor.from_entries(
            PLANE,
            {("x", "x"): parse_expr("1 + y^2", PLANE), ("x", "y"): parse_expr("x", PLANE), ("y", "y"): 2},
        )
        outer = {"x": quadratic(UV, c[0:5]), "y": quadratic(UV, c[5:10])}
        inner = {"u": quadratic(AB, c[10:15]), "v": quadratic(AB, c[15:20])}
        composed = {coord: image.substitute(inner, AB) for coord, image in outer.items()}
        assert pullback_metric(composed, g, AB) == pullback_metric(inner, pullback_metric(outer, g, UV), AB)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(small, min_size=10, max_size=10))
    def test_lie_derivative_is_symmetrized_gradient(self, c):
        g = sphere_metric()
        field = TensorField.vector(g.chart, {"x": quadratic(g.chart, c[:5]), "y": quadratic(g.chart, c[5:])})
        gradient = covariant_derivative(levi_civita(g), g.lower(field))
        assert lie_derivative(field, g) == gradient.symmetric_part().scale(2)


class TestParallelDistribution:
    def test_time_direction_is_not_isotropic(self):
        g = ambient_pw(e1_connection())
        report = check_parallel_distribution(g, [TensorField.vector(g.chart, {"t": 1})])
        assert not report.passed, "Result of [check_parallel_distribution()] for d_t"
        assert report.witness == {"isotropy": [0, 0], "value": "2*rho"}

    def test_fiber_directions_are_parallel(self):
        g = ambient_pw(e1_connection())
        frame = [TensorField.vector(g.chart, {coord: 1}) for coord in ("p1", "p2", "rho")]
        assert check_parallel_distribution(g, frame).passed
