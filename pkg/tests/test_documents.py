# coding: utf8
"""Tests for JSON connection specs, metric documents and expansion documents"""
import json
from unittest import TestCase

import pytest

from ambient.constructions import patterson_walker
from ambient.documents import (
    ConnectionSpec,
    dumps,
    expansion_to_dict,
    is_metric_document,
    load,
    loads,
    metric_from_dict,
    metric_to_dict,
    tensor_to_dict,
)
from ambient.errors import DegenerateMetricError, DocumentError, ExprSyntaxError
from ambient.expr import parse_expr
from ambient.fg_solver import fg_expand

from .mockup import E1_SPEC, SPHERE_DOCUMENT, TORSION_SPEC, e1_connection, sphere_metric, write_document


def spec_with(christoffel, coordinates=("x1", "x2")):
    return {"name": "test", "coordinates": list(coordinates), "christoffel": christoffel}


class TestConnectionSpec(TestCase):
    def test_parse(self):
        conn = ConnectionSpec.from_dict(E1_SPEC).to_connection()
        self.assertEqual(conn.name, "E1")
        self.assertEqual(conn.gamma(0, 1, 0), parse_expr("x1*x2", conn.chart))
        self.assertTrue(conn.gamma(1, 1, 1).is_zero)
        self.assertEqual(conn.volume, 1)

    def test_symmetric_completion(self):
        conn = ConnectionSpec.from_dict(spec_with({"1,1,2": "x2"})).to_connection()
        self.assertEqual(conn.gamma(1, 0, 0), parse_expr("x2", conn.chart))
        self.assertIsNone(conn.torsion_witness())

    def test_agreeing_duplicates_are_accepted(self):
        conn = ConnectionSpec.from_dict(spec_with({"1,1,2": "x2", "2,1,1": "x2"})).to_connection()
        self.assertEqual(conn.gamma(0, 0, 1), conn.gamma(1, 0, 0))

    def test_conflict(self):
        with self.assertRaises(DocumentError):
            ConnectionSpec.from_dict(TORSION_SPEC).to_connection()

    def test_repeated_index(self):
        with self.assertRaises(DocumentError):
            ConnectionSpec.from_dict(spec_with({"1,2,1": "x1", "1, 2, 1": "x1"})).to_connection()

    def test_bad_index_keys(self):
        for key in ("1,2", "1,3,1", "a,1,1", "0,1,1"):
            with self.assertRaises(DocumentError, msg=key):
                ConnectionSpec.from_dict(spec_with({key: "x1"})).to_connection()

    def test_missing_fields(self):
        with self.assertRaises(DocumentError):
            ConnectionSpec.from_dict({"christoffel": {}})
        with self.assertRaises(DocumentError):
            ConnectionSpec.from_dict({"coordinates": "x1", "christoffel": {}})
        with self.assertRaises(DocumentError):
            ConnectionSpec.from_dict({"coordinates": ["x1", 2], "christoffel": {}})

    def test_bad_coordinates(self):
        with self.assertRaises(DocumentError):
            ConnectionSpec.from_dict(spec_with({}, coordinates=("x1", "x1"))).to_connection()

    def test_expression_syntax(self):
        with self.assertRaises(ExprSyntaxError):
            ConnectionSpec.from_dict(spec_with({"1,2,1": "x1 *"})).to_connection()

    def test_round_trip(self):
        conn = e1_connection()
        spec = ConnectionSpec.from_connection(conn)
        self.assertEqual(list(spec.christoffel), ["1,2,1"])
        self.assertEqual(spec.to_connection(), conn)
        self.assertEqual(ConnectionSpec.loads(spec.dumps()), spec)

    def test_load(self):
        with self.assertRaises(DocumentError):
            ConnectionSpec.load("/nonexistent/spec.json")


class TestJson:
    def test_invalid_json(self):
        with pytest.raises(DocumentError):
            loads("{not json")

    def test_not_an_object(self):
        with pytest.raises(DocumentError):
            loads("[1, 2]")

    def test_load_file(self, tmp_path):
        path = write_document(tmp_path, "e1.json", E1_SPEC)
        assert load(path)["name"] == "E1"

    def test_dumps_keeps_order(self):
        text = dumps({"b": 1, "a": [1, 2]})
        assert text.endswith("\n")
        assert text.index('"b"') < text.index('"a"'), "Result of [dumps()] keeps insertion order"


class TestMetricDocuments(TestCase):
    def test_sphere(self):
        self.assertEqual(metric_from_dict(SPHERE_DOCUMENT), sphere_metric())
        self.assertTrue(is_metric_document(SPHERE_DOCUMENT))
        self.assertFalse(is_metric_document(E1_SPEC))

    def test_numeric_keys(self):
        g = metric_from_dict({"coordinates": ["x", "y"], "metric": {"1,1": "1", "1,2": "x", "2,2": "1"}})
        self.assertEqual(g[1, 0], parse_expr("x", g.chart))

    def test_degenerate(self):
        with self.assertRaises(DegenerateMetricError):
            metric_from_dict({"coordinates": ["x", "y"], "metric": {"x,x": "1"}})

    def test_conflict(self):
        with self.assertRaises(DocumentError):
            metric_from_dict({"coordinates": ["x", "y"], "metric": {"x,y": "1", "y,x": "2", "x,x": "1"}})

    def test_patterson_walker_document(self):
        g = patterson_walker(e1_connection())
        document = metric_to_dict(g, name="E1", extra={"target": "pw"})
        self.assertEqual(list(document)[:3], ["name", "coordinates", "target"])
        self.assertEqual(sorted(document["metric"]), ["x1,p1", "x1,x1", "x2,p2"])
        self.assertEqual(parse_expr(document["metric"]["x1,x1"], g.chart), g[0, 0])
        self.assertEqual(metric_from_dict(json.loads(dumps(document))), g)

    def test_tensor_to_dict(self):
        g = sphere_metric()
        self.assertEqual(sorted(tensor_to_dict(g)), ["x,x", "y,y"])


class TestExpansionDocument(TestCase):
    def test_sphere(self):
        document = expansion_to_dict(fg_expand(sphere_metric(), 2), name="sphere")
        self.assertEqual(document["name"], "sphere")
        self.assertEqual(document["order"], 2)
        self.assertEqual(sorted(document["coefficients"]), ["1", "2"])
        self.assertEqual(sorted(document["coefficients"]["1"]), ["x,x", "y,y"])
        self.assertEqual(document["obstruction_residual"], {})
        self.assertIn("1", document["free_unknowns"])
        self.assertEqual(document["inconsistent_orders"], [])
        self.assertEqual(document["last_nonzero_order"], 2)
        json.loads(dumps(document))
