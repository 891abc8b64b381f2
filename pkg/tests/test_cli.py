# coding: utf8
"""Tests for the ambient command line"""
import io
import json
import os

import pytest

from ambient.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, WORKDIR_ENV, main, resolve_path
from ambient.expr import Chart, parse_expr

from .mockup import E1_SPEC, SPHERE_DOCUMENT, TORSION_SPEC, VOLUME_SPEC, write_document


def run(argv):
    stream = io.StringIO()
    status = main(argv, stream=stream)
    text = stream.getvalue()
    return status, json.loads(text) if text else None


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.setenv(WORKDIR_ENV, str(tmp_path))
    monkeypatch.delenv("AMBIENT_LOG_LEVEL", raising=False)
    write_document(tmp_path, "e1.json", E1_SPEC)
    write_document(tmp_path, "torsion.json", TORSION_SPEC)
    write_document(tmp_path, "volume.json", VOLUME_SPEC)
    write_document(tmp_path, "sphere.json", SPHERE_DOCUMENT)
    return tmp_path


class TestResolvePath:
    def test_workdir(self):
        assert resolve_path("a.json", {WORKDIR_ENV: "/data"}) == os.path.join("/data", "a.json")
        assert resolve_path("/abs/a.json", {WORKDIR_ENV: "/data"}) == "/abs/a.json"
        assert resolve_path("a.json", {}) == "a.json"


class TestBuild:
    def test_patterson_walker(self, workdir):
        status, document = run(["build", "--spec", "e1.json"])
        assert status == EXIT_PASS
        assert document["target"] == "pw"
        assert document["source"] == "E1"
        assert document["coordinates"] == ["x1", "x2", "p1", "p2"]
        chart = Chart("T*E1", document["coordinates"])
        assert parse_expr(document["metric"]["x1,x1"], chart) == parse_expr("-2*x1*x2*p2", chart)
        assert document["metric"]["x1,p1"] == "1"

    def test_ambient(self, workdir):
        status, document = run(["build", "--spec", "e1.json", "--target", "ambient"])
        assert status == EXIT_PASS
        assert document["coordinates"] == ["t", "x1", "x2", "p1", "p2", "rho"]
        assert document["positive"] == ["t"]
        chart = Chart("ambient", document["coordinates"], positive=["t"])
        expected = parse_expr("t^2*(-2*x1*x2*p2 + 2*rho*x1)", chart)
        assert parse_expr(document["metric"]["x1,x1"], chart) == expected

    def test_cone(self, workdir):
        status, document = run(["build", "--spec", "e1.json", "--target", "cone"])
        assert status == EXIT_PASS
        assert document["target"] == "cone"
        assert document["coordinates"] == ["x0", "x1", "x2"]
        assert document["positive"] == ["x0"]
        assert document["volume"] == "x0^2"

    def test_cone_metric(self, workdir):
        status, document = run(["build", "--spec", "e1.json", "--target", "cone-pw"])
        assert status == EXIT_PASS
        assert document["coordinates"] == ["x0", "x1", "x2", "y1", "y2", "y0"]

    def test_conflicting_spec(self, workdir):
        status, document = run(["build", "--spec", "torsion.json"])
        assert status == EXIT_ERROR
        assert document["error"]["code"] == "document"

    def test_invalid_connection(self, workdir):
        status, document = run(["build", "--spec", "volume.json"])
        assert status == EXIT_ERROR
        assert document["error"]["code"] == "connection-invalid"

    def test_missing_file(self, workdir):
        status, document = run(["build", "--spec", "missing.json"])
        assert status == EXIT_ERROR
        assert document["error"]["code"] == "document"

    def test_out_file(self, workdir):
        stream = io.StringIO()
        status = main(["build", "--spec", "e1.json", "--out", "pw.json"], stream=stream)
        assert status == EXIT_PASS
        assert stream.getvalue() == ""
        with open(os.path.join(str(workdir), "pw.json"), encoding="utf-8") as handle:
            assert json.load(handle)["target"] == "pw"


class TestVerify:
    def test_isotropy_suite(self, workdir):
        status, document = run(["verify", "--spec", "e1.json", "--suite", "isotropy", "--no-timing"])
        assert status == EXIT_PASS
        assert document["verdict"] == "pass"
        assert all("timing" not in entry for entry in document["checks"])

    def test_query(self, workdir):
        status, document = run(["verify", "--spec", "e1.json", "--suite", "scale", "--query", "summary.total"])
        assert status == EXIT_PASS
        assert document == 1

    def test_bad_query(self, workdir):
        status, document = run(["verify", "--spec", "e1.json", "--suite", "scale", "--query", "[["])
        assert status == EXIT_ERROR
        assert document["error"]["code"] == "query"

    def test_unknown_suite(self, workdir):
        with pytest.raises(SystemExit):
            main(["verify", "--spec", "e1.json", "--suite", "nonexistent"], stream=io.StringIO())


class TestExpand:
    def test_metric_document(self, workdir):
        status, document = run(["expand", "--spec", "sphere.json", "--order", "2"])
        assert status == EXIT_PASS
        assert document["name"] == "sphere"
        assert document["order"] == 2
        assert document["last_nonzero_order"] == 2

    def test_connection_spec(self, workdir):
        status, document = run(["expand", "--spec", "e1.json", "--order", "2"])
        assert status == EXIT_PASS
        assert document["name"] == "E1"
        assert document["coefficients"]["1"] == {"x1,x1": "2*x1"}
        assert document["coefficients"]["2"] == {}
        assert document["obstruction_residual"] == {}

    def test_bad_order(self, workdir):
        status, document = run(["expand", "--spec", "sphere.json", "--order", "0"])
        assert status == EXIT_ERROR
        assert document["error"]["code"] == "expansion"


class TestQCurvature:
    def test_patterson_walker(self, workdir):
        status, document = run(["qcurv", "--spec", "e1.json"])
        assert status == EXIT_PASS
        assert document["Q"] == "0"
        assert document["laplacian_log_t"] == "0"
        assert document["verdict"] == "pass"
        assert sorted(document["laplacian_powers"]) == ["1", "2"]


class TestCorpus:
    def test_inline(self, workdir):
        status, document = run(["corpus", "--count", "2", "--seed", "5"])
        assert status == EXIT_PASS
        assert document["count"] == 2
        assert len(document["specs"]) == 2
        assert document["specs"][0]["name"] == "corpus-n2-d1-s5-1"

    def test_out_dir(self, workdir):
        status, document = run(["corpus", "--count", "2", "--dim", "3", "--out-dir", "corpus"])
        assert status == EXIT_PASS
        assert len(document["files"]) == 2
        for path in document["files"]:
            assert os.path.exists(path)
            status, built = run(["build", "--spec", path])
            assert status == EXIT_PASS, built

    def test_bad_dimension(self, workdir):
        status, document = run(["corpus", "--dim", "1"])
        assert status == EXIT_ERROR
        assert document["error"]["code"] == "dimension"

    def test_exit_codes_are_distinct(self):
        assert len({EXIT_PASS, EXIT_FAIL, EXIT_ERROR}) == 3
