# coding: utf8
"""Tests for seeded random connection corpora"""
import numpy as np
import pytest

from ambient.corpus import base_chart, generate_corpus, random_connection, random_polynomial
from ambient.errors import DimensionError
from ambient.tensor import ricci


class TestCorpus:
    def test_deterministic(self):
        first = generate_corpus(3, 2, 1, seed=7)
        second = generate_corpus(3, 2, 1, seed=7)
        assert first == second, "Result of [generate_corpus()] with a fixed seed"

    def test_seed_changes_corpus(self):
        assert generate_corpus(2, 2, 2, seed=0) != generate_corpus(2, 2, 2, seed=1)

    def test_names(self):
        specs = generate_corpus(2, 3, 1, seed=4)
        assert [spec.name for spec in specs] == ["corpus-n3-d1-s4-1", "corpus-n3-d1-s4-2"]
        assert specs[0].coordinates == ["x1", "x2", "x3"]

    @pytest.mark.parametrize("n,degree", [(2, 0), (2, 2), (3, 1)])
    def test_connections_are_valid(self, n, degree):
        for spec in generate_corpus(2, n, degree, seed=11):
            conn = spec.to_connection()
            assert conn.validate()
            assert ricci(conn).is_symmetric(), "Result of [ricci()] for a volume-preserving connection"

    def test_empty(self):
        assert generate_corpus(0, 2, 1) == []

    @pytest.mark.parametrize("count,n,degree", [(1, 1, 1), (1, 2, -1), (-1, 2, 1)])
    def test_bad_arguments(self, count, n, degree):
        with pytest.raises(DimensionError):
            generate_corpus(count, n, degree)

    def test_random_connection_trace_free(self):
        conn = random_connection(3, 2, np.random.default_rng(3))
        assert conn.volume == 1
        assert conn.volume_witness() is None

    def test_random_polynomial_degree(self):
        chart = base_chart(2)
        rng = np.random.default_rng(5)
        for _ in range(10):
            value = random_polynomial(chart, 2, rng)
            assert value.degree("x1") <= 2
            assert value.degree("x2") <= 2
