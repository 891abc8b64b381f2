# coding=utf-8
"""
Seeded random corpora of torsion-free, trace-free polynomial connections.

Entries Gamma_A^C_B (A <= B) are random polynomials of bounded total degree with coefficients in
[-2, 2]; afterwards each Gamma_A^A_A is shifted by minus the trace sum_B Gamma_A^B_B, so the
connection preserves the coordinate volume. Gamma_A^A_A enters only the trace for A, so one pass suffices.
"""
from itertools import combinations_with_replacement

import numpy as np

from .documents import ConnectionSpec
from .errors import DimensionError
from .expr import Chart, Expr
from .log_utils import get_default_logger
from .tensor import AffineConnection
from .tensor.fields import empty_components

log = get_default_logger(__name__)

COEFFICIENT_BOUND = 2
DEFAULT_DENSITY = 0.5


def base_chart(n, name="N"):
    return Chart(name, [f"x{k + 1}" for k in range(n)])


def _monomials(chart, degree):
    symbols = [Expr.symbol(chart, coord) for coord in chart.coords]
    monomials = [Expr.one(chart)]
    for total in range(1, degree + 1):
        for combination in combinations_with_replacement(range(chart.dim), total):
            term = Expr.one(chart)
            for k in combination:
                term = term * symbols[k]
            monomials.append(term)
    return monomials


def random_polynomial(chart, degree, rng, density=DEFAULT_DENSITY):
    """
    Random polynomial with small integer coefficients.

    :param chart: Chart
    :param degree: int: bound on the total degree
    :param rng: numpy Generator
    :param density: float: probability for each monomial to appear
    :return: Expr
    """
    total = Expr.zero(chart)
    for monomial in _monomials(chart, degree):
        if rng.random() >= density:
            continue
        coefficient = int(rng.integers(-COEFFICIENT_BOUND, COEFFICIENT_BOUND + 1))
        if coefficient:
            total = total + coefficient * monomial
    return total


def random_connection(n, degree, rng, name=None, density=DEFAULT_DENSITY):
    """
    One random torsion-free connection preserving dx^1...dx^n.

    :param n: int >= 2
    :param degree: int >= 0
    :param rng: numpy Generator
    :return: AffineConnection
    """
    if n < 2:
        raise DimensionError(f"Corpus connections need n >= 2, got {n}")
    if degree < 0:
        raise DimensionError(f"Polynomial degree must be non-negative, got {degree}")
    chart = base_chart(n, name or "N")
    components = empty_components(n, 3)
    for a in range(n):
        for b in range(a, n):
            for c in range(n):
                value = random_polynomial(chart, degree, rng, density)
                components[a, c, b] = value
                components[b, c, a] = value
    for a in range(n):
        trace = Expr.zero(chart)
        for b in range(n):
            trace = trace + components[a, b, b]
        components[a, a, a] = components[a, a, a] - trace
    return AffineConnection(chart, components, name=name)


def generate_corpus(count, n, degree, seed=0, density=DEFAULT_DENSITY):
    """
    Deterministic list of ConnectionSpec documents.

    :param count: int
    :param n: int >= 2
    :param degree: int >= 0
    :param seed: int (default is 0)
    :return: list of ConnectionSpec
    """
    if count < 0:
        raise DimensionError(f"Corpus size must be non-negative, got {count}")
    rng = np.random.default_rng(seed)
    specs = []
    for k in range(count):
        name = f"corpus-n{n}-d{degree}-s{seed}-{k + 1}"
        conn = random_connection(n, degree, rng, name=name, density=density)
        specs.append(ConnectionSpec.from_connection(conn, name=name))
    log.info("Generated %s connections (n=%s, degree=%s, seed=%s)", count, n, degree, seed)
    return specs
