# coding=utf-8
from fractions import Fraction

import numpy as np

from ..errors import ChartMismatchError, TensorSymmetryError
from ..expr import DenominatorFrame, Expr
from ..log_utils import get_default_logger
from .fields import CONTRAVARIANT, AffineConnection, TensorField, empty_components

log = get_default_logger(__name__)


def _lifted(frame, tensor):
    """Nonzero components of a tensor as frame values, keyed by index."""
    return {index: frame.lift(value) for index, value in tensor.items() if not value.is_zero}


def _cut(frame, item, truncate):
    return frame.truncate(item, *truncate) if truncate else item


def levi_civita(g):
    """
    Levi-Civita connection of a metric,
    Gamma_a^c_b = 1/2 g^cd (d_a g_db + d_b g_da - d_d g_ab).

    The result is cached on the metric. Its volume is det(g) with power 1/2.

    :param g: MetricTensor
    :return: AffineConnection
    """
    if g._levi_civita is not None:
        return g._levi_civita
    g.check_nondegenerate()
    christoffel = christoffel_components(g, g.inverse)
    connection = AffineConnection(
        g.chart, christoffel, volume=g.determinant, volume_power=Fraction(1, 2), name="levi-civita"
    )
    g._levi_civita = connection
    log.debug("Computed Levi-Civita connection on %r", g.chart)
    return connection


def christoffel_components(g, inverse, truncate=None):
    """
    Christoffel array of a metric for a given inverse (exact or truncated).

    :param g: TensorField "dd"
    :param inverse: TensorField "uu" or nested sequences
    :param truncate: (coordinate, order) (default is None): drop the terms of higher degree in that
                     coordinate from every product
    :return: numpy object array indexed [a, c, b]
    """
    chart = g.chart
    dim = g.dim
    weights = [[inverse[c][d] for d in range(dim)] for c in range(dim)]
    frame = DenominatorFrame.spanning(chart, [value for _, value in g.items()] + [w for row in weights for w in row])
    metric = _lifted(frame, g)
    coords = chart.coords
    dg = [{index: frame.diff(value, coord) for index, value in metric.items()} for coord in coords]
    zero = frame.zero
    first_kind = {}
    for a in range(dim):
        for b in range(a, dim):
            for d in range(dim):
                value = frame.add(dg[a].get((d, b), zero), dg[b].get((d, a), zero))
                value = frame.sub(value, dg[d].get((a, b), zero))
                if not frame.is_zero(value):
                    first_kind[a, d, b] = frame.scale(value, Fraction(1, 2))
    lifted = [[frame.lift(w) for w in row] for row in weights]
    christoffel = empty_components(dim, 3)
    for a in range(dim):
        for b in range(a, dim):
            for c in range(dim):
                total = zero
                for d in range(dim):
                    kind = first_kind.get((a, d, b))
                    if kind is None or frame.is_zero(lifted[c][d]):
                        continue
                    total = frame.add(total, _cut(frame, frame.mul(lifted[c][d], kind), truncate))
                christoffel[a, c, b] = frame.to_expr(total)
                christoffel[b, c, a] = christoffel[a, c, b]
    return christoffel


def riemann(conn):
    """
    Curvature R(d_a, d_b) d_c = R[a, b, c, d] d_d with R(X, Y) = [nabla_X, nabla_Y] - nabla_[X,Y]:

        R[a, b, c, d] = d_a Gamma_b^d_c - d_b Gamma_a^d_c + Gamma_b^e_c Gamma_a^d_e - Gamma_a^e_c Gamma_b^d_e

    :param conn: AffineConnection
    :return: TensorField with slots "dddu"
    """
    chart = conn.chart
    dim = conn.dim
    coords = chart.coords
    frame = DenominatorFrame.spanning(chart, [value for _, value in conn.christoffel.items()])
    gamma = _lifted(frame, conn.christoffel)
    zero = frame.zero
    components = empty_components(dim, 4)
    for a in range(dim):
        for b in range(dim):
            for c in range(dim):
                for d in range(dim):
                    if a == b:
                        components[a, b, c, d] = Expr.zero(chart)
                        continue
                    if b < a:
                        components[a, b, c, d] = -components[b, a, c, d]
                        continue
                    total = frame.sub(
                        frame.diff(gamma.get((b, d, c), zero), coords[a]),
                        frame.diff(gamma.get((a, d, c), zero), coords[b]),
                    )
                    for e in range(dim):
                        total = frame.add(total, frame.mul(gamma.get((b, e, c), zero), gamma.get((a, d, e), zero)))
                        total = frame.sub(total, frame.mul(gamma.get((a, e, c), zero), gamma.get((b, d, e), zero)))
                    components[a, b, c, d] = frame.to_expr(total)
    return TensorField(chart, "dddu", components, check_symmetry=False)


def ricci(conn, check_symmetry=True, truncate=None):
    """
    Ricci tensor Ric(X, Y) = trace(Z -> R(Z, X) Y):

        Ric_AB = d_C Gamma_A^C_B - d_A Gamma_C^C_B + Gamma_C^C_D Gamma_A^D_B - Gamma_A^C_D Gamma_C^D_B

    The full result is cached on the connection.

    :param conn: AffineConnection
    :param check_symmetry: bool (default is True): raise if the result is not symmetric, which
                           cannot happen for a torsion-free volume-preserving connection
    :param truncate: (coordinate, order) (default is None): drop the terms of higher degree in that
                     coordinate from every product; only the coefficients below that order stay exact
    :return: TensorField with slots "dd"
    """
    if truncate is None and conn._ricci is not None:
        return conn._ricci
    chart = conn.chart
    dim = conn.dim
    coords = chart.coords
    frame = DenominatorFrame.spanning(chart, [value for _, value in conn.christoffel.items()])
    gamma = _lifted(frame, conn.christoffel)
    zero = frame.zero
    traces = []
    for b in range(dim):
        total = zero
        for c in range(dim):
            total = frame.add(total, gamma.get((c, c, b), zero))
        traces.append(total)
    # contractions Gamma_A^C_D Gamma_C^D_B grouped by the first lower index
    by_first = [[(c, d, value) for (first, c, d), value in gamma.items() if first == a] for a in range(dim)]
    numerators = {}
    for a in range(dim):
        for b in range(dim):
            total = frame.neg(frame.diff(traces[b], coords[a]))
            for c in range(dim):
                value = gamma.get((a, c, b))
                if value is not None:
                    total = frame.add(total, frame.diff(value, coords[c]))
            for d in range(dim):
                value = gamma.get((a, d, b))
                if value is not None and not frame.is_zero(traces[d]):
                    total = frame.add(total, _cut(frame, frame.mul(traces[d], value), truncate))
            for c, d, left in by_first[a]:
                right = gamma.get((c, d, b))
                if right is not None:
                    total = frame.sub(total, _cut(frame, frame.mul(left, right), truncate))
            numerators[a, b] = total
    symmetric = all(
        frame.is_zero(frame.sub(numerators[a, b], numerators[b, a])) for a in range(dim) for b in range(a + 1, dim)
    )
    components = empty_components(dim, 2)
    for a in range(dim):
        for b in range(dim):
            if symmetric and b < a:
                components[a, b] = components[b, a]
            else:
                components[a, b] = frame.to_expr(numerators[a, b])
    if symmetric:
        result = TensorField(chart, "dd", components, symmetries=[(0, 1)], check_symmetry=False)
    elif check_symmetry:
        raise TensorSymmetryError(f"Ricci tensor of {conn!r} is not symmetric")
    else:
        result = TensorField(chart, "dd", components, check_symmetry=False)
    if truncate is None and symmetric:
        conn._ricci = result
    return result


def ricci_scalar(g):
    return g.trace(ricci(levi_civita(g)))


def covariant_derivative(conn, tensor):
    """
    Covariant derivative with the new covariant slot placed first:

        (nabla T)[k, i...] = d_k T[i...] + sum over "u" slots of Gamma_k^i_e T[..e..]
                             - sum over "d" slots of Gamma_k^e_i T[..e..]

    :param conn: AffineConnection
    :param tensor: TensorField on the connection's chart
    :return: TensorField with slots "d" + tensor.slots
    """
    if not conn.chart.same_coordinates(tensor.chart):
        raise ChartMismatchError(f"Connection on {conn.chart!r} cannot act on a tensor on {tensor.chart!r}")
    chart = conn.chart.union(tensor.chart)
    tensor = tensor.in_chart(chart)
    dim = conn.dim
    coords = chart.coords
    slots = tensor.slots
    components = empty_components(dim, tensor.rank + 1)
    for k in range(dim):
        for index, value in tensor.items():
            total = value.differentiate(coords[k])
            for position, slot in enumerate(slots):
                for e in range(dim):
                    moved = index[:position] + (e,) + index[position + 1 :]
                    other = tensor[moved]
                    if other.is_zero:
                        continue
                    if slot == CONTRAVARIANT:
                        total = total + conn.gamma(k, index[position], e) * other
                    else:
                        total = total - conn.gamma(k, e, index[position]) * other
            components[(k,) + index] = total
    return TensorField(chart, "d" + slots, components, check_symmetry=False)


def laplacian(g, f):
    """
    Laplace-Beltrami operator g^ab (d_a d_b f - Gamma_a^c_b d_c f).

    :param g: MetricTensor
    :param f: Expr on the metric's chart
    :return: Expr
    """
    conn = levi_civita(g)
    inverse = g.inverse
    chart = g.chart.union(f.chart) if f.chart != g.chart else g.chart
    f = f.in_chart(chart)
    coords = chart.coords
    gradient = [f.differentiate(coord) for coord in coords]
    total = Expr.zero(chart)
    for a in range(g.dim):
        for b in range(g.dim):
            weight = inverse[a, b]
            if weight.is_zero:
                continue
            value = gradient[b].differentiate(coords[a])
            for c in range(g.dim):
                if not gradient[c].is_zero:
                    value = value - conn.gamma(a, c, b) * gradient[c]
            total = total + weight * value
    return total


def check_metric_compatibility(g, conn=None):
    """
    Components of nabla g that fail to vanish.

    :param g: MetricTensor
    :param conn: AffineConnection (default is the Levi-Civita connection of g)
    :return: list of (index, Expr); empty iff nabla g = 0
    """
    conn = conn or levi_civita(g)
    derivative = covariant_derivative(conn, g)
    return derivative.nonzero_components()


def first_bianchi_witness(curvature):
    """
    First index (a, b, c, d) where R[a,b,c,d] + R[b,c,a,d] + R[c,a,b,d] != 0, or None.

    :param curvature: TensorField from riemann()
    """
    for a, b, c, d in np.ndindex(curvature.shape):
        if not (a < b < c):
            continue
        if not (curvature[a, b, c, d] + curvature[b, c, a, d] + curvature[c, a, b, d]).is_zero:
            return a, b, c, d
    return None
