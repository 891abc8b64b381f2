# coding=utf-8
"""
Coordinate-level transformations: Lie derivatives along vector fields and pullbacks along coordinate maps.
"""
from ..errors import ChartMismatchError, DimensionError, ExprError
from ..expr import Expr, determinant, invert_matrix
from ..log_utils import get_default_logger
from .fields import CONTRAVARIANT, AffineConnection, MetricTensor, TensorField, empty_components

log = get_default_logger(__name__)


def lie_derivative(vector, tensor):
    """
    Lie derivative in components, using partial derivatives only:

        (L_X T)[i...] = X^e d_e T[i...] - sum over "u" slots of d_e X^i T[..e..]
                        + sum over "d" slots of d_i X^e T[..e..]

    :param vector: TensorField with slots "u"
    :param tensor: TensorField
    :return: TensorField with the slots of tensor (a MetricTensor input keeps its symmetry)
    """
    if vector.slots != CONTRAVARIANT:
        raise DimensionError(f"Lie derivative needs a vector field, got slots [{vector.slots}]")
    if not vector.chart.same_coordinates(tensor.chart):
        raise ChartMismatchError(f"Vector field on {vector.chart!r} and tensor on {tensor.chart!r}")
    chart = vector.chart.union(tensor.chart)
    vector = vector.in_chart(chart)
    tensor = tensor.in_chart(chart)
    coords = chart.coords
    dim = chart.dim
    jacobian = [[vector[i].differentiate(coords[j]) for j in range(dim)] for i in range(dim)]
    components = empty_components(dim, tensor.rank)
    for index, value in tensor.items():
        total = Expr.zero(chart)
        if not value.is_zero:
            for e in range(dim):
                if not vector[e].is_zero:
                    total = total + vector[e] * value.differentiate(coords[e])
        for position, slot in enumerate(tensor.slots):
            for e in range(dim):
                other = tensor[index[:position] + (e,) + index[position + 1 :]]
                if other.is_zero:
                    continue
                if slot == CONTRAVARIANT:
                    total = total - jacobian[index[position]][e] * other
                else:
                    total = total + jacobian[e][index[position]] * other
        components[index] = total
    return TensorField(chart, tensor.slots, components, symmetries=tensor.symmetries, check_symmetry=False)


def lie_bracket(first, second):
    """[X, Y] = L_X Y."""
    return lie_derivative(first, second)


def _normalize_map(mapping, target_chart, source_chart):
    if isinstance(mapping, dict):
        missing = [c for c in target_chart.coords if c not in mapping]
        if missing:
            raise ExprError(f"Coordinate map gives no image for {missing}")
        images = [mapping[c] for c in target_chart.coords]
    else:
        images = list(mapping)
        if len(images) != target_chart.dim:
            raise DimensionError(f"Coordinate map has {len(images)} images, target chart needs {target_chart.dim}")
    result = {}
    for coord, image in zip(target_chart.coords, images):
        if not isinstance(image, Expr):
            image = Expr.constant(source_chart, image)
        elif not image.chart.same_coordinates(source_chart):
            raise ChartMismatchError(f"Image of [{coord}] lives on {image.chart!r}, expected {source_chart!r}")
        result[coord] = image
    return result


def _jacobian(images, target_chart, source_chart):
    """J[k][a] = d X^k / d y^a."""
    return [[images[coord].differentiate(y) for y in source_chart.coords] for coord in target_chart.coords]


def pullback_metric(mapping, g, source_chart):
    """
    Pullback (phi^* g)_ab = g_cd(phi) d_a phi^c d_b phi^d.

    :param mapping: dict target coordinate -> Expr over source_chart (or a list in target order)
    :param g: MetricTensor on the target chart
    :param source_chart: Chart
    :return: MetricTensor on source_chart
    """
    images = _normalize_map(mapping, g.chart, source_chart)
    jacobian = _jacobian(images, g.chart, source_chart)
    dim = source_chart.dim
    pulled = {index: value.substitute(images, source_chart) for index, value in g.items() if not value.is_zero}
    components = empty_components(dim, 2)
    for a in range(dim):
        for b in range(a, dim):
            total = Expr.zero(source_chart)
            for (c, d), value in pulled.items():
                if jacobian[c][a].is_zero or jacobian[d][b].is_zero:
                    continue
                total = total + value * jacobian[c][a] * jacobian[d][b]
            components[a, b] = total
            components[b, a] = total
    chart = source_chart
    for value in components.flat:
        chart = chart.union(value.chart)
    return MetricTensor(chart, components, check=False)


def pullback_connection(mapping, conn, source_chart):
    """
    Transformation law of Christoffel symbols along a coordinate map X(y):

        Gamma_a^c_b(y) = (J^-1)^c_k (d_a d_b X^k + Gamma'_i^k_j(X(y)) d_a X^i d_b X^j)

    The preserved density transforms as rho'(X(y)) det(J).

    :param mapping: dict target coordinate -> Expr over source_chart
    :param conn: AffineConnection on the target chart
    :param source_chart: Chart
    :return: AffineConnection on source_chart
    """
    images = _normalize_map(mapping, conn.chart, source_chart)
    jacobian = _jacobian(images, conn.chart, source_chart)
    inverse = invert_matrix(jacobian)
    dim = source_chart.dim
    source = source_chart.coords
    target = conn.chart.coords
    pulled = {
        index: value.substitute(images, source_chart) for index, value in conn.christoffel.items() if not value.is_zero
    }
    components = empty_components(dim, 3)
    for a in range(dim):
        for b in range(a, dim):
            transformed = []
            for k, coord in enumerate(target):
                total = images[coord].differentiate(source[a]).differentiate(source[b])
                for (i, kk, j), value in pulled.items():
                    if kk != k or jacobian[i][a].is_zero or jacobian[j][b].is_zero:
                        continue
                    total = total + value * jacobian[i][a] * jacobian[j][b]
                transformed.append(total)
            for c in range(dim):
                total = Expr.zero(source_chart)
                for k in range(dim):
                    if not inverse[c][k].is_zero and not transformed[k].is_zero:
                        total = total + inverse[c][k] * transformed[k]
                components[a, c, b] = total
                components[b, c, a] = total
    # the preserved density sigma^p picks up one factor det(J)
    exponent = 1 / conn.volume_power
    if exponent.denominator != 1:
        raise ExprError(f"Cannot transport a volume with power {conn.volume_power}")
    volume = conn.volume.substitute(images, source_chart) * determinant(jacobian) ** int(exponent)
    return AffineConnection(source_chart, components, volume=volume, volume_power=conn.volume_power, name=conn.name)
