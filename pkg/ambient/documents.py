# coding=utf-8
"""
JSON documents: connection specs (input), metric documents (input and output) and expansion documents.

A connection spec::

    {
        "name": "E1",
        "coordinates": ["x1", "x2"],
        "christoffel": {"1,2,1": "x1*x2"},
        "volume": "1"
    }

Keys "A,C,B" are 1-based and read Gamma_A^C_B; the lower indices are symmetrized automatically.
"""
import json
from collections import OrderedDict

import numpy as np

from .errors import AmbientError, DocumentError
from .expr import Chart, Expr, parse_expr
from .log_utils import get_default_logger
from .tensor import AffineConnection, MetricTensor
from .tensor.fields import empty_components

log = get_default_logger(__name__)


def _require(data, key, kind):
    if key not in data:
        raise DocumentError(f"Document is missing the [{key}] field")
    value = data[key]
    if not isinstance(value, kind):
        raise DocumentError(f"Field [{key}] must be of type {kind.__name__}, got {type(value).__name__}")
    return value


def loads(text):
    try:
        data = json.loads(text)
    except ValueError as e:
        raise DocumentError(f"Document is not valid JSON: {e}", reason=e)
    if not isinstance(data, dict):
        raise DocumentError("Document must be a JSON object")
    return data


def load(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return loads(handle.read())
    except OSError as e:
        raise DocumentError(f"Cannot read [{path}]: {e}", reason=e)


def dumps(document):
    """JSON text in insertion order, so equal documents print identically."""
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def _parse_index_key(key, dim, width, coords=None):
    parts = [part.strip() for part in str(key).split(",")]
    if len(parts) != width:
        raise DocumentError(f"Index key [{key}] must have {width} comma separated entries")
    indices = []
    for part in parts:
        if coords is not None and part in coords:
            indices.append(coords.index(part))
            continue
        try:
            value = int(part)
        except ValueError as e:
            raise DocumentError(f"Index key [{key}] has a non-integer entry [{part}]", reason=e)
        if not 1 <= value <= dim:
            raise DocumentError(f"Index key [{key}] is out of range 1..{dim}")
        indices.append(value - 1)
    return tuple(indices)


class ConnectionSpec(object):
    """
    Input document describing an affine connection by its Christoffel symbols.
    """

    def __init__(self, name, coordinates, christoffel, volume="1", positive=None):
        """
        :param name: string
        :param coordinates: list of string
        :param christoffel: dict "A,C,B" -> expression string
        :param volume: string (default is "1")
        :param positive: list of string (default is None): coordinates declared positive
        """
        self.name = name
        self.coordinates = list(coordinates)
        self.christoffel = OrderedDict(christoffel)
        self.volume = volume
        self.positive = list(positive or [])

    def __repr__(self):
        return f"ConnectionSpec({self.name!r}, {self.coordinates})"

    def __eq__(self, other):
        if not isinstance(other, ConnectionSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    __hash__ = None

    @classmethod
    def from_dict(cls, data):
        coordinates = _require(data, "coordinates", list)
        christoffel = _require(data, "christoffel", dict)
        if not all(isinstance(c, str) for c in coordinates):
            raise DocumentError("Coordinates must be strings")
        for key, value in christoffel.items():
            if not isinstance(value, (str, int)):
                raise DocumentError(f"Christoffel entry [{key}] must be an expression string")
        return cls(
            name=str(data.get("name", "connection")),
            coordinates=coordinates,
            christoffel={key: str(value) for key, value in christoffel.items()},
            volume=str(data.get("volume", "1")),
            positive=data.get("positive") or [],
        )

    @classmethod
    def loads(cls, text):
        return cls.from_dict(loads(text))

    @classmethod
    def load(cls, path):
        return cls.from_dict(load(path))

    @classmethod
    def from_connection(cls, conn, name=None):
        """
        Spec listing the nonzero Gamma_A^C_B with A <= B in canonical printed form.

        :param conn: AffineConnection
        :param name: string (default is conn.name)
        """
        entries = OrderedDict()
        dim = conn.dim
        for a in range(dim):
            for c in range(dim):
                for b in range(a, dim):
                    value = conn.gamma(a, c, b)
                    if not value.is_zero:
                        entries[f"{a + 1},{c + 1},{b + 1}"] = str(value)
        return cls(
            name=name or conn.name or conn.chart.name,
            coordinates=list(conn.chart.coords),
            christoffel=entries,
            volume=str(conn.volume),
            positive=list(conn.chart.positive),
        )

    def to_dict(self):
        data = OrderedDict()
        data["name"] = self.name
        data["coordinates"] = list(self.coordinates)
        if self.positive:
            data["positive"] = list(self.positive)
        data["christoffel"] = OrderedDict(self.christoffel)
        data["volume"] = self.volume
        return data

    def dumps(self):
        return dumps(self.to_dict())

    def chart(self):
        try:
            return Chart(self.name, self.coordinates, positive=self.positive)
        except AmbientError as e:
            raise DocumentError(f"Invalid coordinates in spec [{self.name}]: {e}", reason=e)

    def to_connection(self):
        """
        Parse into an AffineConnection, completing Gamma_B^C_A from Gamma_A^C_B.

        Conflicting symmetric entries raise DocumentError. Torsion and volume checks are left to
        AffineConnection.validate.

        :return: AffineConnection
        """
        chart = self.chart()
        dim = chart.dim
        components = empty_components(dim, 3)
        given = {}
        for key, text in self.christoffel.items():
            a, c, b = _parse_index_key(key, dim, 3)
            if (a, c, b) in given:
                raise DocumentError(f"Christoffel entry [{key}] is given twice")
            given[a, c, b] = parse_expr(text, chart)
        for (a, c, b), value in given.items():
            partner = given.get((b, c, a))
            if partner is not None and partner != value:
                raise DocumentError(
                    f"Christoffel entries {a + 1},{c + 1},{b + 1} and {b + 1},{c + 1},{a + 1} conflict: "
                    f"{value} != {partner}"
                )
        for index in np.ndindex(components.shape):
            a, c, b = index
            value = given.get(index)
            if value is None:
                value = given.get((b, c, a), Expr.zero(chart))
            components[index] = value
        volume = parse_expr(self.volume, chart)
        return AffineConnection(chart, components, volume=volume, name=self.name)


def metric_to_dict(g, name=None, extra=None):
    """
    Metric document: chart metadata plus the nonzero upper-triangle components keyed "coord,coord".

    :param g: MetricTensor
    :param name: string (default is the chart name)
    :param extra: dict (default is None): fields placed before the components
    """
    data = OrderedDict()
    data["name"] = name or g.chart.name
    data["coordinates"] = list(g.chart.coords)
    if g.chart.positive:
        data["positive"] = list(g.chart.positive)
    for key, value in (extra or {}).items():
        data[key] = value
    components = OrderedDict()
    for i in range(g.dim):
        for j in range(i, g.dim):
            value = g[i, j]
            if not value.is_zero:
                components[g.component_name((i, j))] = str(value)
    data["metric"] = components
    return data


def metric_from_dict(data):
    """
    Parse a metric document, e.g. {"coordinates": ["x", "y"], "metric": {"x,x": "1", "y,y": "1"}}.
    Keys may be coordinate names or 1-based indices; the lower triangle is completed by symmetry.

    :return: MetricTensor
    """
    coordinates = _require(data, "coordinates", list)
    entries = _require(data, "metric", dict)
    try:
        chart = Chart(str(data.get("name", "M")), coordinates, positive=data.get("positive") or [])
    except AmbientError as e:
        raise DocumentError(f"Invalid coordinates in metric document: {e}", reason=e)
    components = empty_components(chart.dim, 2)
    for index in np.ndindex(components.shape):
        components[index] = Expr.zero(chart)
    seen = {}
    for key, text in entries.items():
        i, j = _parse_index_key(key, chart.dim, 2, coords=list(chart.coords))
        value = parse_expr(str(text), chart)
        pair = (min(i, j), max(i, j))
        if pair in seen and seen[pair] != value:
            raise DocumentError(f"Metric entries for [{key}] conflict")
        seen[pair] = value
        components[i, j] = value
        components[j, i] = value
    g = MetricTensor(chart, components, check=False)
    g.check_nondegenerate()
    return g


def is_metric_document(data):
    return "metric" in data and "christoffel" not in data


def tensor_to_dict(tensor, symmetric=True):
    """Nonzero components keyed by coordinate names (upper triangle only for symmetric rank 2)."""
    components = OrderedDict()
    for index, value in tensor.items():
        if symmetric and tensor.rank == 2 and index[0] > index[1]:
            continue
        if not value.is_zero:
            components[tensor.component_name(index)] = str(value)
    return components


def expansion_to_dict(result, name=None):
    """
    Expansion document: solved phi^(k), residual tensors, the obstruction residual and free unknowns.

    :param result: ExpansionResult
    """
    data = OrderedDict()
    data["name"] = name or result.base.chart.name
    data["coordinates"] = list(result.base.chart.coords)
    data["order"] = result.order
    data["coefficients"] = OrderedDict(
        (str(k), tensor_to_dict(coefficient)) for k, coefficient in enumerate(result.coefficients, start=1)
    )
    data["residuals"] = OrderedDict(
        (str(k), tensor_to_dict(residual, symmetric=False)) for k, residual in sorted(result.residuals.items())
    )
    if result.obstruction is None:
        data["obstruction_residual"] = None
    else:
        data["obstruction_residual"] = tensor_to_dict(result.obstruction, symmetric=False)
    data["free_unknowns"] = OrderedDict((str(k), names) for k, names in sorted(result.free.items()))
    data["inconsistent_orders"] = list(result.inconsistent)
    data["last_nonzero_order"] = result.last_nonzero_order()
    return data
