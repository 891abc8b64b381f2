# coding=utf-8
from itertools import combinations

import numpy as np

from ..errors import (
    ChartMismatchError,
    ConnectionValidationError,
    DegenerateMetricError,
    DimensionError,
    TensorSymmetryError,
)
from ..expr import Expr, determinant, invert_matrix, to_fraction
from ..log_utils import get_default_logger

log = get_default_logger(__name__)

COVARIANT = "d"
CONTRAVARIANT = "u"


def empty_components(dim, rank):
    return np.empty((dim,) * rank, dtype=object)


def _slot_string(slots):
    slots = "".join(slots)
    if set(slots) - {COVARIANT, CONTRAVARIANT}:
        raise DimensionError(f"Slots must be made of '{COVARIANT}' and '{CONTRAVARIANT}', got [{slots}]")
    return slots


class TensorField(object):
    """
    Dense component array of exact scalars over a chart.

    Slots are recorded in order as a string, "d" for a covariant slot and "u" for a contravariant one,
    so a (0,2) tensor has slots "dd" and a vector field has slots "u". Instances are treated as immutable.
    """

    def __init__(self, chart, slots, components, symmetries=None, check_symmetry=True):
        """
        :param chart: Chart
        :param slots: string: e.g. "dd", "u", "udd"
        :param components: array-like of Expr (or rationals) with shape (dim,) * len(slots)
        :param symmetries: list of (int, int) (default is None): slot pairs the components are symmetric in
        :param check_symmetry: bool (default is True): verify declared symmetries component-wise
        """
        self._chart = chart
        self._slots = _slot_string(slots)
        array = np.asarray(components, dtype=object) if not isinstance(components, np.ndarray) else components
        shape = (chart.dim,) * len(self._slots)
        if array.shape != shape:
            raise DimensionError(f"Component array has shape {array.shape}, expected {shape}")
        converted = empty_components(chart.dim, len(self._slots))
        for index in np.ndindex(shape):
            value = array[index]
            if not isinstance(value, Expr):
                value = Expr.constant(chart, value)
            elif value.chart != chart:
                value = value.in_chart(chart)
            converted[index] = value
        self._components = converted
        self._symmetries = tuple(tuple(pair) for pair in (symmetries or ()))
        if check_symmetry:
            for first, second in self._symmetries:
                witness = self._symmetry_witness(first, second)
                if witness is not None:
                    raise TensorSymmetryError(f"Components are not symmetric in slots {first},{second}: {witness}")

    def _symmetry_witness(self, first, second):
        for index in np.ndindex(self.shape):
            if index[first] >= index[second]:
                continue
            swapped = list(index)
            swapped[first], swapped[second] = swapped[second], swapped[first]
            if self._components[index] != self._components[tuple(swapped)]:
                return index
        return None

    def __repr__(self):
        return f"{self.__class__.__name__}(slots={self._slots!r}, chart={self._chart!r})"

    @classmethod
    def zeros(cls, chart, slots):
        slots = _slot_string(slots)
        components = empty_components(chart.dim, len(slots))
        for index in np.ndindex(components.shape):
            components[index] = Expr.zero(chart)
        return TensorField(chart, slots, components, check_symmetry=False)

    @classmethod
    def from_function(cls, chart, slots, function, symmetries=None):
        """
        Build a tensor from a callable index tuple -> Expr.

        :param chart: Chart
        :param slots: string
        :param function: callable
        :param symmetries: list of (int, int)
        """
        slots = _slot_string(slots)
        components = empty_components(chart.dim, len(slots))
        for index in np.ndindex(components.shape):
            components[index] = function(index)
        return TensorField(chart, slots, components, symmetries=symmetries)

    @classmethod
    def vector(cls, chart, mapping):
        """
        Vector field from a mapping coordinate name -> coefficient.

        :param chart: Chart
        :param mapping: dict: coordinate -> Expr or rational; missing coordinates are zero
        :return: TensorField with slots "u"
        """
        components = empty_components(chart.dim, 1)
        for k, coord in enumerate(chart.coords):
            components[k] = mapping.get(coord, 0)
        for coord in mapping:
            chart.coord_index(coord)
        return TensorField(chart, "u", components)

    @property
    def chart(self):
        return self._chart

    @property
    def slots(self):
        return self._slots

    @property
    def rank(self):
        return len(self._slots)

    @property
    def valence(self):
        """(covariant count, contravariant count)"""
        return self._slots.count(COVARIANT), self._slots.count(CONTRAVARIANT)

    @property
    def dim(self):
        return self._chart.dim

    @property
    def shape(self):
        return (self._chart.dim,) * len(self._slots)

    @property
    def symmetries(self):
        return self._symmetries

    @property
    def components(self):
        """A copy of the component array."""
        return self._components.copy()

    def __getitem__(self, index):
        if not isinstance(index, tuple):
            index = (index,)
        return self._components[index]

    def indices(self):
        return np.ndindex(self.shape)

    def items(self):
        for index in np.ndindex(self.shape):
            yield index, self._components[index]

    def nonzero_components(self):
        return [(index, value) for index, value in self.items() if not value.is_zero]

    @property
    def is_zero(self):
        return all(value.is_zero for _, value in self.items())

    def component_name(self, index):
        """Readable component label, e.g. "x1,p2"."""
        return ",".join(self._chart.coords[i] for i in index)

    def map(self, function, chart=None, keep_symmetries=True):
        """
        Apply a scalar function to every component.

        :param function: callable Expr -> Expr
        :param chart: Chart (default is the common chart of the results)
        """
        components = empty_components(self.dim, self.rank)
        target = chart
        for index, value in self.items():
            result = function(value)
            components[index] = result
            if chart is None and isinstance(result, Expr):
                target = result.chart if target is None else target.union(result.chart)
        return self._rebuild(target or self._chart, components, self._symmetries if keep_symmetries else None)

    def _rebuild(self, chart, components, symmetries):
        return TensorField(chart, self._slots, components, symmetries=symmetries, check_symmetry=False)

    def _check_compatible(self, other):
        if not isinstance(other, TensorField):
            raise TypeError(f"Expected a TensorField, got {type(other).__name__}")
        if not self._chart.same_coordinates(other.chart):
            raise ChartMismatchError(f"Tensors live on different charts: {self._chart!r} and {other.chart!r}")
        if self._slots != other.slots:
            raise DimensionError(f"Slot mismatch: [{self._slots}] and [{other.slots}]")

    def _combine(self, other, operation):
        self._check_compatible(other)
        chart = self._chart.union(other.chart)
        components = empty_components(self.dim, self.rank)
        for index, value in self.items():
            components[index] = operation(value, other[index])
        shared = tuple(pair for pair in self._symmetries if pair in other.symmetries)
        return TensorField(chart, self._slots, components, symmetries=shared, check_symmetry=False)

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return self.map(lambda value: -value)

    def scale(self, factor):
        """
        Multiply every component by a scalar.

        :param factor: Expr or rational
        """
        return self.map(lambda value: value * factor)

    def __mul__(self, factor):
        return self.scale(factor)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TensorField):
            return NotImplemented
        if not self._chart.same_coordinates(other.chart) or self._slots != other.slots:
            return False
        return self.difference_witness(other) is None

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def difference_witness(self, other):
        """
        First component index where two tensors differ, or None when they are equal.

        :param other: TensorField
        :return: tuple or None
        """
        self._check_compatible(other)
        for index, value in self.items():
            if value != other[index]:
                return index
        return None

    def in_chart(self, chart):
        return self.map(lambda value: value.in_chart(chart), chart=chart)

    def substitute(self, mapping, chart=None):
        """Substitute into every component (no Jacobian factors, see pullback for that)."""
        if chart is not None and chart.dim != self.dim:
            raise DimensionError("Component substitution cannot change the chart dimension")
        return self.map(lambda value: value.substitute(mapping, chart))

    def evaluate(self, point):
        """Array of exact rationals at a point."""
        values = np.empty(self.shape, dtype=object)
        for index, value in self.items():
            values[index] = value.evaluate(point)
        return values

    def symmetric_part(self, first=0, second=1):
        def symmetrized(index):
            swapped = list(index)
            swapped[first], swapped[second] = swapped[second], swapped[first]
            return (self._components[index] + self._components[tuple(swapped)]) / 2

        return TensorField.from_function(self._chart, self._slots, symmetrized, symmetries=[(first, second)])

    def is_symmetric(self, first=0, second=1):
        return self._symmetry_witness(first, second) is None

    def as_matrix(self):
        """Nested lists of a rank-2 tensor's components."""
        if self.rank != 2:
            raise DimensionError(f"as_matrix needs a rank 2 tensor, got rank {self.rank}")
        return [[self._components[i, j] for j in range(self.dim)] for i in range(self.dim)]


class MetricTensor(TensorField):
    """
    Symmetric nondegenerate (0,2) tensor with lazily computed exact inverse and determinant.
    """

    def __init__(self, chart, components, inverse=None, check=True, determinant=None):
        """
        :param chart: Chart
        :param components: dim x dim array-like of Expr or rationals
        :param inverse: array-like (default is None): known inverse, trusted unless check is set
        :param check: bool (default is True): verify symmetry, and the supplied inverse if any
        :param determinant: Expr (default is None): known determinant, trusted
        """
        super(MetricTensor, self).__init__(chart, "dd", components, symmetries=[(0, 1)], check_symmetry=check)
        self._inverse = None
        self._determinant = determinant
        self._levi_civita = None
        if inverse is not None:
            inverse = TensorField(chart, "uu", inverse, check_symmetry=False)
            if check:
                self._verify_inverse(inverse)
            self._inverse = inverse

    @classmethod
    def from_tensor(cls, tensor, check=True):
        if tensor.slots != "dd":
            raise DimensionError(f"A metric needs slots 'dd', got [{tensor.slots}]")
        return cls(tensor.chart, tensor.components, check=check)

    @classmethod
    def from_entries(cls, chart, entries):
        """
        Metric from a sparse mapping of upper-triangle entries.

        :param chart: Chart
        :param entries: dict: (coord, coord) -> Expr or rational, symmetric completion is automatic
        :return: MetricTensor
        """
        components = empty_components(chart.dim, 2)
        for index in np.ndindex(components.shape):
            components[index] = Expr.zero(chart)
        for (first, second), value in entries.items():
            i, j = chart.coord_index(first), chart.coord_index(second)
            value = value if isinstance(value, Expr) else Expr.constant(chart, value)
            components[i, j] = value
            components[j, i] = value
        return cls(chart, components, check=False)

    def _rebuild(self, chart, components, symmetries):
        return MetricTensor(chart, components, check=False)

    def _verify_inverse(self, inverse):
        for i in range(self.dim):
            for j in range(self.dim):
                total = Expr.zero(self.chart)
                for k in range(self.dim):
                    total = total + self[i, k] * inverse[k, j]
                if total != (1 if i == j else 0):
                    raise DegenerateMetricError(f"Supplied inverse fails at component ({i}, {j})")

    def _walker_inverse(self):
        # [[A, I], [I, 0]] has inverse [[0, I], [I, -A]]
        if self.dim % 2:
            return None
        half = self.dim // 2
        for i in range(half):
            for j in range(half):
                if self[i, half + j] != (1 if i == j else 0) or not self[half + i, half + j].is_zero:
                    return None
        inverse = empty_components(self.dim, 2)
        for i in range(self.dim):
            for j in range(self.dim):
                if i < half and j < half:
                    inverse[i, j] = Expr.zero(self.chart)
                elif i >= half and j >= half:
                    inverse[i, j] = -self[i - half, j - half]
                else:
                    inverse[i, j] = Expr.one(self.chart) if abs(i - j) == half else Expr.zero(self.chart)
        return inverse

    @property
    def inverse(self):
        """Inverse metric g^ab as a TensorField with slots "uu"."""
        if self._inverse is None:
            components = self._walker_inverse()
            if components is None:
                components = invert_matrix(self.as_matrix())
            else:
                log.debug("Using the Walker block inverse for %r", self.chart)
            self._inverse = TensorField(self.chart, "uu", components, symmetries=[(0, 1)], check_symmetry=False)
        return self._inverse

    @property
    def determinant(self):
        if self._determinant is None:
            self._determinant = determinant(self.as_matrix())
        return self._determinant

    def check_nondegenerate(self):
        if self.determinant.is_zero:
            raise DegenerateMetricError(f"Metric on {self.chart!r} has identically zero determinant")
        return True

    def pair(self, first, second):
        """
        g(V, W) for two vector fields.

        :param first: TensorField "u"
        :param second: TensorField "u"
        :return: Expr
        """
        total = Expr.zero(self.chart)
        for i in range(self.dim):
            if first[i].is_zero:
                continue
            for j in range(self.dim):
                if not second[j].is_zero:
                    total = total + self[i, j] * first[i] * second[j]
        return total

    def lower(self, vector):
        """Metric dual covector g_ab V^b."""
        components = empty_components(self.dim, 1)
        for a in range(self.dim):
            total = Expr.zero(self.chart)
            for b in range(self.dim):
                if not vector[b].is_zero:
                    total = total + self[a, b] * vector[b]
            components[a] = total
        return TensorField(self.chart, "d", components)

    def trace(self, tensor):
        """g^ab T_ab of a (0,2) tensor."""
        inverse = self.inverse
        total = Expr.zero(self.chart)
        for a in range(self.dim):
            for b in range(self.dim):
                if not inverse[a, b].is_zero and not tensor[a, b].is_zero:
                    total = total + inverse[a, b] * tensor[a, b]
        return total


class AffineConnection(object):
    """
    Christoffel symbols of a torsion-free connection together with the volume density it should preserve.

    christoffel[A, C, B] is Gamma_A^C_B, so that nabla_A d_B = Gamma_A^C_B d_C.
    """

    def __init__(self, chart, christoffel, volume=None, name=None, volume_power=1):
        """
        :param chart: Chart
        :param christoffel: (dim, dim, dim) array-like of Expr or rationals, index order lower-upper-lower
        :param volume: Expr (default is 1): positive density sigma of sigma dx^1...dx^n
        :param name: string (default is None)
        :param volume_power: rational (default is 1): the preserved density is |volume|^volume_power,
                             1/2 for a Levi-Civita connection with volume = det(g)
        """
        self._chart = chart
        self.name = name
        self.volume_power = to_fraction(volume_power)
        self._christoffel = TensorField(chart, "dud", christoffel, check_symmetry=False)
        if volume is None:
            volume = Expr.one(chart)
        elif not isinstance(volume, Expr):
            volume = Expr.constant(chart, volume)
        self._volume = volume.in_chart(chart)
        self._ricci = None
        if self._volume.is_zero:
            raise ConnectionValidationError("Volume density is identically zero")

    def __repr__(self):
        return f"AffineConnection(name={self.name!r}, chart={self._chart!r})"

    @property
    def chart(self):
        return self._chart

    @property
    def dim(self):
        return self._chart.dim

    @property
    def christoffel(self):
        return self._christoffel

    @property
    def volume(self):
        return self._volume

    def gamma(self, lower_first, upper, lower_second):
        return self._christoffel[lower_first, upper, lower_second]

    def __eq__(self, other):
        if not isinstance(other, AffineConnection):
            return NotImplemented
        return self._christoffel == other.christoffel

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    __hash__ = None

    def difference_witness(self, other):
        return self._christoffel.difference_witness(other.christoffel)

    def torsion_witness(self):
        """First (A, C, B) with Gamma_A^C_B != Gamma_B^C_A, or None."""
        for a, b in combinations(range(self.dim), 2):
            for c in range(self.dim):
                if self.gamma(a, c, b) != self.gamma(b, c, a):
                    return a, c, b
        return None

    def volume_witness(self):
        """First A with Gamma_A^B_B != d_A ln(sigma), or None."""
        for a, coord in enumerate(self._chart.coords):
            trace = Expr.zero(self._chart)
            for b in range(self.dim):
                trace = trace + self.gamma(a, b, b)
            if trace != self.volume_power * (self._volume.differentiate(coord) / self._volume):
                return a
        return None

    def validate(self):
        """
        Raise ConnectionValidationError unless the connection is torsion-free and preserves its volume.

        :return: True
        """
        witness = self.torsion_witness()
        if witness is not None:
            a, c, b = witness
            raise ConnectionValidationError(
                "Connection has torsion: Gamma_{0}^{1}_{2} = {3} but Gamma_{2}^{1}_{0} = {4}".format(
                    a + 1, c + 1, b + 1, self.gamma(a, c, b), self.gamma(b, c, a)
                )
            )
        witness = self.volume_witness()
        if witness is not None:
            raise ConnectionValidationError(
                f"Connection does not preserve the volume {self._volume}: "
                f"trace Gamma_{witness + 1}^B_B differs from d_{self._chart.coords[witness]} ln(sigma)"
            )
        return True
