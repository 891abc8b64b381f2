# coding=utf-8
import re

from sympy import Symbol
from sympy.polys.domains import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import lex

from ..errors import ChartError, ChartMismatchError, UnknownCoordinateError
from ..log_utils import get_default_logger

log = get_default_logger(__name__)

RE_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
RESERVED_NAMES = frozenset(["ln"])


def log_name(coord):
    """
    Name of the generator standing for ln(coord).

    >>> log_name("t")
    'ln(t)'
    """
    return f"ln({coord})"


class Chart(object):
    """
    An ordered list of named coordinates together with the exact rational function field
    Q(coords, ln(positive coords), parameters) every scalar on the chart lives in.

    Parameters are extra symbols (the unknowns of a linear system); they belong to the field
    but are not coordinates, so differentiation treats them as constants.
    """

    def __init__(self, name, coords, positive=None, parameters=None):
        """
        :param name: string: identifier of the chart
        :param coords: list of string: ordered coordinate names
        :param positive: list of string (default is None): coordinates declared positive, the only
                         admissible logarithm arguments
        :param parameters: list of string (default is None): constant symbols adjoined to the field
        """
        self.name = str(name)
        coords = tuple(str(c) for c in coords)
        positive = set(positive or ())
        parameters = tuple(str(p) for p in (parameters or ()))
        if not coords:
            raise ChartError(f"Chart [{self.name}] has no coordinates")
        for item in coords + parameters:
            if not RE_NAME.match(item) or item in RESERVED_NAMES:
                raise ChartError(f"Invalid symbol name [{item}] in chart [{self.name}]")
        if len(set(coords)) != len(coords):
            raise ChartError(f"Duplicate coordinate names in chart [{self.name}]: {coords}")
        if len(set(parameters)) != len(parameters) or set(parameters) & set(coords):
            raise ChartError(f"Parameters {parameters} clash with each other or with coordinates {coords}")
        unknown = positive - set(coords)
        if unknown:
            raise ChartError(f"Positive coordinates {sorted(unknown)} are not coordinates of [{self.name}]")
        self._coords = coords
        self._positive = tuple(c for c in coords if c in positive)
        self._parameters = parameters
        self._generators = coords + tuple(log_name(c) for c in self._positive) + parameters
        self._index = {gen: i for i, gen in enumerate(self._generators)}
        # sympy caches fields per generator tuple, so equal charts share one field object
        created = field([Symbol(gen) for gen in self._generators], QQ, lex)
        self._field = created[0]

    def __repr__(self):
        extras = ""
        if self._positive:
            extras += f", positive={list(self._positive)}"
        if self._parameters:
            extras += f", parameters={len(self._parameters)}"
        return f"Chart({self.name!r}, {list(self._coords)}{extras})"

    def __eq__(self, other):
        if not isinstance(other, Chart):
            return NotImplemented
        return self._generators == other._generators

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(self._generators)

    @property
    def coords(self):
        return self._coords

    @property
    def positive(self):
        return self._positive

    @property
    def parameters(self):
        return self._parameters

    @property
    def dim(self):
        return len(self._coords)

    @property
    def field(self):
        """The sympy rational function field over QQ backing this chart."""
        return self._field

    @property
    def generators(self):
        return self._generators

    def generator_index(self, name):
        return self._index[name]

    def has_generator(self, name):
        return name in self._index

    def coord_index(self, coord):
        """
        Position of a coordinate in the chart.

        :param coord: string: coordinate name
        :return: int
        """
        try:
            return self._coords.index(coord)
        except ValueError as e:
            raise UnknownCoordinateError(f"Unknown coordinate [{coord}] for chart [{self.name}]", reason=e)

    def is_positive(self, coord):
        return coord in self._positive

    def same_coordinates(self, other):
        return self._coords == other.coords and self._positive == other.positive

    def with_parameters(self, names):
        """
        Chart with extra parameters adjoined (existing ones are kept, duplicates ignored).

        :param names: list of string
        :return: Chart
        """
        merged = list(self._parameters)
        merged.extend(name for name in names if name not in self._parameters)
        if tuple(merged) == self._parameters:
            return self
        return Chart(self.name, self._coords, self._positive, merged)

    def without_parameters(self):
        if not self._parameters:
            return self
        return Chart(self.name, self._coords, self._positive)

    def union(self, other):
        """
        Common chart of two charts sharing their coordinates.

        :param other: Chart
        :return: Chart holding the parameters of both
        """
        if self == other:
            return self
        if not self.same_coordinates(other):
            raise ChartMismatchError(f"Charts {self!r} and {other!r} do not share coordinates")
        return self.with_parameters(other.parameters)

    def renamed(self, name):
        return Chart(name, self._coords, self._positive, self._parameters)
