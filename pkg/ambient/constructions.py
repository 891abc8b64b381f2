# coding=utf-8
"""
Explicit geometric constructions starting from a torsion-free volume-preserving affine connection D:

    D --patterson_walker--> g on T*N
    D --thomas_cone--> cone connection --patterson_walker--> cone metric (= cone_pw)
    cone_pw --normalize_to_fg--> ambient metric in normal form (= ambient_pw)
"""
from fractions import Fraction

import numpy as np

from .errors import (
    ChartError,
    ConsistencyError,
    DegenerateMetricError,
    DimensionError,
    EinsteinConditionError,
    EvaluationError,
)
from .expr import Chart, Expr
from .log_utils import get_default_logger
from .tensor import (
    AffineConnection,
    MetricTensor,
    TensorField,
    levi_civita,
    pullback_metric,
    random_point,
    ricci,
)
from .tensor.checks import POINT_ATTEMPTS
from .tensor.fields import empty_components

log = get_default_logger(__name__)

CONE_COORD = "x0"
CONE_FIBER = "y0"
AMBIENT_T = "t"
AMBIENT_RHO = "rho"


def lift(e, chart):
    """Read a scalar in a larger chart containing its coordinates under the same names."""
    return e.substitute({}, chart)


def _check_base(conn):
    if conn.dim < 2:
        raise DimensionError(f"Constructions need n >= 2, got a connection in dimension {conn.dim}")
    conn.validate()


# charts


def cotangent_chart(base, prefix="p", first_label=1, name=None):
    """
    Chart (x^A, p_A) of T*N: fiber coordinate names are the prefix followed by the 1-based position.

    :param base: Chart of N
    :param prefix: string (default is "p")
    :param first_label: int (default is 1): label of the first fiber coordinate
    :return: Chart
    """
    fibers = [f"{prefix}{k + first_label}" for k in range(base.dim)]
    clash = set(fibers) & set(base.coords)
    if clash:
        raise ChartError(f"Fiber coordinates {sorted(clash)} clash with base coordinates")
    return Chart(name or f"T*{base.name}", base.coords + tuple(fibers), positive=base.positive)


def cone_chart(base):
    """Chart (x^0, x^A) of the Thomas cone, x^0 positive."""
    return Chart(f"cone({base.name})", (CONE_COORD,) + base.coords, positive=(CONE_COORD,) + base.positive)


def cone_pw_chart(base):
    """Chart (x^0, x^A, y_A, y_0) of the cone metric."""
    fibers = tuple(f"y{k + 1}" for k in range(base.dim))
    return Chart(
        f"T*cone({base.name})",
        (CONE_COORD,) + base.coords + fibers + (CONE_FIBER,),
        positive=(CONE_COORD,) + base.positive,
    )


def ambient_chart(base, fiber_prefix="p"):
    """
    Chart (t, x^A, p_A, rho) of the ambient metric, t positive.

    :param base: Chart of N
    :param fiber_prefix: string or None: None gives (t, x, rho) for a metric given directly on M
    """
    middle = base.coords
    if fiber_prefix is not None:
        middle = cotangent_chart(base, fiber_prefix).coords
    for reserved in (AMBIENT_T, AMBIENT_RHO):
        if reserved in middle:
            raise ChartError(f"Coordinate name [{reserved}] is reserved for the ambient chart")
    return Chart(f"ambient({base.name})", (AMBIENT_T,) + middle + (AMBIENT_RHO,), positive=(AMBIENT_T,) + base.positive)


# constructions


def signature(g, seed=0):
    """
    Signature of a metric at a random rational point, by exact symmetric elimination (LDL^T with
    2x2 congruence steps when the remaining diagonal vanishes).

    :param g: MetricTensor
    :param seed: int
    :return: (positive count, negative count)
    """
    rng = np.random.default_rng(seed)
    for _ in range(POINT_ATTEMPTS):
        point = random_point(g.chart, rng)
        try:
            matrix = [[Fraction(v) for v in row] for row in g.evaluate(point).tolist()]
        except EvaluationError:
            continue
        return _inertia(matrix)
    raise EvaluationError(f"No regular rational point found for the signature of {g!r}")


def _inertia(matrix):
    size = len(matrix)
    m = [row[:] for row in matrix]
    active = list(range(size))
    positive = negative = 0
    while active:
        pivot = next((i for i in active if m[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in active for j in active if i != j and m[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # congruence: row/column j added to row/column i makes m[i][i] = 2 m[i][j]
            for k in range(size):
                m[i][k] += m[j][k]
            for k in range(size):
                m[k][i] += m[k][j]
            pivot = i
        value = m[pivot][pivot]
        if value > 0:
            positive += 1
        else:
            negative += 1
        active.remove(pivot)
        for r in active:
            factor = m[r][pivot] / value
            if factor == 0:
                continue
            for c in active:
                m[r][c] -= factor * m[pivot][c]
    return positive, negative


def patterson_walker(conn, prefix="p", first_label=1, check_signature=True, seed=0):
    """
    Patterson-Walker metric on T*N:

        g(d_xA, d_pB) = delta_A^B, g(d_xA, d_xB) = -2 Gamma_A^C_B p_C, g(d_pA, d_pB) = 0

    :param conn: AffineConnection on an n-dimensional chart, n >= 2
    :param prefix: string (default is "p"): fiber coordinate prefix
    :param first_label: int (default is 1): label of the first fiber coordinate
    :param check_signature: bool (default is True): verify signature (n, n) at a random point
    :param seed: int (default is 0)
    :return: MetricTensor on the chart (x^A, p_A)
    """
    _check_base(conn)
    n = conn.dim
    chart = cotangent_chart(conn.chart, prefix, first_label)
    fibers = [Expr.symbol(chart, coord) for coord in chart.coords[n:]]
    components = empty_components(2 * n, 2)
    for index in np.ndindex(components.shape):
        components[index] = Expr.zero(chart)
    for a in range(n):
        components[a, n + a] = Expr.one(chart)
        components[n + a, a] = Expr.one(chart)
        for b in range(a, n):
            total = Expr.zero(chart)
            for c in range(n):
                gamma = conn.gamma(a, c, b)
                if not gamma.is_zero:
                    total = total + lift(gamma, chart) * fibers[c]
            components[a, b] = -2 * total
            components[b, a] = components[a, b]
    g = MetricTensor(chart, components, check=False)
    if check_signature:
        found = signature(g, seed)
        if found != (n, n):
            raise DegenerateMetricError(f"Patterson-Walker metric has signature {found}, expected ({n}, {n})")
    log.info("Built Patterson-Walker metric on %r", chart)
    return g


def thomas_cone(conn):
    """
    Thomas cone connection on (x^0, x^A), the connection with nabla_X Y = D_X Y - Ric(X, Y) Z / (n - 1)
    for horizontal X, Y and nabla Z = id, Z = x^0 d_x0:

        Gamma~_A^C_B = Gamma_A^C_B
        Gamma~_A^0_B = -x^0 Ric_AB / (n - 1)
        Gamma~_0^C_B = Gamma~_B^C_0 = delta_B^C / x^0
        Gamma~_0^0_0 = Gamma~_0^C_0 = Gamma~_B^0_0 = 0

    It preserves the volume (x^0)^n sigma.

    :param conn: AffineConnection on an n-dimensional chart, n >= 2
    :return: AffineConnection
    """
    _check_base(conn)
    n = conn.dim
    chart = cone_chart(conn.chart)
    x0 = Expr.symbol(chart, CONE_COORD)
    curvature = ricci(conn)
    components = empty_components(n + 1, 3)
    for index in np.ndindex(components.shape):
        components[index] = Expr.zero(chart)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                components[a + 1, c + 1, b + 1] = lift(conn.gamma(a, c, b), chart)
            components[a + 1, 0, b + 1] = -x0 * lift(curvature[a, b], chart) / (n - 1)
        components[0, a + 1, a + 1] = 1 / x0
        components[a + 1, a + 1, 0] = 1 / x0
    volume = x0**n * lift(conn.volume, chart)
    log.info("Built Thomas cone connection on %r", chart)
    return AffineConnection(chart, components, volume=volume, name=f"thomas({conn.name or conn.chart.name})")


def reorder(g, chart):
    """
    The same metric read in a chart listing the same coordinates in another order.

    :param g: MetricTensor
    :param chart: Chart with the coordinates of g's chart, permuted
    """
    if sorted(chart.coords) != sorted(g.chart.coords):
        raise ChartError(f"{chart!r} is not a permutation of {g.chart!r}")
    positions = [g.chart.coord_index(coord) for coord in chart.coords]
    components = empty_components(chart.dim, 2)
    for i, old_i in enumerate(positions):
        for j, old_j in enumerate(positions):
            components[i, j] = lift(g[old_i, old_j], chart)
    return MetricTensor(chart, components, check=False)


def cone_pw_direct(conn):
    """
    The cone metric written out:

        2 dx^A.dy_A + 2 dx^0.dy_0 - (4 / x^0) y_B dx^0.dx^B - 2 y_C Gamma_A^C_B dx^A.dx^B
        + (2 x^0 y_0 / (n - 1)) Ric_AB dx^A.dx^B

    with a.b the symmetric product (a (x) b + b (x) a) / 2.
    """
    _check_base(conn)
    n = conn.dim
    chart = cone_pw_chart(conn.chart)
    x0 = Expr.symbol(chart, CONE_COORD)
    y0 = Expr.symbol(chart, CONE_FIBER)
    fibers = [Expr.symbol(chart, f"y{k + 1}") for k in range(n)]
    curvature = ricci(conn)
    size = 2 * n + 2
    components = empty_components(size, 2)
    for index in np.ndindex(components.shape):
        components[index] = Expr.zero(chart)

    def put(i, j, value):
        components[i, j] = value
        components[j, i] = value

    put(0, size - 1, Expr.one(chart))
    for a in range(n):
        put(a + 1, n + 1 + a, Expr.one(chart))
        put(0, a + 1, -2 * fibers[a] / x0)
        for b in range(a, n):
            total = 2 * x0 * y0 * lift(curvature[a, b], chart) / (n - 1)
            for c in range(n):
                gamma = conn.gamma(a, c, b)
                if not gamma.is_zero:
                    total = total - 2 * fibers[c] * lift(gamma, chart)
            put(a + 1, b + 1, total)
    return MetricTensor(chart, components, check=False)


def cone_pw_via_thomas(conn, seed=0):
    """patterson_walker(thomas_cone(D)) read in the chart (x^0, x^A, y_A, y_0)."""
    g = patterson_walker(thomas_cone(conn), prefix="y", first_label=0, seed=seed)
    return reorder(g, cone_pw_chart(conn.chart))


def cone_pw(conn, check_routes=True, seed=0):
    """
    Patterson-Walker metric of the Thomas cone connection.

    :param conn: AffineConnection
    :param check_routes: bool (default is True): also build patterson_walker(thomas_cone(D)) and
                         require exact agreement with the closed form
    :return: MetricTensor on (x^0, x^A, y_A, y_0)
    """
    g = cone_pw_direct(conn)
    if check_routes:
        other = cone_pw_via_thomas(conn, seed=seed)
        index = g.difference_witness(other)
        if index is not None:
            raise ConsistencyError(
                f"Cone metric routes disagree at {g.component_name(index)}: {g[index]} != {other[index]}"
            )
    return g


def ambient_pw(conn):
    """
    Ricci-flat ambient metric of the Patterson-Walker metric:

        g_tt = 2 rho, g_t,rho = t, g_xA,pB = t^2 delta,
        g_xA,xB = t^2 (-2 p_C Gamma_A^C_B + 2 rho Ric_AB / (n - 1))

    :param conn: AffineConnection
    :return: MetricTensor on (t, x^A, p_A, rho)
    """
    _check_base(conn)
    n = conn.dim
    chart = ambient_chart(conn.chart)
    t = Expr.symbol(chart, AMBIENT_T)
    rho = Expr.symbol(chart, AMBIENT_RHO)
    fibers = [Expr.symbol(chart, coord) for coord in chart.coords[n + 1 : 2 * n + 1]]
    curvature = ricci(conn)
    size = 2 * n + 2
    components = empty_components(size, 2)
    for index in np.ndindex(components.shape):
        components[index] = Expr.zero(chart)

    def put(i, j, value):
        components[i, j] = value
        components[j, i] = value

    # [[2 rho, t], [t, 0]] and t^2 [[A, I], [I, 0]] invert blockwise
    inverse = empty_components(size, 2)
    for index in np.ndindex(inverse.shape):
        inverse[index] = Expr.zero(chart)
    put(0, 0, 2 * rho)
    put(0, size - 1, t)
    inverse[0, size - 1] = inverse[size - 1, 0] = 1 / t
    inverse[size - 1, size - 1] = -2 * rho / t**2
    for a in range(n):
        put(a + 1, n + 1 + a, t**2)
        inverse[a + 1, n + 1 + a] = inverse[n + 1 + a, a + 1] = 1 / t**2
        for b in range(a, n):
            total = 2 * rho * lift(curvature[a, b], chart) / (n - 1)
            for c in range(n):
                gamma = conn.gamma(a, c, b)
                if not gamma.is_zero:
                    total = total - 2 * fibers[c] * lift(gamma, chart)
            put(a + 1, b + 1, t**2 * total)
            inverse[n + 1 + a, n + 1 + b] = inverse[n + 1 + b, n + 1 + a] = -total / t**2
    # det [[2 rho, t], [t, 0]] = -t^2, det t^2 [[A, I], [I, 0]] = (-1)^n t^(4n)
    determinant = (-1) ** (n + 1) * t ** (4 * n + 2)
    log.info("Built ambient metric on %r", chart)
    return MetricTensor(chart, components, inverse=inverse, check=False, determinant=determinant)


def _split_cone_chart(chart):
    coords = chart.coords
    if len(coords) < 6 or len(coords) % 2 or coords[0] != CONE_COORD or coords[-1] != CONE_FIBER:
        raise ChartError(f"{chart!r} is not a cone chart (x0, x^A, y_A, y0)")
    n = (len(coords) - 2) // 2
    base = coords[1 : n + 1]
    fibers = coords[n + 1 : 2 * n + 1]
    if list(fibers) != [f"y{k + 1}" for k in range(n)]:
        raise ChartError(f"{chart!r} is not a cone chart (x0, x^A, y_A, y0)")
    base_chart = Chart(chart.name, base, positive=[c for c in base if chart.is_positive(c)])
    return n, base_chart


def fg_coordinate_map(cone, ambient):
    """
    Images of the cone coordinates in ambient coordinates: x^0 = t, y_0 = t rho, y_A = t^2 p_A, x^A = x^A.

    :param cone: Chart (x0, x^A, y_A, y0)
    :param ambient: Chart (t, x^A, p_A, rho)
    :return: dict
    """
    n = (cone.dim - 2) // 2
    t = Expr.symbol(ambient, AMBIENT_T)
    rho = Expr.symbol(ambient, AMBIENT_RHO)
    images = {CONE_COORD: t, CONE_FIBER: t * rho}
    for k in range(n):
        images[cone.coords[k + 1]] = Expr.symbol(ambient, ambient.coords[k + 1])
        images[f"y{k + 1}"] = t**2 * Expr.symbol(ambient, ambient.coords[n + 1 + k])
    return images


def cone_coordinate_map(ambient, cone):
    """
    Inverse images: t = x^0, rho = y_0 / x^0, p_A = y_A / (x^0)^2, x^A = x^A.

    :param ambient: Chart (t, x^A, p_A, rho)
    :param cone: Chart (x0, x^A, y_A, y0)
    :return: dict
    """
    n = (cone.dim - 2) // 2
    x0 = Expr.symbol(cone, CONE_COORD)
    images = {AMBIENT_T: x0, AMBIENT_RHO: Expr.symbol(cone, CONE_FIBER) / x0}
    for k in range(n):
        images[ambient.coords[k + 1]] = Expr.symbol(cone, cone.coords[k + 1])
        images[ambient.coords[n + 1 + k]] = Expr.symbol(cone, f"y{k + 1}") / x0**2
    return images


def normalize_to_fg(g_cone):
    """
    Rewrite a cone metric in Fefferman-Graham normal form by pulling back along
    x^0 = t, y_0 = t rho, y_A = t^2 p_A.

    :param g_cone: MetricTensor on (x^0, x^A, y_A, y_0)
    :return: MetricTensor on (t, x^A, p_A, rho)
    """
    n, base = _split_cone_chart(g_cone.chart)
    ambient = ambient_chart(base)
    return pullback_metric(fg_coordinate_map(g_cone.chart, ambient), g_cone, ambient)


def einstein_ambient(g, lam, verify=True):
    """
    Ambient metric of an Einstein metric with Ric(g) = 2 lam (m - 1) g:

        t^2 (1 + lam rho)^2 g + 2 rho dt.dt + 2 t dt.drho

    :param g: MetricTensor on an m-dimensional chart
    :param lam: rational
    :param verify: bool (default is True): require the result to be Ricci-flat
    :return: MetricTensor on (t, x, rho)
    """
    m = g.dim
    lam = Fraction(lam)
    curvature = ricci(levi_civita(g))
    expected = g.scale(2 * lam * (m - 1))
    index = curvature.difference_witness(expected)
    if index is not None:
        raise EinsteinConditionError(
            f"Ric(g) != 2*{lam}*({m}-1)*g at {g.component_name(index)}: {curvature[index]} != {expected[index]}"
        )
    chart = ambient_chart(g.chart, fiber_prefix=None)
    t = Expr.symbol(chart, AMBIENT_T)
    rho = Expr.symbol(chart, AMBIENT_RHO)
    factor = t**2 * (1 + lam * rho) ** 2
    components = empty_components(m + 2, 2)
    for index in np.ndindex(components.shape):
        components[index] = Expr.zero(chart)
    components[0, 0] = 2 * rho
    components[0, m + 1] = t
    components[m + 1, 0] = t
    for i in range(m):
        for j in range(m):
            components[i + 1, j + 1] = factor * lift(g[i, j], chart)
    ambient = MetricTensor(chart, components, check=False)
    if verify:
        flat = ricci(levi_civita(ambient))
        if not flat.is_zero:
            index, value = flat.nonzero_components()[0]
            raise ConsistencyError(
                f"Einstein ambient metric is not Ricci-flat at {flat.component_name(index)}: {value}"
            )
    return ambient


def canonical_fields(conn):
    """
    Canonical vector fields: Z = x^0 d_x0 on the cone and, on the ambient chart,
    k = 2 p_A d_pA + 2 rho d_rho, Killing = t d_t - 2 p_A d_pA - 2 rho d_rho, Euler = t d_t.

    :param conn: AffineConnection
    :return: dict with keys "Z", "k", "killing", "euler"
    """
    n = conn.dim
    cone = cone_chart(conn.chart)
    ambient = ambient_chart(conn.chart)
    fibers = ambient.coords[n + 1 : 2 * n + 1]
    rho = Expr.symbol(ambient, AMBIENT_RHO)
    homothety = {AMBIENT_RHO: 2 * rho}
    killing = {AMBIENT_T: Expr.symbol(ambient, AMBIENT_T), AMBIENT_RHO: -2 * rho}
    for coord in fibers:
        homothety[coord] = 2 * Expr.symbol(ambient, coord)
        killing[coord] = -2 * Expr.symbol(ambient, coord)
    fields = {
        "Z": TensorField.vector(cone, {CONE_COORD: Expr.symbol(cone, CONE_COORD)}),
        "k": TensorField.vector(ambient, homothety),
        "killing": TensorField.vector(ambient, killing),
        "euler": TensorField.vector(ambient, {AMBIENT_T: Expr.symbol(ambient, AMBIENT_T)}),
    }
    if fields["euler"] != fields["killing"] + fields["k"]:
        raise ConsistencyError("Euler field differs from Killing field plus homothety")
    return fields


def projective_change(conn, h):
    """
    Projectively related connection D'_X Y = D_X Y + u(X) Y + u(Y) X with u = d ln h:

        Gamma'_A^C_B = Gamma_A^C_B + u_A delta_B^C + u_B delta_A^C

    It preserves the volume sigma h^(n+1).

    :param conn: AffineConnection
    :param h: Expr: positive scale on the connection's chart
    :return: AffineConnection
    """
    chart = conn.chart
    n = conn.dim
    h = lift(h, chart) if h.chart != chart else h
    if h.is_zero:
        raise DimensionError("Scale function is identically zero")
    form = [h.differentiate(coord) / h for coord in chart.coords]
    components = empty_components(n, 3)
    for a, c, b in np.ndindex(components.shape):
        value = conn.gamma(a, c, b)
        if b == c:
            value = value + form[a]
        if a == c:
            value = value + form[b]
        components[a, c, b] = value
    return AffineConnection(chart, components, volume=conn.volume * h ** (n + 1), name=conn.name)


def scale_map(conn, h):
    """
    Images of the cone coordinates under (x^0, x) -> (x^0 / h(x), x), the map relating the Thomas cones
    built from D' = projective_change(D, h) and D.

    :return: dict cone coordinate -> Expr on the cone chart
    """
    cone = cone_chart(conn.chart)
    images = {coord: Expr.symbol(cone, coord) for coord in cone.coords}
    images[CONE_COORD] = Expr.symbol(cone, CONE_COORD) / lift(h, cone)
    return images


def pullback_of_ricci(conn, chart):
    """pi^* Ric(D) as a (0,2) tensor on a chart whose leading coordinates after any prefix are those of D."""
    curvature = ricci(conn)
    components = empty_components(chart.dim, 2)
    positions = [chart.coord_index(coord) for coord in conn.chart.coords]
    for index in np.ndindex(components.shape):
        components[index] = Expr.zero(chart)
    for a, i in enumerate(positions):
        for b, j in enumerate(positions):
            components[i, j] = lift(curvature[a, b], chart)
    return TensorField(chart, "dd", components, symmetries=[(0, 1)], check_symmetry=False)


def pw_ricci_constant(conn, g=None):
    """
    The constant c with Ric(g) = c pi^* Ric(D) for the Patterson-Walker metric g of D.

    :param conn: AffineConnection
    :param g: MetricTensor (default is patterson_walker(conn))
    :return: Fraction, or None when Ric(D) = 0 (and then Ric(g) = 0 too)
    """
    g = g or patterson_walker(conn)
    curvature = ricci(levi_civita(g))
    base = pullback_of_ricci(conn, g.chart)
    constant = None
    for index, value in base.items():
        if not value.is_zero:
            ratio = curvature[index] / value
            if not ratio.is_constant:
                raise ConsistencyError(f"Ric(g) is not a constant multiple of pi^* Ric(D): ratio {ratio}")
            constant = ratio.to_fraction()
            break
    expected = base.scale(constant or 0)
    index = curvature.difference_witness(expected)
    if index is not None:
        raise ConsistencyError(f"Ric(g) and {constant} pi^* Ric(D) differ at {curvature.component_name(index)}")
    return constant


class ConstructionBundle(object):
    """
    One base connection together with everything built from it, computed lazily and kept by name:

        g_pw, thomas, g_cone, g_cone_thomas, g_ambient, g_normalized, fields, ricci_base
    """

    def __init__(self, conn, seed=0):
        """
        :param conn: AffineConnection: validated on construction
        :param seed: int (default is 0): seed of all random-point checks
        """
        _check_base(conn)
        self.connection = conn
        self.seed = seed
        self._data = {}
        self._builders = {
            "ricci_base": lambda: ricci(conn),
            "g_pw": lambda: patterson_walker(conn, seed=seed),
            "thomas": lambda: thomas_cone(conn),
            "g_cone": lambda: cone_pw(conn, check_routes=False),
            "g_cone_thomas": lambda: cone_pw_via_thomas(conn, seed=seed),
            "g_ambient": lambda: ambient_pw(conn),
            "g_normalized": lambda: normalize_to_fg(self.get("g_cone")),
            "fields": lambda: canonical_fields(conn),
        }

    def __repr__(self):
        return f"ConstructionBundle({self.connection!r}, built={sorted(self._data)})"

    @property
    def n(self):
        return self.connection.dim

    @property
    def base_chart(self):
        return self.connection.chart

    @property
    def cotangent_chart(self):
        return cotangent_chart(self.base_chart)

    @property
    def cone_chart(self):
        return cone_chart(self.base_chart)

    @property
    def ambient_chart(self):
        return ambient_chart(self.base_chart)

    @property
    def names(self):
        return sorted(self._builders)

    def get(self, name):
        """
        Derived object by name, built on first use.

        :param name: string: one of names
        """
        if name not in self._data:
            if name not in self._builders:
                raise KeyError(f"Unknown construction [{name}], expected one of {self.names}")
            log.debug("Building %s for %r", name, self.connection)
            self._data[name] = self._builders[name]()
        return self._data[name]

    def get_data(self):
        """Everything built so far."""
        return dict(self._data)
