# coding=utf-8
from .checks import (
    CheckReport,
    check_homothety,
    check_isotropic,
    check_parallel_distribution,
    equality_report,
    random_point,
    witness_point,
    zero_report,
)
from .curvature import (
    check_metric_compatibility,
    christoffel_components,
    covariant_derivative,
    first_bianchi_witness,
    laplacian,
    levi_civita,
    ricci,
    ricci_scalar,
    riemann,
)
from .fields import AffineConnection, MetricTensor, TensorField
from .lie import lie_bracket, lie_derivative, pullback_connection, pullback_metric

__all__ = [
    "AffineConnection",
    "CheckReport",
    "MetricTensor",
    "TensorField",
    "check_homothety",
    "check_isotropic",
    "check_metric_compatibility",
    "check_parallel_distribution",
    "christoffel_components",
    "covariant_derivative",
    "equality_report",
    "first_bianchi_witness",
    "laplacian",
    "levi_civita",
    "lie_bracket",
    "lie_derivative",
    "pullback_connection",
    "pullback_metric",
    "random_point",
    "ricci",
    "ricci_scalar",
    "riemann",
    "witness_point",
    "zero_report",
]
