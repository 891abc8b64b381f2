# coding=utf-8
from .constructions import (
    ConstructionBundle,
    ambient_pw,
    canonical_fields,
    cone_pw,
    einstein_ambient,
    normalize_to_fg,
    patterson_walker,
    projective_change,
    thomas_cone,
)
from .documents import ConnectionSpec
from .expr import Chart, Expr, parse_expr
from .fg_solver import ExpansionResult, fg_expand, obstruction_residual
from .qcurv import q_curvature, q_report
from .reports import VerificationReport, verify
from .tensor import AffineConnection, MetricTensor, TensorField

__all__ = [
    "AffineConnection",
    "Chart",
    "ConnectionSpec",
    "ConstructionBundle",
    "ExpansionResult",
    "Expr",
    "MetricTensor",
    "TensorField",
    "VerificationReport",
    "ambient_pw",
    "canonical_fields",
    "cone_pw",
    "einstein_ambient",
    "fg_expand",
    "normalize_to_fg",
    "obstruction_residual",
    "parse_expr",
    "patterson_walker",
    "projective_change",
    "q_curvature",
    "q_report",
    "thomas_cone",
    "verify",
]
