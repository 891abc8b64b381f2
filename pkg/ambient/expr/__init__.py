# coding=utf-8
from .chart import Chart, log_name
from .core import Expr, differentiate, evaluate, to_fraction
from .frame import DenominatorFrame
from .linear import LinearSolution, determinant, invert_matrix, row_echelon, solve_linear
from .parser import parse_expr

__all__ = [
    "Chart",
    "DenominatorFrame",
    "Expr",
    "LinearSolution",
    "determinant",
    "differentiate",
    "evaluate",
    "invert_matrix",
    "log_name",
    "parse_expr",
    "row_echelon",
    "solve_linear",
    "to_fraction",
]
