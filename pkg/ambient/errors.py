# coding=utf-8


class AmbientError(Exception):
    code = "ambient-error"

    def __init__(self, *args, **kwargs):
        self.reason = kwargs.get("reason")
        super(AmbientError, self).__init__(*args)


class ExprError(AmbientError):
    code = "expr-error"


class ExprSyntaxError(ExprError):
    code = "expr-syntax"

    def __init__(self, message, text=None, position=None, **kwargs):
        self.text = text
        self.position = position
        if text is not None and position is not None:
            message = f"{message} at position {position}: {text[:position]}>>{text[position:]}"
        super(ExprSyntaxError, self).__init__(message, **kwargs)


class UnknownCoordinateError(ExprError):
    code = "unknown-coordinate"


class LogarithmError(ExprError):
    code = "logarithm"


class EvaluationError(ExprError):
    code = "evaluation"


class NonlinearSystemError(ExprError):
    code = "nonlinear-system"


class ChartError(AmbientError):
    code = "chart"


class ChartMismatchError(ChartError):
    code = "chart-mismatch"


class TensorSymmetryError(AmbientError):
    code = "tensor-symmetry"


class DegenerateMetricError(AmbientError):
    code = "degenerate-metric"


class ConnectionValidationError(AmbientError):
    code = "connection-invalid"


class DimensionError(AmbientError):
    code = "dimension"


class EinsteinConditionError(AmbientError):
    code = "einstein-condition"


class NormalFormError(AmbientError):
    code = "normal-form"


class HorizontalityError(AmbientError):
    code = "not-horizontal"


class ExpansionError(AmbientError):
    code = "expansion"


class DocumentError(AmbientError):
    code = "document"


class ConsistencyError(AmbientError):
    code = "inconsistent"
