# coding=utf-8
"""
Text front end for exact scalars.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom (("^" | "**") exponent)?
    exponent := ["+" | "-"] INTEGER | "(" ["+" | "-"] INTEGER ")"
    atom   := NUMBER | NAME | "ln" "(" NAME ")" | "(" expr ")"

Numbers may be integers or decimals, both read exactly.
"""
import re
from fractions import Fraction

from ..errors import ExprSyntaxError, LogarithmError, UnknownCoordinateError
from ..log_utils import get_default_logger
from .core import Expr

log = get_default_logger(__name__)

TOKEN_SPEC = [
    ("NUMBER", r"\d+(?:\.\d*)?|\.\d+"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("POW", r"\*\*|\^"),
    ("OP", r"[+\-*/()]"),
    ("SKIP", r"\s+"),
    ("MISMATCH", r"."),
]
RE_TOKEN = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_SPEC))


def tokenize(text):
    """
    Split an expression into (kind, value, position) tokens, ending with an END token.

    :param text: string
    :return: list of tuple
    """
    tokens = []
    for match in RE_TOKEN.finditer(text):
        kind = match.lastgroup
        value = match.group()
        if kind == "SKIP":
            continue
        if kind == "MISMATCH":
            raise ExprSyntaxError(f"Unexpected character [{value}]", text=text, position=match.start())
        tokens.append((kind, value, match.start()))
    tokens.append(("END", "", len(text)))
    return tokens


class _Parser(object):
    def __init__(self, text, chart):
        self.text = text
        self.chart = chart
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def accept(self, value):
        kind, token_value, _ = self.current
        if kind in ("OP", "POW") and token_value == value:
            return self.advance()
        return None

    def expect(self, value):
        token = self.accept(value)
        if token is None:
            self.fail(f"Expected [{value}]")
        return token

    def fail(self, message):
        kind, value, position = self.current
        found = "end of input" if kind == "END" else f"[{value}]"
        raise ExprSyntaxError(f"{message}, found {found}", text=self.text, position=position)

    def parse(self):
        if self.current[0] == "END":
            self.fail("Empty expression")
        result = self.expr()
        if self.current[0] != "END":
            self.fail("Unexpected token")
        return result

    def expr(self):
        result = self.term()
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self):
        result = self.unary()
        while True:
            if self.accept("*"):
                result = result * self.unary()
            elif self.accept("/"):
                position = self.current[2]
                divisor = self.unary()
                if divisor.is_zero:
                    raise ExprSyntaxError("Division by zero", text=self.text, position=position)
                result = result / divisor
            else:
                return result

    def unary(self):
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.current[0] == "POW":
            self.advance()
            position = self.current[2]
            exponent = self.exponent()
            if exponent < 0 and base.is_zero:
                raise ExprSyntaxError("Negative power of zero", text=self.text, position=position)
            return base**exponent
        return base

    def exponent(self):
        wrapped = self.accept("(") is not None
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        kind, value, _ = self.current
        if kind != "NUMBER" or not value.isdigit():
            self.fail("Exponent must be an integer")
        self.advance()
        if wrapped:
            self.expect(")")
        return sign * int(value)

    def atom(self):
        kind, value, position = self.current
        if kind == "NUMBER":
            self.advance()
            return Expr.constant(self.chart, Fraction(value))
        if kind == "NAME":
            self.advance()
            if value == "ln":
                return self.logarithm(position)
            if value not in self.chart.coords and value not in self.chart.parameters:
                raise UnknownCoordinateError(
                    f"Unknown coordinate [{value}] at position {position} for chart [{self.chart.name}]"
                )
            return Expr.symbol(self.chart, value)
        if self.accept("("):
            result = self.expr()
            self.expect(")")
            return result
        self.fail("Expected a number, a coordinate or '('")

    def logarithm(self, position):
        self.expect("(")
        kind, value, _ = self.current
        if kind != "NAME":
            raise LogarithmError(f"ln(...) at position {position} takes a single coordinate name")
        self.advance()
        if self.current[0] != "OP" or self.current[1] != ")":
            raise LogarithmError(f"ln(...) at position {position} takes a single coordinate name")
        self.advance()
        if value not in self.chart.coords:
            raise UnknownCoordinateError(f"Unknown coordinate [{value}] in ln() at position {position}")
        return Expr.log(self.chart, value)


def parse_expr(text, chart):
    """
    Parse text into an exact scalar on the chart.

    :param text: string: e.g. "x1^2/(1+x2) + 3/4*ln(t)"
    :param chart: Chart: names must be coordinates or parameters of it
    :return: Expr
    """
    if not isinstance(text, str):
        raise ExprSyntaxError(f"Expected expression text, got [{type(text).__name__}]")
    log.debug("Parsing [%s] on %r", text, chart)
    return _Parser(text, chart).parse()
