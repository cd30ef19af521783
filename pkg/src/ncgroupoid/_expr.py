"""Restricted symbolic expressions shared by the space, algebra and calculus layers.

The accepted grammar is small on purpose: ``+ - * / ^``, real literals,
coordinate symbols, and the functions sin, cos, exp, log.  Parsing and
differentiation are delegated to sympy; evaluation goes through a single
lambdified bundle per expression so repeated evaluation is bit-for-bit
deterministic.
"""

from __future__ import annotations

import sympy
from sympy.core.function import AppliedUndef
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)

ALLOWED_FUNCTIONS = {
    "sin": sympy.sin,
    "cos": sympy.cos,
    "exp": sympy.exp,
    "log": sympy.log,
}

# parse_expr's standard transformations emit calls to these constructors.
_PARSE_GLOBALS = {
    "Integer": sympy.Integer,
    "Float": sympy.Float,
    "Rational": sympy.Rational,
    "Symbol": sympy.Symbol,
    "Function": sympy.Function,
}

_TRANSFORMATIONS = standard_transformations + (convert_xor,)


class ExpressionError(ValueError):
    """An expression does not fit the supported grammar, or failed to evaluate."""


def coordinate_symbols(dimension: int, prefix: str = "x") -> tuple[sympy.Symbol, ...]:
    """Symbols x1..xn (or another prefix) for a space of the given dimension."""
    if dimension == 0:
        return ()
    return tuple(sympy.symbols(f"{prefix}1:{dimension + 1}"))


def parse(text: object, symbols: tuple[sympy.Symbol, ...]) -> sympy.Expr:
    """Parse ``text`` into a sympy expression over exactly the given symbols.

    Accepts an already-built sympy expression as well (validated the same
    way).  Unknown names and unknown functions are rejected rather than
    evaluated.
    """
    if isinstance(text, sympy.Expr):
        expr = text
    else:
        local = {s.name: s for s in symbols}
        local.update(ALLOWED_FUNCTIONS)
        try:
            expr = parse_expr(
                str(text),
                local_dict=local,
                global_dict=dict(_PARSE_GLOBALS),
                transformations=_TRANSFORMATIONS,
            )
        except ExpressionError:
            raise
        except Exception as exc:
            raise ExpressionError(f"cannot parse expression {text!r}: {exc}") from None
    if not isinstance(expr, sympy.Expr):
        raise ExpressionError(f"not an arithmetic expression: {text!r}")
    undefined = expr.atoms(AppliedUndef)
    if undefined:
        names = sorted(str(f.func) for f in undefined)
        raise ExpressionError(f"unknown function(s) {names} in {text!r}")
    extra = expr.free_symbols - set(symbols)
    if extra:
        names = sorted(s.name for s in extra)
        raise ExpressionError(f"unknown symbol(s) {names} in {text!r}")
    return expr


class ValueGradFn:
    """Callable bundle ``coords -> (value, gradient)`` for one expression.

    The gradient is taken with respect to ``symbols`` in order.  Everything
    is evaluated in one generated function so the value and its partials
    come from the same arithmetic.
    """

    __slots__ = ("expr", "symbols", "partials", "_fn")

    def __init__(self, expr: sympy.Expr, symbols: tuple[sympy.Symbol, ...]):
        self.expr = expr
        self.symbols = tuple(symbols)
        self.partials = tuple(sympy.diff(expr, s) for s in self.symbols)
        self._fn = sympy.lambdify(self.symbols, [expr, *self.partials], modules="math")

    def __call__(self, coords) -> tuple[float, tuple[float, ...]]:
        try:
            out = self._fn(*coords)
        except Exception as exc:
            raise ExpressionError(
                f"cannot evaluate {self.expr} at {tuple(coords)}: {exc}"
            ) from None
        return float(out[0]), tuple(float(v) for v in out[1:])

    def value(self, coords) -> float:
        return self(coords)[0]


def format_expr(expr: sympy.Expr) -> str:
    """Render an expression in the input grammar (^ for powers)."""
    return sympy.sstr(expr).replace("**", "^")
