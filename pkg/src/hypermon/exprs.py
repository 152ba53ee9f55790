"""Symbolic expression utilities: folding, substitution, linear forms.

Expressions reuse the mini-language AST nodes; here variables name input
or havoc symbols rather than program variables.  Folding keeps formulas
small during symbolic execution and normalizes negated comparisons so the
downstream constraint solving only sees positive comparison atoms.
"""

from __future__ import annotations

from typing import Optional

from .minilang.ast import Binary, Call, Expr, IntLit, Unary, Var
from .minilang.interp import int_div, int_mod

TRUE = IntLit(1)
FALSE = IntLit(0)

_CMP_NEG = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "==": "!=", "!=": "=="}
_CMP_MIRROR = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "==", "!=": "!="}


def is_boolish(expr: Expr) -> bool:
    """Whether the expression always evaluates to 0 or 1."""
    if isinstance(expr, IntLit):
        return expr.value in (0, 1)
    if isinstance(expr, Unary):
        return expr.op == "!"
    if isinstance(expr, Binary):
        return expr.op in ("<", "<=", ">", ">=", "==", "!=", "&&", "||")
    return False


def truthy(expr: Expr) -> Expr:
    """An expression equal to 1 iff `expr` is nonzero."""
    return expr if is_boolish(expr) else Binary("!=", expr, FALSE)


def mk_unary(op: str, operand: Expr) -> Expr:
    if isinstance(operand, IntLit):
        if op == "-":
            return IntLit(-operand.value)
        if op == "!":
            return FALSE if operand.value else TRUE
    if op == "!":
        # push negation through comparisons and boolean connectives
        if isinstance(operand, Binary) and operand.op in _CMP_NEG:
            return Binary(_CMP_NEG[operand.op], operand.left, operand.right)
        if isinstance(operand, Binary) and operand.op == "&&":
            return mk_binary("||", mk_unary("!", operand.left), mk_unary("!", operand.right))
        if isinstance(operand, Binary) and operand.op == "||":
            return mk_binary("&&", mk_unary("!", operand.left), mk_unary("!", operand.right))
        if isinstance(operand, Unary) and operand.op == "!":
            return truthy(operand.operand)
    if op == "-" and isinstance(operand, Unary) and operand.op == "-":
        return operand.operand
    return Unary(op, operand)


def mk_binary(op: str, left: Expr, right: Expr) -> Expr:
    if isinstance(left, IntLit) and isinstance(right, IntLit):
        a, b = left.value, right.value
        if op == "+":
            return IntLit(a + b)
        if op == "-":
            return IntLit(a - b)
        if op == "*":
            return IntLit(a * b)
        if op == "/" and b != 0:
            return IntLit(int_div(a, b))
        if op == "%" and b != 0:
            return IntLit(int_mod(a, b))
        if op == "<":
            return TRUE if a < b else FALSE
        if op == "<=":
            return TRUE if a <= b else FALSE
        if op == ">":
            return TRUE if a > b else FALSE
        if op == ">=":
            return TRUE if a >= b else FALSE
        if op == "==":
            return TRUE if a == b else FALSE
        if op == "!=":
            return TRUE if a != b else FALSE
    if op == "&&":
        if isinstance(left, IntLit):
            return truthy(right) if left.value else FALSE
        if isinstance(right, IntLit):
            return truthy(left) if right.value else FALSE
    if op == "||":
        if isinstance(left, IntLit):
            return TRUE if left.value else truthy(right)
        if isinstance(right, IntLit):
            return TRUE if right.value else truthy(left)
    if op in ("+", "*") and isinstance(left, IntLit):
        left, right = right, left  # keep literals on the right
    if isinstance(right, IntLit):
        if op == "+" and right.value == 0:
            return left
        if op == "-" and right.value == 0:
            return left
        if op == "*" and right.value == 1:
            return left
        if op == "*" and right.value == 0:
            return FALSE
        if op == "/" and right.value == 1:
            return left
    return Binary(op, left, right)


def substitute(expr: Expr, env: dict[str, Expr]) -> Expr:
    """Replace variables by expressions, folding along the way."""
    if isinstance(expr, IntLit):
        return expr
    if isinstance(expr, Var):
        return env.get(expr.name, expr)
    if isinstance(expr, Unary):
        return mk_unary(expr.op, substitute(expr.operand, env))
    if isinstance(expr, Binary):
        return mk_binary(expr.op, substitute(expr.left, env), substitute(expr.right, env))
    if isinstance(expr, Call):
        return Call(expr.name, tuple(substitute(a, env) for a in expr.args))
    raise TypeError(f"not an expression: {expr!r}")


def conjunction(conjuncts) -> Expr:
    """Fold a sequence of conjuncts into one expression (empty -> true)."""
    out: Optional[Expr] = None
    for c in conjuncts:
        out = c if out is None else mk_binary("&&", out, c)
    return out if out is not None else TRUE


def flatten_conjuncts(expr: Expr) -> list[Expr]:
    """Split a &&-tree into its atomic conjuncts."""
    if isinstance(expr, Binary) and expr.op == "&&":
        return flatten_conjuncts(expr.left) + flatten_conjuncts(expr.right)
    if isinstance(expr, IntLit) and expr.value:
        return []
    return [expr]


def div_side_conditions(expr: Expr) -> list[Expr]:
    """Nonzero-divisor conditions for every division in the expression."""
    out: list[Expr] = []

    def walk(e: Expr):
        if isinstance(e, Binary):
            walk(e.left)
            walk(e.right)
            if e.op in ("/", "%") and not isinstance(e.right, IntLit):
                out.append(Binary("!=", e.right, FALSE))
        elif isinstance(e, Unary):
            walk(e.operand)
        elif isinstance(e, Call):
            for a in e.args:
                walk(a)

    walk(expr)
    return out


def linear_form(expr: Expr) -> Optional[tuple[dict[str, int], int]]:
    """Decompose into (coefficients, constant) when linear, else None.

    Multiplication is linear only when one factor is constant; division
    and modulo are treated as non-linear.
    """
    if isinstance(expr, IntLit):
        return {}, expr.value
    if isinstance(expr, Var):
        return {expr.name: 1}, 0
    if isinstance(expr, Unary) and expr.op == "-":
        sub = linear_form(expr.operand)
        if sub is None:
            return None
        coeffs, const = sub
        return {v: -c for v, c in coeffs.items()}, -const
    if isinstance(expr, Binary) and expr.op in ("+", "-"):
        left = linear_form(expr.left)
        right = linear_form(expr.right)
        if left is None or right is None:
            return None
        sign = 1 if expr.op == "+" else -1
        coeffs = dict(left[0])
        for v, c in right[0].items():
            coeffs[v] = coeffs.get(v, 0) + sign * c
            if coeffs[v] == 0:
                del coeffs[v]
        return coeffs, left[1] + sign * right[1]
    if isinstance(expr, Binary) and expr.op == "*":
        left = linear_form(expr.left)
        right = linear_form(expr.right)
        if left is None or right is None:
            return None
        lc, lk = left
        rc, rk = right
        if lc and rc:
            return None  # variable times variable
        if lc:
            return {v: c * rk for v, c in lc.items() if c * rk != 0}, lk * rk
        return {v: c * lk for v, c in rc.items() if c * lk != 0}, lk * rk
    return None


def expr_is_linear(expr: Expr) -> bool:
    """Whether arithmetic subterms are all linear (for SMT logic choice)."""
    if isinstance(expr, IntLit) or isinstance(expr, Var):
        return True
    if isinstance(expr, Unary):
        return expr_is_linear(expr.operand)
    if isinstance(expr, Binary):
        if expr.op in ("&&", "||", "<", "<=", ">", ">=", "==", "!="):
            return expr_is_linear(expr.left) and expr_is_linear(expr.right)
        return linear_form(expr) is not None
    return False
