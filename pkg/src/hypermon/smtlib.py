"""SMT-LIB v2 emission and the external solver text protocol.

Queries are one-shot: emit set-logic / declare-const / assert / check-sat,
read a single `sat`, `unsat`, or `unknown` line.  The solver command comes
from an explicit argument or the HYPERMON_SOLVER environment variable and
is run as a subprocess with the query on stdin (`z3 -in -smt2` works).
A timeout maps to `unknown`; launch failures, nonzero exits, and garbage
output raise SolverError instead, which callers must not conflate with an
inconclusive answer.

The mini-language divides toward zero while SMT-LIB `div` is Euclidean,
so division and modulo are wrapped in define-funs fixing the semantics.
"""

from __future__ import annotations

import os
import shlex
import subprocess
from typing import Iterable, Optional

from .errors import SolverError
from .exprs import expr_is_linear
from .minilang.ast import Binary, Expr, IntLit, Unary, Var

SOLVER_ENV_VAR = "HYPERMON_SOLVER"
DEFAULT_TIMEOUT = 5.0

_TDIV_DEFS = """\
(define-fun tdiv ((a Int) (b Int)) Int (ite (>= a 0) (div a b) (- (div (- a) b))))
(define-fun tmod ((a Int) (b Int)) Int (- a (* b (tdiv a b))))
"""

_SIMPLE = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


def smt_symbol(name: str) -> str:
    """Quote symbols whose names fall outside the simple-symbol charset."""
    if name and all(c in _SIMPLE for c in name) and not name[0].isdigit():
        return name
    return f"|{name}|"


def int_term(expr: Expr) -> str:
    """Emit an expression as an Int term (booleans become ite 1/0)."""
    if isinstance(expr, IntLit):
        return str(expr.value) if expr.value >= 0 else f"(- {-expr.value})"
    if isinstance(expr, Var):
        return smt_symbol(expr.name)
    if isinstance(expr, Unary):
        if expr.op == "-":
            return f"(- {int_term(expr.operand)})"
        return f"(ite {bool_term(expr)} 1 0)"
    if isinstance(expr, Binary):
        op = expr.op
        if op in ("+", "-", "*"):
            return f"({op} {int_term(expr.left)} {int_term(expr.right)})"
        if op == "/":
            return f"(tdiv {int_term(expr.left)} {int_term(expr.right)})"
        if op == "%":
            return f"(tmod {int_term(expr.left)} {int_term(expr.right)})"
        return f"(ite {bool_term(expr)} 1 0)"
    raise SolverError(f"cannot emit {expr!r} as a term")


def bool_term(expr: Expr) -> str:
    """Emit an expression as a Bool term (ints become `distinct 0`)."""
    if isinstance(expr, IntLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Unary) and expr.op == "!":
        return f"(not {bool_term(expr.operand)})"
    if isinstance(expr, Binary):
        op = expr.op
        if op == "&&":
            return f"(and {bool_term(expr.left)} {bool_term(expr.right)})"
        if op == "||":
            return f"(or {bool_term(expr.left)} {bool_term(expr.right)})"
        if op == "==":
            return f"(= {int_term(expr.left)} {int_term(expr.right)})"
        if op == "!=":
            return f"(distinct {int_term(expr.left)} {int_term(expr.right)})"
        if op in ("<", "<=", ">", ">="):
            return f"({op} {int_term(expr.left)} {int_term(expr.right)})"
    return f"(distinct {int_term(expr)} 0)"


def _uses_division(expr: Expr) -> bool:
    if isinstance(expr, Binary):
        return (
            expr.op in ("/", "%")
            or _uses_division(expr.left)
            or _uses_division(expr.right)
        )
    if isinstance(expr, Unary):
        return _uses_division(expr.operand)
    return False


def render_script(
    int_consts: Iterable[str],
    assertions: Iterable[Expr],
    extra_lines: Iterable[str] = (),
) -> str:
    """A complete one-shot SMT-LIB script asserting the given formulas."""
    assertions = list(assertions)
    linear = all(expr_is_linear(a) for a in assertions)
    divides = any(_uses_division(a) for a in assertions)
    lines = [f"(set-logic {'QF_LIA' if linear and not divides else 'QF_NIA'})"]
    if divides:
        lines.append(_TDIV_DEFS.rstrip())
    for name in int_consts:
        lines.append(f"(declare-const {smt_symbol(name)} Int)")
    lines.extend(extra_lines)
    for a in assertions:
        lines.append(f"(assert {bool_term(a)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def resolve_solver_command(command: Optional[str] = None) -> Optional[str]:
    """Explicit command, else the HYPERMON_SOLVER environment variable."""
    if command:
        return command
    return os.environ.get(SOLVER_ENV_VAR) or None


def smt_check(
    script: str,
    solver_command: Optional[str] = None,
    timeout: float = DEFAULT_TIMEOUT,
) -> str:
    """Run one check-sat exchange; returns 'sat', 'unsat', or 'unknown'.

    A solver timeout is an `unknown` answer.  Everything else that goes
    wrong (no command configured, launch failure, nonzero exit, output
    without a verdict line) raises SolverError.
    """
    command = resolve_solver_command(solver_command)
    if not command:
        raise SolverError(
            f"no SMT solver configured (set {SOLVER_ENV_VAR} or pass a command)"
        )
    try:
        proc = subprocess.run(
            shlex.split(command),
            input=script,
            capture_output=True,
            text=True,
            timeout=timeout,
        )
    except FileNotFoundError as exc:
        raise SolverError(f"cannot launch solver {command!r}: {exc}") from None
    except subprocess.TimeoutExpired:
        return "unknown"
    if proc.returncode != 0:
        raise SolverError(
            f"solver {command!r} exited with {proc.returncode}: "
            f"{(proc.stderr or proc.stdout).strip()[:200]}"
        )
    for line in proc.stdout.splitlines():
        word = line.strip()
        if word in ("sat", "unsat", "unknown"):
            return word
    raise SolverError(
        f"solver {command!r} produced no verdict: {proc.stdout.strip()[:200]!r}"
    )
