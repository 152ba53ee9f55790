"""Concrete big-step interpreter for the mini-language.

Arithmetic is over unbounded integers; division truncates toward zero and
division by zero is a hard error.  Evaluation is deterministic and pure,
so results are memoized per (method, argument tuple); a fuel bound guards
against accidental non-termination in user programs.
"""

from __future__ import annotations

import weakref
from typing import Iterable

from ..errors import DivergenceError, EvalError, PreconditionError
from .ast import (
    Assign,
    Binary,
    Block,
    Call,
    Expr,
    For,
    If,
    IntLit,
    MethodDef,
    Program,
    RESULT_VAR,
    Return,
    Stmt,
    Unary,
    Var,
    VarDecl,
    While,
)

DEFAULT_FUEL = 10_000_000


def int_div(a: int, b: int) -> int:
    """Division truncating toward zero (Java semantics)."""
    if b == 0:
        raise EvalError("division by zero")
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def int_mod(a: int, b: int) -> int:
    """Remainder with the sign of the dividend (Java semantics)."""
    return a - b * int_div(a, b)


def eval_expr(expr: Expr, env: dict[str, int], call=None) -> int:
    """Evaluate an expression under a variable environment.

    Booleans are 0/1.  `call`, when given, resolves method calls; symbolic
    formulas evaluated by the oracle and validator have no calls.
    """
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, Var):
        try:
            return env[expr.name]
        except KeyError:
            raise EvalError(f"unbound variable {expr.name!r}") from None
    if isinstance(expr, Unary):
        if expr.op == "-":
            return -eval_expr(expr.operand, env, call)
        if expr.op == "!":
            return 0 if eval_expr(expr.operand, env, call) else 1
        raise EvalError(f"unknown unary operator {expr.op!r}")
    if isinstance(expr, Binary):
        op = expr.op
        if op == "&&":
            if not eval_expr(expr.left, env, call):
                return 0
            return 1 if eval_expr(expr.right, env, call) else 0
        if op == "||":
            if eval_expr(expr.left, env, call):
                return 1
            return 1 if eval_expr(expr.right, env, call) else 0
        a = eval_expr(expr.left, env, call)
        b = eval_expr(expr.right, env, call)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            return int_div(a, b)
        if op == "%":
            return int_mod(a, b)
        if op == "<":
            return 1 if a < b else 0
        if op == "<=":
            return 1 if a <= b else 0
        if op == ">":
            return 1 if a > b else 0
        if op == ">=":
            return 1 if a >= b else 0
        if op == "==":
            return 1 if a == b else 0
        if op == "!=":
            return 1 if a != b else 0
        raise EvalError(f"unknown operator {op!r}")
    if isinstance(expr, Call):
        if call is None:
            raise EvalError(f"unexpected call {expr.name!r} in this context")
        args = tuple(eval_expr(a, env, call) for a in expr.args)
        return call(expr.name, args)
    raise EvalError(f"cannot evaluate {expr!r}")


class _ReturnSignal(Exception):
    def __init__(self, value: int):
        self.value = value


class Evaluator:
    """Interprets methods of one program, memoizing successful results."""

    def __init__(self, program: Program, fuel: int = DEFAULT_FUEL):
        self.program = program
        self.fuel = fuel
        self._memo: dict[tuple[str, tuple[int, ...]], int] = {}
        self._steps = 0
        self._depth = 0

    def call(self, method: str, args: Iterable[int]) -> int:
        args = tuple(args)
        key = (method, args)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        mdef = self.program.method(method)
        if len(args) != mdef.arity:
            raise EvalError(
                f"{method!r} expects {mdef.arity} arguments, got {len(args)}"
            )
        env = dict(zip(mdef.param_names, args))
        if mdef.requires is not None and not eval_expr(mdef.requires, env, self.call):
            raise PreconditionError(
                f"requires clause of {method!r} violated for arguments {args}"
            )
        # fuel is budgeted per top-level call, not cumulatively
        if self._depth == 0:
            self._steps = 0
        self._depth += 1
        try:
            result = self._run_method(mdef, env)
        finally:
            self._depth -= 1
        self._memo[key] = result
        return result

    def _run_method(self, mdef: MethodDef, env: dict[str, int]) -> int:
        try:
            self._exec_block(mdef.body, env)
        except _ReturnSignal as sig:
            return sig.value
        raise EvalError(f"method {mdef.name!r} finished without returning")

    def _tick(self):
        self._steps += 1
        if self._steps > self.fuel:
            raise DivergenceError(f"evaluation exceeded fuel bound {self.fuel}")

    def _exec_block(self, block: Block, env: dict[str, int]):
        declared: list[str] = []
        try:
            for stmt in block.stmts:
                self._exec_stmt(stmt, env, declared)
        finally:
            for name in declared:
                env.pop(name, None)

    def _exec_stmt(self, stmt: Stmt, env: dict[str, int], declared: list[str]):
        self._tick()
        if isinstance(stmt, VarDecl):
            env[stmt.name] = (
                eval_expr(stmt.init, env, self.call) if stmt.init is not None else 0
            )
            declared.append(stmt.name)
        elif isinstance(stmt, Assign):
            env[stmt.name] = eval_expr(stmt.value, env, self.call)
        elif isinstance(stmt, If):
            if eval_expr(stmt.cond, env, self.call):
                self._exec_block(stmt.then, env)
            elif stmt.orelse is not None:
                self._exec_block(stmt.orelse, env)
        elif isinstance(stmt, While):
            while eval_expr(stmt.cond, env, self.call):
                self._tick()
                self._exec_block(stmt.body, env)
        elif isinstance(stmt, For):
            loop_declared: list[str] = []
            try:
                if stmt.init is not None:
                    self._exec_stmt(stmt.init, env, loop_declared)
                while eval_expr(stmt.cond, env, self.call):
                    self._tick()
                    self._exec_block(stmt.body, env)
                    if stmt.update is not None:
                        self._exec_stmt(stmt.update, env, loop_declared)
            finally:
                for name in loop_declared:
                    env.pop(name, None)
        elif isinstance(stmt, Return):
            raise _ReturnSignal(eval_expr(stmt.value, env, self.call))
        elif isinstance(stmt, Block):
            self._exec_block(stmt, env)
        else:
            raise EvalError(f"cannot execute {stmt!r}")


_EVALUATORS: "weakref.WeakKeyDictionary[Program, Evaluator]" = (
    weakref.WeakKeyDictionary()
)


def evaluator_for(program: Program, fuel: int = DEFAULT_FUEL) -> Evaluator:
    """The shared memoizing evaluator of a program."""
    ev = _EVALUATORS.get(program)
    if ev is None or ev.fuel != fuel:
        ev = Evaluator(program, fuel)
        _EVALUATORS[program] = ev
    return ev


def eval_method(
    program: Program,
    method: str,
    args: Iterable[int],
    fuel: int = DEFAULT_FUEL,
) -> int:
    """Deterministic concrete evaluation of `method` on integer arguments.

    Raises PreconditionError if a requires clause rejects the arguments,
    EvalError for division by zero, DivergenceError past the fuel bound.
    """
    return evaluator_for(program, fuel).call(method, args)


def ensures_holds(program: Program, method: str, args: Iterable[int], result: int) -> bool:
    """Whether the method's ensures clause accepts (args, result).

    Vacuously true when there is no ensures clause.
    """
    mdef = program.method(method)
    if mdef.ensures is None:
        return True
    env = dict(zip(mdef.param_names, args))
    env[RESULT_VAR] = result
    ev = evaluator_for(program)
    return bool(eval_expr(mdef.ensures, env, ev.call))
