"""Symbolic execution: logical input/output characterizations of methods.

A characterization is a disjunction of (path condition, output expression)
pairs over the method's input symbols, extracted by forward symbolic
execution of the (call-inlined) body.  Loops are handled per loop:

* an annotated invariant, when enabled, summarizes the loop by havocking
  every variable assigned inside it and assuming the invariant together
  with the negated guard (invariants are trusted, not re-proved; a bogus
  invariant shows up as validation counterexamples);
* otherwise the loop is unrolled to a fixed depth, and the path that
  still satisfies the guard after the last unroll is cut off: its output
  becomes HAVOC (unconstrained) and the characterization is downgraded to
  an over-approximation.

Over-approximation keeps violation verdicts sound: every real execution
is admitted by some path, so output equality proved over the
characterization holds of the program as well.  The `exact` flag is set
only when no cutoff occurred and no loop summary leaks havoc symbols into
an output; `oracle.upgrade_exactness` can additionally prove summarized
outputs deterministic with an SMT solver and lift the flag.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import SymexecError
from .exprs import (
    conjunction,
    div_side_conditions,
    flatten_conjuncts,
    mk_unary,
    substitute,
    truthy,
)
from .havoc import HavocUndecided, havoc_solutions
from .minilang.ast import (
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
    Return,
    Stmt,
    Unary,
    Var,
    VarDecl,
    While,
    free_vars,
)
from .minilang.domains import Interval, input_domain
from .minilang.interp import EvalError, eval_method

MAX_PATHS = 4096

HAVOC_SEP = "#"  # program identifiers cannot contain '#'


@dataclass(frozen=True)
class PathFormula:
    """One execution path: a conjunction of conditions and an output.

    `output` is None for cutoff paths, meaning the output is unconstrained
    (HAVOC).  `havoc_syms` are the fresh symbols introduced on this path;
    they are implicitly existentially quantified.
    """

    condition: tuple[Expr, ...]
    output: Optional[Expr]
    havoc_syms: frozenset[str] = frozenset()
    cutoff: bool = False

    @property
    def is_havoc(self) -> bool:
        return self.output is None

    def condition_expr(self) -> Expr:
        return conjunction(self.condition)

    def __str__(self):
        cond = " && ".join(str(c) for c in self.condition) or "true"
        out = "HAVOC" if self.output is None else str(self.output)
        return f"[{cond}]  ->  {out}"


@dataclass
class Characterization:
    """Disjunction of path formulas for one method.

    When `exact`, the disjunction agrees with the method's input/output
    graph on the declared domain: paths are pairwise disjoint, exhaustive,
    and each output expression matches concrete evaluation.  When not
    exact the disjunction still over-approximates the graph, which keeps
    equality (bottom-verdict) reasoning sound.
    """

    method: str
    input_symbols: tuple[str, ...]
    paths: list[PathFormula]
    exact: bool
    unroll_depth: int = 0
    used_invariants: bool = False
    summarized_loops: int = 0

    @property
    def arity(self) -> int:
        return len(self.input_symbols)

    def havoc_symbols(self) -> frozenset[str]:
        out: frozenset[str] = frozenset()
        for p in self.paths:
            out |= p.havoc_syms
        return out

    def havoc_in_output(self) -> bool:
        return any(
            p.output is not None and (free_vars(p.output) & p.havoc_syms)
            for p in self.paths
        )

    def pretty(self) -> str:
        lines = [
            f"characterization of {self.method}({', '.join(self.input_symbols)})"
            f"  exact={self.exact}  paths={len(self.paths)}"
        ]
        lines += [f"  {p}" for p in self.paths]
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Call inlining

def _has_return_in_loop(stmt: Stmt, inside_loop: bool = False) -> bool:
    if isinstance(stmt, Return):
        return inside_loop
    if isinstance(stmt, Block):
        return any(_has_return_in_loop(s, inside_loop) for s in stmt.stmts)
    if isinstance(stmt, If):
        branches = [stmt.then] + ([stmt.orelse] if stmt.orelse else [])
        return any(_has_return_in_loop(b, inside_loop) for b in branches)
    if isinstance(stmt, While):
        return _has_return_in_loop(stmt.body, True)
    if isinstance(stmt, For):
        return _has_return_in_loop(stmt.body, True)
    return False


class _Inliner:
    def __init__(self, program: Program):
        self.program = program
        self.counter = itertools.count(1)
        self._flat: dict[str, Block] = {}

    def flat_body(self, method: str) -> Block:
        """Call-free body of a method, in terms of its own names."""
        if method not in self._flat:
            mdef = self.program.method(method)
            self._flat[method] = Block(self._process_block(mdef.body))
        return self._flat[method]

    def _process_block(self, block: Block) -> list[Stmt]:
        out: list[Stmt] = []
        for stmt in block.stmts:
            out.extend(self._process_stmt(stmt))
        return out

    def _process_stmt(self, stmt: Stmt) -> list[Stmt]:
        pre: list[Stmt] = []
        if isinstance(stmt, VarDecl):
            init = self._rewrite(stmt.init, pre) if stmt.init is not None else None
            return pre + [VarDecl(stmt.name, init, line=stmt.line)]
        if isinstance(stmt, Assign):
            value = self._rewrite(stmt.value, pre)
            return pre + [Assign(stmt.name, value, line=stmt.line)]
        if isinstance(stmt, Return):
            value = self._rewrite(stmt.value, pre)
            return pre + [Return(value, line=stmt.line)]
        if isinstance(stmt, If):
            cond = self._rewrite(stmt.cond, pre)
            then = Block(self._process_block(stmt.then))
            orelse = Block(self._process_block(stmt.orelse)) if stmt.orelse else None
            return pre + [If(cond, then, orelse, line=stmt.line)]
        if isinstance(stmt, While):
            self._reject_loop_calls(stmt.cond, "loop guard")
            return [
                While(stmt.cond, Block(self._process_block(stmt.body)),
                      annotation=stmt.annotation, line=stmt.line)
            ]
        if isinstance(stmt, For):
            self._reject_loop_calls(stmt.cond, "loop guard")
            init = None
            if stmt.init is not None:
                inlined = self._process_stmt(stmt.init)
                if len(inlined) != 1:
                    raise SymexecError("call in for-initializer is not inlineable")
                init = inlined[0]
            if stmt.update is not None:
                for expr in _stmt_exprs(stmt.update):
                    self._reject_loop_calls(expr, "loop update")
            return [
                For(init, stmt.cond, stmt.update,
                    Block(self._process_block(stmt.body)),
                    annotation=stmt.annotation, line=stmt.line)
            ]
        if isinstance(stmt, Block):
            return [Block(self._process_block(stmt))]
        raise SymexecError(f"cannot inline statement {stmt!r}")

    def _reject_loop_calls(self, expr: Expr, where: str):
        if _contains_call(expr):
            raise SymexecError(f"method call in {where} is not inlineable")

    def _rewrite(self, expr: Expr, pre: list[Stmt]) -> Expr:
        if isinstance(expr, Call):
            args = [self._rewrite(a, pre) for a in expr.args]
            return self._inline_call(expr.name, args, pre)
        if isinstance(expr, Unary):
            return Unary(expr.op, self._rewrite(expr.operand, pre))
        if isinstance(expr, Binary):
            left = self._rewrite(expr.left, pre)
            right = self._rewrite(expr.right, pre)
            return Binary(expr.op, left, right)
        return expr

    def _inline_call(self, name: str, args: list[Expr], pre: list[Stmt]) -> Expr:
        callee = self.program.method(name)
        body = self.flat_body(name)
        if _has_return_in_loop(body):
            raise SymexecError(
                f"cannot inline {name!r}: return statement inside a loop"
            )
        k = next(self.counter)
        ret = f"{name}${k}"
        rename = {p: f"{p}${k}" for p in callee.param_names}
        pre.append(VarDecl(ret, None))
        for pname, arg in zip(callee.param_names, args):
            pre.append(VarDecl(rename[pname], arg))
        pre.append(Block(_instantiate_block(body, rename, k, ret)))
        return Var(ret)


def _contains_call(expr: Expr) -> bool:
    if isinstance(expr, Call):
        return True
    if isinstance(expr, Unary):
        return _contains_call(expr.operand)
    if isinstance(expr, Binary):
        return _contains_call(expr.left) or _contains_call(expr.right)
    return False


def _stmt_exprs(stmt: Stmt) -> list[Expr]:
    if isinstance(stmt, VarDecl):
        return [stmt.init] if stmt.init is not None else []
    if isinstance(stmt, Assign):
        return [stmt.value]
    return []


def _rename_expr(expr: Expr, rename: dict[str, str]) -> Expr:
    if isinstance(expr, Var):
        return Var(rename.get(expr.name, expr.name))
    if isinstance(expr, Unary):
        return Unary(expr.op, _rename_expr(expr.operand, rename))
    if isinstance(expr, Binary):
        return Binary(expr.op, _rename_expr(expr.left, rename), _rename_expr(expr.right, rename))
    if isinstance(expr, Call):
        return Call(expr.name, tuple(_rename_expr(a, rename) for a in expr.args))
    return expr


def _instantiate_block(block: Block, rename: dict[str, str], k: int, ret: str) -> list[Stmt]:
    """Rename locals with a fresh suffix and turn returns into assignments.

    Sound because parsing guarantees no statement follows a return on any
    path, so a return is always the last statement of its path.
    """
    out: list[Stmt] = []
    for stmt in block.stmts:
        out.append(_instantiate_stmt(stmt, rename, k, ret))
    return out


def _instantiate_stmt(stmt: Stmt, rename: dict[str, str], k: int, ret: str) -> Stmt:
    if isinstance(stmt, VarDecl):
        fresh = f"{stmt.name}${k}"
        rename[stmt.name] = fresh
        init = _rename_expr(stmt.init, rename) if stmt.init is not None else None
        return VarDecl(fresh, init, line=stmt.line)
    if isinstance(stmt, Assign):
        value = _rename_expr(stmt.value, rename)
        return Assign(rename.get(stmt.name, stmt.name), value, line=stmt.line)
    if isinstance(stmt, Return):
        return Assign(ret, _rename_expr(stmt.value, rename), line=stmt.line)
    if isinstance(stmt, If):
        cond = _rename_expr(stmt.cond, rename)
        then = Block(_instantiate_block(stmt.then, dict(rename), k, ret))
        orelse = (
            Block(_instantiate_block(stmt.orelse, dict(rename), k, ret))
            if stmt.orelse
            else None
        )
        return If(cond, then, orelse, line=stmt.line)
    if isinstance(stmt, While):
        ann = replace(
            stmt.annotation,
            invariant=_rename_expr(stmt.annotation.invariant, rename)
            if stmt.annotation.invariant
            else None,
            variant=_rename_expr(stmt.annotation.variant, rename)
            if stmt.annotation.variant
            else None,
        )
        return While(
            _rename_expr(stmt.cond, rename),
            Block(_instantiate_block(stmt.body, dict(rename), k, ret)),
            annotation=ann,
            line=stmt.line,
        )
    if isinstance(stmt, For):
        scoped = dict(rename)
        init = _instantiate_stmt(stmt.init, scoped, k, ret) if stmt.init else None
        ann = replace(
            stmt.annotation,
            invariant=_rename_expr(stmt.annotation.invariant, scoped)
            if stmt.annotation.invariant
            else None,
            variant=_rename_expr(stmt.annotation.variant, scoped)
            if stmt.annotation.variant
            else None,
        )
        update = _instantiate_stmt(stmt.update, scoped, k, ret) if stmt.update else None
        return For(
            init,
            _rename_expr(stmt.cond, scoped),
            update,
            Block(_instantiate_block(stmt.body, scoped, k, ret)),
            annotation=ann,
            line=stmt.line,
        )
    if isinstance(stmt, Block):
        return Block(_instantiate_block(stmt, dict(rename), k, ret))
    raise SymexecError(f"cannot instantiate {stmt!r}")


def inline_calls(program: Program, method: str) -> Block:
    """Semantically equivalent call-free body of a method.

    Callee bodies are substituted at each call site with fresh local
    names; the acyclic call graph guarantees termination.  Methods whose
    callees return from inside a loop are rejected.
    """
    return _Inliner(program).flat_body(method)


# ---------------------------------------------------------------------------
# The symbolic executor


@dataclass
class _LoopMarker(Stmt):
    """Internal continuation marker: re-test `loop` with `depth_left`
    further iterations allowed before the path is cut off."""

    loop: Stmt
    depth_left: int


class _Executor:
    def __init__(self, mdef: MethodDef, unroll_depth: int, use_invariants: bool, max_paths: int):
        self.mdef = mdef
        self.unroll_depth = unroll_depth
        self.use_invariants = use_invariants
        self.max_paths = max_paths
        self.paths: list[PathFormula] = []
        self.cutoff_used = False
        self.summarized = 0
        self._havoc_counter = itertools.count(1)

    def run(self, body: Block):
        env = {p: Var(p) for p in self.mdef.param_names}
        conds: list[Expr] = []
        if self.mdef.requires is not None:
            conds.extend(flatten_conjuncts(truthy(substitute(self.mdef.requires, env))))
        self._exec(list(body.stmts), 0, env, conds, frozenset())

    # Each state carries: remaining statement worklist, symbolic env,
    # path-condition conjuncts, havoc symbols introduced so far.  The
    # worklist and conds lists are owned by the current frame; forks pass
    # fresh copies.
    def _exec(self, stmts: list[Stmt], i: int, env, conds, havoc):
        while True:
            if i >= len(stmts):
                raise SymexecError(
                    f"path in {self.mdef.name!r} fell through without a return"
                )
            stmt = stmts[i]
            if isinstance(stmt, VarDecl):
                value = (
                    self._eval(stmt.init, env, conds) if stmt.init is not None else IntLit(0)
                )
                env[stmt.name] = value
                i += 1
            elif isinstance(stmt, Assign):
                env[stmt.name] = self._eval(stmt.value, env, conds)
                i += 1
            elif isinstance(stmt, Block):
                stmts = stmt.stmts + stmts[i + 1 :]
                i = 0
            elif isinstance(stmt, Return):
                value = self._eval(stmt.value, env, conds)
                self._emit(PathFormula(tuple(conds), value, havoc))
                return
            elif isinstance(stmt, If):
                cond = self._eval(stmt.cond, env, conds)
                rest = stmts[i + 1 :]
                if isinstance(cond, IntLit):
                    branch = stmt.then if cond.value else stmt.orelse
                    branch_stmts = branch.stmts if branch is not None else []
                    stmts, i = branch_stmts + rest, 0
                    continue
                neg = mk_unary("!", cond)
                parts = flatten_conjuncts(cond)
                # a condition already on the path (same shape, e.g. from an
                # earlier inlined copy) decides the branch without a fork
                if all(p in conds for p in parts):
                    stmts, i = stmt.then.stmts + rest, 0
                    continue
                if neg in conds:
                    else_stmts = stmt.orelse.stmts if stmt.orelse is not None else []
                    stmts, i = else_stmts + rest, 0
                    continue
                self._exec(stmt.then.stmts + rest, 0, dict(env), conds + parts, havoc)
                else_stmts = stmt.orelse.stmts if stmt.orelse is not None else []
                self._exec(
                    else_stmts + rest, 0, dict(env), conds + flatten_conjuncts(neg), havoc
                )
                return
            elif isinstance(stmt, (While, For)):
                if isinstance(stmt, For) and stmt.init is not None:
                    init = stmt.init
                    if isinstance(init, VarDecl):
                        env[init.name] = (
                            self._eval(init.init, env, conds)
                            if init.init is not None
                            else IntLit(0)
                        )
                    else:
                        env[init.name] = self._eval(init.value, env, conds)
                if self.use_invariants and stmt.annotation.invariant is not None:
                    self._summarize_loop(stmt, stmts[i + 1 :], env, conds, havoc)
                    return
                if self.unroll_depth <= 0:
                    raise SymexecError(
                        f"loop at line {stmt.line} in {self.mdef.name!r} has no "
                        f"usable invariant and unroll depth is 0"
                    )
                stmts = [_LoopMarker(stmt, self.unroll_depth)] + stmts[i + 1 :]
                i = 0
            elif isinstance(stmt, _LoopMarker):
                self._step_loop(stmt, stmts[i + 1 :], env, conds, havoc)
                return
            else:
                raise SymexecError(f"cannot execute {stmt!r} symbolically")

    def _eval(self, expr: Expr, env, conds: list[Expr]) -> Expr:
        value = substitute(expr, env)
        for side in div_side_conditions(value):
            if not isinstance(side, IntLit):
                conds.append(side)
        return value

    def _emit(self, path: PathFormula):
        self.paths.append(path)
        if len(self.paths) > self.max_paths:
            raise SymexecError(
                f"path explosion in {self.mdef.name!r}: more than {self.max_paths} paths"
            )

    def _summarize_loop(self, loop, rest, env, conds, havoc):
        """Replace the loop by a havoc of its assigned variables plus the
        assumption invariant && !guard; execution continues after the loop."""
        self.summarized += 1
        assigned = _assigned_vars(loop)
        n = next(self._havoc_counter)
        fresh = {
            var: f"{var.split('$')[0]}{HAVOC_SEP}{n}.{j}"
            for j, var in enumerate(sorted(assigned))
        }
        env = dict(env)
        for var, sym in fresh.items():
            env[var] = Var(sym)
        new_havoc = havoc | frozenset(fresh.values())
        conds = list(conds)
        conds.extend(flatten_conjuncts(truthy(self._eval(loop.annotation.invariant, env, conds))))
        guard = self._eval(loop.cond, env, conds)
        conds.extend(flatten_conjuncts(mk_unary("!", guard)))
        self._exec(rest, 0, env, conds, new_havoc)

    def _step_loop(self, marker: _LoopMarker, rest, env, conds, havoc):
        """One guard test of an unrolled loop.

        Exits continue after the loop; entering with no depth left emits a
        cutoff path whose output is HAVOC (over-approximation: every real
        execution needing more iterations satisfies its condition).
        """
        loop = marker.loop
        guard = self._eval(loop.cond, env, conds)
        guard_parts = flatten_conjuncts(guard)
        exit_known = (isinstance(guard, IntLit) and not guard.value) or (
            mk_unary("!", guard) in conds
        )
        enter_known = (isinstance(guard, IntLit) and bool(guard.value)) or (
            guard_parts and all(p in conds for p in guard_parts)
        )

        if not enter_known:
            exit_conds = (
                conds if exit_known else conds + flatten_conjuncts(mk_unary("!", guard))
            )
            self._exec(rest, 0, dict(env), list(exit_conds), havoc)
            if exit_known:
                return
        enter_conds = conds if enter_known else conds + guard_parts
        if marker.depth_left <= 0:
            self.cutoff_used = True
            self._emit(PathFormula(tuple(enter_conds), None, havoc, cutoff=True))
            return
        body = list(loop.body.stmts)
        if isinstance(loop, For) and loop.update is not None:
            body.append(loop.update)
        body.append(_LoopMarker(loop, marker.depth_left - 1))
        self._exec(body + rest, 0, dict(env), list(enter_conds), havoc)


def _assigned_vars(loop) -> set[str]:
    """Variables assigned (or declared) inside a loop, including its update."""
    out: set[str] = set()

    def walk(stmt: Stmt):
        if isinstance(stmt, (Assign, VarDecl)):
            out.add(stmt.name)
        elif isinstance(stmt, If):
            walk(stmt.then)
            if stmt.orelse:
                walk(stmt.orelse)
        elif isinstance(stmt, While):
            walk(stmt.body)
        elif isinstance(stmt, For):
            if stmt.init:
                walk(stmt.init)
            if stmt.update:
                walk(stmt.update)
            walk(stmt.body)
        elif isinstance(stmt, Block):
            for s in stmt.stmts:
                walk(s)

    walk(loop.body)
    if isinstance(loop, For) and loop.update is not None:
        walk(loop.update)
    return out


def symexec_method(
    program: Program,
    method: str,
    unroll_depth: int = 0,
    use_invariants: bool = True,
    max_paths: int = MAX_PATHS,
) -> Characterization:
    """Extract the path characterization of a method.

    Loops with an invariant are summarized when `use_invariants` is set;
    remaining loops are unrolled `unroll_depth` times.  A loop with
    neither option available is a configuration error.
    """
    mdef = program.method(method)
    body = inline_calls(program, method)
    executor = _Executor(mdef, unroll_depth, use_invariants, max_paths)
    executor.run(body)
    char = Characterization(
        method=method,
        input_symbols=tuple(mdef.param_names),
        paths=executor.paths,
        exact=False,
        unroll_depth=unroll_depth,
        used_invariants=use_invariants,
        summarized_loops=executor.summarized,
    )
    # exact unless a cutoff occurred or a loop summary leaks havoc symbols
    # into an output (then only an SMT determinism proof can lift the flag)
    char.exact = not executor.cutoff_used and not char.havoc_in_output()
    return char


# ---------------------------------------------------------------------------
# Validation against the concrete interpreter

@dataclass
class ValidationReport:
    """Outcome of sampling-based characterization checks.

    disjointness entries: (inputs, indices of simultaneously holding paths)
    exhaustiveness entries: (inputs,) with no holding path
    agreement entries: (inputs, path index, produced value, expected value)
    undecided entries: (inputs, path index) where havoc solving gave up
    """

    samples: int = 0
    disjointness: list = field(default_factory=list)
    exhaustiveness: list = field(default_factory=list)
    agreement: list = field(default_factory=list)
    undecided: list = field(default_factory=list)
    havoc_hits: int = 0
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return not (
            self.disjointness or self.exhaustiveness or self.agreement or self.undecided
        )

    def summary(self) -> str:
        return (
            f"samples={self.samples} disjointness={len(self.disjointness)} "
            f"exhaustiveness={len(self.exhaustiveness)} agreement={len(self.agreement)} "
            f"undecided={len(self.undecided)} havoc_hits={self.havoc_hits}"
        )


def paths_holding_at(
    char: Characterization, inputs: tuple[int, ...]
) -> list[tuple[int, PathFormula, Optional[list[dict[str, int]]]]]:
    """Paths whose condition admits the concrete inputs.

    Returns (index, path, havoc assignments) triples; the assignment list
    is None for havoc-free paths.  Raises HavocUndecided when a residual
    constraint system cannot be enumerated.
    """
    binding = {s: IntLit(v) for s, v in zip(char.input_symbols, inputs)}
    out = []
    for idx, path in enumerate(char.paths):
        residual = [substitute(c, binding) for c in path.condition]
        if not path.havoc_syms:
            if all(isinstance(c, IntLit) and c.value for c in residual):
                out.append((idx, path, None))
            continue
        solutions = havoc_solutions(residual, path.havoc_syms)
        if solutions:
            out.append((idx, path, solutions))
    return out


def validate_characterization(
    char: Characterization,
    program: Program,
    samples: int = 1000,
    seed: int = 0,
    box: Optional[list[Interval]] = None,
) -> ValidationReport:
    """Check disjointness, exhaustiveness, and agreement by sampling.

    Inputs are drawn uniformly from the declared domains, or from `box`
    when the domains are unbounded.  Agreement on a havoc path requires
    every satisfying havoc assignment to reproduce the concrete result;
    cutoff (HAVOC-output) paths agree with anything and are only counted.
    """
    mdef = program.method(char.method)
    domains = box if box is not None else input_domain(mdef)
    for d in domains:
        if not d.bounded:
            raise SymexecError(
                f"validation of {char.method!r} needs finite domains or an explicit box"
            )
    rng = random.Random(seed)
    report = ValidationReport()
    binding_syms = char.input_symbols
    for _ in range(samples):
        inputs = tuple(rng.randint(d.lo, d.hi) for d in domains)
        try:
            expected = eval_method(program, char.method, inputs)
        except EvalError:
            report.skipped += 1
            continue
        report.samples += 1
        try:
            holding = paths_holding_at(char, inputs)
        except HavocUndecided:
            report.undecided.append((inputs, None))
            continue
        if len(holding) > 1:
            report.disjointness.append((inputs, [idx for idx, _, _ in holding]))
        if not holding:
            report.exhaustiveness.append((inputs,))
            continue
        binding = {s: IntLit(v) for s, v in zip(binding_syms, inputs)}
        for idx, path, solutions in holding:
            if path.is_havoc:
                report.havoc_hits += 1
                continue
            if solutions is None:
                produced = substitute(path.output, binding)
                if not isinstance(produced, IntLit):
                    report.agreement.append((inputs, idx, str(produced), expected))
                elif produced.value != expected:
                    report.agreement.append((inputs, idx, produced.value, expected))
                continue
            for assignment in solutions:
                full = dict(binding)
                full.update({s: IntLit(v) for s, v in assignment.items()})
                produced = substitute(path.output, full)
                if not isinstance(produced, IntLit):
                    report.agreement.append((inputs, idx, str(produced), expected))
                elif produced.value != expected:
                    report.agreement.append((inputs, idx, produced.value, expected))
    return report
