"""AST for the annotated integer mini-language.

Expression nodes are frozen and hashable; they double as the symbolic
expression representation used by the symbolic executor, where variable
names refer to input or havoc symbols instead of program variables.
Integers are unbounded mathematical integers; the surface type `int`
carries no wraparound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


# ---------------------------------------------------------------------------
# Expressions

class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class IntLit(Expr):
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Var(Expr):
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # '-' or '!'
    operand: Expr

    def __str__(self):
        return f"{self.op}({self.operand})"


ARITH_OPS = ("+", "-", "*", "/", "%")
CMP_OPS = ("<", "<=", ">", ">=", "==", "!=")
BOOL_OPS = ("&&", "||")


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class Call(Expr):
    name: str
    args: tuple[Expr, ...]

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


RESULT_VAR = "\\result"  # only legal inside ensures clauses


def free_vars(expr: Expr) -> frozenset[str]:
    """Names of all variables occurring in the expression."""
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    if isinstance(expr, IntLit):
        return frozenset()
    if isinstance(expr, Unary):
        return free_vars(expr.operand)
    if isinstance(expr, Binary):
        return free_vars(expr.left) | free_vars(expr.right)
    if isinstance(expr, Call):
        out: frozenset[str] = frozenset()
        for a in expr.args:
            out |= free_vars(a)
        return out
    raise TypeError(f"not an expression: {expr!r}")


def contains_call(expr: Expr) -> bool:
    if isinstance(expr, Call):
        return True
    if isinstance(expr, Unary):
        return contains_call(expr.operand)
    if isinstance(expr, Binary):
        return contains_call(expr.left) or contains_call(expr.right)
    return False


# ---------------------------------------------------------------------------
# Statements

class Stmt:
    __slots__ = ()


@dataclass
class VarDecl(Stmt):
    name: str
    init: Optional[Expr]
    line: int = 0


@dataclass
class Assign(Stmt):
    name: str
    value: Expr
    line: int = 0


@dataclass
class If(Stmt):
    cond: Expr
    then: "Block"
    orelse: Optional["Block"]
    line: int = 0


@dataclass
class LoopAnnotation:
    """JML-style loop annotations attached to the following loop."""

    invariant: Optional[Expr] = None
    variant: Optional[Expr] = None


@dataclass
class While(Stmt):
    cond: Expr
    body: "Block"
    annotation: LoopAnnotation = field(default_factory=LoopAnnotation)
    line: int = 0


@dataclass
class For(Stmt):
    """C-style for loop; init/update are restricted to decl/assignment."""

    init: Optional[Stmt]
    cond: Expr
    update: Optional[Stmt]
    body: "Block"
    annotation: LoopAnnotation = field(default_factory=LoopAnnotation)
    line: int = 0


@dataclass
class Return(Stmt):
    value: Expr
    line: int = 0


@dataclass
class Block(Stmt):
    stmts: list[Stmt]


Loop = Union[While, For]


# ---------------------------------------------------------------------------
# Methods and programs

@dataclass
class Param:
    """Method parameter with an optional declared inclusive range."""

    name: str
    lo: Optional[int] = None
    hi: Optional[int] = None

    @property
    def has_range(self) -> bool:
        return self.lo is not None or self.hi is not None


@dataclass(eq=False)
class MethodDef:
    name: str
    params: list[Param]
    body: Block
    requires: Optional[Expr] = None
    ensures: Optional[Expr] = None
    line: int = 0

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def param_names(self) -> list[str]:
        return [p.name for p in self.params]


@dataclass(eq=False)
class Program:
    """A parsed class: a named collection of methods.

    The call graph is acyclic (recursion is rejected at parse time) and
    every call resolves to a method of the same program.  Parsed programs
    are immutable after construction and safe to share across threads.
    """

    class_name: str
    methods: dict[str, MethodDef]
    entry: Optional[str] = None

    def method(self, name: str) -> MethodDef:
        if name not in self.methods:
            raise KeyError(f"no method {name!r} in class {self.class_name}")
        return self.methods[name]
