"""Annotated integer mini-language: parser, static checks, interpreter."""

from .ast import (
    Assign,
    Binary,
    Block,
    Call,
    Expr,
    For,
    If,
    IntLit,
    LoopAnnotation,
    MethodDef,
    Param,
    Program,
    RESULT_VAR,
    Return,
    Stmt,
    Unary,
    Var,
    VarDecl,
    While,
    free_vars,
)
from .domains import (
    Interval,
    domain_product_size,
    input_domain,
    parse_domain_spec,
    requires_intervals,
)
from .interp import (
    DEFAULT_FUEL,
    Evaluator,
    ensures_holds,
    eval_expr,
    eval_method,
    evaluator_for,
    int_div,
    int_mod,
)
from .parser import method_callees, parse_program, tokenize

__all__ = [
    "Assign", "Binary", "Block", "Call", "Expr", "For", "If", "IntLit",
    "LoopAnnotation", "MethodDef", "Param", "Program", "RESULT_VAR",
    "Return", "Stmt", "Unary", "Var", "VarDecl", "While", "free_vars",
    "Interval", "domain_product_size", "input_domain", "parse_domain_spec",
    "requires_intervals",
    "DEFAULT_FUEL", "Evaluator", "ensures_holds", "eval_expr", "eval_method",
    "evaluator_for", "int_div", "int_mod",
    "method_callees", "parse_program", "tokenize",
]
