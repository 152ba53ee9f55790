"""Parser and static checks for the annotated integer mini-language.

Surface syntax is a small Java-like subset: one class per file, integer
methods, local variables, if/else, while and for loops, compound
assignment and ++/--.  Specification annotations ride in `//@` comment
lines:

    //@ requires <expr>;
    //@ ensures <expr>;            (may mention \\result)
    //@ maintaining <expr>;        (loop invariant, before a loop)
    //@ decreasing <expr>;         (loop variant, before a loop)
    //@ domain x in [lo, hi], ...; (declared parameter ranges; extension)

`requires`/`ensures`/`domain` annotations precede a method declaration;
`maintaining`/`decreasing` precede a loop statement.  Plain `//` comments
are ignored.  Compound assignments and ++/-- are desugared at parse time,
so downstream passes only see plain assignments.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError, StaticError
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

KEYWORDS = {"class", "int", "if", "else", "while", "for", "return", "true", "false"}

_TWO_CHAR = {
    "++", "--", "+=", "-=", "*=", "/=", "%=",
    "<=", ">=", "==", "!=", "&&", "||",
}
_ONE_CHAR = set("{}(),;=+-*/%<>![]")

_AUG_OPS = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "%=": "%"}


@dataclass
class Token:
    kind: str  # 'ident', 'int', 'punct', 'annot', 'eof'
    value: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw
        # capture //@ annotations before stripping comments; they trail any
        # code on the same line, so emit them after the code tokens
        annot: Token | None = None
        idx = line.find("//")
        if idx >= 0:
            comment = line[idx + 2 :]
            line = line[:idx]
            if comment.startswith("@"):
                annot = Token("annot", comment[1:].strip(), lineno, idx + 1)
        col = 0
        n = len(line)
        while col < n:
            c = line[col]
            if c.isspace():
                col += 1
                continue
            two = line[col : col + 2]
            if two in _TWO_CHAR:
                tokens.append(Token("punct", two, lineno, col + 1))
                col += 2
                continue
            if c.isdigit():
                start = col
                while col < n and line[col].isdigit():
                    col += 1
                tokens.append(Token("int", line[start:col], lineno, start + 1))
                continue
            if c.isalpha() or c == "_":
                start = col
                while col < n and (line[col].isalnum() or line[col] == "_"):
                    col += 1
                tokens.append(Token("ident", line[start:col], lineno, start + 1))
                continue
            if c == "\\" and line[col + 1 : col + 7] == "result":
                tokens.append(Token("ident", RESULT_VAR, lineno, col + 1))
                col += 7
                continue
            if c in _ONE_CHAR:
                tokens.append(Token("punct", c, lineno, col + 1))
                col += 1
                continue
            raise ParseError(f"unexpected character {c!r}", lineno, col + 1)
        if annot is not None:
            tokens.append(annot)
    tokens.append(Token("eof", "", len(source.splitlines()) + 1, 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def check(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (value is None or tok.value == value)

    def accept(self, kind: str, value: str | None = None) -> Token | None:
        if self.check(kind, value):
            return self.advance()
        return None

    def expect(self, kind: str, value: str | None = None) -> Token:
        tok = self.peek()
        if not self.check(kind, value):
            want = value if value is not None else kind
            raise ParseError(
                f"expected {want!r}, got {tok.value!r}", tok.line, tok.col
            )
        return self.advance()

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col)

    # -- program structure -------------------------------------------------

    def parse_program(self) -> Program:
        self.expect("ident", "class")
        name_tok = self.expect("ident")
        if name_tok.value in KEYWORDS:
            raise ParseError("keyword cannot name a class", name_tok.line, name_tok.col)
        self.expect("punct", "{")
        methods: dict[str, MethodDef] = {}
        while not self.check("punct", "}"):
            method = self.parse_method()
            if method.name in methods:
                raise StaticError(f"duplicate method {method.name!r}")
            methods[method.name] = method
        self.expect("punct", "}")
        self.expect("eof")
        return Program(class_name=name_tok.value, methods=methods)

    def collect_annotations(self) -> list[Token]:
        out = []
        while self.check("annot"):
            out.append(self.advance())
        return out

    def parse_method(self) -> MethodDef:
        annots = self.collect_annotations()
        self.expect("ident", "int")
        name_tok = self.expect("ident")
        if name_tok.value in KEYWORDS:
            raise ParseError("keyword cannot name a method", name_tok.line, name_tok.col)
        self.expect("punct", "(")
        params: list[Param] = []
        if not self.check("punct", ")"):
            while True:
                self.expect("ident", "int")
                p = self.expect("ident")
                if p.value in KEYWORDS:
                    raise ParseError("keyword cannot name a parameter", p.line, p.col)
                if any(q.name == p.value for q in params):
                    raise ParseError(f"duplicate parameter {p.value!r}", p.line, p.col)
                params.append(Param(p.value))
                if not self.accept("punct", ","):
                    break
        self.expect("punct", ")")
        body = self.parse_block()
        method = MethodDef(
            name=name_tok.value, params=params, body=body, line=name_tok.line
        )
        self.attach_method_annotations(method, annots)
        return method

    def attach_method_annotations(self, method: MethodDef, annots: list[Token]):
        for tok in annots:
            keyword, rest = _split_annotation(tok)
            sub = _Parser(tokenize(rest) if rest else [Token("eof", "", tok.line, 1)])
            if keyword == "requires":
                clause = sub.parse_clause(tok)
                method.requires = (
                    clause if method.requires is None
                    else Binary("&&", method.requires, clause)
                )
            elif keyword == "ensures":
                clause = sub.parse_clause(tok)
                method.ensures = (
                    clause if method.ensures is None
                    else Binary("&&", method.ensures, clause)
                )
            elif keyword == "domain":
                sub.parse_domain_clause(method, tok)
            elif keyword in ("maintaining", "decreasing"):
                raise ParseError(
                    f"{keyword!r} annotation must precede a loop", tok.line, 1
                )
            else:
                raise ParseError(f"unknown annotation {keyword!r}", tok.line, 1)

    def parse_clause(self, origin: Token) -> Expr:
        expr = self.parse_expr()
        self.accept("punct", ";")
        if not self.check("eof"):
            raise ParseError("trailing tokens in annotation", origin.line, 1)
        return expr

    def parse_domain_clause(self, method: MethodDef, origin: Token):
        # domain x in [lo, hi], y in [lo, hi];
        while True:
            name = self.expect("ident")
            self.expect("ident", "in")
            self.expect("punct", "[")
            lo = self.parse_signed_int()
            self.expect("punct", ",")
            hi = self.parse_signed_int()
            self.expect("punct", "]")
            param = next((p for p in method.params if p.name == name.value), None)
            if param is None:
                raise StaticError(
                    f"domain annotation names unknown parameter {name.value!r}"
                )
            if lo > hi:
                raise StaticError(
                    f"empty declared range [{lo}, {hi}] for {name.value!r}"
                )
            param.lo, param.hi = lo, hi
            if not self.accept("punct", ","):
                break
        self.accept("punct", ";")
        if not self.check("eof"):
            raise ParseError("trailing tokens in domain annotation", origin.line, 1)

    def parse_signed_int(self) -> int:
        neg = self.accept("punct", "-") is not None
        tok = self.expect("int")
        value = int(tok.value)
        return -value if neg else value

    # -- statements ---------------------------------------------------------

    def parse_block(self) -> Block:
        self.expect("punct", "{")
        stmts: list[Stmt] = []
        while not self.check("punct", "}"):
            stmts.append(self.parse_stmt())
        self.expect("punct", "}")
        return Block(stmts)

    def parse_block_or_stmt(self) -> Block:
        if self.check("punct", "{"):
            return self.parse_block()
        return Block([self.parse_stmt()])

    def parse_stmt(self) -> Stmt:
        annots = self.collect_annotations()
        tok = self.peek()
        if annots and not (self.check("ident", "while") or self.check("ident", "for")):
            raise ParseError("loop annotation must precede a loop", tok.line, tok.col)

        if self.check("punct", "{"):
            return self.parse_block()
        if self.check("ident", "if"):
            return self.parse_if()
        if self.check("ident", "while"):
            return self.parse_while(self.loop_annotation(annots))
        if self.check("ident", "for"):
            return self.parse_for(self.loop_annotation(annots))
        if self.check("ident", "return"):
            line = self.advance().line
            value = self.parse_expr()
            self.expect("punct", ";")
            return Return(value, line=line)
        stmt = self.parse_simple_stmt()
        self.expect("punct", ";")
        return stmt

    def loop_annotation(self, annots: list[Token]) -> LoopAnnotation:
        ann = LoopAnnotation()
        for tok in annots:
            keyword, rest = _split_annotation(tok)
            sub = _Parser(tokenize(rest))
            if keyword == "maintaining":
                clause = sub.parse_clause(tok)
                ann.invariant = (
                    clause if ann.invariant is None
                    else Binary("&&", ann.invariant, clause)
                )
            elif keyword == "decreasing":
                ann.variant = sub.parse_clause(tok)
            else:
                raise ParseError(
                    f"annotation {keyword!r} cannot precede a loop", tok.line, 1
                )
        return ann

    def parse_if(self) -> If:
        line = self.expect("ident", "if").line
        self.expect("punct", "(")
        cond = self.parse_expr()
        self.expect("punct", ")")
        then = self.parse_block_or_stmt()
        orelse = None
        if self.accept("ident", "else"):
            orelse = self.parse_block_or_stmt()
        return If(cond, then, orelse, line=line)

    def parse_while(self, ann: LoopAnnotation) -> While:
        line = self.expect("ident", "while").line
        self.expect("punct", "(")
        cond = self.parse_expr()
        self.expect("punct", ")")
        body = self.parse_block_or_stmt()
        return While(cond, body, annotation=ann, line=line)

    def parse_for(self, ann: LoopAnnotation) -> For:
        line = self.expect("ident", "for").line
        self.expect("punct", "(")
        init = None if self.check("punct", ";") else self.parse_simple_stmt()
        self.expect("punct", ";")
        cond = self.parse_expr()
        self.expect("punct", ";")
        update = None if self.check("punct", ")") else self.parse_simple_stmt()
        self.expect("punct", ")")
        body = self.parse_block_or_stmt()
        return For(init, cond, update, body, annotation=ann, line=line)

    def parse_simple_stmt(self) -> Stmt:
        """Declaration, assignment, compound assignment, or ++/--."""
        tok = self.peek()
        if self.check("ident", "int"):
            self.advance()
            name = self.expect("ident")
            if name.value in KEYWORDS:
                raise ParseError("keyword cannot name a variable", name.line, name.col)
            init = None
            if self.accept("punct", "="):
                init = self.parse_expr()
            return VarDecl(name.value, init, line=name.line)
        if self.check("punct", "++") or self.check("punct", "--"):
            op = self.advance().value[0]
            name = self.expect("ident")
            return Assign(
                name.value, Binary(op, Var(name.value), IntLit(1)), line=name.line
            )
        if tok.kind == "ident" and tok.value not in KEYWORDS:
            name = self.advance()
            nxt = self.peek()
            if self.accept("punct", "="):
                return Assign(name.value, self.parse_expr(), line=name.line)
            if nxt.kind == "punct" and nxt.value in _AUG_OPS:
                self.advance()
                op = _AUG_OPS[nxt.value]
                return Assign(
                    name.value,
                    Binary(op, Var(name.value), self.parse_expr()),
                    line=name.line,
                )
            if self.accept("punct", "++") or nxt.value == "--" and self.accept("punct", "--"):
                op = nxt.value[0]
                return Assign(
                    name.value, Binary(op, Var(name.value), IntLit(1)), line=name.line
                )
            self.fail(f"expected assignment after {name.value!r}")
        self.fail(f"expected statement, got {tok.value!r}")

    # -- expressions ----------------------------------------------------------

    def parse_expr(self) -> Expr:
        return self.parse_or()

    def parse_or(self) -> Expr:
        expr = self.parse_and()
        while self.accept("punct", "||"):
            expr = Binary("||", expr, self.parse_and())
        return expr

    def parse_and(self) -> Expr:
        expr = self.parse_cmp()
        while self.accept("punct", "&&"):
            expr = Binary("&&", expr, self.parse_cmp())
        return expr

    def parse_cmp(self) -> Expr:
        expr = self.parse_add()
        tok = self.peek()
        if tok.kind == "punct" and tok.value in ("<", "<=", ">", ">=", "==", "!="):
            self.advance()
            expr = Binary(tok.value, expr, self.parse_add())
        return expr

    def parse_add(self) -> Expr:
        expr = self.parse_mul()
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.value in ("+", "-"):
                self.advance()
                expr = Binary(tok.value, expr, self.parse_mul())
            else:
                return expr

    def parse_mul(self) -> Expr:
        expr = self.parse_unary()
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.value in ("*", "/", "%"):
                self.advance()
                expr = Binary(tok.value, expr, self.parse_unary())
            else:
                return expr

    def parse_unary(self) -> Expr:
        if self.accept("punct", "-"):
            return Unary("-", self.parse_unary())
        if self.accept("punct", "!"):
            return Unary("!", self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.value))
        if self.accept("punct", "("):
            expr = self.parse_expr()
            self.expect("punct", ")")
            return expr
        if tok.kind == "ident":
            if tok.value == "true":
                self.advance()
                return IntLit(1)
            if tok.value == "false":
                self.advance()
                return IntLit(0)
            if tok.value in KEYWORDS:
                self.fail(f"unexpected keyword {tok.value!r} in expression")
            self.advance()
            if self.accept("punct", "("):
                args = []
                if not self.check("punct", ")"):
                    while True:
                        args.append(self.parse_expr())
                        if not self.accept("punct", ","):
                            break
                self.expect("punct", ")")
                return Call(tok.value, tuple(args))
            return Var(tok.value)
        self.fail(f"expected expression, got {tok.value!r}")


def _split_annotation(tok: Token) -> tuple[str, str]:
    body = tok.value.strip()
    parts = body.split(None, 1)
    if not parts:
        raise ParseError("empty annotation", tok.line, 1)
    keyword = parts[0]
    rest = parts[1] if len(parts) > 1 else ""
    return keyword, rest


# ---------------------------------------------------------------------------
# Static checks

def _check_expr(expr: Expr, scope: set[str], program: Program, where: str):
    for name in free_vars(expr):
        if name not in scope:
            raise StaticError(f"undeclared variable {name!r} in {where}")
    _check_calls(expr, program, where)


def _check_calls(expr: Expr, program: Program, where: str):
    if isinstance(expr, Call):
        if expr.name not in program.methods:
            raise StaticError(f"call to undefined method {expr.name!r} in {where}")
        callee = program.methods[expr.name]
        if len(expr.args) != callee.arity:
            raise StaticError(
                f"call to {expr.name!r} with {len(expr.args)} args in {where}, "
                f"expected {callee.arity}"
            )
        for a in expr.args:
            _check_calls(a, program, where)
    elif isinstance(expr, Unary):
        _check_calls(expr.operand, program, where)
    elif isinstance(expr, Binary):
        _check_calls(expr.left, program, where)
        _check_calls(expr.right, program, where)


def _check_block(block: Block, scope: set[str], program: Program, method: str) -> bool:
    """Scope-check a block. Returns True if it definitely returns.

    Statements after a definite return are unreachable and rejected, which
    keeps exactly one return on every execution path.
    """
    local = set(scope)
    returned = False
    for stmt in block.stmts:
        if returned:
            raise StaticError(f"unreachable statement after return in {method!r}")
        returned = _check_stmt(stmt, local, program, method)
    return returned


def _check_stmt(stmt: Stmt, scope: set[str], program: Program, method: str) -> bool:
    where = f"method {method!r}"
    if isinstance(stmt, VarDecl):
        if stmt.init is not None:
            _check_expr(stmt.init, scope, program, where)
        if stmt.name in scope:
            raise StaticError(f"redeclaration of {stmt.name!r} in {where}")
        scope.add(stmt.name)
        return False
    if isinstance(stmt, Assign):
        if stmt.name not in scope:
            raise StaticError(f"assignment to undeclared {stmt.name!r} in {where}")
        _check_expr(stmt.value, scope, program, where)
        return False
    if isinstance(stmt, If):
        _check_expr(stmt.cond, scope, program, where)
        then_ret = _check_block(stmt.then, scope, program, method)
        else_ret = (
            _check_block(stmt.orelse, scope, program, method)
            if stmt.orelse is not None
            else False
        )
        return then_ret and else_ret
    if isinstance(stmt, While):
        _check_expr(stmt.cond, scope, program, where)
        _check_annotation(stmt.annotation, scope, program, method)
        _check_block(stmt.body, scope, program, method)
        return False  # may run zero times
    if isinstance(stmt, For):
        loop_scope = set(scope)
        if stmt.init is not None:
            _check_stmt(stmt.init, loop_scope, program, method)
        _check_expr(stmt.cond, loop_scope, program, where)
        _check_annotation(stmt.annotation, loop_scope, program, method)
        body_scope = set(loop_scope)
        _check_block(stmt.body, body_scope, program, method)
        if stmt.update is not None:
            if isinstance(stmt.update, VarDecl):
                raise StaticError(f"declaration in for-update of {where}")
            _check_stmt(stmt.update, loop_scope, program, method)
        return False
    if isinstance(stmt, Return):
        _check_expr(stmt.value, scope, program, where)
        return True
    if isinstance(stmt, Block):
        return _check_block(stmt, scope, program, method)
    raise TypeError(f"unknown statement {stmt!r}")


def _check_annotation(ann: LoopAnnotation, scope: set[str], program: Program, method: str):
    # invariant/variant may reference only variables in scope at the loop head
    for label, expr in (("invariant", ann.invariant), ("variant", ann.variant)):
        if expr is None:
            continue
        for name in free_vars(expr):
            if name not in scope:
                raise StaticError(
                    f"loop {label} of {method!r} references out-of-scope {name!r}"
                )
        _check_calls(expr, program, f"loop {label} of {method!r}")


def _check_acyclic(program: Program):
    color: dict[str, int] = {}  # 0 visiting, 1 done

    def calls_of(expr: Expr, out: set[str]):
        if isinstance(expr, Call):
            out.add(expr.name)
            for a in expr.args:
                calls_of(a, out)
        elif isinstance(expr, Unary):
            calls_of(expr.operand, out)
        elif isinstance(expr, Binary):
            calls_of(expr.left, out)
            calls_of(expr.right, out)

    def stmt_calls(stmt: Stmt, out: set[str]):
        if isinstance(stmt, VarDecl) and stmt.init is not None:
            calls_of(stmt.init, out)
        elif isinstance(stmt, Assign):
            calls_of(stmt.value, out)
        elif isinstance(stmt, If):
            calls_of(stmt.cond, out)
            stmt_calls(stmt.then, out)
            if stmt.orelse:
                stmt_calls(stmt.orelse, out)
        elif isinstance(stmt, While):
            calls_of(stmt.cond, out)
            stmt_calls(stmt.body, out)
        elif isinstance(stmt, For):
            if stmt.init:
                stmt_calls(stmt.init, out)
            calls_of(stmt.cond, out)
            if stmt.update:
                stmt_calls(stmt.update, out)
            stmt_calls(stmt.body, out)
        elif isinstance(stmt, Return):
            calls_of(stmt.value, out)
        elif isinstance(stmt, Block):
            for s in stmt.stmts:
                stmt_calls(s, out)

    def visit(name: str, chain: list[str]):
        if color.get(name) == 1:
            return
        if color.get(name) == 0:
            cycle = " -> ".join(chain + [name])
            raise StaticError(f"recursive call detected: {cycle}")
        color[name] = 0
        callees: set[str] = set()
        stmt_calls(program.methods[name].body, callees)
        for callee in callees:
            visit(callee, chain + [name])
        color[name] = 1

    for name in program.methods:
        visit(name, [])


def method_callees(program: Program, name: str) -> set[str]:
    """Direct callees of a method (used by inlining and tests)."""
    out: set[str] = set()

    def walk_expr(expr: Expr):
        if isinstance(expr, Call):
            out.add(expr.name)
            for a in expr.args:
                walk_expr(a)
        elif isinstance(expr, Unary):
            walk_expr(expr.operand)
        elif isinstance(expr, Binary):
            walk_expr(expr.left)
            walk_expr(expr.right)

    def walk(stmt: Stmt):
        if isinstance(stmt, VarDecl) and stmt.init is not None:
            walk_expr(stmt.init)
        elif isinstance(stmt, Assign):
            walk_expr(stmt.value)
        elif isinstance(stmt, If):
            walk_expr(stmt.cond)
            walk(stmt.then)
            if stmt.orelse:
                walk(stmt.orelse)
        elif isinstance(stmt, While):
            walk_expr(stmt.cond)
            walk(stmt.body)
        elif isinstance(stmt, For):
            if stmt.init:
                walk(stmt.init)
            walk_expr(stmt.cond)
            if stmt.update:
                walk(stmt.update)
            walk(stmt.body)
        elif isinstance(stmt, Return):
            walk_expr(stmt.value)
        elif isinstance(stmt, Block):
            for s in stmt.stmts:
                walk(s)

    walk(program.methods[name].body)
    return out


def parse_program(source: str) -> Program:
    """Parse and statically check a program."""
    program = _Parser(tokenize(source)).parse_program()
    for method in program.methods.values():
        params = set(method.param_names)
        if method.requires is not None:
            _check_expr(
                method.requires, params, program, f"requires of {method.name!r}"
            )
        if method.ensures is not None:
            _check_expr(
                method.ensures,
                params | {RESULT_VAR},
                program,
                f"ensures of {method.name!r}",
            )
        if not _check_block(method.body, params, program, method.name):
            raise StaticError(f"method {method.name!r} may fall off without a return")
    _check_acyclic(program)
    return program
