"""Exception hierarchy shared by all hypermon modules."""


class HypermonError(Exception):
    """Base class for all errors raised by this package."""


class TraceFormatError(HypermonError):
    """A CSV trace line is malformed (wrong arity or non-integer field)."""

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class MiniLangError(HypermonError):
    """Base class for program-related errors."""


class ParseError(MiniLangError):
    """Lexical or syntactic error, with source position."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            pos = f"{line}" if col is None else f"{line}:{col}"
            message = f"{pos}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class StaticError(MiniLangError):
    """Semantic error found without running the program (unresolved name,
    recursion, missing return, out-of-scope annotation variable, ...)."""


class EvalError(MiniLangError):
    """Runtime error during concrete evaluation (division by zero, ...)."""


class PreconditionError(EvalError):
    """Arguments violate the method's requires clause."""


class DivergenceError(EvalError):
    """Concrete evaluation exceeded its fuel bound."""


class DomainError(HypermonError):
    """A parameter domain is unbounded, not interval-shaped, or too large
    for the requested exhaustive operation."""


class SymexecError(HypermonError):
    """Symbolic execution could not produce a characterization
    (missing unroll/invariant configuration, path explosion)."""


class SolverError(HypermonError):
    """The external SMT solver failed to launch or spoke garbage.

    Distinct from an `unknown` answer, which is a normal result.
    """
