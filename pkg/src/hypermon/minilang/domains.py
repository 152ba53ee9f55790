"""Per-parameter input domains: declared ranges and requires-clause intervals.

Exhaustive backends (graph enumeration, brute-force oracle queries) need a
finite inclusive range per parameter.  Ranges come from `//@ domain`
annotations, from a requires clause that is a conjunction of per-parameter
interval constraints, or from explicit caller-side configuration; the
sources are intersected when they overlap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..errors import DomainError
from .ast import Binary, Expr, IntLit, MethodDef, Unary, Var


@dataclass(frozen=True)
class Interval:
    """Inclusive integer interval; a None endpoint means unbounded."""

    lo: Optional[int] = None
    hi: Optional[int] = None

    @property
    def bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    @property
    def size(self) -> int:
        if not self.bounded:
            raise DomainError(f"interval {self} is unbounded")
        return self.hi - self.lo + 1

    def values(self) -> range:
        if not self.bounded:
            raise DomainError(f"interval {self} is unbounded")
        return range(self.lo, self.hi + 1)

    def contains(self, v: int) -> bool:
        return (self.lo is None or v >= self.lo) and (self.hi is None or v <= self.hi)

    def intersect(self, other: "Interval") -> "Interval":
        lo = self.lo if other.lo is None else (other.lo if self.lo is None else max(self.lo, other.lo))
        hi = self.hi if other.hi is None else (other.hi if self.hi is None else min(self.hi, other.hi))
        return Interval(lo, hi)

    def __str__(self):
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"[{lo}, {hi}]"


def _const_value(expr: Expr) -> Optional[int]:
    if isinstance(expr, IntLit):
        return expr.value
    if isinstance(expr, Unary) and expr.op == "-":
        inner = _const_value(expr.operand)
        return None if inner is None else -inner
    return None


def _atom_interval(expr: Expr) -> Optional[tuple[str, Interval]]:
    """Decompose `x <op> c` or `c <op> x` into a per-variable interval."""
    if not isinstance(expr, Binary) or expr.op not in ("<", "<=", ">", ">=", "=="):
        return None
    left, right, op = expr.left, expr.right, expr.op
    if isinstance(right, Var) and _const_value(left) is not None:
        # mirror to keep the variable on the left
        left, right = right, left
        op = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "=="}[op]
    if not isinstance(left, Var):
        return None
    c = _const_value(right)
    if c is None:
        return None
    if op == "<":
        return left.name, Interval(None, c - 1)
    if op == "<=":
        return left.name, Interval(None, c)
    if op == ">":
        return left.name, Interval(c + 1, None)
    if op == ">=":
        return left.name, Interval(c, None)
    return left.name, Interval(c, c)


def _conjuncts(expr: Expr) -> list[Expr]:
    if isinstance(expr, Binary) and expr.op == "&&":
        return _conjuncts(expr.left) + _conjuncts(expr.right)
    return [expr]


def requires_intervals(method: MethodDef) -> dict[str, Interval]:
    """Intervals implied by the requires clause.

    Raises DomainError when the clause is not a conjunction of interval
    constraints over single parameters (the symbolic backend remains
    usable in that case; only exhaustive backends need intervals).
    """
    if method.requires is None:
        return {}
    out: dict[str, Interval] = {}
    for atom in _conjuncts(method.requires):
        decomposed = _atom_interval(atom)
        if decomposed is None:
            raise DomainError(
                f"requires clause of {method.name!r} is not interval-decomposable: "
                f"{atom}"
            )
        name, interval = decomposed
        out[name] = out[name].intersect(interval) if name in out else interval
    return out


def input_domain(
    method: MethodDef, overrides: Optional[dict[str, Interval]] = None
) -> list[Interval]:
    """One interval per parameter, in declaration order.

    Unbounded positions are returned as unbounded intervals; callers that
    need finite domains must check `Interval.bounded` and refuse.
    Declared ranges, requires-clause intervals, and overrides intersect.
    A requires clause that is not interval-decomposable is an error only
    when some parameter has no declared range to fall back on (exhaustive
    backends re-check the clause per evaluation anyway).
    """
    try:
        from_requires = requires_intervals(method)
    except DomainError:
        if all(p.has_range for p in method.params):
            from_requires = {}
        else:
            raise
    out: list[Interval] = []
    for param in method.params:
        interval = Interval(param.lo, param.hi)
        if param.name in from_requires:
            interval = interval.intersect(from_requires[param.name])
        if overrides and param.name in overrides:
            interval = interval.intersect(overrides[param.name])
        if interval.lo is not None and interval.hi is not None and interval.lo > interval.hi:
            raise DomainError(
                f"empty domain for parameter {param.name!r} of {method.name!r}"
            )
        out.append(interval)
    return out


def domain_product_size(domains: list[Interval]) -> int:
    """Number of tuples in the domain box; raises if any side is unbounded."""
    size = 1
    for d in domains:
        size *= d.size
    return size


def parse_domain_spec(spec: str) -> tuple[str, Interval]:
    """Parse a command-line domain override like `hour=0:23`."""
    name, _, rng = spec.partition("=")
    lo_text, sep, hi_text = rng.partition(":")
    if not name or not sep:
        raise DomainError(f"malformed domain spec {spec!r}, expected name=lo:hi")
    try:
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise DomainError(f"non-integer bound in domain spec {spec!r}") from None
    if lo > hi:
        raise DomainError(f"empty range in domain spec {spec!r}")
    return name.strip(), Interval(lo, hi)
