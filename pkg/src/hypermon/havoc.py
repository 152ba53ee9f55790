"""Bounded solving of path constraints over havoc symbols.

Loop summaries introduce fresh unconstrained symbols; checking whether a
path admits a concrete input, and which outputs it allows, then requires
solving the residual constraints over those symbols.  This solver handles
conjunctions of comparisons whose sides are linear in the havoc symbols
(after concrete inputs have been substituted): bounds are propagated from
single-variable atoms, single-variable equalities are solved exactly, and
remaining finite intervals are enumerated up to a cap.

This is deliberately not a general SMT procedure.  When no variable can
be bounded, HavocUndecided is raised and callers fall back to an external
solver or report the sample as undecided.
"""

from __future__ import annotations

from .errors import HypermonError
from .exprs import linear_form, substitute
from .minilang.ast import Binary, Expr, IntLit, Unary, Var

ENUM_CAP = 100_000


class HavocUndecided(HypermonError):
    """The residual havoc constraints could not be bounded for enumeration."""


def _floor_div(a: int, b: int) -> int:
    return a // b  # Python floor division; b > 0 at call sites


def _bound_from_atom(atom: Expr) -> tuple[str, int | None, int | None] | None:
    """Extract (var, lo, hi) from a single-variable linear comparison."""
    if not isinstance(atom, Binary) or atom.op not in ("<", "<=", ">", ">=", "=="):
        return None
    lhs = linear_form(atom.left)
    rhs = linear_form(atom.right)
    if lhs is None or rhs is None:
        return None
    coeffs = dict(lhs[0])
    for v, c in rhs[0].items():
        coeffs[v] = coeffs.get(v, 0) - c
        if coeffs[v] == 0:
            del coeffs[v]
    const = lhs[1] - rhs[1]
    if len(coeffs) != 1:
        return None
    (var, coef), = coeffs.items()
    op = atom.op
    if coef < 0:
        coef, const = -coef, -const
        op = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "==": "=="}[op]
    # now: coef*var + const <op> 0 with coef > 0
    if op == "==":
        if const % coef != 0:
            return var, 1, 0  # empty interval: unsatisfiable
        v = -const // coef
        return var, v, v
    if op == "<=":
        return var, None, _floor_div(-const, coef)
    if op == "<":
        return var, None, _floor_div(-const - 1, coef)
    if op == ">=":
        return var, -(_floor_div(const, coef)), None
    if op == ">":
        return var, -(_floor_div(const + 1, coef)), None
    return None


def _eval_ground(atom: Expr) -> bool | None:
    """Truth value of a variable-free conjunct, or None if not ground."""
    if isinstance(atom, IntLit):
        return bool(atom.value)
    return None


def havoc_solutions(
    conjuncts: list[Expr],
    variables: frozenset[str] | set[str],
    cap: int = ENUM_CAP,
) -> list[dict[str, int]]:
    """All assignments of the havoc variables satisfying the conjuncts.

    Conjuncts must already have concrete inputs substituted (their only
    free variables are havoc symbols).  Raises HavocUndecided when some
    variable cannot be bounded within `cap` candidate values.
    """
    solutions: list[dict[str, int]] = []
    _solve(list(conjuncts), dict.fromkeys(variables), {}, solutions, cap)
    return solutions


def _solve(conjuncts, pending, assignment, solutions, cap):
    # drop ground conjuncts, failing fast on a false one
    remaining = []
    for c in conjuncts:
        truth = _eval_ground(c)
        if truth is False:
            return
        if truth is None:
            remaining.append(c)
    if not pending:
        if not remaining:
            solutions.append(dict(assignment))
        return
    if len(solutions) > cap:
        raise HavocUndecided("too many havoc solutions")

    # interval propagation from single-variable atoms
    bounds: dict[str, tuple[int | None, int | None]] = {v: (None, None) for v in pending}
    for c in remaining:
        found = _bound_from_atom(c)
        if found is None:
            continue
        var, lo, hi = found
        if var not in bounds:
            continue
        cur_lo, cur_hi = bounds[var]
        if lo is not None:
            cur_lo = lo if cur_lo is None else max(cur_lo, lo)
        if hi is not None:
            cur_hi = hi if cur_hi is None else min(cur_hi, hi)
        bounds[var] = (cur_lo, cur_hi)

    best = None
    for var, (lo, hi) in bounds.items():
        if lo is None or hi is None:
            continue
        width = hi - lo + 1
        if width <= 0:
            return  # some variable has an empty interval: unsatisfiable
        if best is None or width < best[1]:
            best = (var, width, lo, hi)
    if best is None:
        raise HavocUndecided(
            f"cannot bound havoc symbols {sorted(pending)} from {len(remaining)} conjuncts"
        )
    var, width, lo, hi = best
    if width > cap:
        raise HavocUndecided(f"havoc symbol {var!r} has {width} candidates (cap {cap})")

    rest_pending = {v: None for v in pending if v != var}
    for value in range(lo, hi + 1):
        binding = {var: IntLit(value)}
        narrowed = [substitute(c, binding) for c in remaining]
        assignment[var] = value
        _solve(narrowed, rest_pending, assignment, solutions, cap)
        del assignment[var]


def havoc_satisfiable(
    conjuncts: list[Expr], variables: frozenset[str] | set[str], cap: int = ENUM_CAP
) -> bool:
    """Whether at least one havoc assignment satisfies the conjuncts."""
    if not variables:
        return all(_eval_ground(c) is not False for c in conjuncts)
    return bool(havoc_solutions(conjuncts, variables, cap))
