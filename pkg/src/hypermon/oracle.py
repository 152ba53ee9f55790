"""Three-valued distinguishability oracle.

For input position i and two values x != y, the oracle decides whether
some completion z of the remaining inputs makes the monitored method
produce different outputs, i.e. whether fixing position i to x versus y
is observable at all.  Answers:

* TOP     -- a distinguishing completion exists,
* BOTTOM  -- no completion distinguishes x from y (outputs always equal),
* UNKNOWN -- undecided (timeout, unbounded domains, inexact evidence).

Three backends implement the decision:

* brute  -- exhaustive concrete evaluation over finite domains (ground
  truth, no characterization involved);
* smt    -- two renamed copies of the symbolic characterization, sharing
  every input symbol except position i, checked for satisfiability of
  `output1 != output2` by an external SMT solver;
* char   -- the same two-copy query decided internally by enumerating the
  shared symbols over finite domains and evaluating the path formulas.

Soundness under approximation: BOTTOM needs unsatisfiability of the
output inequality over *all* havoc valuations, which holds exactly when
the plain satisfiability check fails, so BOTTOM from an over-approximate
characterization is still correct.  A satisfiability witness, by
contrast, may be spurious when the characterization is not exact, so TOP
is downgraded to UNKNOWN unless exactness is established.

Results are cached under the normalized key (i, min(x,y), max(x,y)),
which also makes the oracle structurally symmetric in x and y.  Queries
against equal values answer UNKNOWN without touching any backend: the
monitored conjunction deliberately skips reflexive pairs, since no pair
of equal values can witness a minimality violation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import DomainError, SolverError
from .exprs import conjunction, substitute
from .havoc import HavocUndecided, havoc_satisfiable, havoc_solutions
from .minilang.ast import Binary, Expr, IntLit, Program, Var
from .minilang.domains import Interval, input_domain
from .minilang.interp import Evaluator, PreconditionError, evaluator_for
from .smtlib import DEFAULT_TIMEOUT, render_script, resolve_solver_command, smt_check
from .symexec import Characterization, PathFormula
from .traces import Verdict3

BRUTE_BOUND = 10_000_000
CHAR_EVAL_BOUND = 1_000_000

OUT1 = "out@1"
OUT2 = "out@2"


@dataclass
class QueryCopy:
    """One renamed copy of a characterization with position i pinned."""

    disjuncts: list[tuple[tuple[Expr, ...], Optional[Expr]]]
    havoc: frozenset[str]


@dataclass
class OracleQuery:
    """Two-copy distinguishability query.

    Both copies share every input symbol except position `position`,
    which is fixed to `x` in the first copy and `y` in the second; havoc
    symbols are freshly renamed per copy.  Satisfiability of
    `out@1 != out@2` (under the domain constraints) is the TOP check;
    its unsatisfiability is the BOTTOM check.
    """

    method: str
    position: int
    x: int
    y: int
    shared_symbols: tuple[str, ...]
    copies: tuple[QueryCopy, QueryCopy]
    domain_constraints: list[Expr] = field(default_factory=list)

    def to_smt2(self) -> str:
        consts = list(self.shared_symbols) + [OUT1, OUT2]
        for copy in self.copies:
            consts.extend(sorted(copy.havoc))
        assertions = list(self.domain_constraints)
        for copy, out in zip(self.copies, (OUT1, OUT2)):
            assertions.append(_copy_formula(copy, out))
        assertions.append(Binary("!=", Var(OUT1), Var(OUT2)))
        return render_script(consts, assertions)


def _copy_formula(copy: QueryCopy, out_name: str) -> Expr:
    disjuncts = []
    for conds, output in copy.disjuncts:
        parts = list(conds)
        if output is not None:
            parts.append(Binary("==", Var(out_name), output))
        disjuncts.append(conjunction(parts))
    formula = None
    for d in disjuncts:
        formula = d if formula is None else Binary("||", formula, d)
    return formula if formula is not None else IntLit(0)


def _rename_copy(
    char: Characterization, position: Optional[int], value: Optional[int], tag: str
) -> QueryCopy:
    """Substitute the pinned position and freshen havoc symbols."""
    binding: dict[str, Expr] = {}
    if position is not None:
        binding[char.input_symbols[position - 1]] = IntLit(value)
    disjuncts = []
    havoc: set[str] = set()
    for path in char.paths:
        renames = dict(binding)
        fresh = {h: f"{h}@{tag}" for h in path.havoc_syms}
        renames.update({h: Var(n) for h, n in fresh.items()})
        conds = []
        dead = False
        for c in path.condition:
            sub = substitute(c, renames)
            if isinstance(sub, IntLit):
                if not sub.value:
                    dead = True
                    break
                continue
            conds.append(sub)
        if dead:
            continue
        havoc.update(fresh[h] for h in path.havoc_syms if _occurs(fresh[h], conds))
        output = None if path.output is None else substitute(path.output, renames)
        if output is not None:
            for h in path.havoc_syms:
                if _occurs_expr(fresh[h], output):
                    havoc.add(fresh[h])
        disjuncts.append((tuple(conds), output))
    return QueryCopy(disjuncts, frozenset(havoc))


def _occurs(name: str, exprs) -> bool:
    return any(_occurs_expr(name, e) for e in exprs)


def _occurs_expr(name: str, expr: Expr) -> bool:
    from .minilang.ast import free_vars

    return name in free_vars(expr)


def build_query(
    char: Characterization,
    i: int,
    x: int,
    y: int,
    domains: Optional[list[Interval]] = None,
) -> OracleQuery:
    """Construct the two-copy query for position i and values x, y."""
    if not 1 <= i <= char.arity:
        raise ValueError(f"position {i} out of range for arity {char.arity}")
    if x == y:
        raise ValueError("distinguishability queries need two distinct values")
    shared = tuple(s for k, s in enumerate(char.input_symbols, 1) if k != i)
    copy1 = _rename_copy(char, i, x, "1")
    copy2 = _rename_copy(char, i, y, "2")
    constraints: list[Expr] = []
    if domains:
        for k, (sym, dom) in enumerate(zip(char.input_symbols, domains), 1):
            if k == i:
                continue
            if dom.lo is not None:
                constraints.append(Binary(">=", Var(sym), IntLit(dom.lo)))
            if dom.hi is not None:
                constraints.append(Binary("<=", Var(sym), IntLit(dom.hi)))
    return OracleQuery(
        method=char.method,
        position=i,
        x=x,
        y=y,
        shared_symbols=shared,
        copies=(copy1, copy2),
        domain_constraints=constraints,
    )


# ---------------------------------------------------------------------------
# Backends

def brute_check(
    program: Program,
    method: str,
    i: int,
    x: int,
    y: int,
    domains: list[Interval],
    bound: int = BRUTE_BOUND,
    evaluator: Optional[Evaluator] = None,
) -> bool:
    """Ground-truth distinguishability by exhaustive concrete evaluation.

    Enumerates completions of the other positions over their (finite)
    domains and compares outputs.  Refuses unbounded domains and products
    beyond `bound`.
    """
    mdef = program.method(method)
    if len(domains) != mdef.arity:
        raise DomainError(f"{method!r} needs {mdef.arity} domains, got {len(domains)}")
    if not 1 <= i <= mdef.arity:
        raise ValueError(f"position {i} out of range")
    others = [d for k, d in enumerate(domains, 1) if k != i]
    product = 1
    for d in others:
        if not d.bounded:
            raise DomainError(
                f"brute-force check refused: domain {d} of {method!r} is unbounded"
            )
        product *= d.size
    if product > bound:
        raise DomainError(
            f"brute-force check refused: {product} completions exceed bound {bound}"
        )
    ev = evaluator or evaluator_for(program)
    pos = i - 1
    for combo in itertools.product(*(d.values() for d in others)):
        z = list(combo)
        z.insert(pos, x)
        zx = tuple(z)
        z[pos] = y
        zy = tuple(z)
        try:
            if ev.call(method, zx) != ev.call(method, zy):
                return True
        except PreconditionError:
            continue
    return False


def _side_outputs(copy: QueryCopy, binding: dict[str, Expr]):
    """Possible outputs of one copy at a concrete shared assignment.

    Returns (holds, values, havoc_reachable): whether any disjunct holds,
    the set of constrained output values, and whether a HAVOC-output
    disjunct is reachable (admitting every integer).
    """
    holds = False
    havoc_reachable = False
    values: set[int] = set()
    for conds, output in copy.disjuncts:
        residual = [substitute(c, binding) for c in conds]
        syms = set()
        for c in residual:
            syms |= {v for v in _free(c) if v in copy.havoc}
        if output is not None:
            out_sub = substitute(output, binding)
            out_syms = {v for v in _free(out_sub) if v in copy.havoc}
        else:
            out_sub = None
            out_syms = set()
        if not syms and not out_syms:
            if all(isinstance(c, IntLit) and c.value for c in residual):
                holds = True
                if out_sub is None:
                    havoc_reachable = True
                elif isinstance(out_sub, IntLit):
                    values.add(out_sub.value)
                else:
                    raise HavocUndecided(f"unresolved output {out_sub}")
            continue
        relevant = syms | out_syms
        solutions = havoc_solutions(residual, relevant)
        if not solutions:
            continue
        holds = True
        if out_sub is None:
            havoc_reachable = True
            continue
        for assignment in solutions:
            value = substitute(
                out_sub, {s: IntLit(v) for s, v in assignment.items()}
            )
            if not isinstance(value, IntLit):
                raise HavocUndecided(f"unresolved output {value}")
            values.add(value.value)
    return holds, values, havoc_reachable


def _free(expr: Expr) -> frozenset[str]:
    from .minilang.ast import free_vars

    return free_vars(expr)


def char_check(
    query: OracleQuery,
    domains: list[Interval],
    bound: int = CHAR_EVAL_BOUND,
) -> str:
    """Decide the query by enumerating shared symbols over finite domains.

    This evaluates the characterization itself (not the program), so it is
    the finite-domain equivalent of the SMT check.  Returns 'sat',
    'unsat', or 'unknown' (unbounded/oversized domains, havoc blowup).
    """
    shared_domains = [
        d for k, d in enumerate(domains, 1) if k != query.position
    ]
    product = 1
    for d in shared_domains:
        if not d.bounded:
            return "unknown"
        product *= d.size
    if product > bound:
        return "unknown"
    try:
        for combo in itertools.product(*(d.values() for d in shared_domains)):
            binding = {
                s: IntLit(v) for s, v in zip(query.shared_symbols, combo)
            }
            holds1, values1, havoc1 = _side_outputs(query.copies[0], binding)
            if not holds1:
                continue
            holds2, values2, havoc2 = _side_outputs(query.copies[1], binding)
            if not holds2:
                continue
            if havoc1 or havoc2:
                return "sat"
            if len(values1 | values2) >= 2:
                return "sat"
    except HavocUndecided:
        return "unknown"
    return "unsat"


# ---------------------------------------------------------------------------
# The oracle proper

@dataclass
class OracleResult:
    value: Verdict3
    source: str  # 'brute' | 'smt' | 'char' | 'cache' | 'skipped'
    exactness_used: bool = False


@dataclass
class OracleStats:
    queries: int = 0
    backend_calls: int = 0
    cache_hits: int = 0
    skipped_equal: int = 0
    failures: int = 0


class Oracle:
    """Cached three-valued distinguishability decisions for one method.

    backend 'auto' uses brute force when every domain is finite and the
    completion product fits the bound, and the SMT solver otherwise.
    Queries are pure relative to the immutable characterization and may
    run concurrently; the cache relies on atomic dict operations.
    """

    def __init__(
        self,
        program: Optional[Program] = None,
        method: Optional[str] = None,
        characterization: Optional[Characterization] = None,
        domains: Optional[list[Interval]] = None,
        backend: str = "auto",
        solver_command: Optional[str] = None,
        brute_bound: int = BRUTE_BOUND,
        char_bound: int = CHAR_EVAL_BOUND,
        timeout: float = DEFAULT_TIMEOUT,
    ):
        if backend not in ("auto", "brute", "smt", "char"):
            raise ValueError(f"unknown backend {backend!r}")
        if program is not None and method is not None and domains is None:
            domains = input_domain(program.method(method))
        self.program = program
        self.method = method
        self.characterization = characterization
        self.domains = domains
        self.backend = backend
        self.solver_command = solver_command
        self.brute_bound = brute_bound
        self.char_bound = char_bound
        self.timeout = timeout
        self.stats = OracleStats()
        self.diagnostics: list[str] = []
        self._cache: dict[tuple[int, int, int], OracleResult] = {}

    # -- helpers ------------------------------------------------------------

    @property
    def _exact_for_top(self) -> bool:
        # no characterization means the backend evaluates the program
        # itself (ground truth); otherwise exactness gates TOP answers
        return self.characterization is None or self.characterization.exact

    def _brute_feasible(self, i: int) -> bool:
        if self.program is None or self.method is None or self.domains is None:
            return False
        others = [d for k, d in enumerate(self.domains, 1) if k != i]
        if not all(d.bounded for d in others):
            return False
        product = 1
        for d in others:
            product *= d.size
        return product <= self.brute_bound

    def _resolve_backend(self, i: int) -> str:
        if self.backend != "auto":
            return self.backend
        if self._brute_feasible(i):
            return "brute"
        return "smt"

    # -- the N_{f,i}-style decision ------------------------------------------

    def query(self, i: int, x: int, y: int) -> OracleResult:
        """Three-valued answer for (position, value, value).

        Equal values answer UNKNOWN without any backend call; the result
        for x != y is cached symmetrically.
        """
        self.stats.queries += 1
        if x == y:
            self.stats.skipped_equal += 1
            return OracleResult(Verdict3.UNKNOWN, "skipped")
        key = (i, min(x, y), max(x, y))
        hit = self._cache.get(key)
        if hit is not None:
            self.stats.cache_hits += 1
            return replace(hit, source="cache")
        result = self._decide(i, *key[1:])
        self._cache[key] = result
        return result

    def _decide(self, i: int, x: int, y: int) -> OracleResult:
        backend = self._resolve_backend(i)
        self.stats.backend_calls += 1
        try:
            if backend == "brute":
                truth = brute_check(
                    self.program, self.method, i, x, y, self.domains,
                    self.brute_bound,
                )
                if truth:
                    if self._exact_for_top:
                        return OracleResult(Verdict3.TOP, "brute", True)
                    return OracleResult(Verdict3.UNKNOWN, "brute")
                return OracleResult(Verdict3.BOTTOM, "brute")
            if self.characterization is None:
                raise SolverError(
                    f"backend {backend!r} needs a symbolic characterization"
                )
            query = build_query(self.characterization, i, x, y, self.domains)
            if backend == "char":
                answer = char_check(query, self.domains or [], self.char_bound)
            else:
                command = resolve_solver_command(self.solver_command)
                if not command:
                    raise SolverError("no SMT solver configured")
                answer = smt_check(query.to_smt2(), command, self.timeout)
            if answer == "unsat":
                return OracleResult(Verdict3.BOTTOM, backend)
            if answer == "sat" and self._exact_for_top:
                return OracleResult(Verdict3.TOP, backend, True)
            return OracleResult(Verdict3.UNKNOWN, backend)
        except (DomainError, SolverError) as exc:
            self.stats.failures += 1
            self.diagnostics.append(f"oracle({i}, {x}, {y}): {exc}")
            return OracleResult(Verdict3.UNKNOWN, backend)

    # spec-facing alias
    oracle_n = query


def oracle_n(oracle: Oracle, i: int, x: int, y: int) -> OracleResult:
    """Functional form of Oracle.query."""
    return oracle.query(i, x, y)


def characterization_script(char: Characterization) -> str:
    """SMT-LIB rendering of a characterization, for inspection only.

    Declares the input and havoc symbols plus one output symbol and
    asserts the path disjunction; the oracle builds its own queries.
    """
    copy = _rename_copy(char, None, None, "0")
    consts = list(char.input_symbols) + sorted(copy.havoc) + [OUT1]
    return render_script(consts, [_copy_formula(copy, OUT1)])


def upgrade_exactness(
    char: Characterization,
    solver_command: Optional[str] = None,
    timeout: float = DEFAULT_TIMEOUT,
) -> Characterization:
    """Try to prove a loop-summarized characterization output-deterministic.

    Two copies sharing *all* input symbols are checked for a satisfiable
    output difference; unsatisfiability means the havoc symbols cannot
    influence the output, so the characterization describes a function and
    the exact flag can be lifted.  Returns the (possibly updated)
    characterization; cutoff paths can never be exact.
    """
    if char.exact or any(p.cutoff for p in char.paths):
        return char
    copy1 = _rename_copy(char, None, None, "1")
    copy2 = _rename_copy(char, None, None, "2")
    consts = list(char.input_symbols) + [OUT1, OUT2]
    consts += sorted(copy1.havoc) + sorted(copy2.havoc)
    assertions = [
        _copy_formula(copy1, OUT1),
        _copy_formula(copy2, OUT2),
        Binary("!=", Var(OUT1), Var(OUT2)),
    ]
    command = resolve_solver_command(solver_command)
    if not command:
        return char
    try:
        answer = smt_check(render_script(consts, assertions), command, timeout)
    except SolverError:
        return char
    if answer == "unsat":
        return Characterization(
            method=char.method,
            input_symbols=char.input_symbols,
            paths=char.paths,
            exact=True,
            unroll_depth=char.unroll_depth,
            used_invariants=char.used_invariants,
            summarized_loops=char.summarized_loops,
        )
    return char
