"""Sound gray-box monitoring of data minimality over I/O-pair observations.

The monitor ingests traces one at a time, keeps the deduplicated
observation, and reports a three-valued verdict after each trace:

* BOTTOM -- the observation permanently violates the monitored property
  (for the distributed property: two observed values of one input
  position can never be told apart by any completion of the others);
* UNKNOWN -- anything else.  A positive verdict is never produced:
  satisfaction of the distributed property is not monitorable, since
  unseen value pairs can always spoil it later.

Two properties times two strategies:

* DDM (distributed): pairs of observed values at each position go to the
  distinguishability oracle; EAGER checks every differing pair, LAZY only
  pairs whose traces produced the same output.
* MDM (monolithic, injectivity): LAZY reports two observed distinct
  input tuples with equal outputs; EAGER additionally synthesizes every
  combination of observed per-position values and evaluates the program
  on them, reporting any collision among the synthesized tuples.

A trace that disagrees with concrete re-evaluation is inconsistent: it is
recorded with a diagnostic, takes no part in the property checks, and
pins the *reported* verdict at UNKNOWN while present (the monitored
conjunction is only meaningful over valid system behaviors).  With
`strict` the monitor raises instead.

Checks are incremental: each new trace is paired against the existing
observation and results are cached per position, which is equivalent to
rechecking the whole set because verdicts are permanent and
order-independent (covered by property tests).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .errors import DomainError, HypermonError
from .minilang.ast import Program
from .minilang.domains import Interval, input_domain
from .minilang.interp import EvalError, PreconditionError, evaluator_for
from .oracle import Oracle
from .traces import IoPair, Observation, Verdict3

EAGER_PRODUCT_BOUND = 1_000_000


class Property(Enum):
    DDM = "ddm"
    MDM = "mdm"


class Strategy(Enum):
    EAGER = "eager"
    LAZY = "lazy"


class InconsistencyError(HypermonError):
    """A trace disagrees with the program (raised in strict mode only)."""


@dataclass(frozen=True)
class DdmWitness:
    position: int
    x: int
    y: int

    def __str__(self):
        return f"witness: i={self.position}, x={self.x}, y={self.y}"


@dataclass(frozen=True)
class MdmWitness:
    first: tuple[int, ...]
    second: tuple[int, ...]
    output: int

    def __str__(self):
        a = ",".join(map(str, self.first))
        b = ",".join(map(str, self.second))
        return f"witness: inputs ({a}) and ({b}) collide on output {self.output}"


def check_consistency(program: Program, method: str, u: IoPair) -> bool:
    """Whether concrete evaluation of the inputs reproduces the output.

    Evaluation errors (violated requires clause, division by zero) count
    as inconsistent: the trace cannot come from a valid run.
    """
    ok, _ = consistency_with_reason(program, method, u)
    return ok


def consistency_with_reason(
    program: Program, method: str, u: IoPair
) -> tuple[bool, Optional[str]]:
    try:
        result = evaluator_for(program).call(method, u.inputs)
    except EvalError as exc:
        return False, f"evaluation failed: {exc}"
    if result != u.output:
        return False, f"program computes {result}, trace claims {u.output}"
    return True, None


class Monitor:
    """Incremental violation monitor for one method of one program."""

    def __init__(
        self,
        program: Program,
        method: str,
        property: Property = Property.DDM,
        strategy: Strategy = Strategy.EAGER,
        oracle: Optional[Oracle] = None,
        domains: Optional[list[Interval]] = None,
        strict: bool = False,
        eager_bound: int = EAGER_PRODUCT_BOUND,
    ):
        self.program = program
        self.method = method
        self.mdef = program.method(method)
        self.property = property
        self.strategy = strategy
        self.strict = strict
        self.eager_bound = eager_bound
        self.domains = domains if domains is not None else input_domain(self.mdef)
        self.oracle = oracle or Oracle(
            program=program, method=method, domains=self.domains
        )
        self.observation = Observation()
        self.diagnostics: list[str] = []
        self.inconsistent: list[IoPair] = []
        self.checked_pairs: dict[int, set[tuple[int, int]]] = {
            i: set() for i in range(1, self.mdef.arity + 1)
        }
        self.witness: Optional[DdmWitness | MdmWitness] = None
        self._bottom = False
        self._consistent_order: list[IoPair] = []
        self._outputs_seen: dict[int, IoPair] = {}

    # -- verdict bookkeeping --------------------------------------------------

    @property
    def verdict(self) -> Verdict3:
        """Reported verdict: violation is permanent, but any inconsistent
        trace pins the report at UNKNOWN (the observation is not a valid
        system behavior, so the property conjunction is moot)."""
        if self.inconsistent:
            return Verdict3.UNKNOWN
        return Verdict3.BOTTOM if self._bottom else Verdict3.UNKNOWN

    def _record_bottom(self, witness) -> None:
        if not self._bottom:
            self._bottom = True
            self.witness = witness

    # -- ingestion -------------------------------------------------------------

    def ingest(self, u: IoPair) -> Verdict3:
        """Add one trace and return the verdict for the updated observation."""
        if u.arity != self.mdef.arity:
            raise DomainError(
                f"trace arity {u.arity} does not match method arity {self.mdef.arity}"
            )
        for i, (value, dom) in enumerate(zip(u.inputs, self.domains), 1):
            if not dom.contains(value):
                self.diagnostics.append(
                    f"input {value} at position {i} outside declared domain {dom}"
                )
        if not self.observation.add(u):
            return self.verdict  # duplicate: observation unchanged
        ok, reason = consistency_with_reason(self.program, self.method, u)
        if not ok:
            message = f"inconsistent trace ({u}): {reason}"
            if self.strict:
                raise InconsistencyError(message)
            self.inconsistent.append(u)
            self.diagnostics.append(message)
            return self.verdict
        self._consistent_order.append(u)
        if self.property is Property.DDM:
            self._ddm_ingest(u)
        else:
            self._mdm_ingest(u)
        return self.verdict

    def ingest_all(self, pairs: Iterable[IoPair]) -> Verdict3:
        for u in pairs:
            self.ingest(u)
        return self.verdict

    # -- distributed property ---------------------------------------------------

    def _ddm_pair(self, old: IoPair, new: IoPair) -> None:
        if self.strategy is Strategy.LAZY and old.output != new.output:
            return
        for i in range(1, self.mdef.arity + 1):
            x, y = old.proj(i), new.proj(i)
            if x == y:
                continue
            key = (min(x, y), max(x, y))
            if self.strategy is Strategy.EAGER and key in self.checked_pairs[i]:
                continue
            self.checked_pairs[i].add(key)
            if self.oracle.query(i, x, y).value is Verdict3.BOTTOM:
                self._record_bottom(DdmWitness(i, x, y))
                return

    def _ddm_ingest(self, u: IoPair) -> None:
        for old in self._consistent_order:
            if old == u:
                continue
            self._ddm_pair(old, u)
            if self._bottom:
                return

    def ddm_check(self) -> Verdict3:
        """Full (non-incremental) distributed-minimality check.

        BOTTOM iff some position carries two observed values (from
        same-output traces, under LAZY) that no completion distinguishes.
        Oracle failures degrade to UNKNOWN for the affected pair.
        """
        for u, v in itertools.combinations(self._consistent_order, 2):
            if self.strategy is Strategy.LAZY and u.output != v.output:
                continue
            for i in range(1, self.mdef.arity + 1):
                x, y = u.proj(i), v.proj(i)
                if x == y:
                    continue
                if self.oracle.query(i, x, y).value is Verdict3.BOTTOM:
                    self._record_bottom(DdmWitness(i, x, y))
                    return Verdict3.BOTTOM
        return Verdict3.BOTTOM if self._bottom else Verdict3.UNKNOWN

    # -- monolithic property -----------------------------------------------------

    def _mdm_ingest(self, u: IoPair) -> None:
        seen = self._outputs_seen.get(u.output)
        if seen is not None and seen.inputs != u.inputs:
            self._record_bottom(MdmWitness(seen.inputs, u.inputs, u.output))
            return
        self._outputs_seen.setdefault(u.output, u)
        if self.strategy is Strategy.EAGER:
            self._mdm_eager_check()

    def mdm_check(self) -> Verdict3:
        """Full monolithic-minimality (injectivity) check."""
        byout: dict[int, IoPair] = {}
        for u in self._consistent_order:
            seen = byout.setdefault(u.output, u)
            if seen.inputs != u.inputs:
                self._record_bottom(MdmWitness(seen.inputs, u.inputs, u.output))
                return Verdict3.BOTTOM
        if self.strategy is Strategy.EAGER:
            self._mdm_eager_check()
        return Verdict3.BOTTOM if self._bottom else Verdict3.UNKNOWN

    def _mdm_eager_check(self) -> None:
        """Cross observed per-position values and look for output collisions.

        Synthesized tuples need not correspond to observed traces; the
        program is evaluated on each combination.  An oversized product
        falls back to the lazy check with a diagnostic.
        """
        values = [
            sorted({u.proj(i) for u in self._consistent_order})
            for i in range(1, self.mdef.arity + 1)
        ]
        if not all(values):
            return
        product = 1
        for vs in values:
            product *= len(vs)
        if product > self.eager_bound:
            self.diagnostics.append(
                f"eager cross product of {product} tuples exceeds bound "
                f"{self.eager_bound}; falling back to observed traces only"
            )
            return
        evaluator = evaluator_for(self.program)
        byout: dict[int, tuple[int, ...]] = {}
        for combo in itertools.product(*values):
            try:
                out = evaluator.call(self.method, combo)
            except EvalError:
                continue  # synthesized tuple outside the valid input space
            seen = byout.setdefault(out, combo)
            if seen != combo:
                self._record_bottom(MdmWitness(seen, combo, out))
                return

    # -- reporting ---------------------------------------------------------------

    def summary(self) -> str:
        stats = self.oracle.stats
        return (
            f"traces={len(self.observation)} verdict={self.verdict} "
            f"oracle_calls={stats.backend_calls} cache_hits={stats.cache_hits} "
            f"inconsistent={len(self.inconsistent)} diagnostics={len(self.diagnostics)}"
        )


# ---------------------------------------------------------------------------
# Finite-set semantics of the minimality hyperformula

def _almost(u: IoPair, v: IoPair, i: int) -> bool:
    return all(u.proj(k) == v.proj(k) for k in range(1, u.arity + 1) if k != i)


def eval_phi_dm(pairs: Iterable[IoPair], arity: int) -> bool:
    """Truth of the minimality hyperformula over a finite trace set.

    All four quantifiers range over the given set: every pair of traces
    that differ at position i must be matched by witness traces that keep
    those position-i values, agree on every other input, and produce
    different outputs.  Independent of any program: pure set semantics.
    """
    universe = list(pairs)
    for i in range(1, arity + 1):
        for u, v in itertools.product(universe, repeat=2):
            if u.proj(i) == v.proj(i):
                continue
            witnessed = any(
                t.proj(i) == u.proj(i)
                and w.proj(i) == v.proj(i)
                and _almost(t, w, i)
                and t.output != w.output
                for t, w in itertools.product(universe, repeat=2)
            )
            if not witnessed:
                return False
    return True


# ---------------------------------------------------------------------------
# Perfect finite-domain monitor

def perfect_monitor_finite(
    U: Observation | Iterable[IoPair],
    program: Program,
    method: str,
    domains: list[Interval],
    bound: int = 200_000,
) -> Verdict3:
    """Exact three-valued verdict over a finite input domain.

    Decides whether every valid extension of the observation (sets of
    real executions, up to the full input/output graph) satisfies the
    minimality hyperformula (TOP), violates it (BOTTOM), or neither.

    The search over extension candidates is organized around two facts
    about extensions of U within the graph:

    * some extension satisfies the formula iff no two distinct observed
      values at a position are output-indistinguishable (a collapsed
      observed pair poisons every extension, and absent one, completing U
      with a compatible minimized grid satisfies the formula), and
    * some extension violates it iff some two-trace extension U+{u,u'}
      already lacks witnesses, since witnesses survive in supersets.

    Verification cross-checks this against exhaustive subset enumeration
    on small domains.
    """
    from .harness import enumerate_graph, position_kernel

    pairs = list(U)
    for u in pairs:
        if not check_consistency(program, method, u):
            raise ValueError(
                f"observation contains a trace outside the system behavior: {u}"
            )
    graph = enumerate_graph(program, method, domains, bound=bound)
    arity = len(domains)

    # violation is permanent iff two distinct observed values share a
    # position kernel class
    for i in range(1, arity + 1):
        classes = position_kernel(graph, i)
        class_of = {v: idx for idx, cls in enumerate(classes) for v in cls}
        seen: dict[int, int] = {}
        for u in pairs:
            v = u.proj(i)
            cls = class_of[v]
            if cls in seen and seen[cls] != v:
                return Verdict3.BOTTOM
            seen.setdefault(cls, v)

    inputs_of_u = {u.inputs for u in pairs}
    f = graph.entries

    # satisfaction is permanent iff every two-trace extension is witnessed
    for i in range(1, arity + 1):
        pos = i - 1
        completions = list(
            itertools.product(*(d.values() for k, d in enumerate(domains, 1) if k != i))
        )

        def emb(c: tuple[int, ...], v: int) -> tuple[int, ...]:
            return c[:pos] + (v,) + c[pos:]

        for x, y in itertools.combinations(domains[pos].values(), 2):
            if any(
                f[emb(c, x)] != f[emb(c, y)]
                and emb(c, x) in inputs_of_u
                and emb(c, y) in inputs_of_u
                for c in completions
            ):
                continue  # the observation itself witnesses this value pair
            za: list[tuple[int, ...]] = []
            zb: list[tuple[int, ...]] = []
            for c in completions:
                ex, ey = emb(c, x), emb(c, y)
                diff = f[ex] != f[ey]
                if not (diff and ey in inputs_of_u):
                    za.append(c)
                if not (diff and ex in inputs_of_u):
                    zb.append(c)
                if len(za) > 1 and len(zb) > 1:
                    break  # definitely an unwitnessed two-trace extension
            if not za or not zb:
                continue
            if (
                len(za) == 1
                and len(zb) == 1
                and za[0] == zb[0]
                and f[emb(za[0], x)] != f[emb(za[0], y)]
            ):
                continue
            return Verdict3.UNKNOWN
    return Verdict3.TOP
