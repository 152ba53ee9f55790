"""Monitorability of forall-exists invariance hyperproperties.

Considers hyperproperties of the shape "for every trace there exists a
trace such that, at every position, the two current letters satisfy a
fixed two-trace state predicate F".  Letters are valuations over a finite
atom set; F mentions each atom tagged with the trace it reads from
(`a@1` for the universal trace, `a@2` for the existential one).

Classification rests on two semantic features decided by exhaustive
enumeration of the (tiny) valuation space:

* reflexive: F(v, v) holds for every letter v.  Then every nonempty
  trace set satisfies the property by pairing each trace with itself, so
  it is trivially monitorable (permanently satisfied).
* serial: every letter v has some v' with F(v, v').  Then the universal
  set of traces is a model, and no finite observation can rule the
  existential partner in or out.

The property is non-monitorable if and only if F is non-reflexive and
serial.  In the non-serial case a monitor can report violation: any
observation extended by one letter v falsifying all F(v, .) permanently
violates the property, and `violating_extension` builds exactly that
witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .errors import HypermonError, ParseError

MAX_ATOMS = 20

Letter = frozenset
Trace = tuple  # of Letter


class PredicateError(HypermonError):
    """Malformed predicate or misused classifier contract."""


# ---------------------------------------------------------------------------
# Predicate AST

@dataclass(frozen=True)
class Atom:
    name: str
    trace: int  # 1 reads from the universal trace, 2 from the existential

    def __str__(self):
        return f"{self.name}@{self.trace}"


@dataclass(frozen=True)
class NotP:
    operand: "Node"

    def __str__(self):
        return f"!{self.operand}"


@dataclass(frozen=True)
class BinP:
    op: str  # '&&' '||' '->' '<->'
    left: "Node"
    right: "Node"

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


@dataclass(frozen=True)
class ConstP:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


Node = object


@dataclass(frozen=True)
class StatePredicate:
    """Boolean combination of tagged atoms over a finite atom set."""

    atoms: frozenset[str]
    root: Node

    def __str__(self):
        return str(self.root)


# ---------------------------------------------------------------------------
# Parsing: infix grammar with atoms `name@1` / `name@2`

class _Tokens:
    def __init__(self, text: str):
        self.items = self._lex(text)
        self.pos = 0

    @staticmethod
    def _lex(text: str) -> list[str]:
        out = []
        i, n = 0, len(text)
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
            elif text[i : i + 3] == "<->":
                out.append("<->")
                i += 3
            elif text[i : i + 2] in ("->", "&&", "||"):
                out.append(text[i : i + 2])
                i += 2
            elif c in "()!":
                out.append(c)
                i += 1
            elif c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] in "_@"):
                    j += 1
                out.append(text[i:j])
                i = j
            else:
                raise ParseError(f"unexpected character {c!r} in predicate")
        return out

    def peek(self) -> Optional[str]:
        return self.items[self.pos] if self.pos < len(self.items) else None

    def next(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of predicate")
        self.pos += 1
        return tok


def parse_predicate(text: str, atoms: Iterable[str]) -> StatePredicate:
    """Parse a two-trace state predicate over the declared atoms.

    Operators by loosening precedence: ! ; && ; || ; -> (right
    associative) ; <->.  Atoms are written `a@1` or `a@2`.
    """
    atom_set = frozenset(atoms)
    if not atom_set:
        raise PredicateError("the atom set must be nonempty")
    toks = _Tokens(text)

    def primary() -> Node:
        tok = toks.next()
        if tok == "(":
            node = iff()
            if toks.next() != ")":
                raise ParseError("expected ')' in predicate")
            return node
        if tok == "!":
            return NotP(primary())
        if tok == "true":
            return ConstP(True)
        if tok == "false":
            return ConstP(False)
        if "@" in tok:
            name, _, tag = tok.partition("@")
            if tag not in ("1", "2"):
                raise ParseError(f"atom tag must be 1 or 2, got {tok!r}")
            if name not in atom_set:
                raise PredicateError(f"unknown atom {name!r} (declared: {sorted(atom_set)})")
            return Atom(name, int(tag))
        raise ParseError(f"expected an atom like 'a@1', got {tok!r}")

    def conj() -> Node:
        node = primary()
        while toks.peek() == "&&":
            toks.next()
            node = BinP("&&", node, primary())
        return node

    def disj() -> Node:
        node = conj()
        while toks.peek() == "||":
            toks.next()
            node = BinP("||", node, conj())
        return node

    def impl() -> Node:
        node = disj()
        if toks.peek() == "->":
            toks.next()
            node = BinP("->", node, impl())
        return node

    def iff() -> Node:
        node = impl()
        while toks.peek() == "<->":
            toks.next()
            node = BinP("<->", node, impl())
        return node

    root = iff()
    if toks.peek() is not None:
        raise ParseError(f"trailing tokens in predicate: {toks.peek()!r}")
    return StatePredicate(atom_set, root)


def eval_predicate(pred: StatePredicate, v: Letter, v2: Letter) -> bool:
    """Truth of the predicate reading tag-1 atoms from v, tag-2 from v2."""

    def ev(node: Node) -> bool:
        if isinstance(node, Atom):
            return node.name in (v if node.trace == 1 else v2)
        if isinstance(node, ConstP):
            return node.value
        if isinstance(node, NotP):
            return not ev(node.operand)
        if isinstance(node, BinP):
            a, b = ev(node.left), ev(node.right)
            if node.op == "&&":
                return a and b
            if node.op == "||":
                return a or b
            if node.op == "->":
                return (not a) or b
            if node.op == "<->":
                return a == b
        raise PredicateError(f"bad predicate node {node!r}")

    return ev(pred.root)


def letters(pred: StatePredicate) -> list[Letter]:
    """All valuations of the predicate's atom set, smallest first."""
    atoms = sorted(pred.atoms)
    if len(atoms) > MAX_ATOMS:
        raise PredicateError(
            f"{len(atoms)} atoms exceed the enumeration bound of {MAX_ATOMS}"
        )
    return [
        frozenset(a for a, bit in zip(atoms, bits) if bit)
        for bits in itertools.product((False, True), repeat=len(atoms))
    ]


def is_reflexive(pred: StatePredicate) -> bool:
    """Whether F(v, v) holds for every letter v (exhaustive)."""
    return all(eval_predicate(pred, v, v) for v in letters(pred))


def is_serial(pred: StatePredicate) -> bool:
    """Whether every letter v has some v' with F(v, v') (exhaustive)."""
    space = letters(pred)
    return all(any(eval_predicate(pred, v, w) for w in space) for v in space)


def falsifying_letter(pred: StatePredicate) -> Optional[Letter]:
    """A letter v with F(v, v') false for every v', if one exists."""
    space = letters(pred)
    for v in space:
        if not any(eval_predicate(pred, v, w) for w in space):
            return v
    return None


# ---------------------------------------------------------------------------
# Classification

class Classification(Enum):
    MONITORABLE = "MONITORABLE"
    NON_MONITORABLE = "NON_MONITORABLE"


class EvidenceKind(Enum):
    REFLEXIVE = "REFLEXIVE"  # permanently satisfied on any observation
    NON_SERIAL = "NON_SERIAL"  # a single letter suffices to violate


@dataclass(frozen=True)
class MonitorabilityVerdict:
    classification: Classification
    reflexive: bool
    serial: bool
    evidence: Optional[EvidenceKind] = None
    falsifying: Optional[Letter] = None

    def describe(self) -> str:
        lines = [
            f"classification: {self.classification.value}",
            f"reflexive: {self.reflexive}",
            f"serial: {self.serial}",
        ]
        if self.evidence is EvidenceKind.REFLEXIVE:
            lines.append(
                "evidence: REFLEXIVE; pairing any trace with itself satisfies the "
                "predicate everywhere, so every nonempty observation is permanently satisfied"
            )
        elif self.evidence is EvidenceKind.NON_SERIAL:
            letter = "{" + ",".join(sorted(self.falsifying)) + "}"
            lines.append(
                f"evidence: NON_SERIAL; extending any trace by {letter} "
                f"permanently violates the property"
            )
        return "\n".join(lines)


def classify(pred: StatePredicate) -> MonitorabilityVerdict:
    """Monitorability of `forall t1 exists t2, always F(t1, t2)`.

    Non-monitorable exactly when F is non-reflexive and serial: the
    universal trace set then satisfies the property while some letter
    breaks reflexivity, so no finite observation settles either way.
    """
    reflexive = is_reflexive(pred)
    serial = is_serial(pred)
    if not reflexive and serial:
        return MonitorabilityVerdict(Classification.NON_MONITORABLE, reflexive, serial)
    if reflexive:
        return MonitorabilityVerdict(
            Classification.MONITORABLE, reflexive, serial, EvidenceKind.REFLEXIVE
        )
    return MonitorabilityVerdict(
        Classification.MONITORABLE,
        reflexive,
        serial,
        EvidenceKind.NON_SERIAL,
        falsifying_letter(pred),
    )


def violating_extension(
    pred: StatePredicate, traces: Iterable[Trace]
) -> frozenset[Trace]:
    """Extend one trace by a letter that no partner letter can match.

    Requires a non-serial predicate.  The extended observation then
    permanently violates the property: the universal quantifier can pick
    the extended trace, and at the new position no choice of partner
    trace provides a letter satisfying F.  An empty observation gains a
    fresh one-letter trace.
    """
    verdict = classify(pred)
    if verdict.evidence is not EvidenceKind.NON_SERIAL:
        raise PredicateError(
            "violating extensions exist only for non-serial predicates"
        )
    v = verdict.falsifying
    out = list(traces)
    if not out:
        return frozenset({(v,)})
    extended = out[0] + (v,)
    return frozenset([extended, *out[1:]])
