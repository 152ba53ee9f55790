import itertools
import random

import pytest

from hypermon.errors import ParseError
from hypermon.hypertheory import (
    Atom,
    BinP,
    Classification,
    ConstP,
    EvidenceKind,
    MonitorabilityVerdict,
    NotP,
    PredicateError,
    StatePredicate,
    classify,
    eval_predicate,
    falsifying_letter,
    is_reflexive,
    is_serial,
    letters,
    parse_predicate,
    violating_extension,
)

DISAGREE = "a@1 <-> !a@2"  # the classic non-monitorable shape
AGREE = "a@1 <-> a@2"


class TestParseAndEval:
    def test_disagreement_predicate(self):
        pred = parse_predicate(DISAGREE, {"a"})
        assert eval_predicate(pred, frozenset("a"), frozenset()) is True
        assert eval_predicate(pred, frozenset("a"), frozenset("a")) is False

    def test_agreement_predicate(self):
        pred = parse_predicate(AGREE, {"a"})
        assert eval_predicate(pred, frozenset(), frozenset()) is True
        assert eval_predicate(pred, frozenset("a"), frozenset()) is False

    def test_unknown_atom_rejected(self):
        with pytest.raises(PredicateError, match="unknown atom"):
            parse_predicate("b@1", {"a"})

    def test_bad_tag_rejected(self):
        with pytest.raises(ParseError, match="tag"):
            parse_predicate("a@3", {"a"})

    def test_syntax_error(self):
        with pytest.raises(ParseError):
            parse_predicate("a@1 &&", {"a"})

    def test_operator_precedence(self):
        pred = parse_predicate("a@1 && b@1 || a@2", {"a", "b"})
        # parsed as (a@1 && b@1) || a@2
        assert eval_predicate(pred, frozenset(), frozenset("a")) is True
        assert eval_predicate(pred, frozenset("a"), frozenset()) is False

    def test_atom_bound(self):
        atoms = {f"p{i}" for i in range(25)}
        pred = parse_predicate("p0@1", atoms)
        with pytest.raises(PredicateError, match="bound"):
            is_reflexive(pred)


class TestReflexiveSerial:
    def test_disagreement_is_nonreflexive_serial(self):
        pred = parse_predicate(DISAGREE, {"a"})
        assert is_reflexive(pred) is False
        assert is_serial(pred) is True

    def test_agreement_is_reflexive_and_serial(self):
        pred = parse_predicate(AGREE, {"a"})
        assert is_reflexive(pred) is True
        assert is_serial(pred) is True

    def test_constant_false_is_neither(self):
        pred = parse_predicate("false", {"a"})
        assert is_reflexive(pred) is False
        assert is_serial(pred) is False

    def test_reflexive_implies_serial(self):
        # v itself witnesses the existential for every reflexive predicate
        for pred in random_predicates(200, seed=3):
            if is_reflexive(pred):
                assert is_serial(pred)


class TestClassify:
    def test_disagreement_non_monitorable(self):
        verdict = classify(parse_predicate(DISAGREE, {"a"}))
        assert verdict.classification is Classification.NON_MONITORABLE
        assert verdict.evidence is None

    def test_agreement_monitorable_reflexive(self):
        verdict = classify(parse_predicate(AGREE, {"a"}))
        assert verdict.classification is Classification.MONITORABLE
        assert verdict.evidence is EvidenceKind.REFLEXIVE

    def test_constant_false_monitorable_non_serial(self):
        verdict = classify(parse_predicate("false", {"a"}))
        assert verdict.classification is Classification.MONITORABLE
        assert verdict.evidence is EvidenceKind.NON_SERIAL
        assert verdict.falsifying is not None

    def test_classification_matches_flag_combination(self):
        for pred in random_predicates(300, seed=11):
            verdict = classify(pred)
            expected_nonmon = (not verdict.reflexive) and verdict.serial
            assert (
                verdict.classification is Classification.NON_MONITORABLE
            ) == expected_nonmon

    def test_non_serial_evidence_falsifies_all_letters(self):
        for pred in random_predicates(300, seed=23):
            verdict = classify(pred)
            if verdict.evidence is EvidenceKind.NON_SERIAL:
                v = verdict.falsifying
                assert all(
                    not eval_predicate(pred, v, w) for w in letters(pred)
                )

    def test_reflexive_evidence_self_pairing(self):
        rng = random.Random(7)
        for pred in random_predicates(120, seed=29):
            verdict = classify(pred)
            if verdict.evidence is not EvidenceKind.REFLEXIVE:
                continue
            space = letters(pred)
            # any equal-length trace set satisfies the predicate pointwise
            # when each trace partners with itself
            for _ in range(5):
                length = rng.randrange(1, 4)
                traces = [
                    tuple(rng.choice(space) for _ in range(length))
                    for _ in range(rng.randrange(1, 4))
                ]
                assert all(
                    eval_predicate(pred, letter, letter)
                    for t in traces
                    for letter in t
                )


class TestViolatingExtension:
    def test_constant_false_extends_empty_trace(self):
        pred = parse_predicate("false", {"a"})
        v = falsifying_letter(pred)
        assert violating_extension(pred, [()]) == frozenset({(v,)})

    def test_constant_false_extends_existing_trace(self):
        pred = parse_predicate("false", {"a"})
        v = falsifying_letter(pred)
        base = (frozenset("a"),)
        assert violating_extension(pred, [base]) == frozenset({base + (v,)})

    def test_serial_predicate_is_contract_error(self):
        pred = parse_predicate(DISAGREE, {"a"})
        with pytest.raises(PredicateError, match="non-serial"):
            violating_extension(pred, [()])

    def test_extension_point_locally_unmatchable(self):
        for pred in random_predicates(200, seed=31):
            verdict = classify(pred)
            if verdict.evidence is not EvidenceKind.NON_SERIAL:
                continue
            extended = violating_extension(pred, [(frozenset(),)])
            (trace,) = extended
            last = trace[-1]
            assert all(not eval_predicate(pred, last, w) for w in letters(pred))


def random_predicates(count, seed, max_atoms=4):
    """Random predicate ASTs over up to `max_atoms` atoms."""
    rng = random.Random(seed)
    atom_names = ["a", "b", "c", "d"]

    def gen(depth, atoms):
        roll = rng.random()
        if depth <= 0 or roll < 0.35:
            if roll < 0.05:
                return ConstP(rng.random() < 0.5)
            return Atom(rng.choice(atoms), rng.choice((1, 2)))
        if roll < 0.5:
            return NotP(gen(depth - 1, atoms))
        op = rng.choice(("&&", "||", "->", "<->"))
        return BinP(op, gen(depth - 1, atoms), gen(depth - 1, atoms))

    out = []
    for _ in range(count):
        n = rng.randrange(1, max_atoms + 1)
        atoms = atom_names[:n]
        out.append(StatePredicate(frozenset(atoms), gen(3, atoms)))
    return out


class TestAgainstDefinitionalEnumeration:
    def test_thousand_random_predicates(self):
        mismatches = 0
        for pred in random_predicates(1000, seed=42):
            space = letters(pred)
            ref_reflexive = all(eval_predicate(pred, v, v) for v in space)
            ref_serial = all(
                any(eval_predicate(pred, v, w) for w in space) for v in space
            )
            verdict = classify(pred)
            if (verdict.reflexive, verdict.serial) != (ref_reflexive, ref_serial):
                mismatches += 1
            expected = (
                Classification.NON_MONITORABLE
                if (not ref_reflexive and ref_serial)
                else Classification.MONITORABLE
            )
            if verdict.classification is not expected:
                mismatches += 1
        assert mismatches == 0
