import pytest

from hypermon.benchmarks import load_div, load_toll
from hypermon.errors import StaticError, SymexecError
from hypermon.minilang import Interval, IntLit, VarDecl, eval_method, parse_program
from hypermon.symexec import (
    Characterization,
    inline_calls,
    paths_holding_at,
    symexec_method,
    validate_characterization,
)


def outputs_of(char):
    return {p.output.value for p in char.paths if p.output is not None and isinstance(p.output, IntLit)}


class TestRateCharacterization:
    def test_four_paths_with_expected_outputs(self):
        char = symexec_method(load_toll(), "rate")
        assert len(char.paths) == 4
        assert outputs_of(char) == {90, 70, 72, 56}
        assert char.exact

    def test_each_path_agrees_with_concrete_eval_on_sample(self):
        program = load_toll()
        char = symexec_method(program, "rate")
        report = validate_characterization(char, program, samples=1000, seed=3)
        assert report.ok, report.summary()
        assert report.havoc_hits == 0

    def test_symexec_is_deterministic(self):
        a = symexec_method(load_toll(), "rate")
        b = symexec_method(load_toll(), "rate")
        assert [str(p) for p in a.paths] == [str(p) for p in b.paths]


class TestInlining:
    def test_fee_inlines_three_rate_and_two_max_copies(self):
        body = inline_calls(load_toll(), "fee")

        names = []

        def collect(stmt):
            from hypermon.minilang import Assign, Block, For, If, While

            if isinstance(stmt, VarDecl):
                names.append(stmt.name)
            elif isinstance(stmt, Block):
                for s in stmt.stmts:
                    collect(s)
            elif isinstance(stmt, If):
                collect(stmt.then)
                if stmt.orelse:
                    collect(stmt.orelse)
            elif isinstance(stmt, (While, For)):
                collect(stmt.body)

        for s in body.stmts:
            collect(s)
        rate_results = [n for n in names if n.startswith("rate$") and "." not in n]
        max_results = [n for n in names if n.startswith("max$")]
        assert len([n for n in rate_results if n.count("$") == 1 and n[5:].isdigit()]) == 3
        assert len([n for n in max_results if n.count("$") == 1 and n[4:].isdigit()]) == 2

    def test_call_free_method_unchanged(self):
        program = load_toll()
        body = inline_calls(program, "rate")
        assert body == program.methods["rate"].body

    def test_mutual_recursion_rejected_at_parse(self):
        src = """
        class C {
          int f(int x) { return g(x); }
          int g(int x) { return f(x); }
        }
        """
        with pytest.raises(StaticError, match="recursive"):
            parse_program(src)

    def test_inlined_fee_matches_concrete_eval(self):
        program = load_toll()
        char = symexec_method(program, "fee")
        report = validate_characterization(char, program, samples=1500, seed=5)
        assert report.ok, report.summary()

    def test_fee_path_count_stays_small(self):
        # 3 hour branches fork independently, the carpool branch is shared
        char = symexec_method(load_toll(), "fee")
        assert len(char.paths) == 16
        assert char.exact


class TestLoopSummaries:
    def test_pos_div_invariant_summary_shape(self):
        char = symexec_method(load_div(), "posDiv", use_invariants=True)
        assert len(char.paths) == 1
        path = char.paths[0]
        assert len(path.havoc_syms) == 2  # quotient counter and remainder
        assert not path.cutoff
        assert not char.exact  # output is a havoc symbol; needs an SMT proof

    def test_pos_div_invariant_summary_agrees_with_eval(self):
        program = load_div()
        char = symexec_method(program, "posDiv", use_invariants=True)
        box = [Interval(0, 150), Interval(1, 12)]
        report = validate_characterization(char, program, samples=2000, seed=9, box=box)
        assert report.ok, report.summary()
        assert report.havoc_hits == 0

    def test_unique_havoc_solution_matches_division(self):
        program = load_div()
        char = symexec_method(program, "posDiv", use_invariants=True)
        holding = paths_holding_at(char, (100, 7))
        assert len(holding) == 1
        _, path, solutions = holding[0]
        assert len(solutions) == 1
        values = set(solutions[0].values())
        assert values == {100 // 7, 100 % 7}

    def test_loop_without_invariant_and_zero_depth_is_config_error(self):
        with pytest.raises(SymexecError, match="unroll depth is 0"):
            symexec_method(load_div(), "posDiv", unroll_depth=0, use_invariants=False)


class TestUnrolling:
    def test_cutoff_path_present_and_inexact(self):
        char = symexec_method(load_div(), "posDiv", unroll_depth=3, use_invariants=False)
        cutoffs = [p for p in char.paths if p.cutoff]
        assert len(cutoffs) == 1
        assert cutoffs[0].is_havoc
        assert not char.exact
        # 100/1 needs 100 iterations, far beyond depth 3: only the cutoff path admits it
        holding = paths_holding_at(char, (100, 1))
        assert [path.cutoff for _, path, _ in holding] == [True]

    def test_shallow_inputs_use_exact_paths(self):
        program = load_div()
        char = symexec_method(program, "posDiv", unroll_depth=3, use_invariants=False)
        holding = paths_holding_at(char, (5, 2))  # 2 iterations
        assert len(holding) == 1
        _, path, _ = holding[0]
        assert not path.cutoff

    def test_agreement_violations_only_on_havoc_paths(self):
        program = load_div()
        char = symexec_method(program, "posDiv", unroll_depth=3, use_invariants=False)
        box = [Interval(0, 60), Interval(1, 6)]
        report = validate_characterization(char, program, samples=2000, seed=13, box=box)
        assert report.agreement == []  # HAVOC outputs never count as violations
        assert report.disjointness == []
        assert report.exhaustiveness == []
        assert report.havoc_hits > 0  # the box contains deep inputs

    def test_unroll_monotonicity_on_concrete_bound_loop(self):
        src = """
        class C {
          int triple(int x) {
            int acc = 0;
            for (int i = 0; i < 3; ++i) { acc += x; }
            return acc;
          }
        }
        """
        program = parse_program(src)
        exact_by_depth = []
        for depth in range(1, 7):
            char = symexec_method(program, "triple", unroll_depth=depth, use_invariants=False)
            exact_by_depth.append(char.exact)
        assert exact_by_depth == [False, False, True, True, True, True]
        char = symexec_method(program, "triple", unroll_depth=3, use_invariants=False)
        assert len(char.paths) == 1
        assert eval_method(program, "triple", (5,)) == 15

    def test_per_loop_choice_invariant_else_unroll(self):
        src = """
        class C {
          int f(int x) {
            int s = 0;
            //@ maintaining s >= 0;
            while (x > 0) { s = s + 1; x = x - 1; }
            int t = 0;
            for (int i = 0; i < 2; ++i) { t += 1; }
            return s + t;
          }
        }
        """
        program = parse_program(src)
        char = symexec_method(program, "f", unroll_depth=4, use_invariants=True)
        # first loop summarized (havoc symbols present), second fully unrolled
        assert char.summarized_loops == 1
        assert not any(p.cutoff for p in char.paths)


class TestDivisionSideConditions:
    def test_every_division_adds_nonzero_divisor_conjunct(self):
        program = parse_program("class C { int f(int x, int y) { return x / y; } }")
        char = symexec_method(program, "f")
        assert len(char.paths) == 1
        conds = [str(c) for c in char.paths[0].condition]
        assert any("y" in c and "!=" in c for c in conds)


class TestValidationFaultInjection:
    def test_deleted_path_reported_as_exhaustiveness_gap(self):
        program = load_toll()
        char = symexec_method(program, "rate")
        broken = Characterization(
            method=char.method,
            input_symbols=char.input_symbols,
            paths=char.paths[1:],
            exact=char.exact,
        )
        report = validate_characterization(broken, program, samples=500, seed=21)
        assert report.exhaustiveness

    def test_corrupted_output_reported_as_agreement_violation(self):
        program = load_toll()
        char = symexec_method(program, "rate")
        bad_paths = [
            type(p)(p.condition, IntLit(p.output.value + 1), p.havoc_syms)
            for p in char.paths
        ]
        broken = Characterization(
            method=char.method,
            input_symbols=char.input_symbols,
            paths=bad_paths,
            exact=char.exact,
        )
        report = validate_characterization(broken, program, samples=200, seed=2)
        assert report.agreement

    def test_path_explosion_guard(self):
        stmts = "\n".join(
            f"if (x > {i}) {{ s = s + 1; }} else {{ s = s - 1; }}" for i in range(20)
        )
        src = f"class C {{ int f(int x) {{ int s = 0; {stmts} return s; }} }}"
        with pytest.raises(SymexecError, match="path explosion"):
            symexec_method(parse_program(src), "f", max_paths=64)
