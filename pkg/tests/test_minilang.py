import random

import pytest

from hypermon.benchmarks import DIV_SOURCE, TOLL_SOURCE, load_div, load_toll
from hypermon.errors import (
    DivergenceError,
    DomainError,
    EvalError,
    ParseError,
    PreconditionError,
    StaticError,
)
from hypermon.minilang import (
    Interval,
    ensures_holds,
    eval_method,
    input_domain,
    int_div,
    int_mod,
    parse_program,
)

# Verbatim transcription of the toll program, without harness domain config.
TOLL_PLAIN = """\
class Toll {
  int rate(int hour, int passengers) {
    int r;                                     // standard rates:
    if (hour >= 9 && hour <= 17) { r = 90; }   //  - daytime
    else                         { r = 70; }   //  - nighttime
    if (passengers > 2) { r = r - (r / 5); }   // carpool: 20%
    return r;
  }
  int max(int x, int y) {
    if (x > y) { return x; } else { return y; }
  }
  int fee(int t1, int t2, int t3, int p) {
    int r1 = rate(t1, p);           // rates at each toll station
    int r2 = rate(t2, p);
    int r3 = rate(t3, p);
    int f1 = max(r1, r2) * 4;       // fees per road section
    int f2 = max(r2, r3) * 7;
    return f1 + f2;                 // total fee
  }
}
"""


class TestParse:
    def test_toll_program_structure(self):
        program = parse_program(TOLL_PLAIN)
        assert set(program.methods) == {"rate", "max", "fee"}
        assert program.methods["fee"].arity == 4
        assert program.methods["rate"].arity == 2

    def test_div_program_annotations(self):
        program = parse_program(DIV_SOURCE)
        pos_div = program.methods["posDiv"]
        assert pos_div.requires is not None
        assert pos_div.ensures is not None
        loop = pos_div.body.stmts[1]
        assert loop.annotation.invariant is not None
        assert loop.annotation.variant is not None

    def test_garbage_rejected(self):
        with pytest.raises(ParseError):
            parse_program("int f( { ")

    def test_unresolved_variable(self):
        with pytest.raises(StaticError, match="undeclared"):
            parse_program("class C { int f(int x) { return y; } }")

    def test_unresolved_call(self):
        with pytest.raises(StaticError, match="undefined method"):
            parse_program("class C { int f(int x) { return g(x); } }")

    def test_recursion_rejected(self):
        src = """
        class C {
          int f(int x) { return g(x); }
          int g(int x) { return f(x); }
        }
        """
        with pytest.raises(StaticError, match="recursive"):
            parse_program(src)

    def test_self_recursion_rejected(self):
        with pytest.raises(StaticError, match="recursive"):
            parse_program("class C { int f(int x) { return f(x); } }")

    def test_missing_return_rejected(self):
        with pytest.raises(StaticError, match="without a return"):
            parse_program("class C { int f(int x) { int y = x; } }")

    def test_unreachable_code_rejected(self):
        with pytest.raises(StaticError, match="unreachable"):
            parse_program("class C { int f(int x) { return x; return x; } }")

    def test_invariant_scope_checked(self):
        src = """
        class C {
          int f(int x) {
            //@ maintaining nosuch > 0;
            while (x > 0) { x = x - 1; }
            return x;
          }
        }
        """
        with pytest.raises(StaticError, match="out-of-scope"):
            parse_program(src)

    def test_result_only_in_ensures(self):
        with pytest.raises(StaticError):
            parse_program("class C { //@ requires \\result > 0;\n int f(int x) { return x; } }")

    def test_empty_declared_range_rejected(self):
        src = "class C { //@ domain x in [5, 1];\n int f(int x) { return x; } }"
        with pytest.raises(StaticError, match="empty declared range"):
            parse_program(src)


class TestEval:
    def test_rate_daytime_single(self):
        assert eval_method(load_toll(), "rate", (10, 1)) == 90

    def test_fee_reference_row(self):
        assert eval_method(load_toll(), "fee", (20, 22, 1, 1)) == 770

    def test_pos_div(self):
        assert eval_method(load_div(), "posDiv", (7, 2)) == 3

    def test_all_reference_rows(self):
        program = load_toll()
        rows = [
            ((20, 22, 1, 1), 770),
            ((2, 2, 3, 5), 616),
            ((9, 10, 10, 4), 792),
            ((23, 0, 2, 5), 616),
            ((10, 11, 14, 1), 990),
            ((8, 10, 11, 1), 990),
        ]
        for args, expected in rows:
            assert eval_method(program, "fee", args) == expected

    def test_rate_output_range(self):
        program = load_toll()
        outputs = {
            eval_method(program, "rate", (h, p))
            for h in range(24)
            for p in range(1, 9)
        }
        assert outputs == {56, 70, 72, 90}

    def test_determinism(self):
        program = load_toll()
        rng = random.Random(7)
        for _ in range(50):
            args = (rng.randrange(24), rng.randrange(24), rng.randrange(24), rng.randrange(1, 9))
            assert eval_method(program, "fee", args) == eval_method(program, "fee", args)

    def test_requires_violation(self):
        with pytest.raises(PreconditionError):
            eval_method(load_div(), "posDiv", (-1, 2))
        with pytest.raises(PreconditionError):
            eval_method(load_div(), "posDiv", (4, 0))

    def test_division_by_zero(self):
        program = parse_program("class C { int f(int x, int y) { return x / y; } }")
        with pytest.raises(EvalError, match="division by zero"):
            eval_method(program, "f", (1, 0))

    def test_divergence_bounded_by_fuel(self):
        src = "class C { int f(int x) { while (x > 0) { x = x + 1; } return x; } }"
        with pytest.raises(DivergenceError):
            eval_method(parse_program(src), "f", (1,), fuel=10_000)

    def test_truncating_division(self):
        assert int_div(7, 2) == 3
        assert int_div(-7, 2) == -3
        assert int_div(7, -2) == -3
        assert int_div(-7, -2) == 3
        assert int_mod(-7, 2) == -1
        assert int_mod(7, -2) == 1

    def test_pos_div_ensures_over_domain_box(self):
        program = load_div()
        rng = random.Random(11)
        for _ in range(200):
            x, y = rng.randrange(0, 120), rng.randrange(1, 15)
            result = eval_method(program, "posDiv", (x, y))
            assert ensures_holds(program, "posDiv", (x, y), result)
            assert result == x // y  # truncated == floor when both nonnegative


class TestInputDomain:
    def test_requires_intervals(self):
        program = load_div()
        domains = input_domain(program.methods["posDiv"])
        assert domains == [Interval(0, None), Interval(1, None)]
        assert not domains[0].bounded

    def test_declared_ranges(self):
        program = parse_program(TOLL_SOURCE)
        domains = input_domain(program.methods["fee"])
        assert domains == [Interval(0, 23)] * 3 + [Interval(1, 8)]

    def test_no_annotations_means_unbounded(self):
        program = parse_program(TOLL_PLAIN)
        domains = input_domain(program.methods["rate"])
        assert all(not d.bounded for d in domains)

    def test_non_interval_requires_refused(self):
        src = """
        class C {
          //@ requires x > y;
          int f(int x, int y) { return x; }
        }
        """
        program = parse_program(src)
        with pytest.raises(DomainError, match="interval"):
            input_domain(program.methods["f"])

    def test_override_intersection(self):
        program = parse_program(TOLL_PLAIN)
        domains = input_domain(
            program.methods["rate"],
            overrides={"hour": Interval(0, 23), "passengers": Interval(1, 8)},
        )
        assert domains == [Interval(0, 23), Interval(1, 8)]
