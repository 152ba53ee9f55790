import itertools

import pytest

from hypermon.benchmarks import load_toll, load_toll2
from hypermon.errors import DomainError
from hypermon.harness import (
    MinimizerKind,
    TraceKind,
    build_minimizer,
    default_benchmark_programs,
    enumerate_graph,
    gen_traces,
    is_ddm,
    is_mdm,
    position_kernel,
    run_benchmark,
    traces_to_csv,
)
from hypermon.minilang import Interval, input_domain, parse_program
from hypermon.monitor import Strategy
from hypermon.traces import Verdict3

PROJ_SRC = """
class P {
  //@ domain x in [0, 1], y in [0, 1];
  int first(int x, int y) { return x; }
}
"""

MAX_SRC = """
class M {
  //@ domain x in [0, 3], y in [0, 3];
  int bigger(int x, int y) { if (x > y) { return x; } else { return y; } }
}
"""

NIGHT_HOURS = sorted(set(range(24)) - set(range(9, 18)))
DAY_HOURS = list(range(9, 18))


def rate_graph():
    program = load_toll()
    return enumerate_graph(program, "rate", input_domain(program.method("rate")))


def fee_graph():
    program = load_toll()
    return enumerate_graph(program, "fee", input_domain(program.method("fee")))


class TestEnumerateGraph:
    def test_rate_has_192_entries_with_known_output_set(self):
        graph = rate_graph()
        assert len(graph) == 24 * 8
        assert graph.outputs() == {56, 70, 72, 90}

    def test_projection_graph(self):
        program = parse_program(PROJ_SRC)
        graph = enumerate_graph(program, "first", input_domain(program.method("first")))
        assert graph.entries == {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 1}

    def test_unary_identity(self):
        program = parse_program(
            "class I { //@ domain x in [0, 2];\n int id(int x) { return x; } }"
        )
        graph = enumerate_graph(program, "id", input_domain(program.method("id")))
        assert len(graph) == 3

    def test_bound_refusal(self):
        program = parse_program(PROJ_SRC)
        with pytest.raises(DomainError, match="bound"):
            enumerate_graph(program, "first", [Interval(0, 10**5), Interval(0, 10**5)])


class TestPositionKernel:
    def test_rate_hour_classes_split_day_and_night(self):
        graph = rate_graph()
        assert position_kernel(graph, 1) == [NIGHT_HOURS, DAY_HOURS]

    def test_rate_passenger_classes_split_at_carpool_threshold(self):
        graph = rate_graph()
        assert position_kernel(graph, 2) == [[1, 2], [3, 4, 5, 6, 7, 8]]

    def test_ignored_argument_collapses_to_one_class(self):
        program = parse_program(PROJ_SRC)
        graph = enumerate_graph(program, "first", input_domain(program.method("first")))
        assert position_kernel(graph, 2) == [[0, 1]]


class TestMinimizers:
    def test_distributed_fee_minimizer_maps_hours_to_0_and_9(self):
        graph = fee_graph()
        mini = build_minimizer(graph, MinimizerKind.DISTRIBUTED)
        for pos in range(3):
            mapping = mini.position_maps[pos]
            assert all(mapping[h] == 0 for h in NIGHT_HOURS)
            assert all(mapping[h] == 9 for h in DAY_HOURS)
        assert mini.position_maps[3] == {1: 1, 2: 1, **{p: 3 for p in range(3, 9)}}

    def test_monolithic_minimizer_is_identity_iff_injective(self):
        program = parse_program(
            "class E { //@ domain x in [0, 2], y in [0, 2];\n"
            " int enc(int x, int y) { return 3 * x + y; } }"
        )
        graph = enumerate_graph(program, "enc", input_domain(program.method("enc")))
        assert is_mdm(graph)
        mini = build_minimizer(graph, MinimizerKind.MONOLITHIC)
        assert all(mini.apply(t) == t for t in graph.entries)

    @pytest.mark.parametrize("kind", list(MinimizerKind))
    def test_minimizer_laws_on_rate(self, kind):
        graph = rate_graph()
        mini = build_minimizer(graph, kind)
        for t in graph.entries:
            once = mini.apply(t)
            assert graph.entries[once] == graph.entries[t]  # behavior preserved
            assert mini.apply(once) == once  # idempotent

    @pytest.mark.parametrize("kind", list(MinimizerKind))
    def test_minimizer_laws_on_two_station_fee(self, kind):
        bp = next(p for p in default_benchmark_programs() if p.label == "T2")
        graph = enumerate_graph(bp.program, bp.method, bp.domains)
        mini = build_minimizer(graph, kind)
        for t in graph.entries:
            once = mini.apply(t)
            assert graph.entries[once] == graph.entries[t]
            assert mini.apply(once) == once


class TestIsDdm:
    def test_max_is_distributed_minimal(self):
        program = parse_program(MAX_SRC)
        graph = enumerate_graph(program, "bigger", input_domain(program.method("bigger")))
        assert is_ddm(graph) is True

    def test_projection_is_not(self):
        program = parse_program(PROJ_SRC)
        graph = enumerate_graph(program, "first", input_domain(program.method("first")))
        assert is_ddm(graph) is False

    def test_fee_is_not(self):
        assert is_ddm(fee_graph()) is False


class TestGenTraces:
    def test_count_is_exact(self):
        graph = fee_graph()
        assert len(gen_traces(graph, TraceKind.K1, 100, seed=1)) == 100

    def test_deterministic_for_fixed_seed(self):
        graph = fee_graph()
        a = gen_traces(graph, TraceKind.K2, 50, seed=9)
        b = gen_traces(graph, TraceKind.K2, 50, seed=9)
        assert a == b

    def test_distributed_minimized_hours_are_0_or_9(self):
        graph = fee_graph()
        for trace in gen_traces(graph, TraceKind.K2, 200, seed=4):
            assert all(h in (0, 9) for h in trace.inputs[:3])
            assert trace.inputs[3] in (1, 3)

    def test_minimization_preserves_output_multiset(self):
        graph = fee_graph()
        k1 = gen_traces(graph, TraceKind.K1, 150, seed=8)
        k3 = gen_traces(graph, TraceKind.K3, 150, seed=8)
        assert sorted(t.output for t in k1) == sorted(t.output for t in k3)

    def test_csv_serialization_roundtrip(self):
        from hypermon.traces import ingest_stream

        graph = rate_graph()
        traces = gen_traces(graph, TraceKind.K1, 20, seed=2)
        text = traces_to_csv(traces)
        assert list(ingest_stream(text.splitlines(), 2)) == traces


class TestBenchmark:
    def test_two_station_smoke(self):
        bp = [p for p in default_benchmark_programs() if p.label == "T2"]
        table = run_benchmark(bp, instances=2, count=60, seed=5)
        k1_eager = table.cell("T2", TraceKind.K1, Strategy.EAGER)
        assert set(k1_eager.verdicts) == {Verdict3.BOTTOM}
        k2_lazy = table.cell("T2", TraceKind.K2, Strategy.LAZY)
        assert set(k2_lazy.verdicts) == {Verdict3.UNKNOWN}
        csv_text = table.csv()
        assert csv_text == table.csv()  # byte-identical without time columns
        assert "mean_seconds" not in csv_text
        assert "mean_seconds" in table.csv(include_times=True)

    def test_k3_mdm_lazy_never_bottoms(self):
        # monolithically minimized traces map equal outputs to one tuple
        from hypermon.monitor import Monitor, Property

        bp = next(p for p in default_benchmark_programs() if p.label == "T2")
        graph = enumerate_graph(bp.program, bp.method, bp.domains)
        for instance in range(5):
            traces = gen_traces(graph, TraceKind.K3, 100, seed=f"mdm:{instance}")
            monitor = Monitor(
                bp.program, bp.method, property=Property.MDM, strategy=Strategy.LAZY,
                domains=bp.domains,
            )
            assert monitor.ingest_all(traces) is Verdict3.UNKNOWN
