import itertools

import pytest
from hypothesis import given, strategies as st

from hypermon.errors import TraceFormatError
from hypermon.traces import (
    IoPair,
    Observation,
    Verdict3,
    ingest_stream,
    parse_csv_line,
    serialize_pair,
)


class TestParseCsvLine:
    def test_raw_trace_row(self):
        pair = parse_csv_line("20, 22, 1,  1, 770", 4)
        assert pair == IoPair((20, 22, 1, 1), 770)

    def test_minimized_trace_row(self):
        pair = parse_csv_line("0, 0, 0, 1, 770", 4)
        assert pair == IoPair((0, 0, 0, 1), 770)

    def test_arity_mismatch(self):
        with pytest.raises(TraceFormatError, match="expected 4 fields"):
            parse_csv_line("5,7", 3)

    def test_non_integer_field(self):
        with pytest.raises(TraceFormatError, match="non-integer"):
            parse_csv_line("1, x, 3", 2)

    def test_error_names_line_number(self):
        with pytest.raises(TraceFormatError, match="line 7"):
            parse_csv_line("1,2", 3, lineno=7)

    def test_negative_values(self):
        assert parse_csv_line("-3, +4, -5", 2) == IoPair((-3, 4), -5)

    @given(
        st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=6),
        st.integers(-10**6, 10**6),
    )
    def test_serialize_roundtrip(self, inputs, output):
        pair = IoPair(tuple(inputs), output)
        assert parse_csv_line(serialize_pair(pair), pair.arity) == pair

    def test_parse_normalizes_whitespace_only(self):
        line = "  20 ,22,   1, 1 ,770"
        pair = parse_csv_line(line, 4)
        assert serialize_pair(pair) == "20, 22, 1, 1, 770"


class TestIngestStream:
    LINES = [
        "20, 22, 1,  1, 770",
        "2 , 2,  3,  5, 616",
        "",
        "# a comment",
        "9 , 10, 10, 4, 792",
    ]

    def test_pass_through_in_order(self):
        pairs = list(ingest_stream(self.LINES, 4))
        assert [p.inputs for p in pairs] == [(20, 22, 1, 1), (2, 2, 3, 5), (9, 10, 10, 4)]

    def test_empty_input(self):
        assert list(ingest_stream([], 4)) == []

    def test_comments_and_blanks_skipped(self):
        assert len(list(ingest_stream(["# only", "", "   "], 4))) == 0

    def test_strict_propagates_with_lineno(self):
        with pytest.raises(TraceFormatError, match="line 2"):
            list(ingest_stream(["1, 2, 3", "1, 2"], 2))

    def test_non_strict_skips_bad_lines(self):
        pairs = list(ingest_stream(["1, 2, 3", "boom", "4, 5, 6"], 2, strict=False))
        assert len(pairs) == 2


class TestObservation:
    def test_duplicate_lines_are_deduplicated(self):
        obs = Observation()
        assert obs.add(IoPair((1, 2), 3)) is True
        assert obs.add(IoPair((1, 2), 3)) is False
        assert len(obs) == 1

    def test_insertion_order_retained(self):
        obs = Observation([IoPair((2,), 2), IoPair((1,), 1)])
        assert [p.inputs for p in obs] == [(2,), (1,)]

    @given(st.permutations([((0, 0), 0), ((0, 1), 0), ((1, 0), 1), ((0, 0), 0)]))
    def test_order_and_duplicates_do_not_matter(self, rows):
        reference = Observation(IoPair(i, o) for i, o in rows)
        for perm in itertools.permutations(rows):
            assert Observation(IoPair(i, o) for i, o in perm) == reference


class TestVerdict:
    def test_symbols(self):
        assert Verdict3.TOP.symbol == "⊤"
        assert Verdict3.BOTTOM.symbol == "⊥"
        assert Verdict3.UNKNOWN.symbol == "?"

    def test_str_matches_report_format(self):
        assert str(Verdict3.BOTTOM) == "BOTTOM"
