"""Command-line front end.

Subcommands:

* monitor  -- ingest CSV traces (file or stdin) against a program method,
  print a verdict after every accepted line; exit 0 when the final
  verdict is UNKNOWN and 2 when it is BOTTOM.
* classify -- monitorability of a two-trace invariance predicate.
* gen      -- emit benchmark trace sets (kinds K1/K2/K3) as CSV.
* bench    -- verdict/time table over generated instances.
* symexec  -- dump a method's symbolic characterization.

Usage, I/O, and solver-launch problems exit 1.  The SMT solver command
comes from --solver or the HYPERMON_SOLVER environment variable.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import HypermonError, TraceFormatError
from .harness import (
    TraceKind,
    default_benchmark_programs,
    enumerate_graph,
    gen_traces,
    run_benchmark,
    traces_to_csv,
)
from .hypertheory import classify, parse_predicate, violating_extension
from .minilang import input_domain, parse_domain_spec, parse_program
from .monitor import Monitor, Property, Strategy
from .oracle import Oracle, characterization_script, upgrade_exactness
from .smtlib import resolve_solver_command
from .symexec import symexec_method
from .traces import Verdict3, content_lines, parse_csv_line

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hypermon", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    mon = sub.add_parser("monitor", help="monitor CSV traces for minimality violations")
    mon.add_argument("--program", required=True, help="program source file")
    mon.add_argument("--method", required=True, help="monitored method name")
    mon.add_argument("--property", choices=["ddm", "mdm"], default="ddm")
    mon.add_argument("--strategy", choices=["eager", "lazy"], default="eager")
    mon.add_argument("--traces", required=True, help="CSV file path, or - for stdin")
    mon.add_argument("--backend", choices=["auto", "brute", "smt", "char"], default="auto")
    mon.add_argument("--solver", help="external SMT solver command")
    mon.add_argument("--timeout", type=float, default=5.0, help="solver timeout (s)")
    mon.add_argument("--unroll", type=int, default=0, help="loop unroll depth")
    mon.add_argument("--no-invariants", action="store_true",
                     help="ignore loop invariants (always unroll)")
    mon.add_argument("--domain", action="append", default=[], metavar="NAME=LO:HI",
                     help="override a parameter domain (repeatable)")
    mon.add_argument("--strict", action="store_true",
                     help="abort on malformed or inconsistent traces")
    mon.add_argument("--format", choices=["text", "csv", "json-lines"], default="text")

    cls = sub.add_parser("classify", help="monitorability of a two-trace predicate")
    cls.add_argument("--ap", required=True, help="comma-separated atom names")
    cls.add_argument("--pred", required=True, help="predicate over atoms a@1 / a@2")
    cls.add_argument("--format", choices=["text", "json-lines"], default="text")

    gen = sub.add_parser("gen", help="generate benchmark trace sets as CSV")
    gen.add_argument("--program", required=True)
    gen.add_argument("--method", required=True)
    gen.add_argument("--kind", choices=["k1", "k2", "k3"], default="k1")
    gen.add_argument("--count", type=int, default=100)
    gen.add_argument("--seed", default="0")
    gen.add_argument("--domain", action="append", default=[], metavar="NAME=LO:HI")

    ben = sub.add_parser("bench", help="verdict table over generated trace sets")
    ben.add_argument("--programs", default="t1,t2", help="comma list from: t1,t2")
    ben.add_argument("--kinds", default="k1,k2,k3")
    ben.add_argument("--strategies", default="eager,lazy")
    ben.add_argument("--instances", type=int, default=10)
    ben.add_argument("--count", type=int, default=100)
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--format", choices=["text", "csv"], default="text")
    ben.add_argument("--times", action="store_true",
                     help="include (non-reproducible) time columns in CSV")

    sym = sub.add_parser("symexec", help="dump a method's characterization")
    sym.add_argument("--program", required=True)
    sym.add_argument("--method", required=True)
    sym.add_argument("--unroll", type=int, default=0)
    sym.add_argument("--no-invariants", action="store_true")
    sym.add_argument("--format", choices=["text", "smt2"], default="text")

    return parser


def _load_program(path: str):
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise HypermonError(f"cannot read program {path!r}: {exc}") from None
    return parse_program(source)


def _domains_for(program, method: str, specs: list[str]):
    overrides = dict(parse_domain_spec(s) for s in specs)
    return input_domain(program.method(method), overrides=overrides)


def _trace_lines(source: str):
    if source == "-":
        return sys.stdin
    try:
        return Path(source).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise HypermonError(f"cannot read traces {source!r}: {exc}") from None


def _report_line(fmt: str, lineno: int, verdict: Verdict3, witness) -> str:
    if fmt == "json-lines":
        record = {"line": lineno, "verdict": str(verdict)}
        if witness is not None:
            record["witness"] = str(witness)
        return json.dumps(record, sort_keys=True)
    if fmt == "csv":
        witness_text = str(witness) if witness is not None else ""
        return f'{lineno},{verdict},"{witness_text}"'
    suffix = f" [{witness}]" if witness is not None else ""
    return f"line {lineno}: verdict={verdict}{suffix}"


def cmd_monitor(args) -> int:
    program = _load_program(args.program)
    if args.method not in program.methods:
        raise HypermonError(f"no method {args.method!r} in {args.program}")
    domains = _domains_for(program, args.method, args.domain)
    characterization = None
    if args.backend in ("smt", "char") or (
        args.backend == "auto" and not all(d.bounded for d in domains)
    ):
        characterization = symexec_method(
            program,
            args.method,
            unroll_depth=args.unroll,
            use_invariants=not args.no_invariants,
        )
        if resolve_solver_command(args.solver):
            characterization = upgrade_exactness(
                characterization, args.solver, args.timeout
            )
    oracle = Oracle(
        program=program,
        method=args.method,
        characterization=characterization,
        domains=domains,
        backend=args.backend,
        solver_command=args.solver,
        timeout=args.timeout,
    )
    monitor = Monitor(
        program,
        args.method,
        property=Property(args.property),
        strategy=Strategy(args.strategy),
        oracle=oracle,
        domains=domains,
        strict=args.strict,
    )
    arity = program.method(args.method).arity
    out = sys.stdout
    for lineno, raw in content_lines(_trace_lines(args.traces)):
        try:
            pair = parse_csv_line(raw, arity, lineno)
        except TraceFormatError as exc:
            if args.strict:
                raise
            monitor.diagnostics.append(str(exc))
            print(_report_line(args.format, lineno, monitor.verdict, None), file=out)
            continue
        verdict = monitor.ingest(pair)
        witness = monitor.witness if verdict is Verdict3.BOTTOM else None
        print(_report_line(args.format, lineno, verdict, witness), file=out)
        out.flush()
    if args.format == "json-lines":
        print(json.dumps({"summary": monitor.summary()}), file=out)
    else:
        print(f"# {monitor.summary()}", file=out)
    for diag in monitor.diagnostics:
        print(f"# diagnostic: {diag}", file=sys.stderr)
    return EXIT_VIOLATION if monitor.verdict is Verdict3.BOTTOM else EXIT_OK


def cmd_classify(args) -> int:
    atoms = [a.strip() for a in args.ap.split(",") if a.strip()]
    pred = parse_predicate(args.pred, atoms)
    verdict = classify(pred)
    if args.format == "json-lines":
        record = {
            "classification": verdict.classification.value,
            "reflexive": verdict.reflexive,
            "serial": verdict.serial,
            "evidence": verdict.evidence.value if verdict.evidence else None,
            "falsifying": sorted(verdict.falsifying) if verdict.falsifying else None,
        }
        print(json.dumps(record, sort_keys=True))
    else:
        print(verdict.describe())
        if verdict.falsifying is not None:
            extended = violating_extension(pred, [()])
            (trace,) = extended
            rendered = "".join("{" + ",".join(sorted(v)) + "}" for v in trace)
            print(f"violating extension of the empty trace: {rendered}")
    return EXIT_OK


def cmd_gen(args) -> int:
    program = _load_program(args.program)
    domains = _domains_for(program, args.method, args.domain)
    graph = enumerate_graph(program, args.method, domains)
    kind = TraceKind[args.kind.upper()]
    traces = gen_traces(graph, kind, args.count, seed=args.seed)
    sys.stdout.write(traces_to_csv(traces))
    return EXIT_OK


def cmd_bench(args) -> int:
    wanted = {p.strip().upper() for p in args.programs.split(",") if p.strip()}
    programs = [p for p in default_benchmark_programs() if p.label in wanted]
    if not programs:
        raise HypermonError(f"no benchmark programs match {args.programs!r}")
    kinds = [TraceKind[k.strip().upper()] for k in args.kinds.split(",") if k.strip()]
    strategies = [
        Strategy(s.strip().lower()) for s in args.strategies.split(",") if s.strip()
    ]
    table = run_benchmark(
        programs,
        kinds=kinds,
        strategies=strategies,
        instances=args.instances,
        count=args.count,
        seed=args.seed,
    )
    if args.format == "csv":
        sys.stdout.write(table.csv(include_times=args.times))
    else:
        print(table.text())
    return EXIT_OK


def cmd_symexec(args) -> int:
    program = _load_program(args.program)
    char = symexec_method(
        program,
        args.method,
        unroll_depth=args.unroll,
        use_invariants=not args.no_invariants,
    )
    if args.format == "smt2":
        sys.stdout.write(characterization_script(char))
    else:
        print(char.pretty())
    return EXIT_OK


_COMMANDS = {
    "monitor": cmd_monitor,
    "classify": cmd_classify,
    "gen": cmd_gen,
    "bench": cmd_bench,
    "symexec": cmd_symexec,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"hypermon: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except HypermonError as exc:
        print(f"hypermon: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
