"""Gray-box runtime verification of data minimality, plus a monitorability
classifier for two-trace invariance hyperproperties.

The package monitors programs written in a small annotated integer
language for violations of distributed and monolithic data minimality.
Verdicts come from a three-valued oracle that decides whether two values
of one input position can be told apart by any completion of the other
inputs, answered either by exhaustive evaluation, by an external SMT
solver over a symbolic-execution characterization, or by finite
evaluation of that characterization.
"""

from .traces import IoPair, Observation, Verdict3, ingest_stream, parse_csv_line, serialize_pair

__all__ = [
    "IoPair",
    "Observation",
    "Verdict3",
    "ingest_stream",
    "parse_csv_line",
    "serialize_pair",
]

__version__ = "0.1.0"
