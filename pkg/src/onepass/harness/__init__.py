"""Stream files, error injection, seeded experiments, reports and figures."""

from .corrupt import CorruptionError, corrupt_random, corrupt_worst_case
from .experiment import ExperimentConfig, make_code, run_bench, run_experiment
from .report import RunReport, format_report, parse_report
from .streamfile import SinglePassError, StreamFormatError, StreamReader, dumps, loads, read_word, write_stream

__all__ = [
    "CorruptionError", "corrupt_random", "corrupt_worst_case",
    "ExperimentConfig", "make_code", "run_bench", "run_experiment",
    "RunReport", "format_report", "parse_report",
    "SinglePassError", "StreamFormatError", "StreamReader", "dumps", "loads", "read_word", "write_stream",
]
