"""Instance files, solver registry, verification suites and benchmarks."""
from .bench import BenchRow, bench
from .instances import KINDS, InstanceFile, UsageError, generate, load, parse, save, serialize, to_domain
from .solvers import SOLVERS, RunReport, run, solvers_for
from .verify import SUITES, VerifyResult, check_instance, replay, verify

__all__ = [
    "KINDS",
    "SOLVERS",
    "SUITES",
    "BenchRow",
    "InstanceFile",
    "RunReport",
    "UsageError",
    "VerifyResult",
    "bench",
    "check_instance",
    "generate",
    "load",
    "parse",
    "replay",
    "run",
    "save",
    "serialize",
    "solvers_for",
    "to_domain",
    "verify",
]
