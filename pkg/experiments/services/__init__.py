from .acceptance import convergence_checks, enforce, mc_checks, simulate_checks, tail_ratio_checks, verify_checks
from .loader import load_spec, read_spec_document, spec_diagnostics
from .runner import ExperimentRunner, RunResult, VerifyOutcome
from .tables import format_table, render_report

__all__ = [
    "ExperimentRunner",
    "RunResult",
    "VerifyOutcome",
    "load_spec",
    "read_spec_document",
    "spec_diagnostics",
    "simulate_checks",
    "verify_checks",
    "convergence_checks",
    "mc_checks",
    "tail_ratio_checks",
    "enforce",
    "format_table",
    "render_report",
]
