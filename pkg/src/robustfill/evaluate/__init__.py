"""Metrics and evaluation harnesses."""

from .metrics import character_error_rate, consistency, edit_distance, generalization, program_cer
from .report import MetricsReport, Prediction, ReportRow, evaluate_corpus, noise_sweep

__all__ = [
    "character_error_rate",
    "consistency",
    "edit_distance",
    "generalization",
    "program_cer",
    "MetricsReport",
    "Prediction",
    "ReportRow",
    "evaluate_corpus",
    "noise_sweep",
    "InductionSystem",
    "SynthesisSystem",
]


def __getattr__(name):
    # the system adapters sit above the search layer; import lazily so the
    # search package can use the metric functions without a cycle
    if name in ("InductionSystem", "SynthesisSystem"):
        from . import systems

        return getattr(systems, name)
    raise AttributeError(name)
