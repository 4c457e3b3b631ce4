"""Decoding: beam search, program synthesis with pruning, output induction."""

from .beam import BeamResult, Candidate, beam_search
from .induction import InductionOptions, induce, induce_one
from .synthesis import (
    GrammarConstraint,
    SessionDecoder,
    SynthesisOptions,
    SynthesisResult,
    apply_program,
    beam_search_programs,
    dp_prefix_check,
    select_program,
    synthesize,
)

__all__ = [
    "BeamResult",
    "Candidate",
    "beam_search",
    "InductionOptions",
    "induce",
    "induce_one",
    "GrammarConstraint",
    "SessionDecoder",
    "SynthesisOptions",
    "SynthesisResult",
    "apply_program",
    "beam_search_programs",
    "dp_prefix_check",
    "select_program",
    "synthesize",
]
