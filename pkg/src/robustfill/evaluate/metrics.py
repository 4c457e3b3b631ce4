"""Core metrics: Levenshtein distance, character edit rate, consistency, generalization."""

from __future__ import annotations

from typing import Iterable, Sequence

from ..dsl import EvalError, Program, eval_program
from ..strings import edit_distance

__all__ = [
    "edit_distance",
    "character_error_rate",
    "program_cer",
    "consistency",
    "generalization",
]


def character_error_rate(predictions: Sequence[str], references: Sequence[str]) -> float:
    """Total edit distance over total reference length (inf when references are empty)."""
    total_ref = sum(len(r) for r in references)
    total_dist = sum(edit_distance(p, r) for p, r in zip(predictions, references))
    if total_ref == 0:
        return float("inf") if total_dist else 0.0
    return total_dist / total_ref


def program_cer(p: Program, pairs: Iterable[tuple[str, str]]) -> float:
    """CER of a program's outputs against reference outputs; inf if any input errors."""
    preds, refs = [], []
    for inp, out in pairs:
        try:
            preds.append(eval_program(p, inp))
        except EvalError:
            return float("inf")
        refs.append(out)
    return character_error_rate(preds, refs)


def consistency(p: Program, observed: Iterable[tuple[str, str]]) -> bool:
    """True iff the program reproduces every observed pair exactly (vacuously true when empty)."""
    for inp, out in observed:
        try:
            if eval_program(p, inp) != out:
                return False
        except EvalError:
            return False
    return True


def generalization(outputs: Sequence[str | None], assessment: Sequence[tuple[str, str]]) -> bool:
    """True iff every predicted assessment output matches its reference exactly."""
    if len(outputs) != len(assessment):
        raise ValueError(f"{len(outputs)} predictions for {len(assessment)} assessment pairs")
    return all(pred == out for pred, (_, out) in zip(outputs, assessment))
