"""Output induction: decode the unpaired input's output character-by-character.

Each unpaired input is decoded independently (conditioned on all observed
examples) with a small beam; there is no program and nothing to execute, so
the highest-scoring complete string is the answer and larger beams bring no
re-ranking signal.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..nn.models import CHAR_EOS, SequenceModel
from .beam import beam_search
from .synthesis import SessionDecoder

MAX_OUTPUT_CHARS = 100


@dataclass(frozen=True)
class InductionOptions:
    beam: int = 3
    max_chars: int = MAX_OUTPUT_CHARS


def _ids_to_string(tokens: tuple[int, ...]) -> str:
    return "".join(chr(t + 0x20) for t in tokens if t != CHAR_EOS)


def induce_one(model: SequenceModel, observed: list[tuple[str, str]], unpaired_input: str,
               options: InductionOptions | None = None) -> str:
    opts = options or InductionOptions()
    session = model.start_decode(observed, unpaired_input=unpaired_input)
    decoder = SessionDecoder(session)
    # +1 so a string of max_chars real characters can still close with EOS;
    # candidates still running at the cap count as complete (truncated).
    result = beam_search(decoder, opts.beam, CHAR_EOS, opts.max_chars + 1, keep_unfinished=True)
    if result.finished:
        return _ids_to_string(result.finished[0].tokens)[: opts.max_chars]
    return ""


def induce(model: SequenceModel, observed: list[tuple[str, str]], unpaired_inputs: list[str],
           options: InductionOptions | None = None) -> list[str]:
    """Decode every unpaired input independently."""
    return [induce_one(model, observed, inp, options) for inp in unpaired_inputs]
