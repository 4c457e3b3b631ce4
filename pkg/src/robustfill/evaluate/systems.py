"""Adapters exposing the synthesizer and inducer as evaluation systems."""

from __future__ import annotations

from ..dsl import Vocabulary
from ..gen import Instance
from ..nn.models import SequenceModel
from ..search import InductionOptions, SynthesisOptions, induce, synthesize
from .report import Prediction


class SynthesisSystem:
    def __init__(self, model: SequenceModel, vocab: Vocabulary, options: SynthesisOptions | None = None):
        self.model = model
        self.vocab = vocab
        self.options = options or SynthesisOptions()

    def __call__(self, inst: Instance) -> Prediction:
        result = synthesize(
            self.model,
            self.vocab,
            list(inst.observed),
            unpaired_inputs=[i for i, _ in inst.assessment],
            options=self.options,
        )
        return Prediction(
            outputs=result.outputs,
            consistent=result.consistent,
            program_text=result.program_text,
        )


class InductionSystem:
    def __init__(self, model: SequenceModel, options: InductionOptions | None = None):
        self.model = model
        self.options = options or InductionOptions()

    def __call__(self, inst: Instance) -> Prediction:
        outputs = induce(self.model, list(inst.observed), [i for i, _ in inst.assessment], self.options)
        return Prediction(outputs=list(outputs), consistent=None)
