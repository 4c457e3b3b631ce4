"""Program synthesis decoding: grammar-masked beam search, prefix-execution
pruning, and consistency/CER-based candidate selection.

The beam never expands ungrammatical token sequences (legality masks come
from the tokenizer's grammar machine). With ``dp`` enabled, every time a
candidate completes an expression the expression is executed on each
observed input and appended to the candidate's cached partial outputs; a
candidate whose partial output is not a prefix of the corresponding
observed output can never become consistent (evaluation is concatenative),
so it is removed from the beam.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..dsl import (
    EvalError,
    Program,
    ProgramSyntaxError,
    Vocabulary,
    detokenize_program,
    eval_expression,
    eval_program,
    format_program,
)
from ..evaluate.metrics import consistency, program_cer
from ..nn.models import DecodeSession, SequenceModel
from .beam import BeamResult, Candidate, beam_search


def dp_prefix_check(partial: Program, observed: list[tuple[str, str]]) -> bool:
    """Keep iff the partial program evaluates on every observed input to a
    prefix of the observed output (vacuously true on no examples)."""
    for inp, out in observed:
        try:
            got = eval_program(partial, inp)
        except EvalError:
            return False
        if not out.startswith(got):
            return False
    return True


@dataclass(frozen=True)
class _GrammarMeta:
    state: tuple
    exec_outputs: tuple[str, ...] | None  # partial outputs per observed example


class GrammarConstraint:
    """Grammar legality masks plus optional prefix-execution pruning."""

    def __init__(self, vocab: Vocabulary, observed: list[tuple[str, str]], dp: bool):
        self.vocab = vocab
        self.observed = observed
        self.dp = dp

    def initial(self) -> _GrammarMeta:
        return _GrammarMeta(self.vocab.initial_state(), ("",) * len(self.observed) if self.dp else None)

    def mask(self, meta: _GrammarMeta) -> np.ndarray:
        return self.vocab.allowed_mask(meta.state)

    def advance(self, meta: _GrammarMeta, token: int) -> tuple[_GrammarMeta, bool]:
        state, completed = self.vocab.advance(meta.state, token)
        exec_outputs = meta.exec_outputs
        if completed is not None and self.dp:
            new_outputs = []
            for (inp, out), sofar in zip(self.observed, exec_outputs):
                try:
                    piece = eval_expression(completed, inp)
                except EvalError:
                    return _GrammarMeta(state, None), False
                grown = sofar + piece
                if not out.startswith(grown):
                    return _GrammarMeta(state, None), False
                new_outputs.append(grown)
            exec_outputs = tuple(new_outputs)
        return _GrammarMeta(state, exec_outputs), True


class SessionDecoder:
    """Adapts a model DecodeSession to the beam's StepDecoder protocol."""

    def __init__(self, session: DecodeSession):
        self.session = session
        self.bos = session.bos

    def start(self):
        h, c = self.session.initial_state()
        return h, c

    def step(self, prev: np.ndarray, states):
        h, c = states
        logprobs, h2, c2 = self.session.step(prev, h, c)
        return logprobs, (h2, c2)

    def reindex(self, states, idx: np.ndarray):
        h, c = states
        n = self.session.n
        rows = (idx[:, None] * n + np.arange(n)[None, :]).reshape(-1)
        return h[rows], c[rows]


@dataclass(frozen=True)
class SynthesisOptions:
    beam: int = 10
    dp: bool | None = None  # None: prefix pruning iff metric == "exact"
    metric: str = "exact"  # exact | cer
    max_tokens: int | None = None

    def resolved_dp(self) -> bool:
        if self.dp is None:
            return self.metric == "exact"
        return self.dp


@dataclass
class SynthesisResult:
    program: Program | None
    program_text: str | None
    consistent: bool
    score: float | None
    cer: float | None
    candidates_tried: int
    selection_metric: str
    fills: list[dict] = field(default_factory=list)  # aligned with unpaired inputs
    latency_ms: float = 0.0

    @property
    def outputs(self) -> list[str | None]:
        return [f["output"] for f in self.fills]


def beam_search_programs(
    model: SequenceModel,
    vocab: Vocabulary,
    observed: list[tuple[str, str]],
    k: int,
    dp: bool,
    max_tokens: int | None = None,
) -> BeamResult:
    """Ranked complete token sequences (scores are total log-probabilities)."""
    session = model.start_decode(observed)
    constraint = GrammarConstraint(vocab, observed, dp)
    cap = max_tokens or (vocab.config.max_expressions * 8 + 1)
    return beam_search(SessionDecoder(session), k, vocab.eos_id, cap, constraint)


def select_program(
    candidates: list[Candidate],
    observed: list[tuple[str, str]],
    vocab: Vocabulary,
    metric: str = "exact",
) -> SynthesisResult:
    """exact: highest-scoring candidate consistent with every observed pair.
    cer: candidate minimizing total character edit rate against the observed
    outputs (ties keep model-score order); inconsistent best-effort results
    are returned with ``consistent=False``."""
    tried = 0
    best: tuple[float, Candidate, Program] | None = None
    for cand in candidates:
        try:
            prog = detokenize_program(cand.tokens, vocab)
        except ProgramSyntaxError:
            continue
        tried += 1
        if metric == "exact":
            if consistency(prog, observed):
                assert all(eval_program(prog, i) == o for i, o in observed)
                return SynthesisResult(
                    prog, format_program(prog), True, cand.score, 0.0 if observed else None,
                    tried, metric,
                )
        else:
            cer = program_cer(prog, observed)
            if best is None or cer < best[0]:
                best = (cer, cand, prog)
    if metric == "cer" and best is not None and best[0] != float("inf"):
        cer, cand, prog = best
        cons = consistency(prog, observed)
        return SynthesisResult(prog, format_program(prog), cons, cand.score, cer, tried, metric)
    return SynthesisResult(None, None, False, None, None, tried, metric)


def synthesize(
    model: SequenceModel,
    vocab: Vocabulary,
    observed: list[tuple[str, str]],
    unpaired_inputs: list[str] | None = None,
    options: SynthesisOptions | None = None,
) -> SynthesisResult:
    """Beam-decode programs, select one, and apply it to the unpaired inputs."""
    opts = options or SynthesisOptions()
    t0 = time.perf_counter()
    result = beam_search_programs(model, vocab, observed, opts.beam, opts.resolved_dp(), opts.max_tokens)
    selected = select_program(result.finished, observed, vocab, opts.metric)
    selected.fills = apply_program(selected.program, unpaired_inputs or [])
    selected.latency_ms = (time.perf_counter() - t0) * 1000.0
    return selected


def apply_program(program: Program | None, inputs: list[str]) -> list[dict]:
    fills = []
    for inp in inputs:
        if program is None:
            fills.append({"input": inp, "output": None, "error": "no program"})
            continue
        try:
            fills.append({"input": inp, "output": eval_program(program, inp), "error": None})
        except EvalError as err:
            fills.append({"input": inp, "output": None, "error": str(err)})
    return fills
