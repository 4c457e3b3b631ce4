"""Length-synchronous beam search over a step decoder.

The decoder exposes batched steps over k candidates; an optional constraint
object supplies per-candidate legality masks, consumes chosen tokens, and
may kill a candidate after a token (used for prefix-execution pruning).
Finished candidates (EOS) leave the beam and accumulate into the result
list, which is returned ranked by total log-probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Protocol

import numpy as np


class StepDecoder(Protocol):
    bos: int

    def start(self) -> Any: ...

    def step(self, prev: np.ndarray, states: Any) -> tuple[np.ndarray, Any]:
        """prev: (k,) token ids; returns ((k, V) log-probs, new states)."""

    def reindex(self, states: Any, idx: np.ndarray) -> Any: ...


class Constraint(Protocol):
    def initial(self) -> Any: ...

    def mask(self, meta: Any) -> Optional[np.ndarray]:
        """(V,) legality mask for the next token, or None for no restriction."""

    def advance(self, meta: Any, token: int) -> tuple[Any, bool]:
        """Consume a token; returns (new meta, alive)."""


@dataclass(frozen=True)
class Candidate:
    tokens: tuple[int, ...]
    score: float
    meta: Any = None


@dataclass(frozen=True)
class BeamResult:
    finished: list[Candidate]  # ranked by score, best first
    expansions: int  # total token expansions considered


def beam_search(
    decoder: StepDecoder,
    k: int,
    eos_id: int,
    max_len: int,
    constraint: Constraint | None = None,
    keep_unfinished: bool = False,
) -> BeamResult:
    if k < 1:
        raise ValueError("beam width must be >= 1")
    states = decoder.start()
    live: list[Candidate] = [Candidate((), 0.0, constraint.initial() if constraint else None)]
    finished: list[Candidate] = []
    expansions = 0

    for _ in range(max_len):
        if not live:
            break
        prev = np.array([c.tokens[-1] if c.tokens else decoder.bos for c in live], dtype=np.int64)
        logprobs, states = decoder.step(prev, states)
        V = logprobs.shape[1]

        scores = logprobs + np.array([c.score for c in live])[:, None]
        if constraint is not None:
            for i, c in enumerate(live):
                m = constraint.mask(c.meta)
                if m is not None:
                    scores[i, ~m] = -np.inf

        flat = scores.reshape(-1)
        order = np.argsort(-flat, kind="stable")
        next_live: list[Candidate] = []
        next_rows: list[int] = []
        slots = 0  # finished and live candidates both occupy beam slots
        for pos in order:
            if flat[pos] == -np.inf or slots >= k:
                break
            i, tok = divmod(int(pos), V)
            cand = live[i]
            expansions += 1
            if tok == eos_id:
                finished.append(Candidate(cand.tokens + (tok,), float(flat[pos]), cand.meta))
                slots += 1
                continue
            meta = None
            if constraint is not None:
                meta, alive = constraint.advance(cand.meta, tok)
                if not alive:
                    continue  # pruned: frees the slot
            next_live.append(Candidate(cand.tokens + (tok,), float(flat[pos]), meta))
            next_rows.append(i)
            slots += 1
        live = next_live
        if live:
            states = decoder.reindex(states, np.array(next_rows, dtype=np.int64))

    if keep_unfinished:
        finished.extend(live)  # length-capped candidates count as complete
    finished.sort(key=lambda c: -c.score)
    return BeamResult(finished, expansions)
