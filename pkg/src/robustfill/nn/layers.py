"""Recurrent layers and attention built on the autodiff primitives.

Conventions: batches are row-major (one row per I/O example); sequences are
padded to the batch maximum with a {0,1} mask, and masked steps carry the
previous state forward, so the state after the last step is every row's own
final state regardless of padding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .autodiff import (
    Tensor,
    add,
    attend,
    concat,
    embedding,
    lstm_cell,
    matmul,
    parameter,
    project_states,
    stack_states,
    where_mask,
)


def init_lstm(params: dict, name: str, input_size: int, hidden: int, rng, dtype) -> None:
    params[f"{name}.W"] = parameter((input_size + hidden, 4 * hidden), rng, dtype=dtype)
    params[f"{name}.b"] = parameter((4 * hidden,), rng, dtype=dtype)


def init_attention(params: dict, name: str, query_size: int, hidden: int, rng, dtype) -> None:
    params[f"{name}.Wq"] = parameter((query_size, hidden), rng, dtype=dtype)
    params[f"{name}.bq"] = parameter((hidden,), rng, dtype=dtype)
    params[f"{name}.Wa"] = parameter((hidden, hidden), rng, dtype=dtype)


def init_linear(params: dict, name: str, in_size: int, out_size: int, rng, dtype) -> None:
    params[f"{name}.W"] = parameter((in_size, out_size), rng, dtype=dtype)
    params[f"{name}.b"] = parameter((out_size,), rng, dtype=dtype)


def linear(params: dict, name: str, x: Tensor) -> Tensor:
    return add(matmul(x, params[f"{name}.W"]), params[f"{name}.b"])


def lstm_step(
    params: dict,
    name: str,
    x: Tensor,
    h_prev: Tensor,
    c_prev: Tensor,
    extra_contexts: tuple[Tensor, ...] = (),
) -> tuple[Tensor, Tensor]:
    """One LSTM step; extra context vectors are concatenated onto the input."""
    pieces = [x, *extra_contexts, h_prev]
    z = add(matmul(concat(pieces, axis=1), params[f"{name}.W"]), params[f"{name}.b"])
    return lstm_cell(z, c_prev)


@dataclass
class AttentionSource:
    """Prepared attention target: values, projected scores, and step mask."""

    values: Tensor  # (B, T, d)
    scores: Tensor  # (B, T, d) = values @ Wa
    mask: np.ndarray  # (B, T)


def prepare_source(params: dict, att_name: str, states: list[Tensor], mask: np.ndarray) -> AttentionSource:
    values = stack_states(states)
    scores = project_states(values, params[f"{att_name}.Wa"])
    return AttentionSource(values, scores, mask)


def attention(params: dict, att_name: str, source: AttentionSource, query_parts: list[Tensor]) -> Tensor:
    """Luong-style general attention; the query is an affine map of the
    concatenated (h_prev, x, ...) pieces."""
    q = add(matmul(concat(query_parts, axis=1), params[f"{att_name}.Wq"]), params[f"{att_name}.bq"])
    return attend(source.values, source.scores, q, source.mask)


def double_attention(
    params: dict,
    name_a: str,
    name_b: str,
    source_a: AttentionSource,
    source_b: AttentionSource,
    h_prev: Tensor,
    x: Tensor,
) -> tuple[Tensor, Tensor]:
    """Chained reads: context A feeds the query for context B."""
    ctx_a = attention(params, name_a, source_a, [h_prev, x])
    ctx_b = attention(params, name_b, source_b, [h_prev, x, ctx_a])
    return ctx_a, ctx_b


def run_lstm(
    params: dict,
    name: str,
    char_emb: Tensor,
    ids: np.ndarray,
    mask: np.ndarray,
    h0: Tensor,
    c0: Tensor,
    attend_source: AttentionSource | None = None,
    att_name: str | None = None,
    reverse: bool = False,
) -> tuple[list[Tensor], Tensor, Tensor]:
    """Run an (optionally attentional, optionally reversed) LSTM over padded ids.

    Returns per-position hidden states (index-aligned with ``ids`` even when
    reversed) plus the final (h, c).
    """
    T = ids.shape[1]
    h, c = h0, c0
    states: list[Tensor | None] = [None] * T
    order = range(T - 1, -1, -1) if reverse else range(T)
    for t in order:
        x = embedding(char_emb, ids[:, t])
        extras: tuple[Tensor, ...] = ()
        if attend_source is not None:
            ctx = attention(params, att_name, attend_source, [h, x])
            extras = (ctx,)
        h_new, c_new = lstm_step(params, name, x, h, c, extras)
        m = mask[:, t : t + 1]
        h = where_mask(m, h_new, h)
        c = where_mask(m, c_new, c)
        states[t] = h
    return states, h, c  # type: ignore[return-value]
