"""Program token vocabulary, tokenization, and the decoding grammar machine.

Nesting functions are flattened into single tokens carrying their full
parameter binding (their parameter spaces are small); ``SubStr``/``GetSpan``/
``ConstStr`` emit a function token followed by one token per parameter
(positions alone would otherwise blow up the vocabulary); composition is
introduced by an explicit ``Compose`` token; end-of-sequence is explicit.

The same token-level grammar drives three things: ``tokenize_program`` /
``detokenize_program`` round-tripping, next-token legality masks for the
beam search, and incremental expression completion for prefix-execution
pruning.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Optional

import numpy as np

from .ast import (
    Boundary,
    Compose,
    ConstStr,
    Expression,
    GetAll,
    GetFirst,
    GetFrom,
    GetSpan,
    GetToken,
    GetUpto,
    Program,
    Regex,
    Replace,
    SubStr,
    ToCase,
    TokenType,
    Trim,
)
from .config import DslConfig
from .text import format_expression

EOS = "<eos>"

# token kinds
K_EOS = "eos"
K_NEST = "nest"
K_CONST = "const_fn"
K_SUBSTR = "substr_fn"
K_GETSPAN = "getspan_fn"
K_COMPOSE = "compose_fn"
K_POS = "pos"
K_IDX = "idx"
K_BOUND = "bound"
K_REGEX = "regex"
K_CHAR = "char"


class ProgramSyntaxError(ValueError):
    """A token sequence that is not a grammatical program; ``index`` locates the first offender."""

    def __init__(self, message: str, index: int):
        super().__init__(f"token {index}: {message}")
        self.raw_message = message
        self.index = index


def _nesting_tokens(config: DslConfig) -> list:
    nodes = []
    for kind in config.nesting_kinds:
        if kind == "GetToken":
            nodes += [GetToken(t, i) for t in config.token_types for i in config.indexes]
        elif kind == "ToCase":
            nodes += [ToCase(c) for c in config.cases]
        elif kind == "Replace":
            nodes += [Replace(d1, d2) for d1 in config.delimiters for d2 in config.delimiters if d1 != d2]
        elif kind == "Trim":
            nodes += [Trim()]
        elif kind == "GetUpto":
            nodes += [GetUpto(r) for r in config.regexes]
        elif kind == "GetFrom":
            nodes += [GetFrom(r) for r in config.regexes]
        elif kind == "GetFirst":
            nodes += [GetFirst(t, i) for t in config.token_types for i in config.getfirst_counts]
        elif kind == "GetAll":
            nodes += [GetAll(t) for t in config.token_types]
    return nodes


def _regex_key(r: Regex) -> str:
    return r.value if isinstance(r, TokenType) else f"'{r}'"


class Vocabulary:
    """Token table for one DSL config, with id maps and the decoding grammar."""

    def __init__(self, config: DslConfig):
        self.config = config
        tokens: list[str] = [EOS]
        kinds: list[str] = [K_EOS]
        payloads: list[object] = [None]

        def add(name: str, kind: str, payload: object) -> None:
            tokens.append(name)
            kinds.append(kind)
            payloads.append(payload)

        has_substr = "SubStr" in config.substring_kinds
        has_getspan = "GetSpan" in config.substring_kinds
        if config.allow_const:
            add("ConstStr", K_CONST, None)
        if has_substr:
            add("SubStr", K_SUBSTR, None)
        if has_getspan:
            add("GetSpan", K_GETSPAN, None)
        if config.allow_compose and config.nesting_kinds:
            add("Compose", K_COMPOSE, None)
        if has_substr:
            for k in config.positions:
                add(f"pos:{k}", K_POS, k)
        if has_getspan:
            for i in config.indexes:
                add(f"idx:{i}", K_IDX, i)
            for b in Boundary:
                add(f"bound:{b.value}", K_BOUND, b)
            for r in config.regexes:
                add(f"regex:{_regex_key(r)}", K_REGEX, r)
        if config.allow_const:
            for ch in config.const_chars:
                add(f"char:{ch!r}", K_CHAR, ch)
        for node in _nesting_tokens(config):
            add(format_expression(node), K_NEST, node)

        self.tokens = tokens
        self.kinds = kinds
        self.payloads = payloads
        self.eos_id = 0
        self.size = len(tokens)
        self.id_of = {name: i for i, name in enumerate(tokens)}
        if len(self.id_of) != self.size:
            raise ValueError("duplicate token names in vocabulary")

        self._fn_id = {k: i for i, k in enumerate(kinds) if k in (K_CONST, K_SUBSTR, K_GETSPAN, K_COMPOSE)}
        self._nest_id = {payloads[i]: i for i in range(self.size) if kinds[i] == K_NEST}
        self._pos_id = {payloads[i]: i for i in range(self.size) if kinds[i] == K_POS}
        self._idx_id = {payloads[i]: i for i in range(self.size) if kinds[i] == K_IDX}
        self._bound_id = {payloads[i]: i for i in range(self.size) if kinds[i] == K_BOUND}
        self._regex_id = {payloads[i]: i for i in range(self.size) if kinds[i] == K_REGEX}
        self._char_id = {payloads[i]: i for i in range(self.size) if kinds[i] == K_CHAR}

        self._kind_mask = {}
        for kind in (K_EOS, K_NEST, K_CONST, K_SUBSTR, K_GETSPAN, K_COMPOSE, K_POS, K_IDX, K_BOUND, K_REGEX, K_CHAR):
            mask = np.zeros(self.size, dtype=bool)
            for i, k in enumerate(kinds):
                if k == kind:
                    mask[i] = True
            self._kind_mask[kind] = mask
        self._phase_masks: dict[tuple, np.ndarray] = {}

    # ------------------------------------------------------------------ hash
    @property
    def hash(self) -> str:
        return hashlib.sha256("\n".join(self.tokens).encode("utf-8")).hexdigest()

    def __len__(self) -> int:
        return self.size

    # ------------------------------------------------------- grammar machine
    # A decode state is (phase, params, n_complete). ``params`` accumulates
    # the pending expression's pieces; phases:
    #   expr                      start of an expression (or EOS)
    #   const / substr / getspan  reading parameter tokens
    #   outer                     after Compose: awaiting the outer nesting
    #   inner                     awaiting the inner (nesting or substring fn)
    #   inner_substr/inner_getspan  reading the inner substring's parameters

    def initial_state(self) -> tuple:
        return ("expr", (), 0)

    def allowed_kinds(self, state: tuple) -> list[str]:
        phase, params, count = state
        if phase == "expr":
            kinds = []
            if count < self.config.max_expressions:
                kinds = [K_NEST, K_CONST, K_SUBSTR, K_GETSPAN]
                if self.config.allow_compose:
                    kinds.append(K_COMPOSE)
            if count >= 1:
                kinds.append(K_EOS)
            return kinds
        if phase == "const":
            return [K_CHAR]
        if phase in ("substr", "inner_substr"):
            return [K_POS]
        if phase in ("getspan", "inner_getspan"):
            slot = len(params) if phase == "getspan" else len(params) - 1
            return [[K_REGEX, K_IDX, K_BOUND][slot % 3]]
        if phase == "outer":
            return [K_NEST]
        if phase == "inner":
            return [K_NEST, K_SUBSTR, K_GETSPAN]
        raise ValueError(f"bad state {state!r}")

    def allowed_mask(self, state: tuple) -> np.ndarray:
        phase, params, count = state
        key = (phase, len(params), min(count, 1), count >= self.config.max_expressions)
        cached = self._phase_masks.get(key)
        if cached is None:
            cached = np.zeros(self.size, dtype=bool)
            for kind in self.allowed_kinds(state):
                cached |= self._kind_mask[kind]
            self._phase_masks[key] = cached
        return cached

    def advance(self, state: tuple, token_id: int) -> tuple[tuple, Optional[Expression]]:
        """Consume one (non-EOS) token; returns the new state and, when this
        token completes an expression, the finished Expression node."""
        phase, params, count = state
        kind = self.kinds[token_id]
        payload = self.payloads[token_id]
        if kind not in self.allowed_kinds(state):
            raise ProgramSyntaxError(f"{self.tokens[token_id]!r} not allowed in phase {phase!r}", -1)

        if phase == "expr":
            if kind == K_NEST:
                return ("expr", (), count + 1), payload
            if kind == K_CONST:
                return ("const", (), count), None
            if kind == K_SUBSTR:
                return ("substr", (), count), None
            if kind == K_GETSPAN:
                return ("getspan", (), count), None
            return ("outer", (), count), None  # Compose
        if phase == "const":
            return ("expr", (), count + 1), ConstStr(payload)
        if phase == "substr":
            if len(params) == 0:
                return ("substr", (payload,), count), None
            return ("expr", (), count + 1), SubStr(params[0], payload)
        if phase == "getspan":
            params = params + (payload,)
            if len(params) == 6:
                return ("expr", (), count + 1), GetSpan(*params)
            return ("getspan", params, count), None
        if phase == "outer":
            return ("inner", (payload,), count), None
        if phase == "inner":
            if kind == K_NEST:
                return ("expr", (), count + 1), Compose(params[0], payload)
            if kind == K_SUBSTR:
                return ("inner_substr", params, count), None
            return ("inner_getspan", params, count), None
        if phase == "inner_substr":
            if len(params) == 1:
                return ("inner_substr", params + (payload,), count), None
            return ("expr", (), count + 1), Compose(params[0], SubStr(params[1], payload))
        if phase == "inner_getspan":
            params = params + (payload,)
            if len(params) == 7:
                return ("expr", (), count + 1), Compose(params[0], GetSpan(*params[1:]))
            return ("inner_getspan", params, count), None
        raise ValueError(f"bad state {state!r}")

    def can_stop(self, state: tuple) -> bool:
        phase, _, count = state
        return phase == "expr" and count >= 1


def build_vocabulary(config: DslConfig) -> Vocabulary:
    return Vocabulary(config)


# ------------------------------------------------------------- tokenization
def _expression_ids(v: Vocabulary, e: Expression) -> list[int]:
    try:
        if isinstance(e, ConstStr):
            return [v._fn_id[K_CONST], v._char_id[e.char]]
        if isinstance(e, SubStr):
            return [v._fn_id[K_SUBSTR], v._pos_id[e.k1], v._pos_id[e.k2]]
        if isinstance(e, GetSpan):
            return [
                v._fn_id[K_GETSPAN],
                v._regex_id[e.r1],
                v._idx_id[e.i1],
                v._bound_id[e.y1],
                v._regex_id[e.r2],
                v._idx_id[e.i2],
                v._bound_id[e.y2],
            ]
        if isinstance(e, Compose):
            inner_ids = (
                _expression_ids(v, e.inner)
                if isinstance(e.inner, (SubStr, GetSpan))
                else [v._nest_id[e.inner]]
            )
            return [v._fn_id[K_COMPOSE], v._nest_id[e.outer]] + inner_ids
        return [v._nest_id[e]]
    except KeyError as err:
        raise ValueError(f"expression {format_expression(e)} not representable in this vocabulary: {err}") from None


def tokenize_program(p: Program, vocab: Vocabulary) -> list[int]:
    """Deterministic linearization of a program, terminated by the EOS id."""
    if len(p) > vocab.config.max_expressions:
        raise ValueError(f"program has {len(p)} expressions; vocabulary caps at {vocab.config.max_expressions}")
    ids: list[int] = []
    for e in p.expressions:
        ids.extend(_expression_ids(vocab, e))
    ids.append(vocab.eos_id)
    return ids


def detokenize_program(ids: Iterable[int], vocab: Vocabulary) -> Program:
    """Parse a token sequence back into a Program.

    Raises ProgramSyntaxError with the index of the first offending token;
    inverse of tokenize_program on its image.
    """
    state = vocab.initial_state()
    exprs: list[Expression] = []
    ids = list(ids)
    for i, tid in enumerate(ids):
        if not 0 <= tid < vocab.size:
            raise ProgramSyntaxError(f"id {tid} out of range", i)
        if tid == vocab.eos_id:
            if not vocab.can_stop(state):
                msg = "empty program" if state[0] == "expr" else "end of sequence inside an expression"
                raise ProgramSyntaxError(msg, i)
            if i != len(ids) - 1:
                raise ProgramSyntaxError("tokens after end of sequence", i + 1)
            return Program(tuple(exprs))
        try:
            state, completed = vocab.advance(state, tid)
        except ProgramSyntaxError as err:
            raise ProgramSyntaxError(err.raw_message, i) from None
        if completed is not None:
            exprs.append(completed)
    raise ProgramSyntaxError("missing end-of-sequence token", len(ids))
