"""Sequence models for program synthesis and output induction.

Four synthesis variants over observed I/O examples:

- basic:       plain LSTMs chained by final hidden states (I -> O -> decoder)
- attention-a: O attends to I; the decoder attends to O
- attention-b: as A, plus the decoder double-attends to O then I
- attention-c: as B, with bidirectional I and O encoders (fused by projection)

Every observed example gets its own encoder/decoder replica with shared
weights; the decoder replicas consume the same target token and their hidden
states are pooled per timestep (max over tanh(W h)) before one output
softmax. The induction model is the attention-a stack plus an extra encoder
for the unpaired input string; its decoder emits characters and
double-attends to each example's output encoding and the shared unpaired
input encoding.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ..dsl import Vocabulary
from ..gen import Instance
from .autodiff import (
    Tensor,
    concat,
    constant,
    embedding,
    log_softmax_np,
    masked_nll,
    matmul,
    add_all,
    no_grad,
    parameter,
    pool_max,
    repeat_rows,
    tanh,
)
from .layers import (
    AttentionSource,
    attention,
    double_attention,
    init_attention,
    init_linear,
    init_lstm,
    linear,
    lstm_step,
    prepare_source,
    run_lstm,
)

CHAR_VOCAB = 95  # printable ASCII
CHAR_EOS = 95  # induction target terminator; the same row is the decoder's start-of-sequence
CHAR_DECODER_VOCAB = 96

ARCHITECTURES = ("basic", "attention-a", "attention-b", "attention-c")


def char_ids(s: str) -> np.ndarray:
    ids = np.frombuffer(s.encode("ascii"), dtype=np.uint8).astype(np.int64) - 0x20
    if ids.size and (ids.min() < 0 or ids.max() >= CHAR_VOCAB):
        raise ValueError(f"non-printable character in {s!r}")
    return ids


def pad_batch(strings: list[str], dtype) -> tuple[np.ndarray, np.ndarray]:
    """(ids, mask) padded to the longest string; every string must be non-empty."""
    if any(not s for s in strings):
        raise ValueError("cannot encode an empty string")
    rows = [char_ids(s) for s in strings]
    T = max(len(r) for r in rows)
    ids = np.zeros((len(rows), T), dtype=np.int64)
    mask = np.zeros((len(rows), T), dtype=dtype)
    for i, r in enumerate(rows):
        ids[i, : len(r)] = r
        mask[i, : len(r)] = 1.0
    return ids, mask


@dataclass(frozen=True)
class NetworkConfig:
    """Shapes and wiring of one model; everything a checkpoint must pin down."""

    mode: str  # "synthesis" | "induction"
    architecture: str
    output_vocab_size: int
    vocab_hash: str
    hidden_size: int = 64
    embedding_size: int = 32
    max_examples: int = 10
    dtype: str = "float64"

    def __post_init__(self) -> None:
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if self.mode not in ("synthesis", "induction"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "induction" and self.output_vocab_size != CHAR_DECODER_VOCAB:
            raise ValueError("induction output vocabulary is the 95 printable chars + EOS")

    @property
    def np_dtype(self):
        return np.dtype(self.dtype)

    def to_dict(self) -> dict:
        return asdict(self)


def synthesis_config(vocab: Vocabulary, architecture: str = "attention-c", **kw) -> NetworkConfig:
    return NetworkConfig(
        mode="synthesis",
        architecture=architecture,
        output_vocab_size=len(vocab),
        vocab_hash=vocab.hash,
        **kw,
    )


def induction_config(vocab_hash: str = "chars-v1", architecture: str = "attention-a", **kw) -> NetworkConfig:
    return NetworkConfig(
        mode="induction",
        architecture=architecture,
        output_vocab_size=CHAR_DECODER_VOCAB,
        vocab_hash=vocab_hash,
        **kw,
    )


# --------------------------------------------------------------------- batches
@dataclass
class ExampleBatch:
    """Padded arrays for (instances x examples) rows plus per-instance targets."""

    I_ids: np.ndarray
    I_mask: np.ndarray
    O_ids: np.ndarray
    O_mask: np.ndarray
    prev: np.ndarray  # (G, T) decoder inputs
    targets: np.ndarray  # (G, T) decoder targets
    target_mask: np.ndarray  # (G, T)
    groups: int
    per_group: int
    extra: dict = field(default_factory=dict)  # induction: Iy_ids / Iy_mask


def _pad_examples(instances: list[Instance], n: int) -> list[tuple[str, str]]:
    rows: list[tuple[str, str]] = []
    for inst in instances:
        obs = list(inst.observed)
        if not obs:
            raise ValueError("instance without observed examples")
        while len(obs) < n:
            obs.append(obs[len(obs) % len(inst.observed)])  # duplicates are no-ops under max-pool
        rows.extend(obs[:n])
    return rows


def _target_arrays(seqs: list[list[int]], bos: int, pad: int, dtype):
    G = len(seqs)
    T = max(len(s) for s in seqs)
    prev = np.full((G, T), pad, dtype=np.int64)
    targets = np.full((G, T), pad, dtype=np.int64)
    mask = np.zeros((G, T), dtype=dtype)
    for g, s in enumerate(seqs):
        targets[g, : len(s)] = s
        prev[g, 0] = bos
        prev[g, 1 : len(s)] = s[: len(s) - 1]
        mask[g, : len(s)] = 1.0
    return prev, targets, mask


def make_synthesis_batch(instances: list[Instance], vocab: Vocabulary, dtype, n_examples: int | None = None) -> ExampleBatch:
    from ..dsl import tokenize_program

    n = n_examples or max(len(i.observed) for i in instances)
    rows = _pad_examples(instances, n)
    I_ids, I_mask = pad_batch([p[0] for p in rows], dtype)
    O_ids, O_mask = pad_batch([p[1] for p in rows], dtype)
    seqs = [tokenize_program(i.reference, vocab) for i in instances]
    prev, targets, mask = _target_arrays(seqs, bos=len(vocab), pad=vocab.eos_id, dtype=dtype)
    return ExampleBatch(I_ids, I_mask, O_ids, O_mask, prev, targets, mask, len(instances), n)


def make_induction_batch(
    items: list[tuple[Instance, str, str]], dtype, n_examples: int | None = None
) -> ExampleBatch:
    """items: (instance, unpaired input, target output) triples."""
    instances = [it[0] for it in items]
    n = n_examples or max(len(i.observed) for i in instances)
    rows = _pad_examples(instances, n)
    I_ids, I_mask = pad_batch([p[0] for p in rows], dtype)
    O_ids, O_mask = pad_batch([p[1] for p in rows], dtype)
    Iy_ids, Iy_mask = pad_batch([it[1] for it in items], dtype)
    seqs = [list(char_ids(it[2])) + [CHAR_EOS] for it in items]
    prev, targets, mask = _target_arrays(seqs, bos=CHAR_EOS, pad=0, dtype=dtype)
    batch = ExampleBatch(I_ids, I_mask, O_ids, O_mask, prev, targets, mask, len(items), n)
    batch.extra = {"Iy_ids": Iy_ids, "Iy_mask": Iy_mask}
    return batch


# ---------------------------------------------------------------------- model
class SequenceModel:
    """Shared parameter construction, encoding, decoding, and loss machinery."""

    def __init__(self, config: NetworkConfig, rng: np.random.Generator):
        self.config = config
        d = config.hidden_size
        e = config.embedding_size
        dt = config.np_dtype
        arch = config.architecture
        attentional = arch != "basic"
        P: dict[str, Tensor] = {}
        self.params = P

        P["char_emb"] = parameter((CHAR_VOCAB, e), rng, dtype=dt)
        init_lstm(P, "enc_I", e, d, rng, dt)
        if arch == "attention-c":
            init_lstm(P, "enc_I_bwd", e, d, rng, dt)
            init_linear(P, "I_att_proj", 2 * d, d, rng, dt)
            init_linear(P, "I_seed_h", 2 * d, d, rng, dt)
            init_linear(P, "I_seed_c", 2 * d, d, rng, dt)
        o_in = e + (d if attentional else 0)
        init_lstm(P, "enc_O", o_in, d, rng, dt)
        if attentional:
            init_attention(P, "att_O_I", d + e, d, rng, dt)
        if arch == "attention-c":
            init_lstm(P, "enc_O_bwd", o_in, d, rng, dt)
            init_linear(P, "O_att_proj", 2 * d, d, rng, dt)
            init_linear(P, "O_seed_h", 2 * d, d, rng, dt)
            init_linear(P, "O_seed_c", 2 * d, d, rng, dt)

        if config.mode == "synthesis":
            dec_e = e
            P["dec_emb"] = parameter((config.output_vocab_size + 1, dec_e), rng, dtype=dt)  # +1: start row
            n_ctx = {"basic": 0, "attention-a": 1, "attention-b": 2, "attention-c": 2}[arch]
        else:
            dec_e = e
            P["dec_emb"] = parameter((CHAR_DECODER_VOCAB, dec_e), rng, dtype=dt)
            init_lstm(P, "enc_Iy", e, d, rng, dt)
            n_ctx = 2
        self.n_ctx = n_ctx
        if n_ctx >= 1:
            init_attention(P, "att_P_A", d + dec_e, d, rng, dt)
        if n_ctx == 2:
            init_attention(P, "att_P_B", d + dec_e + d, d, rng, dt)
        init_lstm(P, "dec", dec_e + n_ctx * d, d, rng, dt)
        init_linear(P, "pool", d, d, rng, dt)
        init_linear(P, "out", d, config.output_vocab_size, rng, dt)
        self._dec_e = dec_e

    # ------------------------------------------------------------- utilities
    @property
    def d(self) -> int:
        return self.config.hidden_size

    def zeros(self, rows: int) -> Tensor:
        return constant(np.zeros((rows, self.d), dtype=self.config.np_dtype))

    def parameter_names(self) -> list[str]:
        return sorted(self.params)

    # -------------------------------------------------------------- encoding
    def _encode_bidir(self, prefix: str, emb: Tensor, ids, mask, h0, c0, att=None, att_name=None):
        P = self.params
        states_f, h_f, c_f = run_lstm(P, f"enc_{prefix}", emb, ids, mask, h0, c0, att, att_name)
        states_b, h_b, c_b = run_lstm(P, f"enc_{prefix}_bwd", emb, ids, mask, h0, c0, att, att_name, reverse=True)
        fused = [linear(P, f"{prefix}_att_proj", concat([f, b], axis=1)) for f, b in zip(states_f, states_b)]
        seed_h = linear(P, f"{prefix}_seed_h", concat([h_f, h_b], axis=1))
        seed_c = linear(P, f"{prefix}_seed_c", concat([c_f, c_b], axis=1))
        return fused, seed_h, seed_c

    def encode_examples(self, I_ids, I_mask, O_ids, O_mask) -> dict:
        """Encode (input, output) example rows; returns attention sources and decoder seeds."""
        P = self.params
        arch = self.config.architecture
        rows = I_ids.shape[0]
        emb = P["char_emb"]
        h0 = self.zeros(rows)
        c0 = self.zeros(rows)

        if arch == "attention-c":
            I_states, hI, cI = self._encode_bidir("I", emb, I_ids, I_mask, h0, c0)
        else:
            I_states, hI, cI = run_lstm(P, "enc_I", emb, I_ids, I_mask, h0, c0)
        S_I = prepare_source(P, "att_O_I", I_states, I_mask) if arch != "basic" else None

        o_att = S_I if arch != "basic" else None
        o_att_name = "att_O_I" if arch != "basic" else None
        if arch == "attention-c":
            O_states, hO, cO = self._encode_bidir("O", emb, O_ids, O_mask, hI, cI, o_att, o_att_name)
        else:
            O_states, hO, cO = run_lstm(P, "enc_O", emb, O_ids, O_mask, hI, cI, o_att, o_att_name)

        enc: dict = {"dec_h0": hO, "dec_c0": cO, "rows": rows}
        if self.n_ctx >= 1:
            source_a_states, source_a_mask = O_states, O_mask
            enc["src_A"] = prepare_source(P, "att_P_A", source_a_states, source_a_mask)
        if self.n_ctx == 2 and self.config.mode == "synthesis":
            enc["src_B"] = prepare_source(P, "att_P_B", I_states, I_mask)
        return enc

    def encode_unpaired(self, Iy_ids, Iy_mask, per_group: int) -> AttentionSource:
        """Induction only: encode I_y per instance and replicate across example rows."""
        P = self.params
        rows = Iy_ids.shape[0]
        states, _, _ = run_lstm(P, "enc_Iy", P["char_emb"], Iy_ids, Iy_mask, self.zeros(rows), self.zeros(rows))
        src = prepare_source(P, "att_P_B", states, Iy_mask)
        if per_group > 1:
            src = AttentionSource(
                repeat_rows(src.values, per_group),
                repeat_rows(src.scores, per_group),
                np.repeat(src.mask, per_group, axis=0),
            )
        return src

    # -------------------------------------------------------------- decoding
    def decoder_step(self, enc: dict, x: Tensor, h: Tensor, c: Tensor) -> tuple[Tensor, Tensor]:
        """One decoder LSTM step for every example row."""
        P = self.params
        if self.n_ctx == 0:
            return lstm_step(P, "dec", x, h, c)
        if self.n_ctx == 1:
            ctx = attention(P, "att_P_A", enc["src_A"], [h, x])
            return lstm_step(P, "dec", x, h, c, (ctx,))
        ctx_a, ctx_b = double_attention(P, "att_P_A", "att_P_B", enc["src_A"], enc["src_B"], h, x)
        return lstm_step(P, "dec", x, h, c, (ctx_a, ctx_b))

    def pool_logits(self, h: Tensor, groups: int) -> Tensor:
        """Late pooling over example replicas, then the output projection."""
        pooled = pool_max(tanh(matmul(h, self.params["pool.W"])), groups)
        return linear(self.params, "out", pooled)

    # ------------------------------------------------------------------ loss
    def forward(self, batch: ExampleBatch) -> tuple[Tensor, dict]:
        """Teacher-forced loss (mean per instance) and per-step diagnostics."""
        enc = self.encode_examples(batch.I_ids, batch.I_mask, batch.O_ids, batch.O_mask)
        if self.config.mode == "induction":
            enc["src_B"] = self.encode_unpaired(batch.extra["Iy_ids"], batch.extra["Iy_mask"], batch.per_group)
        G, n = batch.groups, batch.per_group
        h, c = enc["dec_h0"], enc["dec_c0"]
        losses = []
        step_logprobs = []
        correct = 0
        total = 0
        inv_g = 1.0 / G
        for t in range(batch.targets.shape[1]):
            x = embedding(self.params["dec_emb"], np.repeat(batch.prev[:, t], n))
            h, c = self.decoder_step(enc, x, h, c)
            logits = self.pool_logits(h, G)
            w = batch.target_mask[:, t] * inv_g
            losses.append(masked_nll(logits, batch.targets[:, t], w))
            lp = log_softmax_np(logits.data)
            step_logprobs.append(lp[np.arange(G), batch.targets[:, t]])
            live = batch.target_mask[:, t] > 0
            correct += int((lp.argmax(axis=1)[live] == batch.targets[:, t][live]).sum())
            total += int(live.sum())
        loss = add_all(losses)
        aux = {
            "target_logprobs": np.stack(step_logprobs, axis=1),
            "token_accuracy": correct / max(total, 1),
            "tokens": total,
        }
        return loss, aux

    # ----------------------------------------------------------- decode state
    def start_decode(self, observed: list[tuple[str, str]], unpaired_input: str | None = None) -> "DecodeSession":
        if not observed:
            raise ValueError("decoding needs at least one observed example")
        dt = self.config.np_dtype
        with no_grad():
            I_ids, I_mask = pad_batch([p[0] for p in observed], dt)
            O_ids, O_mask = pad_batch([p[1] for p in observed], dt)
            enc = self.encode_examples(I_ids, I_mask, O_ids, O_mask)
            if self.config.mode == "induction":
                if unpaired_input is None:
                    raise ValueError("induction decoding needs the unpaired input string")
                Iy_ids, Iy_mask = pad_batch([unpaired_input], dt)
                enc["src_B"] = self.encode_unpaired(Iy_ids, Iy_mask, len(observed))
        return DecodeSession(self, enc, len(observed))


class DecodeSession:
    """Stateless-per-step decoding over one observed set; beams batch as rows."""

    def __init__(self, model: SequenceModel, enc: dict, n_examples: int):
        self.model = model
        self.base_enc = enc
        self.n = n_examples
        self._tiled: dict[int, dict] = {}
        self.bos = (
            model.config.output_vocab_size if model.config.mode == "synthesis" else CHAR_EOS
        )

    def initial_state(self) -> tuple[np.ndarray, np.ndarray]:
        h = self.base_enc["dec_h0"].data
        c = self.base_enc["dec_c0"].data
        return h.copy(), c.copy()

    def _enc_for(self, k: int) -> dict:
        if k == 1:
            return self.base_enc
        cached = self._tiled.get(k)
        if cached is None:
            cached = dict(self.base_enc)
            for key in ("src_A", "src_B"):
                if key in cached:
                    src = cached[key]
                    cached[key] = AttentionSource(
                        constant(np.tile(src.values.data, (k, 1, 1))),
                        constant(np.tile(src.scores.data, (k, 1, 1))),
                        np.tile(src.mask, (k, 1)),
                    )
            self._tiled[k] = cached
        return cached

    def step(self, prev_ids: np.ndarray, h: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Advance k candidates one token.

        prev_ids: (k,) previous token per candidate; h, c: (k*n, d) states.
        Returns (logprobs (k, V), h', c').
        """
        k = len(prev_ids)
        enc = self._enc_for(k)
        with no_grad():
            x = embedding(self.model.params["dec_emb"], np.repeat(prev_ids, self.n))
            h_t, c_t = self.model.decoder_step(enc, x, constant(h), constant(c))
            logits = self.model.pool_logits(h_t, k)
        return log_softmax_np(logits.data), h_t.data, c_t.data


# --------------------------------------------------- standalone op wrappers
def encode_example(model: SequenceModel, input_str: str, output_str: str):
    """Encode one (input, output) pair; returns the per-timestep output-encoder
    states and, when the decoder reads the input encoding too, the input states."""
    dt = model.config.np_dtype
    I_ids, I_mask = pad_batch([input_str], dt)
    O_ids, O_mask = pad_batch([output_str], dt)
    enc = model.encode_examples(I_ids, I_mask, O_ids, O_mask)
    o_states = enc["src_A"].values.data if "src_A" in enc else None
    i_states = enc["src_B"].values.data if "src_B" in enc else None
    return o_states, i_states


def late_pool(params: dict, states: Tensor, groups: int) -> Tensor:
    """Max over example replicas of tanh(W h); permutation- and duplicate-invariant."""
    return pool_max(tanh(matmul(states, params["pool.W"])), groups)


def synthesis_forward(model: SequenceModel, instances: list[Instance], vocab: Vocabulary):
    batch = make_synthesis_batch(instances, vocab, model.config.np_dtype)
    return model.forward(batch)


def induction_forward(model: SequenceModel, items: list[tuple[Instance, str, str]]):
    batch = make_induction_batch(items, model.config.np_dtype)
    return model.forward(batch)


def build_model(config: NetworkConfig, seed: int = 0) -> SequenceModel:
    return SequenceModel(config, np.random.Generator(np.random.PCG64(seed)))
