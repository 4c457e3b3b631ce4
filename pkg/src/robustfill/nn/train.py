"""Plain-SGD training with global-norm gradient clipping.

Minibatches are re-sampled from the instance generator every step (the
stream never repeats), optionally with per-instance noise on the observed
examples. Runs are reproducible bit-for-bit for a fixed seed in
single-worker mode.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from ..dsl import Vocabulary
from ..gen import Instance, NoiseSpec, SamplerConfig, generate_instance, inject_noise, rng_for
from .models import ExampleBatch, SequenceModel, make_induction_batch, make_synthesis_batch


class TrainingDiverged(RuntimeError):
    """Loss or parameters became non-finite."""


@dataclass(frozen=True)
class TrainConfig:
    steps: int = 2000
    batch_size: int = 16  # instances per minibatch
    learning_rate: float = 1.0
    lr_decay: float = 0.5
    lr_decay_every: int = 0  # 0 = no decay
    clip_norm: float = 5.0
    seed: int = 0
    noise_levels: tuple[int, ...] = (0, 1, 2, 3)  # per-instance n_chars drawn uniformly
    n_examples: int = 4
    log_every: int = 50
    checkpoint_every: int = 0  # 0 = only at the end
    validation_size: int = 0


@dataclass
class TrainState:
    step: int = 0
    losses: list = field(default_factory=list)


def global_norm_clip(params: dict, clip: float) -> float:
    total = 0.0
    for p in params.values():
        if p.grad is not None:
            total += float((p.grad * p.grad).sum())
    norm = math.sqrt(total)
    if norm > clip and norm > 0:
        factor = clip / norm
        for p in params.values():
            if p.grad is not None:
                p.grad *= factor
    return norm


def sgd_update(params: dict, lr: float) -> None:
    for p in params.values():
        if p.grad is not None:
            p.data -= lr * p.grad
            p.grad = None


def _noisy(rng, inst: Instance, levels: tuple[int, ...]) -> Instance:
    n = int(levels[int(rng.integers(len(levels)))])
    return inject_noise(rng, inst, NoiseSpec(n)) if n else inst


def minibatches(
    cfg: TrainConfig,
    sampler: SamplerConfig,
    mode: str,
    vocab: Vocabulary | None,
    dtype,
) -> Iterator[ExampleBatch]:
    """Infinite stream of freshly sampled minibatches."""
    rng = rng_for(cfg.seed)
    while True:
        instances = [generate_instance(rng, sampler) for _ in range(cfg.batch_size)]
        instances = [_noisy(rng, inst, cfg.noise_levels) for inst in instances]
        if mode == "synthesis":
            trimmed = [
                Instance(inst.observed[: cfg.n_examples], inst.assessment, inst.reference, inst.noise)
                for inst in instances
            ]
            yield make_synthesis_batch(trimmed, vocab, dtype, cfg.n_examples)
        else:
            items = []
            for inst in instances:
                iy, oy = inst.assessment[int(rng.integers(len(inst.assessment)))]
                items.append((Instance(inst.observed[: cfg.n_examples], (), None, inst.noise), iy, oy))
            yield make_induction_batch(items, dtype, cfg.n_examples)


def train(
    model: SequenceModel,
    batches: Iterator[ExampleBatch],
    cfg: TrainConfig,
    on_step: Callable[[int, float, dict], None] | None = None,
    metrics_path: str | Path | None = None,
) -> TrainState:
    """Run SGD for cfg.steps minibatches; mutates the model parameters in place."""
    state = TrainState()
    lr = cfg.learning_rate
    log_fh = open(metrics_path, "a", encoding="utf-8") if metrics_path else None
    started = time.time()
    try:
        for step in range(1, cfg.steps + 1):
            batch = next(batches)
            loss, aux = model.forward(batch)
            loss_val = float(loss.data)
            if not math.isfinite(loss_val):
                raise TrainingDiverged(f"non-finite loss {loss_val} at step {step}")
            loss.backward()
            norm = global_norm_clip(model.params, cfg.clip_norm)
            sgd_update(model.params, lr)
            if cfg.lr_decay_every and step % cfg.lr_decay_every == 0:
                lr *= cfg.lr_decay
            state.step = step
            state.losses.append(loss_val)
            if on_step is not None:
                on_step(step, loss_val, aux)
            if log_fh and (step % cfg.log_every == 0 or step == cfg.steps):
                record = {
                    "step": step,
                    "loss": loss_val,
                    "token_accuracy": aux["token_accuracy"],
                    "grad_norm": norm,
                    "lr": lr,
                    "elapsed_s": round(time.time() - started, 3),
                }
                log_fh.write(json.dumps(record) + "\n")
                log_fh.flush()
        for name, p in model.params.items():
            if not np.isfinite(p.data).all():
                raise TrainingDiverged(f"non-finite parameter {name} after training")
    finally:
        if log_fh:
            log_fh.close()
    return state


def train_fresh(
    model: SequenceModel,
    sampler: SamplerConfig,
    cfg: TrainConfig,
    vocab: Vocabulary | None = None,
    metrics_path: str | Path | None = None,
    on_step=None,
) -> TrainState:
    stream = minibatches(cfg, sampler, model.config.mode, vocab, model.config.np_dtype)
    return train(model, stream, cfg, on_step=on_step, metrics_path=metrics_path)
