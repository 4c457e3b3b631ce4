"""Self-describing model checkpoints.

Layout: magic bytes, a little-endian uint64 header length, a JSON header
(format tag, network config, tensor index with shapes/dtypes/offsets), then
the raw tensor buffers concatenated in index order. Buffers are written as
little-endian IEEE-754 regardless of host byte order. Loading refuses a
checkpoint whose vocabulary hash differs from the caller's expectation, so
a model can never be paired with a mismatched DSL build.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .autodiff import Tensor
from .models import NetworkConfig, SequenceModel

MAGIC = b"RFCKPT01"
_DTYPE_TAGS = {"float64": "<f8", "float32": "<f4"}


class CheckpointError(RuntimeError):
    pass


def save_checkpoint(path: str | Path, model: SequenceModel, meta: dict | None = None) -> None:
    path = Path(path)
    names = model.parameter_names()
    tag = _DTYPE_TAGS[model.config.dtype]
    index = []
    offset = 0
    buffers = []
    for name in names:
        arr = np.ascontiguousarray(model.params[name].data.astype(tag))
        index.append({"name": name, "shape": list(arr.shape), "dtype": tag, "offset": offset, "nbytes": arr.nbytes})
        buffers.append(arr.tobytes())
        offset += arr.nbytes
    header = {
        "format": "robustfill-checkpoint-v1",
        "config": model.config.to_dict(),
        "tensors": index,
        "meta": meta or {},
    }
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    with path.open("wb") as fh:
        fh.write(MAGIC)
        fh.write(len(blob).to_bytes(8, "little"))
        fh.write(blob)
        for buf in buffers:
            fh.write(buf)


def load_checkpoint(path: str | Path, expect_vocab_hash: str | None = None) -> tuple[SequenceModel, dict]:
    path = Path(path)
    with path.open("rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise CheckpointError(f"{path}: not a checkpoint file")
        n = int.from_bytes(fh.read(8), "little")
        header = json.loads(fh.read(n).decode("utf-8"))
        if header.get("format") != "robustfill-checkpoint-v1":
            raise CheckpointError(f"{path}: unknown checkpoint format")
        config = NetworkConfig(**header["config"])
        if expect_vocab_hash is not None and config.vocab_hash != expect_vocab_hash:
            raise CheckpointError(
                f"{path}: checkpoint vocabulary hash {config.vocab_hash[:12]}... does not match "
                f"the current build {expect_vocab_hash[:12]}...; refusing to load"
            )
        model = SequenceModel(config, np.random.Generator(np.random.PCG64(0)))
        expected = set(model.parameter_names())
        seen = set()
        for entry in header["tensors"]:
            raw = fh.read(entry["nbytes"])
            arr = np.frombuffer(raw, dtype=entry["dtype"]).reshape(entry["shape"])
            name = entry["name"]
            if name not in expected:
                raise CheckpointError(f"{path}: unexpected tensor {name!r}")
            if tuple(model.params[name].data.shape) != tuple(arr.shape):
                raise CheckpointError(f"{path}: tensor {name!r} has shape {arr.shape}, expected {model.params[name].data.shape}")
            model.params[name] = Tensor(arr.astype(config.np_dtype), requires_grad=True)
            seen.add(name)
        if seen != expected:
            raise CheckpointError(f"{path}: missing tensors {sorted(expected - seen)}")
    return model, header.get("meta", {})
