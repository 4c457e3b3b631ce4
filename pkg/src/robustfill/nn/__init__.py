"""Neural substrate: autodiff, layers, architectures, training, checkpoints."""

from . import autodiff
from .autodiff import Tensor, no_grad
from .checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from .layers import AttentionSource, attention, double_attention, lstm_step
from .models import (
    ARCHITECTURES,
    CHAR_DECODER_VOCAB,
    CHAR_EOS,
    CHAR_VOCAB,
    DecodeSession,
    ExampleBatch,
    NetworkConfig,
    SequenceModel,
    build_model,
    char_ids,
    encode_example,
    induction_config,
    induction_forward,
    late_pool,
    make_induction_batch,
    make_synthesis_batch,
    pad_batch,
    synthesis_config,
    synthesis_forward,
)
from .train import (
    TrainConfig,
    TrainingDiverged,
    TrainState,
    global_norm_clip,
    minibatches,
    sgd_update,
    train,
    train_fresh,
)

__all__ = [
    "autodiff",
    "Tensor",
    "no_grad",
    "CheckpointError",
    "load_checkpoint",
    "save_checkpoint",
    "AttentionSource",
    "attention",
    "double_attention",
    "lstm_step",
    "ARCHITECTURES",
    "CHAR_DECODER_VOCAB",
    "CHAR_EOS",
    "CHAR_VOCAB",
    "DecodeSession",
    "ExampleBatch",
    "NetworkConfig",
    "SequenceModel",
    "build_model",
    "char_ids",
    "encode_example",
    "induction_config",
    "induction_forward",
    "late_pool",
    "make_induction_batch",
    "make_synthesis_batch",
    "pad_batch",
    "synthesis_config",
    "synthesis_forward",
    "TrainConfig",
    "TrainingDiverged",
    "TrainState",
    "global_norm_clip",
    "minibatches",
    "sgd_update",
    "train",
    "train_fresh",
]
