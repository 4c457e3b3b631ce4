"""Whole-architecture gradient checks: analytic backward vs central finite
differences, double precision, for every parameter tensor of every
architecture at d=8 with two observed examples."""

import numpy as np
import pytest

from robustfill.dsl import build_vocabulary, parse_program, toy_config
from robustfill.gen import Instance
from robustfill.nn import (
    build_model,
    induction_config,
    make_induction_batch,
    make_synthesis_batch,
    synthesis_config,
)
from robustfill.nn.gradcheck import max_relative_error

VOCAB = build_vocabulary(toy_config())
TOL = 1e-4

INSTANCES = [
    Instance((("ab 12", "ab"), ("Zq 9", "Zq")), (), parse_program("SubStr(1, 2)")),
    Instance((("he 77", "he"), ("M 4p", "M ")), (), parse_program("SubStr(1, 2)")),
]


def synthesis_loss_fn(arch):
    cfg = synthesis_config(VOCAB, architecture=arch, hidden_size=8, embedding_size=8, dtype="float64")
    model = build_model(cfg, seed=1)
    batch = make_synthesis_batch(INSTANCES, VOCAB, np.float64)
    return model, (lambda: model.forward(batch)[0])


@pytest.mark.parametrize("arch", ["basic", "attention-a", "attention-b", "attention-c"])
def test_synthesis_architecture_gradients(arch):
    model, loss_fn = synthesis_loss_fn(arch)
    worst, per_tensor = max_relative_error(loss_fn, model.params, step=1e-3, entry_limit=48)
    bad = {k: v for k, v in per_tensor.items() if v >= TOL}
    assert worst < TOL, f"{arch}: {bad}"


def test_induction_architecture_gradients():
    cfg = induction_config(hidden_size=8, embedding_size=8, dtype="float64")
    model = build_model(cfg, seed=1)
    items = [(Instance(i.observed, (), None), "zz 5", "z5") for i in INSTANCES]
    batch = make_induction_batch(items, np.float64)
    worst, per_tensor = max_relative_error(lambda: model.forward(batch)[0], model.params, step=1e-3, entry_limit=48)
    bad = {k: v for k, v in per_tensor.items() if v >= TOL}
    assert worst < TOL, f"induction: {bad}"
