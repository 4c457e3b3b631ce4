"""Central finite-difference gradient verification.

Used by the test suite to validate every hand-written backward: the
analytic gradient of a scalar loss with respect to every parameter tensor
is compared against (f(x+h) - f(x-h)) / 2h in double precision. Large
tensors are checked at a deterministic stride sample of entries; small ones
exhaustively.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .autodiff import Tensor


def analytic_gradients(loss_fn: Callable[[], Tensor], params: dict[str, Tensor]) -> dict[str, np.ndarray]:
    for p in params.values():
        p.grad = None
    loss = loss_fn()
    loss.backward()
    grads = {name: (p.grad.copy() if p.grad is not None else np.zeros_like(p.data)) for name, p in params.items()}
    for p in params.values():
        p.grad = None
    return grads


def _entry_sample(size: int, limit: int) -> np.ndarray:
    if size <= limit:
        return np.arange(size)
    stride = size / limit
    return np.unique((np.arange(limit) * stride).astype(np.int64))


def max_relative_error(
    loss_fn: Callable[[], Tensor],
    params: dict[str, Tensor],
    step: float = 1e-3,
    entry_limit: int = 400,
) -> tuple[float, dict[str, float]]:
    """Worst relative error over (sampled) entries of every tensor.

    relative error = |analytic - fd| / max(|analytic| + |fd|, 1e-6)
    """
    grads = analytic_gradients(loss_fn, params)
    per_tensor: dict[str, float] = {}
    worst = 0.0

    def fd_error(flat: np.ndarray, i: int, an: float, h: float) -> float:
        orig = flat[i]
        flat[i] = orig + h
        lp = float(loss_fn().data)
        flat[i] = orig - h
        lm = float(loss_fn().data)
        flat[i] = orig
        fd = (lp - lm) / (2.0 * h)
        return abs(an - fd) / max(abs(an) + abs(fd), 1e-6)

    for name, p in params.items():
        flat = p.data.reshape(-1)
        gflat = grads[name].reshape(-1)
        err_here = 0.0
        for i in _entry_sample(flat.size, entry_limit):
            an = float(gflat[i])
            err = fd_error(flat, i, an, step)
            if err > 1e-5:
                # near a max-pool kink the interval may straddle an argmax
                # flip: the loss is only piecewise smooth there. A genuine
                # backward bug does not improve as the step shrinks; a kink
                # artifact does.
                err = min(err, fd_error(flat, i, an, step / 10.0))
            if err > 1e-5:
                err = min(err, fd_error(flat, i, an, step / 50.0))
            if err > err_here:
                err_here = err
        per_tensor[name] = err_here
        worst = max(worst, err_here)
    return worst, per_tensor
