"""Minimal reverse-mode automatic differentiation over numpy arrays.

Deliberately small: exactly the primitives the sequence models need, each
with a hand-written backward that the finite-difference suite checks. Ops
record onto the implicit graph only while gradients are enabled; decoding
runs the same code under ``no_grad()`` so train and search share one
forward implementation.

Fused primitives (LSTM cell, attention read, masked cross-entropy) keep
both the op count and the Python overhead per training step low.
"""

from __future__ import annotations

import contextlib
from typing import Callable, Sequence

import numpy as np

_GRAD_ENABLED = True


@contextlib.contextmanager
def no_grad():
    global _GRAD_ENABLED
    prev = _GRAD_ENABLED
    _GRAD_ENABLED = False
    try:
        yield
    finally:
        _GRAD_ENABLED = prev


def grad_enabled() -> bool:
    return _GRAD_ENABLED


class Tensor:
    """A numpy array plus (optionally) a node in the backward graph."""

    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad: bool = False):
        self.data = np.asarray(data)
        self.grad: np.ndarray | None = None
        self.requires_grad = requires_grad
        self._parents: tuple[Tensor, ...] = ()
        self._backward: Callable[[np.ndarray], None] | None = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def __repr__(self) -> str:
        return f"Tensor(shape={self.data.shape}, dtype={self.data.dtype}, grad={self._backward is not None})"

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self) -> None:
        """Reverse accumulation from this (scalar) tensor."""
        if self.data.size != 1:
            raise ValueError("backward() expects a scalar loss")
        topo: list[Tensor] = []
        seen: set[int] = set()
        stack: list[tuple[Tensor, bool]] = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if id(node) in seen:
                continue
            seen.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in seen:
                    stack.append((p, False))
        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)


def _make(data: np.ndarray, parents: Sequence[Tensor], backward: Callable | None) -> Tensor:
    out = Tensor(data)
    if _GRAD_ENABLED and backward is not None and any(p.requires_grad or p._parents for p in parents):
        out._parents = tuple(parents)
        out._backward = backward
        out.requires_grad = True
    return out


def _accum(t: Tensor, g: np.ndarray) -> None:
    if t.requires_grad or t._parents:
        if t.grad is None:
            t.grad = np.zeros_like(t.data)
        t.grad += g


def constant(data) -> Tensor:
    return Tensor(np.asarray(data))


def parameter(data, rng: np.random.Generator | None = None, scale: float = 0.05, dtype=np.float64) -> Tensor:
    """A trainable tensor; with ``rng`` given, ``data`` is a shape and values
    are drawn uniform(-scale, scale)."""
    if rng is not None:
        data = rng.uniform(-scale, scale, size=data)
    return Tensor(np.asarray(data, dtype=dtype), requires_grad=True)


# ----------------------------------------------------------------- arithmetic
def add(a: Tensor, b: Tensor) -> Tensor:
    data = a.data + b.data

    def backward(g):
        _accum(a, _unbroadcast(g, a.data.shape))
        _accum(b, _unbroadcast(g, b.data.shape))

    return _make(data, (a, b), backward)


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    if g.shape == shape:
        return g
    # sum over added leading axes, then over broadcast size-1 axes
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for axis, n in enumerate(shape):
        if n == 1 and g.shape[axis] != 1:
            g = g.sum(axis=axis, keepdims=True)
    return g


def mul(a: Tensor, b: Tensor) -> Tensor:
    data = a.data * b.data

    def backward(g):
        _accum(a, _unbroadcast(g * b.data, a.data.shape))
        _accum(b, _unbroadcast(g * a.data, b.data.shape))

    return _make(data, (a, b), backward)


def scale(a: Tensor, s: float) -> Tensor:
    def backward(g):
        _accum(a, g * s)

    return _make(a.data * s, (a,), backward)


def matmul(a: Tensor, b: Tensor) -> Tensor:
    data = a.data @ b.data

    def backward(g):
        _accum(a, g @ b.data.T)
        _accum(b, a.data.T @ g)

    return _make(data, (a, b), backward)


def tanh(a: Tensor) -> Tensor:
    out = np.tanh(a.data)

    def backward(g):
        _accum(a, g * (1.0 - out * out))

    return _make(out, (a,), backward)


def sigmoid(a: Tensor) -> Tensor:
    out = 1.0 / (1.0 + np.exp(-a.data))

    def backward(g):
        _accum(a, g * out * (1.0 - out))

    return _make(out, (a,), backward)


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    datas = [t.data for t in tensors]
    data = np.concatenate(datas, axis=axis)
    sizes = [d.shape[axis] for d in datas]
    offsets = np.cumsum([0] + sizes)

    def backward(g):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            idx = [slice(None)] * g.ndim
            idx[axis if axis >= 0 else g.ndim + axis] = slice(lo, hi)
            _accum(t, g[tuple(idx)])

    return _make(data, tuple(tensors), backward)


def slice_cols(a: Tensor, start: int, end: int) -> Tensor:
    data = a.data[:, start:end]

    def backward(g):
        full = np.zeros_like(a.data)
        full[:, start:end] = g
        _accum(a, full)

    return _make(data, (a,), backward)


def reshape(a: Tensor, shape: tuple) -> Tensor:
    data = a.data.reshape(shape)

    def backward(g):
        _accum(a, g.reshape(a.data.shape))

    return _make(data, (a,), backward)


def where_mask(mask: np.ndarray, a: Tensor, b: Tensor) -> Tensor:
    """mask*a + (1-mask)*b with a constant float mask (broadcastable)."""
    m = np.asarray(mask)
    data = m * a.data + (1.0 - m) * b.data

    def backward(g):
        _accum(a, _unbroadcast(g * m, a.data.shape))
        _accum(b, _unbroadcast(g * (1.0 - m), b.data.shape))

    return _make(data, (a, b), backward)


def add_all(tensors: Sequence[Tensor]) -> Tensor:
    """Sum of scalar tensors (loss accumulation)."""
    total = tensors[0]
    for t in tensors[1:]:
        total = add(total, t)
    return total


# ------------------------------------------------------------------ gathering
def embedding(table: Tensor, ids: np.ndarray) -> Tensor:
    ids = np.asarray(ids, dtype=np.int64)
    data = table.data[ids]

    def backward(g):
        if table.requires_grad or table._parents:
            if table.grad is None:
                table.grad = np.zeros_like(table.data)
            np.add.at(table.grad, ids, g)

    return _make(data, (table,), backward)


def repeat_rows(a: Tensor, repeats: int) -> Tensor:
    """Repeat each row ``repeats`` times along axis 0 (grad sums back)."""
    data = np.repeat(a.data, repeats, axis=0)

    def backward(g):
        shape = (a.data.shape[0], repeats) + a.data.shape[1:]
        _accum(a, g.reshape(shape).sum(axis=1))

    return _make(data, (a,), backward)


def stack_states(tensors: Sequence[Tensor]) -> Tensor:
    """Stack per-timestep (B, d) states into (B, T, d)."""
    data = np.stack([t.data for t in tensors], axis=1)

    def backward(g):
        for t_idx, t in enumerate(tensors):
            _accum(t, g[:, t_idx, :])

    return _make(data, tuple(tensors), backward)


def project_states(S: Tensor, W: Tensor) -> Tensor:
    """(B, T, d) x (d, e) -> (B, T, e)."""
    data = S.data @ W.data

    def backward(g):
        _accum(S, g @ W.data.T)
        _accum(W, np.einsum("btd,bte->de", S.data, g, optimize=True))

    return _make(data, (S, W), backward)


# ------------------------------------------------------------ fused primitives
def lstm_cell(z: Tensor, c_prev: Tensor) -> tuple[Tensor, Tensor]:
    """Gates from preactivations z=(B,4d) and previous cell (B,d) -> (h, c).

    Gate order i, f, g, o. Returns the new hidden and cell states.
    """
    d = c_prev.data.shape[1]
    zi, zf, zg, zo = (z.data[:, k * d : (k + 1) * d] for k in range(4))
    i = 1.0 / (1.0 + np.exp(-zi))
    f = 1.0 / (1.0 + np.exp(-zf))
    g_ = np.tanh(zg)
    o = 1.0 / (1.0 + np.exp(-zo))
    c = i * g_ + f * c_prev.data
    tc = np.tanh(c)
    h = o * tc
    stacked = np.concatenate([h, c], axis=1)

    def backward(grad):
        dh = grad[:, :d]
        dc_out = grad[:, d:]
        dc = dc_out + dh * o * (1.0 - tc * tc)
        do = dh * tc
        di = dc * g_
        df = dc * c_prev.data
        dg = dc * i
        dz = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g_ * g_),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        _accum(z, dz)
        _accum(c_prev, dc * f)

    out = _make(stacked, (z, c_prev), backward)
    return slice_cols(out, 0, d), slice_cols(out, d, 2 * d)


def attend(S_vals: Tensor, S_scores: Tensor, q: Tensor, mask: np.ndarray) -> Tensor:
    """Soft attention read: scores from S_scores . q, weights masked-softmaxed
    over the time axis, context summed over S_vals.

    S_vals, S_scores: (B, T, d); q: (B, d); mask: (B, T) with 1 = real step.
    """
    m = np.asarray(mask, dtype=S_vals.data.dtype)
    scores = np.einsum("btd,bd->bt", S_scores.data, q.data, optimize=True)
    scores = np.where(m > 0, scores, -1e30)
    scores = scores - scores.max(axis=1, keepdims=True)
    w = np.exp(scores)
    w = w * (m > 0)
    denom = w.sum(axis=1, keepdims=True)
    w = w / np.maximum(denom, 1e-300)
    ctx = np.einsum("bt,btd->bd", w, S_vals.data, optimize=True)

    def backward(g):
        dw = np.einsum("bd,btd->bt", g, S_vals.data, optimize=True)
        _accum(S_vals, np.einsum("bt,bd->btd", w, g, optimize=True))
        ds = w * (dw - np.sum(dw * w, axis=1, keepdims=True))
        _accum(S_scores, np.einsum("bt,bd->btd", ds, q.data, optimize=True))
        _accum(q, np.einsum("bt,btd->bd", ds, S_scores.data, optimize=True))

    return _make(ctx, (S_vals, S_scores, q), backward)


def pool_max(x: Tensor, groups: int) -> Tensor:
    """Max over the example axis: (G*n, d) reshaped to (G, n, d) -> (G, d).

    Ties route gradient to the first maximal element (deterministic), so
    duplicated example rows are exact no-ops.
    """
    total, d = x.data.shape
    n = total // groups
    if groups * n != total:
        raise ValueError(f"rows {total} not divisible by groups {groups}")
    cube = x.data.reshape(groups, n, d)
    idx = cube.argmax(axis=1)  # (G, d)
    out = np.take_along_axis(cube, idx[:, None, :], axis=1)[:, 0, :]

    def backward(g):
        dcube = np.zeros_like(cube)
        np.put_along_axis(dcube, idx[:, None, :], g[:, None, :], axis=1)
        _accum(x, dcube.reshape(total, d))

    return _make(out, (x,), backward)


def masked_nll(logits: Tensor, targets: np.ndarray, weights: np.ndarray) -> Tensor:
    """Sum over rows of weight * negative-log-softmax(target). Scalar output."""
    t = np.asarray(targets, dtype=np.int64)
    w = np.asarray(weights, dtype=logits.data.dtype)
    z = logits.data
    m = z.max(axis=1, keepdims=True)
    ez = np.exp(z - m)
    sez = ez.sum(axis=1, keepdims=True)
    lse = (m + np.log(sez))[:, 0]
    nll = lse - z[np.arange(len(t)), t]
    loss = np.asarray((nll * w).sum(), dtype=z.dtype)

    def backward(g):
        gg = float(g)
        soft = ez / sez
        soft[np.arange(len(t)), t] -= 1.0
        _accum(logits, soft * (w * gg)[:, None])

    return _make(loss, (logits,), backward)


def log_softmax_np(logits: np.ndarray) -> np.ndarray:
    """Numerically stable log-softmax on raw arrays (decode-time scoring)."""
    m = logits.max(axis=-1, keepdims=True)
    z = logits - m
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))
