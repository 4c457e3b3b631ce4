"""Op-level gradient checks for the autodiff primitives."""

import numpy as np
import pytest

from robustfill.nn import autodiff as ad

RNG = np.random.default_rng(0)


def finite_diff(loss_fn, arrays, step=1e-6):
    """Central differences on every entry of every input array."""
    grads = [np.zeros_like(a) for a in arrays]
    for a, g in zip(arrays, grads):
        flat = a.reshape(-1)
        gf = g.reshape(-1)
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            lp = loss_fn()
            flat[i] = orig - step
            lm = loss_fn()
            flat[i] = orig
            gf[i] = (lp - lm) / (2 * step)
    return grads


def check(build_loss, arrays, tol=1e-6):
    """build_loss(tensors) -> scalar Tensor; compares backward vs finite diff."""
    tensors = [ad.Tensor(a, requires_grad=True) for a in arrays]
    loss = build_loss(tensors)
    loss.backward()
    analytic = [t.grad if t.grad is not None else np.zeros_like(t.data) for t in tensors]
    numeric = finite_diff(lambda: float(build_loss([ad.Tensor(a) for a in arrays]).data), arrays)
    for an, fd in zip(analytic, numeric):
        err = np.abs(an - fd) / np.maximum(np.abs(an) + np.abs(fd), 1e-4)
        assert err.max() < tol, f"max rel err {err.max()}"


def total(t):
    return ad.masked_nll(t, np.zeros(t.data.shape[0], dtype=np.int64), np.ones(t.data.shape[0]))


def weighted_sum(t, w):
    return ad.masked_nll(ad.mul(t, ad.constant(w)), np.zeros(t.data.shape[0], dtype=np.int64), np.ones(t.data.shape[0]))


def test_add_mul_matmul():
    a = RNG.normal(size=(3, 4))
    b = RNG.normal(size=(3, 4))
    w = RNG.normal(size=(4, 5))

    def loss(ts):
        x = ad.mul(ts[0], ts[1])
        y = ad.matmul(x, ts[2])
        return total(y)

    check(loss, [a, b, w])


def test_bias_broadcast():
    x = RNG.normal(size=(4, 5))
    b = RNG.normal(size=(5,))
    check(lambda ts: total(ad.add(ts[0], ts[1])), [x, b])


def test_tanh_sigmoid_scale():
    x = RNG.normal(size=(3, 5))
    check(lambda ts: total(ad.scale(ad.tanh(ts[0]), 1.7)), [x])
    check(lambda ts: total(ad.sigmoid(ts[0])), [x])


def test_concat_slice_reshape():
    a = RNG.normal(size=(3, 4))
    b = RNG.normal(size=(3, 2))

    def loss(ts):
        c = ad.concat([ts[0], ts[1]], axis=1)
        s = ad.slice_cols(c, 1, 6)
        r = ad.reshape(s, (3, 5))
        return total(r)

    check(loss, [a, b])


def test_where_mask():
    a = RNG.normal(size=(4, 3))
    b = RNG.normal(size=(4, 3))
    m = RNG.integers(0, 2, size=(4, 1)).astype(float)
    check(lambda ts: total(ad.where_mask(m, ts[0], ts[1])), [a, b])


def test_embedding_gather():
    table = RNG.normal(size=(7, 4))
    ids = np.array([0, 3, 3, 6])
    check(lambda ts: total(ad.embedding(ts[0], ids)), [table])


def test_repeat_rows():
    a = RNG.normal(size=(3, 4))
    check(lambda ts: total(ad.repeat_rows(ts[0], 3)), [a])


def test_stack_and_project_states():
    s1 = RNG.normal(size=(2, 4))
    s2 = RNG.normal(size=(2, 4))
    w = RNG.normal(size=(4, 4))

    def loss(ts):
        S = ad.stack_states([ts[0], ts[1]])
        P = ad.project_states(S, ts[2])
        return total(ad.reshape(P, (2, 8)))

    check(loss, [s1, s2, w])


def test_attend():
    B, T, d = 3, 4, 5
    S = RNG.normal(size=(B, T, d))
    SP = RNG.normal(size=(B, T, d))
    q = RNG.normal(size=(B, d))
    mask = np.ones((B, T))
    mask[1, 2:] = 0  # padded steps

    def loss(ts):
        ctx = ad.attend(ts[0], ts[1], ts[2], mask)
        return total(ctx)

    check(loss, [S, SP, q])


def test_lstm_cell():
    B, d = 3, 4
    z = RNG.normal(size=(B, 4 * d))
    c = RNG.normal(size=(B, d))

    def loss(ts):
        h, c2 = ad.lstm_cell(ts[0], ts[1])
        return ad.add(total(h), total(c2))

    check(loss, [z, c])


def test_pool_max():
    x = RNG.normal(size=(6, 5))  # 2 groups x 3 examples

    def loss(ts):
        return total(ad.pool_max(ts[0], 2))

    check(loss, [x])


def test_masked_nll_matches_manual():
    logits = RNG.normal(size=(4, 6))
    targets = np.array([1, 0, 5, 2])
    weights = np.array([1.0, 0.5, 0.0, 2.0])
    t = ad.Tensor(logits, requires_grad=True)
    loss = ad.masked_nll(t, targets, weights)
    z = logits - logits.max(axis=1, keepdims=True)
    logp = z - np.log(np.exp(z).sum(axis=1, keepdims=True))
    manual = -(logp[np.arange(4), targets] * weights).sum()
    assert abs(float(loss.data) - manual) < 1e-12
    check(lambda ts: ad.masked_nll(ts[0], targets, weights), [logits])


def test_masked_rows_get_zero_gradient():
    logits = RNG.normal(size=(3, 4))
    t = ad.Tensor(logits, requires_grad=True)
    loss = ad.masked_nll(t, np.array([0, 1, 2]), np.array([1.0, 0.0, 1.0]))
    loss.backward()
    assert np.all(t.grad[1] == 0)


def test_no_grad_builds_no_graph():
    a = ad.Tensor(RNG.normal(size=(2, 2)), requires_grad=True)
    with ad.no_grad():
        out = ad.matmul(a, a)
    assert out._backward is None and out._parents == ()


def test_softmax_rows_normalize():
    logits = RNG.normal(size=(5, 9)) * 10
    lp = ad.log_softmax_np(logits)
    sums = np.exp(lp).sum(axis=1)
    assert np.allclose(sums, 1.0, atol=1e-9)


def test_backward_requires_scalar():
    t = ad.Tensor(RNG.normal(size=(2, 2)), requires_grad=True)
    with pytest.raises(ValueError):
        ad.matmul(t, t).backward()
