"""Encoder, heads, losses: shapes, analytic values, and corruption stats."""

import math

import numpy as np
import pytest

from deplab.errors import CheckpointError, ShapeError
from deplab.nn import (
    LossWeights,
    ModelConfig,
    Tensor,
    adam_step,
    backward,
    cdp_forward,
    cdp_loss,
    checkpoint_digest,
    ddp_forward,
    ddp_loss,
    encoder_forward,
    init_params,
    joint_loss,
    load_checkpoint,
    mlm_corrupt,
    mlm_loss,
    poly_lr,
    save_checkpoint,
)
from deplab.nn.adam import AdamState
from deplab.nn import tensor as T


def tiny_config(**kw):
    defaults = dict(vocab_size=40, d_model=16, n_layers=2, n_heads=4, ffn_dim=32, max_seq_len=24)
    defaults.update(kw)
    return ModelConfig(**defaults)


def tiny_params(seed=0, **kw):
    return init_params(tiny_config(**kw), seed=seed)


# -- encoder ---------------------------------------------------------------


def test_single_token_shape():
    params = tiny_params()
    h = encoder_forward(params, [2])
    assert h.shape == (1, 16)


def test_oversize_input_rejected():
    params = tiny_params()
    with pytest.raises(ShapeError):
        encoder_forward(params, list(range(25)))


def test_position_sensitivity():
    params = tiny_params()
    a = encoder_forward(params, [2, 7, 9]).value
    b = encoder_forward(params, [2, 9, 7]).value
    assert not np.allclose(a[1], b[1])


def test_zeroed_embeddings_give_zero_outputs():
    params = tiny_params()
    params["emb.token"].value[:] = 0.0
    params["emb.pos"].value[:] = 0.0
    params["final_ln.b"].value[:] = 0.0
    h = encoder_forward(params, [2, 5, 6])
    assert np.allclose(h.value, 0.0)


def test_forward_deterministic():
    params = tiny_params(seed=3)
    ids = [2, 4, 6, 8]
    a = encoder_forward(params, ids).value
    b = encoder_forward(params, ids).value
    assert np.array_equal(a, b)


# -- heads -----------------------------------------------------------------


def test_cdp_zero_bilinear_gives_half():
    params = tiny_params()
    params["cdp.bilinear"].value[:] = 0.0
    h = encoder_forward(params, [2, 5, 6, 7])
    pc = cdp_forward(params, h, [[1], [2, 3]])
    assert np.allclose(pc.value, 0.5)


def test_bilinear_identity_unit_vector():
    params = tiny_params()
    d = params.config.d_model
    params["cdp.reduce.w"].value[:] = np.eye(d)
    params["cdp.reduce.b"].value[:] = 0.0
    params["cdp.bilinear"].value[:] = np.eye(d)
    params["cdp.bias"].value = np.asarray(0.0)
    basis = np.zeros((1, d))
    basis[0, 3] = 1.0
    pc = cdp_forward(params, Tensor(basis), [[0]])
    assert pc.value[0, 0] == pytest.approx(1.0 / (1.0 + math.exp(-1.0)), abs=1e-12)


def test_cdp_asymmetric_in_general():
    params = tiny_params(seed=9)
    h = encoder_forward(params, [2, 5, 6, 7, 8])
    pc = cdp_forward(params, h, [[1], [2], [3, 4]]).value
    assert not np.allclose(pc, pc.T)


def test_ddp_single_token():
    params = tiny_params()
    h = encoder_forward(params, [2])
    assert ddp_forward(params, h).shape == (1, 1)


def test_heads_share_bilinear_form():
    params = tiny_params(seed=4)
    for part in ("reduce.w", "reduce.b", "bilinear", "bias"):
        params.tensors[f"ddp.{part}"].value = params[f"cdp.{part}"].value.copy()
    h = encoder_forward(params, [2, 5, 6])
    # one node per token makes pooling the identity
    pc = cdp_forward(params, h, [[0], [1], [2]])
    pd = ddp_forward(params, h)
    assert np.allclose(pc.value, pd.value, atol=1e-12)


# -- losses ----------------------------------------------------------------


def test_mlm_loss_uniform_logits():
    params = tiny_params()
    params["mlm.w2"].value[:] = 0.0
    params["mlm.b2"].value[:] = 0.0
    h = encoder_forward(params, [2, 5, 6, 7])
    loss = mlm_loss(params, h, [2, 5, 6, 7], [1, 3])
    assert loss.item() == pytest.approx(math.log(params.config.vocab_size), abs=1e-12)


def test_mlm_loss_confident_correct():
    params = tiny_params()
    params["mlm.w2"].value[:] = 0.0
    params["mlm.b2"].value[:] = 0.0
    params["mlm.b2"].value[7] = 200.0
    h = encoder_forward(params, [2, 7, 7])
    loss = mlm_loss(params, h, [2, 7, 7], [1, 2])
    assert loss.item() < 1e-8


def test_mlm_loss_two_position_analytic():
    # probabilities 0.5 and 0.25 on the true token -> (ln2 + ln4) / 2
    cfg = ModelConfig(vocab_size=4, d_model=4, n_layers=1, n_heads=1, ffn_dim=4, max_seq_len=8)
    params = init_params(cfg, seed=0)
    params["mlm.w1"].value[:] = np.eye(4)
    params["mlm.b1"].value[:] = 0.0
    params["mlm.w2"].value[:] = np.eye(4)
    params["mlm.b2"].value[:] = 0.0
    h = Tensor(np.array([[math.log(3.0), 0, 0, 0], [0, 0, 0, 0]]))
    loss = mlm_loss(params, h, [0, 0], [0, 1])
    assert loss.item() == pytest.approx(1.5 * math.log(2.0), abs=1e-12)


def test_mlm_loss_skipped_without_positions():
    params = tiny_params()
    h = encoder_forward(params, [2, 5])
    assert mlm_loss(params, h, [2, 5], []) is None


def test_cdp_loss_all_half():
    p = Tensor(np.full((3, 3), 0.5))
    assert cdp_loss(p, [(0, 1)], 3).item() == pytest.approx(math.log(2.0), abs=1e-12)


def test_cdp_loss_hand_case():
    p = Tensor(np.array([[0.5, 0.9], [0.1, 0.5]]))
    expected = (math.log(2) + math.log(1 / 0.9) + math.log(1 / 0.9) + math.log(2)) / 4
    loss = cdp_loss(p, [(0, 1)], 2)
    assert loss.item() == pytest.approx(expected, abs=1e-12)
    assert loss.item() == pytest.approx(0.3992, abs=1e-4)


def test_cdp_loss_clamped_at_perfect_predictions():
    p = np.zeros((2, 2))
    p[0, 1] = 1.0
    loss = cdp_loss(Tensor(p), [(0, 1)], 2)
    assert np.isfinite(loss.item())
    assert loss.item() < 1e-6


def test_ddp_loss_empty_mask_skipped():
    p = Tensor(np.full((3, 3), 0.5))
    assert ddp_loss(p, [(0, 1)], [0, 0, 0]) is None


def test_ddp_loss_two_masked_tokens():
    p = Tensor(np.full((4, 4), 0.5))
    loss = ddp_loss(p, [(1, 3)], [0, 1, 0, 1])
    assert loss.item() == pytest.approx(math.log(2.0), abs=1e-12)


def test_ddp_loss_hand_case():
    p = np.full((3, 3), 0.2)
    p[0, 2] = 0.8
    loss = ddp_loss(Tensor(p), [(0, 2)], [1, 1, 1])
    assert loss.item() == pytest.approx(-math.log(0.8), abs=1e-12)
    assert loss.item() == pytest.approx(0.2231, abs=5e-5)


def test_joint_loss_weighted_sum():
    out = joint_loss(
        Tensor(np.asarray(0.1)), Tensor(np.asarray(0.05)), Tensor(np.asarray(2.0)),
        LossWeights(5.0, 20.0, 1.0),
    )
    assert out.item() == pytest.approx(3.5, abs=1e-12)


def test_joint_loss_mlm_only_profile():
    weights = LossWeights.from_objectives(["mlm"])
    assert (weights.control, weights.data, weights.masked) == (0.0, 0.0, 1.0)
    out = joint_loss(Tensor(np.asarray(9.9)), None, Tensor(np.asarray(2.0)), weights)
    assert out.item() == pytest.approx(2.0)


def test_joint_loss_all_zero_terms():
    z = Tensor(np.asarray(0.0))
    assert joint_loss(z, z, z, LossWeights()).item() == 0.0


# -- corruption --------------------------------------------------------------


def test_corrupt_cls_only_sequence():
    rng = np.random.default_rng(0)
    corrupted, positions = mlm_corrupt([2], 4, 3, 100, rng)
    assert positions == [] and list(corrupted) == [2]


def test_corrupt_deterministic_under_seed():
    ids = list(range(4, 104))
    a = mlm_corrupt(ids, 4, 3, 200, np.random.default_rng(11))
    b = mlm_corrupt(ids, 4, 3, 200, np.random.default_rng(11))
    assert np.array_equal(a[0], b[0]) and a[1] == b[1]


def test_corrupt_statistics():
    rng = np.random.default_rng(1234)
    vocab = 200
    ids = [2] + [50] * 100000
    corrupted, positions = mlm_corrupt(ids, 4, 3, vocab, rng)
    frac = len(positions) / 100000
    assert 0.145 <= frac <= 0.155
    masked = sum(1 for p in positions if corrupted[p] == 3)
    kept = sum(1 for p in positions if corrupted[p] == 50)
    randomized = len(positions) - masked - kept
    # a random replacement can still draw the original token (1/196 here)
    assert abs(masked / len(positions) - 0.80) < 0.01
    assert abs(randomized / len(positions) - 0.10) < 0.011
    assert abs(kept / len(positions) - 0.10) < 0.011
    assert all(corrupted[p] >= 4 or corrupted[p] == 3 for p in positions)
    assert corrupted[0] == 2  # [CLS] untouched


# -- optimizer ---------------------------------------------------------------


def test_poly_schedule_endpoints():
    assert poly_lr(1e-4, 0, 100) == pytest.approx(1e-4)
    assert poly_lr(1e-4, 50, 100) == pytest.approx(1e-4 * 0.25)
    assert poly_lr(1e-4, 100, 100) == 0.0
    assert poly_lr(1e-4, 150, 100) == 0.0


def test_adam_zero_grad_no_change():
    params = tiny_params()
    before = {n: t.value.copy() for n, t in params.tensors.items()}
    for t in params.tensors.values():
        t.grad = np.zeros_like(t.value)
    adam_step(params, AdamState(), lr0=0.1, horizon=10)
    for name, t in params.tensors.items():
        assert np.array_equal(t.value, before[name])


def test_adam_at_horizon_no_change():
    params = tiny_params()
    before = {n: t.value.copy() for n, t in params.tensors.items()}
    state = AdamState(t=9)
    for t in params.tensors.values():
        t.grad = np.ones_like(t.value)
    adam_step(params, state, lr0=0.1, horizon=10)  # t becomes 10 -> lr 0
    for name, t in params.tensors.items():
        assert np.array_equal(t.value, before[name])


def test_adam_first_step_magnitude():
    cfg = tiny_config()
    params = init_params(cfg, seed=0)
    w = params["cdp.bias"]
    w.value = np.asarray(1.0)
    w.grad = np.asarray(1.0)
    for name, t in params.tensors.items():
        if name != "cdp.bias":
            t.grad = None
    adam_step(params, AdamState(), lr0=0.1, horizon=10**9)
    assert float(w.value) == pytest.approx(1.0 - 0.1, abs=1e-6)


# -- checkpointing -------------------------------------------------------------


def test_checkpoint_roundtrip(tmp_path):
    params = tiny_params(seed=5)
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, params, extra={"note": "unit"})
    loaded, extra = load_checkpoint(path)
    assert extra == {"note": "unit"}
    assert loaded.config == params.config
    for name, t in params.tensors.items():
        assert np.array_equal(loaded[name].value, t.value)


def test_checkpoint_corruption_refused(tmp_path):
    params = tiny_params()
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, params)
    blob = bytearray(path.read_bytes())
    blob[-3] ^= 0xFF
    path.write_bytes(bytes(blob))
    with pytest.raises(CheckpointError):
        load_checkpoint(path)


def test_checkpoint_bytes_deterministic(tmp_path):
    a, b = tmp_path / "a.ckpt", tmp_path / "b.ckpt"
    save_checkpoint(a, tiny_params(seed=8))
    save_checkpoint(b, tiny_params(seed=8))
    assert checkpoint_digest(a) == checkpoint_digest(b)
