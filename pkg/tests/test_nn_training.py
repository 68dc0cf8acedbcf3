# tests/test_nn_training.py
import csv

import numpy as np
import pytest

from thgsp.builder import shift_operands
from thgsp.config import GridConfig, ModelConfig, TrainConfig
from thgsp.errors import CheckpointError, ConfigError, DatasetError, ShapeError, TrainingDivergedError
from thgsp.hypergraph import Dataset
from thgsp.nn import (
    Adam,
    Model,
    Trainer,
    cross_entropy,
    evaluate,
    grid_search,
    load_checkpoint,
    prepare_operands,
    readout,
    run_protocol,
    save_checkpoint,
    thgin_forward,
    train,
    uses_slice_sum,
    write_grid_csv,
    write_metrics_csv,
)
from thgsp.nn.grid import grid_cells, with_hidden
from thgsp.nn.loss import accuracy, loss
from thgsp.rng import derive_seed

from conftest import random_hypergraph


def tiny_dataset(seed: int = 0, n: int = 6, d: int = 3, order: int = 3) -> Dataset:
    rng = np.random.default_rng(seed)
    g = random_hypergraph(rng, n, order, 5)
    labels = np.arange(n) % 2
    train_mask = np.zeros(n, bool)
    train_mask[: n // 2] = True
    val_mask = ~train_mask
    return Dataset(g, rng.standard_normal((n, d)), labels, train_mask, val_mask, np.zeros(n, bool), name="tiny")


def _cfg(**kw) -> ModelConfig:
    base = {"layer_dims": [3, 4, 2], "activation": "tanh", "seed": 1}
    return ModelConfig(**{**base, **kw})


def _fd_grads(model_cfg, weights, ops, ds, weight_decay, h=1e-6):
    out = []
    for i, w in enumerate(weights):
        g = np.zeros_like(w)
        for idx in np.ndindex(w.shape):
            vals = []
            for sign in (1.0, -1.0):
                ws = [x.copy() for x in weights]
                ws[i][idx] += sign * h
                lv, _, _ = Model(model_cfg, ws).loss_and_grads(ops, ds.labels, ds.train_mask, weight_decay)
                vals.append(lv)
            g[idx] = (vals[0] - vals[1]) / (2 * h)
        out.append(g)
    return out


VARIANTS = [
    {"variant": "thgin", "K": 3, "alpha": 0.2},
    {"variant": "thgin", "K": 3, "alpha": 0.2, "tensor_path": True},
    {"variant": "thgin", "K": 2, "alpha": 0.1, "readout": "leading_slice"},
    {"variant": "thgcn"},
    {"variant": "thgcn", "stacked": True},
    {"variant": "mlp"},
    {"variant": "clique", "K": 2, "alpha": 0.3},
]


@pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: "-".join(f"{k}={v[k]}" for k in v))
@pytest.mark.parametrize("seed", range(3))
def test_gradients_match_finite_differences(variant, seed):
    ds = tiny_dataset(seed)
    cfg = _cfg(seed=seed, **variant)
    ops = prepare_operands(ds, cfg)
    model = Model(cfg)
    _, grads, _ = model.loss_and_grads(ops, ds.labels, ds.train_mask, 0.01)
    fd = _fd_grads(cfg, model.weights, ops, ds, 0.01)
    for g, f in zip(grads, fd):
        np.testing.assert_allclose(g, f, rtol=1e-5, atol=1e-8)


@pytest.mark.parametrize("seed", range(20))
def test_thgin_gradients_over_seeds(seed):
    ds = tiny_dataset(100 + seed)
    cfg = _cfg(seed=seed, variant="thgin", K=3, alpha=0.15)
    ops = prepare_operands(ds, cfg)
    model = Model(cfg)
    _, grads, _ = model.loss_and_grads(ops, ds.labels, ds.train_mask)
    for g, f in zip(grads, _fd_grads(cfg, model.weights, ops, ds, 0.0)):
        np.testing.assert_allclose(g, f, rtol=1e-5, atol=1e-8)


def test_gradients_at_order_four():
    ds = tiny_dataset(5, n=5, order=4)
    cfg = _cfg(variant="thgin", K=2, alpha=0.3)
    ops = prepare_operands(ds, cfg, 4)
    assert ops.mode == "slice_sum" and ops.n_nodes == 5
    model = Model(cfg)
    _, grads, _ = model.loss_and_grads(ops, ds.labels, ds.train_mask, 0.01)
    for g, f in zip(grads, _fd_grads(cfg, model.weights, ops, ds, 0.01)):
        np.testing.assert_allclose(g, f, rtol=1e-5, atol=1e-8)


@pytest.mark.parametrize("order", [3, 4])
@pytest.mark.parametrize("variant", [{"variant": "thgin", "K": 3, "alpha": 0.2}, {"variant": "thgcn"}])
def test_slice_sum_path_matches_tensor_path(order, variant):
    ds = tiny_dataset(7, n=5, order=order)
    fast_cfg = _cfg(**variant, activation="relu")
    slow_cfg = _cfg(**variant, activation="relu", tensor_path=True)
    assert uses_slice_sum(fast_cfg) and not uses_slice_sum(slow_cfg)
    fast = Model(fast_cfg).logits(prepare_operands(ds, fast_cfg, order))
    slow = Model(slow_cfg).logits(prepare_operands(ds, slow_cfg, order))
    np.testing.assert_allclose(fast, slow, atol=1e-10)


def test_tensor_path_is_layer_stack():
    ds = tiny_dataset(8)
    cfg = _cfg(variant="thgin", K=3, alpha=0.25, tensor_path=True)
    model = Model(cfg)
    a_s, x_s = shift_operands(ds.graph, ds.features, 3)
    want = readout(thgin_forward(x_s, a_s, model.weights, 0.25, 3, "tanh"))
    np.testing.assert_allclose(model.logits(prepare_operands(ds, cfg, 3)), want, atol=1e-12)


def test_thgcn_model_equals_one_step_thgin():
    ds = tiny_dataset(9)
    a = Model(_cfg(variant="thgcn", tensor_path=True))
    b = Model(_cfg(variant="thgin", K=1, alpha=0.0, tensor_path=True))
    assert a.cfg.K == 1 and a.cfg.alpha == 0.0
    np.testing.assert_array_equal(
        a.logits(prepare_operands(ds, a.cfg)), b.logits(prepare_operands(ds, b.cfg))
    )


def test_model_rejects_wrong_weights_and_operands():
    ds = tiny_dataset(10)
    with pytest.raises(ShapeError):
        Model(_cfg(), [np.zeros((3, 3)), np.zeros((3, 2))])
    ops = prepare_operands(ds, _cfg(variant="mlp"))
    with pytest.raises(ShapeError):
        Model(_cfg()).logits(ops)


def test_stacking_needs_thgcn():
    with pytest.raises(ValueError):
        _cfg(variant="thgin", stacked=True)


def test_uniform_logits_loss_is_log_c():
    logits = np.zeros((4, 3))
    assert loss(logits, np.array([0, 1, 2, 0]), np.ones(4, bool)) == pytest.approx(np.log(3))


def test_confident_logits_loss_vanishes():
    labels = np.array([0, 1])
    logits = np.array([[50.0, 0.0], [0.0, 50.0]])
    assert cross_entropy(logits, labels, np.ones(2, bool)) < 1e-20


def test_weight_decay_term():
    w = [np.ones((2, 2))]
    base = loss(np.zeros((2, 2)), np.array([0, 1]), np.ones(2, bool))
    assert loss(np.zeros((2, 2)), np.array([0, 1]), np.ones(2, bool), w, 0.1) == pytest.approx(base + 0.2)


def test_empty_mask_is_an_error():
    with pytest.raises(DatasetError):
        loss(np.zeros((3, 2)), np.zeros(3, int), np.zeros(3, bool))
    assert np.isnan(accuracy(np.zeros((3, 2)), np.zeros(3, int), np.zeros(3, bool)))


def test_adam_first_step():
    p = np.array([1.0, -2.0, 0.5])
    g = np.array([0.3, -0.1, 0.0])
    opt = Adam(lr=0.1)
    opt.step([p], [g])
    np.testing.assert_allclose(p, [1.0, -2.0, 0.5] - 0.1 * g / (np.abs(g) + 1e-8))


def test_adam_state_round_trip():
    rng = np.random.default_rng(0)
    p1 = [rng.standard_normal(3)]
    opt = Adam(lr=0.05)
    for _ in range(3):
        opt.step(p1, [rng.standard_normal(3)])
    p2 = [p1[0].copy()]
    clone = Adam.from_state_dict(opt.state_dict())
    g = rng.standard_normal(3)
    opt.step(p1, [g])
    clone.step(p2, [g])
    np.testing.assert_array_equal(p1[0], p2[0])
    with pytest.raises(CheckpointError):
        Adam.from_state_dict({"lr": 0.1})


def test_zero_learning_rate_keeps_weights(small_dataset):
    cfg = ModelConfig(layer_dims=[4, 8, 2], seed=3)
    res = train(small_dataset, cfg, TrainConfig(lr=0.0, epochs=5))
    for w, w0 in zip(res.best.weights, Model(cfg).weights):
        np.testing.assert_array_equal(w, w0)
    assert len({m.train_acc for m in res.history}) == 1


def test_training_is_deterministic(small_dataset):
    cfg = ModelConfig(layer_dims=[4, 8, 2], seed=5)
    tcfg = TrainConfig(epochs=20)
    a = train(small_dataset, cfg, tcfg)
    b = train(small_dataset, cfg, tcfg)
    assert a.history == b.history
    for wa, wb in zip(a.best.weights, b.best.weights):
        np.testing.assert_array_equal(wa, wb)


def test_training_lowers_loss(small_dataset):
    res = train(small_dataset, ModelConfig(layer_dims=[4, 16, 2], seed=0), TrainConfig(epochs=60))
    assert res.history[-1].train_loss < res.history[0].train_loss
    assert res.best_epoch >= 1


def test_patience_stops_early(small_dataset):
    res = train(small_dataset, ModelConfig(layer_dims=[4, 2]), TrainConfig(lr=0.0, epochs=50, patience=2))
    assert res.stopped_early
    assert len(res.history) == 3


def test_non_finite_features_abort_training(small_dataset):
    bad = Dataset(
        small_dataset.graph,
        np.full_like(small_dataset.features, np.nan),
        small_dataset.labels,
        small_dataset.train_mask,
        small_dataset.val_mask,
        small_dataset.test_mask,
    )
    with pytest.raises(TrainingDivergedError) as ei:
        train(bad, ModelConfig(layer_dims=[4, 2]), TrainConfig(epochs=3))
    assert ei.value.epoch == 1


def test_metrics_csv(tmp_path, small_dataset):
    res = train(small_dataset, ModelConfig(layer_dims=[4, 2]), TrainConfig(epochs=4))
    p = write_metrics_csv(res.history, tmp_path / "metrics.csv")
    rows = list(csv.reader(p.read_text(encoding="utf-8").splitlines()))
    assert rows[0] == ["epoch", "train_loss", "train_acc", "val_acc"]
    assert [r[0] for r in rows[1:]] == ["1", "2", "3", "4"]


def _trainer(ds, epochs=6):
    return Trainer(ds, ModelConfig(layer_dims=[4, 8, 2], seed=2), TrainConfig(epochs=epochs))


def test_json_checkpoint_round_trips_byte_for_byte(tmp_path, small_dataset):
    t = _trainer(small_dataset)
    for _ in range(3):
        t.run_epoch()
    first = save_checkpoint(t.checkpoint(), tmp_path / "a.json")
    second = save_checkpoint(load_checkpoint(first), tmp_path / "b.json")
    assert first.read_bytes() == second.read_bytes()


def test_npz_checkpoint_loads_same_record(tmp_path, small_dataset):
    t = _trainer(small_dataset)
    for _ in range(2):
        t.run_epoch()
    ckpt = t.checkpoint()
    back = load_checkpoint(save_checkpoint(ckpt, tmp_path / "c.npz"))
    assert back.epoch == ckpt.epoch and back.model_config == ckpt.model_config
    for a, b in zip(back.weights, ckpt.weights):
        np.testing.assert_array_equal(a, b)
    for a, b in zip(back.optimizer["v"], ckpt.optimizer["v"]):
        np.testing.assert_array_equal(a, b)
    assert back.rng_state == ckpt.rng_state


@pytest.mark.parametrize("suffix", [".json", ".npz"])
def test_resume_reproduces_next_epoch(tmp_path, small_dataset, suffix):
    t = _trainer(small_dataset)
    for _ in range(4):
        t.run_epoch()
    path = save_checkpoint(t.checkpoint(), tmp_path / f"resume{suffix}")
    expected = t.run_epoch()
    resumed = Trainer.from_checkpoint(load_checkpoint(path), small_dataset)
    got = resumed.run_epoch()
    assert got.epoch == expected.epoch == 5
    assert abs(got.train_loss - expected.train_loss) <= 1e-12


def test_bad_checkpoints(tmp_path):
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / "missing.json")
    (tmp_path / "v.json").write_text('{"version": 99}', encoding="utf-8")
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / "v.json")
    (tmp_path / "x.json").write_text("not json", encoding="utf-8")
    with pytest.raises(CheckpointError):
        load_checkpoint(tmp_path / "x.json")


def test_evaluate_reports_every_split(small_dataset):
    cfg = ModelConfig(layer_dims=[4, 2])
    scores = evaluate(Model(cfg), prepare_operands(small_dataset, cfg), small_dataset)
    assert set(scores) == {"train", "val", "test"}
    assert all(0.0 <= v <= 1.0 for v in scores.values())


def test_protocol_uses_consecutive_seeds(small_dataset):
    res = run_protocol(small_dataset, ModelConfig(layer_dims=[4, 2]), TrainConfig(epochs=3), runs=3, base_seed=4)
    assert res.seeds == [4, 5, 6]
    assert len(res.test_accs) == 3
    assert res.std >= 0.0 and 0.0 <= res.mean <= 1.0


def test_protocol_is_independent_of_workers(small_dataset):
    cfg, tcfg = ModelConfig(layer_dims=[4, 2]), TrainConfig(epochs=3)
    serial = run_protocol(small_dataset, cfg, tcfg, runs=3)
    threaded = run_protocol(small_dataset, cfg, tcfg, runs=3, workers=3)
    assert serial.runs == threaded.runs
    assert all(0.0 <= r["peak_train"] <= 1.0 for r in serial.runs)


def test_one_cell_grid_is_a_single_run(small_dataset):
    base = ModelConfig(layer_dims=[4, 8, 2])
    tcfg = TrainConfig(epochs=5)
    out = grid_search(small_dataset, GridConfig(Ks=[2], alphas=[0.2], repeats=1, seed=7), base, tcfg)
    cfg = base.model_copy(update={"K": 2, "alpha": 0.2, "seed": derive_seed(7, 0, 0)})
    ops = prepare_operands(small_dataset, cfg)
    single = evaluate(Model(cfg, train(small_dataset, cfg, tcfg, operands=ops).best.weights), ops, small_dataset)
    assert out.rows[0].mean_acc == single["test"]
    assert out.best_config.K == 2 and out.best_config.alpha == 0.2


def test_full_grid_table(tmp_path, small_dataset):
    grid = GridConfig(repeats=1)
    out = grid_search(small_dataset, grid, ModelConfig(layer_dims=[4, 2]), TrainConfig(epochs=2))
    p = write_grid_csv(out.rows, tmp_path / "grid.csv")
    rows = list(csv.reader(p.read_text(encoding="utf-8").splitlines()))
    assert rows[0] == ["K", "alpha", "lr", "weight_decay", "hidden", "mean_acc", "std_acc", "n_runs"]
    assert len(rows) == 26
    assert rows[1][:5] == ["1", "0.1", "0.01", "0.0005", ""] and rows[-1][:2] == ["5", "0.5"]


def test_grid_is_independent_of_workers(small_dataset):
    base, tcfg = ModelConfig(layer_dims=[4, 2]), TrainConfig(epochs=3)
    serial = grid_search(small_dataset, GridConfig(Ks=[1, 2], alphas=[0.1, 0.5], repeats=2), base, tcfg)
    threaded = grid_search(small_dataset, GridConfig(Ks=[1, 2], alphas=[0.1, 0.5], repeats=2, workers=3), base, tcfg)
    assert [r.test_accs for r in serial.rows] == [r.test_accs for r in threaded.rows]


def test_grid_sweeps_optimiser_and_width(small_dataset):
    base, tcfg = ModelConfig(layer_dims=[4, 8, 2]), TrainConfig(epochs=2)
    grid = GridConfig(
        Ks=[2], alphas=[0.1], lrs=[0.01, 0.001], weight_decays=[0.005, 0.0005], hiddens=[3, 5], repeats=1
    )
    cells = grid_cells(grid, tcfg)
    assert len(cells) == 8
    head = [(c.lr, c.weight_decay, c.hidden) for c in cells[:3]]
    assert head == [(0.01, 0.005, 3), (0.01, 0.005, 5), (0.01, 0.0005, 3)]
    out = grid_search(small_dataset, grid, base, tcfg)
    assert len(out.rows) == 8
    row = out.rows[5]
    cfg = base.model_copy(update={"K": 2, "alpha": 0.1, "layer_dims": [4, 5, 2], "seed": derive_seed(0, 5, 0)})
    tuned = tcfg.model_copy(update={"lr": 0.001, "weight_decay": 0.005})
    ops = prepare_operands(small_dataset, cfg)
    single = evaluate(Model(cfg, train(small_dataset, cfg, tuned, operands=ops).best.weights), ops, small_dataset)
    assert (row.lr, row.weight_decay, row.hidden) == (0.001, 0.005, 5)
    assert row.mean_acc == single["test"]
    assert out.best_config.layer_dims[1] == out.best.hidden
    assert out.best_train_config.lr == out.best.lr


def test_with_hidden():
    assert with_hidden([4, 8, 8, 2], 16) == [4, 16, 16, 2]
    assert with_hidden([4, 2], 16) == [4, 16, 2]
    assert with_hidden([4, 8, 2], None) == [4, 8, 2]


def test_grid_needs_a_propagating_variant(small_dataset):
    with pytest.raises(ConfigError):
        grid_search(small_dataset, GridConfig(Ks=[1], alphas=[0.1], repeats=1), ModelConfig(layer_dims=[4, 2], variant="thgcn"), TrainConfig(epochs=1))
