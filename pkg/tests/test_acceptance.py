# tests/test_acceptance.py
import numpy as np
import pytest

from thgsp.config import ModelConfig, TrainConfig
from thgsp.hypergraph.synthetic import planted_communities
from thgsp.nn import prepare_operands, run_protocol, train


def _model(ds, variant: str = "thgin", seed: int = 0) -> ModelConfig:
    return ModelConfig(
        layer_dims=[ds.num_features, 64, ds.num_classes],
        variant=variant,
        alpha=0.1,
        K=3,
        seed=seed,
    )


TRAIN = TrainConfig(lr=0.01, weight_decay=0.0005, epochs=200)


def test_thgin_fits_planted_communities():
    ds = planted_communities(max_size=3, seed=0)
    res = train(ds, _model(ds), TRAIN)
    assert max(m.train_acc for m in res.history) >= 0.9


def test_order_four_operands_are_pooled():
    ds = planted_communities(seed=0)
    ops = prepare_operands(ds, _model(ds))
    assert ops.mode == "slice_sum"
    assert ops.x.shape == (37820, ds.num_features)
    assert ops.n_nodes == 60


@pytest.mark.slow
def test_thgin_beats_mlp_over_ten_seeds():
    ds = planted_communities(seed=0)
    assert ds.graph.order == 4
    thgin = _model(ds)
    ours = run_protocol(ds, thgin, TRAIN, runs=10, operands=prepare_operands(ds, thgin), workers=4)
    assert np.mean([r["peak_train"] for r in ours.runs]) >= 0.9
    baseline = run_protocol(ds, _model(ds, "mlp"), TRAIN, runs=10)
    assert ours.mean >= baseline.mean + 0.05
