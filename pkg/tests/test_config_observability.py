# tests/test_config_observability.py
import json

import pytest

from thgsp.cli.common import EXIT_FAILED, EXIT_USAGE, exit_code_for
from thgsp.config import (
    DenoiseConfig,
    GridConfig,
    ModelConfig,
    TrainConfig,
    build_config,
    default_out_dir,
    default_seed,
    fft_min_slices,
    load_config_file,
    resolve_config,
)
from thgsp.errors import (
    CheckpointError,
    ConfigError,
    ConsistencyError,
    DatasetError,
    DivergenceError,
    HypergraphError,
    HypergraphParseError,
    ShapeError,
    SingularSliceError,
    TrainingDivergedError,
)
from thgsp.observability import audit_log, audit_path, list_events, list_run, new_run_id


def test_precedence_flags_over_file_over_defaults():
    out = resolve_config({"lr": 0.01, "epochs": 200, "K": 3}, {"lr": 0.1, "epochs": 50}, {"lr": 0.5, "epochs": None})
    assert out == {"lr": 0.5, "epochs": 50, "K": 3}


def test_unknown_file_keys_are_rejected():
    with pytest.raises(ConfigError):
        resolve_config({"lr": 0.01}, {"learning_rate": 0.1}, {})


def test_load_config_file(tmp_path):
    p = tmp_path / "c.yaml"
    p.write_text("weight-decay: 0.001\nK: 4\n", encoding="utf-8")
    assert load_config_file(p) == {"weight_decay": 0.001, "K": 4}
    assert load_config_file(None) == {}


@pytest.mark.parametrize("body", ["- 1\n- 2\n", "model:\n  K: 3\n", "lr=0.1\nK=3\n"])
def test_bad_config_files(tmp_path, body):
    p = tmp_path / "c.yaml"
    p.write_text(body, encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config_file(p)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config_file(tmp_path / "nope.yaml")


def test_environment_defaults(monkeypatch, tmp_path):
    assert default_out_dir() == str(tmp_path / "runs")
    monkeypatch.delenv("THGSP_SEED", raising=False)
    monkeypatch.delenv("THGSP_FFT_MIN_SLICES", raising=False)
    assert default_seed() == 0
    assert fft_min_slices() == 8
    monkeypatch.setenv("THGSP_SEED", "11")
    monkeypatch.setenv("THGSP_FFT_MIN_SLICES", "32")
    assert default_seed() == 11
    assert fft_min_slices() == 32


def test_denoise_config_coefficients():
    cfg = DenoiseConfig(b=0.5, c=0.2)
    assert cfg.keep == pytest.approx(-0.2)
    assert cfg.anchor == pytest.approx(1.0)
    assert cfg.shift == pytest.approx(0.2)
    assert cfg.contraction_bound == pytest.approx(0.4)
    assert cfg.stationary_weight == pytest.approx(0.2)


def test_denoise_alpha_overrides_b_and_c():
    cfg = DenoiseConfig(alpha=0.25, b=3.0, c=3.0)
    assert (cfg.b, cfg.c) == (0.125, 3.0)
    assert cfg.keep == pytest.approx(0.0)


@pytest.mark.parametrize(
    "model,values",
    [
        (DenoiseConfig, {"b": 0.0}),
        (DenoiseConfig, {"alpha": 1.5}),
        (ModelConfig, {"layer_dims": [3]}),
        (ModelConfig, {"layer_dims": [3, 0, 2]}),
        (ModelConfig, {"layer_dims": [3, 2], "alpha": 1.2}),
        (ModelConfig, {"layer_dims": [3, 2], "stacked": True}),
        (ModelConfig, {"layer_dims": [3, 2], "dropout": 0.5}),
        (TrainConfig, {"lr": -0.1}),
        (TrainConfig, {"betas": (0.9, 1.0)}),
        (GridConfig, {"repeats": 0}),
        (GridConfig, {"Ks": []}),
        (GridConfig, {"lrs": [0.01, -0.1]}),
        (GridConfig, {"hiddens": [64, 0]}),
    ],
)
def test_invalid_configs(model, values):
    with pytest.raises(ConfigError):
        build_config(model, values)


def test_thgcn_is_forced_to_one_plain_step():
    cfg = build_config(ModelConfig, {"layer_dims": [3, 2], "variant": "thgcn", "K": 5, "alpha": 0.4})
    assert (cfg.K, cfg.alpha) == (1, 0.0)
    assert build_config(ModelConfig, {"layer_dims": [3, 2], "variant": "thgcn", "stacked": True}).stacked


@pytest.mark.parametrize(
    "exc,code",
    [
        (ConsistencyError("rows"), EXIT_FAILED),
        (DivergenceError("grew", bound=1.2, step=3), EXIT_FAILED),
        (TrainingDivergedError(4, {}), EXIT_FAILED),
        (SingularSliceError(0, 1e18), EXIT_FAILED),
        (HypergraphParseError("bad", line_no=2), EXIT_USAGE),
        (HypergraphError("empty hyperedge"), EXIT_USAGE),
        (DatasetError("masks overlap"), EXIT_USAGE),
        (ConfigError("bad"), EXIT_USAGE),
        (CheckpointError("bad"), EXIT_USAGE),
        (ShapeError("bad"), EXIT_USAGE),
        (FileNotFoundError("x"), EXIT_USAGE),
        (RuntimeError("x"), EXIT_FAILED),
    ],
)
def test_exit_codes(exc, code):
    assert exit_code_for(exc) == code


def test_audit_log_round_trip(tmp_path):
    assert audit_path() == str(tmp_path / "audit.log.jsonl")
    rid = new_run_id("train")
    assert rid.startswith("train-")
    audit_log(run_id=rid, action="train", status="start", params={"lr": 0.01})
    audit_log(run_id="other", action="build", status="ok")
    audit_log(run_id=rid, action="train", status="error", message="diverged", extra={"exit_code": 1})
    events = list_run(rid)
    assert [e["status"] for e in events] == ["start", "error"]
    assert events[0]["params"] == {"lr": 0.01}
    assert events[1]["exit_code"] == 1
    assert len(list_events()) == 3


def test_audit_log_skips_garbage(tmp_path):
    with open(tmp_path / "audit.log.jsonl", "w", encoding="utf-8") as f:
        f.write("not json\n" + json.dumps({"run_id": "r", "status": "ok"}) + "\n")
    assert list_events() == [{"run_id": "r", "status": "ok"}]


def test_new_run_ids_are_unique():
    assert new_run_id("grid") != new_run_id("grid")
