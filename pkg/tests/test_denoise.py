# tests/test_denoise.py
import numpy as np
import pytest

from thgsp.builder import adjacency_tensor, laplacian, signal_tensor
from thgsp.config import DenoiseConfig
from thgsp.denoise import (
    denoise_features,
    fixed_point,
    gradient_leading,
    iterate,
    iterate_limit,
    measured_rate,
    objective,
    one_step,
)
from thgsp.errors import ConsistencyError, DivergenceError, ShapeError
from thgsp.hypergraph import Hypergraph
from thgsp.talg import SymTensor3, Tube, bcirc, t_product, t_transpose, unfold, zeros

from conftest import random_hypergraph, random_tensor


def _instance(seed: int, n: int = 6, order: int = 3):
    rng = np.random.default_rng(seed)
    g = random_hypergraph(rng, n, order, 8)
    a_s = adjacency_tensor(g, order)
    x = signal_tensor(rng.standard_normal((n, 1)), order)
    return a_s, x, rng


def _sym_laplacian(rng, n, n_s):
    a = random_tensor(rng, n, n, n_s) * 0.2
    return laplacian(0.5 * (a + t_transpose(a)))


def test_objective_at_y_equal_x():
    a_s, x, _ = _instance(0)
    lap = laplacian(a_s)
    got = objective(x, x, lap, 0.7).values
    want = 0.7 * t_product(t_transpose(x), t_product(lap, x)).data[:, 0, 0]
    np.testing.assert_allclose(got, want, atol=1e-12)
    assert not objective(x, x, lap, 0.0).values.any()


def test_objective_matches_bcirc_quadratic_form():
    rng = np.random.default_rng(1)
    x, y = random_tensor(rng, 4, 1, 5), random_tensor(rng, 4, 1, 5)
    lap = laplacian(random_tensor(rng, 4, 4, 5))
    u = y - x
    want = bcirc(u).T @ unfold(u) + 0.3 * bcirc(y).T @ bcirc(lap) @ unfold(y)
    np.testing.assert_allclose(objective(y, x, lap, 0.3).values, want.ravel(), atol=1e-10)


def test_objective_sums_columns():
    rng = np.random.default_rng(2)
    x, y = random_tensor(rng, 3, 2, 3), random_tensor(rng, 3, 2, 3)
    lap = laplacian(zeros(3, 3, 3))
    cols = [objective(SymTensor3(y.data[:, :, [d]]), SymTensor3(x.data[:, :, [d]]), lap, 0.5) for d in range(2)]
    np.testing.assert_allclose(objective(y, x, lap, 0.5).values, (cols[0] + cols[1]).values, atol=1e-12)


def test_objective_shape_mismatch():
    rng = np.random.default_rng(3)
    with pytest.raises(ShapeError):
        objective(random_tensor(rng, 3, 1, 3), random_tensor(rng, 4, 1, 3), laplacian(zeros(3, 3, 3)), 1.0)


def test_gradient_special_cases():
    a_s, x, _ = _instance(4)
    lap = laplacian(a_s)
    assert gradient_leading(x, x, lap, 0.0).max_abs() == 0.0
    assert gradient_leading(x, x, lap, 0.4).allclose(0.8 * t_product(lap, x), atol=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(100 + seed)
    n, n_s, b = 3, 5, float(rng.uniform(0.1, 2.0))
    lap = _sym_laplacian(rng, n, n_s)
    x, y = random_tensor(rng, n, 1, n_s), random_tensor(rng, n, 1, n_s)
    grad = gradient_leading(y, x, lap, b).data
    h = 1e-6
    fd = np.zeros_like(grad)
    for idx in np.ndindex(grad.shape):
        up, down = y.data.copy(), y.data.copy()
        up[idx] += h
        down[idx] -= h
        jp = objective(SymTensor3(up), x, lap, b).leading
        jm = objective(SymTensor3(down), x, lap, b).leading
        fd[idx] = (jp - jm) / (2 * h)
    np.testing.assert_allclose(fd, grad, rtol=1e-6, atol=1e-7)


@pytest.mark.parametrize("b", [0.1, 0.5, 2.0])
@pytest.mark.parametrize("seed", range(20))
def test_one_step_is_shifting(seed, b):
    a_s, x, _ = _instance(500 + seed, n=3 + seed % 10)
    got = one_step(x, a_s, b, 1.0 / (2.0 * b))
    want = t_product(a_s, x)
    assert got.allclose(want, atol=1e-10 * max(1.0, want.max_abs()))


def test_one_step_zero_rate_is_identity():
    a_s, x, _ = _instance(6)
    np.testing.assert_array_equal(one_step(x, a_s, 0.5, 0.0).data, x.data)


def test_one_step_is_a_gradient_step():
    a_s, x, rng = _instance(7)
    b, c = float(rng.uniform(0.1, 1.0)), float(rng.uniform(0.1, 1.0))
    want = x - c * gradient_leading(x, x, laplacian(a_s), b)
    assert one_step(x, a_s, b, c).allclose(want, atol=1e-12)


def test_iterate_zero_steps():
    a_s, x, _ = _instance(8)
    y, trace = iterate(x, a_s, DenoiseConfig(K=0))
    np.testing.assert_array_equal(y.data, x.data)
    assert len(trace) == 1


def test_iterate_converges_to_fixed_point():
    a_s, x, _ = _instance(9)
    cfg = DenoiseConfig(b=0.5, c=0.2, K=200)
    assert cfg.contraction_bound == pytest.approx(0.4)
    y, trace = iterate(x, a_s, cfg)
    assert (y - iterate_limit(x, a_s, cfg)).max_abs() <= 1e-8
    assert measured_rate(trace) <= cfg.contraction_bound + 0.05


def test_fixed_point_is_stationary():
    a_s, x, _ = _instance(10)
    y = fixed_point(x, a_s, 0.3)
    res = gradient_leading(y, x, laplacian(a_s), 0.3)
    assert res.max_abs() <= 1e-7 * (1 + x.max_abs())


def test_fixed_point_limits():
    _, x, _ = _instance(11)
    n, n_s = x.n_rows, x.n_slices
    assert fixed_point(x, zeros(n, n, n_s), 0.25).allclose(x * (1 / 1.25), atol=1e-12)
    a_s, x, _ = _instance(12)
    assert fixed_point(x, a_s, 1e-8).allclose(x, atol=1e-6)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5])
def test_alpha_mode_matches_explicit_b_c(alpha):
    a_s, x, _ = _instance(13)
    by_alpha = DenoiseConfig(alpha=alpha, K=6, tol=1e-300)
    explicit = DenoiseConfig(b=alpha / 2.0, c=(1.0 - alpha) / alpha, K=6, tol=1e-300)
    assert (by_alpha.b, by_alpha.c) == (explicit.b, explicit.c)
    ya, ta = iterate(x, a_s, by_alpha)
    yb, tb = iterate(x, a_s, explicit)
    np.testing.assert_array_equal(ya.data, yb.data)
    assert [s.monitor for s in ta] == [s.monitor for s in tb]


def test_alpha_mode_is_personalised_propagation():
    a_s, x, _ = _instance(14)
    alpha = 0.3
    y, _ = iterate(x, a_s, DenoiseConfig(alpha=alpha, K=3, tol=1e-300))
    want = x
    for _ in range(3):
        want = alpha * x + (1 - alpha) * t_product(a_s, want)
    assert y.allclose(want, atol=1e-12)


def test_monitor_decreases_on_regular_hypergraph():
    n = 6
    g = Hypergraph(n, tuple(tuple(sorted({i, (i + 1) % n, (i + 2) % n})) for i in range(n)))
    a_s = adjacency_tensor(g)
    x = signal_tensor(np.random.default_rng(15).standard_normal((n, 1)), 3)
    _, trace = iterate(x, a_s, DenoiseConfig(b=0.5, c=0.2, K=40, tol=1e-300))
    mons = [s.monitor for s in trace]
    scale = max(abs(m) for m in mons)
    for prev, cur in zip(mons[1:], mons[2:]):
        assert cur <= prev + 1e-12 * scale


def test_divergence_is_reported():
    a_s, x, _ = _instance(16)
    cfg = DenoiseConfig(b=2.0, c=2.0, K=100)
    with pytest.raises(DivergenceError) as ei:
        iterate(x, a_s, cfg)
    assert ei.value.bound == pytest.approx(cfg.contraction_bound)


def test_denoise_features_with_noise():
    g = Hypergraph(8, tuple(tuple(sorted({i, (i + 1) % 8, (i + 2) % 8})) for i in range(8)))
    clean = np.ones((8, 1))
    res = denoise_features(g, clean, DenoiseConfig(alpha=0.5, K=100), noise_sigma=0.3, seed=1)
    assert res.limit_gap < 1e-8
    assert res.error_observed > 0 and np.isfinite(res.error_denoised)
    summary = res.summary()
    assert summary["order"] == 3
    assert summary["contraction_bound"] == pytest.approx(0.5)


def test_denoise_features_without_noise():
    g = Hypergraph.from_edges([(0, 1, 2), (2, 3)])
    res = denoise_features(g, np.ones((4, 2)), DenoiseConfig(K=0))
    assert res.error_observed is None
    np.testing.assert_array_equal(res.denoised.data, res.observed.data)


def test_tube_leading_is_squared_norm():
    x = random_tensor(np.random.default_rng(17), 3, 1, 5)
    lap = laplacian(zeros(3, 3, 5))
    t = objective(x * 2.0, x, lap, 0.0)
    assert isinstance(t, Tube)
    assert t.leading == pytest.approx(float(np.sum(x.data ** 2)))


def test_non_finite_stationary_point_is_reported(monkeypatch):
    a_s, x, _ = _instance(31)
    monkeypatch.setattr(
        "thgsp.denoise.solver.t_solve", lambda system, rhs: SymTensor3(np.full(rhs.data.shape, np.nan))
    )
    with pytest.raises(ConsistencyError, match="non-finite"):
        fixed_point(x, a_s, 0.5)
