import numpy as np
import pytest

from rmkfilter.kernels import StreamKernelState, embed_series, kernel_stack_fast
from rmkfilter.models.config import LinearKernel, RBFKernel, RecursiveKernelConfig, StackingConfig
from rmkfilter.models.series import SeriesDataset
from rmkfilter.regression import (
    ParameterGrid,
    StackedBatchModel,
    fit_stacking,
    grid_search,
    krr_fit,
    loo_predictions,
    predict_series,
    stacked_predict,
    train_baseline,
    train_batch,
)
from rmkfilter.regression.grid_search import _rank_key
from rmkfilter.regression.krr import relative_residual
from rmkfilter.regression.stacking import normal_equation_residual, subgradient_violation
from rmkfilter.utils.errors import (
    ConfigError,
    IllConditionedError,
    RankDeficientError,
    ShapeMismatchError,
    SeriesTooShortError,
    SplitError,
)


def _random_psd(rng, n=30, rank=None):
    a = rng.standard_normal((n, rank or n))
    return a @ a.T


# ------------------------------------------------------------------
# KRR
# ------------------------------------------------------------------

def test_krr_identity_examples():
    np.testing.assert_allclose(krr_fit(np.eye(3), [1.0, 2.0, 3.0], 0.0), [1.0, 2.0, 3.0])
    np.testing.assert_allclose(krr_fit(np.eye(2), [2.0, 4.0], 1.0), [1.0, 2.0])


def test_krr_residual_certificate(rng):
    kernel = _random_psd(rng)
    y = rng.standard_normal(30)
    beta = krr_fit(kernel, y, 0.1)
    assert relative_residual(kernel + 0.1 * np.eye(30), beta, y) < 1e-8


def test_krr_rejects_non_symmetric(rng):
    kernel = _random_psd(rng, 5)
    kernel[0, 1] += 1.0
    with pytest.raises(ConfigError):
        krr_fit(kernel, np.ones(5), 0.1)


def test_krr_singular_without_regularization():
    with pytest.raises(IllConditionedError, match="aumenta"):
        krr_fit(np.ones((3, 3)), [1.0, 2.0, 3.0], 0.0)


def test_loo_matches_explicit_refit(rng):
    kernel = _random_psd(rng, 12, rank=4)
    y = rng.standard_normal(12)
    loo = loo_predictions(kernel, y, 0.5)
    for m in range(12):
        keep = np.arange(12) != m
        beta = np.linalg.solve(kernel[np.ix_(keep, keep)] + 0.5 * np.eye(11), y[keep])
        assert loo[m] == pytest.approx(kernel[m, keep] @ beta, abs=1e-9)


# ------------------------------------------------------------------
# Combinador α
# ------------------------------------------------------------------

def test_stacking_exact_single_predictor(rng):
    y = rng.standard_normal(20)
    np.testing.assert_allclose(fit_stacking(y[:, None], y, StackingConfig()), [1.0], atol=1e-12)


def test_stacking_orthonormal_projection(rng):
    q, _ = np.linalg.qr(rng.standard_normal((25, 4)))
    y = rng.standard_normal(25)
    np.testing.assert_allclose(fit_stacking(q, y, StackingConfig()), q.T @ y, atol=1e-12)


def test_plain_stacking_certificate(rng):
    F = rng.standard_normal((100, 5))
    y = F @ [0.3, -1.0, 0.0, 2.0, 0.5] + 0.1 * rng.standard_normal(100)
    alpha = fit_stacking(F, y, StackingConfig())
    assert normal_equation_residual(F, y, alpha) < 1e-8


def test_plain_stacking_errors(rng):
    with pytest.raises(ConfigError):
        fit_stacking(rng.standard_normal((3, 5)), np.ones(3), StackingConfig())
    F = rng.standard_normal((10, 2))
    with pytest.raises(RankDeficientError):
        fit_stacking(np.hstack([F, F[:, :1]]), np.ones(10), StackingConfig())


def test_ridge_stacking_closed_form(rng):
    F = rng.standard_normal((40, 3))
    y = rng.standard_normal(40)
    alpha = fit_stacking(F, y, StackingConfig(mode="ridge", lambda2=0.7))
    expected = np.linalg.solve(F.T @ F + 1.4 * np.eye(3), F.T @ y)
    np.testing.assert_allclose(alpha, expected, atol=1e-10)


def test_sparse_stacking_zero_solution(rng):
    F = rng.standard_normal((50, 4))
    y = rng.standard_normal(50)
    lam = np.max(np.abs(F.T @ y))
    alpha = fit_stacking(F, y, StackingConfig(mode="sparse", lambda1=lam))
    assert np.all(alpha == 0)


def test_sparse_stacking_subgradient_condition(rng):
    F = rng.standard_normal((80, 6))
    y = F @ [1.0, 0.0, -0.5, 0.0, 0.0, 2.0] + 0.2 * rng.standard_normal(80)
    lam = 5.0
    alpha = fit_stacking(F, y, StackingConfig(mode="sparse", lambda1=lam))
    g = F.T @ (y - F @ alpha)
    assert np.all(np.abs(g) <= lam + 1e-6)
    active = alpha != 0
    assert active.any()
    np.testing.assert_allclose(np.abs(g[active]), lam, atol=1e-6)
    assert subgradient_violation(F, y, alpha, lam) < 1e-6


def test_sparse_stacking_warns_without_convergence(rng):
    F = rng.standard_normal((30, 5))
    F[:, 1] = F[:, 0] + 1e-3 * rng.standard_normal(30)
    y = rng.standard_normal(30)
    with pytest.warns(Warning):
        fit_stacking(F, y, StackingConfig(mode="sparse", lambda1=1e-3, max_iter=1))


def test_fixed_alpha_length_is_checked():
    with pytest.raises(ShapeMismatchError):
        fit_stacking(np.ones((4, 2)), np.ones(4), StackingConfig(mode="fixed", fixed_alpha=(1.0,)))


# ------------------------------------------------------------------
# Predicción apilada
# ------------------------------------------------------------------

def _model(betas, alpha, taps=2):
    return StackedBatchModel(
        config=RecursiveKernelConfig(taps=taps),
        c=0.0,
        betas=np.asarray(betas, dtype=float),
        alpha=np.asarray(alpha, dtype=float),
        train_series=np.zeros(np.shape(betas)[1]),
    )


def test_stacked_predict_hand_example():
    model = _model([[1.0, 2.0], [0.5, -1.0]], [2.0, 3.0])
    cols = np.array([[0.1, 0.2], [0.3, 0.4]])
    # 2·(0.1 + 0.4) + 3·(0.15 - 0.4)
    assert stacked_predict(model, cols) == pytest.approx(1.0 - 0.75, abs=1e-15)


def test_stacked_predict_zero_alpha_and_mismatch():
    model = _model([[1.0, 2.0], [0.5, -1.0]], [0.0, 0.0])
    assert stacked_predict(model, np.ones((2, 2))) == 0.0
    with pytest.raises(ShapeMismatchError):
        stacked_predict(model, np.ones((3, 2)))


# ------------------------------------------------------------------
# Entrenamiento batch y extensión a test
# ------------------------------------------------------------------

def test_single_tap_pipeline_matches_plain_krr(small_dataset):
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=0.7), taps=4, mu=0.5, embed_len=3)
    n = small_dataset.train_end
    model = train_baseline(small_dataset.x[:n], small_dataset.y[:n], cfg, 0.1, "rbf-embedding")
    assert model.n_taps == 1
    np.testing.assert_array_equal(model.alpha, [1.0])

    points = embed_series(small_dataset.x, 3)
    beta = np.linalg.solve(cfg.base.gram(points[:n]) + 0.1 * np.eye(n), small_dataset.y[:n])
    expected = cfg.base.pairwise(points[60:], points[:n]) @ beta
    predictions = predict_series(model, small_dataset.x, (60, 80))
    np.testing.assert_allclose(predictions, expected, rtol=0, atol=1e-9)
    np.testing.assert_array_equal(model.predict(small_dataset.x, (60, 80)), predictions)


def test_linear_delay_line_matches_linear_model(rng):
    x = rng.standard_normal(60)
    y = 0.8 * x - 0.4 * np.roll(x, 1) + 0.05 * rng.standard_normal(60)
    cfg = RecursiveKernelConfig(base=LinearKernel(), taps=3, mu=1.0, embed_len=1)
    c = 0.3
    model = train_batch(x[:40], y[:40], cfg, c)

    # Tap i ve la copia retrasada x_{n-i+1}: ridge escalar por tap
    delayed = np.stack([np.concatenate([np.zeros(i), x[: 60 - i]]) for i in range(3)])
    weights = (delayed[:, :40] @ y[:40]) / (np.einsum("ij,ij->i", delayed[:, :40], delayed[:, :40]) + c)
    F = (delayed[:, :40] * weights[:, None]).T
    alpha = np.linalg.lstsq(F, y[:40], rcond=None)[0]
    np.testing.assert_allclose(model.alpha, alpha, atol=1e-8)
    np.testing.assert_allclose(model.in_sample(), F @ alpha, atol=1e-8)

    expected = (alpha * weights) @ delayed[:, 40:]
    np.testing.assert_allclose(predict_series(model, x, (40, 60)), expected, atol=1e-8)


def test_stacking_not_worse_than_best_tap(small_dataset):
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=1.0), taps=5, mu=0.4, embed_len=2)
    n = small_dataset.train_end
    y = small_dataset.y[:n]
    model = train_batch(small_dataset.x[:n], y, cfg, 1e-2)
    stacked_mse = np.mean((model.in_sample() - y) ** 2)
    tap_mse = np.mean((model.tap_predictions - y[:, None]) ** 2, axis=0)
    assert stacked_mse <= tap_mse.min() + 1e-12


def test_in_sample_range_reproduces_training_fit(small_dataset):
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=1.0), taps=3, mu=0.6, embed_len=2)
    n = small_dataset.train_end
    model = train_batch(small_dataset.x[:n], small_dataset.y[:n], cfg, 1e-2)
    np.testing.assert_allclose(predict_series(model, small_dataset.x, (0, n)), model.in_sample(), atol=1e-12)


def test_next_point_matches_streaming_prediction(small_dataset):
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=1.0), taps=3, mu=0.6, embed_len=2)
    n = small_dataset.train_end
    model = train_batch(small_dataset.x[:n], small_dataset.y[:n], cfg, 1e-2)

    state = StreamKernelState(cfg)
    for point in embed_series(small_dataset.x[: n + 1], 2):
        cols = state.push(point)
    expected = sum(model.alpha[i] * model.betas[i] @ cols[i][:n] for i in range(3))
    assert predict_series(model, small_dataset.x, (n, n + 1))[0] == pytest.approx(expected, abs=1e-9)


def test_predict_series_rejects_overlap_and_foreign_history(small_dataset):
    cfg = RecursiveKernelConfig(taps=2, embed_len=1)
    n = small_dataset.train_end
    model = train_batch(small_dataset.x[:n], small_dataset.y[:n], cfg, 1e-2)
    with pytest.raises(SplitError):
        predict_series(model, small_dataset.x, (n - 5, n + 5))
    other = small_dataset.x.copy()
    other[3] += 1.0
    with pytest.raises(SplitError):
        predict_series(model, other, (n, n + 5))


def test_loo_stacking_and_composite_average(small_dataset):
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=1.0), taps=4, mu=0.5, embed_len=2)
    n = small_dataset.train_end
    loo = train_batch(small_dataset.x[:n], small_dataset.y[:n], cfg, 1e-2, loo=True)
    assert loo.alpha.shape == (4,)

    comp = train_baseline(small_dataset.x[:n], small_dataset.y[:n], cfg, 1e-2, "composite-average")
    np.testing.assert_allclose(comp.alpha, np.full(4, 0.25))
    stack = kernel_stack_fast(cfg, small_dataset.x[:n])
    average = np.mean(stack.taps, axis=0)
    np.testing.assert_allclose(comp.in_sample(), average @ comp.betas[0], atol=1e-10)


def test_train_batch_requires_enough_samples():
    with pytest.raises(SeriesTooShortError):
        train_batch([0.1, 0.2], [0.1, 0.2], RecursiveKernelConfig(taps=3), 0.1)


# ------------------------------------------------------------------
# Búsqueda en rejilla
# ------------------------------------------------------------------

def _tiny_grid(**overrides):
    axes = {"sigma": [1.0], "mu": [0.5], "taps": [2], "c": [1e-2], "embed_len": [2], "lam": [0.1]}
    axes.update(overrides)
    return ParameterGrid(**axes)


def test_single_point_grid(small_dataset):
    result = grid_search(small_dataset, _tiny_grid(), "stacking")
    assert result.best_params == {"sigma": 1.0, "mu": 0.5, "taps": 2, "c": 1e-2, "embed_len": 2, "lam": 0.0}
    assert len(result.evaluations) == 1


def test_grid_selects_lowest_validation_error(small_dataset):
    result = grid_search(small_dataset, _tiny_grid(sigma=[0.8, 50.0], taps=[2, 3]), "stacking")
    scores = [row["nmse_db"] for row in result.evaluations]
    assert result.best_nmse == np.nanmin(scores)


def test_grid_is_deterministic_across_workers(small_dataset):
    grid = _tiny_grid(mu=[0.3, 0.9], c=[1e-3, 1e-1])
    serial = grid_search(small_dataset, grid, "sparse-stacking")
    threaded = grid_search(small_dataset, grid, "sparse-stacking", n_jobs=3)
    assert serial.best_params == threaded.best_params
    assert serial.to_frame().equals(threaded.to_frame())


def test_tie_break_prefers_smaller_models():
    rows = [
        {"nmse_db": -10.0, "taps": 4, "embed_len": 1, "c": 1e-3},
        {"nmse_db": -10.0, "taps": 2, "embed_len": 4, "c": 1e-3},
        {"nmse_db": -10.0, "taps": 2, "embed_len": 1, "c": 1e-2},
        {"nmse_db": -10.0, "taps": 2, "embed_len": 1, "c": 1e-4},
    ]
    assert min(rows, key=_rank_key) == rows[3]


def test_grid_errors(small_dataset):
    with pytest.raises(ConfigError):
        ParameterGrid(sigma=[])
    no_val = SeriesDataset(x=small_dataset.x, y=small_dataset.y, train_end=40, val_end=40)
    with pytest.raises(SplitError):
        grid_search(no_val, _tiny_grid())


def test_failed_grid_points_are_skipped(small_dataset):
    # P = 50 > N = 40: el stacking plain no está definido para ese punto
    result = grid_search(small_dataset, _tiny_grid(taps=[2, 50]), "stacking")
    by_taps = {row["taps"]: row["nmse_db"] for row in result.evaluations}
    assert np.isnan(by_taps[50])
    assert result.best_params["taps"] == 2
