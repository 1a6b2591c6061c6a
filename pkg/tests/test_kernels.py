import numpy as np
import pytest

from rmkfilter.kernels import (
    KernelStack,
    StreamKernelState,
    base_kernel_eval,
    composite_average,
    embed,
    embed_series,
    kernel_stack_columns,
    kernel_stack_fast,
    kernel_stack_naive,
    stream_push,
)
from rmkfilter.models.config import (
    BaseKernel,
    LinearKernel,
    PolynomialKernel,
    RBFKernel,
    RecursiveKernelConfig,
)
from rmkfilter.utils.errors import CapacityError, ConfigError, SeriesTooShortError, ShapeMismatchError


# ------------------------------------------------------------------
# Kernels base y embedding
# ------------------------------------------------------------------

def test_base_kernel_examples():
    assert base_kernel_eval(RBFKernel(sigma=1.0), 0.7, 0.7) == 1.0
    assert base_kernel_eval(LinearKernel(), 2.0, 3.0) == 6.0
    assert base_kernel_eval(RBFKernel(sigma=1.0), 0.0, 2.0) == pytest.approx(np.exp(-2.0), abs=1e-12)


def test_base_kernel_dimension_mismatch():
    with pytest.raises(ShapeMismatchError):
        base_kernel_eval(RBFKernel(), [1.0, 2.0], [1.0])


def test_invalid_kernel_parameters():
    with pytest.raises(ConfigError):
        RBFKernel(sigma=0.0)
    with pytest.raises(ConfigError):
        PolynomialKernel(degree=0)
    with pytest.raises(ConfigError):
        RecursiveKernelConfig(mu=0.0)
    with pytest.raises(ConfigError):
        RecursiveKernelConfig(taps=0)


def test_kernel_dict_dispatch():
    k = BaseKernel.from_dict(PolynomialKernel(degree=3, offset=0.5).to_dict())
    assert k == PolynomialKernel(degree=3, offset=0.5)
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=2.0), taps=3, mu=0.4, embed_len=2)
    assert RecursiveKernelConfig.from_dict(cfg.to_dict()) == cfg


def test_embed_examples():
    s = [1.0, 2.0, 3.0]
    np.testing.assert_array_equal(embed(s, 1, 2), [2.0])
    np.testing.assert_array_equal(embed(s, 3, 3), [3.0, 2.0, 1.0])
    np.testing.assert_array_equal(embed(s, 3, 2), [2.0, 1.0, 0.0])


def test_embed_series_matches_pointwise(rng):
    s = rng.standard_normal(12)
    points = embed_series(s, 4)
    assert points.shape == (12, 4)
    for n in range(1, 13):
        np.testing.assert_array_equal(points[n - 1], embed(s, 4, n))
    # L = 0 equivale a la entrada escalar
    np.testing.assert_array_equal(embed_series(s, 0)[:, 0], s)


# ------------------------------------------------------------------
# Oráculo: simulación explícita de estados en el espacio de features
# ------------------------------------------------------------------

def _poly2_features(points: np.ndarray) -> np.ndarray:
    """Mapa explícito de (⟨x, y⟩ + 1)²."""
    d = points.shape[1]
    cols = []
    for i in range(d):
        for j in range(i, d):
            w = 1.0 if i == j else np.sqrt(2.0)
            cols.append(w * points[:, i] * points[:, j])
    cols.extend(np.sqrt(2.0) * points[:, i] for i in range(d))
    cols.append(np.ones(points.shape[0]))
    return np.stack(cols, axis=1)


def _simulated_stack(features: np.ndarray, taps: int, mu: float) -> np.ndarray:
    n, dim = features.shape
    states = np.zeros((taps, n, dim))
    states[0] = features
    for p in range(1, taps):
        for t in range(1, n):
            states[p, t] = (1 - mu) * states[p, t - 1] + mu * states[p - 1, t - 1]
    return np.einsum("pad,pbd->pab", states, states)


@pytest.mark.parametrize("n", [10, 50, 200])
@pytest.mark.parametrize("taps", [1, 3, 5])
@pytest.mark.parametrize("mu", [0.3, 0.5, 0.9, 1.0])
def test_naive_matches_explicit_states(n, taps, mu):
    for seed in range(20):
        series = np.random.default_rng(seed).uniform(-1, 1, n)
        lin = RecursiveKernelConfig(base=LinearKernel(), taps=taps, mu=mu, embed_len=2)
        expected = _simulated_stack(embed_series(series, 2), taps, mu)
        np.testing.assert_allclose(kernel_stack_naive(lin, series).taps, expected, rtol=0, atol=1e-10)

        poly = RecursiveKernelConfig(base=PolynomialKernel(degree=2, offset=1.0), taps=taps, mu=mu, embed_len=1)
        expected = _simulated_stack(_poly2_features(embed_series(series, 1)), taps, mu)
        np.testing.assert_allclose(kernel_stack_naive(poly, series).taps, expected, rtol=0, atol=1e-10)


def test_naive_worked_example(linear_cfg):
    stack = kernel_stack_naive(linear_cfg, [1.0, 2.0, 3.0])
    assert stack.entry(2, 3, 3) == pytest.approx(1.5625, abs=1e-12)
    assert stack.entry(2, 2, 3) == pytest.approx(0.625, abs=1e-12)
    assert np.all(stack.tap(2)[0, :] == 0)
    assert np.all(stack.tap(2)[:, 0] == 0)


def test_entry_rejects_out_of_range_indices(linear_cfg):
    stack = kernel_stack_naive(linear_cfg, [1.0, 2.0, 3.0])
    for i, m, n in [(2, 0, 3), (2, 3, 0), (2, 4, 1), (2, 1, -1), (3, 1, 1), (0, 1, 1)]:
        with pytest.raises(ConfigError):
            stack.entry(i, m, n)


def test_empty_series_is_rejected(linear_cfg):
    with pytest.raises(SeriesTooShortError):
        kernel_stack_naive(linear_cfg, [])
    with pytest.raises(SeriesTooShortError):
        kernel_stack_fast(linear_cfg, [])


def test_delay_line_at_mu_one(rng):
    series = rng.standard_normal(30)
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=1.3), taps=3, mu=1.0, embed_len=2)
    stack = kernel_stack_naive(cfg, series)
    gram = cfg.base.gram(embed_series(series, 2))
    assert stack.entry(3, 4, 5) == gram[1, 2]
    for i in range(1, 4):
        tap = stack.tap(i)
        np.testing.assert_allclose(tap[i - 1 :, i - 1 :], gram[: 30 - i + 1, : 30 - i + 1], rtol=0, atol=1e-14)
        assert np.all(tap[: i - 1, :] == 0)


# ------------------------------------------------------------------
# Evaluador rápido y streaming
# ------------------------------------------------------------------

@pytest.mark.parametrize("n", [64, 200])
def test_fast_matches_naive(base_kernel, rng, n):
    series = rng.standard_normal(n)
    cfg = RecursiveKernelConfig(base=base_kernel, taps=5, mu=0.4, embed_len=3)
    naive = kernel_stack_naive(cfg, series).taps
    for convolution in ("recursive", "direct", "fft"):
        fast = kernel_stack_fast(cfg, series, convolution=convolution).taps
        assert np.max(np.abs(fast - naive)) < 1e-9


def test_fast_matches_naive_at_512(rng):
    series = rng.standard_normal(512)
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=1.0), taps=5, mu=0.5)
    diff = kernel_stack_fast(cfg, series).taps - kernel_stack_naive(cfg, series).taps
    assert np.max(np.abs(diff)) < 1e-9


def test_tap_one_is_base_gram_bitwise(base_kernel, rng):
    series = rng.standard_normal(40)
    cfg = RecursiveKernelConfig(base=base_kernel, taps=3, mu=0.6, embed_len=2)
    gram = base_kernel.gram(embed_series(series, 2))
    assert np.array_equal(kernel_stack_naive(cfg, series).tap(1), gram)
    assert np.array_equal(kernel_stack_fast(cfg, series).tap(1), gram)


def test_symmetry_and_psd(base_kernel, rng):
    series = rng.standard_normal(60)
    cfg = RecursiveKernelConfig(base=base_kernel, taps=4, mu=0.3, embed_len=2)
    for stack in (kernel_stack_naive(cfg, series), kernel_stack_fast(cfg, series)):
        for i in range(1, 5):
            tap = stack.tap(i)
            assert np.array_equal(tap, tap.T)
            eig = np.linalg.eigvalsh(tap)
            assert eig[0] >= -1e-8 * max(eig[-1], 1.0)


def test_r_vector_example():
    cfg = RecursiveKernelConfig(base=LinearKernel(), taps=1, mu=0.5)
    state = StreamKernelState(cfg)
    for x in [1.0, 2.0, 3.0, 4.0]:
        state.push(x)
    assert state.r_vector(1)[2] == pytest.approx(0.625, abs=1e-12)


def test_r_vectors_vanish_at_mu_one(rng):
    cfg = RecursiveKernelConfig(base=RBFKernel(), taps=3, mu=1.0)
    state = StreamKernelState(cfg)
    for x in rng.standard_normal(10):
        state.push(x)
    for tap in range(1, 4):
        assert np.all(state.r_vector(tap) == 0)


def test_stream_worked_example(linear_cfg):
    state = StreamKernelState(linear_cfg)
    first = stream_push(state, 1.0)
    assert first[0].tolist() == [1.0]
    assert first[1].tolist() == [0.0]
    stream_push(state, 2.0)
    cols = stream_push(state, 3.0)
    np.testing.assert_allclose(cols[1], [0.0, 0.625, 1.5625], rtol=0, atol=1e-12)


def test_stream_matches_batch(base_kernel, rng):
    series = rng.standard_normal(50)
    cfg = RecursiveKernelConfig(base=base_kernel, taps=4, mu=0.7, embed_len=2)
    stack = kernel_stack_naive(cfg, series)
    state = StreamKernelState(cfg, keep_history=True)
    for point in embed_series(series, 2):
        state.push(point)
    for i in range(1, 5):
        for n, col in enumerate(state.columns(i)):
            np.testing.assert_allclose(col, stack.tap(i)[: n + 1, n], rtol=0, atol=1e-9)


def test_stream_budget():
    cfg = RecursiveKernelConfig(taps=2)
    state = StreamKernelState(cfg, budget=2)
    state.push(0.1)
    state.push(0.2)
    with pytest.raises(CapacityError):
        state.push(0.3)
    assert state.n == 2


def test_columns_require_history(linear_cfg):
    with pytest.raises(ConfigError):
        StreamKernelState(linear_cfg).columns(1)


def test_columns_with_row_cap_extend_training_block(rng):
    series = rng.standard_normal(70)
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=0.9), taps=4, mu=0.5, embed_len=3)
    full = kernel_stack_naive(cfg, series).taps
    capped = kernel_stack_columns(cfg, series, n_rows=30)
    assert capped.shape == (4, 30, 70)
    np.testing.assert_allclose(capped, full[:, :30, :], rtol=0, atol=1e-9)


def test_composite_average(rng):
    single = KernelStack(taps=rng.standard_normal((1, 4, 4)))
    assert np.array_equal(composite_average(single), single.tap(1))

    pair = KernelStack(taps=np.stack([np.full((3, 3), 4.0), np.full((3, 3), 2.0)]))
    assert composite_average(pair)[0, 0] == 3.0

    stack = kernel_stack_fast(RecursiveKernelConfig(taps=3), rng.standard_normal(20))
    manual = (stack.tap(1) + stack.tap(2) + stack.tap(3)) / 3
    np.testing.assert_allclose(composite_average(stack), manual, rtol=0, atol=1e-15)
