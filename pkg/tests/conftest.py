import numpy as np
import pytest

from rmkfilter.models.config import LinearKernel, PolynomialKernel, RBFKernel, RecursiveKernelConfig
from rmkfilter.models.series import SeriesDataset


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(params=["rbf", "linear", "polynomial"])
def base_kernel(request):
    return {
        "rbf": RBFKernel(sigma=0.8),
        "linear": LinearKernel(),
        "polynomial": PolynomialKernel(degree=2, offset=1.0),
    }[request.param]


@pytest.fixture
def linear_cfg():
    return RecursiveKernelConfig(base=LinearKernel(), taps=2, mu=0.5, embed_len=1)


@pytest.fixture
def small_dataset(rng):
    """Serie AR no lineal corta con particiones 40/20/20."""
    n = 80
    x = np.zeros(n)
    e = rng.standard_normal(n)
    for k in range(1, n):
        x[k] = 0.6 * x[k - 1] + 0.3 * np.tanh(e[k - 1]) + 0.1 * e[k]
    y = np.roll(x, -1)
    y[-1] = 0.6 * x[-1]
    return SeriesDataset(x=x, y=y, train_end=40, val_end=60, name="toy")
