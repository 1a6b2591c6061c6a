"""
Kernels base y embeddings con retardo temporal.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from rmkfilter.models.config import BaseKernel


def base_kernel_eval(kernel: BaseKernel, x, y) -> float:
    """κ(x, y) para dos puntos de la misma dimensión."""
    return kernel(x, y)


def embed(series, embed_len: int, n: int) -> np.ndarray:
    """Embedding [x_n, x_{n-1}, ..., x_{n-L+1}] con n en base 1 y relleno de ceros."""
    series = np.asarray(series, dtype=np.float64)
    width = max(embed_len, 1)
    out = np.zeros(width)
    for k in range(width):
        idx = n - 1 - k
        if 0 <= idx < series.shape[0]:
            out[k] = series[idx]
    return out


def embed_series(series, embed_len: int) -> np.ndarray:
    """Embeddings de toda la serie, una fila por instante (N x max(L, 1))."""
    series = np.asarray(series, dtype=np.float64)
    if series.ndim == 2:
        # Ya son puntos vectoriales
        return series
    width = max(embed_len, 1)
    padded = np.concatenate([np.zeros(width - 1), series])
    windows = sliding_window_view(padded, width)
    return np.ascontiguousarray(windows[:, ::-1])
