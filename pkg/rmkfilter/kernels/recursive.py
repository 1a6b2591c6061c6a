"""
Pila de kernels γ recursivos κ^i(m, n), i = 1..P.

Dos evaluadores con el mismo contrato:
  - kernel_stack_naive: aplicación directa de la recursión, O(P·N³).
  - kernel_stack_fast: recursión por columnas con vectores r, O(P·N²).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from rmkfilter.kernels.base import embed_series
from rmkfilter.kernels.stream import StreamKernelState
from rmkfilter.models.config import RecursiveKernelConfig
from rmkfilter.utils.errors import ConfigError, SeriesTooShortError


@dataclass
class KernelStack:
    """P matrices N x N sobre una misma secuencia temporal."""
    taps: np.ndarray

    @property
    def n_taps(self) -> int:
        return int(self.taps.shape[0])

    @property
    def length(self) -> int:
        return int(self.taps.shape[1])

    def tap(self, i: int) -> np.ndarray:
        """Matriz del tap i (base 1)."""
        if not 1 <= i <= self.n_taps:
            raise ConfigError(f"Tap fuera de rango: {i} (P={self.n_taps})")
        return self.taps[i - 1]

    def entry(self, i: int, m: int, n: int) -> float:
        """κ^i(m, n) con índices en base 1."""
        if not (1 <= m <= self.length and 1 <= n <= self.length):
            raise ConfigError(f"Índices fuera de rango: m={m}, n={n} (N={self.length})")
        return float(self.tap(i)[m - 1, n - 1])


def _prepare(cfg: RecursiveKernelConfig, series) -> np.ndarray:
    points = embed_series(series, cfg.embed_len)
    if points.shape[0] == 0:
        raise SeriesTooShortError("La serie debe tener al menos una muestra")
    return points


def kernel_stack_naive(cfg: RecursiveKernelConfig, series) -> KernelStack:
    """Evaluación de referencia, fila a fila, con los cuatro términos de la recursión."""
    points = _prepare(cfg, series)
    n = points.shape[0]
    mu, mu_bar = cfg.mu, cfg.mu_bar

    # geo[j] = μ² μ̄^(j-1), j >= 2
    geo = np.zeros(n + 1)
    if n > 1:
        geo[2:] = mu ** 2 * mu_bar ** np.arange(1, n)

    taps = np.zeros((cfg.taps, n, n))
    taps[0] = cfg.base.gram(points)

    for p in range(1, cfg.taps):
        prev = taps[p - 1]
        cur = taps[p]
        for a in range(1, n):
            row = mu_bar ** 2 * cur[a - 1, :-1] + mu ** 2 * prev[a - 1, :-1]
            if a >= 2:
                row += geo[2 : a + 1] @ prev[a - 2 :: -1, :-1]
            row += np.convolve(prev[a - 1], geo[:n])[1:n]
            cur[a, 1:] = row
        taps[p] = np.tril(cur) + np.tril(cur, -1).T

    return KernelStack(taps=taps)


def kernel_stack_columns(
    cfg: RecursiveKernelConfig,
    series,
    n_rows: Optional[int] = None,
    convolution: str = "recursive",
) -> np.ndarray:
    """κ^i(m, n) para m < n_rows y todos los n, como array (P, n_rows, N).

    Las columnas n >= n_rows (instantes posteriores al entrenamiento) se
    obtienen con la misma recursión truncada a las primeras n_rows filas.
    """
    points = _prepare(cfg, series)
    n = points.shape[0]
    rows = n if n_rows is None else int(n_rows)
    if not 1 <= rows <= n:
        raise ConfigError(f"n_rows debe estar en [1, {n}], recibido {n_rows}")

    base = cfg.base.pairwise(points[:rows], points)
    base[:, :rows] = cfg.base.gram(points[:rows])

    state = StreamKernelState(cfg, row_cap=rows, convolution=convolution)
    out = np.zeros((cfg.taps, rows, n))
    for t in range(n):
        length = min(t + 1, rows)
        cols = state.push(points[t], base_column=base[:length, t])
        for p, col in enumerate(cols):
            out[p, :length, t] = col

    # Triángulo inferior del bloque cuadrado por simetría
    for p in range(cfg.taps):
        block = out[p, :, :rows]
        out[p, :, :rows] = np.triu(block) + np.triu(block, 1).T
    return out


def kernel_stack_fast(
    cfg: RecursiveKernelConfig,
    series,
    convolution: str = "recursive",
) -> KernelStack:
    """Pila completa mediante la recursión eficiente por columnas."""
    return KernelStack(taps=kernel_stack_columns(cfg, series, None, convolution))


def composite_average(stack: KernelStack) -> np.ndarray:
    """Kernel compuesto (1/P) Σ_i κ^i(m, n)."""
    return np.mean(stack.taps, axis=0)
