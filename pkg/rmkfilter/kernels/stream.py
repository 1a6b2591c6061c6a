"""
Cálculo incremental del kernel recursivo, una columna por muestra.

Convenciones internas (base 0): la columna t del tap p contiene κ^p(a, t) para
a = 0..t (truncada a ``row_cap`` filas). Para p > 0 la fila 0 es siempre cero
(estado inicial nulo).
"""

from typing import Optional

import numpy as np
from scipy.signal import fftconvolve, lfilter

from rmkfilter.models.config import RecursiveKernelConfig
from rmkfilter.utils.errors import CapacityError, ConfigError, ShapeMismatchError


CONVOLUTIONS = ("recursive", "direct", "fft")


class StreamKernelState:
    """Estado de la recursión de columnas del kernel γ recursivo."""

    def __init__(
        self,
        config: RecursiveKernelConfig,
        budget: Optional[int] = None,
        row_cap: Optional[int] = None,
        convolution: str = "recursive",
        keep_history: bool = False,
    ):
        if convolution not in CONVOLUTIONS:
            raise ConfigError(f"Convolución desconocida: {convolution}")
        if budget is not None and budget < 1:
            raise ConfigError("El presupuesto debe ser >= 1")
        if row_cap is not None and row_cap < 1:
            raise ConfigError("row_cap debe ser >= 1")

        self.config = config
        self.budget = budget
        self.row_cap = row_cap
        self.convolution = convolution
        self.keep_history = keep_history
        self.n = 0

        self._mu = config.mu
        self._mu_bar = config.mu_bar
        self._samples: Optional[np.ndarray] = None
        self._geo = np.zeros(0)
        self._prev: list[np.ndarray] = []
        self._prev2: list[np.ndarray] = []
        self._r: list[np.ndarray] = [np.zeros(0) for _ in range(config.taps)]
        self._history: list[list[np.ndarray]] = [[] for _ in range(config.taps)]

    @property
    def taps(self) -> int:
        return self.config.taps

    @property
    def samples(self) -> np.ndarray:
        """Muestras (embebidas) almacenadas en el diccionario."""
        if self._samples is None:
            return np.zeros((0, 0))
        return self._samples[: self._stored]

    @property
    def _stored(self) -> int:
        return self.n if self.row_cap is None else min(self.n, self.row_cap)

    def r_vector(self, tap: int) -> np.ndarray:
        """r^i_n(m) para m = 1..n (índice m - 1) tras la última muestra; tap en base 1."""
        return self._r[tap - 1].copy()

    def columns(self, tap: int) -> list[np.ndarray]:
        """Columnas históricas κ^i(·, 1..n) del tap (requiere keep_history)."""
        if not self.keep_history:
            raise ConfigError("El estado no guarda historial (keep_history=False)")
        return list(self._history[tap - 1])

    def push(self, x_new, base_column: Optional[np.ndarray] = None) -> list[np.ndarray]:
        """Añade la muestra n y devuelve κ^i(·, n) para todos los taps."""
        if self.budget is not None and self.n >= self.budget:
            raise CapacityError(
                f"Presupuesto de {self.budget} muestras agotado; el llamador decide la política"
            )

        x_new = np.atleast_1d(np.asarray(x_new, dtype=np.float64))
        t = self.n
        length = t + 1 if self.row_cap is None else min(t + 1, self.row_cap)

        self._store_sample(x_new, t)
        if base_column is None:
            base_column = self.config.base.pairwise(self._samples[:length], x_new[None, :])[:, 0]
        elif base_column.shape[0] != length:
            raise ShapeMismatchError(
                f"Columna base de longitud {base_column.shape[0]}, se esperaba {length}"
            )

        self._ensure_geo(length + 1)
        self._update_r(t, length)

        new_cols = [np.asarray(base_column, dtype=np.float64)]
        for p in range(1, self.taps):
            new_cols.append(self._tap_column(p, t, length))

        self._prev2 = self._prev
        self._prev = new_cols
        if self.keep_history:
            for p, col in enumerate(new_cols):
                self._history[p].append(col)
        self.n += 1
        return new_cols

    def _store_sample(self, x_new: np.ndarray, t: int):
        if self.row_cap is not None and t >= self.row_cap:
            return
        if self._samples is None:
            self._samples = np.zeros((16, x_new.shape[0]))
        if x_new.shape[0] != self._samples.shape[1]:
            raise ShapeMismatchError(
                f"Muestra de dimensión {x_new.shape[0]}, se esperaba {self._samples.shape[1]}"
            )
        if t >= self._samples.shape[0]:
            grown = np.zeros((2 * self._samples.shape[0], self._samples.shape[1]))
            grown[:t] = self._samples[:t]
            self._samples = grown
        self._samples[t] = x_new

    def _ensure_geo(self, size: int):
        # geo[j] = μ² μ̄^(j-1) para j >= 2, cero para j < 2
        if self._geo.shape[0] >= size:
            return
        size = max(size, 2 * self._geo.shape[0])
        geo = np.zeros(size)
        if size > 2:
            geo[2:] = self._mu ** 2 * self._mu_bar ** np.arange(1, size - 1)
        self._geo = geo

    def _update_r(self, t: int, length: int):
        # r_t[a] = μ̄ (r_{t-1}[a] + μ² κ(a-1, t-2)) y entrada nueva a = t por suma directa
        mu2 = self._mu ** 2
        for q in range(self.taps):
            r = np.zeros(length)
            if t >= 2:
                k = min(t - 1, length - 1)
                r[1 : k + 1] = self._mu_bar * (self._r[q][1 : k + 1] + mu2 * self._prev2[q][:k])
                if t < length:
                    prev_q = self._prev[q]
                    r[t] = np.dot(self._geo[2 : t + 1], prev_q[t - 2 :: -1])
            self._r[q] = r

    def _tap_column(self, p: int, t: int, length: int) -> np.ndarray:
        col = np.zeros(length)
        if t == 0 or length == 1:
            return col

        mu2 = self._mu ** 2
        prev_p = self._prev[p]
        prev_low = self._prev[p - 1]
        head = length - 1

        k = np.zeros(length)
        k[: min(prev_low.shape[0], length)] = prev_low[:length]
        conv = self._geometric_convolution(k)

        col[1:] = (
            self._mu_bar ** 2 * prev_p[:head]
            + mu2 * prev_low[:head]
            + conv[1:length]
            + self._r[p - 1][1:length]
        )
        return col

    def _geometric_convolution(self, k: np.ndarray) -> np.ndarray:
        """Σ_{j>=2} μ² μ̄^(j-1) k(a - j) para cada a (término 3)."""
        length = k.shape[0]
        if self.convolution == "recursive":
            mb = self._mu_bar
            return self._mu ** 2 * lfilter([0.0, 0.0, mb], [1.0, -mb], k)
        weights = self._geo[:length]
        if self.convolution == "fft":
            return fftconvolve(k, weights)[:length]
        return np.convolve(k, weights)[:length]


def stream_push(state: StreamKernelState, x_new) -> list[np.ndarray]:
    """Forma funcional de StreamKernelState.push."""
    return state.push(x_new)
