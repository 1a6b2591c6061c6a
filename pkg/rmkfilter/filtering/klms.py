"""
Filtrado online: P filtros KLMS sobre los taps del kernel recursivo y un
combinador lineal α adaptado por descenso de gradiente instantáneo.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from rmkfilter.kernels.base import embed_series
from rmkfilter.kernels.stream import StreamKernelState
from rmkfilter.models.config import BaseKernel, RecursiveKernelConfig
from rmkfilter.models.results import OnlineReport
from rmkfilter.models.series import SeriesDataset
from rmkfilter.datasets.metrics import nmse, running_mse
from rmkfilter.utils.console import make_progress
from rmkfilter.utils.errors import ConfigError, DivergenceError, SeriesTooShortError

logger = logging.getLogger(__name__)

ALPHA_LIMIT = 1e6
ERROR_LIMIT = 1e12
COMBINER_INPUTS = ("posterior", "prior")


@dataclass
class OnlineFilterState:
    """Estado de RMK-KLMS tras n muestras."""
    stream: StreamKernelState
    eta: float
    nu: float
    alpha: np.ndarray
    combiner_input: str = "posterior"
    last_prior: float = 0.0
    last_taps: Optional[np.ndarray] = None
    _coeffs: np.ndarray = field(default_factory=lambda: np.zeros((0, 0)), repr=False)

    def __post_init__(self):
        if self._coeffs.shape[0] != self.taps:
            self._coeffs = np.zeros((self.taps, 16))

    @property
    def n(self) -> int:
        return self.stream.n

    @property
    def taps(self) -> int:
        return self.stream.taps

    def coefficients(self, tap: int) -> np.ndarray:
        """a^i_1..a^i_n del tap i (base 1)."""
        return self._coeffs[tap - 1, : self.n].copy()

    def _store(self, n: int, values: np.ndarray):
        """Guarda los coeficientes de la muestra n (base 0)."""
        if n >= self._coeffs.shape[1]:
            grown = np.zeros((self.taps, max(16, 2 * self._coeffs.shape[1])))
            grown[:, :n] = self._coeffs[:, :n]
            self._coeffs = grown
        self._coeffs[:, n] = values


def online_init(
    cfg: RecursiveKernelConfig,
    eta: float,
    nu: float,
    alpha_init=None,
    budget: Optional[int] = None,
    combiner_input: str = "posterior",
) -> OnlineFilterState:
    """Estado vacío con α_0 = alpha_init (uniforme 1/P por defecto)."""
    if not eta > 0:
        raise ConfigError(f"eta debe ser positivo, recibido {eta}")
    if nu < 0:
        raise ConfigError(f"nu debe ser >= 0, recibido {nu}")
    if combiner_input not in COMBINER_INPUTS:
        raise ConfigError(f"combiner_input debe ser uno de {COMBINER_INPUTS}")

    if alpha_init is None:
        alpha = np.full(cfg.taps, 1.0 / cfg.taps)
    else:
        alpha = np.array(alpha_init, dtype=np.float64).ravel()
        if alpha.shape[0] != cfg.taps:
            raise ConfigError(f"alpha_init tiene {alpha.shape[0]} pesos, se esperaban {cfg.taps}")

    return OnlineFilterState(
        stream=StreamKernelState(cfg, budget=budget),
        eta=float(eta),
        nu=float(nu),
        alpha=alpha,
        combiner_input=combiner_input,
    )


def online_step(state: OnlineFilterState, x_n, y_n: float) -> tuple[float, OnlineFilterState]:
    """Procesa (x_n, y_n) y devuelve ŷ_n = α_{n-1}·f_n(x_n)."""
    cols = np.stack(state.stream.push(x_n))
    n = state.n
    coeffs = state._coeffs[:, : n - 1]

    prior_taps = np.einsum("pm,pm->p", coeffs, cols[:, : n - 1])
    new_coeffs = state.eta * (y_n - prior_taps)
    post_taps = prior_taps + new_coeffs * cols[:, n - 1]
    state._store(n - 1, new_coeffs)

    f = post_taps if state.combiner_input == "posterior" else prior_taps
    y_hat = float(state.alpha @ f)
    state.last_prior = float(state.alpha @ prior_taps)
    state.last_taps = f
    state.alpha = state.alpha + state.nu * (y_n - y_hat) * f

    if not np.isfinite(y_hat) or (y_n - y_hat) ** 2 > ERROR_LIMIT:
        raise DivergenceError(f"Error cuadrático instantáneo > {ERROR_LIMIT:g} en n={n}; reduce eta o nu")
    if not np.all(np.isfinite(state.alpha)) or np.linalg.norm(state.alpha) > ALPHA_LIMIT:
        raise DivergenceError(f"‖α‖ > {ALPHA_LIMIT:g} en n={n}; reduce nu")
    return y_hat, state


def run_online(
    cfg: RecursiveKernelConfig,
    stream: SeriesDataset,
    eta: float,
    nu: float,
    alpha_init=None,
    eval_fraction: float = 0.2,
    window: int = 50,
    score_on: str = "posterior",
    combiner_input: str = "posterior",
    budget: Optional[int] = None,
    show_progress: bool = False,
) -> OnlineReport:
    """Aplica online_step a todo el stream y resume el error."""
    if score_on not in COMBINER_INPUTS:
        raise ConfigError(f"score_on debe ser uno de {COMBINER_INPUTS}")
    if not 0 < eval_fraction <= 1:
        raise ConfigError("eval_fraction debe estar en (0, 1]")
    if stream.length < 2:
        raise SeriesTooShortError("El stream debe tener al menos 2 muestras")

    state = online_init(cfg, eta, nu, alpha_init, budget=budget, combiner_input=combiner_input)
    points = embed_series(stream.x, cfg.embed_len)
    targets = stream.y
    predictions = np.zeros(stream.length)
    priors = np.zeros(stream.length)

    label = f"Filtrando {stream.name} (P={cfg.taps})"
    with make_progress(label, disable=not show_progress) as progress:
        task = progress.add_task("online", total=stream.length)
        for n in range(stream.length):
            predictions[n], _ = online_step(state, points[n], targets[n])
            priors[n] = state.last_prior
            progress.advance(task)

    scored = predictions if score_on == "posterior" else priors
    squared_errors = (targets - scored) ** 2
    eval_start = min(int(np.floor((1.0 - eval_fraction) * stream.length)), stream.length - 2)
    nmse_db = nmse(scored[eval_start:], targets[eval_start:])
    logger.debug("Online %s P=%d: nMSE %.2f dB", stream.name, cfg.taps, nmse_db)

    return OnlineReport(
        predictions=predictions,
        prior_predictions=priors,
        targets=targets.copy(),
        squared_errors=squared_errors,
        nmse_db=nmse_db,
        learning_curve=running_mse(squared_errors, window),
        eval_start=eval_start,
        alpha=state.alpha.copy(),
        score_on=score_on,
    )


def klms_baseline(
    stream: SeriesDataset,
    base: BaseKernel,
    embed_len: int,
    eta: float,
    **kwargs,
) -> OnlineReport:
    """KLMS clásico: un único filtro con el kernel base sobre el embedding."""
    cfg = RecursiveKernelConfig(base=base, taps=1, mu=1.0, embed_len=embed_len)
    return run_online(cfg, stream, eta, nu=0.0, alpha_init=[1.0], **kwargs)
