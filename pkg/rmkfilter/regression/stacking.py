"""
Stacking de P modelos KRR, uno por tap del kernel recursivo.
"""

import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, lstsq

from rmkfilter.kernels.recursive import composite_average, KernelStack, kernel_stack_columns
from rmkfilter.models.config import BATCH_FAMILIES, RecursiveKernelConfig, StackingConfig
from rmkfilter.regression.krr import krr_fit, loo_predictions
from rmkfilter.utils.errors import (
    ConfigError,
    ConvergenceWarning,
    IllConditionedError,
    RankDeficientError,
    SeriesTooShortError,
    ShapeMismatchError,
    SplitError,
)

logger = logging.getLogger(__name__)

FAMILIES = BATCH_FAMILIES

CERTIFICATE_TOL = 1e-8


@dataclass
class StackedBatchModel:
    """β^i por tap, regularización c, pesos α y la secuencia de entrenamiento."""
    config: RecursiveKernelConfig
    c: float
    betas: np.ndarray
    alpha: np.ndarray
    train_series: np.ndarray
    family: str = "stacking"
    stacking: StackingConfig = field(default_factory=StackingConfig)
    tap_predictions: Optional[np.ndarray] = None

    @property
    def n_train(self) -> int:
        return int(self.betas.shape[1])

    @property
    def n_taps(self) -> int:
        return int(self.betas.shape[0])

    def in_sample(self) -> np.ndarray:
        """Predicciones de entrenamiento F·α."""
        return self.tap_predictions @ self.alpha

    def predict(self, full_series, test_range: tuple[int, int]) -> np.ndarray:
        return predict_series(self, full_series, test_range)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "config": self.config.to_dict(),
            "c": self.c,
            "stacking": self.stacking.to_dict(),
            "alpha": self.alpha.tolist(),
            "n_train": self.n_train,
        }


# ------------------------------------------------------------------
# Combinador α
# ------------------------------------------------------------------

def soft_threshold(x, t):
    return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)


def normal_equation_residual(F: np.ndarray, y: np.ndarray, alpha: np.ndarray) -> float:
    """‖Fᵀ(y - Fα)‖ / ‖Fᵀy‖."""
    denom = np.linalg.norm(F.T @ y)
    num = np.linalg.norm(F.T @ (y - F @ alpha))
    return float(num / denom) if denom > 0 else float(num)


def subgradient_violation(F: np.ndarray, y: np.ndarray, alpha: np.ndarray, lambda1: float) -> float:
    """Máxima violación de las condiciones de optimalidad del problema ℓ1."""
    g = F.T @ (y - F @ alpha)
    active = alpha != 0
    viol = np.where(
        active,
        np.abs(g - lambda1 * np.sign(alpha)),
        np.maximum(np.abs(g) - lambda1, 0.0),
    )
    return float(np.max(viol)) if viol.size else 0.0


def fit_stacking(F: np.ndarray, y: np.ndarray, cfg: StackingConfig) -> np.ndarray:
    """Pesos α que combinan las columnas de F (⌊F⌋_ni = f^i(x_n))."""
    F = np.asarray(F, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if F.ndim != 2 or F.shape[0] != y.shape[0]:
        raise ShapeMismatchError(f"F {F.shape} incompatible con y {y.shape}")
    n, p = F.shape

    if cfg.mode == "fixed":
        alpha = np.full(p, 1.0 / p) if cfg.fixed_alpha is None else np.asarray(cfg.fixed_alpha, float)
        if alpha.shape[0] != p:
            raise ShapeMismatchError(f"fixed_alpha tiene {alpha.shape[0]} pesos, se esperaban {p}")
        return alpha

    if cfg.mode == "plain":
        if n < p:
            raise ConfigError(f"N={n} < P={p}: el modo plain requiere regularización (ridge o sparse)")
        if np.linalg.matrix_rank(F) < p:
            raise RankDeficientError("F tiene rango deficiente; usa stacking ridge o sparse")
        alpha = lstsq(F, y)[0]
        cert = normal_equation_residual(F, y, alpha)
        if cert >= CERTIFICATE_TOL:
            logger.warning("Residuo de ecuaciones normales %.2e (F mal condicionada)", cert)
        return alpha

    if cfg.mode == "ridge":
        system = F.T @ F + 2.0 * cfg.lambda2 * np.eye(p)
        try:
            return cho_solve(cho_factor(system), F.T @ y)
        except LinAlgError as e:
            raise IllConditionedError("FᵀF + 2λ₂I singular; aumenta lambda2") from e

    return _coordinate_descent(F, y, cfg)


def _coordinate_descent(F: np.ndarray, y: np.ndarray, cfg: StackingConfig) -> np.ndarray:
    n, p = F.shape
    lam = cfg.lambda1
    alpha = np.zeros(p)
    residual = y.copy()
    col_sq = np.einsum("ij,ij->j", F, F)
    for _ in range(cfg.max_iter):
        for i in range(p):
            if col_sq[i] == 0:
                continue
            old = alpha[i]
            rho = F[:, i] @ residual + col_sq[i] * old
            new = soft_threshold(rho, lam) / col_sq[i]
            if new != old:
                residual -= F[:, i] * (new - old)
                alpha[i] = new
        if subgradient_violation(F, y, alpha, lam) < cfg.tol:
            return alpha

    warnings.warn(
        f"Descenso por coordenadas sin converger en {cfg.max_iter} barridos",
        ConvergenceWarning,
        stacklevel=3,
    )
    return alpha


# ------------------------------------------------------------------
# Entrenamiento y predicción
# ------------------------------------------------------------------

def family_stacking(family: str, lam: float = 0.0, taps: int = 1) -> StackingConfig:
    if family == "stacking":
        return StackingConfig(mode="plain")
    if family == "ridge-stacking":
        return StackingConfig(mode="ridge", lambda2=lam)
    if family == "sparse-stacking":
        return StackingConfig(mode="sparse", lambda1=lam)
    if family == "rbf-embedding":
        return StackingConfig(mode="fixed", fixed_alpha=(1.0,))
    if family == "composite-average":
        return StackingConfig(mode="fixed", fixed_alpha=tuple([1.0 / taps] * taps))
    raise ConfigError(f"Familia desconocida: {family}. Opciones: {', '.join(FAMILIES)}")


def fit_from_stack(
    taps: np.ndarray,
    y: np.ndarray,
    c: float,
    family: str,
    stacking: StackingConfig,
    loo: bool = False,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ajusta (β, α, F) a partir de las matrices de entrenamiento (P, N, N)."""
    y = np.asarray(y, dtype=np.float64)
    p = taps.shape[0]

    if family == "composite-average":
        composite = composite_average(KernelStack(taps=taps))
        beta = krr_fit(composite, y, c)
        betas = np.tile(beta, (p, 1))
        F = np.stack([taps[i] @ beta for i in range(p)], axis=1)
        return betas, fit_stacking(F, y, stacking), F

    betas = np.stack([krr_fit(taps[i], y, c) for i in range(p)])
    if loo:
        F = np.stack([loo_predictions(taps[i], y, c) for i in range(p)], axis=1)
    else:
        F = np.stack([taps[i] @ betas[i] for i in range(p)], axis=1)
    return betas, fit_stacking(F, y, stacking), F


def train_batch(
    series,
    targets,
    cfg: RecursiveKernelConfig,
    c: float,
    stacking: Optional[StackingConfig] = None,
    loo: bool = False,
    family: str = "stacking",
    convolution: str = "recursive",
) -> StackedBatchModel:
    """Construye la pila de kernels, ajusta P modelos KRR y aprende α."""
    series = np.asarray(series, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if series.shape[0] != targets.shape[0]:
        raise ShapeMismatchError("La serie de entrada y los objetivos deben tener igual longitud")
    if family == "rbf-embedding":
        cfg = cfg.with_taps(1)
    if series.shape[0] < cfg.taps + 1:
        raise SeriesTooShortError(f"Se necesitan al menos P + 1 = {cfg.taps + 1} muestras")
    if stacking is None:
        stacking = family_stacking(family, taps=cfg.taps)

    taps = kernel_stack_columns(cfg, series, convolution=convolution)
    betas, alpha, F = fit_from_stack(taps, targets, c, family, stacking, loo)
    return StackedBatchModel(
        config=cfg,
        c=c,
        betas=betas,
        alpha=alpha,
        train_series=series.copy(),
        family=family,
        stacking=stacking,
        tap_predictions=F,
    )


def train_baseline(series, targets, cfg: RecursiveKernelConfig, c: float, kind: str) -> StackedBatchModel:
    """KRR con embedding RBF (P = 1) o con el kernel compuesto promedio."""
    if kind not in ("rbf-embedding", "composite-average"):
        raise ConfigError(f"Baseline desconocido: {kind}")
    return train_batch(series, targets, cfg, c, family=kind)


def stacked_predict(model: StackedBatchModel, stack_cols: np.ndarray) -> np.ndarray | float:
    """Σ_i α^i Σ_m β^i_m κ^i(m, n) para columnas (P, N) o (P, N, Q)."""
    stack_cols = np.asarray(stack_cols, dtype=np.float64)
    if stack_cols.shape[0] != model.n_taps:
        raise ShapeMismatchError(
            f"Columnas para {stack_cols.shape[0]} taps, el modelo tiene {model.n_taps}"
        )
    if stack_cols.shape[1] != model.n_train:
        raise ShapeMismatchError(
            f"Columnas con {stack_cols.shape[1]} filas, se esperaban {model.n_train}"
        )
    per_tap = np.einsum("pn,pn...->p...", model.betas, stack_cols)
    out = np.tensordot(model.alpha, per_tap, axes=1)
    return float(out) if np.ndim(out) == 0 else out


def predict_series(model: StackedBatchModel, full_series, test_range: tuple[int, int]) -> np.ndarray:
    """Predicciones ŷ_n para n en [start, stop) extendiendo el kernel en el tiempo."""
    full_series = np.asarray(full_series, dtype=np.float64)
    start, stop = test_range
    n_train = model.n_train
    if not 0 <= start < stop <= full_series.shape[0]:
        raise SplitError(f"Rango de test inválido {test_range} para longitud {full_series.shape[0]}")
    if not np.array_equal(full_series[:n_train], model.train_series):
        raise SplitError("La serie completa debe continuar la secuencia de entrenamiento")

    if (start, stop) == (0, n_train):
        cols = kernel_stack_columns(model.config, full_series[:n_train], n_train)
        return stacked_predict(model, cols)
    if start < n_train:
        raise SplitError(f"El rango de test {test_range} se solapa con el entrenamiento [0, {n_train})")

    cols = kernel_stack_columns(model.config, full_series[:stop], n_train)
    return stacked_predict(model, cols[:, :, start:stop])
