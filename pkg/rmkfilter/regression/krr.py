"""
Kernel ridge regression con resolución simétrica definida positiva.
"""

import logging

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from rmkfilter.utils.errors import ConfigError, IllConditionedError, ShapeMismatchError

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-8
SYMMETRY_TOL = 1e-10


def _factor(kernel: np.ndarray, c: float):
    kernel = np.asarray(kernel, dtype=np.float64)
    if kernel.ndim != 2 or kernel.shape[0] != kernel.shape[1]:
        raise ShapeMismatchError(f"K debe ser cuadrada, recibido {kernel.shape}")
    if c < 0:
        raise ConfigError(f"c debe ser >= 0, recibido {c}")
    scale = max(np.max(np.abs(kernel)), 1.0)
    if np.max(np.abs(kernel - kernel.T)) > SYMMETRY_TOL * scale:
        raise ConfigError("K no es simétrica")

    system = kernel + c * np.eye(kernel.shape[0])
    try:
        return system, cho_factor(system, lower=True, check_finite=True)
    except LinAlgError as e:
        raise IllConditionedError(
            f"K + cI no es definida positiva (c={c:g}); aumenta la regularización c"
        ) from e


def krr_fit(kernel: np.ndarray, y: np.ndarray, c: float, refine_steps: int = 2) -> np.ndarray:
    """Coeficientes duales β = (K + cI)^{-1} y."""
    y = np.asarray(y, dtype=np.float64)
    if y.shape[0] != np.shape(kernel)[0]:
        raise ShapeMismatchError(f"y tiene {y.shape[0]} muestras y K {np.shape(kernel)[0]}")

    system, factor = _factor(kernel, c)
    beta = cho_solve(factor, y)

    # Refinamiento iterativo
    for _ in range(refine_steps):
        if relative_residual(system, beta, y) < RESIDUAL_TOL:
            break
        beta = beta + cho_solve(factor, y - system @ beta)

    residual = relative_residual(system, beta, y)
    if not np.isfinite(residual) or residual >= RESIDUAL_TOL:
        raise IllConditionedError(
            f"Residuo relativo {residual:.2e} >= {RESIDUAL_TOL:g} con c={c:g}; aumenta c"
        )
    return beta


def relative_residual(system: np.ndarray, beta: np.ndarray, y: np.ndarray) -> float:
    norm_y = np.linalg.norm(y)
    if norm_y == 0:
        return float(np.linalg.norm(system @ beta))
    return float(np.linalg.norm(system @ beta - y) / norm_y)


def loo_predictions(kernel: np.ndarray, y: np.ndarray, c: float) -> np.ndarray:
    """Predicciones leave-one-out de KRR en forma cerrada: y_m - β_m / [(K + cI)^{-1}]_mm."""
    y = np.asarray(y, dtype=np.float64)
    _, factor = _factor(kernel, c)
    inverse = cho_solve(factor, np.eye(y.shape[0]))
    beta = inverse @ y
    return y - beta / np.diag(inverse)
