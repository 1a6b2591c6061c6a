"""
Métricas de error: nMSE en decibelios y curvas de aprendizaje.
"""

import numpy as np

from rmkfilter.utils.errors import DegenerateVarianceError, ShapeMismatchError

NMSE_FLOOR_DB = -300.0


def nmse(predictions, targets) -> float:
    """10·log10(E² / σ̂²_y) con varianza poblacional de los objetivos."""
    predictions = np.asarray(predictions, dtype=np.float64).ravel()
    targets = np.asarray(targets, dtype=np.float64).ravel()
    if predictions.shape != targets.shape:
        raise ShapeMismatchError(
            f"Predicciones ({predictions.shape[0]}) y objetivos ({targets.shape[0]}) difieren"
        )
    if targets.shape[0] < 2:
        raise ShapeMismatchError("El nMSE requiere al menos 2 muestras")

    variance = np.var(targets)
    if variance == 0:
        raise DegenerateVarianceError("Varianza de los objetivos nula: nMSE no definido")

    mse = np.mean((predictions - targets) ** 2)
    if mse == 0:
        return NMSE_FLOOR_DB
    return max(float(10.0 * np.log10(mse / variance)), NMSE_FLOOR_DB)


def running_mse(squared_errors, window: int = 50) -> np.ndarray:
    """Media móvil de los errores cuadráticos sobre las últimas ``window`` muestras."""
    errors = np.asarray(squared_errors, dtype=np.float64)
    if window < 1:
        raise ValueError("window debe ser >= 1")
    if errors.shape[0] == 0:
        return errors.copy()
    cumsum = np.concatenate([[0.0], np.cumsum(errors)])
    idx = np.arange(1, errors.shape[0] + 1)
    start = np.maximum(idx - window, 0)
    return (cumsum[idx] - cumsum[start]) / (idx - start)


def convergence_step(curve, factor: float = 1.5) -> int:
    """Primer paso (base 1) en que la curva cae por debajo de factor × su valor final."""
    curve = np.asarray(curve, dtype=np.float64)
    if curve.shape[0] == 0:
        raise ValueError("Curva vacía")
    below = np.flatnonzero(curve < factor * curve[-1])
    return int(below[0]) + 1 if below.size else int(curve.shape[0])
