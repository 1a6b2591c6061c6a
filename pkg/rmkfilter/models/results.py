"""
Modelos de resultados: tablas nMSE, informes online y búsquedas en rejilla.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd

RESULT_COLUMNS = ["dataset", "model", "nmse_db", "hyperparameters", "seconds"]


@dataclass
class ResultRow:
    """Una fila (dataset, modelo) de una tabla de resultados."""
    dataset: str
    model: str
    nmse_db: float
    hyperparameters: dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "model": self.model,
            "nmse_db": self.nmse_db,
            "hyperparameters": format_params(self.hyperparameters),
            "seconds": self.seconds,
        }


@dataclass
class ResultTable:
    """Tabla con una fila por par (dataset, modelo)."""
    rows: list[ResultRow] = field(default_factory=list)

    def add(self, row: ResultRow):
        for i, existing in enumerate(self.rows):
            if existing.dataset == row.dataset and existing.model == row.model:
                self.rows[i] = row
                return
        self.rows.append(row)

    def get(self, dataset: str, model: str) -> Optional[ResultRow]:
        for row in self.rows:
            if row.dataset == dataset and row.model == model:
                return row
        return None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.to_dict() for row in self.rows], columns=RESULT_COLUMNS)

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        self.to_frame().to_csv(path, index=False, float_format="%.6f")
        return path


@dataclass
class OnlineReport:
    """Resultado de una pasada online sobre un stream."""
    predictions: np.ndarray
    prior_predictions: np.ndarray
    targets: np.ndarray
    squared_errors: np.ndarray
    nmse_db: float
    learning_curve: np.ndarray
    eval_start: int
    alpha: np.ndarray
    score_on: str = "posterior"

    @property
    def steps(self) -> int:
        return int(self.predictions.shape[0])

    def curve_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "step": np.arange(1, self.learning_curve.shape[0] + 1),
            "running_mse": self.learning_curve,
        })


@dataclass
class GridSearchResult:
    """Mejor punto de la rejilla y todas las evaluaciones."""
    family: str
    best_params: dict[str, Any]
    best_nmse: float
    evaluations: list[dict[str, Any]] = field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.evaluations)


def format_params(params: dict[str, Any]) -> str:
    return ";".join(f"{k}={_fmt(v)}" for k, v in sorted(params.items()))


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)
