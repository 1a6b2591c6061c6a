"""
Carga de series reales desde CSV (EEG, respiratoria, EUR-USD, ...).
"""

import logging
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from rmkfilter.models.series import SeriesDataset
from rmkfilter.utils.errors import (
    ConfigError,
    DataFileNotFoundError,
    NonNumericCellError,
    SeriesTooShortError,
)

logger = logging.getLogger(__name__)

# Horizonte de predicción y particiones por defecto de cada serie real
REAL_DATA_PRESETS: dict[str, dict] = {
    "eeg": {"horizon": 4, "n_train": 200, "n_val": 1000, "n_test": 1000},
    "respiratory": {"horizon": 1, "n_train": 200, "n_val": 1000, "n_test": 1000},
    "eurusd": {"horizon": 2, "n_train": 1440, "n_val": 1370, "n_test": 1370},
}


def read_numeric_column(path: str | Path, column: int = 0) -> np.ndarray:
    """Lee una columna numérica; una primera fila no numérica se trata como cabecera."""
    path = Path(path)
    if not path.is_file():
        raise DataFileNotFoundError(f"No existe el fichero: {path}")

    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False)
    except pd.errors.EmptyDataError as e:
        raise SeriesTooShortError(f"Fichero vacío: {path}") from e
    except pd.errors.ParserError as e:
        raise NonNumericCellError(f"CSV mal formado en {path}: {e}") from e

    if not 0 <= column < frame.shape[1]:
        raise ConfigError(f"Columna {column} fuera de rango ({frame.shape[1]} columnas)")

    cells = frame.iloc[:, column].str.strip()
    values = pd.to_numeric(cells, errors="coerce")
    if len(values) and np.isnan(values.iloc[0]):
        logger.debug("Cabecera detectada en %s: %r", path.name, cells.iloc[0])
        cells, values = cells.iloc[1:], values.iloc[1:]

    bad = np.flatnonzero(values.isna().to_numpy())
    if bad.size:
        row = int(values.index[bad[0]]) + 1
        raise NonNumericCellError(
            f"Celda no numérica en {path.name}, fila {row}: {cells.iloc[bad[0]]!r}"
        )
    return values.to_numpy(dtype=np.float64)


def _default_split(n: int, n_train: Optional[int], n_val: Optional[int]) -> tuple[int, int]:
    if n_train is None:
        n_train = max(1, int(0.6 * n))
        n_val = max(0, int(0.8 * n) - n_train)
    elif n_val is None:
        n_val = 0
    return n_train, n_train + n_val


def load_csv_series(
    path: str | Path,
    column: int = 0,
    horizon: Optional[int] = None,
    preset: Optional[str] = None,
    n_train: Optional[int] = None,
    n_val: Optional[int] = None,
    name: Optional[str] = None,
) -> SeriesDataset:
    """Construye un problema de predicción a h pasos: y_n = x_{n+h}."""
    limit = None
    if preset is not None:
        if preset not in REAL_DATA_PRESETS:
            raise ConfigError(
                f"Preset desconocido: {preset}. Opciones: {', '.join(REAL_DATA_PRESETS)}"
            )
        defaults = REAL_DATA_PRESETS[preset]
        horizon = defaults["horizon"] if horizon is None else horizon
        if n_train is None:
            n_train, n_val = defaults["n_train"], defaults["n_val"]
            limit = defaults["n_train"] + defaults["n_val"] + defaults["n_test"]
    horizon = 1 if horizon is None else int(horizon)
    if horizon < 1:
        raise ConfigError(f"El horizonte debe ser >= 1, recibido {horizon}")

    values = read_numeric_column(path, column)
    if values.shape[0] < horizon + 2:
        raise SeriesTooShortError(
            f"{values.shape[0]} filas; se necesitan al menos h + 2 = {horizon + 2}"
        )

    x, y = values[:-horizon], values[horizon:]
    if limit is not None:
        if x.shape[0] >= limit:
            x, y = x[:limit], y[:limit]
        else:
            logger.warning(
                "Serie de %d muestras más corta que el preset %s (%d); partición proporcional",
                x.shape[0], preset, limit,
            )
            n_train, n_val = None, None

    train_end, val_end = _default_split(x.shape[0], n_train, n_val)
    return SeriesDataset(
        x=x,
        y=y,
        train_end=train_end,
        val_end=val_end,
        name=name or preset or Path(path).stem,
        horizon=horizon,
        metadata={"source": str(path), "column": column, "preset": preset},
    )
