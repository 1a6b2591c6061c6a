"""
Modelo de datos para series temporales con particiones train/validación/test.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from rmkfilter.utils.errors import DataFileNotFoundError, SplitError


@dataclass
class SeriesDataset:
    """Serie de entrada x, serie objetivo y y fronteras de partición."""
    x: np.ndarray
    y: np.ndarray
    train_end: int
    val_end: int
    name: str = "series"
    horizon: int = 1
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.x.shape[0] != self.y.shape[0]:
            raise SplitError(
                f"x e y deben tener la misma longitud ({self.x.shape[0]} vs {self.y.shape[0]})"
            )
        if not 0 < self.train_end <= self.val_end <= self.length:
            raise SplitError(
                f"Fronteras inválidas: train_end={self.train_end}, "
                f"val_end={self.val_end}, longitud={self.length}"
            )

    @property
    def length(self) -> int:
        return int(self.x.shape[0])

    @property
    def test_end(self) -> int:
        return self.length

    @property
    def train_range(self) -> tuple[int, int]:
        return (0, self.train_end)

    @property
    def val_range(self) -> tuple[int, int]:
        return (self.train_end, self.val_end)

    @property
    def test_range(self) -> tuple[int, int]:
        return (self.val_end, self.length)

    @property
    def has_validation(self) -> bool:
        return self.val_end > self.train_end

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "horizon": self.horizon,
            "length": self.length,
            "train_end": self.train_end,
            "val_end": self.val_end,
            "test_end": self.test_end,
            "metadata": self.metadata,
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x, "y": self.y})

    def save(self, path: str | Path) -> Path:
        """Escribe la serie como CSV y los metadatos en un sidecar JSON."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index_label="n", float_format="%.17g")
        sidecar_path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False),
            encoding="utf-8",
        )
        return path

    @classmethod
    def load(cls, path: str | Path) -> "SeriesDataset":
        path = Path(path)
        meta_path = sidecar_path(path)
        if not path.exists() or not meta_path.exists():
            raise DataFileNotFoundError(f"No se encuentra el dataset {path} (o su sidecar)")

        frame = pd.read_csv(path, float_precision="round_trip")
        meta = json.loads(meta_path.read_text(encoding="utf-8"))
        return cls(
            x=frame["x"].to_numpy(dtype=np.float64),
            y=frame["y"].to_numpy(dtype=np.float64),
            train_end=meta["train_end"],
            val_end=meta["val_end"],
            name=meta.get("name", path.stem),
            horizon=meta.get("horizon", 1),
            metadata=meta.get("metadata", {}),
        )


def sidecar_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")
