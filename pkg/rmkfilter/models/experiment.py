"""
Configuración de experimentos respaldada por YAML.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import yaml

from rmkfilter.models.config import BATCH_FAMILIES, ONLINE_FAMILIES, GeneratorSpec
from rmkfilter.utils.errors import ConfigError


@dataclass
class CsvSource:
    """Serie real en CSV con horizonte de predicción h."""
    path: str
    column: int = 0
    horizon: Optional[int] = None
    preset: Optional[str] = None
    n_train: Optional[int] = None
    n_val: Optional[int] = None
    name: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "path": self.path,
            "column": self.column,
            "horizon": self.horizon,
            "preset": self.preset,
            "n_train": self.n_train,
            "n_val": self.n_val,
            "name": self.name,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CsvSource":
        if "path" not in d:
            raise ConfigError("dataset.csv requiere 'path'")
        return cls(**d)


@dataclass
class BenchConfig:
    """Parámetros del benchmark naive vs fast."""
    sizes: list[int] = field(default_factory=lambda: [256, 512, 1024, 2048])
    taps: int = 5
    mu: float = 0.5
    sigma: float = 1.0
    repetitions: int = 5

    def __post_init__(self):
        if not self.sizes or any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ConfigError("bench.sizes debe ser una lista estrictamente creciente")
        if self.repetitions < 1:
            raise ConfigError("bench.repetitions debe ser >= 1")

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "taps": self.taps,
            "mu": self.mu,
            "sigma": self.sigma,
            "repetitions": self.repetitions,
        }


@dataclass
class ExperimentConfig:
    """Una fuente de datos, los modelos a evaluar y sus hiperparámetros."""
    generator: Optional[GeneratorSpec] = None
    csv: Optional[CsvSource] = None
    dataset_path: Optional[str] = None
    models: list[str] = field(default_factory=lambda: ["stacking"])
    params: dict[str, Any] = field(default_factory=dict)
    grid: Optional[dict[str, list]] = None
    seed: int = 0
    output_dir: str = "results"
    n_jobs: int = 1
    bench: BenchConfig = field(default_factory=BenchConfig)

    def __post_init__(self):
        unknown = [m for m in self.models if m not in BATCH_FAMILIES + ONLINE_FAMILIES]
        if unknown:
            raise ConfigError(
                f"Modelos desconocidos: {unknown}. "
                f"Opciones: {', '.join(BATCH_FAMILIES + ONLINE_FAMILIES)}"
            )
        if self.grid is not None and not self.grid:
            raise ConfigError("'grid' está presente pero vacío")

    @property
    def n_sources(self) -> int:
        return sum(s is not None for s in (self.generator, self.csv, self.dataset_path))

    def require_source(self):
        if self.n_sources != 1:
            raise ConfigError(
                f"Se requiere exactamente una fuente de datos (generator, csv o path); hay {self.n_sources}"
            )

    def batch_models(self) -> list[str]:
        return [m for m in self.models if m in BATCH_FAMILIES]

    def online_models(self) -> list[str]:
        return [m for m in self.models if m in ONLINE_FAMILIES]

    def with_overrides(self, seed: Optional[int] = None, output_dir: Optional[str] = None) -> "ExperimentConfig":
        if seed is not None:
            self.seed = seed
        if output_dir is not None:
            self.output_dir = output_dir
        if self.generator is not None:
            self.generator.seed = self.seed
        return self

    def to_dict(self) -> dict:
        dataset: dict[str, Any] = {}
        if self.generator is not None:
            dataset["generator"] = self.generator.to_dict()
        if self.csv is not None:
            dataset["csv"] = self.csv.to_dict()
        if self.dataset_path is not None:
            dataset["path"] = self.dataset_path
        return {
            "dataset": dataset,
            "models": list(self.models),
            "params": dict(self.params),
            "grid": None if self.grid is None else dict(self.grid),
            "seed": self.seed,
            "output_dir": self.output_dir,
            "n_jobs": self.n_jobs,
            "bench": self.bench.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d or {})
        dataset = d.pop("dataset", None) or {}
        bench = d.pop("bench", None) or {}
        unknown = set(d) - {"models", "params", "grid", "seed", "output_dir", "n_jobs"}
        if unknown:
            raise ConfigError(f"Claves desconocidas en la configuración: {sorted(unknown)}")

        seed = int(d.get("seed", 0))
        generator = None
        if dataset.get("generator") is not None:
            generator = GeneratorSpec.from_dict({**dataset["generator"], "seed": seed})
        csv = CsvSource.from_dict(dataset["csv"]) if dataset.get("csv") is not None else None
        return cls(
            generator=generator,
            csv=csv,
            dataset_path=dataset.get("path"),
            models=list(d.get("models", ["stacking"])),
            params=dict(d.get("params") or {}),
            grid=d.get("grid"),
            seed=seed,
            output_dir=d.get("output_dir", "results"),
            n_jobs=int(d.get("n_jobs", 1)),
            bench=_bench_from_dict(bench),
        )

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"No existe el fichero de configuración: {path}")
        try:
            with open(path, encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"YAML inválido en {path}: {e}") from e
        if data is not None and not isinstance(data, dict):
            raise ConfigError(f"{path} debe contener un mapeo en la raíz")
        return cls.from_dict(data)

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(self.to_dict(), f, sort_keys=False, allow_unicode=True)
        return path


def _bench_from_dict(d: dict) -> BenchConfig:
    unknown = set(d) - {"sizes", "taps", "mu", "sigma", "repetitions"}
    if unknown:
        raise ConfigError(f"Claves desconocidas en bench: {sorted(unknown)}")
    return BenchConfig(**d)
