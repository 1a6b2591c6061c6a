"""
Modelos de configuración: kernels base, kernel recursivo, stacking y generadores.
"""

from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from typing import Any, ClassVar, Optional

import numpy as np
from scipy.spatial.distance import cdist

from rmkfilter.utils.errors import ConfigError, ShapeMismatchError


class BaseKernel(ABC):
    """Kernel escalar clásico κ(x, y) = ⟨ψ(x), ψ(y)⟩."""

    kind: ClassVar[str] = ""

    @abstractmethod
    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matriz κ(a_i, b_j) para filas de a y b (ambas 2D)."""

    def __call__(self, x, y) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        y = np.atleast_1d(np.asarray(y, dtype=np.float64))
        if x.shape != y.shape:
            raise ShapeMismatchError(f"Dimensiones distintas: {x.shape} vs {y.shape}")
        return float(self.pairwise(x[None, :], y[None, :])[0, 0])

    def gram(self, a: np.ndarray) -> np.ndarray:
        """Matriz de Gram exactamente simétrica (se refleja el triángulo inferior)."""
        g = self.pairwise(a, a)
        lower = np.tril(g)
        return lower + np.tril(g, -1).T

    def to_dict(self) -> dict:
        return {"kind": self.kind, **asdict(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "BaseKernel":
        d = dict(d)
        kind = d.pop("kind", "rbf")
        if kind not in KERNEL_REGISTRY:
            raise ConfigError(f"Kernel desconocido: {kind}")
        return KERNEL_REGISTRY[kind](**d)


@dataclass(frozen=True)
class RBFKernel(BaseKernel):
    """exp(-‖x-y‖² / (2σ²))."""
    sigma: float = 1.0
    kind: ClassVar[str] = "rbf"

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigError(f"sigma debe ser positivo, recibido {self.sigma}")

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        _check_cols(a, b)
        sq = cdist(a, b, "sqeuclidean")
        return np.exp(-sq / (2.0 * self.sigma ** 2))


@dataclass(frozen=True)
class LinearKernel(BaseKernel):
    kind: ClassVar[str] = "linear"

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        _check_cols(a, b)
        return a @ b.T


@dataclass(frozen=True)
class PolynomialKernel(BaseKernel):
    """(⟨x, y⟩ + offset)^degree."""
    degree: int = 2
    offset: float = 1.0
    kind: ClassVar[str] = "polynomial"

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 1:
            raise ConfigError(f"degree debe ser un entero >= 1, recibido {self.degree}")

    def pairwise(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        _check_cols(a, b)
        return (a @ b.T + self.offset) ** int(self.degree)


KERNEL_REGISTRY: dict[str, type[BaseKernel]] = {
    "rbf": RBFKernel,
    "linear": LinearKernel,
    "polynomial": PolynomialKernel,
}


def _check_cols(a: np.ndarray, b: np.ndarray):
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise ShapeMismatchError(f"Dimensiones incompatibles: {a.shape} vs {b.shape}")


@dataclass(frozen=True)
class RecursiveKernelConfig:
    """Kernel base + taps P, estabilidad μ y longitud de embedding L."""
    base: BaseKernel = field(default_factory=RBFKernel)
    taps: int = 5
    mu: float = 0.5
    embed_len: int = 1

    def __post_init__(self):
        if not 0 < self.mu <= 1:
            raise ConfigError(f"mu debe estar en (0, 1], recibido {self.mu}")
        if int(self.taps) != self.taps or self.taps < 1:
            raise ConfigError(f"taps debe ser un entero >= 1, recibido {self.taps}")
        if int(self.embed_len) != self.embed_len or self.embed_len < 0:
            raise ConfigError(f"embed_len debe ser un entero >= 0, recibido {self.embed_len}")

    @property
    def mu_bar(self) -> float:
        return 1.0 - self.mu

    def with_taps(self, taps: int) -> "RecursiveKernelConfig":
        return RecursiveKernelConfig(base=self.base, taps=taps, mu=self.mu, embed_len=self.embed_len)

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "taps": self.taps,
            "mu": self.mu,
            "embed_len": self.embed_len,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RecursiveKernelConfig":
        return cls(
            base=BaseKernel.from_dict(d.get("base", {"kind": "rbf"})),
            taps=d.get("taps", 5),
            mu=d.get("mu", 0.5),
            embed_len=d.get("embed_len", 1),
        )


BATCH_FAMILIES = (
    "rbf-embedding",
    "composite-average",
    "stacking",
    "ridge-stacking",
    "sparse-stacking",
)
ONLINE_FAMILIES = ("klms", "rmk-klms")

STACKING_MODES = ("plain", "ridge", "sparse", "fixed")


@dataclass(frozen=True)
class StackingConfig:
    """Modo de combinación de los P predictores.

    ``fixed`` no aprende α: se usan los pesos dados (baselines).
    """
    mode: str = "plain"
    lambda2: float = 0.0
    lambda1: float = 0.0
    tol: float = 1e-8
    max_iter: int = 20000
    fixed_alpha: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.mode not in STACKING_MODES:
            raise ConfigError(f"Modo de stacking desconocido: {self.mode}")
        if self.lambda2 < 0 or self.lambda1 < 0:
            raise ConfigError("Las fuerzas de regularización deben ser >= 0")

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.fixed_alpha is not None:
            d["fixed_alpha"] = list(self.fixed_alpha)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "StackingConfig":
        d = dict(d)
        if d.get("fixed_alpha") is not None:
            d["fixed_alpha"] = tuple(d["fixed_alpha"])
        return cls(**d)


GENERATOR_TASKS = ("mackey-glass", "narendra", "wiener", "channel-equalization")


@dataclass
class GeneratorSpec:
    """Especificación reproducible de un benchmark sintético."""
    task: str
    seed: int = 0
    n_train: int = 200
    n_val: int = 1000
    n_test: int = 1000
    noise_var: Optional[float] = None
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.task not in GENERATOR_TASKS:
            raise ConfigError(
                f"Tarea desconocida: {self.task}. Opciones: {', '.join(GENERATOR_TASKS)}"
            )
        if min(self.n_train, self.n_val, self.n_test) < 1:
            raise ConfigError("Las longitudes de cada partición deben ser >= 1")
        if self.noise_var is not None and self.noise_var < 0:
            raise ConfigError("La varianza de ruido debe ser >= 0")

    @property
    def length(self) -> int:
        return self.n_train + self.n_val + self.n_test

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "seed": self.seed,
            "n_train": self.n_train,
            "n_val": self.n_val,
            "n_test": self.n_test,
            "noise_var": self.noise_var,
            "params": dict(self.params),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorSpec":
        return cls(
            task=d["task"],
            seed=d.get("seed", 0),
            n_train=d.get("n_train", 200),
            n_val=d.get("n_val", 1000),
            n_test=d.get("n_test", 1000),
            noise_var=d.get("noise_var"),
            params=dict(d.get("params", {})),
        )
