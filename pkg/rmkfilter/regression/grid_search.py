"""
Búsqueda exhaustiva de hiperparámetros sobre la partición de validación.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from rmkfilter.datasets.metrics import nmse
from rmkfilter.kernels.recursive import kernel_stack_columns
from rmkfilter.models.config import RBFKernel, RecursiveKernelConfig, StackingConfig
from rmkfilter.models.results import GridSearchResult
from rmkfilter.models.series import SeriesDataset
from rmkfilter.regression.stacking import FAMILIES, family_stacking, fit_from_stack
from rmkfilter.utils.console import make_progress
from rmkfilter.utils.errors import ConfigError, NumericalError, SplitError

logger = logging.getLogger(__name__)

REGULARIZED_FAMILIES = ("ridge-stacking", "sparse-stacking")


@dataclass
class ParameterGrid:
    """Rejilla cartesiana sobre σ, μ, P, c, L y λ."""
    sigma: list[float] = field(default_factory=lambda: np.logspace(-1, 1, 7).tolist())
    mu: list[float] = field(default_factory=lambda: [0.3, 0.5, 0.7, 0.9, 1.0])
    taps: list[int] = field(default_factory=lambda: list(range(2, 9)))
    c: list[float] = field(default_factory=lambda: np.logspace(-6, -1, 6).tolist())
    embed_len: list[int] = field(default_factory=lambda: [1, 4, 8])
    lam: list[float] = field(default_factory=lambda: [1e-3, 1e-2, 1e-1, 1.0])

    def __post_init__(self):
        for name in ("sigma", "mu", "taps", "c", "embed_len", "lam"):
            values = list(getattr(self, name))
            if not values:
                raise ConfigError(f"La rejilla '{name}' está vacía")
            setattr(self, name, values)

    def for_family(self, family: str) -> "ParameterGrid":
        """Reduce los ejes que no afectan a la familia dada."""
        grid = ParameterGrid(**self.to_dict())
        if family == "rbf-embedding":
            grid.taps, grid.mu = [1], self.mu[:1]
        if family not in REGULARIZED_FAMILIES:
            grid.lam = [0.0]
        return grid

    @property
    def size(self) -> int:
        return int(np.prod([len(v) for v in self.to_dict().values()]))

    def to_dict(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "mu": list(self.mu),
            "taps": list(self.taps),
            "c": list(self.c),
            "embed_len": list(self.embed_len),
            "lam": list(self.lam),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterGrid":
        unknown = set(d) - {"sigma", "mu", "taps", "c", "embed_len", "lam"}
        if unknown:
            raise ConfigError(f"Ejes de rejilla desconocidos: {sorted(unknown)}")
        return cls(**{k: list(v) for k, v in d.items()})


def config_from_params(params: dict[str, Any], family: str) -> tuple[RecursiveKernelConfig, float, StackingConfig]:
    """(config del kernel, c, stacking) para un punto de la rejilla."""
    taps = 1 if family == "rbf-embedding" else int(params["taps"])
    cfg = RecursiveKernelConfig(
        base=RBFKernel(sigma=float(params["sigma"])),
        taps=taps,
        mu=float(params["mu"]),
        embed_len=int(params["embed_len"]),
    )
    return cfg, float(params["c"]), family_stacking(family, float(params.get("lam", 0.0)), taps)


def _evaluate_block(
    dataset: SeriesDataset,
    grid: ParameterGrid,
    family: str,
    sigma: float,
    mu: float,
    embed_len: int,
) -> list[dict[str, Any]]:
    """Evalúa todos los (P, c, λ) compartiendo una pila de kernels con P máximo."""
    n_train, val_end = dataset.train_end, dataset.val_end
    cfg = RecursiveKernelConfig(
        base=RBFKernel(sigma=sigma), taps=max(grid.taps), mu=mu, embed_len=embed_len
    )
    stack = kernel_stack_columns(cfg, dataset.x[:val_end], n_rows=n_train)
    y_train = dataset.y[:n_train]
    y_val = dataset.y[n_train:val_end]

    rows = []
    for taps, c, lam in itertools.product(grid.taps, grid.c, grid.lam):
        params = {"sigma": sigma, "mu": mu, "taps": taps, "c": c, "embed_len": embed_len, "lam": lam}
        try:
            stacking = family_stacking(family, lam, taps)
            betas, alpha, _ = fit_from_stack(stack[:taps, :, :n_train], y_train, c, family, stacking)
            per_tap = np.einsum("pn,pnq->pq", betas, stack[:taps, :, n_train:val_end])
            score = nmse(alpha @ per_tap, y_val)
        except (NumericalError, ConfigError) as e:
            logger.warning("Punto de rejilla descartado %s: %s", params, e)
            score = float("nan")
        rows.append({**params, "nmse_db": score})
    return rows


def _rank_key(row: dict[str, Any]) -> tuple:
    return (row["nmse_db"], row["taps"], row["embed_len"], row["c"])


def grid_search(
    dataset: SeriesDataset,
    grid: ParameterGrid | None = None,
    family: str = "stacking",
    n_jobs: int = 1,
    show_progress: bool = False,
) -> GridSearchResult:
    """Devuelve el punto de menor nMSE de validación (desempate: menor P, L y c)."""
    if family not in FAMILIES:
        raise ConfigError(f"Familia desconocida: {family}. Opciones: {', '.join(FAMILIES)}")
    if not dataset.has_validation:
        raise SplitError(f"El dataset {dataset.name} no tiene partición de validación")

    grid = (grid or ParameterGrid()).for_family(family)
    blocks = list(itertools.product(grid.sigma, grid.mu, grid.embed_len))
    logger.info("Rejilla %s: %d puntos en %d bloques", family, grid.size, len(blocks))

    def run(block):
        return _evaluate_block(dataset, grid, family, *block)

    evaluations: list[dict[str, Any]] = []
    with make_progress(f"Rejilla {family}", color="magenta", disable=not show_progress) as progress:
        task = progress.add_task("grid", total=len(blocks))
        if n_jobs > 1:
            with ThreadPoolExecutor(max_workers=n_jobs) as pool:
                for rows in pool.map(run, blocks):
                    evaluations.extend(rows)
                    progress.advance(task)
        else:
            for block in blocks:
                evaluations.extend(run(block))
                progress.advance(task)

    valid = [row for row in evaluations if np.isfinite(row["nmse_db"])]
    if not valid:
        raise NumericalError("Ningún punto de la rejilla produjo un modelo válido")
    best = min(valid, key=_rank_key)
    best_params = {k: v for k, v in best.items() if k != "nmse_db"}
    return GridSearchResult(
        family=family,
        best_params=best_params,
        best_nmse=float(best["nmse_db"]),
        evaluations=evaluations,
    )
