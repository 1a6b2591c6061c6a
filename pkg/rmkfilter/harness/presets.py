"""
Ajustes de los experimentos de reproducción a escala de escritorio.

Los experimentos online comparan RMK-KLMS con KLMS usando el mismo kernel
base, el mismo embedding y la misma tasa de aprendizaje η.
"""

from typing import Any

from rmkfilter.datasets import generate
from rmkfilter.filtering import klms_baseline, run_online
from rmkfilter.harness.commands import run_batch_model
from rmkfilter.models.config import GeneratorSpec, RBFKernel, RecursiveKernelConfig
from rmkfilter.models.results import OnlineReport
from rmkfilter.models.series import SeriesDataset

SEEDS = tuple(range(5))

BATCH_GRID: dict[str, list] = {
    "sigma": [0.3, 1.0, 3.0],
    "mu": [0.3, 0.7, 1.0],
    "taps": [2, 4, 6],
    "c": [1e-5, 1e-3],
    "embed_len": [1, 4, 8],
    "lam": [1e-3, 1e-1],
}
BATCH_ROWS: dict[str, list[str]] = {
    "mackey-glass": ["rbf-embedding", "composite-average", "stacking"],
    "narendra": ["rbf-embedding", "stacking", "sparse-stacking"],
    "wiener": ["rbf-embedding", "stacking"],
}

# Con L = 1 ningún filtro ve retardos explícitos: la memoria la aportan los taps.
# En Mackey-Glass los taps son casi colineales y α necesita un stream largo y ν alto
# para aprender la extrapolación entre retardos.
ONLINE_PRESETS: dict[str, dict[str, Any]] = {
    "mackey-glass": {
        "lengths": (10000, 3000, 3000),
        "sigma": 1.0, "mu": 1.0, "taps": 2, "embed_len": 1, "eta": 0.2, "nu": 0.5,
    },
    "narendra": {
        "lengths": (200, 1000, 1000),
        "sigma": 1.0, "mu": 0.3, "taps": 5, "embed_len": 1, "eta": 0.5, "nu": 0.01,
    },
    "wiener": {
        "lengths": (200, 1000, 1000),
        "sigma": 1.0, "mu": 0.3, "taps": 5, "embed_len": 1, "eta": 0.5, "nu": 0.01,
    },
    "channel-equalization": {
        "lengths": (200, 1000, 1000),
        "sigma": 0.5, "mu": 0.9, "taps": 5, "embed_len": 2, "eta": 0.5, "nu": 0.0,
    },
}


def online_dataset(task: str, seed: int) -> SeriesDataset:
    n_train, n_val, n_test = ONLINE_PRESETS[task]["lengths"]
    return generate(GeneratorSpec(task=task, seed=seed, n_train=n_train, n_val=n_val, n_test=n_test))


def online_pair(task: str, seed: int) -> tuple[OnlineReport, OnlineReport]:
    """(RMK-KLMS, KLMS) sobre el mismo stream."""
    p = ONLINE_PRESETS[task]
    data = online_dataset(task, seed)
    base = RBFKernel(sigma=p["sigma"])
    cfg = RecursiveKernelConfig(base=base, taps=p["taps"], mu=p["mu"], embed_len=p["embed_len"])
    rmk = run_online(cfg, data, p["eta"], p["nu"])
    klms = klms_baseline(data, base, p["embed_len"], p["eta"])
    return rmk, klms


def batch_score(task: str, family: str, seed: int, n_jobs: int = 2) -> float:
    """nMSE de test de una familia batch ajustada con BATCH_GRID."""
    data = generate(GeneratorSpec(task=task, seed=seed))
    row, _ = run_batch_model(data, family, {}, BATCH_GRID, n_jobs=n_jobs)
    return row.nmse_db
