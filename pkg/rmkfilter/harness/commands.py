"""
Subcomandos de la CLI: generación de datos, experimentos batch/online y
benchmark de tiempos del kernel recursivo.
"""

import logging
import time
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd
from rich.table import Table

from rmkfilter.datasets import generate, load_csv_series, nmse
from rmkfilter.filtering import klms_baseline, run_online
from rmkfilter.kernels import kernel_stack_fast, kernel_stack_naive
from rmkfilter.models.config import GeneratorSpec, RBFKernel, RecursiveKernelConfig
from rmkfilter.models.experiment import BenchConfig, ExperimentConfig
from rmkfilter.models.results import OnlineReport, ResultRow, ResultTable
from rmkfilter.models.series import SeriesDataset
from rmkfilter.regression import (
    ParameterGrid,
    config_from_params,
    grid_search,
    train_batch,
)
from rmkfilter.utils.console import console, make_progress
from rmkfilter.utils.errors import ConfigError, DataError, NumericalError, RMKError, SplitError

logger = logging.getLogger(__name__)

BATCH_DEFAULTS: dict[str, Any] = {
    "sigma": 1.0,
    "mu": 0.5,
    "taps": 5,
    "c": 1e-3,
    "embed_len": 1,
    "lam": 1e-2,
}
ONLINE_DEFAULTS: dict[str, Any] = {
    "sigma": 1.0,
    "mu": 0.5,
    "taps": 5,
    "embed_len": 1,
    "eta": 0.1,
    "nu": 0.01,
}
ONLINE_OPTIONS = ("score_on", "combiner_input", "eval_fraction", "window", "budget")
BENCH_COLUMNS = ["n", "naive_seconds", "fast_seconds", "ratio", "max_abs_diff"]
EQUALITY_TOL = 1e-9


def load_dataset(cfg: ExperimentConfig) -> SeriesDataset:
    """Resuelve la única fuente de datos de la configuración."""
    cfg.require_source()
    if cfg.generator is not None:
        return generate(cfg.generator)
    if cfg.csv is not None:
        src = cfg.csv
        return load_csv_series(
            src.path,
            column=src.column,
            horizon=src.horizon,
            preset=src.preset,
            n_train=src.n_train,
            n_val=src.n_val,
            name=src.name,
        )
    return SeriesDataset.load(cfg.dataset_path)


def _prepare_output(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        cfg.save(out / "config_echo.yaml")
    except OSError as e:
        raise DataError(f"No se puede escribir en {out}: {e}") from e
    return out


def _with_context(e: RMKError, dataset: str, model: str) -> RMKError:
    return type(e)(f"[{dataset}/{model}] {e}")


def _print_table(table: ResultTable, title: str):
    view = Table(title=title)
    for col in ("dataset", "model", "nmse_db", "seconds"):
        view.add_column(col, justify="right" if col in ("nmse_db", "seconds") else "left")
    for row in table.rows:
        view.add_row(row.dataset, row.model, f"{row.nmse_db:.2f}", f"{row.seconds:.2f}")
    console.print(view)


# ------------------------------------------------------------------
# generate
# ------------------------------------------------------------------

def cmd_generate(spec: GeneratorSpec, out: str | Path) -> Path:
    """Genera el benchmark y lo guarda como CSV + sidecar JSON."""
    dataset = generate(spec)
    try:
        path = dataset.save(out)
    except OSError as e:
        raise DataError(f"No se puede escribir {out}: {e}") from e
    console.print(f"[green]✓[/green] {spec.task}: {dataset.length} muestras → {path}")
    return path


# ------------------------------------------------------------------
# batch
# ------------------------------------------------------------------

def run_batch_model(
    dataset: SeriesDataset,
    family: str,
    params: dict[str, Any],
    grid: Optional[dict] = None,
    n_jobs: int = 1,
) -> tuple[ResultRow, np.ndarray]:
    """Ajusta una familia (con búsqueda en rejilla opcional) y la evalúa en test."""
    start_time = time.perf_counter()
    if dataset.test_range[0] >= dataset.test_range[1]:
        raise SplitError(f"El dataset {dataset.name} no tiene partición de test")

    params = {**BATCH_DEFAULTS, **params}
    if grid is not None:
        result = grid_search(dataset, ParameterGrid.from_dict(grid), family, n_jobs, show_progress=True)
        params = {**params, **result.best_params}
        logger.info("%s: mejor validación %.2f dB con %s", family, result.best_nmse, result.best_params)

    kernel_cfg, c, stacking = config_from_params(params, family)
    n_train = dataset.train_end
    model = train_batch(
        dataset.x[:n_train],
        dataset.y[:n_train],
        kernel_cfg,
        c,
        stacking,
        loo=bool(params.get("loo", False)),
        family=family,
    )
    start, stop = dataset.test_range
    predictions = model.predict(dataset.x[:stop], (start, stop))
    score = nmse(predictions, dataset.y[start:stop])

    used = {k: params[k] for k in ("sigma", "mu", "taps", "c", "embed_len")}
    if family == "rbf-embedding":
        used["taps"] = 1
    if family in ("ridge-stacking", "sparse-stacking"):
        used["lam"] = params["lam"]
    row = ResultRow(
        dataset=dataset.name,
        model=family,
        nmse_db=score,
        hyperparameters=used,
        seconds=time.perf_counter() - start_time,
    )
    return row, predictions


def cmd_batch(cfg: ExperimentConfig) -> ResultTable:
    """Entrena los modelos batch, escribe results.csv y predictions.csv."""
    families = cfg.batch_models()
    if not families:
        raise ConfigError("La configuración no incluye modelos batch")
    out = _prepare_output(cfg)
    dataset = load_dataset(cfg)
    start, stop = dataset.test_range

    table = ResultTable()
    frame = pd.DataFrame({"n": np.arange(start, stop), "target": dataset.y[start:stop]})
    for family in families:
        console.print(f"[cyan]→[/cyan] {dataset.name}: {family}")
        try:
            row, predictions = run_batch_model(dataset, family, cfg.params, cfg.grid, cfg.n_jobs)
        except RMKError as e:
            raise _with_context(e, dataset.name, family) from e
        table.add(row)
        frame[family] = predictions

    table.save(out / "results.csv")
    frame.to_csv(out / "predictions.csv", index=False, float_format="%.17g")
    _print_table(table, f"Batch · {dataset.name}")
    return table


# ------------------------------------------------------------------
# online
# ------------------------------------------------------------------

def run_online_model(dataset: SeriesDataset, model: str, params: dict[str, Any]) -> tuple[ResultRow, OnlineReport]:
    start_time = time.perf_counter()
    params = {**ONLINE_DEFAULTS, **params}
    options = {k: params[k] for k in ONLINE_OPTIONS if k in params}
    base = RBFKernel(sigma=float(params["sigma"]))

    if model == "klms":
        report = klms_baseline(dataset, base, int(params["embed_len"]), float(params["eta"]), **options)
        used = {k: params[k] for k in ("sigma", "embed_len", "eta")}
    else:
        kernel_cfg = RecursiveKernelConfig(
            base=base, taps=int(params["taps"]), mu=float(params["mu"]), embed_len=int(params["embed_len"])
        )
        report = run_online(
            kernel_cfg,
            dataset,
            float(params["eta"]),
            float(params["nu"]),
            alpha_init=params.get("alpha_init"),
            show_progress=True,
            **options,
        )
        used = {k: params[k] for k in ("sigma", "mu", "taps", "embed_len", "eta", "nu")}

    row = ResultRow(
        dataset=dataset.name,
        model=model,
        nmse_db=report.nmse_db,
        hyperparameters=used,
        seconds=time.perf_counter() - start_time,
    )
    return row, report


def cmd_online(cfg: ExperimentConfig) -> ResultTable:
    """Ejecuta klms y/o rmk-klms y escribe nMSE final y curvas de aprendizaje."""
    models = cfg.online_models()
    if not models:
        raise ConfigError("La configuración no incluye modelos online (klms, rmk-klms)")
    out = _prepare_output(cfg)
    dataset = load_dataset(cfg)

    table = ResultTable()
    for model in models:
        console.print(f"[cyan]→[/cyan] {dataset.name}: {model}")
        try:
            row, report = run_online_model(dataset, model, cfg.params)
        except RMKError as e:
            raise _with_context(e, dataset.name, model) from e
        table.add(row)
        report.curve_frame().to_csv(
            out / f"learning_curve_{model}.csv", index=False, float_format="%.17g"
        )

    table.save(out / "results.csv")
    _print_table(table, f"Online · {dataset.name}")
    return table


# ------------------------------------------------------------------
# bench-kernel
# ------------------------------------------------------------------

def _median_time(fn, repetitions: int) -> tuple[float, Any]:
    times = []
    result = None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times)), result


def bench_kernel(
    sizes: list[int],
    taps: int = 5,
    mu: float = 0.5,
    repetitions: int = 5,
    sigma: float = 1.0,
    seed: int = 0,
    show_progress: bool = False,
) -> pd.DataFrame:
    """Tiempos (mediana) de kernel_stack_naive frente a kernel_stack_fast."""
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError("Los tamaños N deben ser estrictamente crecientes")
    cfg = RecursiveKernelConfig(base=RBFKernel(sigma=sigma), taps=taps, mu=mu)
    rng = np.random.default_rng(seed)

    # Calentamiento descartado
    warm = rng.standard_normal(min(sizes[0], 64))
    kernel_stack_naive(cfg, warm)
    kernel_stack_fast(cfg, warm)

    rows = []
    with make_progress("Benchmark de kernels", color="green", disable=not show_progress) as progress:
        task = progress.add_task("bench", total=len(sizes))
        for n in sizes:
            series = rng.standard_normal(n)
            naive_s, naive = _median_time(lambda: kernel_stack_naive(cfg, series), repetitions)
            fast_s, fast = _median_time(lambda: kernel_stack_fast(cfg, series), repetitions)
            diff = float(np.max(np.abs(naive.taps - fast.taps)))
            if diff > EQUALITY_TOL:
                raise NumericalError(f"N={n}: naive y fast difieren en {diff:.2e} > {EQUALITY_TOL:g}")
            rows.append({
                "n": n,
                "naive_seconds": naive_s,
                "fast_seconds": fast_s,
                "ratio": fast_s / naive_s if naive_s > 0 else float("nan"),
                "max_abs_diff": diff,
            })
            logger.debug("N=%d naive=%.4fs fast=%.4fs", n, naive_s, fast_s)
            progress.advance(task)
    return pd.DataFrame(rows, columns=BENCH_COLUMNS)


def cmd_bench_kernel(cfg: ExperimentConfig) -> pd.DataFrame:
    """Escribe bench_kernel.csv con una fila por tamaño N."""
    out = _prepare_output(cfg)
    bench: BenchConfig = cfg.bench
    frame = bench_kernel(
        bench.sizes,
        taps=bench.taps,
        mu=bench.mu,
        repetitions=bench.repetitions,
        sigma=bench.sigma,
        seed=cfg.seed,
        show_progress=True,
    )
    frame.to_csv(out / "bench_kernel.csv", index=False, float_format="%.6g")

    view = Table(title=f"Kernel recursivo P={bench.taps}, μ={bench.mu}")
    for col in BENCH_COLUMNS:
        view.add_column(col, justify="right")
    for rec in frame.itertuples(index=False):
        view.add_row(str(rec.n), f"{rec.naive_seconds:.4f}", f"{rec.fast_seconds:.4f}",
                     f"{rec.ratio:.3f}", f"{rec.max_abs_diff:.1e}")
    console.print(view)
    return frame
