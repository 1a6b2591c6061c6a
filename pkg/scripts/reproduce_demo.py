"""
Demo de reproducción a escala de escritorio: tablas batch y online y
velocidad de convergencia en ecualización de canal (mediana de semillas).
"""

import sys
from pathlib import Path

import numpy as np
from rich.table import Table

sys.path.insert(0, str(Path(__file__).parent.parent))

from rmkfilter.datasets import convergence_step
from rmkfilter.harness.presets import BATCH_ROWS, batch_score, online_pair
from rmkfilter.utils.console import console, setup_logging


def main():
    n_seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    seeds = range(n_seeds)
    setup_logging()

    # Paso 1: batch
    console.print(f"\n[bold][1/3] Modelos batch ({n_seeds} semillas)[/bold]")
    batch = Table(title="nMSE de test (dB), mediana")
    batch.add_column("dataset")
    batch.add_column("modelo")
    batch.add_column("nMSE", justify="right")
    for task, families in BATCH_ROWS.items():
        for family in families:
            scores = [batch_score(task, family, seed) for seed in seeds]
            batch.add_row(task, family, f"{np.median(scores):.2f}")
    console.print(batch)

    # Paso 2: online
    console.print("\n[bold][2/3] Filtrado online[/bold]")
    online = Table(title="nMSE final (dB), mediana")
    online.add_column("dataset")
    online.add_column("KLMS", justify="right")
    online.add_column("RMK-KLMS", justify="right")
    for task in ("mackey-glass", "narendra", "wiener"):
        pairs = [online_pair(task, seed) for seed in seeds]
        online.add_row(
            task,
            f"{np.median([k.nmse_db for _, k in pairs]):.2f}",
            f"{np.median([r.nmse_db for r, _ in pairs]):.2f}",
        )
    console.print(online)

    # Paso 3: convergencia en ecualización
    console.print("\n[bold][3/3] Convergencia en ecualización de canal[/bold]")
    pairs = [online_pair("channel-equalization", seed) for seed in seeds]
    rmk_step = np.median([convergence_step(r.learning_curve) for r, _ in pairs])
    klms_step = np.median([convergence_step(k.learning_curve) for _, k in pairs])
    console.print(f"  Paso de convergencia (1.5 × valor final): RMK-KLMS {rmk_step:.0f}, KLMS {klms_step:.0f}")
    console.print("\n[green]✓ COMPLETADO[/green]")


if __name__ == "__main__":
    main()
