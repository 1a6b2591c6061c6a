from rmkfilter.datasets.generators import (
    GENERATORS,
    gen_channel_equalization,
    gen_mackey_glass,
    gen_narendra,
    gen_wiener,
    generate,
    narendra_nonlinearity,
)
from rmkfilter.datasets.loaders import REAL_DATA_PRESETS, load_csv_series
from rmkfilter.datasets.metrics import NMSE_FLOOR_DB, convergence_step, nmse, running_mse

__all__ = [
    "GENERATORS",
    "gen_channel_equalization",
    "gen_mackey_glass",
    "gen_narendra",
    "gen_wiener",
    "generate",
    "narendra_nonlinearity",
    "REAL_DATA_PRESETS",
    "load_csv_series",
    "NMSE_FLOOR_DB",
    "convergence_step",
    "nmse",
    "running_mse",
]
