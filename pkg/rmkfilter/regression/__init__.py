from rmkfilter.regression.grid_search import ParameterGrid, config_from_params, grid_search
from rmkfilter.regression.krr import krr_fit, loo_predictions
from rmkfilter.regression.stacking import (
    FAMILIES,
    StackedBatchModel,
    fit_stacking,
    predict_series,
    stacked_predict,
    train_baseline,
    train_batch,
)

__all__ = [
    "ParameterGrid",
    "config_from_params",
    "grid_search",
    "krr_fit",
    "loo_predictions",
    "FAMILIES",
    "StackedBatchModel",
    "fit_stacking",
    "predict_series",
    "stacked_predict",
    "train_baseline",
    "train_batch",
]
