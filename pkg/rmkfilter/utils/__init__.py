from rmkfilter.utils.console import console, make_progress, setup_logging
from rmkfilter.utils.errors import (
    CapacityError,
    ConfigError,
    ConvergenceWarning,
    DataError,
    DataFileNotFoundError,
    DegenerateVarianceError,
    DivergenceError,
    IllConditionedError,
    NonNumericCellError,
    NumericalError,
    RankDeficientError,
    RMKError,
    SeriesTooShortError,
    ShapeMismatchError,
    SplitError,
)

__all__ = [
    "console",
    "make_progress",
    "setup_logging",
    "RMKError",
    "ConfigError",
    "ShapeMismatchError",
    "DataError",
    "DataFileNotFoundError",
    "NonNumericCellError",
    "SeriesTooShortError",
    "DegenerateVarianceError",
    "SplitError",
    "NumericalError",
    "IllConditionedError",
    "RankDeficientError",
    "DivergenceError",
    "CapacityError",
    "ConvergenceWarning",
]
