"""
Jerarquía de excepciones de rmkfilter.

Cada familia lleva su código de salida para la CLI.
"""


class RMKError(Exception):
    """Error base del paquete."""
    exit_code = 1


class ConfigError(RMKError, ValueError):
    """Parámetros o configuración inválidos."""
    exit_code = 2


class ShapeMismatchError(ConfigError):
    """Dimensiones incompatibles entre entradas."""


class DataError(RMKError):
    """Problemas con los datos de entrada."""
    exit_code = 3
    code = "data"


class DataFileNotFoundError(DataError):
    code = "missing-file"


class NonNumericCellError(DataError):
    code = "non-numeric"


class SeriesTooShortError(DataError):
    code = "too-short"


class DegenerateVarianceError(DataError):
    """La varianza de los objetivos es cero y el nMSE no está definido."""
    code = "zero-variance"


class SplitError(DataError):
    code = "bad-split"


class NumericalError(RMKError):
    """Fallo numérico en un solver o en una recursión."""
    exit_code = 4


class IllConditionedError(NumericalError):
    """K + cI no es definida positiva en precisión de máquina."""


class RankDeficientError(NumericalError):
    pass


class DivergenceError(NumericalError):
    pass


class CapacityError(RMKError):
    """Se ha superado el presupuesto del diccionario."""
    exit_code = 4


class ConvergenceWarning(UserWarning):
    pass
