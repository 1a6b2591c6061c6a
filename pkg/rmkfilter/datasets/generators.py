"""
Generadores de benchmarks sintéticos: Mackey-Glass, Narendra, Wiener y
ecualización de canal no lineal.

Todos son deterministas dado ``GeneratorSpec.seed``.
"""

import logging
from typing import Callable

import numpy as np
from scipy.signal import lfilter

from rmkfilter.models.config import GeneratorSpec
from rmkfilter.models.series import SeriesDataset
from rmkfilter.utils.errors import ConfigError

logger = logging.getLogger(__name__)

WIENER_FILTER = (0.20, 0.17, 0.14, 0.12, 0.10, 0.09, 0.09, 0.09)


def _param(spec: GeneratorSpec, key: str, default):
    return spec.params.get(key, default)


def _build(spec: GeneratorSpec, x: np.ndarray, y: np.ndarray, **metadata) -> SeriesDataset:
    """Añade ruido de observación opcional y fija las fronteras de partición."""
    y = np.array(y, dtype=np.float64)
    if spec.noise_var:
        obs_rng = np.random.default_rng([spec.seed, 1])
        y += np.sqrt(spec.noise_var) * obs_rng.standard_normal(y.shape[0])
    return SeriesDataset(
        x=x,
        y=y,
        train_end=spec.n_train,
        val_end=spec.n_train + spec.n_val,
        name=spec.task,
        horizon=1,
        metadata={"spec": spec.to_dict(), **metadata},
    )


def mackey_glass_series(
    n_samples: int,
    tau: float = 30.0,
    beta: float = 0.2,
    gamma: float = 0.1,
    power: float = 10.0,
    history: float = 1.2,
    dt: float = 0.1,
    stride: float = 1.0,
) -> np.ndarray:
    """Integra dx/dt = β·x(t-τ)/(1 + x(t-τ)^n) - γ·x(t) con RK4 y muestrea cada ``stride``."""
    lag = int(round(tau / dt))
    every = int(round(stride / dt))
    if lag < 1 or every < 1:
        raise ConfigError("tau y stride deben ser múltiplos positivos de dt")

    def f(x, x_tau):
        return beta * x_tau / (1.0 + x_tau ** power) - gamma * x

    n_steps = (n_samples - 1) * every
    grid = np.empty(lag + 1 + n_steps)
    grid[: lag + 1] = history
    for i in range(lag, lag + n_steps):
        x = grid[i]
        d0 = grid[i - lag]
        d1 = grid[i - lag + 1]
        # Retardo en t + dt/2 por interpolación lineal
        dh = 0.5 * (d0 + d1)
        k1 = f(x, d0)
        k2 = f(x + 0.5 * dt * k1, dh)
        k3 = f(x + 0.5 * dt * k2, dh)
        k4 = f(x + dt * k3, d1)
        grid[i + 1] = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return grid[lag::every][:n_samples].copy()


def gen_mackey_glass(spec: GeneratorSpec) -> SeriesDataset:
    """Predicción a un paso de la serie Mackey-Glass con retardo 30."""
    transient = int(_param(spec, "transient", 1000))
    if transient < 0:
        raise ConfigError("transient debe ser >= 0")
    series = mackey_glass_series(
        transient + spec.length + 1,
        tau=_param(spec, "tau", 30.0),
        beta=_param(spec, "beta", 0.2),
        gamma=_param(spec, "gamma", 0.1),
        power=_param(spec, "power", 10.0),
        history=_param(spec, "history", 1.2),
        dt=_param(spec, "dt", 0.1),
        stride=_param(spec, "stride", 1.0),
    )[transient:]
    return _build(spec, series[:-1], series[1:])


def narendra_nonlinearity(e):
    """f(e) = 0.6 sin(πe) + 0.3 sin(3πe) + 0.1 sin(5πe)."""
    e = np.asarray(e, dtype=np.float64)
    return 0.6 * np.sin(np.pi * e) + 0.3 * np.sin(3 * np.pi * e) + 0.1 * np.sin(5 * np.pi * e)


def gen_narendra(spec: GeneratorSpec) -> SeriesDataset:
    """Identificación del sistema y_n = 0.3 y_{n-1} + 0.6 y_{n-2} + f(e_n)."""
    rng = np.random.default_rng(spec.seed)
    a = _param(spec, "a", None)
    if a is None:
        a = rng.uniform(_param(spec, "a_low", 0.1), _param(spec, "a_high", 2.9))
    omega0 = _param(spec, "omega0", 2 * np.pi / 250)

    n = np.arange(1, spec.length + 1)
    e = np.sin((1.0 + a) * omega0 * n)
    forcing = narendra_nonlinearity(e)
    y = np.empty(spec.length)
    y_1, y_2 = 1.0, 1.0
    for k in range(spec.length):
        y[k] = 0.3 * y_1 + 0.6 * y_2 + forcing[k]
        y_1, y_2 = y[k], y_1

    # Ruido solo en los objetivos de entrenamiento
    target_var = _param(spec, "target_noise_var", 0.1)
    noisy = y.copy()
    if target_var > 0:
        noisy[: spec.n_train] += np.sqrt(target_var) * rng.standard_normal(spec.n_train)
    return _build(spec, e, noisy, a=float(a))


def gen_wiener(spec: GeneratorSpec) -> SeriesDataset:
    """Sistema de Wiener: AR(1) de entrada, filtro FIR de 8 coeficientes y tanh."""
    rng = np.random.default_rng(spec.seed)
    b = _param(spec, "b", 0.8)
    if not -1 < b < 1:
        raise ConfigError(f"b debe estar en (-1, 1), recibido {b}")
    input_var = _param(spec, "input_var", 0.1)
    x0 = _param(spec, "x0", None)
    if x0 is None:
        x0 = rng.uniform(0.0, 1.0)

    drive = np.sqrt(input_var) * rng.standard_normal(spec.length - 1)
    x = np.empty(spec.length)
    x[0] = x0
    if spec.length > 1:
        x[1:], _ = lfilter([np.sqrt(1.0 - b ** 2)], [1.0, -b], drive, zi=[b * x0])

    taps = np.asarray(_param(spec, "filter", WIENER_FILTER), dtype=np.float64)
    y = np.tanh(lfilter(taps, [1.0], x))
    return _build(spec, x, y, x0=float(x0))


def channel_output(symbols, memory: float = 0.5, quadratic: float = 0.9) -> np.ndarray:
    """r_n = z_n - quadratic·z_n² con z_n = s_n + memory·s_{n-1} (s_0 = 0), sin ruido."""
    symbols = np.asarray(symbols, dtype=np.float64)
    z = lfilter([1.0, memory], [1.0], symbols)
    return z - quadratic * z ** 2


def gen_channel_equalization(spec: GeneratorSpec) -> SeriesDataset:
    """Ecualizador: entrada r_n recibida, objetivo s_{n-D}."""
    rng = np.random.default_rng(spec.seed)
    delay = int(_param(spec, "delay", 2))
    if delay < 0:
        raise ConfigError("delay debe ser >= 0")
    noise_var = _param(spec, "channel_noise_var", 0.01)

    total = spec.length + delay
    symbols = 2.0 * rng.integers(0, 2, size=total) - 1.0
    received = channel_output(
        symbols,
        memory=_param(spec, "memory", 0.5),
        quadratic=_param(spec, "quadratic", 0.9),
    )
    if noise_var > 0:
        received = received + np.sqrt(noise_var) * rng.standard_normal(total)
    return _build(spec, received[delay:], symbols[: spec.length], delay=delay)


GENERATORS: dict[str, Callable[[GeneratorSpec], SeriesDataset]] = {
    "mackey-glass": gen_mackey_glass,
    "narendra": gen_narendra,
    "wiener": gen_wiener,
    "channel-equalization": gen_channel_equalization,
}


def generate(spec: GeneratorSpec) -> SeriesDataset:
    """Genera el dataset de la tarea indicada en ``spec.task``."""
    logger.debug("Generando %s (seed=%d, N=%d)", spec.task, spec.seed, spec.length)
    return GENERATORS[spec.task](spec)
