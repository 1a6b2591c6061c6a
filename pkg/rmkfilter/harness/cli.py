"""
Punto de entrada ``rmkfilter``.

Códigos de salida: 0 éxito, 2 uso/configuración, 3 datos, 4 fallo numérico.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from rmkfilter.harness.commands import cmd_batch, cmd_bench_kernel, cmd_generate, cmd_online
from rmkfilter.models.config import GENERATOR_TASKS, GeneratorSpec
from rmkfilter.models.experiment import BenchConfig, ExperimentConfig
from rmkfilter.utils.console import console, setup_logging
from rmkfilter.utils.errors import ConfigError, RMKError

logger = logging.getLogger("rmkfilter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmkfilter",
        description="Filtrado γ multikernel recursivo en RKHS: experimentos batch, online y benchmarks.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Logging detallado")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--config", type=Path, help="Fichero YAML del experimento")
        p.add_argument("--seed", type=int, help="Sobrescribe la semilla")
        p.add_argument("--out", help="Directorio (o fichero, en generate) de salida")

    gen = sub.add_parser("generate", help="Genera un benchmark sintético como CSV")
    common(gen)
    gen.add_argument("--task", choices=GENERATOR_TASKS, help="Tarea (si no hay --config)")
    gen.add_argument("--n-train", type=int, default=200)
    gen.add_argument("--n-val", type=int, default=1000)
    gen.add_argument("--n-test", type=int, default=1000)

    common(sub.add_parser("batch", help="Modelos KRR batch con stacking"))
    common(sub.add_parser("online", help="KLMS y RMK-KLMS online"))

    bench = sub.add_parser("bench-kernel", help="Tiempos naive vs fast del kernel recursivo")
    common(bench)
    bench.add_argument("--sizes", type=int, nargs="+", help="Valores de N crecientes")
    bench.add_argument("--taps", type=int, help="Número de taps P")
    bench.add_argument("--mu", type=float, help="Parámetro μ")
    bench.add_argument("--repetitions", type=int, help="Repeticiones por tamaño")
    return parser


def _load_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    return cfg.with_overrides(seed=args.seed, output_dir=None if args.command == "generate" else args.out)


def _generate(args) -> int:
    if args.config:
        cfg = _load_config(args)
        if cfg.generator is None:
            raise ConfigError("La configuración no define dataset.generator")
        spec = cfg.generator
        default_dir = Path(cfg.output_dir)
    elif args.task:
        spec = GeneratorSpec(
            task=args.task,
            seed=0 if args.seed is None else args.seed,
            n_train=args.n_train,
            n_val=args.n_val,
            n_test=args.n_test,
        )
        default_dir = Path(".")
    else:
        raise ConfigError("generate requiere --config o --task")

    out = Path(args.out) if args.out else default_dir / f"{spec.task}.csv"
    cmd_generate(spec, out)
    return 0


def _bench(args) -> int:
    cfg = _load_config(args)
    overrides = {
        k: getattr(args, k)
        for k in ("sizes", "taps", "mu", "repetitions")
        if getattr(args, k) is not None
    }
    if overrides:
        cfg.bench = BenchConfig(**{**cfg.bench.to_dict(), **overrides})
    cmd_bench_kernel(cfg)
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    try:
        if args.command == "generate":
            return _generate(args)
        if args.command == "bench-kernel":
            return _bench(args)
        cfg = _load_config(args)
        if args.command == "batch":
            cmd_batch(cfg)
        else:
            cmd_online(cfg)
        return 0
    except RMKError as e:
        code = getattr(e, "code", None)
        logger.error("%s%s", f"[{code}] " if code else "", e)
        return e.exit_code
    except KeyboardInterrupt:
        console.print("[yellow]Interrumpido[/yellow]")
        return 130


if __name__ == "__main__":
    sys.exit(main())
