from rmkfilter.harness.cli import build_parser, main
from rmkfilter.harness.commands import (
    bench_kernel,
    cmd_batch,
    cmd_bench_kernel,
    cmd_generate,
    cmd_online,
    load_dataset,
)

__all__ = [
    "build_parser",
    "main",
    "bench_kernel",
    "cmd_batch",
    "cmd_bench_kernel",
    "cmd_generate",
    "cmd_online",
    "load_dataset",
]
