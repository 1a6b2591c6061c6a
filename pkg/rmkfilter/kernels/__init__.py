from rmkfilter.kernels.base import base_kernel_eval, embed, embed_series
from rmkfilter.kernels.recursive import (
    KernelStack,
    composite_average,
    kernel_stack_columns,
    kernel_stack_fast,
    kernel_stack_naive,
)
from rmkfilter.kernels.stream import StreamKernelState, stream_push

__all__ = [
    "base_kernel_eval",
    "embed",
    "embed_series",
    "KernelStack",
    "composite_average",
    "kernel_stack_columns",
    "kernel_stack_fast",
    "kernel_stack_naive",
    "StreamKernelState",
    "stream_push",
]
