"""
Consola compartida y configuración de logging.
"""

import logging

from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn

console = Console()


def setup_logging(verbose: bool = False):
    """Instala un RichHandler en el logger raíz del paquete."""
    logger = logging.getLogger("rmkfilter")
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        logger.addHandler(RichHandler(console=console, show_path=False, markup=False))


def make_progress(label: str, color: str = "cyan", disable: bool = False) -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn(f"[{color}]{label}"),
        BarColumn(bar_width=50),
        TaskProgressColumn(),
        TextColumn("[yellow]{task.completed}/{task.total}"),
        console=console,
        transient=True,
        disable=disable,
    )
