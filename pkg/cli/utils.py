"""
CLI utility functions
"""
import json
import math
from contextlib import contextmanager
from typing import Iterator, List, Optional, Tuple

import typer
from rich.console import Console
from rich.table import Table

from engine.formats import read_graph
from engine.metric_oracles import DistanceOracle, euclidean_oracle, graph_oracle
from utils.errors import (
    BudgetExceededError,
    BundleFormatError,
    ContractViolation,
    CurveFormatError,
    CurveLoadError,
    CurveUnderflowError,
    UnreachableError,
    UnsupportedSpaceError,
)
from utils.types import PNorm, SpaceKind

# stdout carries only result records
console = Console(stderr=True)

EXIT_IO = 1
EXIT_CONTRACT = 2

FLAGS = {
    "epsilon": ["-e", "--epsilon"],
    "rho": ["-r", "--rho"],
    "space": ["-s", "--space"],
    "graph": ["-g", "--graph"],
    "out": ["-o", "--out"],
    "seed": ["--seed"],
}

_CONTRACT_ERRORS = (ContractViolation, UnsupportedSpaceError, BudgetExceededError, CurveUnderflowError)
_IO_ERRORS = (OSError, CurveFormatError, CurveLoadError, BundleFormatError, UnreachableError)


def print_table(table: Table, rows: List[Tuple]):
    """Print a rich table with rows"""
    for row in rows:
        table.add_row(*row)
    console.print(table)


def success(message: str):
    """Print a success message"""
    console.print(f"[green]✓[/green] {message}")


def error(message: str, code: int = EXIT_IO):
    """Print an error message and exit"""
    console.print(f"[red]✗[/red] {message}")
    raise typer.Exit(code)


def warning(message: str):
    """Print a warning message"""
    console.print(f"[yellow]⚠[/yellow] {message}")


def info(message: str):
    """Print an info message"""
    console.print(f"[blue]ℹ[/blue] {message}")


def emit_record(record: dict):
    """Write one result record as a single JSON line on stdout"""
    typer.echo(json.dumps(_finite(record), separators=(",", ":"), allow_nan=False))


def _finite(value):
    # JSON has no infinity; an unbounded bracket end is written as null
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


@contextmanager
def cli_errors() -> Iterator[None]:
    """Map engine exceptions to exit codes: 2 for contract violations, 1 for I/O and input data."""
    try:
        yield
    except _CONTRACT_ERRORS as e:
        error(f"{type(e).__name__}: {e}", EXIT_CONTRACT)
    except _IO_ERRORS as e:
        error(f"{type(e).__name__}: {e}", EXIT_IO)


def parse_space(space: str) -> Tuple[SpaceKind, Optional[PNorm]]:
    """Parse ``euclid[:p1|p2|pinf]`` or ``graph``."""
    kind, _, norm = space.partition(":")
    if kind == SpaceKind.GRAPH.value and not norm:
        return SpaceKind.GRAPH, None
    if kind == SpaceKind.EUCLIDEAN.value:
        try:
            return SpaceKind.EUCLIDEAN, PNorm(norm or PNorm.P2.value)
        except ValueError:
            pass
    raise ContractViolation(f"unknown space {space!r}; expected euclid:p1, euclid:p2, euclid:pinf or graph")


def make_oracle(space: str, dimension: int, graph_path: Optional[str]) -> DistanceOracle:
    """Exact oracle for a --space flag, reading the graph file when needed."""
    kind, norm = parse_space(space)
    if kind is SpaceKind.GRAPH:
        if graph_path is None:
            raise ContractViolation("--graph is required for the graph space")
        return graph_oracle(read_graph(graph_path))
    return euclidean_oracle(dimension, norm)


def parse_point(text: str, space: SpaceKind):
    """Comma-separated coordinates, or a vertex id for graph curves."""
    try:
        if space is SpaceKind.GRAPH:
            return int(text)
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise ContractViolation(f"cannot parse point {text!r}") from None
