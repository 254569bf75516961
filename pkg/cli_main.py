#!/usr/bin/env python3
"""
pfrechet CLI - approximate discrete Fréchet and Hausdorff queries over packed curves

Usage:
    python cli_main.py [COMMAND] [OPTIONS]

Commands:
    generate    Generate curves and graphs
    preprocess  Preprocess a curve into a query bundle
    query       Query a preprocessed curve
    exact       Exact distances by dynamic programming
    update      Extend or truncate a preprocessed curve
    bench       Benchmark queries into a CSV
    info        Show what a bundle holds

Examples:
    python cli_main.py generate line -n 1000 --out p.txt
    python cli_main.py preprocess p.txt --space euclid:p2 --out p.pfre
    python cli_main.py query value p.pfre q.txt --epsilon 0.5
    python cli_main.py exact frechet p.txt q.txt
    python cli_main.py update extend-tail p.pfre --point 2.0,0.0
"""

import os
import sys

# Add the project root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from pathlib import Path

import typer
from rich.table import Table
from typer._completion_shared import Shells

import cli.bench
import cli.exact
import cli.generate
import cli.preprocess
import cli.query
import cli.update
from cli.utils import cli_errors, console, print_table

__version__ = "1.0.0"

# ASCII art banner
BANNER = """
╔═══════════════════════════════════════════╗
║            〰️  PFRECHET CLI  〰️            ║
║   Approximate Fréchet & Hausdorff queries ║
╚═══════════════════════════════════════════╝
"""


app = typer.Typer(
    no_args_is_help=True,
    add_completion=False,
    help="pfrechet CLI - preprocess packed curves and answer approximate distance queries",
)

# Add subcommands
app.add_typer(cli.generate.app, name="generate", help="Generate curves and graphs")
app.add_typer(cli.query.app, name="query", help="Query a preprocessed curve")
app.add_typer(cli.exact.app, name="exact", help="Exact distances by dynamic programming")
app.add_typer(cli.update.app, name="update", help="Extend or truncate a preprocessed curve")
app.command(name="preprocess")(cli.preprocess.preprocess)
app.command(name="bench")(cli.bench.bench)


# Hidden completion app
app_completion = typer.Typer(
    no_args_is_help=True,
    help="Generate and install completion scripts.",
    hidden=True,
)
app.add_typer(app_completion, name="completion")


def get_default_shell() -> Shells:
    """Find the default shell"""
    shell = os.environ.get("SHELL")
    if shell:
        shell = shell.split("/")[-1]
        if shell in Shells.__members__:
            return getattr(Shells, shell)
    return Shells.bash


@app_completion.command(help="Show completion for the specified shell, to copy or customize it.")
def show(
    ctx: typer.Context,
    shell: Shells = typer.Option(None, help="The shell to install completion for.", case_sensitive=False),
) -> None:
    if shell is None:
        shell = get_default_shell()
    typer.completion.show_callback(ctx, None, shell)


@app_completion.command(help="Install completion for the specified shell.")
def install(
    ctx: typer.Context,
    shell: Shells = typer.Option(None, help="The shell to install completion for.", case_sensitive=False),
) -> None:
    if shell is None:
        shell = get_default_shell()
    typer.completion.install_callback(ctx, None, shell)


def _fmt(value) -> str:
    return "-" if value is None else str(value)


@app.command(name="info")
def info(bundle: Path = typer.Argument(..., help="Bundle to inspect")):
    """Show the metadata and structure sizes of a bundle"""
    from engine.bundle import load_bundle

    with cli_errors():
        index, metadata = load_bundle(bundle)

        table = Table(title=f"Bundle {bundle.name}", show_header=False)
        table.add_column("Key", style="cyan")
        table.add_column("Value", style="green")
        rows = [
            ("Format version", str(metadata.version)),
            ("Space", metadata.space.value + (f":{metadata.p_norm.value}" if metadata.p_norm else "")),
            ("Dimension", str(metadata.dimension) if metadata.dimension else "-"),
            ("Vertices", str(metadata.n)),
            ("Oracle slack α", str(metadata.alpha)),
            ("Packedness c", _fmt(metadata.packedness)),
            ("Estimated c ≥", _fmt(metadata.packedness_estimate)),
            ("─" * 20, "─" * 20),
            ("1-TADD values", str(len(index.tadd))),
            ("Tree height", str(index.tree.height)),
            ("Curve length", f"{index.curve.prefix_lengths()[-1]:.6g}"),
            ("Hausdorff structures", "built" if metadata.nn else "lazy"),
        ]
        print_table(table, rows)


@app.command(name="version")
def version():
    """Show CLI version"""
    console.print(BANNER)
    console.print(f"Version: {__version__}")


if __name__ == "__main__":
    typer.completion.completion_init()
    app(prog_name=os.environ.get("CLI_PROG_NAME", "pfrechet"))
