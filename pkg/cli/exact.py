"""
CLI commands for the exact O(nm) baselines
"""
import time
from pathlib import Path
from typing import Optional

import typer

from cli.utils import FLAGS, cli_errors, emit_record, make_oracle
from engine.formats import load_curve, read_curve_points
from engine.frechet_engine import exact_discrete_frechet
from engine.hausdorff_engine import exact_hausdorff

app = typer.Typer(no_args_is_help=True, help="Exact distances by dynamic programming")


def _run(mode: str, compute, p_file: Path, q_file: Path, space: str, graph: Optional[Path], budget: Optional[int]):
    with cli_errors():
        _, dimension, _ = read_curve_points(p_file)
        oracle = make_oracle(space, dimension, str(graph) if graph else None)
        p = load_curve(p_file, oracle)
        q = load_curve(q_file, oracle)
        started = time.perf_counter_ns()
        result = compute(p, q, oracle, budget)
        emit_record(
            {
                "mode": mode,
                "n": p.n,
                "m": q.n,
                "value": result,
                "wall_ms": round((time.perf_counter_ns() - started) / 1e6, 3),
            }
        )


@app.command(name="frechet")
def frechet(
    p_file: Path = typer.Argument(..., help="Curve file of P"),
    q_file: Path = typer.Argument(..., help="Curve file of Q"),
    space: str = typer.Option("euclid:p2", *FLAGS["space"], help="euclid:p1|p2|pinf or graph"),
    graph: Optional[Path] = typer.Option(None, *FLAGS["graph"], help="Graph file for the graph space"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Largest n·m allowed"),
):
    """Exact discrete Fréchet distance"""
    _run("frechet", exact_discrete_frechet, p_file, q_file, space, graph, budget)


@app.command(name="hausdorff")
def hausdorff(
    p_file: Path = typer.Argument(..., help="Curve file of P"),
    q_file: Path = typer.Argument(..., help="Curve file of Q"),
    space: str = typer.Option("euclid:p2", *FLAGS["space"], help="euclid:p1|p2|pinf or graph"),
    graph: Optional[Path] = typer.Option(None, *FLAGS["graph"], help="Graph file for the graph space"),
    budget: Optional[int] = typer.Option(None, "--budget", help="Largest n·m allowed"),
):
    """Exact Hausdorff distance between the vertex sets"""
    _run("hausdorff", exact_hausdorff, p_file, q_file, space, graph, budget)
