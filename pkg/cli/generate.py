"""
CLI commands for generating curves and graphs
"""
from pathlib import Path

import typer

from cli.utils import FLAGS, cli_errors, emit_record, success
from engine import generators
from engine.formats import write_curve_points, write_graph
from utils.types import SpaceKind

app = typer.Typer(no_args_is_help=True, help="Generate curves and graphs")


def _write(kind: str, points, out: Path, space: SpaceKind = SpaceKind.EUCLIDEAN, **extra):
    write_curve_points(out, points, space)
    success(f"Wrote {len(points)} vertices to {out}")
    emit_record({"kind": kind, "n": len(points), "out": str(out), **extra})


@app.command(name="line")
def line(
    n: int = typer.Option(..., "-n", "--n", help="Number of vertices"),
    dim: int = typer.Option(2, "-d", "--dim", help="Dimension"),
    length: float = typer.Option(1.0, "--length", help="Length of the segment"),
    out: Path = typer.Option(..., *FLAGS["out"], help="Curve file to write"),
):
    """Evenly spaced collinear points (packedness at most 2)"""
    with cli_errors():
        _write("line", generators.line_points(n, dim, length), out)


@app.command(name="spiral")
def spiral(
    n: int = typer.Option(..., "-n", "--n", help="Number of vertices"),
    dim: int = typer.Option(2, "-d", "--dim", help="Dimension (at least 2)"),
    turns: float = typer.Option(3.0, "--turns", help="Number of turns"),
    out: Path = typer.Option(..., *FLAGS["out"], help="Curve file to write"),
):
    """Archimedean spiral"""
    with cli_errors():
        _write("spiral", generators.spiral_points(n, dim, turns), out)


@app.command(name="retrace")
def retrace(
    passes: int = typer.Option(..., "-r", "--passes", help="Passes over the unit segment"),
    points_per_pass: int = typer.Option(3, "--points-per-pass", help="Samples per pass, endpoints included"),
    dim: int = typer.Option(1, "-d", "--dim", help="Dimension"),
    out: Path = typer.Option(..., *FLAGS["out"], help="Curve file to write"),
):
    """Back-and-forth walk over the unit segment (packedness at least 2 per pass)"""
    with cli_errors():
        _write("retrace", generators.retrace_points(passes, points_per_pass, dim), out, passes=passes)


@app.command(name="random-walk")
def random_walk(
    n: int = typer.Option(..., "-n", "--n", help="Number of vertices"),
    dim: int = typer.Option(2, "-d", "--dim", help="Dimension"),
    step: float = typer.Option(1.0, "--step", help="Standard deviation of a step"),
    seed: int = typer.Option(0, *FLAGS["seed"], help="Random seed"),
    out: Path = typer.Option(..., *FLAGS["out"], help="Curve file to write"),
):
    """Gaussian random walk"""
    with cli_errors():
        _write("random-walk", generators.random_walk_points(n, dim, seed, step), out, seed=seed)


@app.command(name="graph-walk")
def graph_walk(
    n: int = typer.Option(..., "-n", "--n", help="Number of vertices of the walk"),
    vertices: int = typer.Option(64, "--vertices", help="Vertices of the random graph"),
    extra_edges: int = typer.Option(64, "--extra-edges", help="Edges added to the spanning tree"),
    seed: int = typer.Option(0, *FLAGS["seed"], help="Random seed"),
    graph_out: Path = typer.Option(..., "--graph-out", help="Graph file to write"),
    out: Path = typer.Option(..., *FLAGS["out"], help="Curve file to write"),
):
    """Random connected graph and a random walk on it"""
    with cli_errors():
        graph = generators.random_graph(vertices, extra_edges, seed)
        write_graph(graph_out, graph)
        walk = generators.graph_walk(graph, n, seed)
        _write("graph-walk", walk, out, SpaceKind.GRAPH, graph=str(graph_out), seed=seed)
