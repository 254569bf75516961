"""
CLI command that preprocesses a curve into a bundle
"""
from pathlib import Path
from typing import Optional

import typer

from cli.utils import FLAGS, cli_errors, emit_record, info, make_oracle, success
from engine.bundle import save_bundle
from engine.curve_index import CurveIndex
from engine.curve_model import build_curve, estimate_packedness
from engine.formats import read_curve_points
from utils.errors import ContractViolation, CurveLoadError
from utils.logs import PerformanceTimer


def preprocess(
    curve_file: Path = typer.Argument(..., help="Curve file of P"),
    space: str = typer.Option("euclid:p2", *FLAGS["space"], help="euclid:p1|p2|pinf or graph"),
    graph: Optional[Path] = typer.Option(None, *FLAGS["graph"], help="Graph file for the graph space"),
    packedness: Optional[float] = typer.Option(
        None, "-c", "--packedness", help="Known packedness constant; enables the Hausdorff early exit"
    ),
    estimate: bool = typer.Option(False, "--estimate-packedness", help="Record a certified lower bound on c"),
    hausdorff: bool = typer.Option(False, "--hausdorff", help="Build the Hausdorff structures now"),
    out: Path = typer.Option(..., *FLAGS["out"], help="Bundle file to write"),
):
    """Preprocess a curve into a query bundle"""
    with cli_errors():
        if packedness is not None and not packedness > 0.0:
            raise ContractViolation(f"packedness must be positive, got {packedness}")
        kind, dimension, points = read_curve_points(curve_file)
        oracle = make_oracle(space, dimension, str(graph) if graph else None)
        if kind is not oracle.space:
            raise CurveLoadError(f"{curve_file} holds a {kind.value} curve but --space is {space}")

        with PerformanceTimer("preprocess") as timer:
            curve = build_curve(points, oracle)
            index = CurveIndex.build(curve, oracle, packedness, hausdorff)
        report = estimate_packedness(curve, oracle) if estimate else None
        if report is not None:
            info(f"Packedness is at least {report.c_lower:.6g} (ball of radius {report.radius:.6g})")

        metadata = save_bundle(out, index, report.c_lower if report else None)
        success(f"Preprocessed {curve.n} vertices into {out}")
        emit_record(
            {
                "bundle": str(out),
                "n": curve.n,
                "space": oracle.space.value,
                "tadd_values": len(index.tadd),
                "tree_height": index.tree.height,
                "hausdorff": metadata.nn,
                "packedness": metadata.packedness,
                "packedness_estimate": metadata.packedness_estimate,
                "build_ms": round(timer.elapsed_ms, 3),
            }
        )
