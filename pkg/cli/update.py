"""
CLI commands for updating a bundle in place
"""
from pathlib import Path
from typing import Optional

import typer

from cli.utils import cli_errors, emit_record, parse_point, success, warning
from engine.bundle import load_bundle, save_bundle
from utils.errors import ContractViolation
from utils.types import CurveEnd

app = typer.Typer(no_args_is_help=True, help="Extend or truncate a preprocessed curve")

PACKEDNESS_HELP = "Packedness constant of the updated curve; replaces the recorded one"
DROP_HELP = "Forget the recorded packedness constant"


def _extend(
    bundle: Path, end: CurveEnd, point: str, edge_length: Optional[float], packedness: Optional[float], drop: bool
):
    with cli_errors():
        index, metadata = load_bundle(bundle)
        index.extend(end, parse_point(point, index.oracle.space), edge_length)
        _save(bundle, index, metadata, f"extend-{end.value}", packedness, drop)


def _truncate(bundle: Path, end: CurveEnd, packedness: Optional[float], drop: bool):
    with cli_errors():
        index, metadata = load_bundle(bundle)
        index.truncate(end)
        _save(bundle, index, metadata, f"truncate-{end.value}", packedness, drop)


def _confirm_packedness(index, packedness: Optional[float], drop: bool) -> None:
    """Apply the packedness given with the update; warn when an unconfirmed one is carried over."""
    if packedness is not None and drop:
        raise ContractViolation("--packedness and --drop-packedness exclude each other")
    if packedness is not None:
        if not packedness > 0.0:
            raise ContractViolation(f"packedness must be positive, got {packedness}")
        index.packedness = packedness
    elif drop:
        index.packedness = None
    elif index.packedness is not None:
        warning(
            f"Keeping packedness c = {index.packedness:g} recorded before the update; "
            "the Hausdorff early exit trusts it. Pass -c to confirm it or --drop-packedness"
        )


def _save(bundle: Path, index, metadata, op: str, packedness: Optional[float], drop: bool):
    _confirm_packedness(index, packedness, drop)
    if metadata.packedness_estimate is not None:
        warning("Dropping the packedness estimate, it no longer describes the updated curve")
    if metadata.nn:
        index.nn
    save_bundle(bundle, index)
    success(f"{op}: {bundle} now holds {index.n} vertices")
    emit_record({"op": op, "n": index.n, "bundle": str(bundle), "packedness": index.packedness})


@app.command(name="extend-head")
def extend_head(
    bundle: Path = typer.Argument(..., help="Bundle to update"),
    point: str = typer.Option(..., "-p", "--point", help="Comma-separated coordinates or a vertex id"),
    edge_length: Optional[float] = typer.Option(
        None, "--edge-length", help="Distance to the current first vertex; measured when omitted"
    ),
    packedness: Optional[float] = typer.Option(None, "-c", "--packedness", help=PACKEDNESS_HELP),
    drop: bool = typer.Option(False, "--drop-packedness", help=DROP_HELP),
):
    """Prepend a vertex to P"""
    _extend(bundle, CurveEnd.HEAD, point, edge_length, packedness, drop)


@app.command(name="extend-tail")
def extend_tail(
    bundle: Path = typer.Argument(..., help="Bundle to update"),
    point: str = typer.Option(..., "-p", "--point", help="Comma-separated coordinates or a vertex id"),
    edge_length: Optional[float] = typer.Option(
        None, "--edge-length", help="Distance to the current last vertex; measured when omitted"
    ),
    packedness: Optional[float] = typer.Option(None, "-c", "--packedness", help=PACKEDNESS_HELP),
    drop: bool = typer.Option(False, "--drop-packedness", help=DROP_HELP),
):
    """Append a vertex to P"""
    _extend(bundle, CurveEnd.TAIL, point, edge_length, packedness, drop)


@app.command(name="truncate-head")
def truncate_head(
    bundle: Path = typer.Argument(..., help="Bundle to update"),
    packedness: Optional[float] = typer.Option(None, "-c", "--packedness", help=PACKEDNESS_HELP),
    drop: bool = typer.Option(False, "--drop-packedness", help=DROP_HELP),
):
    """Remove the first vertex of P"""
    _truncate(bundle, CurveEnd.HEAD, packedness, drop)


@app.command(name="truncate-tail")
def truncate_tail(
    bundle: Path = typer.Argument(..., help="Bundle to update"),
    packedness: Optional[float] = typer.Option(None, "-c", "--packedness", help=PACKEDNESS_HELP),
    drop: bool = typer.Option(False, "--drop-packedness", help=DROP_HELP),
):
    """Remove the last vertex of P"""
    _truncate(bundle, CurveEnd.TAIL, packedness, drop)
