"""
CLI commands for querying a bundle
"""
import time
from pathlib import Path
from typing import Optional, Tuple

import typer

from cli.utils import FLAGS, cli_errors, emit_record
from engine import frechet_engine, hausdorff_engine
from engine.bundle import load_bundle
from engine.curve_index import CurveIndex
from engine.formats import load_curve
from engine.metric_oracles import DistanceOracle, perturbed_oracle
from utils.errors import ContractViolation
from utils.types import QueryAudit, QueryParams

app = typer.Typer(no_args_is_help=True, help="Query a preprocessed curve")

# an omitted --sub arrives as (None, None)
SubRange = Tuple[int, int]


def _open(bundle: Path, query_file: Path):
    index, _ = load_bundle(bundle)
    return index, load_curve(query_file, index.oracle)


def _range(sub: SubRange) -> Tuple[Optional[int], Optional[int]]:
    if (sub[0] is None) != (sub[1] is None):
        raise ContractViolation("--sub needs both i and j")
    return sub


def _query_oracle(index: CurveIndex, alpha: float, seed: int) -> Optional[DistanceOracle]:
    if alpha == 0.0:
        return None
    return perturbed_oracle(index.oracle, alpha, seed)


def _record(mode: str, epsilon: float, rho: Optional[float], i: int, j: int, audit: QueryAudit, started: int) -> dict:
    return {
        "mode": mode,
        "epsilon": epsilon,
        "rho": rho,
        "i": i,
        "j": j,
        "cells_pushed": audit.cells_pushed,
        "oracle_calls": audit.oracle_calls,
        "wall_ms": round((time.perf_counter_ns() - started) / 1e6, 3),
    }


def _total(*audits: QueryAudit) -> QueryAudit:
    total = QueryAudit()
    for audit in audits:
        total.merge(audit)
    return total


@app.command(name="decide")
def decide(
    bundle: Path = typer.Argument(..., help="Bundle of P"),
    query_file: Path = typer.Argument(..., help="Curve file of Q"),
    epsilon: float = typer.Option(..., *FLAGS["epsilon"], help="Approximation parameter in (0, 1)"),
    rho: float = typer.Option(..., *FLAGS["rho"], help="Distance threshold"),
    sub: SubRange = typer.Option((None, None), "--sub", help="Query the subcurve P[i, j]"),
    alpha: float = typer.Option(0.0, "--alpha", help="Slack of a perturbed query oracle, at most ε/6"),
    seed: int = typer.Option(0, *FLAGS["seed"], help="Seed of the perturbed oracle"),
):
    """Decide whether D_F(P[i, j], Q) ≤ (1+ε)ρ or D_F > ρ"""
    with cli_errors():
        index, q = _open(bundle, query_file)
        started = time.perf_counter_ns()
        params = QueryParams(epsilon, rho, *_range(sub))
        i, j = params.resolve_range(index.n)
        outcome = frechet_engine.decide(index, q, params, _query_oracle(index, alpha, seed))
        emit_record({**_record("decide", epsilon, rho, i, j, outcome.audit, started), "verdict": outcome.verdict.value})


@app.command(name="value")
def value(
    bundle: Path = typer.Argument(..., help="Bundle of P"),
    query_file: Path = typer.Argument(..., help="Curve file of Q"),
    epsilon: float = typer.Option(..., *FLAGS["epsilon"], help="Approximation parameter in (0, 1)"),
    sub: SubRange = typer.Option((None, None), "--sub", help="Query the subcurve P[i, j]"),
    alpha: float = typer.Option(0.0, "--alpha", help="Slack of a perturbed query oracle, at most ε/6"),
    seed: int = typer.Option(0, *FLAGS["seed"], help="Seed of the perturbed oracle"),
):
    """(1±ε)-approximate D_F(P[i, j], Q)"""
    with cli_errors():
        index, q = _open(bundle, query_file)
        started = time.perf_counter_ns()
        params = QueryParams(epsilon, None, *_range(sub))
        i, j = params.resolve_range(index.n)
        result = frechet_engine.value(index, q, params, _query_oracle(index, alpha, seed))
        audit = _total(result.audit, result.search_audit)
        emit_record(
            {
                **_record("value", epsilon, None, i, j, audit, started),
                "value": result.nu,
                "case": result.case,
                "bracket": result.bracket,
            }
        )


@app.command(name="hausdorff-decide")
def hausdorff_decide(
    bundle: Path = typer.Argument(..., help="Bundle of P"),
    query_file: Path = typer.Argument(..., help="Curve file of Q"),
    epsilon: float = typer.Option(..., *FLAGS["epsilon"], help="Approximation parameter in (0, 1)"),
    rho: float = typer.Option(..., *FLAGS["rho"], help="Distance threshold ρ*"),
    sub: SubRange = typer.Option((None, None), "--sub", help="Query the subcurve P[i, j]"),
):
    """Decide whether D_H(P[i, j], Q) ≤ (1+ε)ρ or D_H > ρ"""
    with cli_errors():
        index, q = _open(bundle, query_file)
        started = time.perf_counter_ns()
        i, j = _range(sub)
        outcome = hausdorff_engine.hausdorff_decide(index, q, epsilon, rho, i=i, j=j)
        i, j = i or 1, j or index.n
        emit_record(
            {**_record("hausdorff-decide", epsilon, rho, i, j, outcome.audit, started), "verdict": outcome.verdict.value}
        )


@app.command(name="hausdorff-value")
def hausdorff_value(
    bundle: Path = typer.Argument(..., help="Bundle of P"),
    query_file: Path = typer.Argument(..., help="Curve file of Q"),
    epsilon: float = typer.Option(..., *FLAGS["epsilon"], help="Approximation parameter in (0, 1)"),
    sub: SubRange = typer.Option((None, None), "--sub", help="Query the subcurve P[i, j]"),
):
    """(1±ε)-approximate D_H(P[i, j], Q)"""
    with cli_errors():
        index, q = _open(bundle, query_file)
        started = time.perf_counter_ns()
        i, j = _range(sub)
        result = hausdorff_engine.hausdorff_value(index, q, epsilon, i, j)
        i, j = i or 1, j or index.n
        audit = _total(result.audit, result.search_audit)
        emit_record(
            {
                **_record("hausdorff-value", epsilon, None, i, j, audit, started),
                "value": result.nu,
                "case": result.case,
                "bracket": result.bracket,
            }
        )
