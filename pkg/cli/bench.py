"""
CLI command for the query micro-benchmark
"""
import csv
import io
import statistics
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional

import typer

from cli.utils import FLAGS, cli_errors, info, success
from engine import frechet_engine, hausdorff_engine
from engine.bundle import load_bundle
from engine.curve_index import CurveIndex
from engine.formats import load_curve
from utils.errors import ContractViolation
from utils.logs import get_logger
from utils.read_config import read_config
from utils.types import QueryAudit, QueryParams

CSV_COLUMNS = ["n", "m", "epsilon", "mode", "cells_pushed", "oracle_calls", "wall_ns_median"]


def _runner(mode: str, index: CurveIndex, q, epsilon: float, rho: Optional[float]) -> Callable[[], QueryAudit]:
    if mode in ("decide", "hausdorff-decide") and rho is None:
        raise ContractViolation(f"--rho is required for {mode}")

    def total(result) -> QueryAudit:
        audit = QueryAudit()
        audit.merge(result.audit)
        audit.merge(result.search_audit)
        return audit

    runners: Dict[str, Callable[[], QueryAudit]] = {
        "decide": lambda: frechet_engine.decide(index, q, QueryParams(epsilon, rho)).audit,
        "value": lambda: total(frechet_engine.value(index, q, QueryParams(epsilon))),
        "hausdorff-decide": lambda: hausdorff_engine.hausdorff_decide(index, q, epsilon, rho).audit,
        "hausdorff-value": lambda: total(hausdorff_engine.hausdorff_value(index, q, epsilon)),
    }
    if mode not in runners:
        raise ContractViolation(f"unknown mode {mode!r}; expected one of {', '.join(runners)}")
    return runners[mode]


def bench_rows(
    index: CurveIndex, q, epsilons: List[float], modes: List[str], rho: Optional[float], repetitions: int
) -> List[dict]:
    """
    Time every (epsilon, mode) pair.

    Counters come from the last repetition; queries are deterministic so all
    repetitions agree on them.
    """
    if repetitions < 1:
        raise ContractViolation(f"repetitions must be at least 1, got {repetitions}")
    bench_logger = get_logger("bench", {"n": index.n, "m": q.n})
    rows = []
    for epsilon in epsilons:
        for mode in modes:
            run = _runner(mode, index, q, epsilon, rho)
            timings = []
            for _ in range(repetitions):
                started = time.perf_counter_ns()
                audit = run()
                timings.append(time.perf_counter_ns() - started)
            rows.append(
                {
                    "n": index.n,
                    "m": q.n,
                    "epsilon": epsilon,
                    "mode": mode,
                    "cells_pushed": audit.cells_pushed,
                    "oracle_calls": audit.oracle_calls,
                    "wall_ns_median": int(statistics.median(timings)),
                }
            )
            bench_logger.debug(f"⏱ {mode} at ε={epsilon}: {rows[-1]['wall_ns_median']}ns median")
    return rows


def render_csv(rows: List[dict]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def bench(
    bundle: Path = typer.Argument(..., help="Bundle of P"),
    query_file: Path = typer.Argument(..., help="Curve file of Q"),
    epsilon: List[float] = typer.Option([], *FLAGS["epsilon"], help="Epsilon values to sweep (repeatable)"),
    mode: List[str] = typer.Option(["decide", "value"], "-m", "--mode", help="Query modes (repeatable)"),
    rho: Optional[float] = typer.Option(None, *FLAGS["rho"], help="Threshold for the decision modes"),
    repetitions: Optional[int] = typer.Option(None, "--repetitions", help="Runs per configuration"),
    out: Optional[Path] = typer.Option(None, *FLAGS["out"], help="CSV file; stdout when omitted"),
):
    """Benchmark queries and write a CSV of counters and median wall times"""
    with cli_errors():
        index, _ = load_bundle(bundle)
        q = load_curve(query_file, index.oracle)
        repetitions = repetitions or read_config()["bench"]["repetitions"]
        if not epsilon:
            info("Empty epsilon sweep, writing the header only")
        rows = bench_rows(index, q, epsilon, mode, rho, repetitions)
        text = render_csv(rows)
        if out is None:
            typer.echo(text, nl=False)
        else:
            out.write_text(text, encoding="utf-8")
            success(f"Wrote {len(rows)} rows to {out}")
