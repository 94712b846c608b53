"""
SECMAC command line interface: secrecy bounds for the conferencing MAC wiretap channel.

Every subcommand reads one JSON document (--input), prints its report as
JSON on stdout and persists it under the --output prefix.
"""
import math
import sys
from functools import wraps
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import click
from pydantic import ValidationError

from core.config import settings
from core.dm import (
    FrontierBound,
    enumerate_frontier,
    inner_bound_point,
    outer_bound_point,
)
from core.errors import ErrorCode, SecmacError, classify
from core.gaussian import (
    c12_zero_bounds,
    compile_geometry,
    cooperation_coincidence,
    full_cooperation_capacity,
    lower_bound,
    upper_bound,
)
from core.queue import EvaluationPool
from core.utils.logger import get_logger
from interfaces.cli.models import (
    DmChannelDoc,
    GeometryDoc,
    InnerDistributionDoc,
    RunConfig,
    dump_config,
    parse_config,
)
from observability.report_store import ReportStore, dumps, write_sweep
from pipelines.self_check_pipeline import run_self_check
from pipelines.sweep_pipeline import power_split_report, rows_frame, run_sweep

logger = get_logger("SecmacCLI")


def _fail(code: ErrorCode, message: str):
    click.echo(f"❌ Error: {message}", err=True)
    sys.exit(code.value)


def _describe(exc: ValidationError) -> str:
    parts = []
    for err in exc.errors():
        where = ".".join(str(p) for p in err.get("loc", ())) or "document"
        parts.append(f"{where}: {err.get('msg', 'invalid')}")
    return "; ".join(parts)


def guarded(fn):
    """Map schema, table and budget failures to the documented exit codes."""
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            _fail(ErrorCode.SCHEMA, _describe(exc))
        except SecmacError as exc:
            report = classify(exc)
            logger.error("Command failed", extra={"error": report.details, "exit_code": report.code.value})
            _fail(report.code, report.message)
    return wrapper


def run_options(fn):
    options = [
        click.option("--input", "-i", "input_path", required=True,
                     type=click.Path(exists=True, dir_okay=False, path_type=Path),
                     help="JSON document (kind: channel | geometry | dm_channel)"),
        click.option("--output", "-o", "output", default=None,
                     help=f"Output path prefix (default {settings.OUTPUT_PREFIX})"),
        click.option("--grid-steps", type=int, default=None, help="Coarse lattice points per axis"),
        click.option("--refine-rounds", type=int, default=None, help="Local refinement rounds"),
        click.option("--budget", type=int, default=None, help="Lattice evaluation budget"),
        click.option("--svg", is_flag=True, help="Also write SVG figures"),
        click.option("--threads", type=int, default=None, help="Worker threads (0 = one per CPU)"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _run_config(mode: str, input_path: Path, output: Optional[str], grid_steps, refine_rounds,
                budget, svg, threads) -> RunConfig:
    return RunConfig(
        mode=mode, input=input_path, output=output or settings.OUTPUT_PREFIX,
        grid_steps=grid_steps, refine_rounds=refine_rounds, budget=budget,
        svg=svg, threads=threads,
    )


def _load(run: RunConfig, kinds: Sequence[str]):
    doc = parse_config(run.input.read_bytes())
    if doc.kind not in kinds:
        _fail(ErrorCode.SCHEMA,
              f"kind: '{doc.kind}' is not accepted by {run.mode}; expected one of {', '.join(kinds)}")
    return doc


def _emit(run: RunConfig, name: str, report: Dict[str, Any]) -> None:
    ReportStore(run.output).write_json(name, report)
    click.echo(dumps(report), nl=False)


def _gaussian_channel(doc):
    if isinstance(doc, GeometryDoc):
        return compile_geometry(doc.to_geometry())
    return doc.to_channel()


@guarded
def _self_check(seed: int, samples: int) -> None:
    run = RunConfig(mode="self-check", seed=seed, samples=samples)
    results = run_self_check(seed=run.seed, samples=run.samples)
    for result in results:
        mark = "PASS" if result.passed else "FAIL"
        click.echo(f"{mark}  {result.name:<28} {result.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        click.echo(f"❌ {len(failed)} suite(s) failed: {', '.join(failed)}", err=True)
        sys.exit(ErrorCode.VIOLATION.value)
    click.echo(f"✅ {len(results)} suites passed")


@click.group(invoke_without_command=True)
@click.option("--self-check", "self_check", is_flag=True,
              help="Run the invariant suites on sampled channels and exit")
@click.option("--seed", default=0, type=int, help="Seed for self-check sampling")
@click.option("--samples", default=20, type=int, help="Samples per self-check suite")
@click.pass_context
def cli(ctx, self_check, seed, samples):
    """SECMAC CLI - secrecy rate bounds for the MAC wiretap channel with conferencing"""
    if self_check:
        _self_check(seed, samples)
        return
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@cli.command()
@run_options
@guarded
def bounds(input_path, output, grid_steps, refine_rounds, budget, svg, threads):
    """Upper and lower secrecy bounds for one Gaussian channel or geometry."""
    run = _run_config("bounds", input_path, output, grid_steps, refine_rounds, budget, svg, threads)
    doc = _load(run, ("channel", "geometry"))
    ch = _gaussian_channel(doc)
    report: Dict[str, Any] = {
        "command": run.mode,
        "config": dump_config(doc),
        "gains": dict(zip(("h1d", "h2d", "h1e", "h2e"), ch.gains)),
        "upper": upper_bound(ch, run.grid_steps, run.refine_rounds).to_dict(),
        "lower": lower_bound(ch, doc.form, run.grid_steps, run.refine_rounds).to_dict(),
    }
    if math.isinf(ch.c12):
        report["cooperation"] = cooperation_coincidence(
            ch, steps=run.grid_steps, refine_rounds=run.refine_rounds
        ).to_dict()
    _emit(run, "bounds", report)


@cli.command()
@run_options
@guarded
def sweep(input_path, output, grid_steps, refine_rounds, budget, svg, threads):
    """Move Encoder 2 along the x axis and tabulate both bounds per c12."""
    run = _run_config("sweep", input_path, output, grid_steps, refine_rounds, budget, svg, threads)
    doc = _load(run, ("geometry",))
    cfg = doc.sweep_config()
    rows = run_sweep(cfg, run.grid_steps, run.refine_rounds, run.threads)
    frame = rows_frame(rows)
    paths = write_sweep(ReportStore(run.output), frame, name="sweep", svg=run.svg)
    report = {
        "command": run.mode,
        "config": dump_config(doc),
        "rows": len(rows),
        "files": [str(p) for p in paths],
        "power_split": power_split_report(rows),
    }
    _emit(run, "sweep", report)


def _dm_report(run: RunConfig, doc: DmChannelDoc, bounds_: Sequence[FrontierBound]) -> Dict[str, Any]:
    ch = doc.to_channel()
    report: Dict[str, Any] = {"command": run.mode, "config": dump_config(doc), "c12": doc.c12}
    if doc.distribution is not None and run.mode != "dm-frontier":
        dist_doc = doc.distribution
        if run.mode == "dm-inner":
            if not isinstance(dist_doc, InnerDistributionDoc):
                _fail(ErrorCode.SCHEMA, "distribution.kind: dm-inner needs an 'inner' distribution")
            point = inner_bound_point(dist_doc.to_distribution(), ch, doc.c12, doc.form)
        else:
            dist = dist_doc.to_distribution()
            if isinstance(dist_doc, InnerDistributionDoc):
                dist = dist.as_outer()
            point = outer_bound_point(dist, ch, doc.c12)
        report.update({"point": point.to_dict(), "lattice_size": 1, "evaluated": 1, "truncated": False})
        return report

    budget = run.budget if run.budget is not None else doc.budget
    with EvaluationPool(run.threads) as pool:
        for bound in bounds_:
            frontier = enumerate_frontier(
                ch, doc.c12, bound, cards=doc.cardinalities(), grid_step=doc.grid_step,
                budget=budget, truncate=doc.truncate, include_factorized=doc.include_factorized,
                form=doc.form, pool=pool,
            )
            report[bound.value] = frontier.to_dict()
    return report


def _dm_command(mode: str, bounds_: Sequence[FrontierBound], help_text: str):
    @run_options
    @guarded
    def command(input_path, output, grid_steps, refine_rounds, budget, svg, threads):
        run = _run_config(mode, input_path, output, grid_steps, refine_rounds, budget, svg, threads)
        doc = _load(run, ("dm_channel",))
        _emit(run, mode, _dm_report(run, doc, bounds_))

    command.__doc__ = help_text
    return cli.command(name=mode)(command)


dm_inner = _dm_command("dm-inner", (FrontierBound.INNER,),
                       "Inner-bound point of a given distribution, or the inner frontier.")
dm_outer = _dm_command("dm-outer", (FrontierBound.OUTER,),
                       "Outer-bound point of a given distribution, or the outer frontier.")
dm_frontier = _dm_command("dm-frontier", (FrontierBound.INNER, FrontierBound.OUTER),
                          "Inner and outer Pareto frontiers on the distribution lattice.")


@cli.command()
@run_options
@guarded
def special(input_path, output, grid_steps, refine_rounds, budget, svg, threads):
    """No conference link next to an unlimited one."""
    run = _run_config("special", input_path, output, grid_steps, refine_rounds, budget, svg, threads)
    doc = _load(run, ("channel", "geometry"))
    ch = _gaussian_channel(doc)
    zero = c12_zero_bounds(ch, run.grid_steps, run.refine_rounds)
    full = full_cooperation_capacity(ch, run.grid_steps, run.refine_rounds)
    report = {
        "command": run.mode,
        "config": dump_config(doc),
        "c12_zero": {
            "upper": zero.upper.to_dict(),
            "lower": zero.lower.to_dict(),
            "coincide": zero.coincide,
        },
        "full_cooperation": full.to_dict(),
    }
    _emit(run, "special", report)


def main():
    cli(prog_name="secmac")


if __name__ == "__main__":
    main()
