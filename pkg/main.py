"""
main.py - Command-line entry point for the tournament tiling toolkit
"""

from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Tuple
import json
import logging
import os
import sys

import click
import numpy as np
from pydantic import BaseModel

from config import settings
from models import Construction, GraphRecord, InnerPolicy, RunConfig
from tournaments.canonical import canonical_form, pairwise_distinct
from tournaments.constructions import (
    bound_sheet, ex34_construction, ex35_construction, ex39_construction, gnk_construction,
    linking_instance, turan_extremal,
)
from tournaments.errors import GraphFormatError, TilingError
from tournaments.fractional import build_hypergraph, min_nu_star_sweep, nu_star, tau_star
from tournaments.generation import find_ramsey, ramsey_table, search_classes
from tournaments.graph import degree_report, from_record, read_tournament_file, to_record
from tournaments.tiling import APPENDIX_SIZE, find_linking_set, has_perfect_tiling, max_tiling, verify_appendix
from workflow.phases import PhaseContext
from workflow.reproduction_workflow import ReproductionWorkflow, initial_state

# Setup logging
logging.basicConfig(
    level=getattr(logging, settings.log_level.upper()),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

Handler = Callable[[RunConfig], Tuple[Any, bool]]


def _jsonable(payload: Any) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, dict):
        return {str(key): _jsonable(value) for key, value in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [_jsonable(item) for item in payload]
    if isinstance(payload, Fraction):
        return str(payload)
    return payload


def render(payload: Any) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2) + "\n"


def emit(payload: Any, output: str = None) -> None:
    text = render(payload)
    if output:
        Path(output).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output}")
    else:
        sys.stdout.write(text)


def _require(config: RunConfig, *names: str) -> None:
    missing = [name for name in names if getattr(config, name) is None]
    if missing:
        raise click.UsageError(f"{config.subcommand} needs --{' --'.join(missing)}")


def _tournaments(config: RunConfig):
    _require(config, "input")
    return read_tournament_file(config.input, config.n)


# -- Handlers ----------------------------------------------------------------------

def handle_parse(config: RunConfig):
    rows = []
    for line, tournament in _tournaments(config):
        rows.append({"line": line, "graph": to_record(tournament), "degrees": degree_report(tournament)})
    return rows, True


def handle_tile(config: RunConfig):
    _require(config, "k")
    rows = []
    for line, tournament in _tournaments(config):
        result = has_perfect_tiling(tournament, config.k) if tournament.n % config.k == 0 else None
        size, witness = max_tiling(tournament, config.k)
        rows.append({
            "line": line,
            "n": tournament.n,
            "perfect": None if result is None else result.tileable,
            "nu": size,
            "witness": result.witness if result is not None and result.tileable else witness,
        })
    if config.options.get("witness"):
        emit([row["witness"] for row in rows], config.options["witness"])
    return rows, True


def handle_frac(config: RunConfig):
    _require(config, "k")
    rows = []
    for line, tournament in _tournaments(config):
        hypergraph = build_hypergraph(tournament, config.k)
        nu_value, certificate = nu_star(hypergraph)
        tau_value, _ = tau_star(hypergraph)
        rows.append({
            "line": line,
            "n": tournament.n,
            "nu_star": nu_value,
            "tau_star": tau_value,
            "primal": certificate.primal,
            "dual": certificate.dual,
        })
    return rows, all(row["nu_star"] == row["tau_star"] for row in rows)


def handle_sweep(config: RunConfig):
    _require(config, "k", "n")
    seed = config.seed if config.seed is not None else settings.seed
    report = min_nu_star_sweep(config.n, config.k, config.samples, seed if config.samples is not None else None, config.workers)
    return report, True


def handle_ramsey(config: RunConfig):
    if config.k is None:
        table = ramsey_table(config.options.get("verify") != "false", config.workers)
        return table, all(entry.value is not None for entry in table.entries.values())
    entry = find_ramsey(config.k, config.n or settings.generation_cap, config.workers)
    return entry, entry.value is not None


def handle_enumerate(config: RunConfig):
    _require(config, "n")
    predicate = config.options.get("predicate", "all")
    return search_classes(config.n, predicate, config.k or 0, config.workers), True


def handle_construct(config: RunConfig):
    _require(config, "k")
    which = Construction(config.options.get("which", Construction.EX34.value))
    u = None
    if which is Construction.EX35:
        graph, u = ex35_construction(config.k)
    else:
        _require(config, "n")
        if which is Construction.EX34:
            gamma = Fraction(config.options.get("gamma", f"1/{config.n}"))
            inner = InnerPolicy(config.options.get("inner", InnerPolicy.TRANSITIVE.value))
            seed = config.seed if config.seed is not None else settings.seed
            graph = ex34_construction(config.k, config.n, gamma, inner, seed)
        elif which is Construction.EX39:
            graph = ex39_construction(config.k, config.n)
        elif which is Construction.TURAN:
            graph = turan_extremal(config.k, config.n)
        else:
            graph = gnk_construction(config.n, config.k)
    payload = {"which": which.value, "graph": to_record(graph), "degrees": degree_report(graph)}
    if u is not None:
        payload["u"] = u
    return payload, True


def handle_bounds(config: RunConfig):
    _require(config, "k")
    reg = config.options.get("reg")
    sheet = bound_sheet(config.k, config.options.get("upper_bound_mode") == "true", int(reg) if reg else None)
    return sheet, True


def handle_linking(config: RunConfig):
    if config.input:
        record = GraphRecord.model_validate_json(Path(config.input).read_text(encoding="utf-8"))
        graph = from_record(record)
        x, y = int(config.options["x"]), int(config.options["y"])
        subset = graph.vertices & ~(1 << x) & ~(1 << y)
    else:
        seed = config.seed if config.seed is not None else settings.seed
        graph, x, y, subset = linking_instance(np.random.default_rng(seed))
    linking = find_linking_set(graph, x, y, subset)
    return {"graph": to_record(graph), "linking_set": linking}, True


def handle_verify_appendix(config: RunConfig):
    report = verify_appendix(config.input or settings.appendix_path, config.workers)
    ok = (
        report.count == APPENDIX_SIZE
        and report.all_untileable
        and report.pairwise_nonisomorphic
        and report.all_fractional_perfect
        and not report.errors
    )
    return report, ok


def handle_iso(config: RunConfig):
    parsed = _tournaments(config)
    tournaments = [tournament for _, tournament in parsed]
    distinct = pairwise_distinct(tournaments, config.workers)
    colliding = None
    if distinct.pair is not None:
        colliding = [parsed[distinct.pair[0]][0], parsed[distinct.pair[1]][0]]
    forms = [{"line": line, "canonical": canonical_form(t)} for line, t in parsed]
    return {"forms": forms, "pairwise_distinct": distinct.distinct, "colliding_lines": colliding}, True


def handle_reproduce(config: RunConfig):
    _require(config, "seed")
    logger.info("=" * 60)
    logger.info(f"Reproduction run: seed={config.seed}, workers={config.workers}, quick={config.quick}")
    logger.info("=" * 60)
    context = PhaseContext(
        seed=config.seed,
        workers=config.workers,
        quick=config.quick,
        appendix_path=config.input or settings.appendix_path,
    )
    workflow = ReproductionWorkflow(context, config.only or None, config.phase_budget_seconds)
    state = workflow.run(initial_state(config.model_dump(mode="json")))
    report = workflow.report(state)
    os.makedirs(settings.state_dir, exist_ok=True)
    emit(report, os.path.join(settings.state_dir, "reproduction.json"))
    return report, report.passed


HANDLERS: Dict[str, Handler] = {
    "parse": handle_parse,
    "tile": handle_tile,
    "frac": handle_frac,
    "sweep": handle_sweep,
    "ramsey": handle_ramsey,
    "enumerate": handle_enumerate,
    "construct": handle_construct,
    "bounds": handle_bounds,
    "linking": handle_linking,
    "verify-appendix": handle_verify_appendix,
    "iso": handle_iso,
    "reproduce": handle_reproduce,
}


def run(config: RunConfig) -> int:
    """Dispatch one subcommand; 0 when its checks pass, 1 when they fail or crash, 2 on input errors."""
    try:
        payload, ok = HANDLERS[config.subcommand](config)
    except GraphFormatError as e:
        logger.error(f"{config.input}: {e}")
        return 2
    except TilingError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 2
    except click.UsageError:
        raise
    except Exception as e:
        logger.exception(f"{config.subcommand} failed: {e}")
        return 1
    emit(payload, config.output)
    return 0 if ok else 1


# -- Command line ----------------------------------------------------------------------

@click.group()
@click.option("--workers", type=int, default=settings.workers, envvar="WORKERS", show_default=True)
@click.option("--out", "output", type=click.Path(dir_okay=False), default=None, help="Write JSON here instead of stdout")
@click.pass_context
def cli(ctx, workers, output):
    ctx.obj = {"workers": workers, "output": output}


def _invoke(ctx, subcommand: str, **fields) -> None:
    options = {key: str(value) for key, value in fields.pop("options", {}).items() if value is not None}
    config = RunConfig(subcommand=subcommand, options=options, **ctx.obj, **fields)
    ctx.exit(run(config))


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--n", type=int, default=None)
@click.pass_context
def parse(ctx, input_path, n):
    """Parse a tournament file and report degrees."""
    _invoke(ctx, "parse", input=input_path, n=n)


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--witness", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def tile(ctx, k, input_path, witness):
    """Perfect and maximum T_k-tilings for every tournament in a file."""
    _invoke(ctx, "tile", k=k, input=input_path, options={"witness": witness})


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def frac(ctx, k, input_path):
    """Exact fractional tiling and cover numbers with certificates."""
    _invoke(ctx, "frac", k=k, input=input_path)


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--n", type=int, required=True)
@click.option("--samples", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=None)
@click.pass_context
def sweep(ctx, k, n, samples, seed):
    """Minimum nu*_k over all (or sampled) n-vertex tournaments."""
    _invoke(ctx, "sweep", k=k, n=n, samples=samples, seed=seed)


@cli.command()
@click.option("--k", type=int, default=None, help="Omit for the whole table")
@click.option("--n-max", "n_max", type=int, default=None)
@click.option("--verify/--no-verify", default=True, show_default=True, help="Re-derive table entries in the search range")
@click.pass_context
def ramsey(ctx, k, n_max, verify):
    """Search for R(k), or list the R(k) table."""
    _invoke(ctx, "ramsey", k=k, n=n_max, options={"verify": str(verify).lower()})


@cli.command(name="enumerate")
@click.option("--n", type=int, required=True)
@click.option("--predicate", type=click.Choice(["all", "tk-free", "regular"]), default="all")
@click.option("--k", type=int, default=None)
@click.pass_context
def enumerate_classes(ctx, n, predicate, k):
    """List isomorphism classes satisfying a predicate."""
    _invoke(ctx, "enumerate", n=n, k=k, options={"predicate": predicate})


@cli.command()
@click.option("--which", type=click.Choice([c.value for c in Construction]), required=True)
@click.option("--k", type=int, required=True)
@click.option("--n", type=int, default=None)
@click.option("--gamma", default=None, help="p/q")
@click.option("--inner", type=click.Choice([p.value for p in InnerPolicy]), default=None)
@click.option("--seed", type=int, default=None)
@click.pass_context
def construct(ctx, which, k, n, gamma, inner, seed):
    """Build one of the extremal constructions."""
    _invoke(ctx, "construct", k=k, n=n, seed=seed, options={"which": which, "gamma": gamma, "inner": inner})


@cli.command()
@click.option("--k", type=int, required=True)
@click.option("--upper-bound-mode", is_flag=True, default=False)
@click.option("--reg", type=int, default=None)
@click.pass_context
def bounds(ctx, k, upper_bound_mode, reg):
    """Closed-form bounds for k."""
    _invoke(ctx, "bounds", k=k, options={"upper_bound_mode": str(upper_bound_mode).lower(), "reg": reg})


@cli.command()
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--x", type=int, default=None)
@click.option("--y", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.pass_context
def linking(ctx, input_path, x, y, seed):
    """Find a linking set for a graph record or a seeded random instance."""
    if input_path and (x is None or y is None):
        raise click.UsageError("--input needs --x and --y")
    _invoke(ctx, "linking", input=input_path, seed=seed, options={"x": x, "y": y})


@cli.command(name="verify-appendix")
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.pass_context
def verify_appendix_command(ctx, input_path):
    """Verify the list of 12-vertex tournaments without perfect T_4-tilings."""
    _invoke(ctx, "verify-appendix", input=input_path)


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def iso(ctx, input_path):
    """Canonical forms and pairwise distinctness of a tournament file."""
    _invoke(ctx, "iso", input=input_path)


@cli.command()
@click.option("--seed", type=int, required=True)
@click.option("--all", "run_all", is_flag=True, default=False, help="Run every phase (the default)")
@click.option("--only", multiple=True, help="Run only these phases (repeatable)")
@click.option("--quick", is_flag=True, default=False, help="Divide sample counts by 10")
@click.option("--budget", "phase_budget_seconds", type=float, default=settings.phase_budget_seconds, show_default=True)
@click.option("--appendix", "input_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.pass_context
def reproduce(ctx, seed, run_all, only, quick, phase_budget_seconds, input_path):
    """Run the acceptance suite."""
    _invoke(ctx, "reproduce", seed=seed, only=[] if run_all else list(only), quick=quick,
            phase_budget_seconds=phase_budget_seconds, input=input_path)


if __name__ == "__main__":
    cli()
