"""
MomentLab CLI - Command-line entry point for experiments.

Run `momentlab verify` for the verification suite, or `momentlab flow`,
`momentlab weinstein` and `momentlab moment-check` for single experiments.
Exit codes: 0 pass, 1 numerical failure, 2 usage error.
"""

import logging
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from momentlab import __version__
from momentlab.errors import ConfigError
from momentlab.report.svg import emit_plot
from momentlab.validation.config import Config
from momentlab.workflows.engine import CheckStatus, RunReport
from momentlab.workflows.experiments import run_experiment

console = Console()
err_console = Console(stderr=True)

STATUS_STYLES = {
    CheckStatus.PASSED: "green",
    CheckStatus.FAILED: "red",
    CheckStatus.ERROR: "bold red",
}


def configure_logging(verbose: bool) -> None:
    """Route the momentlab logger through a single RichHandler."""
    logger = logging.getLogger("momentlab")
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        logger.addHandler(RichHandler(console=err_console, show_path=False))
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


def _print_report(report: RunReport, output: str) -> None:
    table = Table(title=f"momentlab {report.kind}", show_lines=False)
    table.add_column("check", style="cyan")
    table.add_column("status")
    table.add_column("residual", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("ms", justify="right", style="dim")
    for record in report.records:
        style = STATUS_STYLES[record.status]
        residual = "—" if record.residual is None else f"{record.residual:.3e}"
        table.add_row(
            record.name,
            f"[{style}]{record.status.value}[/{style}]",
            residual,
            f"{record.tolerance:.1e}",
            f"{record.wall_ms:.0f}",
        )
    console.print(table)
    for record in report.failures():
        console.print(f"[red]{record.name}:[/red] {record.detail}")
    for warning in report.warnings:
        console.print(f"[yellow]warning:[/yellow] {warning}")
    verdict = "[bold green]PASS[/bold green]" if report.passed else "[bold red]FAIL[/bold red]"
    console.print(f"{verdict}  artifacts in {output}")


def _run(ctx: click.Context, kind: str, level: Optional[str] = None, resume: bool = False) -> None:
    """Load config, apply overrides, run and exit with the report verdict."""
    options: Dict[str, Any] = ctx.obj
    try:
        config = Config.load(options["config"]).apply_overrides(
            kind=kind,
            seed=options["seed"],
            output=options["out"],
            tol=options["tol"],
            level=level,
        )
        experiment = config.experiment
        with console.status(f"[bold blue]Running {kind}...[/bold blue]"):
            report = run_experiment(experiment, resume=resume)
    except ConfigError as e:
        raise click.UsageError(str(e), ctx=ctx)

    _print_report(report, experiment.output)
    if not report.passed:
        sys.exit(1)


@click.group()
@click.version_option(__version__, prog_name="momentlab")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    help="Experiment config (JSON or YAML)",
)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), help="Seed for every random draw")
@click.option("--out", type=click.Path(file_okay=False), help="Output directory")
@click.option("--tol", type=click.FloatRange(min=0.0, min_open=True), help="Residual tolerance")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: Optional[str],
    seed: Optional[int],
    out: Optional[str],
    tol: Optional[float],
    verbose: bool,
) -> None:
    """
    MomentLab - numerical checks of moment maps on spaces of connections.

    \b
    Examples:
        momentlab verify --level quick
        momentlab --config flow.json flow
        momentlab --seed 3 weinstein
        momentlab plot out/trace.csv t residual_linf --log-y
    """
    configure_logging(verbose)
    ctx.obj = {"config": config_path, "seed": seed, "out": out, "tol": tol}


@cli.command()
@click.option("--level", type=click.Choice(["quick", "full"]), default=None, help="Suite level")
@click.pass_context
def verify(ctx: click.Context, level: Optional[str]) -> None:
    """Run the verification suite."""
    _run(ctx, "verify", level=level)


@cli.command()
@click.option(
    "--resume", is_flag=True, help="Continue from the last checkpoint in the output directory"
)
@click.pass_context
def flow(ctx: click.Context, resume: bool) -> None:
    """Flow to a prescribed volume form."""
    _run(ctx, "flow", resume=resume)


@cli.command()
@click.pass_context
def weinstein(ctx: click.Context) -> None:
    """Holonomy of a rotation loop lifted to the Hopf bundle."""
    _run(ctx, "weinstein")


@cli.command("moment-check")
@click.pass_context
def moment_check(ctx: click.Context) -> None:
    """Random probes of the moment-map identity."""
    _run(ctx, "moment-check")


@cli.command()
@click.argument("trace", type=click.Path(exists=True, dir_okay=False))
@click.argument("columns", nargs=-1, required=True)
@click.option(
    "--output", "-o", type=click.Path(dir_okay=False), help="SVG path (default: TRACE with .svg)"
)
@click.option("--log-y", is_flag=True, help="Logarithmic y axis")
@click.pass_context
def plot(
    ctx: click.Context,
    trace: str,
    columns: Tuple[str, ...],
    output: Optional[str],
    log_y: bool,
) -> None:
    """Plot COLUMNS[1:] against COLUMNS[0] from a trace CSV."""
    target = Path(output) if output else Path(trace).with_suffix(".svg")
    try:
        path = emit_plot(trace, list(columns), target, log_y=log_y)
    except ConfigError as e:
        raise click.UsageError(str(e), ctx=ctx)
    console.print(f"[green]wrote {path}[/green]")


def main() -> None:
    """Entry point."""
    cli()


if __name__ == "__main__":
    main()
