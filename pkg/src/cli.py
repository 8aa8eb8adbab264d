#!/usr/bin/env python3
"""
Command Line Interface for the Hammersley process laboratory
One subcommand per experiment; each writes CSV data, report.json and
manifest.json and exits 0 when every check passed.
"""

import logging
import os
from typing import Any, Dict, Optional

import click

from .core.errors import ConfigParseError, HammersleyError, InvalidParameterError, OutputError
from .experiments import AVAILABLE_EXPERIMENTS, get_experiment_class, list_available_experiments
from .experiments.config import load_config
from .experiments.logging_setup import configure_logging
from .experiments.outputs import emit_outputs

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_OUTPUT = 3

EXPERIMENT_OPTIONS = [
    click.option("--config", "-c", "config_path", type=click.Path(exists=True, dir_okay=False),
                 help="key=value experiment file"),
    click.option("--lambda", "lambda_", type=float, help="Source intensity (sinks use 1/lambda)"),
    click.option("--gamma", type=float, help="Base intensity of a coupled pair"),
    click.option("--delta", type=float, help="Modified intensity of a coupled pair"),
    click.option("--t1", type=float, help="Box width (position scale t for local-poisson and vt)"),
    click.option("--t2", type=float, help="Box height (time horizon for scp and flux)"),
    click.option("--a", type=float, help="Ray slope for local-poisson"),
    click.option("--reps", "replications", type=int, help="Number of replications"),
    click.option("--seed", type=int, help="Base seed"),
    click.option("--out", "output_dir", type=click.Path(file_okay=False), help="Output directory"),
    click.option("--alpha", type=float, help="Significance level"),
    click.option("--jobs", "n_jobs", type=int, help="joblib workers (-1: all cores)"),
    click.option("--trials", type=int, help="Size of pathwise sweeps"),
    click.option("--samples", type=int, help="Monte-Carlo samples for duality"),
    click.option("--window", type=float, help="Half-width of the local-poisson window"),
    click.option("--margin", "box_margin", type=float, help="Box oversizing factor for second-class runs"),
    click.option("--t-values", "t_values", help="Comma-separated time scales, e.g. 250,500,1000"),
    click.option("--x-values", "x_values", help="Comma-separated flux abscissae"),
    click.option("--lambdas", help="Comma-separated intensity sweep"),
    click.option("--grid", help="V_t grid as x:y;x:y"),
]


def experiment_options(func):
    for option in reversed(EXPERIMENT_OPTIONS):
        func = option(func)
    return func


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.option('--env-file', default='.env', help='Environment file (HAMMERSLEY_* variables)')
def cli(verbose, env_file):
    """Hammersley process laboratory - simulations and checks of the stationary process"""
    if os.path.exists(env_file):
        from dotenv import load_dotenv
        load_dotenv(env_file)
    configure_logging(logging.DEBUG if verbose else None)
    if os.path.exists(env_file):
        logger.debug("Loaded environment from %s", env_file)


@cli.command(name="list")
def list_experiments():
    """List the available experiments"""
    click.echo("📋 Available experiments:")
    for name in list_available_experiments():
        click.echo(f"  {name:<14} {AVAILABLE_EXPERIMENTS[name].description}")


def run_experiment(ctx: click.Context, name: str, config_path: Optional[str], overrides: Dict[str, Any]):
    """Load the config, run the experiment, write its outputs and exit with the contract code"""
    experiment_cls = get_experiment_class(name)
    try:
        config = load_config(config_path, overrides, experiment=name, defaults=experiment_cls.defaults)
    except ConfigParseError as e:
        click.echo(f"❌ Invalid configuration: {e}", err=True)
        ctx.exit(EXIT_USAGE)

    click.echo(f"🔄 Running {name} (seed {config.seed}) into {config.out_dir}...")
    try:
        manifest = experiment_cls(config).run()
        files = emit_outputs(manifest, config.out_dir)
    except InvalidParameterError as e:
        click.echo(f"❌ Invalid parameters: {e}", err=True)
        ctx.exit(EXIT_USAGE)
    except OutputError as e:
        click.echo(f"❌ Could not write outputs: {e}", err=True)
        ctx.exit(EXIT_OUTPUT)
    except HammersleyError as e:
        click.echo(f"❌ {name} failed: {e}", err=True)
        ctx.exit(EXIT_FAILED)

    for report in manifest.reports:
        mark = "✅" if report.passed else "❌"
        click.echo(f"{mark} {report.name}: statistic {report.statistic:.6g}, p {report.p_value:.4g}")
    click.echo(f"📋 Wrote {len(files)} files to {config.out_dir}")
    if manifest.passed:
        click.echo("✅ All checks passed")
        ctx.exit(EXIT_OK)
    failed = sum(not r.passed for r in manifest.reports)
    click.echo(f"❌ {failed} of {len(manifest.reports)} checks failed")
    click.echo("💡 See report.json for p-values and notes")
    ctx.exit(EXIT_FAILED)


def _register(name: str):
    experiment_cls = AVAILABLE_EXPERIMENTS[name]

    @cli.command(name=name, help=experiment_cls.__doc__ or experiment_cls.description,
                 short_help=experiment_cls.description)
    @experiment_options
    @click.pass_context
    def command(ctx, config_path, **overrides):
        run_experiment(ctx, name, config_path, overrides)

    return command


for _name in list_available_experiments():
    _register(_name)


if __name__ == '__main__':
    cli()
