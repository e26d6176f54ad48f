"""
Command-line front end.

    abq [--config FILE] [--output PATH] [-v] <subcommand> [flags]

``-v`` or ``[output] verbose = true`` switches the root logger to DEBUG.

Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

import json
import logging
import sys
from typing import Any, Dict, List, Optional

import click

from src.cli.experiments import EXPERIMENTS, reduce_payload
from src.cli.output import write_csv, write_json
from src.cli.run_config import FIELD_TYPES, load_run_config
from src.cli.selftest import SelfTester
from src.utils.errors import AbqError, NumericalError, ValidationError

logger = logging.getLogger(__name__)


def _configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _run_experiment(ctx: click.Context, command: str, overrides: Dict[str, Any]):
    options = ctx.find_root().obj
    overrides = dict(overrides)
    overrides["output.path"] = options.get("output")
    config = load_run_config(command, options.get("config"), overrides)
    if config.verbose and not options.get("verbose"):
        _configure_logging(True)
    table = EXPERIMENTS[command](config)
    path = config.output_path()
    count = write_csv(path, table.columns, table.rows)
    click.echo(f"{command}: {count} rows -> {path}")


def _common(function):
    """Flags shared by the computational subcommands."""
    decorators = [
        click.option("--alpha", type=float, default=None, help="Reduced flux in (0,1)"),
        click.option("--alphas", type=str, default=None,
                     help="Comma-separated flux sweep, e.g. 0.2,0.1,0.05"),
        click.option("--k", "k", type=int, default=None, help="Angular channel"),
        click.option("--ks", type=str, default=None, help="Comma-separated channels"),
        click.option("--lambda", "lam", type=float, default=None, help="Spectral parameter"),
        click.option("--lambdas", type=str, default=None, help="Comma-separated lambdas"),
        click.option("--field", "field_type", type=click.Choice(FIELD_TYPES), default=None,
                     help="Regular perturbation S"),
        click.option("--B", "B", type=float, default=None, help="Homogeneous field strength"),
        click.option("--cap-radius", type=float, default=None,
                     help="Saturate the field profile beyond this radius"),
        click.option("--field-path", type=str, default=None,
                     help="Two-column CSV with a tabulated profile s(r)"),
    ]
    for decorator in reversed(decorators):
        function = decorator(function)
    return function


def _common_overrides(alpha, alphas, k, ks, lam, lambdas, field_type, B, cap_radius,
                      field_path) -> Dict[str, Any]:
    return {
        "flux.alpha": alpha,
        "flux.alphas": alphas,
        "flux.k": k,
        "flux.ks": ks,
        "lambda.value": lam,
        "lambda.values": lambdas,
        "field.type": field_type,
        "field.b": B,
        "field.cap_radius": cap_radius,
        "field.path": field_path,
    }


def _beta_options(function):
    for decorator in reversed([
        click.option("--b00", type=float, default=None, help="beta_00"),
        click.option("--b11", type=float, default=None, help="beta_11"),
        click.option("--b01-re", type=float, default=None, help="Re beta_01"),
        click.option("--b01-im", type=float, default=None, help="Im beta_01"),
    ]):
        function = decorator(function)
    return function


def _grid_options(function):
    for decorator in reversed([
        click.option("--r-max", type=float, default=None, help="Outer radius"),
        click.option("--n", "n", type=int, default=None, help="Radial cells"),
        click.option("--grading", type=float, default=None, help="Clustering exponent"),
        click.option("--count", type=int, default=None, help="Eigenvalues per mode"),
    ]):
        function = decorator(function)
    return function


def _trial_options(function):
    for decorator in reversed([
        click.option("--seed", type=int, default=None, help="Random seed"),
        click.option("--trials", type=int, default=None, help="Number of trial functions"),
    ]):
        function = decorator(function)
    return function


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="INI or JSON run configuration")
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Output file (default output/<subcommand>.csv)")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str], output: Optional[str], verbose: bool):
    """Quadratic forms and spectra of Aharonov-Bohm operators with a regular field."""
    _configure_logging(verbose)
    ctx.obj = {"config": config_path, "output": output, "verbose": verbose}


@main.command()
@click.option("--raw", type=float, required=True, help="Flux in units of the flux quantum")
@click.pass_context
def reduce(ctx: click.Context, raw: float):
    """Reduce a raw flux to alpha in (0,1)."""
    options = ctx.find_root().obj
    config = load_run_config("reduce", options.get("config"), {"flux.raw": raw})
    payload = reduce_payload(config)
    if options.get("output"):
        write_json(options["output"], payload)
        click.echo(f"reduce: alpha={payload['alpha']:.17g} -> {options['output']}")
    else:
        click.echo(json.dumps(payload, sort_keys=True))


@main.command()
@_common
@click.option("--radii", type=str, default=None, help="Comma-separated radii")
@click.pass_context
def green(ctx, radii, **common):
    """Green function values, two-term expansion and defect residual."""
    overrides = _common_overrides(**common)
    overrides["grid.radii"] = radii
    _run_experiment(ctx, "green", overrides)


@main.command()
@_common
@click.pass_context
def norms(ctx, **common):
    """Closed-form against quadrature squared norms of the Green functions."""
    _run_experiment(ctx, "norms", _common_overrides(**common))


@main.command()
@_common
@click.option("--a", "cutoff_a", type=float, default=None, help="Cutoff plateau radius")
@click.option("--b", "cutoff_b", type=float, default=None, help="Cutoff support radius")
@click.pass_context
def xi(ctx, cutoff_a, cutoff_b, **common):
    """The Xi coupling matrix with its quadrature error."""
    overrides = _common_overrides(**common)
    overrides.update({"cutoff.a": cutoff_a, "cutoff.b": cutoff_b})
    _run_experiment(ctx, "xi", overrides)


@main.command()
@_common
@_beta_options
@_trial_options
@click.pass_context
def qbeta(ctx, b00, b11, b01_re, b01_im, seed, trials, **common):
    """Term-by-term Q^(beta) of seeded random trial functions."""
    overrides = _common_overrides(**common)
    overrides.update({"beta.b00": b00, "beta.b11": b11, "beta.b01_re": b01_re,
                      "beta.b01_im": b01_im, "trial.seed": seed, "trial.count": trials})
    _run_experiment(ctx, "qbeta", overrides)


@main.command("lambda-invariance")
@_common
@_beta_options
@_trial_options
@click.option("--lambda2", type=float, default=None, help="Second spectral parameter")
@click.option("--b2", "cutoff_b2", type=float, default=None, help="Support of the second cutoff")
@click.pass_context
def lambda_invariance(ctx, b00, b11, b01_re, b01_im, seed, trials, lambda2, cutoff_b2,
                      **common):
    """Q^(beta) under a change of lambda and of the cutoff."""
    overrides = _common_overrides(**common)
    overrides.update({"beta.b00": b00, "beta.b11": b11, "beta.b01_re": b01_re,
                      "beta.b01_im": b01_im, "trial.seed": seed, "trial.count": trials,
                      "lambda.second": lambda2, "cutoff.b2": cutoff_b2})
    _run_experiment(ctx, "lambda-invariance", overrides)


@main.command()
@_common
@_beta_options
@click.option("--bracket", type=(float, float), default=None,
              help="lambda_min lambda_max")
@click.pass_context
def boundstates(ctx, b00, b11, b01_re, b01_im, bracket, **common):
    """Bound states of the S = 0 extension labelled by beta."""
    overrides = _common_overrides(**common)
    overrides.update({"beta.b00": b00, "beta.b11": b11, "beta.b01_re": b01_re,
                      "beta.b01_im": b01_im})
    if bracket is not None:
        overrides.update({"lambda.bracket_min": bracket[0], "lambda.bracket_max": bracket[1]})
    _run_experiment(ctx, "boundstates", overrides)


@main.command()
@_common
@_grid_options
@click.pass_context
def spectrum(ctx, r_max, n, grading, count, **common):
    """Richardson-extrapolated Friedrichs eigenvalues per angular mode."""
    overrides = _common_overrides(**common)
    overrides.update({"grid.r_max": r_max, "grid.n": n, "grid.grading": grading,
                      "grid.count": count})
    _run_experiment(ctx, "spectrum", overrides)


@main.command()
@_common
@_grid_options
@click.option("--z", type=float, default=None, help="Negative spectral parameter")
@click.pass_context
def resolvent(ctx, r_max, n, grading, count, z, **common):
    """Mode resolvent distance ||u_alpha - u_0|| / ||u_0|| along a flux sweep."""
    overrides = _common_overrides(**common)
    overrides.update({"grid.r_max": r_max, "grid.n": n, "grid.grading": grading,
                      "grid.count": count, "lambda.z": z})
    _run_experiment(ctx, "resolvent", overrides)


@main.command()
@_common
@click.pass_context
def gamma(ctx, **common):
    """Recovery-sequence table for the vanishing-flux limit of the forms."""
    _run_experiment(ctx, "gamma", _common_overrides(**common))


@main.command()
def selftest():
    """Run every module's invariant checks."""
    if not SelfTester(click.echo).run():
        raise click.exceptions.Exit(1)


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI and map failures to exit codes.

    Args:
        argv: Arguments without the program name (default sys.argv[1:])

    Returns:
        0 on success, 2 on validation errors, 3 on numerical failures
    """
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        result = main.main(args=argv, prog_name="abq", standalone_mode=False)
    except ValidationError as e:
        click.echo(f"error: {e}", err=True)
        return 2
    except NumericalError as e:
        click.echo(f"error: {type(e).__name__}: {e}", err=True)
        return 3
    except AbqError as e:
        click.echo(f"error: {e}", err=True)
        return e.exit_code
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 2
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    # with standalone_mode off click returns the code of ctx.exit / Exit
    return result if isinstance(result, int) else 0
