"""
Experiments behind the CLI subcommands.

Each experiment takes a validated RunConfig and returns a Table whose rows
are in a fixed order, so identical configurations give identical files.
"""

import logging
import math
from typing import Any, List, NamedTuple, Sequence

import numpy as np

from src.cli.output import parallel_map
from src.cli.run_config import RunConfig
from src.extensions import bound_states
from src.fields import reduce_flux
from src.forms import (
    change_cutoff,
    change_lambda,
    qbeta_breakdown,
    qbeta_eval,
    random_trial_function,
    xi_matrix,
)
from src.greens import (
    CHANNELS,
    GreenFunction,
    defect_residual,
    green_asymptotic,
    green_eval,
    green_norm_closed,
    green_norm_quadrature,
)
from src.spectral import (
    extrapolated_eigenvalues,
    gamma_recovery_study,
    gaussian_source,
    gaussian_state,
    resolvent_study,
)
from src.utils.quadrature import PolarGrid

logger = logging.getLogger(__name__)

ALPHA_SWEEP = (0.2, 0.1, 0.05, 0.025, 0.0125)
GREEN_RADII = (0.01, 0.1, 0.5, 1.0, 2.0, 5.0)


class Table(NamedTuple):
    columns: Sequence[str]
    rows: List[Sequence[Any]]


def reduce_payload(config: RunConfig) -> dict:
    """{alpha, ell, conjugated} of the raw flux."""
    raw = config.raw if config.raw is not None else config.alpha
    return reduce_flux(raw).as_dict()


def green_table(config: RunConfig) -> Table:
    radii = config.radii or GREEN_RADII
    rows = []
    for alpha in config.alpha_values:
        for k in config.k_values:
            for lam in config.lambda_values:
                g = GreenFunction(k, alpha, lam)
                for r in radii:
                    value = green_eval(g, r, 0.0).real
                    expansion = green_asymptotic(g, r) if lam * r < 1.0 else math.nan
                    rows.append((alpha, k, lam, r, value, expansion, defect_residual(g, r)))
    return Table(("alpha", "k", "lambda", "r", "value", "asymptotic", "residual"), rows)


def _norm_row(point):
    alpha, k, lam = point
    g = GreenFunction(k, alpha, lam)
    closed = green_norm_closed(g)
    numeric = green_norm_quadrature(g)
    return (alpha, k, lam, closed, numeric, abs(numeric - closed) / closed)


def norms_table(config: RunConfig) -> Table:
    points = [(alpha, k, lam) for alpha in config.alpha_values
              for k in config.k_values for lam in config.lambda_values]
    return Table(("alpha", "k", "lambda", "closed", "quadrature", "rel_err"),
                 parallel_map(_norm_row, points))


def xi_table(config: RunConfig) -> Table:
    field = config.build_field()
    rows = []
    for alpha in config.alpha_values:
        for lam in config.lambda_values:
            xi = xi_matrix(alpha, field, config.cutoff, lam, tolerances=config.tolerances)
            for k in CHANNELS:
                for k_prime in CHANNELS:
                    entry = xi.entry(k, k_prime)
                    rows.append((alpha, lam, k, k_prime, entry.real, entry.imag, xi.error))
    return Table(("alpha", "lambda", "k", "k_prime", "re", "im", "error"), rows)


def _trials(config: RunConfig, alpha: float):
    rng = np.random.default_rng(config.seed)
    field = config.build_field()
    return [random_trial_function(rng, alpha, field, config.cutoff, config.lam)
            for _ in range(config.trials)]


def _trial_grid(config: RunConfig) -> PolarGrid:
    return PolarGrid().with_breakpoints(config.cutoff_a, config.cutoff_b,
                                        config.cutoff_a2, config.cutoff_b2)


def qbeta_table(config: RunConfig) -> Table:
    beta = config.beta
    grid = _trial_grid(config)
    rows = []
    for alpha in config.alpha_values:
        breakdowns = parallel_map(lambda psi: qbeta_breakdown(psi, beta, grid),
                                  _trials(config, alpha))
        for index, b in enumerate(breakdowns):
            rows.append((index, alpha, config.lam, b.friedrichs, b.mass_shift, b.cross_terms,
                         b.charge_block.real, b.charge_block_imag, b.total))
    return Table(("trial", "alpha", "lambda", "friedrichs", "mass_shift", "cross_terms",
                  "charge_block", "charge_block_imag", "total"), rows)


def lambda_invariance_table(config: RunConfig) -> Table:
    beta = config.beta
    grid = _trial_grid(config)

    def compare(psi):
        base = qbeta_eval(psi, beta, grid)
        moved = qbeta_eval(change_lambda(psi, config.lam2), beta, grid)
        recut = qbeta_eval(change_cutoff(psi, config.second_cutoff), beta, grid)
        return base, moved, recut

    rows = []
    for alpha in config.alpha_values:
        for index, (base, moved, recut) in enumerate(parallel_map(compare,
                                                                  _trials(config, alpha))):
            scale = max(abs(base), 1e-300)
            rows.append((index, alpha, "lambda", config.lam, config.lam2, base, moved,
                         abs(moved - base) / scale))
            rows.append((index, alpha, "cutoff", config.cutoff_b, config.cutoff_b2, base,
                         recut, abs(recut - base) / scale))
    return Table(("trial", "alpha", "kind", "first", "second", "q_first", "q_second",
                  "rel_diff"), rows)


def boundstates_table(config: RunConfig) -> Table:
    rows = []
    for alpha in config.alpha_values:
        states = bound_states(config.beta, alpha, config.bracket,
                              tolerances=config.tolerances)
        for index, state in enumerate(states):
            v = state.null_vector
            rows.append((alpha, index, state.lam, state.energy, v[0].real, v[0].imag,
                         v[1].real, v[1].imag))
    return Table(("alpha", "index", "lambda", "energy", "v0_re", "v0_im", "v1_re", "v1_im"),
                 rows)


def spectrum_table(config: RunConfig) -> Table:
    profile = config.build_field().require_profile()
    grid = config.radial_grid
    points = [(alpha, k) for alpha in config.alpha_values for k in config.k_values]

    def levels(point):
        alpha, k = point
        return extrapolated_eigenvalues(k, alpha, profile, grid, config.count)

    rows = []
    for (alpha, k), spectrum in zip(points, parallel_map(levels, points)):
        for n, (value, error) in enumerate(zip(spectrum.values, spectrum.errors)):
            rows.append((alpha, k, n, float(value), float(error)))
    return Table(("alpha", "k", "n", "value", "error_estimate"), rows)


def resolvent_table(config: RunConfig) -> Table:
    profile = config.build_field().require_profile()
    alphas = config.alphas or ALPHA_SWEEP
    grid = config.radial_grid
    rows = []
    for k in config.k_values:
        coarse = resolvent_study(alphas, k, profile, config.z, gaussian_source, grid)
        fine = resolvent_study(alphas, k, profile, config.z, gaussian_source, grid.refined())
        for low, high in zip(coarse.rows, fine.rows):
            rows.append((high.alpha, k, high.n, high.relative_error,
                         abs(high.relative_error - low.relative_error)))
    return Table(("alpha", "k", "n", "value", "error_estimate"), rows)


def gamma_table(config: RunConfig) -> Table:
    study = gamma_recovery_study(gaussian_state(), config.alphas or ALPHA_SWEEP,
                                 config.build_field())
    rows = [(row.alpha, 0, n, row.gap, row.quadrature_error, row.q_alpha, row.singular_norm,
             row.singular_bound, row.h1_gap, row.singular_term, row.mixed_term,
             row.gradient_term, row.reference_term, row.telescopic_residual,
             row.lower_bound_ok)
            for n, row in enumerate(study.rows)]
    return Table(("alpha", "k", "n", "value", "error_estimate", "q_alpha", "singular_norm",
                  "singular_bound", "h1_gap", "singular_term", "mixed_term", "gradient_term",
                  "reference_term", "telescopic_residual", "lower_bound_ok"), rows)


EXPERIMENTS = {
    "green": green_table,
    "norms": norms_table,
    "xi": xi_table,
    "qbeta": qbeta_table,
    "lambda-invariance": lambda_invariance_table,
    "boundstates": boundstates_table,
    "spectrum": spectrum_table,
    "resolvent": resolvent_table,
    "gamma": gamma_table,
}
