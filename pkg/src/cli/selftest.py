"""
Self-test harness: the invariant checks of every module, printed line by line.
"""

import math
import os
import time
import traceback
from typing import Callable, List, Tuple

import numpy as np
import psutil
from scipy.special import kv

from src.cli.output import render_csv
from src.extensions import bound_states, diagonal_root, singular_trace
from src.fields import (
    Cutoff,
    RecoveryProfile,
    a_alpha_eval,
    cutoff_eval,
    divergence_check,
    eta_eval,
    lipschitz_check,
    make_homogeneous_field,
    make_stream_field,
    reduce_flux,
    zero_field,
)
from src.forms import (
    HermitianCoupling,
    change_cutoff,
    change_lambda,
    coercivity_sweep,
    qbeta_eval,
    random_coupling,
    random_trial_function,
    xi_matrix,
)
from src.greens import (
    GreenFunction,
    asymptotic_remainder_slope,
    cross_term_orthogonality,
    defect_residual,
    green_norm_closed,
    green_norm_quadrature,
)
from src.specfun import bessel_k, bessel_k_integral, bessel_k_series, gamma_fn
from src.spectral import (
    assemble_mode_operator,
    eigenpairs,
    extrapolated_eigenvalues,
    gamma_recovery_study,
    gaussian_state,
    mode_profile,
    resolvent_apply,
    resolvent_study,
)
from src.utils.quadrature import PolarGrid

CheckResult = Tuple[bool, str]

SWEEP = (0.2, 0.1, 0.05, 0.025, 0.0125)


def _bessel() -> CheckResult:
    rng = np.random.default_rng(0)
    worst = 0.0
    for nu, x in zip(rng.uniform(0.05, 0.95, 100), rng.uniform(0.01, 20.0, 100)):
        worst = max(worst, abs(bessel_k(nu, x) / kv(nu, x) - 1.0))
    closed = abs(bessel_k(0.5, 1.3) / (math.sqrt(math.pi / 2.6) * math.exp(-1.3)) - 1.0)
    return worst < 1e-10 and closed < 1e-12, f"max rel err {worst:.2e}, K_1/2 {closed:.2e}"


def _gamma() -> CheckResult:
    worst = max(abs(gamma_fn(x) * gamma_fn(1.0 - x) * math.sin(math.pi * x) / math.pi - 1.0)
                for x in (0.1, 0.25, 0.5, 0.8))
    return worst < 1e-12, f"reflection defect {worst:.2e}"


def _norms() -> CheckResult:
    worst = 0.0
    for alpha in (0.3, 0.7):
        for k in (0, -1):
            g = GreenFunction(k, alpha, 1.0)
            closed = green_norm_closed(g)
            worst = max(worst, abs(green_norm_quadrature(g) - closed) / closed)
    return worst < 1e-7, f"max rel err {worst:.2e}"


def _asymptotics() -> CheckResult:
    g = GreenFunction(0, 0.3, 1.0)
    slope = asymptotic_remainder_slope(g, np.geomspace(1e-4, 1e-2, 9))
    residual = float(np.max(defect_residual(g, np.geomspace(0.01, 5.0, 20))))
    ok = abs(slope - (2.0 - g.nu)) < 0.05 and residual < 1e-7
    return ok, f"slope {slope:.4f}, defect residual {residual:.2e}"


def _bound_states() -> CheckResult:
    beta = HermitianCoupling.diagonal(-math.pi ** 2, math.pi ** 2)
    states = bound_states(beta, 0.5, (0.1, 10.0))
    expected = diagonal_root(-math.pi ** 2, 0, 0.5)
    ok = len(states) == 1 and abs(states[0].lam - expected) < 1e-10
    return ok, f"{len(states)} state(s), lambda* = {states[0].lam if states else math.nan:.12f}"


def _crossover() -> CheckResult:
    x = np.linspace(1.5, 2.5, 11)
    worst = max(float(np.max(np.abs(bessel_k_series(nu, x) / bessel_k_integral(nu, x) - 1.0)))
                for nu in (0.2, 0.5, 0.8))
    return worst < 1e-10, f"series/integral rel diff {worst:.2e}"


def _field_invariants() -> CheckResult:
    fields = (make_homogeneous_field(1.0), make_homogeneous_field(2.0, cap_radius=3.0),
              make_stream_field(), zero_field())
    divergence = max(divergence_check(f)[0] for f in fields)
    lipschitz = lipschitz_check(make_homogeneous_field(3.0))
    ok = divergence < 1e-5 and abs(lipschitz - 1.5) < 1e-12
    return ok, f"max |div S| {divergence:.2e}, Lipschitz {lipschitz:.12g}"


def _cutoff_calculus() -> CheckResult:
    cutoff = Cutoff(1.0, 2.0)
    _, edges, _ = cutoff_eval(cutoff, np.array([1.0, 2.0]))
    eps = 1e-9
    jumps = [abs(cutoff_eval(cutoff, edge + eps)[2] - cutoff_eval(cutoff, edge - eps)[2])
             for edge in (1.0, 2.0)]
    h = 1e-6
    r = np.array([1.2, 1.5, 1.8])
    _, first, _ = cutoff_eval(cutoff, r)
    slope = (cutoff_eval(cutoff, r + h)[0] - cutoff_eval(cutoff, r - h)[0]) / (2.0 * h)
    slope_err = float(np.max(np.abs(slope / first - 1.0)))
    # A_alpha is azimuthal, grad chi radial
    x, y = np.array([0.3, -1.2, 1.1]), np.array([1.4, 0.2, -1.0])
    ax, ay = a_alpha_eval(0.4, x, y)
    _, d_chi, _ = cutoff_eval(cutoff, np.hypot(x, y))
    dot = float(np.max(np.abs((ax * x + ay * y) * d_chi)))
    ok = (np.max(np.abs(edges)) == 0.0 and max(jumps) <= 1e-6 and slope_err < 1e-6
          and dot < 1e-14)
    return ok, f"chi'' jump {max(jumps):.1e}, chi' defect {slope_err:.1e}, A.grad chi {dot:.1e}"


def _eta_profile() -> CheckResult:
    r = np.linspace(1e-6, 3.0, 600)
    ok = True
    for alpha in SWEEP:
        value, _ = eta_eval(RecoveryProfile(alpha), r)
        ok = ok and bool(np.all(np.diff(value) >= 0.0) and value[0] >= 0.0
                         and value[-1] == 1.0)
    return ok, f"monotone in [0, 1] for {len(SWEEP)} fluxes"


def _orthogonality() -> CheckResult:
    worst = max(cross_term_orthogonality(alpha, 1.0, lambda r: np.exp(-r))
                for alpha in (0.3, 0.6))
    return worst <= 1e-10, f"|<G0, eta G-1>| {worst:.2e}"


def _xi_symmetry() -> CheckResult:
    field = make_homogeneous_field(1.0, cap_radius=3.0)
    ok, worst = True, 0.0
    for alpha in (0.3, 0.5):
        xi = xi_matrix(alpha, field, Cutoff(1.0, 2.0), 1.0)
        off = max(abs(xi.entry(0, -1)), abs(xi.entry(-1, 0)))
        ok = ok and xi.hermiticity_defect <= 10.0 * xi.error and off <= 10.0 * xi.error
        worst = max(worst, xi.hermiticity_defect, off)
    return ok, f"max defect {worst:.2e}"


def _invariance() -> CheckResult:
    rng = np.random.default_rng(1)
    beta = HermitianCoupling(1.0, -0.5, 0.3 + 0.2j)
    grid = PolarGrid().with_breakpoints(1.0, 2.0, 3.0)
    worst = 0.0
    for _ in range(2):
        psi = random_trial_function(rng, 0.5, zero_field(), Cutoff(1.0, 2.0), 1.0)
        base = qbeta_eval(psi, beta, grid)
        moved = qbeta_eval(change_lambda(psi, 2.0), beta, grid)
        recut = qbeta_eval(change_cutoff(psi, Cutoff(1.0, 3.0)), beta, grid)
        scale = max(1.0, abs(base))
        worst = max(worst, abs(moved - base) / scale, abs(recut - base) / scale)
    return worst < 1e-4, f"max rel diff {worst:.2e}"


def _coercivity() -> CheckResult:
    rng = np.random.default_rng(11)
    beta = random_coupling(rng)
    trials = [random_trial_function(rng, 0.5, zero_field(), Cutoff(1.0, 2.0), 1.0)
              for _ in range(3)]
    report = coercivity_sweep(trials, beta, [4.0, 16.0])
    top = min(value for _, lam, value in report.rows if lam == 16.0)
    ok = top >= 0.0 and math.isfinite(report.lambda_star)
    return ok, f"min probe at lambda=16 {top:.4g}, lambda* {report.lambda_star:g}"


def _eigenmode_traces() -> CheckResult:
    def homogeneous(r):
        return 0.5 * np.asarray(r, dtype=float)
    worst = 0.0
    for alpha in (0.3, 0.5):
        op = assemble_mode_operator(0, alpha, homogeneous)
        worst = max(worst, abs(singular_trace(mode_profile(op), 0, alpha).value))
    return worst <= 1e-4, f"max |singular trace| {worst:.2e}"


def _landau() -> CheckResult:
    def homogeneous(r):
        return 0.5 * np.asarray(r, dtype=float)
    landau = extrapolated_eigenvalues(0, 0.0, homogeneous, count=3).values
    oscillator = extrapolated_eigenvalues(0, 0.5, homogeneous, count=2).values
    ok = (np.max(np.abs(landau - [1.0, 3.0, 5.0])) < 1e-3
          and np.max(np.abs(oscillator - [2.0, 4.0])) < 1e-3)
    return ok, f"Landau {np.round(landau, 6)}, alpha=0.5 {np.round(oscillator, 6)}"


def _resolvent() -> CheckResult:
    op = assemble_mode_operator(0, 0.3)
    values, vectors = eigenpairs(op, 1)
    u = resolvent_apply(op, -1.0, vectors[:, 0])
    identity = float(np.max(np.abs(u - vectors[:, 0] / (values[0] + 1.0))))
    study = resolvent_study(SWEEP)
    ok = identity < 1e-8 and study.strictly_decreasing and study.reduction <= 0.25
    return ok, f"eigenvector defect {identity:.2e}, sweep ratio {study.reduction:.3f}"


def _gamma_limit() -> CheckResult:
    study = gamma_recovery_study(gaussian_state(), SWEEP)
    bounded = all(row.singular_norm <= row.singular_bound for row in study.rows)
    lower = all(row.lower_bound_ok for row in study.rows)
    ok = (abs(study.q0 - math.pi) < 1e-8 and study.strictly_decreasing
          and study.reduction <= 0.25 and bounded and lower)
    return ok, f"Q0 = {study.q0:.10f}, gap ratio {study.reduction:.3f}"


def _flux_and_output() -> CheckResult:
    reduced = reduce_flux(2.7)
    first = render_csv(("a", "b"), [(0.1, 1), (1.0 / 3.0, -2)])
    second = render_csv(("a", "b"), [(0.1, 1), (1.0 / 3.0, -2)])
    ok = abs(reduced.alpha - 0.7) < 1e-12 and reduced.ell == 1 and first == second
    return ok, f"alpha {reduced.alpha:.12g}, ell {reduced.ell}, csv stable {first == second}"


CHECKS: List[Tuple[str, Callable[[], CheckResult]]] = [
    ("specfun: Bessel K oracle", _bessel),
    ("specfun: series and integral agree at the crossover", _crossover),
    ("specfun: Gamma reflection", _gamma),
    ("fields: flux reduction and CSV determinism", _flux_and_output),
    ("fields: divergence and Lipschitz bounds", _field_invariants),
    ("fields: cutoff calculus", _cutoff_calculus),
    ("fields: recovery profile", _eta_profile),
    ("greens: norm identity", _norms),
    ("greens: small-r remainder and defect equation", _asymptotics),
    ("greens: channel orthogonality", _orthogonality),
    ("forms: Xi hermiticity", _xi_symmetry),
    ("forms: lambda and cutoff invariance", _invariance),
    ("forms: coercivity at large lambda", _coercivity),
    ("extensions: bound state closed form", _bound_states),
    ("extensions: Friedrichs eigenmodes have no singular part", _eigenmode_traces),
    ("spectral: Landau and oscillator anchors", _landau),
    ("spectral: resolvent identity and sweep", _resolvent),
    ("spectral: recovery sequence", _gamma_limit),
]


class SelfTester:
    """Runs every check, prints one line each and a resource summary."""

    def __init__(self, echo: Callable[[str], None] = print):
        """
        Initialize the tester.

        Args:
            echo: Line printer (click.echo from the CLI)
        """
        self.echo = echo
        self.results: List[Tuple[str, bool, str, float]] = []
        self.process = psutil.Process(os.getpid())

    def run(self) -> bool:
        self.echo("abq-forms self-test")
        self.echo("=" * 50)
        for name, check in CHECKS:
            start = time.time()
            try:
                ok, detail = check()
            except Exception as e:
                ok, detail = False, f"{type(e).__name__}: {e}"
                traceback.print_exc()
            elapsed = time.time() - start
            self.results.append((name, ok, detail, elapsed))
            self.echo(f"- [{'PASS' if ok else 'FAIL'}] {name}: {detail} ({elapsed:.1f}s)")
        self._report()
        return self.passed

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(ok for _, ok, _, _ in self.results)

    def _report(self):
        failures = sum(1 for _, ok, _, _ in self.results if not ok)
        memory = self.process.memory_info().rss / 1024 / 1024
        self.echo("=" * 50)
        self.echo(f"{len(self.results) - failures}/{len(self.results)} checks passed")
        self.echo(f"Resident memory: {memory:.1f} MB")
        self.echo(f"Total time: {sum(t for _, _, _, t in self.results):.1f}s")
