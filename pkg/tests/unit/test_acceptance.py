"""
Long-running numerical checks against published values. Run with ``pytest -m slow``.
"""

import numpy as np
import pytest

from poshrink.closed_form import predictive as closed_form
from poshrink.conditions import certify_builtin, certify_family, check_fineq
from poshrink.core.problem import ProblemSpec
from poshrink.experiments import default_lambda_grid, get_experiment, run_experiment
from poshrink.f_integral import F_monte_carlo, F_quadrature
from poshrink.f_integral.cache import FCache
from poshrink.f_integral.service import FIntegralService
from poshrink.predictive import log_predictive_f
from poshrink.priors import families
from poshrink.priors.spec import FPrior
from poshrink.risk import (
    brute_force_risk_1d,
    kl_risk_f,
    kl_risk_power,
    kl_risk_power_terms,
    minimax_bounds,
    risk_reduction_f,
)

pytestmark = pytest.mark.slow

LAM = [0.4, 0.4, 0.4]
UNIT_SPEC = ProblemSpec.from_durations(1.0, 1.0, d=3, theta_scale="unit")


def test_harmonic_counterexample() -> None:
    service = FIntegralService(cache=FCache(), n=100_000, seed=1)
    harmonic = FPrior.build(families.Point(alpha=0.5, center=(2.0, 2.0, 2.0)), 3)
    symmetrized = FPrior.build(families.SymPoint(alpha=0.5, center=(2.0, 2.0, 2.0)), 3)
    harmonic_risk = kl_risk_f(harmonic, LAM, UNIT_SPEC, n=200_000, method="monte-carlo", service=service)
    symmetrized_risk = kl_risk_f(symmetrized, LAM, UNIT_SPEC, n=200_000, method="monte-carlo", service=service)
    assert 0.60 <= harmonic_risk.value <= 0.64
    assert 0.545 <= symmetrized_risk.value <= 0.575
    assert harmonic_risk.value > kl_risk_power(LAM, 0.5, UNIT_SPEC).value


def test_subspace_reductions() -> None:
    result = run_experiment(4, lambda_grid=[5.0], n=20_000, priors=["subspace-1", "subspace-2", "mix-subspace"])
    reductions = {row.prior: row.reduction for row in result.rows}
    assert reductions["subspace-1"] == pytest.approx(0.15, abs=0.02)
    assert reductions["subspace-2"] == pytest.approx(0.002, abs=0.01)
    assert reductions["mix-subspace"] == pytest.approx(0.10, abs=0.02)


def test_point_prior_wins_small_scales_and_shift_point_large() -> None:
    result = run_experiment(1, lambda_grid=[0.1, 10.0], method="hybrid")
    reductions = {(row.Lambda, row.prior): row.reduction for row in result.rows}
    assert reductions[(0.1, "point")] > reductions[(0.1, "shift-point")]
    assert reductions[(10.0, "shift-point")] > reductions[(10.0, "point")]


def test_subspace_prior_keeps_improving_at_large_scales() -> None:
    result = run_experiment(3, lambda_grid=[10.0], n=20_000)
    rows = {row.prior: row for row in result.rows}
    subspace, point = rows["sym-subspace"], rows["point"]
    assert subspace.reduction > point.reduction + 3 * np.hypot(subspace.se, point.se)


@pytest.mark.parametrize("experiment_id", [1, 2, 3, 4])
def test_certified_priors_never_lose_to_jeffreys(experiment_id: int) -> None:
    definition = get_experiment(experiment_id)
    certified = [p.name for p in definition.priors if certify_builtin(p.prior).applies]
    assert certified
    result = run_experiment(experiment_id, lambda_grid=[0.1, 1.0, 10.0], n=8_000, priors=certified)
    for row in result.rows:
        assert row.reduction >= -3 * row.se, f"{row.prior} at Lambda={row.Lambda}"


def test_symmetrized_origin_prior_never_loses_to_jeffreys() -> None:
    prior = FPrior.build(families.SymPoint(alpha=0.5, center=(0.0, 0.0, 0.0)), 3)
    service = FIntegralService(cache=FCache(), seed=5)
    for scale in default_lambda_grid():
        estimate = risk_reduction_f(prior, [0.4 * scale] * 3, UNIT_SPEC, n=8_000, seed=5, service=service)
        assert estimate.value >= -3 * estimate.std_error


def test_cache_serves_most_lookups_on_the_shift_point_workload() -> None:
    definition = get_experiment(1)
    cache = FCache()
    service = FIntegralService(cache=cache, seed=11)
    for named in definition.priors:
        for scale in np.geomspace(0.1, 10.0, 5):
            risk_reduction_f(
                named.prior, definition.rates(scale), definition.spec, n=8_000, method="monte-carlo", service=service
            )
    assert cache.hit_rate >= 0.9


def test_jeffreys_risk_below_upper_bound() -> None:
    generator = np.random.default_rng(0)
    for d in (1, 2, 3):
        for _ in range(7):
            r = generator.uniform(0.2, 5.0, size=d)
            s = generator.uniform(0.2, 5.0, size=d)
            spec = ProblemSpec.from_durations(r, s)
            lam = np.exp(generator.uniform(np.log(0.01), np.log(50.0), size=d))
            assert kl_risk_power(lam, 0.5, spec).value <= minimax_bounds(spec).upper


def test_jeffreys_terms_respect_the_lower_bound_at_large_means() -> None:
    generator = np.random.default_rng(1)
    for d in (1, 2, 3):
        for _ in range(7):
            r = generator.uniform(0.2, 5.0, size=d)
            s = generator.uniform(0.2, 5.0, size=d)
            lam = generator.uniform(10.0, 60.0, size=d) / r
            spec = ProblemSpec.from_durations(r, s)
            terms = kl_risk_power_terms(lam, 0.5, spec)
            assert np.all(terms >= 0.5 * np.log((r + s) / r))


@pytest.mark.parametrize("seed", range(5))
def test_oracle_equivalence(seed: int) -> None:
    generator = np.random.default_rng(seed)
    spec = ProblemSpec.from_durations(generator.uniform(0.5, 3.0), generator.uniform(0.5, 3.0), d=1)
    lam = float(generator.uniform(0.1, 4.0))
    family = families.ShiftPoint(alpha=0.5, eta=float(generator.uniform(0.5, 2.0)))
    prior = FPrior.build(family, 1, enforce_hypotheses=False)
    service = FIntegralService(cache=FCache())

    def power(x, ys):
        return closed_form.log_predictive_power([x], ys[:, None], 0.5, spec)

    def shrunk(x, ys):
        return np.array([log_predictive_f(prior, [x], [y], spec, service).log_value for y in ys])

    assert kl_risk_power([lam], 0.5, spec).value == pytest.approx(brute_force_risk_1d(power, lam, spec), abs=1e-6)
    hybrid = kl_risk_f(prior, [lam], spec, method="hybrid", service=service)
    assert hybrid.value == pytest.approx(brute_force_risk_1d(shrunk, lam, spec), abs=1e-6)


def test_backend_agreement() -> None:
    generator = np.random.default_rng(7)
    candidates = [families.ShiftPoint(alpha=0.5, eta=1.0), families.CoordSubspace(alpha=0.5, include=(0, 1, 2))]
    for trial in range(20):
        family = candidates[trial % 2]
        z = generator.integers(0, 10, size=3)
        t = generator.uniform(0.5, 3.0, size=3)
        exact = F_quadrature(family, z, t, [0.5] * 3, [1.0] * 3)
        sampled = F_monte_carlo(family, z, t, [0.5] * 3, [1.0] * 3, n=100_000, seed=trial)
        assert abs(sampled.log_value - exact.log_value) <= 3 * sampled.std_error


@pytest.mark.parametrize(
    "family",
    [
        families.ShiftPoint(alpha=0.5, eta=0.0),
        families.ShiftPoint(alpha=0.5, eta=1.0),
        families.SymPoint(alpha=0.5, center=(0.0, 0.0, 0.0)),
        families.CoordSubspace(alpha=0.5, include=(0, 1, 2)),
    ],
)
def test_certified_priors_satisfy_the_inequality(family) -> None:
    prior = FPrior.build(family, 3)
    spec = ProblemSpec.from_durations(1.0, 1.0, d=3)
    report = check_fineq(prior, spec, [0.5, 1.0, 2.0], 5, service=FIntegralService(cache=FCache()))
    assert report.passed
    assert certify_family(family, 3).applies


@pytest.mark.parametrize(
    "family",
    [
        families.ShiftPoint(alpha=0.6, eta=0.0),
        families.SymPoint(alpha=0.6, center=(1.0, 1.0, 1.0)),
        families.CoordSubspace(alpha=0.6, include=(0, 1, 2)),
    ],
)
def test_alpha_beyond_bound_is_rejected(family) -> None:
    assert not certify_family(family, 3).applies
