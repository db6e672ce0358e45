import numpy as np
import pytest
from scipy import stats

from poshrink import settings
from poshrink.core import exceptions
from poshrink.core.problem import ProblemSpec
from poshrink.predictive.shrinkage import bayes_rule_power
from poshrink.risk import bounds, estimators, lemma, oracle
from poshrink.risk.kl_risk import kl_risk_power, kl_risk_power_terms

SPEC_1 = ProblemSpec.from_durations(1.0, 1.0, d=1)


class TestEstimatorRisk:
    def test_jeffreys_rule(self) -> None:
        estimate = estimators.estimator_kl_risk(bayes_rule_power(0.5, SPEC_1), [1.0], SPEC_1)
        assert estimate.value == pytest.approx(0.3313, abs=1e-4)
        assert estimate.value == pytest.approx(0.5 - lemma.lemma_f(1.0), rel=1e-10)
        assert estimate.flags == []

    def test_scalar_rules(self) -> None:
        vectorized = estimators.estimator_kl_risk(bayes_rule_power(0.5, SPEC_1), [2.0], SPEC_1)
        scalar = estimators.estimator_kl_risk(lambda x: x + 0.5, [2.0], SPEC_1)
        assert scalar.value == pytest.approx(vectorized.value)

    def test_zero_estimate_is_infinite(self) -> None:
        estimate = estimators.estimator_kl_risk(lambda x: x.astype(float), [1.0], SPEC_1)
        assert estimate.value == np.inf
        assert "infinite-risk" in estimate.flags

    def test_cost_limit(self) -> None:
        spec = ProblemSpec.from_durations(1.0, 1.0, d=3)
        with pytest.raises(exceptions.CostLimitError):
            estimators.estimator_kl_risk(lambda x: x + 0.5, [1.0] * 3, spec, truncation=settings.ESTIMATOR_MAX_POINTS)

    def test_rejects_nonpositive_rates(self) -> None:
        with pytest.raises(exceptions.InvalidArgumentError):
            estimators.estimator_kl_risk(lambda x: x + 0.5, [0.0], SPEC_1)


class TestOracle:
    def test_true_distribution_has_zero_risk(self) -> None:
        def q(x, ys):
            return stats.poisson.logpmf(ys, 2.0)

        assert oracle.brute_force_risk_1d(q, 2.0, SPEC_1) == pytest.approx(0.0, abs=1e-12)

    def test_one_dimensional_only(self) -> None:
        with pytest.raises(exceptions.UnsupportedDimensionError):
            oracle.brute_force_risk_1d(lambda x, ys: ys, 1.0, ProblemSpec.from_durations(1.0, 1.0, d=2))


class TestLemma:
    def test_spot_value(self) -> None:
        assert lemma.lemma_f(1.0) == pytest.approx(0.1687, abs=1e-4)

    @pytest.mark.parametrize("lam,lower", [(3.0, 0.0), (4.0, -0.0082), (5.0, -0.011)])
    def test_truncated_lower_bounds(self, lam: float, lower: float) -> None:
        value = lemma.lemma_L(lam)
        assert value > lower
        assert value <= lemma.lemma_f(lam)

    def test_derivative_bound(self) -> None:
        values = [lemma.lemma_f_derivative_bound(1.0, lam) for lam in np.geomspace(0.01, 100.0, 40)]
        assert max(values) < bounds.JEFFREYS_UPPER_FACTOR
        assert lemma.lemma_f_derivative_bound(2.0, 1.0) < bounds.JEFFREYS_UPPER_FACTOR / 2.0

    @pytest.mark.parametrize("lam", np.geomspace(0.1, 1e3, 61))
    def test_f_stays_above_floor(self, lam: float) -> None:
        assert lemma.lemma_f(lam) > -0.02

    def test_f_decays_like_minus_one_over_24_lambda(self) -> None:
        assert lemma.lemma_f(200.0) == pytest.approx(-1 / (24 * 200.0), rel=0.05)

    def test_rejects_nonpositive_rate(self) -> None:
        with pytest.raises(exceptions.InvalidArgumentError):
            lemma.lemma_f(0.0)
        with pytest.raises(exceptions.InvalidArgumentError):
            lemma.lemma_L(-1.0)


def test_minimax_bounds() -> None:
    result = bounds.minimax_bounds(ProblemSpec.from_durations(1.0, 1.0, d=3))
    assert result.lower == pytest.approx(1.0397208)
    assert result.upper == pytest.approx(1.0813096)
    assert result.ratio == pytest.approx(1.04)


def test_jeffreys_risk_lies_between_bounds() -> None:
    spec = ProblemSpec.from_durations(1.0, 1.0, d=3)
    result = bounds.minimax_bounds(spec)
    for lam in np.geomspace(0.01, 100.0, 9):
        assert kl_risk_power([lam] * 3, 0.5, spec).value < result.upper


@pytest.mark.parametrize("lam", np.geomspace(10.0, 100.0, 4))
def test_jeffreys_risk_exceeds_lower_bound_for_large_rates(lam: float) -> None:
    spec = ProblemSpec.from_durations(1.0, 1.0, d=3)
    result = bounds.minimax_bounds(spec)
    risk = kl_risk_power([lam] * 3, 0.5, spec).value
    assert result.lower <= risk < result.upper


def test_jeffreys_terms_exceed_per_coordinate_lower_bound() -> None:
    spec = ProblemSpec.from_durations([1.0, 2.0, 0.5], [1.0, 0.5, 3.0])
    lam = np.array([20.0, 15.0, 40.0])
    terms = kl_risk_power_terms(lam, 0.5, spec)
    floor = bounds.LOWER_FACTOR * np.log((spec.r_array + spec.s_array) / spec.r_array)
    assert np.all(terms >= floor)
    assert np.all(terms < bounds.JEFFREYS_UPPER_FACTOR / bounds.LOWER_FACTOR * floor)
