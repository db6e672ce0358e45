import pytest

from poshrink.core import exceptions
from poshrink.priors import exceptions as prior_exc
from poshrink.priors import families
from poshrink.priors.spec import FPrior, GammaPrior, PowerPrior, PriorEnvelope, as_f_prior


class TestFPrior:
    def test_build_broadcasts_beta(self) -> None:
        prior = FPrior.build(families.ShiftPoint(alpha=0.5, eta=1.0), 3)
        assert prior.beta == (0.5, 0.5, 0.5)
        assert prior.d == 3
        assert prior.is_quadrature
        assert not prior.is_constant

    @pytest.mark.parametrize(
        "family,d,proposition",
        [
            (families.ShiftPoint(alpha=1.0, eta=0.0), 3, "Proposition 1"),
            (families.SymPoint(alpha=1.0, center=(2.0, 2.0, 2.0)), 3, "Proposition 2"),
            (families.CoordSubspace(alpha=1.0, include=(0, 1, 2)), 4, "Proposition 3"),
        ],
    )
    def test_hypotheses_name_the_proposition(self, family, d: int, proposition: str) -> None:
        with pytest.raises(prior_exc.HypothesisError, match=proposition):
            FPrior.build(family, d)

    def test_hypotheses_are_checked_in_sums(self) -> None:
        family = families.Sum(
            parts=(
                families.CoordSubspace(alpha=0.5, include=(0, 1, 2)),
                families.CoordSubspace(alpha=2.0, include=(1, 2)),
            )
        )
        with pytest.raises(prior_exc.HypothesisError):
            FPrior.build(family, 4)

    def test_hypothesis_error_is_an_invalid_argument(self) -> None:
        with pytest.raises(exceptions.InvalidArgumentError):
            FPrior.build(families.ShiftPoint(alpha=0.5, eta=0.0), 1)

    def test_unenforced_hypotheses(self) -> None:
        prior = FPrior.build(families.ShiftPoint(alpha=0.5, eta=0.0), 1, enforce_hypotheses=False)
        assert prior.family.alpha == 0.5

    def test_dimension_mismatch(self) -> None:
        with pytest.raises(exceptions.InvalidArgumentError, match="expected d=3"):
            FPrior.build(families.Point(alpha=0.5, center=(1.0, 1.0)), 3)

    def test_uncovered_family_passes(self) -> None:
        prior = FPrior.build(families.Point(alpha=3.0, center=(2.0, 2.0, 2.0)), 3)
        assert not prior.is_quadrature

    def test_digest(self) -> None:
        first = FPrior.build(families.ShiftPoint(alpha=0.5, eta=1.0), 3)
        same = FPrior.build(families.ShiftPoint(alpha=0.5, eta=1.0), 3)
        smoothed = first.with_epsilon(1e-6)
        assert first.digest() == same.digest()
        assert first.digest() != smoothed.digest()
        assert smoothed.epsilon == 1e-6

    def test_rejects_negative_epsilon(self) -> None:
        with pytest.raises(ValueError):
            FPrior.build(families.ShiftPoint(alpha=0.5, eta=1.0), 3, epsilon=-1.0)


def test_rejects_nonpositive_beta() -> None:
    with pytest.raises(exceptions.InvalidArgumentError):
        PowerPrior(beta=(0.5, 0.0))


def test_gamma_prior_lengths() -> None:
    with pytest.raises(exceptions.InvalidArgumentError, match="lengths differ"):
        GammaPrior(alpha=(1.0, 1.0), beta=(0.5,))


def test_envelope_round_trip() -> None:
    prior = FPrior.build(families.mix_coord_subspace(4, 0.5), 4)
    restored = PriorEnvelope.parse_raw(PriorEnvelope(prior=prior).json()).prior
    assert isinstance(restored, FPrior)
    assert restored == prior
    gamma = PriorEnvelope.parse_obj({"prior": {"kind": "gamma", "alpha": [1.0], "beta": [0.5]}}).prior
    assert isinstance(gamma, GammaPrior)


def test_as_f_prior() -> None:
    prior = as_f_prior(PowerPrior.jeffreys(3))
    assert prior.is_constant
    assert prior.beta == (0.5, 0.5, 0.5)
    with pytest.raises(exceptions.InvalidArgumentError):
        as_f_prior(GammaPrior(alpha=(1.0,), beta=(0.5,)))
