import numpy as np
import pytest
from parameterized import parameterized

from poshrink.priors import families
from poshrink.priors.exceptions import GrammarError, HypothesisError
from poshrink.priors.grammar import complement_basis, parse_prior, parse_priors
from poshrink.priors.spec import FPrior, GammaPrior, PowerPrior


class TestParsePrior:
    def test_jeffreys(self) -> None:
        assert parse_prior("jeffreys", 3) == PowerPrior(beta=(0.5, 0.5, 0.5))

    def test_power_and_gamma(self) -> None:
        assert parse_prior("power:beta=1", 2) == PowerPrior(beta=(1.0, 1.0))
        prior = parse_prior("gamma:alpha=1,beta=0.5", 2)
        assert isinstance(prior, GammaPrior)
        assert prior.alpha == (1.0, 1.0)
        assert prior.beta == (0.5, 0.5)

    def test_constant(self) -> None:
        prior = parse_prior("constant", 3)
        assert isinstance(prior, FPrior)
        assert prior.is_constant

    def test_shift_point(self) -> None:
        prior = parse_prior("shift-point:alpha=0.5,eta=1,epsilon=1e-6", 3)
        assert prior.family == families.ShiftPoint(alpha=0.5, eta=1.0)
        assert prior.epsilon == 1e-6

    def test_vectors_broadcast_or_match(self) -> None:
        assert parse_prior("point:alpha=0.5,center=2", 3).family.center == (2.0, 2.0, 2.0)
        assert parse_prior("sym-point:alpha=0.5,center=2,1,0", 3).family.center == (2.0, 1.0, 0.0)
        assert parse_prior("power:beta=0.5,1,2", 3).beta == (0.5, 1.0, 2.0)

    def test_coord_subspace_indices_are_one_based(self) -> None:
        prior = parse_prior("coord-subspace:alpha=0.5,include=1,2,3", 4)
        assert prior.family.include == (0, 1, 2)

    def test_mix_coord_subspace(self) -> None:
        prior = parse_prior("mix-coord-subspace:alpha=0.5", 4)
        assert prior.family == families.mix_coord_subspace(4, 0.5)

    def test_sum(self) -> None:
        prior = parse_prior(
            "sum:(coord-subspace:alpha=0.5,include=1,2,3) + (coord-subspace:alpha=0.5,include=1,2,4)", 4
        )
        assert isinstance(prior.family, families.Sum)
        assert [part.include for part in prior.family.parts] == [(0, 1, 2), (0, 1, 3)]
        assert prior.is_quadrature

    @parameterized.expand(
        [
            ("shift-point:alpha=max", 3, 0.5),
            ("shift-point:alpha=max,beta=1", 3, 2.0),
            ("sym-point:alpha=max", 5, 1.5),
            ("coord-subspace:alpha=max,include=1,2,3,4", 5, 1.0),
            ("sym-subspace:alpha=max,span=1,1,1,1", 4, 0.5),
            ("mix-coord-subspace:alpha=max", 5, 1.0),
        ]
    )
    def test_alpha_max(self, text: str, d: int, expected: float) -> None:
        prior = parse_prior(text, d)
        alpha = prior.family.parts[0].alpha if isinstance(prior.family, families.Sum) else prior.family.alpha
        assert alpha == pytest.approx(expected)

    def test_span_builds_orthonormal_complement(self) -> None:
        prior = parse_prior("sym-subspace:alpha=0.5,span=1,1,1,1", 4)
        basis = prior.family.basis
        assert basis.shape == (3, 4)
        np.testing.assert_allclose(basis @ basis.T, np.eye(3), atol=1e-12)
        np.testing.assert_allclose(basis @ np.ones(4), 0.0, atol=1e-12)

    def test_vperp_from_file(self, tmp_path) -> None:
        path = tmp_path / "basis.csv"
        path.write_text("1,0,0,0\n0,1,0,0\n0,0,1,0\n")
        prior = parse_prior(f"sym-subspace:alpha=0.5,vperp=@{path}", 4)
        assert prior.family.coordinate_axes() == (0, 1, 2)
        assert prior.is_quadrature

    def test_vperp_missing_file(self, tmp_path) -> None:
        with pytest.raises(OSError):
            parse_prior(f"sym-subspace:alpha=0.5,vperp=@{tmp_path / 'missing.csv'}", 4)


class TestGrammarErrors:
    @parameterized.expand(
        [
            ("bogus", 3, 0),
            ("shift-point:alpha=0.5,bogus=1", 3, 22),
            ("shift-point:alpha=abc", 3, 12),
            ("shift-point;alpha=0.5", 3, 11),
            ("coord-subspace:alpha=0.5,include=1,5", 4, 25),
            ("point:alpha=0.5,center=2,2", 3, 16),
            ("sum:(jeffreys)", 3, 5),
            ("sum:(shift-point:alpha=0.5", 3, 4),
            ("shift-point:alpha=0.5,,eta=1", 3, 22),
            ("shift-point:alpha=0.5,alpha=0.4", 3, 22),
        ]
    )
    def test_error_position(self, text: str, d: int, position: int) -> None:
        with pytest.raises(GrammarError) as info:
            parse_prior(text, d)
        assert info.value.position == position
        assert f"at position {position}" in str(info.value)

    def test_missing_alpha(self) -> None:
        with pytest.raises(GrammarError, match="alpha"):
            parse_prior("shift-point:eta=1", 3)

    def test_sum_parts_share_beta(self) -> None:
        with pytest.raises(GrammarError, match="share"):
            parse_prior("sum:(shift-point:alpha=0.5)+(shift-point:alpha=0.5,beta=1)", 3)

    def test_alpha_max_undefined(self) -> None:
        with pytest.raises(GrammarError, match="undefined"):
            parse_prior("point:alpha=max,center=2", 3)

    def test_hypotheses_are_enforced(self) -> None:
        with pytest.raises(HypothesisError, match="Proposition 1"):
            parse_prior("shift-point:alpha=2", 3)
        with pytest.raises(HypothesisError):
            parse_prior("shift-point:alpha=max", 2)


def test_parse_priors_keeps_labels() -> None:
    parsed = parse_priors("jeffreys; shift-point:alpha=0.5,eta=1", 3)
    assert [label for label, _ in parsed] == ["jeffreys", "shift-point:alpha=0.5,eta=1"]


def test_parse_priors_offsets_positions() -> None:
    with pytest.raises(GrammarError) as info:
        parse_priors("jeffreys;bogus", 3)
    assert info.value.position == 9


def test_complement_basis_of_axis() -> None:
    basis = complement_basis(np.array([1.0, 0.0, 0.0]), 3)
    assert basis.shape == (2, 3)
    np.testing.assert_allclose(basis[:, 0], 0.0, atol=1e-12)
