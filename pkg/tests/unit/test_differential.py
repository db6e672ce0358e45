import numpy as np
import pytest

from poshrink.core import exceptions
from poshrink.core.problem import ThetaPoint
from poshrink.priors import differential, families
from poshrink.priors.spec import FPrior


def radial_laplacian(power: float, d: int, radius: float) -> float:
    return power * (power + d - 2) * radius ** (power - 2)


class TestLaplacian:
    def test_harmonic_in_three_dimensions(self) -> None:
        family = families.ShiftPoint(alpha=0.5, eta=0.0)
        assert abs(differential.laplacian_fd(family, [1.0, 1.0, 1.0])) < 1e-5

    def test_superharmonic_below_the_bound(self) -> None:
        family = families.ShiftPoint(alpha=0.5, eta=0.0)
        expected = radial_laplacian(-1.0, 5, np.sqrt(5.0))
        assert expected < 0
        assert differential.laplacian_fd(family, np.ones(5)) == pytest.approx(expected, rel=1e-5)

    def test_subharmonic_above_the_bound(self) -> None:
        family = families.ShiftPoint(alpha=1.0, eta=0.0)
        value = differential.laplacian_fd(family, ThetaPoint(theta=(1.0, 1.0, 1.0)))
        assert value == pytest.approx(2.0 / 9.0, rel=1e-5)

    def test_symmetrized_reflections_stay_harmonic(self) -> None:
        family = families.SymPoint(alpha=0.5, center=(2.0, 2.0, 2.0))
        assert abs(differential.laplacian_fd(family, [1.0, 1.0, 1.0], symmetrized=True)) < 1e-4

    def test_singular_stencil(self) -> None:
        family = families.Point(alpha=0.5, center=(1.0, 1.0, 1.0))
        with pytest.raises(exceptions.SingularityError):
            differential.laplacian_fd(family, [1.0, 1.0, 1.0])

    def test_smoothing_removes_the_singularity(self) -> None:
        family = families.Point(alpha=0.5, center=(1.0, 1.0, 1.0))
        assert np.isfinite(differential.laplacian_fd(family, [1.0, 1.0, 1.0], epsilon=1.0))


class TestDivergence:
    def test_reduces_to_laplacian_at_half(self) -> None:
        family = families.ShiftPoint(alpha=0.5, eta=0.0)
        expected = radial_laplacian(-1.0, 5, np.sqrt(5.0))
        value = differential.divergence_condition_fd(family, np.ones(5), 0.5)
        assert value == pytest.approx(expected, rel=1e-3)

    def test_requires_interior_points(self) -> None:
        family = families.ShiftPoint(alpha=0.5, eta=1.0)
        with pytest.raises(exceptions.InvalidArgumentError):
            differential.divergence_condition_fd(family, [1.0, 1e-5, 1.0], 0.5)


class TestEvaluation:
    def test_eval_log_f(self) -> None:
        family = families.ShiftPoint(alpha=0.5, eta=1.0)
        assert differential.eval_log_f(family, [1.0, 1.0, 1.0]) == pytest.approx(-0.5 * np.log(4.0))

    def test_eval_log_f_uses_prior_epsilon(self) -> None:
        prior = FPrior.build(families.ShiftPoint(alpha=0.5, eta=0.0), 3, epsilon=1.0)
        assert differential.eval_log_f(prior, [1.0, 1.0, 1.0]) == pytest.approx(-0.5 * np.log(4.0))
        assert differential.eval_log_f(prior, [1.0, 1.0, 1.0], epsilon=0.0) == pytest.approx(-0.5 * np.log(3.0))

    def test_singular_point_is_infinite(self) -> None:
        assert differential.eval_log_f(families.ShiftPoint(alpha=0.5, eta=0.0), [0.0, 0.0, 0.0]) == np.inf

    def test_rejects_negative_coordinates(self) -> None:
        with pytest.raises(exceptions.InvalidArgumentError):
            differential.eval_log_f(families.ShiftPoint(alpha=0.5, eta=1.0), [1.0, -1.0, 1.0])

    def test_symmetrize_check_for_even_factors(self) -> None:
        family = families.ShiftPoint(alpha=0.5, eta=1.0)
        assert differential.symmetrize_check(family, [0.3, 1.2, 2.0]) == pytest.approx(8.0)

    def test_symmetrized_value_matches_family(self) -> None:
        family = families.SymPoint(alpha=0.5, center=(2.0, 1.0, 0.5))
        theta = np.array([0.4, 1.5, 2.5])
        assert differential.symmetrized_value(family, theta) == pytest.approx(family.log_f(theta)[0])


class TestBoundaryDerivative:
    def test_nonpositive_for_centered_factors(self) -> None:
        prior = FPrior.build(families.ShiftPoint(alpha=0.5, eta=1.0), 3)
        report = differential.boundary_derivative_fd(prior, 0, [0.5, 1.0, 1.0])
        assert report.status == "nonpositive"
        assert all(value < 0 for value in report.values)
        assert report.grid == [1e-2, 1e-3, 1e-4]

    def test_positive_toward_an_offset_center(self) -> None:
        prior = FPrior.build(families.Point(alpha=0.5, center=(2.0, 2.0, 2.0)), 3)
        report = differential.boundary_derivative_fd(prior, 0, [0.5, 1.0, 1.0])
        assert report.status == "positive"
        assert report.limit == pytest.approx(2.0 / 6.0**1.5, rel=1e-3)

    def test_rejects_bad_index(self) -> None:
        prior = FPrior.build(families.ShiftPoint(alpha=0.5, eta=1.0), 3)
        with pytest.raises(exceptions.InvalidArgumentError):
            differential.boundary_derivative_fd(prior, 3, [0.5, 1.0, 1.0])
