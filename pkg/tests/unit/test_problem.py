import numpy as np
import pytest
from parameterized import parameterized

from poshrink.core import exceptions
from poshrink.core.problem import (
    CountVector,
    ProblemSpec,
    ThetaPoint,
    as_counts,
    as_vector,
    derive_gamma,
    lambda_from_theta,
    theta_from_lambda,
)


@parameterized.expand(
    [
        ("equal", 1.0, 1.0, [0.5]),
        ("vector", [1.0, 2.0], [1.0, 2.0], [0.5, 0.25]),
        ("long_prediction", [2.0], [6.0], [0.375]),
    ]
)
def test_derive_gamma(_: str, r, s, expected) -> None:
    np.testing.assert_allclose(derive_gamma(r, s), expected, rtol=1e-15)


def test_derive_gamma_names_offending_index() -> None:
    with pytest.raises(exceptions.InvalidArgumentError, match="index 1"):
        derive_gamma([1.0, 0.0, 1.0], 1.0)


def test_derive_gamma_rejects_length_mismatch() -> None:
    with pytest.raises(exceptions.InvalidArgumentError):
        derive_gamma([1.0, 1.0], [1.0, 1.0, 1.0])


def test_theta_lambda_round_trip() -> None:
    gamma = derive_gamma([1.0, 2.0, 4.0], [1.0, 1.0, 1.0])
    lam = np.array([0.4, 3.0, 12.5])
    theta = theta_from_lambda(lam, gamma)
    np.testing.assert_allclose(theta**2 * gamma, lam, rtol=1e-14)
    np.testing.assert_allclose(lambda_from_theta(theta, gamma), lam, rtol=1e-14)


def test_theta_from_lambda_rejects_negative_rates() -> None:
    with pytest.raises(exceptions.InvalidArgumentError):
        theta_from_lambda([-1.0], [0.5])


def test_as_vector_broadcasts_scalars() -> None:
    np.testing.assert_array_equal(as_vector(2.0, d=3), [2.0, 2.0, 2.0])
    with pytest.raises(exceptions.InvalidArgumentError, match="expected 3"):
        as_vector([1.0, 2.0], d=3, name="r")


class TestProblemSpec:
    def test_from_durations_broadcasts(self) -> None:
        spec = ProblemSpec.from_durations(1.0, [1.0, 2.0, 3.0])
        assert spec.d == 3
        assert spec.r == (1.0, 1.0, 1.0)
        np.testing.assert_allclose(spec.gamma, [0.5, 2.0 / 3.0, 0.75])

    def test_dimension_from_argument(self) -> None:
        spec = ProblemSpec.from_durations(1.0, 1.0, d=4)
        assert spec.d == 4
        assert spec.has_equal_durations()

    def test_unit_theta_scale(self) -> None:
        spec = ProblemSpec.from_durations(1.0, 1.0, d=2, theta_scale="unit")
        np.testing.assert_array_equal(spec.theta_gamma, np.ones(2))
        np.testing.assert_allclose(spec.gamma, [0.5, 0.5])
        assert spec.theta([4.0, 9.0]).theta == (2.0, 3.0)

    def test_gamma_theta_scale(self) -> None:
        spec = ProblemSpec.from_durations(1.0, 1.0, d=1)
        np.testing.assert_allclose(spec.theta([2.0]).as_array(), [2.0])

    def test_rejects_unknown_theta_scale(self) -> None:
        with pytest.raises(exceptions.InvalidArgumentError, match="theta_scale"):
            ProblemSpec.from_durations(1.0, 1.0, d=1, theta_scale="log")

    def test_rejects_nonpositive_duration(self) -> None:
        with pytest.raises(exceptions.InvalidArgumentError, match="index 2"):
            ProblemSpec(d=3, r=(1.0, 1.0, -1.0), s=(1.0, 1.0, 1.0))

    def test_rejects_wrong_length(self) -> None:
        with pytest.raises(exceptions.InvalidArgumentError, match="expected d=3"):
            ProblemSpec(d=3, r=(1.0, 1.0), s=(1.0, 1.0, 1.0))

    def test_is_immutable(self) -> None:
        spec = ProblemSpec.from_durations(1.0, 1.0, d=2)
        with pytest.raises(TypeError):
            spec.d = 3


def test_count_vector_rejects_negative() -> None:
    with pytest.raises(exceptions.InvalidArgumentError, match="index 1"):
        CountVector(z=(0, -1))


def test_count_vector_dimension_check() -> None:
    spec = ProblemSpec.from_durations(1.0, 1.0, d=3)
    assert CountVector(z=(1, 2, 3)).check_dimension(spec).d == 3
    with pytest.raises(exceptions.InvalidArgumentError):
        CountVector(z=(1, 2)).check_dimension(spec)


def test_theta_point_rejects_negative() -> None:
    with pytest.raises(exceptions.InvalidArgumentError):
        ThetaPoint(theta=(1.0, -0.5))


@parameterized.expand(
    [
        ("fractional", [1.5, 2.0]),
        ("negative", [1, -2]),
        ("not_finite", [np.nan, 1.0]),
    ]
)
def test_as_counts_rejects(_: str, values) -> None:
    with pytest.raises(exceptions.InvalidArgumentError):
        as_counts(values)


def test_as_counts_accepts_integral_floats() -> None:
    counts = as_counts([2.0, 0.0, 7.0], d=3)
    assert counts.dtype == np.int64
    np.testing.assert_array_equal(counts, [2, 0, 7])
