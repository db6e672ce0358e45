import math

import numpy as np
import pytest
from parameterized import parameterized

from poshrink.core import exceptions
from poshrink.priors import families
from poshrink.priors.differential import symmetrized_value

THETA = np.array([[1.0, 0.5, 3.0], [0.2, 2.0, 2.0], [4.0, 0.1, 0.7]])


def test_sign_matrix() -> None:
    signs = families.sign_matrix(3)
    assert signs.shape == (8, 3)
    np.testing.assert_array_equal(signs[0], [1, 1, 1])
    assert len({tuple(row) for row in signs.tolist()}) == 8


def test_shift_point_value() -> None:
    family = families.ShiftPoint(alpha=0.5, eta=1.0)
    assert family.log_f(np.ones(3))[0] == pytest.approx(-0.5 * math.log(4.0))


def test_constant_is_zero() -> None:
    np.testing.assert_array_equal(families.Constant().log_f(THETA), np.zeros(3))


def test_point_at_center_is_singular() -> None:
    family = families.Point(alpha=0.5, center=(2.0, 2.0, 2.0))
    assert family.log_f(np.array([2.0, 2.0, 2.0]))[0] == np.inf
    assert np.isfinite(family.log_f(np.array([2.0, 2.0, 2.0]), epsilon=1e-6)[0])


@parameterized.expand(
    [
        ("sym_point_full_center", families.SymPoint(alpha=0.5, center=(2.0, 2.0, 2.0))),
        ("sym_point_partial_center", families.SymPoint(alpha=0.5, center=(2.0, 0.0, 0.0))),
        ("sym_point_origin", families.SymPoint(alpha=0.5, center=(0.0, 0.0, 0.0))),
        (
            "sym_subspace_dense",
            families.SymSubspace(alpha=0.5, vperp=((1 / math.sqrt(2), -1 / math.sqrt(2), 0.0),)),
        ),
        ("sym_subspace_axes", families.SymSubspace(alpha=0.5, vperp=((1.0, 0.0, 0.0), (0.0, 0.0, 1.0)))),
    ]
)
def test_symmetrized_families_sum_reflections(_: str, family: families.Family) -> None:
    for row in THETA:
        assert family.log_f(row)[0] == pytest.approx(symmetrized_value(family, row), rel=1e-12)


@parameterized.expand(
    [
        ("shift_point", families.ShiftPoint(alpha=0.5, eta=1.0)),
        ("sym_point", families.SymPoint(alpha=0.5, center=(2.0, 1.0, 0.0))),
        ("sym_subspace", families.SymSubspace(alpha=0.5, vperp=((0.6, 0.8, 0.0),))),
        ("coord_subspace", families.CoordSubspace(alpha=0.5, include=(0, 2))),
    ]
)
def test_sign_symmetry(_: str, family: families.Family) -> None:
    signs = families.sign_matrix(3)
    for row in THETA:
        values = family.log_f(signs * row)
        np.testing.assert_allclose(values, values[0], rtol=1e-12)


def test_sum_is_log_sum_exp_of_parts() -> None:
    parts = families.leave_one_out_subspaces(3, 0.5)
    total = families.Sum(parts=tuple(parts)).log_f(THETA)
    expected = np.logaddexp(np.logaddexp(parts[0].log_f(THETA), parts[1].log_f(THETA)), parts[2].log_f(THETA))
    np.testing.assert_allclose(total, expected, rtol=1e-12)


class TestQuadraticParts:
    def test_shift_point(self) -> None:
        parts = families.ShiftPoint(alpha=0.5, eta=1.0).quadratic_parts(3, epsilon=0.25)
        assert parts == [families.QuadraticPart(0.0, 0.5, 1.25, (True, True, True))]

    def test_sym_point_at_origin_carries_reflections(self) -> None:
        parts = families.SymPoint(alpha=0.5, center=(0.0, 0.0)).quadratic_parts(2)
        assert parts[0].log_weight == pytest.approx(2 * math.log(2.0))

    def test_shifted_center_has_no_separable_form(self) -> None:
        assert families.SymPoint(alpha=0.5, center=(2.0, 2.0)).quadratic_parts(2) is None
        assert families.Point(alpha=0.5, center=(2.0, 2.0)).quadratic_parts(2) is None

    def test_axis_subspace(self) -> None:
        family = families.SymSubspace(alpha=0.5, vperp=((0.0, -1.0, 0.0), (0.0, 0.0, 1.0)))
        assert family.coordinate_axes() == (1, 2)
        assert family.quadratic_parts(3)[0].mask == (False, True, True)

    def test_dense_subspace(self) -> None:
        family = families.SymSubspace(alpha=0.5, vperp=((0.6, 0.8, 0.0),))
        assert family.coordinate_axes() is None
        assert family.quadratic_parts(3) is None

    def test_sum_concatenates(self) -> None:
        parts = families.mix_coord_subspace(4, 0.5).quadratic_parts(4)
        assert len(parts) == 4
        assert parts[0].mask == (False, True, True, True)


@parameterized.expand(
    [
        ("shift_point", families.ShiftPoint(alpha=0.5, eta=0.0), 0.5, "Proposition 1"),
        ("sym_point", families.SymPoint(alpha=0.5, center=(1.0,) * 5), 1.5, "Proposition 2"),
        ("coord_subspace", families.CoordSubspace(alpha=0.5, include=(0, 1, 2, 3)), 1.0, "Proposition 3"),
    ]
)
def test_alpha_bounds(_: str, family: families.Family, bound: float, proposition: str) -> None:
    d = 5 if isinstance(family, families.SymPoint) else 3
    assert family.alpha_bound(d, np.full(d, 0.5)) == (pytest.approx(bound), proposition)


def test_unsymmetrized_shifted_point_is_uncovered() -> None:
    assert families.Point(alpha=0.5, center=(2.0, 2.0, 2.0)).alpha_bound(3, np.full(3, 0.5)) is None


def test_enumeration_limit() -> None:
    family = families.SymPoint(alpha=0.5, center=(1.0,) * 26)
    with pytest.raises(exceptions.UnsupportedDimensionError):
        family.log_f(np.ones(26))


def test_passive_coordinates_are_not_enumerated() -> None:
    center = (1.0,) + (0.0,) * 39
    family = families.SymPoint(alpha=0.5, center=center)
    theta = np.ones(40)
    expected = 39 * math.log(2.0) + np.logaddexp(-0.5 * math.log(39.0), -0.5 * math.log(43.0))
    assert family.log_f(theta)[0] == pytest.approx(expected, rel=1e-12)


@parameterized.expand(
    [
        ("non_orthonormal", lambda: families.SymSubspace(alpha=0.5, vperp=((1.0, 1.0, 0.0),))),
        ("ragged", lambda: families.SymSubspace(alpha=0.5, vperp=((1.0, 0.0), (0.0, 1.0, 0.0)))),
        ("negative_center", lambda: families.SymPoint(alpha=0.5, center=(1.0, -1.0))),
        ("duplicate_include", lambda: families.CoordSubspace(alpha=0.5, include=(1, 1))),
        ("empty_sum", lambda: families.Sum(parts=())),
    ]
)
def test_invalid_families(_: str, build) -> None:
    with pytest.raises(exceptions.InvalidArgumentError):
        build()


def test_include_is_sorted() -> None:
    assert families.CoordSubspace(alpha=0.5, include=(2, 0)).include == (0, 2)


def test_leave_one_out() -> None:
    parts = families.leave_one_out_subspaces(4, 0.5)
    assert [p.include for p in parts] == [(1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2)]
