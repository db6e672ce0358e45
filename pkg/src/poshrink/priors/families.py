"""
Shrinkage factors ``f`` on the parameter space. Every family evaluates ``log f`` on a batch of points ``theta`` of
shape ``(n, d)``; the smoothing constant ``epsilon`` is added inside the quadratic form of singular families.
Symmetrized families sum their base function over the sign reflections of ``theta``; coordinates that the base
function sees only through ``theta_i**2`` are not enumerated and contribute a factor of two each.
"""

import typing as t

import numpy as np
from pydantic import BaseModel, Field, validator
from scipy import special

from poshrink import settings
from poshrink.core import exceptions

LOG2 = float(np.log(2.0))


class QuadraticPart(t.NamedTuple):
    """
    One term ``weight * (sum_{i in mask} theta_i**2 + eta)**(-alpha)`` of a separable family.
    """

    log_weight: float
    alpha: float
    eta: float
    mask: t.Tuple[bool, ...]


def as_rows(theta: t.Union[t.Sequence[float], np.ndarray]) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return theta[None, :] if theta.ndim == 1 else theta


def sign_matrix(k: int) -> np.ndarray:
    """
    All ``2**k`` sign vectors as rows, the first one being all ``+1``.
    """
    return 1 - 2 * ((np.arange(2**k)[:, None] >> np.arange(k)) & 1)


def check_enumeration(k: int) -> None:
    if k > settings.SYMMETRIZATION_MAX_DIM:
        raise exceptions.UnsupportedDimensionError(
            f"Sign symmetrization over {k} coordinates exceeds the limit of {settings.SYMMETRIZATION_MAX_DIM}; "
            "use the sign-symmetric `coord-subspace` or `shift-point` families instead"
        )


def _neg_power_log(quadratic: np.ndarray, alpha: float) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return -alpha * np.log(quadratic)


class Family(BaseModel):
    class Config:
        allow_mutation = False
        extra = "forbid"

    def log_f(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        raise NotImplementedError

    def log_h(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        """
        Log of the unsymmetrized base function. Equals :meth:`log_f` for families that are not symmetrized.
        """
        return self.log_f(theta, epsilon)

    def quadratic_parts(self, d: int, epsilon: float = 0.0) -> t.Optional[t.List[QuadraticPart]]:
        """
        Decomposition into separable quadratic-form powers, or ``None`` when the family has none.
        """
        return None

    def alpha_bound(self, d: int, beta: np.ndarray) -> t.Optional[t.Tuple[float, str]]:
        """
        Largest ``alpha`` allowed by the proposition that certifies this family, with the proposition's name.
        """
        return None

    def check_dimension(self, d: int) -> None:
        pass

    @property
    def is_sign_symmetric(self) -> bool:
        return True

    @property
    def label(self) -> str:
        return self.kind


class Constant(Family):
    kind: t.Literal["constant"] = "constant"

    def log_f(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        return np.zeros(as_rows(theta).shape[0])

    def quadratic_parts(self, d: int, epsilon: float = 0.0) -> t.Optional[t.List[QuadraticPart]]:
        return [QuadraticPart(0.0, 0.0, 0.0, (False,) * d)]


class ShiftPoint(Family):
    """
    ``f(theta) = (|theta|**2 + eta)**(-alpha)``.
    """

    kind: t.Literal["shift-point"] = "shift-point"
    alpha: float = Field(gt=0, example=0.5)
    eta: float = Field(ge=0, example=1.0)

    def log_f(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        theta = as_rows(theta)
        return _neg_power_log((theta**2).sum(axis=1) + self.eta + epsilon, self.alpha)

    def quadratic_parts(self, d: int, epsilon: float = 0.0) -> t.Optional[t.List[QuadraticPart]]:
        return [QuadraticPart(0.0, self.alpha, self.eta + epsilon, (True,) * d)]

    def alpha_bound(self, d: int, beta: np.ndarray) -> t.Optional[t.Tuple[float, str]]:
        return float(np.sum(beta)) - 1.0, "Proposition 1"


class Point(Family):
    """
    Unsymmetrized ``f(theta) = (|theta - center|**2)**(-alpha)``.
    """

    kind: t.Literal["point"] = "point"
    alpha: float = Field(gt=0, example=0.5)
    center: t.Tuple[float, ...] = Field(example=[2.0, 2.0, 2.0])

    def log_f(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        theta = as_rows(theta)
        return _neg_power_log(((theta - np.asarray(self.center)) ** 2).sum(axis=1) + epsilon, self.alpha)

    def quadratic_parts(self, d: int, epsilon: float = 0.0) -> t.Optional[t.List[QuadraticPart]]:
        if any(self.center):
            return None
        return [QuadraticPart(0.0, self.alpha, epsilon, (True,) * d)]

    def alpha_bound(self, d: int, beta: np.ndarray) -> t.Optional[t.Tuple[float, str]]:
        if any(self.center):
            return None
        return float(np.sum(beta)) - 1.0, "Proposition 1"

    def check_dimension(self, d: int) -> None:
        if len(self.center) != d:
            raise exceptions.InvalidArgumentError(f"`center` has length {len(self.center)}, expected d={d}")

    @property
    def is_sign_symmetric(self) -> bool:
        return not any(self.center)


class SymPoint(Family):
    """
    ``f(theta) = sum over sign vectors a of (|a * theta - center|**2)**(-alpha)``.
    """

    kind: t.Literal["sym-point"] = "sym-point"
    alpha: float = Field(gt=0, example=0.5)
    center: t.Tuple[float, ...] = Field(example=[2.0, 2.0, 2.0])

    @validator("center")
    def _check_center(cls, value):
        if any(c < 0 for c in value):
            raise exceptions.InvalidArgumentError(f"`center` entries must be nonnegative, got {list(value)}")
        return value

    def log_f(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        theta = as_rows(theta)
        center = np.asarray(self.center)
        active = np.flatnonzero(center != 0)
        passive = np.flatnonzero(center == 0)
        check_enumeration(active.size)
        passive_sq = (theta[:, passive] ** 2).sum(axis=1) + epsilon
        total = np.full(theta.shape[0], -np.inf)
        for signs in sign_matrix(active.size):
            quadratic = passive_sq + ((signs * theta[:, active] - center[active]) ** 2).sum(axis=1)
            total = np.logaddexp(total, _neg_power_log(quadratic, self.alpha))
        return total + passive.size * LOG2

    def log_h(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        return Point(alpha=self.alpha, center=self.center).log_f(theta, epsilon)

    def quadratic_parts(self, d: int, epsilon: float = 0.0) -> t.Optional[t.List[QuadraticPart]]:
        if any(self.center):
            return None
        return [QuadraticPart(d * LOG2, self.alpha, epsilon, (True,) * d)]

    def alpha_bound(self, d: int, beta: np.ndarray) -> t.Optional[t.Tuple[float, str]]:
        return (d - 2) / 2, "Proposition 2"

    def check_dimension(self, d: int) -> None:
        if len(self.center) != d:
            raise exceptions.InvalidArgumentError(f"`center` has length {len(self.center)}, expected d={d}")


class SymSubspace(Family):
    """
    ``f(theta) = sum over sign vectors a of (dist(a * theta, V)**2)**(-alpha)`` where the rows of ``vperp`` are an
    orthonormal basis of the orthogonal complement of ``V``.
    """

    kind: t.Literal["sym-subspace"] = "sym-subspace"
    alpha: float = Field(gt=0, example=0.5)
    vperp: t.Tuple[t.Tuple[float, ...], ...]

    @validator("vperp")
    def _check_basis(cls, value):
        if len(value) == 0 or len({len(row) for row in value}) != 1:
            raise exceptions.InvalidArgumentError("`vperp` must be a non-empty list of equally long vectors")
        basis = np.asarray(value, dtype=float)
        deviation = np.abs(basis @ basis.T - np.eye(basis.shape[0])).max()
        if deviation > settings.ORTHONORMAL_TOL:
            raise exceptions.InvalidArgumentError(
                f"`vperp` rows must be orthonormal within {settings.ORTHONORMAL_TOL}, deviation is {deviation:.3g}"
            )
        return value

    @property
    def basis(self) -> np.ndarray:
        return np.asarray(self.vperp, dtype=float)

    def _active(self) -> np.ndarray:
        return np.flatnonzero(np.any(self.basis != 0, axis=0))

    def log_f(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        theta = as_rows(theta)
        basis = self.basis
        active = self._active()
        check_enumeration(active.size)
        total = np.full(theta.shape[0], -np.inf)
        for signs in sign_matrix(active.size):
            projected = (signs * theta[:, active]) @ basis[:, active].T
            total = np.logaddexp(total, _neg_power_log((projected**2).sum(axis=1) + epsilon, self.alpha))
        return total + (theta.shape[1] - active.size) * LOG2

    def log_h(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        projected = as_rows(theta) @ self.basis.T
        return _neg_power_log((projected**2).sum(axis=1) + epsilon, self.alpha)

    def coordinate_axes(self) -> t.Optional[t.Tuple[int, ...]]:
        """
        Coordinates spanned by ``vperp`` when every basis vector is a signed unit coordinate vector.
        """
        axes = []
        for row in self.basis:
            nonzero = np.flatnonzero(row)
            if nonzero.size != 1 or abs(abs(row[nonzero[0]]) - 1.0) > settings.ORTHONORMAL_TOL:
                return None
            axes.append(int(nonzero[0]))
        return tuple(axes)

    def quadratic_parts(self, d: int, epsilon: float = 0.0) -> t.Optional[t.List[QuadraticPart]]:
        axes = self.coordinate_axes()
        if axes is None:
            return None
        mask = tuple(i in axes for i in range(d))
        return [QuadraticPart(d * LOG2, self.alpha, epsilon, mask)]

    def alpha_bound(self, d: int, beta: np.ndarray) -> t.Optional[t.Tuple[float, str]]:
        return (len(self.vperp) - 2) / 2, "Proposition 3"

    def check_dimension(self, d: int) -> None:
        if len(self.vperp[0]) != d:
            raise exceptions.InvalidArgumentError(f"`vperp` vectors have length {len(self.vperp[0])}, expected d={d}")
        if len(self.vperp) > d:
            raise exceptions.InvalidArgumentError(f"`vperp` holds {len(self.vperp)} vectors, more than d={d}")


class CoordSubspace(Family):
    """
    ``f(theta) = (sum_{i in include} theta_i**2)**(-alpha)``, shrinking toward the subspace spanned by the
    remaining coordinate axes. ``include`` holds zero-based indices.
    """

    kind: t.Literal["coord-subspace"] = "coord-subspace"
    alpha: float = Field(gt=0, example=0.5)
    include: t.Tuple[int, ...] = Field(example=[0, 1, 2])

    @validator("include")
    def _check_include(cls, value):
        if len(value) == 0:
            raise exceptions.InvalidArgumentError("`include` must name at least one coordinate")
        if len(set(value)) != len(value) or min(value) < 0:
            raise exceptions.InvalidArgumentError(f"`include` must hold distinct nonnegative indices, got {value}")
        return tuple(sorted(value))

    def log_f(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        theta = as_rows(theta)
        return _neg_power_log((theta[:, list(self.include)] ** 2).sum(axis=1) + epsilon, self.alpha)

    def quadratic_parts(self, d: int, epsilon: float = 0.0) -> t.Optional[t.List[QuadraticPart]]:
        return [QuadraticPart(0.0, self.alpha, epsilon, tuple(i in self.include for i in range(d)))]

    def alpha_bound(self, d: int, beta: np.ndarray) -> t.Optional[t.Tuple[float, str]]:
        return (len(self.include) - 2) / 2, "Proposition 3"

    def check_dimension(self, d: int) -> None:
        if max(self.include) >= d:
            raise exceptions.InvalidArgumentError(f"`include` index {max(self.include)} is out of range for d={d}")


class Sum(Family):
    """
    Sum of shrinkage factors, evaluated with log-sum-exp.
    """

    kind: t.Literal["sum"] = "sum"
    parts: t.Tuple["FamilyType", ...]

    @validator("parts")
    def _check_parts(cls, value):
        if len(value) == 0:
            raise exceptions.InvalidArgumentError("A sum needs at least one part")
        return value

    def log_f(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        values = np.stack([part.log_f(theta, epsilon) for part in self.parts])
        return special.logsumexp(values, axis=0)

    def log_h(self, theta: np.ndarray, epsilon: float = 0.0) -> np.ndarray:
        values = np.stack([part.log_h(theta, epsilon) for part in self.parts])
        return special.logsumexp(values, axis=0)

    def quadratic_parts(self, d: int, epsilon: float = 0.0) -> t.Optional[t.List[QuadraticPart]]:
        parts = []
        for part in self.parts:
            decomposition = part.quadratic_parts(d, epsilon)
            if decomposition is None:
                return None
            parts.extend(decomposition)
        return parts

    def check_dimension(self, d: int) -> None:
        for part in self.parts:
            part.check_dimension(d)

    @property
    def is_sign_symmetric(self) -> bool:
        return all(part.is_sign_symmetric for part in self.parts)


FamilyType = t.Union[Constant, ShiftPoint, Point, SymPoint, SymSubspace, CoordSubspace, Sum]

Sum.update_forward_refs()


def leave_one_out_subspaces(d: int, alpha: float) -> t.List[CoordSubspace]:
    """
    The ``d`` coordinate-subspace families that each drop one coordinate.
    """
    return [CoordSubspace(alpha=alpha, include=tuple(j for j in range(d) if j != i)) for i in range(d)]


def mix_coord_subspace(d: int, alpha: float) -> Sum:
    return Sum(parts=tuple(leave_one_out_subspaces(d, alpha)))
