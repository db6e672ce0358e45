"""
Problem specification for simultaneous prediction of ``d`` independent Poisson processes: observation durations,
prediction durations, derived weights and the parameter transforms between rates and the shrinkage coordinates.
"""

import typing as t

import numpy as np
from pydantic import BaseModel, Field, validator

from poshrink.core import exceptions

THETA_SCALES = ("gamma", "unit")

ArrayLike = t.Union[float, int, t.Sequence[float], np.ndarray]


def as_vector(values: ArrayLike, d: t.Optional[int] = None, name: str = "value") -> np.ndarray:
    """
    Convert a scalar or a sequence into a float vector, broadcasting scalars to length ``d``.

    :param values: Scalar or sequence.
    :param d: Expected length. Scalars are broadcast to it, sequences are checked against it.
    :param name: Argument name used in error messages.

    :return: One-dimensional float array.
    """
    array = np.atleast_1d(np.asarray(values, dtype=float))
    if array.ndim != 1:
        raise exceptions.InvalidArgumentError(f"`{name}` must be a vector, got shape {array.shape}")
    if d is not None:
        if array.size == 1 and d != 1:
            array = np.full(d, array[0])
        elif array.size != d:
            raise exceptions.InvalidArgumentError(f"`{name}` has length {array.size}, expected {d}")
    return array


def derive_gamma(r: ArrayLike, s: ArrayLike) -> np.ndarray:
    """
    Compute the weights ``gamma_i = 1/r_i - 1/(r_i + s_i)``.

    :param r: Observation durations.
    :param s: Prediction durations.

    :return: Vector of weights, each strictly inside ``(0, 1/r_i)``.
    """
    r_vec = as_vector(r, name="r")
    s_vec = as_vector(s, d=r_vec.size, name="s")
    for name, vec in (("r", r_vec), ("s", s_vec)):
        bad = np.flatnonzero(~(vec > 0) | ~np.isfinite(vec))
        if bad.size:
            raise exceptions.InvalidArgumentError(
                f"Duration `{name}` must be positive and finite, got {vec[bad[0]]} at index {bad[0]}"
            )
    return 1.0 / r_vec - 1.0 / (r_vec + s_vec)


def theta_from_lambda(lam: ArrayLike, gamma: ArrayLike) -> np.ndarray:
    """
    Map Poisson rates to shrinkage coordinates, ``theta_i = sqrt(lambda_i / gamma_i)``.
    Works row-wise on ``(n, d)`` arrays as well.

    :param lam: Nonnegative rates.
    :param gamma: Positive divisors.

    :return: Nonnegative coordinates with the shape of ``lam``.
    """
    lam_arr = np.asarray(lam, dtype=float)
    gamma_arr = np.asarray(gamma, dtype=float)
    if np.any(lam_arr < 0):
        raise exceptions.InvalidArgumentError("Rates must be nonnegative")
    if np.any(gamma_arr <= 0):
        raise exceptions.InvalidArgumentError("Divisors `gamma` must be positive")
    return np.sqrt(lam_arr / gamma_arr)


def lambda_from_theta(theta: ArrayLike, gamma: ArrayLike) -> np.ndarray:
    theta_arr = np.asarray(theta, dtype=float)
    if np.any(theta_arr < 0):
        raise exceptions.InvalidArgumentError("Shrinkage coordinates must be nonnegative")
    return theta_arr**2 * np.asarray(gamma, dtype=float)


class ProblemSpec(BaseModel):
    """
    Dimensions and durations of a prediction problem. ``gamma`` is always recomputed from ``r`` and ``s``.
    ``theta_scale`` selects the divisor used by the rate to shrinkage-coordinate transform: ``gamma`` divides by
    the derived weights, ``unit`` divides by one.
    """

    d: int = Field(gt=0, example=3)
    r: t.Tuple[float, ...] = Field(example=[1.0, 1.0, 1.0])
    s: t.Tuple[float, ...] = Field(example=[1.0, 1.0, 1.0])
    theta_scale: str = Field(default="gamma", example="gamma")

    class Config:
        allow_mutation = False

    @validator("r", "s")
    def _check_durations(cls, value, values, field):
        d = values.get("d")
        if d is not None and len(value) != d:
            raise exceptions.InvalidArgumentError(f"`{field.name}` has length {len(value)}, expected d={d}")
        for index, duration in enumerate(value):
            if not duration > 0 or not np.isfinite(duration):
                raise exceptions.InvalidArgumentError(
                    f"Duration `{field.name}` must be positive and finite, got {duration} at index {index}"
                )
        return value

    @validator("theta_scale")
    def _check_theta_scale(cls, value):
        if value not in THETA_SCALES:
            raise exceptions.InvalidArgumentError(f"`theta_scale` must be one of {THETA_SCALES}, got {value!r}")
        return value

    @classmethod
    def from_durations(
        cls, r: ArrayLike, s: ArrayLike, d: t.Optional[int] = None, theta_scale: str = "gamma"
    ) -> "ProblemSpec":
        """
        Build a spec from scalars or vectors. Scalars are broadcast to the dimension of the other argument or to
        ``d`` when given.
        """
        if d is None:
            d = max(np.atleast_1d(r).size, np.atleast_1d(s).size)
        r_vec = as_vector(r, d=d, name="r")
        s_vec = as_vector(s, d=d, name="s")
        return cls(d=d, r=tuple(r_vec.tolist()), s=tuple(s_vec.tolist()), theta_scale=theta_scale)

    @property
    def r_array(self) -> np.ndarray:
        return np.asarray(self.r, dtype=float)

    @property
    def s_array(self) -> np.ndarray:
        return np.asarray(self.s, dtype=float)

    @property
    def gamma(self) -> np.ndarray:
        return derive_gamma(self.r, self.s)

    @property
    def theta_gamma(self) -> np.ndarray:
        if self.theta_scale == "unit":
            return np.ones(self.d)
        return self.gamma

    def theta(self, lam: ArrayLike) -> "ThetaPoint":
        lam_vec = as_vector(lam, d=self.d, name="lambda")
        return ThetaPoint(theta=tuple(theta_from_lambda(lam_vec, self.theta_gamma).tolist()))

    def has_equal_durations(self) -> bool:
        return len(set(self.r)) == 1 and len(set(self.s)) == 1


class CountVector(BaseModel):
    z: t.Tuple[int, ...] = Field(example=[1, 0, 2])

    class Config:
        allow_mutation = False

    @validator("z")
    def _check_nonnegative(cls, value):
        for index, count in enumerate(value):
            if count < 0:
                raise exceptions.InvalidArgumentError(f"Counts must be nonnegative, got {count} at index {index}")
        return value

    @property
    def d(self) -> int:
        return len(self.z)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.z, dtype=np.int64)

    def check_dimension(self, spec: ProblemSpec) -> "CountVector":
        if self.d != spec.d:
            raise exceptions.InvalidArgumentError(f"Count vector has length {self.d}, expected d={spec.d}")
        return self


class ThetaPoint(BaseModel):
    theta: t.Tuple[float, ...] = Field(example=[0.89, 0.89, 0.89])

    class Config:
        allow_mutation = False

    @validator("theta")
    def _check_orthant(cls, value):
        for index, coordinate in enumerate(value):
            if coordinate < 0:
                raise exceptions.InvalidArgumentError(
                    f"Shrinkage coordinates lie in the nonnegative orthant, got {coordinate} at index {index}"
                )
        return value

    def as_array(self) -> np.ndarray:
        return np.asarray(self.theta, dtype=float)


def as_counts(z: t.Union[CountVector, ArrayLike], d: t.Optional[int] = None, name: str = "z") -> np.ndarray:
    """
    Normalize a count vector given as a model, sequence or array into an int64 array.

    :param z: Counts.
    :param d: Expected dimension.
    :param name: Argument name used in error messages.

    :return: Int64 array of nonnegative counts.
    """
    if isinstance(z, CountVector):
        array = z.as_array()
    else:
        raw = np.atleast_1d(np.asarray(z))
        if raw.dtype.kind == "f":
            if not np.all(np.isfinite(raw)) or np.any(raw != np.round(raw)):
                raise exceptions.InvalidArgumentError(f"`{name}` must hold integer counts")
        array = raw.astype(np.int64)
    if np.any(array < 0):
        index = int(np.flatnonzero(array < 0)[0])
        raise exceptions.InvalidArgumentError(f"`{name}` must be nonnegative, got {array[index]} at index {index}")
    if d is not None and array.shape[-1] != d:
        raise exceptions.InvalidArgumentError(f"`{name}` has length {array.shape[-1]}, expected d={d}")
    return array
