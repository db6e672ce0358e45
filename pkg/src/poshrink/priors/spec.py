"""
Prior specifications: the power prior, the gamma prior and shrinkage priors
``pi(lambda) = f(theta(lambda)) * prod lambda_i^(beta_i - 1)`` built from a :mod:`poshrink.priors.families` factor.
"""

import hashlib
import logging
import typing as t

import numpy as np
from pydantic import BaseModel, Field, validator

from poshrink import settings
from poshrink.core import exceptions as core_exc
from poshrink.priors import exceptions
from poshrink.priors.families import Constant, FamilyType, Sum

logger = logging.getLogger(__name__)


class _PriorModel(BaseModel):
    class Config:
        allow_mutation = False
        extra = "forbid"

    @validator("beta", check_fields=False)
    def _check_beta(cls, value):
        if len(value) == 0 or any(not b > 0 for b in value):
            raise core_exc.InvalidArgumentError(f"`beta` must be a non-empty vector of positive reals, got {value}")
        return value

    @property
    def d(self) -> int:
        return len(self.beta)

    @property
    def beta_array(self) -> np.ndarray:
        return np.asarray(self.beta, dtype=float)

    def digest(self) -> str:
        """
        Stable identifier of the prior, used as part of cache keys.
        """
        return hashlib.sha1(self.json(sort_keys=True).encode("utf-8")).hexdigest()


class PowerPrior(_PriorModel):
    kind: t.Literal["power"] = "power"
    beta: t.Tuple[float, ...] = Field(example=[0.5, 0.5, 0.5])

    @classmethod
    def jeffreys(cls, d: int) -> "PowerPrior":
        return cls(beta=(0.5,) * d)


class GammaPrior(_PriorModel):
    kind: t.Literal["gamma"] = "gamma"
    alpha: t.Tuple[float, ...] = Field(example=[1.0, 1.0, 1.0])
    beta: t.Tuple[float, ...] = Field(example=[0.5, 0.5, 0.5])

    @validator("alpha")
    def _check_alpha(cls, value):
        if any(not a >= 0 for a in value):
            raise core_exc.InvalidArgumentError(f"`alpha` must be nonnegative, got {value}")
        return value

    @validator("beta")
    def _check_lengths(cls, value, values):
        alpha = values.get("alpha")
        if alpha is not None and len(alpha) != len(value):
            raise core_exc.InvalidArgumentError(f"`alpha` and `beta` lengths differ: {len(alpha)} != {len(value)}")
        return value

    @property
    def alpha_array(self) -> np.ndarray:
        return np.asarray(self.alpha, dtype=float)


def check_hypotheses(family: FamilyType, d: int, beta: np.ndarray) -> None:
    """
    Raise :class:`HypothesisError` when ``family`` exceeds the ``alpha`` range of the proposition certifying it.
    Families without a certifying proposition pass unchecked.
    """
    if isinstance(family, Sum):
        for part in family.parts:
            check_hypotheses(part, d, beta)
        return
    bound = family.alpha_bound(d, beta)
    if bound is None:
        return
    limit, proposition = bound
    if family.alpha > limit + settings.HYPOTHESIS_TOL:
        raise exceptions.HypothesisError(
            f"alpha={family.alpha:g} exceeds {limit:g}, the bound of {proposition} for `{family.label}` at d={d}"
        )


class FPrior(_PriorModel):
    """
    Shrinkage prior. ``beta`` fixes the dimension; ``epsilon`` smooths singular factors.
    With ``enforce_hypotheses`` the factor must satisfy the ``alpha`` range of its proposition.
    """

    kind: t.Literal["f"] = "f"
    family: FamilyType = Field(default_factory=Constant)
    beta: t.Tuple[float, ...] = Field(example=[0.5, 0.5, 0.5])
    epsilon: float = Field(default=0.0, ge=0, example=0.0)
    enforce_hypotheses: bool = True

    @validator("enforce_hypotheses", always=True)
    def _check_family(cls, value, values):
        family, beta = values.get("family"), values.get("beta")
        if family is None or beta is None:
            return value
        family.check_dimension(len(beta))
        if value:
            check_hypotheses(family, len(beta), np.asarray(beta, dtype=float))
        return value

    @classmethod
    def build(
        cls,
        family: FamilyType,
        d: int,
        beta: t.Union[float, t.Sequence[float]] = 0.5,
        epsilon: float = 0.0,
        enforce_hypotheses: bool = True,
    ) -> "FPrior":
        beta_vec = np.broadcast_to(np.asarray(beta, dtype=float), (d,))
        return cls(
            family=family, beta=tuple(beta_vec.tolist()), epsilon=epsilon, enforce_hypotheses=enforce_hypotheses
        )

    def with_epsilon(self, epsilon: float) -> "FPrior":
        return self.copy(update={"epsilon": epsilon})

    def log_f(self, theta: np.ndarray) -> np.ndarray:
        return self.family.log_f(theta, self.epsilon)

    @property
    def is_constant(self) -> bool:
        return isinstance(self.family, Constant)

    @property
    def is_quadrature(self) -> bool:
        return self.family.quadratic_parts(self.d, self.epsilon) is not None


PriorSpec = t.Union[PowerPrior, GammaPrior, FPrior]


class PriorEnvelope(BaseModel):
    """
    Wrapper used to (de)serialize any prior specification.
    """

    prior: PriorSpec


def as_f_prior(prior: PriorSpec) -> FPrior:
    """
    View a power prior as a shrinkage prior with the constant factor.
    """
    if isinstance(prior, FPrior):
        return prior
    if isinstance(prior, PowerPrior):
        return FPrior(family=Constant(), beta=prior.beta)
    raise core_exc.InvalidArgumentError("Gamma priors have no shrinkage-factor representation")
