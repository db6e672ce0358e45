"""
Definitions of the four simulation studies. All use ``r = s = 1`` and ``theta_i = sqrt(lambda_i)``; the rates are
``lambda = Lambda * base`` for ``Lambda`` on a grid.
"""

import typing as t

import numpy as np
from pydantic import BaseModel, Field

from poshrink import settings
from poshrink.core import exceptions
from poshrink.core.problem import ProblemSpec
from poshrink.priors import families
from poshrink.priors.grammar import complement_basis
from poshrink.priors.spec import FPrior


class NamedPrior(BaseModel):
    name: str
    prior: FPrior


class ExperimentDefinition(BaseModel):
    id: int = Field(ge=1, le=4)
    description: str
    d: int
    base: t.Tuple[float, ...]
    priors: t.List[NamedPrior]
    report_risks: bool = False

    @property
    def spec(self) -> ProblemSpec:
        return ProblemSpec.from_durations(1.0, 1.0, d=self.d, theta_scale="unit")

    def rates(self, scale: float) -> np.ndarray:
        return scale * np.asarray(self.base)


def _prior(family: families.Family, d: int, epsilon: float = 0.0) -> FPrior:
    return FPrior.build(family, d, beta=0.5, epsilon=epsilon)


def experiment_1() -> ExperimentDefinition:
    d = 3
    return ExperimentDefinition(
        id=1,
        description="point versus shift-point shrinkage along lambda = Lambda * (1/3, 1/3, 1/3)",
        d=d,
        base=(1 / 3,) * d,
        priors=[
            NamedPrior(name="point", prior=_prior(families.ShiftPoint(alpha=0.5, eta=0.0), d)),
            NamedPrior(name="shift-point", prior=_prior(families.ShiftPoint(alpha=0.5, eta=1.0), d)),
        ],
    )


def experiment_2() -> ExperimentDefinition:
    d = 3
    center = (2.0,) * d
    return ExperimentDefinition(
        id=2,
        description="shrinkage toward the origin, toward (2, 2, 2), and the harmonic counterexample",
        d=d,
        base=(0.4,) * d,
        priors=[
            NamedPrior(name="point-origin", prior=_prior(families.ShiftPoint(alpha=0.5, eta=0.0), d)),
            NamedPrior(name="sym-point", prior=_prior(families.SymPoint(alpha=0.5, center=center), d)),
            NamedPrior(name="harmonic", prior=_prior(families.Point(alpha=0.5, center=center), d)),
        ],
        report_risks=True,
    )


def experiment_3() -> ExperimentDefinition:
    d = 4
    vperp = complement_basis(np.ones(d), d)
    subspace = families.SymSubspace(alpha=0.5, vperp=tuple(tuple(row) for row in vperp.tolist()))
    return ExperimentDefinition(
        id=3,
        description="point shrinkage versus shrinkage toward span(1, 1, 1, 1)",
        d=d,
        base=(0.4,) * d,
        priors=[
            NamedPrior(name="point", prior=_prior(families.ShiftPoint(alpha=1.0, eta=0.0), d)),
            NamedPrior(name="sym-subspace", prior=_prior(subspace, d, epsilon=settings.SMOOTHING_EPSILON_MC)),
        ],
    )


def experiment_4() -> ExperimentDefinition:
    d = 4
    return ExperimentDefinition(
        id=4,
        description="coordinate-subspace and mixed shrinkage along lambda = Lambda * (1, 1, 1, 100) / 20",
        d=d,
        base=(0.05, 0.05, 0.05, 5.0),
        priors=[
            NamedPrior(name="point", prior=_prior(families.ShiftPoint(alpha=1.0, eta=0.0), d)),
            NamedPrior(name="subspace-1", prior=_prior(families.CoordSubspace(alpha=0.5, include=(0, 1, 2)), d)),
            NamedPrior(name="subspace-2", prior=_prior(families.CoordSubspace(alpha=0.5, include=(0, 1, 3)), d)),
            NamedPrior(name="mix-subspace", prior=_prior(families.mix_coord_subspace(d, 0.5), d)),
        ],
    )


EXPERIMENTS: t.Dict[int, t.Callable[[], ExperimentDefinition]] = {
    1: experiment_1,
    2: experiment_2,
    3: experiment_3,
    4: experiment_4,
}


def get_experiment(experiment_id: int) -> ExperimentDefinition:
    try:
        return EXPERIMENTS[experiment_id]()
    except KeyError:
        raise exceptions.InvalidArgumentError(f"Unknown experiment {experiment_id}, expected one of 1, 2, 3, 4")


def default_lambda_grid() -> np.ndarray:
    return np.geomspace(settings.LAMBDA_GRID_MIN, settings.LAMBDA_GRID_MAX, settings.LAMBDA_GRID_POINTS)
