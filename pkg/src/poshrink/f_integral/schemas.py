import typing

import numpy as np
from pydantic import BaseModel, Field, root_validator

BACKENDS = ("quadrature", "monte-carlo")


class FEstimate(BaseModel):
    log_value: float = Field(example=0.120782)
    std_error: float = Field(ge=0, example=0.0)
    backend: typing.Literal["quadrature", "monte-carlo"] = Field(example="quadrature")
    n_samples: int = Field(ge=0, example=0)
    z: typing.Tuple[int, ...] = Field(example=[1, 0, 0])
    t: typing.Tuple[float, ...] = Field(example=[1.0, 1.0, 1.0])

    class Config:
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def _check_error(cls, values):
        if values["backend"] == "quadrature" and values["std_error"] != 0:
            raise ValueError("Quadrature estimates carry no standard error")
        return values

    @property
    def value(self) -> float:
        return float(np.exp(self.log_value))


class FRatio(BaseModel):
    """
    ``log F(z_num, t_num) - log F(z_den, t_den)`` with its standard error.
    """

    log_value: float
    std_error: float = Field(ge=0)
    backend: typing.Literal["quadrature", "monte-carlo"]
    n_samples: int = 0

    class Config:
        allow_mutation = False
