import typing as t

from pydantic import BaseModel, Field, root_validator

METHODS = ("exact-sum", "monte-carlo", "hybrid")


class RiskSettings(BaseModel):
    n: int = Field(default=0, example=20000)
    seed: t.Optional[int] = Field(default=None, example=20240607)
    truncation: str = Field(default="", example="poisson mean + 12 sqrt(mean) + 30")


class RiskEstimate(BaseModel):
    """
    K-L risk or risk difference in nats.
    """

    value: float = Field(example=0.5599)
    std_error: float = Field(ge=0, example=0.0)
    method: t.Literal["exact-sum", "monte-carlo", "hybrid"] = Field(example="exact-sum")
    settings: RiskSettings = Field(default_factory=RiskSettings)
    flags: t.List[str] = Field(default_factory=list)

    class Config:
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def _check_error(cls, values):
        exact = values["method"] == "exact-sum"
        if exact != (values["std_error"] == 0):
            raise ValueError("Standard error vanishes exactly for exact sums")
        return values


class MinimaxBounds(BaseModel):
    lower: float = Field(example=1.0397208)
    upper: float = Field(example=1.0813096)
    ratio: float = Field(example=1.04)
