import typing as t

from pydantic import BaseModel, Field


class FineqEntry(BaseModel):
    z: t.Tuple[int, ...]
    r: t.Tuple[float, ...]
    lhs: float


class FineqGrid(BaseModel):
    r_grid: t.List[t.Tuple[float, ...]]
    z_max: int
    points: int


class FineqReport(BaseModel):
    """
    Grid verification of the dominance inequality. ``min_lhs`` is normalized by
    ``sum_i gamma_i r_i (z_i + beta_i) F(z, r)``.
    """

    prior: t.Dict[str, t.Any]
    grid: FineqGrid
    min_lhs: float
    argmin_z: t.Tuple[int, ...]
    argmin_r: t.Tuple[float, ...]
    tol_rel: float
    passed: bool = Field(alias="pass")
    entries: t.List[FineqEntry] = Field(default_factory=list)

    class Config:
        allow_population_by_field_name = True


class Check(BaseModel):
    name: str
    passed: bool
    detail: str = ""
    required: bool = True


class Certificate(BaseModel):
    family: str
    proposition: t.Optional[str] = None
    applies: bool
    checks: t.List[Check] = Field(default_factory=list)
    parts: t.List["Certificate"] = Field(default_factory=list)


Certificate.update_forward_refs()
