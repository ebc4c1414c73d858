"""Scenario configuration and run results."""

import math
from enum import Enum
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from phasespace_lab.config import settings
from phasespace_lab.models.domain import DomainMask
from phasespace_lab.models.grids import Grid1D, PhaseGrid, PhasePoint
from phasespace_lab.models.signals import DistributionKind

# Floor of the denominator in relative defects
DEFECT_EPS_ABS = 1e-12


class Scenario(str, Enum):
    INTERFERENCE_LIMIT = "interference-limit"
    SEMICONTINUITY = "semicontinuity"
    MAXIMIZE = "maximize"
    LINFTY = "linfty"
    TAU_SUP = "tau-sup"
    BJ_SUP = "bj-sup"
    LIEB_CHECK = "lieb-check"
    COVARIANCE_CHECK = "covariance-check"
    CHAIN_GRAPH = "chain-graph"


class GridSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(default_factory=lambda: settings.default_n, ge=16)
    dt: float = Field(default_factory=lambda: settings.default_dt, gt=0)

    @field_validator("n")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v & (v - 1):
            raise ValueError(f"n must be a power of two, got {v}")
        return v

    def to_grid(self) -> Grid1D:
        return Grid1D(n=self.n, dt=self.dt)


class MaskSpec(BaseModel):
    """Ω by shape; ``full`` is the whole phase grid less its first row, ``bitmap`` a P1 file at ``path``."""

    model_config = ConfigDict(frozen=True)

    shape: Literal["disk", "rectangle", "annulus", "full", "bitmap"] = "disk"
    radius: float = Field(default=1.0, gt=0)
    inner_radius: float = Field(default=0.0, ge=0)
    center: tuple[float, float] = (0.0, 0.0)
    x_range: tuple[float, float] = (-1.0, 1.0)
    xi_range: tuple[float, float] = (-1.0, 1.0)
    path: str | None = None

    @model_validator(mode="after")
    def _consistent(self) -> "MaskSpec":
        if self.shape == "annulus" and self.inner_radius >= self.radius:
            raise ValueError("inner_radius must be below radius")
        if self.shape == "rectangle" and (
            self.x_range[0] >= self.x_range[1] or self.xi_range[0] >= self.xi_range[1]
        ):
            raise ValueError("rectangle ranges must be increasing")
        if self.shape == "bitmap" and not self.path:
            raise ValueError("bitmap masks need a path")
        return self

    @property
    def center_point(self) -> PhasePoint:
        return PhasePoint(x=self.center[0], xi=self.center[1])

    @property
    def x_bounds(self) -> tuple[float, float] | None:
        """x interval the domain occupies; None for the full grid and for bitmaps."""
        match self.shape:
            case "rectangle":
                return self.x_range
            case "full" | "bitmap":
                return None
        return self.center[0] - self.radius, self.center[0] + self.radius

    def rotated(self) -> "MaskSpec":
        """Image of Ω under (x, ξ) ↦ (ξ, −x), where Wf̂ carries what Wf had on Ω."""
        (x0, x1), (k0, k1) = self.x_range, self.xi_range
        return self.model_copy(
            update={
                "center": (self.center[1], -self.center[0]),
                "x_range": (k0, k1),
                "xi_range": (-x1, -x0),
            }
        )

    def to_mask(self, grid: PhaseGrid) -> DomainMask:
        match self.shape:
            case "disk":
                return DomainMask.disk(grid, self.radius, self.center_point)
            case "annulus":
                return DomainMask.annulus(grid, self.inner_radius, self.radius, self.center_point)
            case "rectangle":
                return DomainMask.rectangle(grid, self.x_range, self.xi_range)
            case "bitmap":
                from phasespace_lab.utils.serialization import read_mask

                return read_mask(self.path).on(grid)
            case _:
                cells = np.ones(grid.shape, dtype=bool)
                cells[0] = False
                return DomainMask(grid=grid, cells=cells)


class ScenarioConfig(BaseModel):
    """One experiment, as read from a YAML or JSON config file."""

    model_config = ConfigDict(extra="forbid", ser_json_inf_nan="constants")

    scenario: Scenario
    grid: GridSpec = Field(default_factory=GridSpec)
    mask: MaskSpec = Field(default_factory=MaskSpec)
    p: float = 2.0
    p_list: list[float] | None = None
    kind: DistributionKind = DistributionKind.WIGNER
    tau: float | None = None
    direction: Literal["time", "frequency"] = "time"

    # Sweeps
    r_list: list[float] | None = None
    xi_list: list[float] | None = None
    sigma_list: list[float] | None = None

    # Trials and solver budgets
    trials: int | None = Field(default=None, ge=1)
    restarts: int = Field(default=10, ge=1)
    max_iter: int = Field(default=2000, ge=1)
    odd: bool = False
    bj_nodes: int = Field(default_factory=lambda: settings.bj_nodes, ge=8)
    bj_tol: float = Field(default_factory=lambda: settings.bj_tol, gt=0)

    # Pass/fail tolerance; None uses the scenario default
    tolerance: float | None = Field(default=None, gt=0)

    seed: int = Field(default_factory=lambda: settings.default_seed)
    output: str | None = None

    @field_validator("p")
    @classmethod
    def _p_at_least_one(cls, v: float) -> float:
        if math.isnan(v) or v < 1:
            raise ValueError("p must be ≥ 1")
        return v

    @field_validator("p_list")
    @classmethod
    def _all_p_at_least_one(cls, v: list[float] | None) -> list[float] | None:
        if v is not None and (not v or any(math.isnan(p) or p < 1 for p in v)):
            raise ValueError("p must be ≥ 1")
        return v

    @field_validator("bj_nodes")
    @classmethod
    def _whole_panels(cls, v: int) -> int:
        if v % 8:
            raise ValueError("bj_nodes must be a multiple of 8")
        return v

    @field_validator("tau")
    @classmethod
    def _tau_open_interval(cls, v: float | None) -> float | None:
        if v is not None and not 0 < v < 1:
            raise ValueError("tau must lie in (0, 1)")
        return v

    @field_validator("r_list", "xi_list", "sigma_list")
    @classmethod
    def _positive_sweep(cls, v: list[float] | None) -> list[float] | None:
        if v is not None and (not v or any(x <= 0 for x in v)):
            raise ValueError("sweep lists must be nonempty and positive")
        return v

    @model_validator(mode="after")
    def _scenario_preconditions(self) -> "ScenarioConfig":
        problems = self.semantic_violations()
        if problems:
            raise ValueError("; ".join(problems))
        return self

    def semantic_violations(self) -> list[str]:
        """Preconditions of the scenario's module that the field types cannot express."""
        out = []
        s = self.scenario
        if s is Scenario.TAU_SUP:
            if self.tau is None:
                out.append("tau is required for tau-sup")
            elif math.isclose(self.tau, 0.5):
                out.append("tau = 1/2 is the attained regime, tau-sup needs tau in (0,1) excluding 1/2")
        if s is Scenario.MAXIMIZE and self.kind is not DistributionKind.WIGNER:
            out.append("maximize supports kind=wigner only")
        if s is Scenario.LINFTY and self.kind is not DistributionKind.WIGNER:
            out.append("linfty is attained for kind=wigner only; use tau-sup or bj-sup")
        if math.isinf(self.p) and s is not Scenario.LINFTY:
            out.append(f"p must be finite for {s.value}")
        if self.mask.shape == "bitmap":
            if not Path(self.mask.path).is_file():
                out.append(f"mask.path: {self.mask.path} does not exist")
            if self.direction == "frequency":
                out.append("bitmap masks cannot be rotated for direction=frequency")
        return out

    def echo(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


class ResultRow(BaseModel):
    """One sweep point: relative_defect = |measured − predicted|/max(|predicted|, ε_abs)."""

    param: float
    measured: float
    predicted: float
    defect: float

    @classmethod
    def compare(cls, param: float, measured: float, predicted: float) -> "ResultRow":
        defect = abs(measured - predicted) / max(abs(predicted), DEFECT_EPS_ABS)
        return cls(param=param, measured=measured, predicted=predicted, defect=defect)


class RunResult(BaseModel):
    scenario: Scenario
    config: dict[str, Any]
    grid: dict[str, Any] = Field(default_factory=dict)
    rows: list[ResultRow] = Field(default_factory=list)
    checks: dict[str, bool] = Field(default_factory=dict)
    tolerance: float
    extras: dict[str, Any] = Field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def sorted_rows(self) -> list[ResultRow]:
        return sorted(self.rows, key=lambda r: r.param)
