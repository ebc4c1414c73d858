"""Signals and phase-space fields."""

from enum import Enum

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from phasespace_lab.models.grids import Grid1D, PhaseGrid
from phasespace_lab.utils.errors import GridMismatchError


class DistributionKind(str, Enum):
    WIGNER = "wigner"
    CROSS_WIGNER = "cross_wigner"
    TAU_WIGNER = "tau_wigner"
    AMBIGUITY = "ambiguity"
    BORN_JORDAN = "born_jordan"
    INTERFERENCE = "interference"
    SYMBOL = "symbol"


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


class Signal(BaseModel):
    """Complex samples of a function on a centered 1-D grid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: Grid1D
    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def _as_complex(cls, v) -> np.ndarray:
        return _frozen_array(v, np.complex128)

    @model_validator(mode="after")
    def _length_matches(self) -> "Signal":
        if self.values.shape != (self.grid.n,):
            raise ValueError(f"values has shape {self.values.shape}, grid expects ({self.grid.n},)")
        return self

    @property
    def t(self) -> np.ndarray:
        return self.grid.t

    @property
    def energy(self) -> float:
        return float(self.grid.dt * np.sum(np.abs(self.values) ** 2))

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.energy))

    def with_values(self, values: np.ndarray) -> "Signal":
        return type(self)(grid=self.grid, values=values)

    def scaled(self, c: complex) -> "Signal":
        return self.with_values(c * self.values)

    def conj(self) -> "Signal":
        return self.with_values(np.conj(self.values))

    def _check(self, other: "Signal", operation: str) -> None:
        if self.grid != other.grid:
            raise GridMismatchError(operation, f"{self.grid} vs {other.grid}")

    def __add__(self, other: "Signal") -> "Signal":
        self._check(other, "add")
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "Signal") -> "Signal":
        self._check(other, "sub")
        return self.with_values(self.values - other.values)


class LogProfile(Signal):
    """Samples of (Uf)(y) = √2·e^{y/2}·f(e^y) on a uniform grid in y = log|t|."""


class PhaseSpaceField(BaseModel):
    """Samples of a distribution on a phase grid."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: PhaseGrid
    values: np.ndarray
    kind: DistributionKind
    tau: float | None = None

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, v) -> np.ndarray:
        arr = np.asarray(v)
        dtype = np.float64 if np.isrealobj(arr) else np.complex128
        return _frozen_array(arr, dtype)

    @model_validator(mode="after")
    def _shape_matches(self) -> "PhaseSpaceField":
        if self.values.shape != self.grid.shape:
            raise ValueError(f"values has shape {self.values.shape}, grid expects {self.grid.shape}")
        return self

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def xi(self) -> np.ndarray:
        return self.grid.xi

    def real(self) -> "PhaseSpaceField":
        return self.model_copy(update={"values": _frozen_array(np.real(self.values), np.float64)})

    def with_values(self, values: np.ndarray, kind: DistributionKind | None = None) -> "PhaseSpaceField":
        return PhaseSpaceField(grid=self.grid, values=values, kind=kind or self.kind, tau=self.tau)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def value_at(self, row: int, col: int) -> complex:
        return complex(self.values[row, col])
