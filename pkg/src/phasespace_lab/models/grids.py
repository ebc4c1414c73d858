"""Sampling grids and phase-space points."""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class Grid1D(BaseModel):
    """Centered uniform grid: sample m sits at t_m = (m - n/2)·dt."""

    model_config = ConfigDict(frozen=True)

    n: int
    dt: float

    @field_validator("n")
    @classmethod
    def _power_of_two(cls, v: int) -> int:
        if v < 2 or v & (v - 1):
            raise ValueError(f"n must be a power of two, got {v}")
        return v

    @field_validator("dt")
    @classmethod
    def _positive_spacing(cls, v: float) -> float:
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"dt must be positive, got {v}")
        return v

    @property
    def t(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.dt

    @property
    def dnu(self) -> float:
        return 1.0 / (self.n * self.dt)

    @property
    def half_width(self) -> float:
        return self.n * self.dt / 2

    @property
    def fft_frequencies(self) -> np.ndarray:
        """Frequencies in numpy FFT order."""
        return np.fft.fftfreq(self.n, self.dt)

    def dual(self) -> "Grid1D":
        return Grid1D(n=self.n, dt=self.dnu)

    def index_of(self, t: float) -> int:
        """Nearest sample index (may fall outside 0..n-1)."""
        return int(round(t / self.dt)) + self.n // 2


class PhasePoint(BaseModel):
    """A point z = (x, ξ) of phase space."""

    model_config = ConfigDict(frozen=True)

    x: float = 0.0
    xi: float = 0.0

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(x=self.x + other.x, xi=self.xi + other.xi)

    def __sub__(self, other: "PhasePoint") -> "PhasePoint":
        return PhasePoint(x=self.x - other.x, xi=self.xi - other.xi)

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(x=-self.x, xi=-self.xi)

    def __abs__(self) -> float:
        return math.hypot(self.x, self.xi)

    def scaled(self, c: float) -> "PhasePoint":
        return PhasePoint(x=c * self.x, xi=c * self.xi)

    def symplectic(self, other: "PhasePoint") -> float:
        """[z, u] = x_z·ξ_u − ξ_z·x_u."""
        return self.x * other.xi - self.xi * other.x


class PhaseGrid(BaseModel):
    """2-D (x, ξ) grid of a transform, optionally restricted to a window of x rows.

    Rows index the x axis (``xgrid``) starting at ``row_start``; columns span the
    whole ξ axis (``xigrid``).
    """

    model_config = ConfigDict(frozen=True)

    xgrid: Grid1D
    xigrid: Grid1D
    row_start: int = 0
    row_count: int

    @model_validator(mode="before")
    @classmethod
    def _default_rows(cls, data):
        if isinstance(data, dict) and data.get("row_count") is None:
            xgrid = data.get("xgrid")
            n = xgrid.n if isinstance(xgrid, Grid1D) else xgrid["n"]
            data = {**data, "row_count": n - data.get("row_start", 0)}
        return data

    @model_validator(mode="after")
    def _rows_inside(self) -> "PhaseGrid":
        if self.row_start < 0 or self.row_count < 1 or self.row_start + self.row_count > self.xgrid.n:
            raise ValueError(
                f"row window [{self.row_start}, {self.row_start + self.row_count}) "
                f"outside 0..{self.xgrid.n}"
            )
        return self

    @classmethod
    def for_wigner(
        cls,
        grid: Grid1D,
        n_lags: int | None = None,
        rows: tuple[int, int] | None = None,
    ) -> "PhaseGrid":
        """Lag-doubling layout: x on the signal grid, ξ spacing 1/(2·n_lags·dt)."""
        lags = n_lags or grid.n
        start, count = rows if rows is not None else (0, grid.n)
        return cls(
            xgrid=grid,
            xigrid=Grid1D(n=lags, dt=1.0 / (2 * lags * grid.dt)),
            row_start=start,
            row_count=count,
        )

    @classmethod
    def for_ambiguity(cls, grid: Grid1D) -> "PhaseGrid":
        """x axis carries lags 2n'·dt; ξ is dual to the signal grid."""
        return cls(xgrid=Grid1D(n=grid.n, dt=2 * grid.dt), xigrid=grid.dual())

    @property
    def x(self) -> np.ndarray:
        return self.xgrid.t[self.row_start : self.row_start + self.row_count]

    @property
    def xi(self) -> np.ndarray:
        return self.xigrid.t

    @property
    def dx(self) -> float:
        return self.xgrid.dt

    @property
    def dxi(self) -> float:
        return self.xigrid.dt

    @property
    def n_lags(self) -> int:
        return self.xigrid.n

    @property
    def cell_area(self) -> float:
        return self.dx * self.dxi

    @property
    def cell_diameter(self) -> float:
        return math.hypot(self.dx, self.dxi)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.row_count, self.xigrid.n)

    def window(self, start: int, count: int) -> "PhaseGrid":
        """Window in absolute row indices of ``xgrid``."""
        return PhaseGrid(xgrid=self.xgrid, xigrid=self.xigrid, row_start=start, row_count=count)

    def same_axes(self, other: "PhaseGrid") -> bool:
        return self.xgrid == other.xgrid and self.xigrid == other.xigrid

    def cell_of(self, z: PhasePoint) -> tuple[int, int]:
        """(row, column) of the cell whose center is nearest z, relative to this window."""
        row = self.xgrid.index_of(z.x) - self.row_start
        col = self.xigrid.index_of(z.xi)
        return row, col

    def point_of(self, row: int, col: int) -> PhasePoint:
        return PhasePoint(x=float(self.x[row]), xi=float(self.xi[col]))
