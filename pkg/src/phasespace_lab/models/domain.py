"""Cell-aligned phase-space domains Ω."""

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from phasespace_lab.models.grids import PhaseGrid, PhasePoint
from phasespace_lab.utils.errors import GridMismatchError, ParameterError


class DomainMask(BaseModel):
    """Boolean subset of the cells of a phase grid.

    A cell belongs to Ω when its center does (center-in rasterization), so the
    measure is the exact cell count times the cell area.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    grid: PhaseGrid
    cells: np.ndarray

    @field_validator("cells", mode="before")
    @classmethod
    def _as_bool(cls, v) -> np.ndarray:
        arr = np.array(v, dtype=bool, copy=True)
        arr.flags.writeable = False
        return arr

    @model_validator(mode="after")
    def _finite_positive_measure(self) -> "DomainMask":
        if self.cells.shape != self.grid.shape:
            raise ValueError(f"cells has shape {self.cells.shape}, grid expects {self.grid.shape}")
        count = int(self.cells.sum())
        if count == 0:
            raise ValueError("mask is empty")
        if count >= self.grid.xgrid.n * self.grid.xigrid.n:
            raise ValueError("mask covers the whole grid; measure must stay below the grid area")
        return self

    # ── constructors ────────────────────────────────────────────

    @classmethod
    def _from_predicate(cls, grid: PhaseGrid, predicate) -> "DomainMask":
        x = grid.x[:, None]
        xi = grid.xi[None, :]
        cells = np.broadcast_to(predicate(x, xi), grid.shape)
        if not cells.any():
            raise ParameterError("mask", "no cell center falls inside the domain")
        return cls(grid=grid, cells=cells)

    @classmethod
    def rectangle(
        cls, grid: PhaseGrid, x_range: tuple[float, float], xi_range: tuple[float, float]
    ) -> "DomainMask":
        (x0, x1), (k0, k1) = x_range, xi_range
        return cls._from_predicate(grid, lambda x, xi: (x >= x0) & (x <= x1) & (xi >= k0) & (xi <= k1))

    @classmethod
    def disk(cls, grid: PhaseGrid, radius: float, center: PhasePoint | None = None) -> "DomainMask":
        c = center or PhasePoint()
        return cls._from_predicate(grid, lambda x, xi: (x - c.x) ** 2 + (xi - c.xi) ** 2 <= radius**2)

    @classmethod
    def annulus(
        cls, grid: PhaseGrid, inner: float, outer: float, center: PhasePoint | None = None
    ) -> "DomainMask":
        if not 0 <= inner < outer:
            raise ParameterError("annulus", f"need 0 <= inner < outer, got {inner}, {outer}")
        c = center or PhasePoint()

        def inside(x, xi):
            r2 = (x - c.x) ** 2 + (xi - c.xi) ** 2
            return (r2 >= inner**2) & (r2 <= outer**2)

        return cls._from_predicate(grid, inside)

    @classmethod
    def union(cls, *masks: "DomainMask") -> "DomainMask":
        if not masks:
            raise ParameterError("union", "needs at least one mask")
        grid = masks[0].grid
        for m in masks[1:]:
            if m.grid != grid:
                raise GridMismatchError("union")
        return cls(grid=grid, cells=np.logical_or.reduce([m.cells for m in masks]))

    # ── geometry ────────────────────────────────────────────────

    @property
    def count(self) -> int:
        return int(self.cells.sum())

    @property
    def measure(self) -> float:
        return self.count * self.grid.cell_area

    @property
    def row_window(self) -> tuple[int, int]:
        """(absolute start row, row count) of the rows Ω touches."""
        rows = np.flatnonzero(self.cells.any(axis=1))
        return self.grid.row_start + int(rows[0]), int(rows[-1] - rows[0] + 1)

    def cropped(self) -> "DomainMask":
        """Same Ω on the smallest row window of the grid that contains it."""
        start, count = self.row_window
        return self.on(self.grid.window(start, count))

    def on(self, grid: PhaseGrid) -> "DomainMask":
        """Re-express Ω on another row window of the same axes."""
        if not grid.same_axes(self.grid):
            raise GridMismatchError("mask.on", "axes differ")
        start, count = self.row_window
        if start < grid.row_start or start + count > grid.row_start + grid.row_count:
            raise GridMismatchError("mask.on", "target window does not contain the mask")
        cells = np.zeros(grid.shape, dtype=bool)
        src = self.cells[start - self.grid.row_start : start - self.grid.row_start + count]
        cells[start - grid.row_start : start - grid.row_start + count] = src
        return DomainMask(grid=grid, cells=cells)

    def points(self) -> list[PhasePoint]:
        """Cell centers of Ω in row-major order."""
        rows, cols = np.nonzero(self.cells)
        return [self.grid.point_of(int(r), int(c)) for r, c in zip(rows, cols)]

    def centroid(self) -> PhasePoint:
        rows, cols = np.nonzero(self.cells)
        return PhasePoint(x=float(self.grid.x[rows].mean()), xi=float(self.grid.xi[cols].mean()))

    def nearest_cell(self, z: PhasePoint) -> PhasePoint:
        """Center of the Ω cell closest to z."""
        rows, cols = np.nonzero(self.cells)
        d2 = (self.grid.x[rows] - z.x) ** 2 + (self.grid.xi[cols] - z.xi) ** 2
        i = int(np.argmin(d2))
        return self.grid.point_of(int(rows[i]), int(cols[i]))

    def contains(self, z: PhasePoint) -> bool:
        row, col = self.grid.cell_of(z)
        if not (0 <= row < self.grid.row_count and 0 <= col < self.grid.xigrid.n):
            return False
        return bool(self.cells[row, col])
