"""Configurations and reports of the numerical modules."""

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator

from phasespace_lab.models.domain import DomainMask
from phasespace_lab.models.grids import PhasePoint
from phasespace_lab.models.signals import DistributionKind, Signal


class QuadSpec(BaseModel):
    """Composite Gauss–Legendre rule in u, with τ = (1 − cos πu)/2."""

    model_config = ConfigDict(frozen=True)

    order: int = Field(default=8, ge=2)
    nodes: int = Field(default=16, ge=8)
    tol: float = Field(default=1e-6, gt=0)
    check: bool = True

    @field_validator("nodes")
    @classmethod
    def _whole_panels(cls, v: int, info) -> int:
        order = info.data.get("order", 8)
        if v % order:
            raise ValueError(f"nodes ({v}) must be a multiple of order ({order})")
        return v

    def doubled(self) -> "QuadSpec":
        return self.model_copy(update={"nodes": 2 * self.nodes})


class AscentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    p: float = Field(default=2.0, ge=1)
    kind: DistributionKind = DistributionKind.WIGNER
    mask: DomainMask
    max_iter: int = Field(default=2000, ge=1)
    tol: float = Field(default=1e-8, gt=0)
    patience: int = Field(default=5, ge=1)
    restarts: int = Field(default=10, ge=1)
    seed: int = 1
    initial_step: float = Field(default=1.0, gt=0)
    shrink: float = Field(default=0.5, gt=0, lt=1)
    sufficient_increase: float = Field(default=1e-4, gt=0, lt=1)
    min_step: float = Field(default=1e-12, gt=0)
    threads: int = Field(default=1, ge=1)


class AscentReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    best_value: float
    best_signal: Signal
    trace: list[float] = Field(default_factory=list)
    converged: bool = False
    restart_values: list[float] = Field(default_factory=list)
    best_restart: int = 0

    @property
    def iterations(self) -> int:
        return max(len(self.trace) - 1, 0)


class LocalizationResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    top_eigenvalue: float
    top_eigenfunction: Signal
    iterations: int


class LinftyResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: float
    signal: Signal
    center: PhasePoint


class FamilyResult(BaseModel):
    """Values of a non-attaining family against its predicted supremum."""

    widths: list[float]
    values: list[float]
    sup_predicted: float
    khat_check: float | None = None

    @property
    def strictly_below(self) -> bool:
        return all(abs(v) < self.sup_predicted for v in self.values)

    @property
    def increasing(self) -> bool:
        mags = [abs(v) for v in self.values]
        return all(b > a for a, b in zip(mags, mags[1:]))


class ExtremalPairReport(BaseModel):
    orthogonality_defect: float
    antiwigner_defect: float


class InterferencePrediction(BaseModel):
    limit: float
    upper_bound: float | None = None


class CenterTrajectory(BaseModel):
    """Synthetic path z^{(n)} of one escaping profile."""

    model_config = ConfigDict(frozen=True)

    points: list[PhasePoint] = Field(min_length=1)
    divergence_threshold: float = Field(gt=0)

    @field_validator("points")
    @classmethod
    def _finite(cls, v: list[PhasePoint]) -> list[PhasePoint]:
        if not all(math.isfinite(p.x) and math.isfinite(p.xi) for p in v):
            raise ValueError("trajectory points must be finite")
        return v


class PairGraph(BaseModel):
    """Surviving ordered pairs; undirected (a matching) when τ = 1/2."""

    nodes: list[int]
    edges: list[tuple[int, int]] = Field(default_factory=list)
    directed: bool = True
    tau: float

    def out_degree(self, node: int) -> int:
        if self.directed:
            return sum(1 for j, _ in self.edges if j == node)
        return sum(1 for e in self.edges if node in e)

    def in_degree(self, node: int) -> int:
        if self.directed:
            return sum(1 for _, k in self.edges if k == node)
        return self.out_degree(node)

    def chains(self) -> list[list[int]]:
        """Maximal paths, each listed from its source."""
        succ = {j: k for j, k in self.edges}
        if not self.directed:
            return [[j, k] for j, k in self.edges]
        heads = [n for n in self.nodes if self.in_degree(n) == 0 and n in succ]
        out = []
        for h in heads:
            path = [h]
            while path[-1] in succ:
                path.append(succ[path[-1]])
            out.append(path)
        return out
