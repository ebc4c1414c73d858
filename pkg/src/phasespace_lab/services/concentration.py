"""L^p(Ω) functionals, visibility constants, interference blocks and surviving pairs."""

import math
from collections.abc import Sequence

import numpy as np
import structlog
from scipy.integrate import quad
from scipy.special import beta

from phasespace_lab.config import settings
from phasespace_lab.models.domain import DomainMask
from phasespace_lab.models.grids import Grid1D, PhaseGrid, PhasePoint
from phasespace_lab.models.reports import (
    CenterTrajectory,
    ExtremalPairReport,
    InterferencePrediction,
    PairGraph,
    QuadSpec,
)
from phasespace_lab.models.signals import DistributionKind, PhaseSpaceField, Signal
from phasespace_lab.services import phase_space
from phasespace_lab.services.signals import guard_check, inner, tf_shift
from phasespace_lab.utils.errors import (
    GridMismatchError,
    PairGraphInvariantError,
    ParameterError,
    TrajectoryError,
    ZeroSignalError,
)

logger = structlog.get_logger()


def _check_p(p: float, finite: bool = False) -> None:
    if math.isnan(p) or p < 1:
        raise ParameterError("p", "p must be ≥ 1")
    if finite and math.isinf(p):
        raise ParameterError("p", "p must be finite")


def _mask_for(field: PhaseSpaceField, mask: DomainMask) -> DomainMask:
    if mask.grid == field.grid:
        return mask
    if mask.grid.same_axes(field.grid):
        return mask.on(field.grid)
    raise GridMismatchError("lp_norm", f"field grid {field.grid} vs mask grid {mask.grid}")


# ═══════════════════════════════════════════════════════════════
# Functionals
# ═══════════════════════════════════════════════════════════════


def lp_norm(field: PhaseSpaceField, mask: DomainMask, p: float) -> float:
    """(cell_area·Σ_Ω |field|^p)^{1/p}; max over Ω for p = ∞."""
    _check_p(p)
    cells = _mask_for(field, mask).cells
    vals = np.abs(field.values[cells])
    if math.isinf(p):
        return float(vals.max())
    return float((field.grid.cell_area * np.sum(vals**p)) ** (1.0 / p))


def field_norm(field: PhaseSpaceField, p: float) -> float:
    """‖field‖_{L^p} over the whole window it was computed on."""
    _check_p(p)
    vals = np.abs(field.values)
    if math.isinf(p):
        return float(vals.max())
    return float((field.grid.cell_area * np.sum(vals**p)) ** (1.0 / p))


def transform(
    f: Signal,
    kind: DistributionKind,
    tau: float | None = None,
    quad_spec: QuadSpec | None = None,
    n_lags: int | None = None,
    rows: tuple[int, int] | None = None,
) -> PhaseSpaceField:
    """Auto-distribution of f of the given kind."""
    match kind:
        case DistributionKind.WIGNER | DistributionKind.CROSS_WIGNER:
            return phase_space.wigner(f, n_lags=n_lags, rows=rows)
        case DistributionKind.TAU_WIGNER:
            if tau is None:
                raise ParameterError("tau", "required for the τ-Wigner distribution")
            return phase_space.tau_wigner(f, f, tau, n_lags=n_lags, rows=rows)
        case DistributionKind.BORN_JORDAN:
            return phase_space.born_jordan(f, f, quad_spec, n_lags=n_lags, rows=rows)
        case DistributionKind.AMBIGUITY:
            return phase_space.ambiguity(f, f)
    raise ParameterError("kind", f"no auto-distribution for {kind.value}")


def concentration_value(
    f: Signal,
    mask: DomainMask,
    p: float,
    kind: DistributionKind = DistributionKind.WIGNER,
    tau: float | None = None,
    quad_spec: QuadSpec | None = None,
) -> float:
    """J(f) = ‖Tf‖_{L^p(Ω)}/‖f‖², evaluated on the rows Ω touches."""
    _check_p(p)
    if kind is DistributionKind.AMBIGUITY:
        raise ParameterError("kind", "Ω lives on the Wigner grid; the ambiguity function has no concentration on it")
    e = f.energy
    if e == 0:
        raise ZeroSignalError("concentration_value")
    field = transform(f, kind, tau, quad_spec, n_lags=mask.grid.n_lags, rows=mask.row_window)
    return lp_norm(field, mask, p) / e


def visibility_constant(p: float) -> float:
    """C_p = ((1/2π)∫₀^{2π}|cos θ|^p dθ)^{1/p}, by adaptive quadrature."""
    _check_p(p)
    if math.isinf(p):
        return 1.0
    val, _ = quad(
        lambda th: abs(math.cos(th)) ** p,
        0.0,
        2 * math.pi,
        points=[math.pi / 2, 3 * math.pi / 2],
        epsabs=1e-14,
        epsrel=1e-13,
        limit=200,
    )
    return (val / (2 * math.pi)) ** (1.0 / p)


def visibility_constant_beta(p: float) -> float:
    """Closed form ((1/π)·B((p+1)/2, 1/2))^{1/p}."""
    _check_p(p, finite=True)
    return (beta((p + 1) / 2, 0.5) / math.pi) ** (1.0 / p)


def lieb_constant(p: float) -> float:
    """Sharp d = 1 constant (2^{p−1}/p)^{1/p} of ‖Wf‖_p ≤ C‖f‖² (p ≥ 2; reversed for p ≤ 2)."""
    _check_p(p)
    if math.isinf(p):
        return 2.0
    return (2 ** (p - 1) / p) ** (1.0 / p)


# ═══════════════════════════════════════════════════════════════
# Interference
# ═══════════════════════════════════════════════════════════════


def interference_block(
    f: Signal,
    g: Signal,
    a: PhasePoint,
    b: PhasePoint,
    n_lags: int | None = None,
    rows: tuple[int, int] | None = None,
) -> PhaseSpaceField:
    """S = W(π(a)f, π(b)g) + W(π(b)g, π(a)f) = 2·Re W(π(a)f, π(b)g)."""
    fa = tf_shift(f, a)
    gb = tf_shift(g, b)
    guard_check(fa, "interference_block", strict=True)
    guard_check(gb, "interference_block", strict=True)
    w = phase_space.cross_wigner(fa, gb, n_lags=n_lags, rows=rows)
    return w.with_values(2 * np.real(w.values), kind=DistributionKind.INTERFERENCE)


def interference_limit_prediction(
    f: Signal,
    g: Signal,
    c: PhasePoint,
    mask: DomainMask,
    p: float,
    l_est: float | None = None,
) -> InterferencePrediction:
    """2·C_p·‖W(f,g)‖_{L^p(Ω−c)}, and L_est·(‖f‖²+‖g‖²) when L_est is given.

    ‖W(f,g)‖_{L^p(Ω−c)} = ‖W(π(c)f, π(c)g)‖_{L^p(Ω)} by covariance, which keeps Ω
    on its cells; packets pushed off the grid raise GuardViolationError.
    """
    _check_p(p, finite=True)
    fc = tf_shift(f, c)
    gc = tf_shift(g, c)
    guard_check(fc, "interference_limit_prediction", strict=True)
    guard_check(gc, "interference_limit_prediction", strict=True)
    w = phase_space.cross_wigner(fc, gc, n_lags=mask.grid.n_lags, rows=mask.row_window)
    limit = 2 * visibility_constant(p) * lp_norm(w, mask, p)
    upper = None if l_est is None else l_est * (f.energy + g.energy)
    return InterferencePrediction(limit=limit, upper_bound=upper)


def antipodal_residual(f: Signal, z: PhasePoint) -> float:
    """max | |W(π(z)f, π(−z)f)| − |Wf| |, zero in the continuum."""
    left = phase_space.cross_wigner(tf_shift(f, z), tf_shift(f, -z)).values
    right = phase_space.wigner(f).values
    return float(np.max(np.abs(np.abs(left) - np.abs(right))))


def correlation_proxy(u: Signal, witnesses: Sequence[Signal]) -> float:
    """max_k |⟨u, p_k⟩|/(‖u‖‖p_k‖) over a fixed dictionary of witness packets."""
    nu = u.norm
    if nu == 0:
        return 0.0
    return max(abs(inner(u, pk)) / (nu * pk.norm) for pk in witnesses)


# ═══════════════════════════════════════════════════════════════
# Extremal pairs
# ═══════════════════════════════════════════════════════════════


def extremal_pair_diagnostic(f: Signal, g: Signal, mask: DomainMask, p: float) -> ExtremalPairReport:
    """Defects of the two necessary conditions ⟨f,g⟩ = 0 and Wf = −Wg on Ω."""
    if f.energy == 0 or g.energy == 0:
        raise ZeroSignalError("extremal_pair_diagnostic")
    orth = abs(inner(f, g)) / (f.norm * g.norm)
    rows, lags = mask.row_window, mask.grid.n_lags
    wf = phase_space.wigner(f, n_lags=lags, rows=rows)
    wg = phase_space.wigner(g, n_lags=lags, rows=rows)
    denom = lp_norm(wf, mask, p) + lp_norm(wg, mask, p)
    anti = 0.0 if denom == 0 else lp_norm(wf.with_values(wf.values + wg.values), mask, p) / denom
    return ExtremalPairReport(orthogonality_defect=min(orth, 1.0), antiwigner_defect=min(anti, 1.0))


# ═══════════════════════════════════════════════════════════════
# Surviving-pair graph
# ═══════════════════════════════════════════════════════════════


def default_bound_threshold() -> float:
    grid = PhaseGrid.for_wigner(Grid1D(n=settings.default_n, dt=settings.default_dt))
    return settings.bound_threshold_cells * grid.cell_diameter


def _separation_violations(trajectories: Sequence[CenterTrajectory]) -> list[tuple[int, int]]:
    bad = []
    for j in range(len(trajectories)):
        for k in range(j + 1, len(trajectories)):
            tj, tk = trajectories[j], trajectories[k]
            gap = abs(tj.points[-1] - tk.points[-1])
            if gap <= max(tj.divergence_threshold, tk.divergence_threshold):
                bad.append((j, k))
    return bad


def _check_chain_structure(graph: PairGraph) -> None:
    for node in graph.nodes:
        if graph.out_degree(node) > 1 or graph.in_degree(node) > 1:
            raise PairGraphInvariantError(f"node {node} has degree above one")
    if not graph.directed:
        return
    succ = dict(graph.edges)
    for start in graph.nodes:
        seen = {start}
        node = start
        while node in succ:
            node = succ[node]
            if node in seen:
                raise PairGraphInvariantError(f"cycle through node {start} at tau={graph.tau}")
            seen.add(node)


def surviving_pair_graph(
    trajectories: Sequence[CenterTrajectory],
    tau: float = 0.5,
    bound_threshold: float | None = None,
) -> PairGraph:
    """Edge (j,k) iff the centers c_τ(z_j^{(n)}, z_k^{(n)}) stay within ``bound_threshold``."""
    if not trajectories:
        raise ParameterError("trajectories", "need at least one trajectory")
    lengths = {len(t.points) for t in trajectories}
    if len(lengths) != 1:
        raise ParameterError("trajectories", f"lengths differ: {sorted(lengths)}")
    bad = _separation_violations(trajectories)
    if bad:
        raise TrajectoryError(bad)
    bound = default_bound_threshold() if bound_threshold is None else bound_threshold

    xs = np.array([[z.x for z in t.points] for t in trajectories])
    xis = np.array([[z.xi for z in t.points] for t in trajectories])
    # cx[j,k,n] = (1−τ)x_j + τx_k ; cxi[j,k,n] = τξ_j + (1−τ)ξ_k
    cx = (1 - tau) * xs[:, None, :] + tau * xs[None, :, :]
    cxi = tau * xis[:, None, :] + (1 - tau) * xis[None, :, :]
    survives = np.max(np.hypot(cx, cxi), axis=2) <= bound
    np.fill_diagonal(survives, False)

    symmetric = math.isclose(tau, 0.5)
    nodes = list(range(len(trajectories)))
    if symmetric:
        edges = [(j, k) for j, k in zip(*np.nonzero(np.triu(survives)))]
    else:
        edges = [(j, k) for j, k in zip(*np.nonzero(survives))]
    graph = PairGraph(
        nodes=nodes,
        edges=[(int(j), int(k)) for j, k in edges],
        directed=not symmetric,
        tau=tau,
    )
    _check_chain_structure(graph)
    logger.debug("pair_graph_built", tau=tau, nodes=len(nodes), edges=len(graph.edges))
    return graph
