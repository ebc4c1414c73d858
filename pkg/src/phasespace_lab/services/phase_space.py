"""Wigner, τ-Wigner, ambiguity and Born–Jordan distributions on discrete grids.

Lag-doubling convention: the lag variable is y = 2n'·dt, so the τ = 1/2 lag
product f(x + n'dt)·conj(g(x − n'dt)) only touches grid samples, and the ξ axis
has spacing 1/(2·n_lags·dt). ``rows`` restricts the output to a window of x
rows; ``n_lags`` zero-pads the lag variable to refine ξ.
"""

import math

import numpy as np
import structlog
from joblib import Parallel, delayed
from scipy import fft as sp_fft
from scipy.integrate import quad

from phasespace_lab.config import settings
from phasespace_lab.models.grids import Grid1D, PhaseGrid, PhasePoint
from phasespace_lab.models.reports import QuadSpec
from phasespace_lab.models.signals import DistributionKind, PhaseSpaceField, Signal
from phasespace_lab.services.signals import centered_fft, dilate, inner
from phasespace_lab.utils.errors import (
    GridMismatchError,
    ParameterError,
    QuadratureError,
)
from phasespace_lab.utils.quadrature import tau_nodes

logger = structlog.get_logger()

_LAG_CHUNK = 256


def _same_grid(f: Signal, g: Signal, operation: str) -> None:
    if f.grid != g.grid:
        raise GridMismatchError(operation, f"{f.grid} vs {g.grid}")


def _check_tau(tau: float) -> None:
    if not 0 < tau < 1:
        raise ParameterError("tau", f"must lie in (0, 1), got {tau}")


def _window(grid: Grid1D, n_lags: int | None, rows: tuple[int, int] | None) -> PhaseGrid:
    if n_lags is not None and n_lags < 2:
        raise ParameterError("n_lags", "must be a power of two ≥ 2")
    return PhaseGrid.for_wigner(grid, n_lags, rows)


def _active_lags(n: int, n_lags: int, reach: float = 1.0) -> np.ndarray:
    """Lag indices n' that can carry a nonzero product; ``reach`` bounds |n'| by reach·n."""
    limit = min(int(math.ceil(reach * n)), n_lags // 2)
    return np.arange(-limit, min(limit, n_lags // 2 - 1) + 1)


def _lag_transform(r_active: np.ndarray, lags: np.ndarray, pg: PhaseGrid) -> np.ndarray:
    """Zero-pad the active lag columns to n_lags and apply 2dt·DFT over the lag."""
    r = np.zeros(pg.shape, dtype=np.complex128)
    r[:, lags + pg.n_lags // 2] = r_active
    return 2 * pg.dx * centered_fft(r, axis=1)


# ═══════════════════════════════════════════════════════════════
# Wigner and cross-Wigner
# ═══════════════════════════════════════════════════════════════


def cross_wigner(
    f: Signal,
    g: Signal,
    n_lags: int | None = None,
    rows: tuple[int, int] | None = None,
) -> PhaseSpaceField:
    """W(f,g)(x,ξ) = ∫e^{−2πiξy} f(x+y/2)·conj(g(x−y/2)) dy."""
    _same_grid(f, g, "cross_wigner")
    pg = _window(f.grid, n_lags, rows)
    n = f.grid.n
    m = np.arange(pg.row_start, pg.row_start + pg.row_count)[:, None]
    lags = _active_lags(n, pg.n_lags)
    plus = m + lags[None, :]
    minus = m - lags[None, :]
    valid = (plus >= 0) & (plus < n) & (minus >= 0) & (minus < n)
    prod = f.values[np.clip(plus, 0, n - 1)] * np.conj(g.values[np.clip(minus, 0, n - 1)])
    values = _lag_transform(np.where(valid, prod, 0.0), lags, pg)
    kind = DistributionKind.WIGNER if f is g else DistributionKind.CROSS_WIGNER
    return PhaseSpaceField(grid=pg, values=values, kind=kind)


def wigner(f: Signal, n_lags: int | None = None, rows: tuple[int, int] | None = None) -> PhaseSpaceField:
    """Wf = W(f,f); real-valued."""
    return cross_wigner(f, f, n_lags=n_lags, rows=rows).real()


# ═══════════════════════════════════════════════════════════════
# τ-Wigner
# ═══════════════════════════════════════════════════════════════


def _shifted_rows(f: Signal, offsets: np.ndarray, row_idx: np.ndarray) -> np.ndarray:
    """f(t_m + s) for s in ``offsets`` (rows of the result) and m in ``row_idx``."""
    grid = f.grid
    spectrum = sp_fft.fft(f.values)
    nu = grid.fft_frequencies
    phase = np.exp(2j * np.pi * offsets[:, None] * nu[None, :])
    phase[:, grid.n // 2] = np.cos(np.pi * offsets / grid.dt)
    shifted = sp_fft.ifft(spectrum[None, :] * phase, axis=1)[:, row_idx]
    points = grid.t[row_idx][None, :] + offsets[:, None]
    tol = 1e-9 * grid.dt
    outside = (points < grid.t[0] - tol) | (points > grid.t[-1] + tol)
    shifted[outside] = 0.0
    return shifted


def tau_wigner(
    f: Signal,
    g: Signal,
    tau: float,
    n_lags: int | None = None,
    rows: tuple[int, int] | None = None,
) -> PhaseSpaceField:
    """W_τ(f,g)(x,ξ) = ∫e^{−2πiξy} f(x+τy)·conj(g(x−(1−τ)y)) dy."""
    _same_grid(f, g, "tau_wigner")
    _check_tau(tau)
    pg = _window(f.grid, n_lags, rows)
    n, dt = f.grid.n, f.grid.dt
    row_idx = np.arange(pg.row_start, pg.row_start + pg.row_count)
    lags = _active_lags(n, pg.n_lags, reach=0.5 / max(tau, 1 - tau) + 1.0 / n)
    r_active = np.zeros((pg.row_count, lags.size), dtype=np.complex128)
    for lo in range(0, lags.size, _LAG_CHUNK):
        y = 2 * dt * lags[lo : lo + _LAG_CHUNK].astype(float)
        fs = _shifted_rows(f, tau * y, row_idx)
        gs = _shifted_rows(g, -(1 - tau) * y, row_idx)
        r_active[:, lo : lo + _LAG_CHUNK] = (fs * np.conj(gs)).T
    values = _lag_transform(r_active, lags, pg)
    return PhaseSpaceField(grid=pg, values=values, kind=DistributionKind.TAU_WIGNER, tau=tau)


# ═══════════════════════════════════════════════════════════════
# Ambiguity function
# ═══════════════════════════════════════════════════════════════


def ambiguity(f: Signal, g: Signal) -> PhaseSpaceField:
    """A(f,g)(x,ξ) = ∫e^{−2πiξy} f(y+x/2)·conj(g(y−x/2)) dy, with x = 2n'·dt."""
    _same_grid(f, g, "ambiguity")
    n = f.grid.n
    pg = PhaseGrid.for_ambiguity(f.grid)
    lags = np.arange(-(n // 2), n // 2)[:, None]
    m = np.arange(n)[None, :]
    plus = m + lags
    minus = m - lags
    valid = (plus >= 0) & (plus < n) & (minus >= 0) & (minus < n)
    prod = f.values[np.clip(plus, 0, n - 1)] * np.conj(g.values[np.clip(minus, 0, n - 1)])
    values = f.grid.dt * centered_fft(np.where(valid, prod, 0.0), axis=1)
    return PhaseSpaceField(grid=pg, values=values, kind=DistributionKind.AMBIGUITY)


# ═══════════════════════════════════════════════════════════════
# Born–Jordan
# ═══════════════════════════════════════════════════════════════


def _tau_average(
    f: Signal, g: Signal, spec: QuadSpec, n_lags: int | None, rows: tuple[int, int] | None, threads: int
) -> np.ndarray:
    taus, weights = tau_nodes(spec.nodes, spec.order)
    fields = Parallel(n_jobs=threads, prefer="threads")(
        delayed(tau_wigner)(f, g, float(t), n_lags, rows) for t in taus
    )
    total = np.zeros(fields[0].values.shape, dtype=np.complex128)
    for w, fld in zip(weights, fields):
        total += w * fld.values
    return total


def born_jordan(
    f: Signal,
    g: Signal,
    quad_spec: QuadSpec | None = None,
    n_lags: int | None = None,
    rows: tuple[int, int] | None = None,
    threads: int | None = None,
) -> PhaseSpaceField:
    """W_BJ(f,g) = ∫₀¹ W_τ(f,g) dτ, certified by doubling the node count."""
    _same_grid(f, g, "born_jordan")
    spec = quad_spec or QuadSpec(nodes=settings.bj_nodes, tol=settings.bj_tol)
    jobs = threads or settings.threads
    coarse = _tau_average(f, g, spec, n_lags, rows, jobs)
    values = coarse
    if spec.check:
        fine = _tau_average(f, g, spec.doubled(), n_lags, rows, jobs)
        scale = max(float(np.max(np.abs(fine))), np.finfo(float).tiny)
        change = float(np.max(np.abs(fine - coarse))) / scale
        if change > spec.tol:
            raise QuadratureError(spec.nodes, change, spec.tol)
        logger.debug("quadrature_converged", nodes=spec.nodes, change=change)
        values = fine
    pg = _window(f.grid, n_lags, rows)
    return PhaseSpaceField(grid=pg, values=values, kind=DistributionKind.BORN_JORDAN)


def born_jordan_origin(f: Signal) -> float:
    """W_BJ f(0) = ∫₀^∞ s^{-1/2}(1+s)^{-1}⟨D_{-s}f,f⟩ds, folded onto s ∈ (0,1] and s = v²."""

    def integrand(v: float) -> float:
        return 4.0 * inner(dilate(f, -(v * v)), f).real / (1.0 + v * v)

    value, _ = quad(integrand, 0.0, 1.0, epsabs=1e-12, epsrel=1e-10, limit=200)
    return float(value)


# ═══════════════════════════════════════════════════════════════
# Covariance under time-frequency shifts
# ═══════════════════════════════════════════════════════════════


def covariance_center(a: PhasePoint, b: PhasePoint, tau: float = 0.5) -> PhasePoint:
    """c_τ(a,b) = ((1−τ)x_a + τx_b, τξ_a + (1−τ)ξ_b)."""
    _check_tau(tau)
    return PhasePoint(x=(1 - tau) * a.x + tau * b.x, xi=tau * a.xi + (1 - tau) * b.xi)


def wigner_covariance_phase(a: PhasePoint, b: PhasePoint, z: PhasePoint) -> complex:
    """Scalar phase of W(π(a)f,π(b)g)(z) relative to W(f,g)(z − c(a,b))."""
    d = a - b
    return complex(np.exp(1j * np.pi * (a.xi + b.xi) * (a.x - b.x)) * np.exp(2j * np.pi * z.symplectic(d)))


def tau_covariance_phase(a: PhasePoint, b: PhasePoint, z: PhasePoint, tau: float) -> complex:
    d = a - b
    return complex(
        np.exp(2j * np.pi * z.symplectic(d)) * np.exp(2j * np.pi * (a.x - b.x) * (tau * a.xi + (1 - tau) * b.xi))
    )


def polarization_residual(f: Signal, g: Signal, theta: float) -> float:
    """max |W(h⁺) − W(h⁻) − 4Re(e^{−iθ}W(f,g))| with h^± = f ± e^{iθ}g."""
    rot = g.scaled(np.exp(1j * theta))
    lhs = wigner(f + rot).values - wigner(f - rot).values
    rhs = 4 * np.real(np.exp(-1j * theta) * cross_wigner(f, g).values)
    return float(np.max(np.abs(lhs - rhs)))


# ═══════════════════════════════════════════════════════════════
# Adjoint of the Wigner map
# ═══════════════════════════════════════════════════════════════


def wigner_adjoint(a: PhaseSpaceField, f: Signal) -> Signal:
    """h with Re⟨h, v⟩ = ½·d/dε [cell_area·Σ a·W(f+εv)] at ε = 0.

    Equivalently ⟨h, f⟩ = cell_area·Σ a·Wf, so f ↦ h is the Weyl-type operator of
    the real symbol a.
    """
    pg = a.grid
    expected = PhaseGrid.for_wigner(f.grid, pg.n_lags, (pg.row_start, pg.row_count))
    if pg != expected:
        raise GridMismatchError("wigner_adjoint", f"symbol grid {pg} does not fit {f.grid}")
    if not a.is_real:
        raise ParameterError("a", "symbol must be real-valued")
    n = f.grid.n
    symbol_hat = centered_fft(a.values.astype(np.complex128), axis=1)
    lags = _active_lags(n, pg.n_lags)
    kernel = symbol_hat[:, lags + pg.n_lags // 2]
    m = np.arange(pg.row_start, pg.row_start + pg.row_count)[:, None]
    plus = m + lags[None, :]
    minus = m - lags[None, :]
    valid = (plus >= 0) & (plus < n) & (minus >= 0) & (minus < n)
    contrib = np.where(valid, kernel * f.values[np.clip(plus, 0, n - 1)], 0.0)
    target = np.where(valid, minus, 0).ravel()
    h = np.bincount(target, weights=contrib.real.ravel(), minlength=n) + 1j * np.bincount(
        target, weights=contrib.imag.ravel(), minlength=n
    )
    # cell_area·2dt from the forward map, 1/dt from ⟨·,·⟩
    return f.with_values(2 * pg.cell_area * h)


def symbol_field(grid: PhaseGrid, values: np.ndarray) -> PhaseSpaceField:
    return PhaseSpaceField(grid=grid, values=np.asarray(values, dtype=float), kind=DistributionKind.SYMBOL)
