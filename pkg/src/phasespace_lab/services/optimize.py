"""Concentration optimizers: projected gradient ascent, localization baseline, L^∞ constructions.

The ascent maximizes J(f) = ‖Wf‖_{L^p(Ω)}/‖f‖² over the unit sphere of the
signal grid. Only the rows of the phase grid that Ω touches are ever computed.
"""

import math
from dataclasses import dataclass

import numpy as np
import structlog
from joblib import Parallel, delayed

from phasespace_lab.config import settings
from phasespace_lab.models.domain import DomainMask
from phasespace_lab.models.grids import Grid1D, PhasePoint
from phasespace_lab.models.reports import (
    AscentConfig,
    AscentReport,
    FamilyResult,
    LinftyResult,
    LocalizationResult,
)
from phasespace_lab.models.signals import DistributionKind, LogProfile, PhaseSpaceField, Signal
from phasespace_lab.services.concentration import lp_norm
from phasespace_lab.services.phase_space import symbol_field, wigner, wigner_adjoint
from phasespace_lab.services.signals import (
    bandlimited_eval,
    dft,
    dilate,
    gaussian,
    guard_check,
    hermite,
    inner,
    normalize,
    random_signal,
    tf_shift,
)
from phasespace_lab.utils.errors import (
    NonSmoothPointError,
    ParameterError,
    StagnationError,
    ZeroSignalError,
)

logger = structlog.get_logger()

_NONSMOOTH_EPS = 1e-12
_REG_EPS = 1e-8


# ═══════════════════════════════════════════════════════════════
# Objective and gradient
# ═══════════════════════════════════════════════════════════════


def _check_ascent_kind(cfg: AscentConfig) -> None:
    if cfg.kind is not DistributionKind.WIGNER:
        raise ParameterError("kind", f"gradient ascent supports the Wigner distribution only, got {cfg.kind.value}")
    if math.isinf(cfg.p):
        raise ParameterError("p", "p must be finite; use linfty_optimizer for p = ∞")


def _restricted_wigner(f: Signal, mask: DomainMask) -> tuple[PhaseSpaceField, np.ndarray]:
    w = wigner(f, n_lags=mask.grid.n_lags, rows=mask.row_window)
    return w, mask.on(w.grid).cells


def _power_sum(w: PhaseSpaceField, cells: np.ndarray, p: float) -> float:
    return float(w.grid.cell_area * np.sum(np.abs(w.values[cells]) ** p))


def _symbol(w: PhaseSpaceField, cells: np.ndarray, p: float) -> np.ndarray:
    """p·|W|^{p−2}·W on Ω, regularized as (W² + ε²)^{(p−2)/2}·W when p < 2."""
    vals = w.values
    on_omega = np.abs(vals[cells])
    peak = float(on_omega.max()) if on_omega.size else 0.0
    if p - 1 < _NONSMOOTH_EPS and np.any(on_omega == 0):
        raise NonSmoothPointError("p = 1 gradient requested where Wf vanishes on Ω")
    out = np.zeros_like(vals)
    if peak == 0:
        return out
    if p < 2:
        eps = _REG_EPS * peak
        weight = (vals**2 + eps**2) ** ((p - 2) / 2)
    elif p == 2:
        weight = np.ones_like(vals)
    else:
        weight = np.abs(vals) ** (p - 2)
    out[cells] = p * (weight * vals)[cells]
    return out


def gradient(f: Signal, cfg: AscentConfig) -> Signal:
    """Gradient of F(f) = ‖Wf‖^p_{L^p(Ω)}: dF(v) = Re⟨gradient, v⟩."""
    _check_ascent_kind(cfg)
    if f.energy == 0:
        raise ZeroSignalError("gradient")
    w, cells = _restricted_wigner(f, cfg.mask)
    return wigner_adjoint(symbol_field(w.grid, _symbol(w, cells, cfg.p)), f).scaled(2.0)


def objective(f: Signal, cfg: AscentConfig) -> float:
    """J(f) = F(f)^{1/p}/‖f‖²."""
    e = f.energy
    if e == 0:
        raise ZeroSignalError("objective")
    w, cells = _restricted_wigner(f, cfg.mask)
    return _power_sum(w, cells, cfg.p) ** (1.0 / cfg.p) / e


def _value_and_gradient(f: Signal, cfg: AscentConfig) -> tuple[float, Signal]:
    """J and its gradient by the quotient rule."""
    p = cfg.p
    e = f.energy
    w, cells = _restricted_wigner(f, cfg.mask)
    big_f = _power_sum(w, cells, p)
    value = big_f ** (1.0 / p) / e
    if big_f == 0:
        return value, f.scaled(0.0)
    grad_f = wigner_adjoint(symbol_field(w.grid, _symbol(w, cells, p)), f).scaled(2.0)
    g = grad_f.scaled(big_f ** (1.0 / p - 1) / (p * e)) - f.scaled(2 * value / e)
    return value, g


# ═══════════════════════════════════════════════════════════════
# Projected gradient ascent
# ═══════════════════════════════════════════════════════════════


@dataclass
class _RestartOutcome:
    trace: list[float]
    signal: Signal
    converged: bool


def _tangent(g: Signal, f: Signal) -> Signal:
    """Remove the radial component of g at the unit vector f."""
    return g - f.scaled(inner(g, f).real / f.energy)


def _ascend(f0: Signal, cfg: AscentConfig) -> _RestartOutcome:
    f = normalize(f0)
    value, grad = _value_and_gradient(f, cfg)
    trace = [value]
    step = cfg.initial_step
    quiet = 0
    converged = False
    for _ in range(cfg.max_iter):
        direction = _tangent(grad, f)
        slope = direction.energy
        if slope == 0:
            converged = True
            break
        accepted = None
        while step >= cfg.min_step:
            cand = normalize(f + direction.scaled(step))
            cand_value = objective(cand, cfg)
            if cand_value >= value + cfg.sufficient_increase * step * slope:
                accepted = (cand, cand_value)
                break
            step *= cfg.shrink
        if accepted is None:
            converged = True
            break
        rel = (accepted[1] - value) / max(abs(value), np.finfo(float).tiny)
        f, _ = accepted
        value, grad = _value_and_gradient(f, cfg)
        trace.append(value)
        step = min(step / cfg.shrink, cfg.initial_step)
        quiet = quiet + 1 if rel < cfg.tol else 0
        if quiet >= cfg.patience:
            converged = True
            break
    return _RestartOutcome(trace=trace, signal=f, converged=converged)


def restart_dictionary(cfg: AscentConfig) -> list[Signal]:
    """Gaussians at the centroid and mask quantiles, Hermite-1, then seeded random signals."""
    grid = cfg.mask.grid.xgrid
    mask = cfg.mask
    centroid = mask.nearest_cell(mask.centroid())
    points = mask.points()
    quantiles = [points[int(q * (len(points) - 1))] for q in np.linspace(0, 1, 9)[1:-1]]
    inits = [gaussian(grid, centroid)] + [gaussian(grid, z) for z in quantiles]
    inits.append(hermite(grid, 1, centroid))
    band = 1 / (8 * grid.dt)
    k = 0
    while len(inits) < cfg.restarts:
        inits.append(random_signal(cfg.seed + k, band, grid))
        k += 1
    return inits[: cfg.restarts]


def maximize(cfg: AscentConfig, initial: list[Signal] | None = None) -> AscentReport:
    """Multistart projected gradient ascent of J on the unit sphere."""
    _check_ascent_kind(cfg)
    inits = initial if initial is not None else restart_dictionary(cfg)
    outcomes = Parallel(n_jobs=cfg.threads, prefer="threads")(delayed(_ascend)(f0, cfg) for f0 in inits)
    best = 0
    for i, out in enumerate(outcomes):
        incumbent = outcomes[best].trace[-1]
        if out.trace[-1] > incumbent + cfg.tol * max(1.0, abs(incumbent)):
            best = i
        logger.debug("ascent_restart_done", restart=i, value=out.trace[-1], iterations=len(out.trace) - 1)
    winner = outcomes[best]
    logger.info("ascent_finished", best_value=winner.trace[-1], best_restart=best, converged=winner.converged)
    return AscentReport(
        best_value=winner.trace[-1],
        best_signal=winner.signal,
        trace=winner.trace,
        converged=winner.converged,
        restart_values=[o.trace[-1] for o in outcomes],
        best_restart=best,
    )


# ═══════════════════════════════════════════════════════════════
# Linear baseline: localization operator
# ═══════════════════════════════════════════════════════════════


def localization_operator(mask: DomainMask):
    """f ↦ Weyl quantization of χ_Ω applied to f; ⟨Tf, f⟩ = ∫_Ω Wf."""
    cropped = mask.cropped()
    chi = symbol_field(cropped.grid, cropped.cells.astype(float))

    def apply(f: Signal) -> Signal:
        return wigner_adjoint(chi, f)

    return apply


def _power_iterate(apply, f0: Signal, locked: list[Signal], shift: float, tol: float, max_iter: int):
    def project(v: Signal) -> Signal:
        for u in locked:
            v = v - u.scaled(inner(v, u))
        return v

    v = normalize(project(f0))
    eig_prev = math.inf
    eig = 0.0
    for it in range(1, max_iter + 1):
        w = project(apply(v) + v.scaled(shift))
        eig = inner(w, v).real
        v = normalize(w)
        if abs(eig - eig_prev) <= tol * abs(eig):
            return v, eig - shift, it
        eig_prev = eig
    raise StagnationError(max_iter, abs(eig - eig_prev) / max(abs(eig), np.finfo(float).tiny))


def localization_spectrum(
    mask: DomainMask, k: int = 1, tol: float = 1e-10, max_iter: int = 20000, seed: int | None = None
) -> list[LocalizationResult]:
    """Top k eigenpairs of the localization operator by shifted power iteration with deflation."""
    apply = localization_operator(mask)
    shift = 2 * mask.measure
    grid = mask.grid.xgrid
    seed = settings.default_seed if seed is None else seed
    found: list[LocalizationResult] = []
    locked: list[Signal] = []
    for j in range(k):
        start = random_signal(seed + j, 1 / (4 * grid.dt), grid) + gaussian(grid, mask.centroid(), normalized=True)
        vec, eig, its = _power_iterate(apply, start, locked, shift, tol, max_iter)
        locked.append(vec)
        found.append(LocalizationResult(top_eigenvalue=eig, top_eigenfunction=vec, iterations=its))
        logger.debug("localization_eigenpair", index=j, eigenvalue=eig, iterations=its)
    return found


def localization_baseline(
    mask: DomainMask, tol: float = 1e-10, max_iter: int = 20000, seed: int | None = None
) -> LocalizationResult:
    """Dominant eigenpair of sup ∫_Ω Wf over unit f."""
    return localization_spectrum(mask, 1, tol=tol, max_iter=max_iter, seed=seed)[0]


# ═══════════════════════════════════════════════════════════════
# p = ∞: attained Wigner supremum
# ═══════════════════════════════════════════════════════════════


def linfty_optimizer(
    mask: DomainMask, kind: DistributionKind = DistributionKind.WIGNER, odd: bool = False
) -> LinftyResult:
    """f = π(c)g with g even (or odd) and c a cell of Ω; |Wf(c)| = 2‖f‖²."""
    if kind is not DistributionKind.WIGNER:
        raise ParameterError(
            "kind", f"the L^∞ supremum of {kind.value} is not attained; use the non-attaining families"
        )
    grid = mask.grid.xgrid
    center = mask.nearest_cell(mask.centroid())
    profile = hermite(grid, 1) if odd else gaussian(grid, normalized=True)
    f = tf_shift(profile, center)
    w = wigner(f, n_lags=mask.grid.n_lags, rows=mask.row_window)
    value = lp_norm(w, mask, math.inf) / f.energy
    return LinftyResult(value=value, signal=f, center=center)


# ═══════════════════════════════════════════════════════════════
# Non-attaining families in log coordinates
# ═══════════════════════════════════════════════════════════════
# For even f, (Uf)(y) = √2·e^{y/2}·f(e^y) is unitary onto L²(ℝ) and turns the
# dilation D_s into translation by −log s.


def log_grid_for(width: float, reach: float = 0.0, dt: float = 1 / 8, max_n: int = 1 << 18) -> Grid1D:
    """Smallest power-of-two log-coordinate grid holding a width-σ Gaussian shifted by ``reach``."""
    need = 2 * (settings.guard_widths * width + abs(reach)) + 2 * width
    n = 16
    while n * dt < need:
        n *= 2
    if n > max_n:
        raise ParameterError("sigma", f"width {width} needs more than {max_n} log-grid samples")
    return Grid1D(n=n, dt=dt)


def dilation_overlap(profile: LogProfile, s: float) -> complex:
    """⟨D_s f, f⟩ for the even f with U f = ``profile``; equals ⟨D_{−s}f, f⟩."""
    if s <= 0:
        raise ParameterError("s", "dilation factor must be positive")
    moved = tf_shift(profile, PhasePoint(x=-math.log(s)))
    guard_check(moved, "dilation_overlap", strict=True)
    return inner(moved, profile)


def from_log_coordinates(profile: LogProfile, grid: Grid1D, odd: bool = False) -> Signal:
    """(U⁻¹G)(t) = G(log|t|)/(√2·|t|^{1/2}), extended evenly (or oddly)."""
    t = grid.t
    values = np.zeros(grid.n, dtype=np.complex128)
    nz = t != 0
    at = np.abs(t[nz])
    values[nz] = bandlimited_eval(profile, np.log(at)) / np.sqrt(2 * at)
    if odd:
        values[nz] *= np.sign(t[nz])
    return Signal(grid=grid, values=values)


def log_gaussian(grid: Grid1D, width: float) -> LogProfile:
    """Unit-energy Gaussian of the given width in log coordinates."""
    profile = LogProfile(grid=grid, values=gaussian(grid, width=width, normalized=True).values)
    guard_check(profile, "log_gaussian", strict=True)
    return profile


def _widths(m: int, widths: list[float] | None = None) -> list[float]:
    if widths:
        if any(w <= 0 for w in widths):
            raise ParameterError("widths", "family widths must be positive")
        return sorted(float(w) for w in widths)
    if m < 1:
        raise ParameterError("m", "family needs at least one member")
    return [float(2**j) for j in range(m)]


def tau_linfty_family(
    tau: float, m: int, log_grid: Grid1D | None = None, widths: list[float] | None = None
) -> FamilyResult:
    """|W_τ f_σ(0)|/‖f_σ‖² = (τ(1−τ))^{-1/2}·⟨D_{−τ/(1−τ)}f_σ, f_σ⟩ for widening σ."""
    if not 0 < tau < 1 or math.isclose(tau, 0.5):
        raise ParameterError("tau", "tau must lie in (0,1) excluding 1/2, where the supremum is attained")
    s = tau / (1 - tau)
    scale = 1 / math.sqrt(tau * (1 - tau))
    widths = _widths(m, widths)
    values = []
    for sigma in widths:
        grid = log_grid or log_grid_for(sigma, math.log(s))
        profile = log_gaussian(grid, sigma)
        values.append(scale * abs(dilation_overlap(profile, s)))
    return FamilyResult(widths=widths, values=values, sup_predicted=scale)


def sech_kernel(t: np.ndarray) -> np.ndarray:
    """k(t) = 1/(2cosh(t/2))."""
    return 0.5 / np.cosh(0.5 * t)


def khat_exact(nu: np.ndarray) -> np.ndarray:
    return np.pi / np.cosh(2 * np.pi**2 * nu)


def khat_check(n: int = 1024, half_width: float = 60.0) -> float:
    """Max deviation of the numerical k̂ from π·sech(2π²ξ), k sampled on |t| ≤ half_width."""
    grid = Grid1D(n=n, dt=2 * half_width / n)
    khat = dft(Signal(grid=grid, values=sech_kernel(grid.t)))
    return float(np.max(np.abs(khat.values - khat_exact(khat.grid.t))))


def _reflection_parity(odd: bool) -> float:
    """Sign of ⟨D_{-1}f, f⟩ for the extension ``from_log_coordinates`` builds."""
    f = from_log_coordinates(log_gaussian(log_grid_for(1.0), 1.0), Grid1D(n=2048, dt=1 / 64), odd)
    return math.copysign(1.0, inner(dilate(f, -1.0), f).real)


def bj_linfty_family(
    m: int, odd: bool = False, log_grid: Grid1D | None = None, widths: list[float] | None = None
) -> FamilyResult:
    """W_BJ f_σ(0)/‖f_σ‖² = ±∫k̂(ν)|Ĝ_σ(ν)|²dν/‖G_σ‖², below π and increasing in σ."""
    widths = _widths(m, widths)
    sign = _reflection_parity(odd)
    values = []
    for sigma in widths:
        grid = log_grid or log_grid_for(sigma)
        profile = log_gaussian(grid, sigma)
        spectrum = dft(profile)
        density = np.abs(spectrum.values) ** 2
        value = spectrum.grid.dt * np.sum(khat_exact(spectrum.grid.t) * density) / profile.energy
        values.append(sign * float(value))
    return FamilyResult(widths=widths, values=values, sup_predicted=math.pi, khat_check=khat_check())
