"""Signal core: inner products, Fourier transforms, shifts, dilations, test signals.

All translations and dilations are band-limited (trigonometric) interpolations:
signals are zero outside the grid, Fourier operations are periodic, and the
guard check flags mass that reaches the edges.
"""

import math

import numpy as np
import structlog
from scipy import fft as sp_fft
from scipy.special import eval_hermite, gammaln

from phasespace_lab.config import settings
from phasespace_lab.models.grids import Grid1D, PhasePoint
from phasespace_lab.models.signals import Signal
from phasespace_lab.utils.errors import (
    GridMismatchError,
    GuardViolationError,
    ParameterError,
    ZeroSignalError,
)

logger = structlog.get_logger()

_EVAL_CHUNK = 1024


# ═══════════════════════════════════════════════════════════════
# Inner products and norms
# ═══════════════════════════════════════════════════════════════


def inner(f: Signal, g: Signal) -> complex:
    """⟨f, g⟩ = dt·Σ f·conj(g), conjugate-linear in g."""
    if f.grid != g.grid:
        raise GridMismatchError("inner", f"{f.grid} vs {g.grid}")
    return complex(f.grid.dt * np.sum(f.values * np.conj(g.values)))


def energy(f: Signal) -> float:
    return f.energy


def normalize(f: Signal) -> Signal:
    e = f.energy
    if e == 0:
        raise ZeroSignalError("normalize")
    return f.scaled(1.0 / math.sqrt(e))


# ═══════════════════════════════════════════════════════════════
# Fourier transforms (centered, unitary approximation of ∫e^{-2πiνt}f(t)dt)
# ═══════════════════════════════════════════════════════════════


def centered_fft(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Σ_m x_m e^{-2πi k m/N} with both indices centered on N/2."""
    shifted = sp_fft.ifftshift(values, axes=axis)
    return sp_fft.fftshift(sp_fft.fft(shifted, axis=axis), axes=axis)


def centered_ifft(values: np.ndarray, axis: int = -1) -> np.ndarray:
    shifted = sp_fft.ifftshift(values, axes=axis)
    return sp_fft.fftshift(sp_fft.ifft(shifted, axis=axis), axes=axis)


def dft(f: Signal) -> Signal:
    """Samples of f̂ on the dual grid (spacing 1/(n·dt))."""
    return Signal(grid=f.grid.dual(), values=f.grid.dt * centered_fft(f.values))


def idft(F: Signal) -> Signal:
    grid = F.grid.dual()
    return Signal(grid=grid, values=centered_ifft(F.values) / grid.dt)


# ═══════════════════════════════════════════════════════════════
# Shifts, modulations, dilations
# ═══════════════════════════════════════════════════════════════


def _translation_phase(grid: Grid1D, x: float) -> np.ndarray:
    nu = grid.fft_frequencies
    phase = np.exp(-2j * np.pi * nu * x)
    # Nyquist bin split evenly between ±1/(2dt)
    phase[grid.n // 2] = math.cos(math.pi * x / grid.dt)
    return phase


def translate(f: Signal, x: float) -> Signal:
    """Samples of f(t − x)."""
    if x == 0:
        return f
    spectrum = sp_fft.fft(f.values) * _translation_phase(f.grid, x)
    return f.with_values(sp_fft.ifft(spectrum))


def modulate(f: Signal, xi: float) -> Signal:
    """Samples of e^{2πiξt}·f(t)."""
    if xi == 0:
        return f
    return f.with_values(np.exp(2j * np.pi * xi * f.grid.t) * f.values)


def tf_shift(f: Signal, z: PhasePoint) -> Signal:
    """π(z)f(t) = e^{2πiξt}·f(t − x): translation first, then modulation."""
    out = modulate(translate(f, z.x), z.xi)
    tail = tail_fraction(out)
    if tail > settings.guard_fraction:
        logger.warning("guard_violation", operation="tf_shift", tail_fraction=tail, x=z.x, xi=z.xi)
    return out


def bandlimited_eval(f: Signal, points: np.ndarray) -> np.ndarray:
    """Trigonometric interpolant of f at arbitrary points; zero outside the grid."""
    grid = f.grid
    pts = np.asarray(points, dtype=float)
    spectrum = sp_fft.fft(f.values) / grid.n
    nu = grid.fft_frequencies
    t0 = grid.t[0]
    t_last = grid.t[-1]
    flat = pts.ravel()
    out = np.zeros(flat.shape, dtype=np.complex128)
    nyq = grid.n // 2
    for lo in range(0, flat.size, _EVAL_CHUNK):
        u = flat[lo : lo + _EVAL_CHUNK] - t0
        kernel = np.exp(2j * np.pi * u[:, None] * nu[None, :])
        kernel[:, nyq] = np.cos(np.pi * u / grid.dt)
        out[lo : lo + _EVAL_CHUNK] = kernel @ spectrum
    tol = 1e-9 * grid.dt
    out[(flat < t0 - tol) | (flat > t_last + tol)] = 0.0
    return out.reshape(pts.shape)


def dilate(f: Signal, a: float) -> Signal:
    """D_a f(t) = |a|^{1/2}·f(a·t)."""
    if a == 0:
        raise ParameterError("a", "dilation factor must be nonzero")
    if a == 1:
        return f
    return f.with_values(math.sqrt(abs(a)) * bandlimited_eval(f, a * f.grid.t))


# ═══════════════════════════════════════════════════════════════
# Boundary guard
# ═══════════════════════════════════════════════════════════════


def tail_fraction(f: Signal, band: float = 1 / 16) -> float:
    """Share of the energy in the outer ``band`` of the grid, in time or in frequency."""
    e = np.abs(f.values) ** 2
    total = float(e.sum())
    if total == 0:
        return 0.0
    edge = max(1, int(band * f.grid.n))
    spec = np.abs(centered_fft(f.values)) ** 2
    time_tail = float(e[:edge].sum() + e[-edge:].sum()) / total
    freq_tail = float(spec[:edge].sum() + spec[-edge:].sum()) / float(spec.sum())
    return max(time_tail, freq_tail)


def guard_check(f: Signal, operation: str, strict: bool = False) -> float:
    """Tail fraction of f; raises in strict mode, otherwise warns, past the guard."""
    tail = tail_fraction(f)
    if tail > settings.guard_fraction:
        if strict:
            raise GuardViolationError(operation, tail, settings.guard_fraction)
        logger.warning("guard_violation", operation=operation, tail_fraction=tail)
    return tail


def packet_fits(grid: Grid1D, center: float, width: float = 1.0) -> bool:
    """Whether a packet of the given width clears the edges by ``guard_widths`` widths."""
    return abs(center) + settings.guard_widths * width <= grid.half_width - grid.dt


# ═══════════════════════════════════════════════════════════════
# Test signals
# ═══════════════════════════════════════════════════════════════


def gaussian(
    grid: Grid1D,
    center: PhasePoint | None = None,
    width: float = 1.0,
    normalized: bool = False,
) -> Signal:
    """e^{2πiξt}·e^{−π((t−x)/width)²}, sampled exactly."""
    z = center or PhasePoint()
    t = grid.t
    values = np.exp(-np.pi * ((t - z.x) / width) ** 2)
    if z.xi:
        values = values * np.exp(2j * np.pi * z.xi * t)
    g = Signal(grid=grid, values=values)
    return normalize(g) if normalized else g


def hermite(grid: Grid1D, order: int, center: PhasePoint | None = None) -> Signal:
    """L²-normalized Hermite function h_k(t) = c_k·H_k(√(2π)t)·e^{−πt²}, shifted by π(center)."""
    if order < 0:
        raise ParameterError("order", "must be nonnegative")
    z = center or PhasePoint()
    s = grid.t - z.x
    log_c = 0.25 * math.log(2) - 0.5 * (order * math.log(2) + gammaln(order + 1))
    values = math.exp(log_c) * eval_hermite(order, math.sqrt(2 * math.pi) * s) * np.exp(-np.pi * s**2)
    if z.xi:
        values = values * np.exp(2j * np.pi * z.xi * grid.t)
    return Signal(grid=grid, values=values)


def random_signal(seed: int, band: float, grid: Grid1D) -> Signal:
    """Seeded unit-energy signal with spectrum supported on |ν| ≤ band."""
    nyquist = 1 / (2 * grid.dt)
    if not 0 < band < nyquist:
        raise ParameterError("band", f"must lie in (0, {nyquist}), got {band}")
    rng = np.random.default_rng(seed)
    nu = grid.fft_frequencies
    inside = np.abs(nu) <= band
    inside[grid.n // 2] = False
    spectrum = np.zeros(grid.n, dtype=np.complex128)
    k = int(inside.sum())
    spectrum[inside] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return normalize(Signal(grid=grid, values=sp_fft.ifft(spectrum)))
