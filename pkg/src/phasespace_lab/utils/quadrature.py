"""Gauss–Legendre rules for the τ-quadrature."""

from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre


@lru_cache(maxsize=32)
def _reference_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(order)
    return x, w


def gauss_legendre(a: float, b: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _reference_rule(order)
    points = 0.5 * (b - a) * x + 0.5 * (b + a)
    weights = 0.5 * (b - a) * w
    return points, weights


def composite_gauss_legendre(
    nodes: int, order: int, a: float = 0.0, b: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """``nodes // order`` equal panels on [a, b], each with an ``order``-point rule."""
    panels = max(nodes // order, 1)
    edges = np.linspace(a, b, panels + 1)
    pts, wts = zip(*(gauss_legendre(lo, hi, order) for lo, hi in zip(edges[:-1], edges[1:])))
    return np.concatenate(pts), np.concatenate(wts)


def tau_nodes(nodes: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes τ ∈ (0,1) and weights for ∫₀¹ φ(τ)dτ via τ = (1 − cos πu)/2."""
    u, w = composite_gauss_legendre(nodes, order)
    tau = 0.5 * (1 - np.cos(np.pi * u))
    return tau, w * 0.5 * np.pi * np.sin(np.pi * u)
