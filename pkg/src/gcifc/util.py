"""Small shared numerics: Shannon cap function and friends. Bits throughout."""

from __future__ import annotations

import numpy as np


def cap(x):
    """log2(1 + x) with tiny negative arguments clamped to zero."""
    return np.log2(1.0 + np.maximum(x, 0.0))


def pos(x):
    """Positive part."""
    return np.maximum(x, 0.0)


def alpha_of_r1(x, p1: float):
    """Invert r1 = cap(alpha * p1) on [0, cap(p1)]; alpha=1 when p1=0.

    Endpoint values are snapped exactly to 0/1: the inversion's rounding
    (~1 ulp) would otherwise be amplified by the sqrt(1 - alpha) terms.
    """
    if p1 <= 0.0:
        return np.ones_like(np.asarray(x, dtype=float))
    a = (np.exp2(np.asarray(x, dtype=float)) - 1.0) / p1
    a = np.where(a > 1.0 - 1e-12, 1.0, a)
    a = np.where(a < 1e-15, 0.0, a)
    return np.clip(a, 0.0, 1.0)


def r1_grid(p1: float, grid: int):
    """Uniform r1 grid [0, cap(p1)]; a single origin point when p1 = 0."""
    top = float(cap(p1))
    if top <= 0.0:
        return np.array([0.0])
    return np.linspace(0.0, top, grid)
