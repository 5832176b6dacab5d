"""Closed-form infinite-lattice baselines.

On the infinite chain the quantum transition probability from the
origin is J_k(2t)**2, hypercubic lattices factorize into per-axis chain
factors, and the mean chemical displacement has an exact two-Bessel
form with the 4t/pi ballistic asymptote. These serve as analytic
references for the finite-graph simulations, valid until the walk
wraps around.

Bessel values come from the in-house evaluator in _kernels: ascending
series at small argument, normalized downward recurrence otherwise.
No special-function library is involved at runtime.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, sqrt

import numpy as np

from ._kernels import bessel_orders

__all__ = [
    "BesselConfig",
    "DEFAULT_BESSEL",
    "bessel_j",
    "bessel_j_row",
    "default_truncation",
    "chain_pi_infinite",
    "chain_pi_profile",
    "chain_displacement_exact",
    "chain_displacement_by_summation",
    "hypercubic_pi_factorized",
    "hypercubic_displacement",
    "euclidean_bounds",
    "euclidean_displacement_avg",
    "prewrap_horizon",
]


@dataclass(frozen=True)
class BesselConfig:
    """Accuracy knobs for the Bessel evaluator."""

    rel_tolerance: float = 1e-12
    max_order: int = 2048

    def __post_init__(self):
        if not 0 < self.rel_tolerance <= 1e-6:
            raise ValueError("rel_tolerance must lie in (0, 1e-6]")
        if self.max_order < 1:
            raise ValueError("max_order must be positive")


DEFAULT_BESSEL = BesselConfig()


def bessel_j_row(kmax: int, z: float, cfg: BesselConfig = DEFAULT_BESSEL) -> np.ndarray:
    """J_0(z) .. J_kmax(z) in one evaluation."""
    if z < 0:
        raise ValueError("argument must be non-negative")
    if kmax > cfg.max_order:
        raise ValueError(f"order {kmax} exceeds configured max {cfg.max_order}")
    return bessel_orders(int(kmax), float(z), cfg.rel_tolerance)


def bessel_j(k: int, z: float, cfg: BesselConfig = DEFAULT_BESSEL) -> float:
    """J_k(z) for integer k of either sign."""
    order = abs(int(k))
    value = float(bessel_j_row(order, z, cfg)[order])
    if k < 0 and order % 2 == 1:
        return -value
    return value


def default_truncation(t: float) -> int:
    """Order cutoff 2*ceil(2t)+40: safely past the Bessel decay shoulder."""
    return 2 * ceil(2.0 * abs(t)) + 40


def chain_pi_infinite(k: int, t: float, cfg: BesselConfig = DEFAULT_BESSEL) -> float:
    """Quantum probability of sitting k sites from the start at time t."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return bessel_j(k, 2.0 * t, cfg) ** 2


def chain_pi_profile(
    kmax: int, t: float, cfg: BesselConfig = DEFAULT_BESSEL
) -> np.ndarray:
    """J_k(2t)**2 for k = 0..kmax."""
    return bessel_j_row(kmax, 2.0 * t, cfg) ** 2


def chain_displacement_exact(t: float, cfg: BesselConfig = DEFAULT_BESSEL) -> float:
    """Mean chemical displacement on the infinite chain, closed form.

    z*(z*(J_0(z)**2 + J_1(z)**2) - J_0(z)*J_1(z)) at z = 2t; grows as
    4t/pi once the oscillatory terms average out.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    z = 2.0 * t
    j0, j1 = bessel_j_row(1, z, cfg)
    return z * (z * (j0 * j0 + j1 * j1) - j0 * j1)


def chain_displacement_by_summation(
    t: float, cfg: BesselConfig = DEFAULT_BESSEL
) -> float:
    """2 * sum_k k*J_k(2t)**2: the independent summation route."""
    if t < 0:
        raise ValueError("t must be non-negative")
    kmax = default_truncation(t)
    profile = chain_pi_profile(kmax, t, cfg)
    orders = np.arange(kmax + 1, dtype=np.float64)
    return float(2.0 * (orders * profile).sum())


def hypercubic_pi_factorized(
    coords: tuple[int, ...], t: float, cfg: BesselConfig = DEFAULT_BESSEL
) -> float:
    """Product over axes of the chain probability; exact on Z^d."""
    if t < 0:
        raise ValueError("t must be non-negative")
    value = 1.0
    for k in coords:
        value *= chain_pi_infinite(int(k), t, cfg)
    return value


def hypercubic_displacement(
    dimension: int, t: float, cfg: BesselConfig = DEFAULT_BESSEL
) -> float:
    """Mean chemical displacement on Z^d: d times the chain value."""
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    return dimension * chain_displacement_exact(t, cfg)


def euclidean_bounds(chemical: float, dimension: int = 2) -> tuple[float, float]:
    """Straight-line distance bracket implied by a chemical distance.

    ell/sqrt(3) <= ||k - j|| <= ell holds on hypercubic lattices in any
    dimension; the bracket itself does not tighten with d.
    """
    if chemical < 0:
        raise ValueError("chemical distance must be non-negative")
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    return (chemical / sqrt(3.0), chemical)


def euclidean_displacement_avg(
    dimension: int,
    t: float,
    truncation: int | None = None,
    cfg: BesselConfig = DEFAULT_BESSEL,
) -> float:
    """Mean straight-line displacement on Z^d by explicit summation.

    Sums ||k|| * prod_j J_{k_j}(2t)**2 over the truncated coordinate
    box. The captured-mass deficit must stay below 1e-8, otherwise the
    truncation is declared too small.
    """
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    if t < 0:
        raise ValueError("t must be non-negative")
    needed = default_truncation(t)
    if truncation is None:
        truncation = needed
    if truncation < needed:
        raise ValueError(f"truncation {truncation} below required {needed}")
    if (2 * truncation + 1) ** dimension > 2**26:
        raise ValueError("coordinate box too large; reduce dimension or t")
    half = chain_pi_profile(truncation, t, cfg)
    axis = np.concatenate([half[:0:-1], half])
    coords = np.arange(-truncation, truncation + 1, dtype=np.float64)
    mesh = np.meshgrid(*([coords] * dimension), indexing="ij")
    weight = np.ones_like(mesh[0])
    for a in range(dimension):
        shape = [1] * dimension
        shape[a] = axis.size
        weight = weight * axis.reshape(shape)
    mass = weight.sum()
    if 1.0 - mass > 1e-8:
        raise ValueError(f"captured mass {mass} misses 1 by more than 1e-8")
    radius = np.sqrt(sum(m**2 for m in mesh))
    return float((radius * weight).sum())


def prewrap_horizon(side: int) -> float:
    """Time up to which a size-`side` periodic lattice mimics the infinite one.

    The ballistic front moves about two sites per unit time; side/8
    keeps counter-propagating fronts from meeting, with margin.
    """
    return side / 8.0
