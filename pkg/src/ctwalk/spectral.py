"""Laplacian eigensystems and the exact gasket-dual spectrum.

The dual gasket Laplacian spectrum never needs numerical
diagonalization: it obeys a decimation recursion in which every nonzero
eigenvalue of generation g spawns the two roots of
lambda**2 - 5*lambda + parent = 0 at generation g + 1, alongside a fresh
base set {0, 3, 5} whose multiplicities follow counting rules. All
produced values stay distinct (children sit in (0, 2) and (3, 5), the
bases at 0, 3, 5, and parents below 6), so no merging step is needed.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = [
    "Eigensystem",
    "laplacian_eigensystem",
    "degenerate_classes",
    "class_values",
    "dsg_spectrum",
    "dsg_distinct_count",
]


class Eigensystem(NamedTuple):
    """Ascending eigenvalues and orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray


def laplacian_eigensystem(laplacian: np.ndarray) -> Eigensystem:
    if (np.abs(laplacian - laplacian.T) > 0).any():
        raise ValueError("laplacian must be symmetric")
    values, vectors = np.linalg.eigh(laplacian)
    return Eigensystem(values, vectors)


def degenerate_classes(values: np.ndarray, tol: float = 1e-8) -> list[np.ndarray]:
    """Group sorted eigenvalues into degeneracy classes by gap.

    Consecutive values closer than `tol` share a class. Returns index
    arrays into `values`, in ascending order of the class eigenvalue.
    """
    values = np.asarray(values)
    if values.size == 0:
        return []
    if (np.diff(values) < -tol).any():
        raise ValueError("values must be sorted ascending")
    breaks = np.flatnonzero(np.diff(values) > tol) + 1
    return np.split(np.arange(values.size), breaks)


def class_values(values: np.ndarray, classes: list[np.ndarray]) -> np.ndarray:
    """Representative eigenvalue per class (mean over its members)."""
    return np.array([values[idx].mean() for idx in classes])


def dsg_spectrum(generation: int) -> tuple[np.ndarray, np.ndarray]:
    """Exact dual-gasket spectrum: (distinct values, multiplicities).

    Runs the decimation recursion from generation 1 upward; integer
    multiplicities, float values. Values come back sorted ascending.
    """
    if generation < 1:
        raise ValueError("generation must be >= 1")
    levels: list[tuple[float, int]] = [(0.0, 1), (3.0, 2)]
    for g in range(2, generation + 1):
        nxt: list[tuple[float, int]] = [(0.0, 1), (3.0, (3 ** (g - 1) + 3) // 2)]
        m5 = (3 ** (g - 1) - 1) // 2
        if m5:
            nxt.append((5.0, m5))
        for value, mult in levels:
            if value == 0.0:
                continue
            root = np.sqrt(25.0 - 4.0 * value)
            nxt.append(((5.0 - root) / 2.0, mult))
            nxt.append(((5.0 + root) / 2.0, mult))
        levels = nxt
    levels.sort()
    values = np.array([v for v, _ in levels])
    mults = np.array([m for _, m in levels], dtype=np.int64)
    assert mults.sum() == 3**generation
    return values, mults


def dsg_distinct_count(generation: int) -> int:
    """Number of distinct dual-gasket eigenvalues: 3 * 2**(g-1) - 1."""
    if generation < 1:
        raise ValueError("generation must be >= 1")
    return 3 * 2 ** (generation - 1) - 1
