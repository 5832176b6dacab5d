"""Walk propagation by spectral sums.

Both dynamics share one Laplacian eigensystem. The continuous-time
random walk evolves probabilities with weights exp(-gamma*lambda*t); the
quantum walk evolves amplitudes with phases exp(-i*gamma*lambda*t) and
takes squared magnitudes. Spectral summation is exact at any t, so there
is no step-size error anywhere downstream.

Full transition fields are dense (T, N, N) arrays. A guard caps the
entry count (default 2**28) because a long fine grid on a mid-size graph
silently becomes tens of gigabytes otherwise; the chunked iterators
below are the way around it for streaming consumers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._kernels import classical_block, quantum_block
from .graphs import Graph
from .spectral import Eigensystem, laplacian_eigensystem

__all__ = [
    "TimeGrid",
    "TransitionField",
    "MemoryGuardError",
    "MEMORY_CAP_ENTRIES",
    "eigensystem_of",
    "classical_field",
    "quantum_field",
    "classical_column",
    "quantum_column",
    "propagator",
    "amplitude_propagator",
    "iter_probability_blocks",
    "compose_check",
]

MEMORY_CAP_ENTRIES = 2**28

STOCHASTIC_ATOL = 1e-10


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing non-negative times, in units of 1/gamma."""

    times: np.ndarray
    gamma: float = 1.0

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("times must be a non-empty 1-D array")
        if not np.isfinite(times).all():
            raise ValueError("times must be finite")
        if times[0] < 0:
            raise ValueError("times must be non-negative")
        if (np.diff(times) <= 0).any():
            raise ValueError("times must be strictly increasing")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        times.setflags(write=False)
        object.__setattr__(self, "times", times)

    @classmethod
    def regular(
        cls, t_max: float, step: float, gamma: float = 1.0, t_min: float = 0.0
    ) -> "TimeGrid":
        if step <= 0:
            raise ValueError("step must be positive")
        if t_max < t_min:
            raise ValueError("t_max must be >= t_min")
        count = int(round((t_max - t_min) / step)) + 1
        return cls(np.linspace(t_min, t_min + step * (count - 1), count), gamma)

    def __len__(self) -> int:
        return self.times.size


class MemoryGuardError(ValueError):
    """Grid times N*N exceeds the entry cap for a dense field."""


def _guard(node_count: int, time_count: int, max_entries: int):
    entries = node_count * node_count * time_count
    if entries > max_entries:
        raise MemoryGuardError(
            f"dense field needs {entries} entries for N={node_count}, "
            f"|times|={time_count}; cap is {max_entries}. "
            "Use a coarser grid, fewer times, or the chunked iterators."
        )


def eigensystem_of(source: Graph | Eigensystem) -> Eigensystem:
    if isinstance(source, Eigensystem):
        return source
    return laplacian_eigensystem(source.laplacian())


@dataclass(frozen=True)
class TransitionField:
    """Transition tables on a time grid.

    `data[i]` is the N x N table at `grid.times[i]`: probabilities
    p_{k,j} for the classical kind, amplitudes alpha_{k,j} for the
    quantum kind, indexed [target k, source j].
    """

    grid: TimeGrid
    kind: str
    data: np.ndarray

    def __post_init__(self):
        if self.kind not in ("classical", "quantum"):
            raise ValueError("kind must be 'classical' or 'quantum'")
        if self.data.ndim != 3 or self.data.shape[1] != self.data.shape[2]:
            raise ValueError("data must be (T, N, N)")
        if self.data.shape[0] != len(self.grid):
            raise ValueError("data length must match the grid")
        self.data.setflags(write=False)

    @property
    def node_count(self) -> int:
        return self.data.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def probabilities(self) -> np.ndarray:
        if self.kind == "classical":
            return self.data
        return np.abs(self.data) ** 2

    @property
    def amplitudes(self) -> np.ndarray:
        if self.kind != "quantum":
            raise ValueError("classical fields carry no amplitudes")
        return self.data

    def at(self, t: float) -> np.ndarray:
        """Probability table at a grid time (exact match required)."""
        idx = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[idx] - t) > 1e-9:
            raise ValueError(f"t={t} is not on the grid")
        return self.probabilities[idx]


def _validate_probabilities(probs: np.ndarray, times: np.ndarray):
    if probs.min() < -STOCHASTIC_ATOL:
        raise ValueError(f"negative probability {probs.min()} breaches tolerance")
    sums = probs.sum(axis=1)
    err = np.abs(sums - 1.0).max()
    if err > STOCHASTIC_ATOL:
        raise ValueError(f"column sums deviate from 1 by {err}")
    if times[0] == 0.0:
        n = probs.shape[1]
        dev = np.abs(probs[0] - np.eye(n)).max()
        if dev > STOCHASTIC_ATOL:
            raise ValueError(f"t=0 table deviates from identity by {dev}")


def classical_field(
    source: Graph | Eigensystem,
    grid: TimeGrid,
    max_entries: int = MEMORY_CAP_ENTRIES,
    validate: bool = True,
) -> TransitionField:
    """Exact master-equation solution p_{k,j}(t) at every grid time."""
    eig = eigensystem_of(source)
    _guard(eig.values.size, len(grid), max_entries)
    data = classical_block(eig.vectors, eig.values, grid.times, grid.gamma)
    if validate:
        _validate_probabilities(data, grid.times)
    np.clip(data, 0.0, None, out=data)
    return TransitionField(grid, "classical", data)


def quantum_field(
    source: Graph | Eigensystem,
    grid: TimeGrid,
    max_entries: int = MEMORY_CAP_ENTRIES,
    validate: bool = True,
) -> TransitionField:
    """Unitary amplitudes alpha_{k,j}(t) at every grid time."""
    eig = eigensystem_of(source)
    _guard(eig.values.size, len(grid), max_entries)
    data = quantum_block(eig.vectors, eig.values, grid.times, grid.gamma)
    field = TransitionField(grid, "quantum", data)
    if validate:
        _validate_probabilities(field.probabilities, grid.times)
    return field


def classical_column(
    source: Graph | Eigensystem, grid: TimeGrid, start: int
) -> np.ndarray:
    """p_{k,start}(t) as a (T, N) array; memory-light single-source run."""
    eig = eigensystem_of(source)
    row = eig.vectors[start]
    weights = np.exp(-grid.gamma * np.outer(grid.times, eig.values))
    return (weights * row) @ eig.vectors.T


def quantum_column(
    source: Graph | Eigensystem, grid: TimeGrid, start: int
) -> np.ndarray:
    """alpha_{k,start}(t) as a complex (T, N) array."""
    eig = eigensystem_of(source)
    row = eig.vectors[start]
    phases = np.exp(-1j * grid.gamma * np.outer(grid.times, eig.values))
    return (phases * row) @ eig.vectors.T


def propagator(source: Graph | Eigensystem, t: float, gamma: float = 1.0) -> np.ndarray:
    """Single classical table exp(-gamma*L*t)."""
    eig = eigensystem_of(source)
    weights = np.exp(-gamma * t * eig.values)
    return (eig.vectors * weights) @ eig.vectors.T


def amplitude_propagator(
    source: Graph | Eigensystem, t: float, gamma: float = 1.0
) -> np.ndarray:
    """Single quantum table exp(-i*gamma*L*t)."""
    eig = eigensystem_of(source)
    phases = np.exp(-1j * gamma * t * eig.values)
    return (eig.vectors.astype(np.complex128) * phases) @ eig.vectors.T


def iter_probability_blocks(
    source: Graph | Eigensystem,
    grid: TimeGrid,
    kind: str,
    chunk: int = 128,
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (times, probability block) pairs without holding the full field.

    The block for a chunk has shape (len(times), N, N); peak memory is
    one chunk regardless of grid length.
    """
    if kind not in ("classical", "quantum"):
        raise ValueError("kind must be 'classical' or 'quantum'")
    eig = eigensystem_of(source)
    times = grid.times
    for lo in range(0, times.size, chunk):
        part = times[lo : lo + chunk]
        if kind == "classical":
            block = classical_block(eig.vectors, eig.values, part, grid.gamma)
            np.clip(block, 0.0, None, out=block)
        else:
            amp = quantum_block(eig.vectors, eig.values, part, grid.gamma)
            block = np.abs(amp) ** 2
        yield part, block


def compose_check(
    source: Graph | Eigensystem,
    t1: float,
    t2: float,
    gamma: float = 1.0,
    atol: float = 1e-8,
) -> bool:
    """True iff both propagator families compose: U(t1) U(t2) = U(t1+t2)."""
    if t1 < 0 or t2 < 0:
        raise ValueError("times must be non-negative")
    eig = eigensystem_of(source)
    for one_step in (propagator, amplitude_propagator):
        combined = one_step(eig, t1 + t2, gamma)
        split = one_step(eig, t1, gamma) @ one_step(eig, t2, gamma)
        if np.abs(split - combined).max() > atol:
            return False
    return True
