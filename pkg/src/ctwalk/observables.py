"""Transport and localization observables.

Displacement series weigh transition probabilities with a distance
table. Return probabilities come in three eigen-structure flavors: the
classical site average needs eigenvalues only, the quantum site average
needs eigenvectors, and the Cauchy-Schwarz lower bound again needs only
eigenvalues with multiplicities. Long-time averages collapse the time
integral exactly over degeneracy classes.

Everything here is pure; series functions return plain float arrays
aligned with the grid that produced them.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .dynamics import TimeGrid, TransitionField, eigensystem_of, iter_probability_blocks
from .graphs import Graph
from .spectral import Eigensystem, class_values, degenerate_classes

__all__ = [
    "avg_displacement_from_site",
    "site_averaged_displacement",
    "displacement_series",
    "windowed_time_average",
    "stationary_quantum_displacement",
    "return_prob_classical",
    "return_prob_quantum",
    "return_prob_lower_bound",
    "lta_matrix",
    "lta_mean",
    "lta_lower_bound",
    "dsg_lta_lb_closed_form",
    "eta_ratio",
    "local_maxima",
    "envelope_exponent",
    "crossing_time",
    "time_averaged_probabilities",
]


def _check_distance_table(dist: np.ndarray, n: int):
    if dist.shape != (n, n):
        raise ValueError(
            f"distance table shape {dist.shape} does not match node count {n}"
        )


def avg_displacement_from_site(
    field: TransitionField, dist: np.ndarray, start: int
) -> np.ndarray:
    """<r_start(t)>: distance-weighted probability of the start column."""
    _check_distance_table(dist, field.node_count)
    column = field.probabilities[:, :, start]
    return column @ dist[:, start].astype(np.float64)


def site_averaged_displacement(field: TransitionField, dist: np.ndarray) -> np.ndarray:
    """<r(t)>: mean of the per-site series over all starting sites."""
    _check_distance_table(dist, field.node_count)
    weights = dist.astype(np.float64)
    return np.einsum("tkj,kj->t", field.probabilities, weights) / field.node_count


def displacement_series(
    source: Graph | Eigensystem,
    grid: TimeGrid,
    dist: np.ndarray,
    kind: str,
    start: int | None = None,
    chunk: int = 128,
) -> np.ndarray:
    """Chunked displacement series; full-field twin of the two above.

    With `start` given this is the single-site series, otherwise the
    site average. Peak memory is one chunk of tables.
    """
    eig = eigensystem_of(source)
    n = eig.values.size
    _check_distance_table(dist, n)
    weights = dist.astype(np.float64)
    out = np.empty(len(grid))
    pos = 0
    for _, block in iter_probability_blocks(eig, grid, kind, chunk):
        if start is None:
            vals = np.einsum("tkj,kj->t", block, weights) / n
        else:
            vals = block[:, :, start] @ weights[:, start]
        out[pos : pos + vals.size] = vals
        pos += vals.size
    return out


def windowed_time_average(
    times: np.ndarray, values: np.ndarray, t0: float, t1: float
) -> float:
    """Trapezoidal mean of a series over [t0, t1], on grid points."""
    if not t1 > t0:
        raise ValueError("window must satisfy t1 > t0")
    if t0 < times[0] - 1e-9 or t1 > times[-1] + 1e-9:
        raise ValueError(
            f"window [{t0}, {t1}] lies outside the grid span "
            f"[{times[0]}, {times[-1]}]"
        )
    mask = (times >= t0 - 1e-12) & (times <= t1 + 1e-12)
    if mask.sum() < 2:
        raise ValueError("window contains fewer than two grid points")
    tw = times[mask]
    return float(np.trapezoid(values[mask], tw) / (tw[-1] - tw[0]))


def stationary_quantum_displacement(
    field: TransitionField, dist: np.ndarray, window: tuple[float, float]
) -> float:
    """Finite-window estimate of the long-run quantum displacement."""
    series = site_averaged_displacement(field, dist)
    return windowed_time_average(field.times, series, *window)


def return_prob_classical(
    values: np.ndarray,
    grid: TimeGrid,
    multiplicities: np.ndarray | None = None,
) -> np.ndarray:
    """Site-averaged return probability; eigenvalues are all it takes."""
    values = np.asarray(values, dtype=np.float64)
    if multiplicities is None:
        multiplicities = np.ones(values.size)
    weights = np.asarray(multiplicities, dtype=np.float64)
    n = weights.sum()
    decay = np.exp(-grid.gamma * np.outer(grid.times, values))
    return (decay @ weights) / n


def return_prob_quantum(source: Graph | Eigensystem, grid: TimeGrid) -> np.ndarray:
    """Site-averaged quantum return probability (needs eigenvectors)."""
    eig = eigensystem_of(source)
    overlap = eig.vectors**2
    phases = np.exp(-1j * grid.gamma * np.outer(grid.times, eig.values))
    diag = phases @ overlap.T
    return (np.abs(diag) ** 2).mean(axis=1)


def return_prob_lower_bound(
    values: np.ndarray,
    grid: TimeGrid,
    multiplicities: np.ndarray | None = None,
) -> np.ndarray:
    """|mean phase|**2: the eigenvalue-only floor under the quantum return."""
    values = np.asarray(values, dtype=np.float64)
    if multiplicities is None:
        multiplicities = np.ones(values.size)
    weights = np.asarray(multiplicities, dtype=np.float64)
    n = weights.sum()
    phases = np.exp(-1j * grid.gamma * np.outer(grid.times, values))
    return np.abs((phases @ weights) / n) ** 2


def lta_matrix(
    source: Graph | Eigensystem,
    classes: list[np.ndarray] | None = None,
    tol: float = 1e-8,
) -> np.ndarray:
    """Long-time average of the quantum transition table, exactly.

    Oscillating cross terms integrate to zero, so only eigenvalue-equal
    pairs survive; per degeneracy class the contribution is the squared
    class projector.
    """
    eig = eigensystem_of(source)
    if classes is None:
        classes = degenerate_classes(eig.values, tol)
    sizes = sum(idx.size for idx in classes)
    if sizes != eig.values.size:
        raise ValueError("classes do not cover the spectrum")
    chi = np.zeros((eig.values.size,) * 2)
    for idx in classes:
        spread = eig.values[idx].max() - eig.values[idx].min()
        if spread > 1e-6:
            raise ValueError(
                f"class spans eigenvalue range {spread}; not a degeneracy class"
            )
        block = eig.vectors[:, idx]
        chi += (block @ block.T) ** 2
    return chi


def lta_mean(chi: np.ndarray) -> float:
    """Long-time average of the site-averaged return probability."""
    return float(np.trace(chi) / chi.shape[0])


def lta_lower_bound(multiplicities) -> float:
    """Multiplicity floor: sum(m**2) / N**2."""
    mults = np.asarray(multiplicities, dtype=np.int64)
    n = int(mults.sum())
    return float((mults.astype(np.float64) ** 2).sum() / n**2)


def dsg_lta_lb_closed_form(generation: int) -> float:
    """Closed form of the gasket-dual multiplicity floor.

    Exact rational evaluation of
    (1/3**2g) * (3**g * (1 + 3**g/14) + (10/7)*2**g - 3/2);
    decreases with g toward 1/14 from above.
    """
    if generation < 1:
        raise ValueError("generation must be >= 1")
    g = generation
    total = (
        3**g * Fraction(14 + 3**g, 14)
        + Fraction(10 * 2**g, 7)
        - Fraction(3, 2)
    )
    return float(total / 3 ** (2 * g))


def eta_ratio(chi_bar: float, chi_bar_lb: float) -> float:
    if not chi_bar_lb > 0:
        raise ValueError("lower bound must be positive")
    return chi_bar / chi_bar_lb


def local_maxima(times: np.ndarray, values: np.ndarray) -> list[int]:
    """Indices of interior local maxima; plateaus keep the earliest point."""
    idx = []
    n = values.size
    for i in range(1, n - 1):
        if values[i] <= values[i - 1]:
            continue
        j = i
        while j + 1 < n and values[j + 1] == values[i]:
            j += 1
        if j + 1 < n and values[j + 1] < values[i]:
            idx.append(i)
    return idx


def envelope_exponent(
    times: np.ndarray, values: np.ndarray, window: tuple[float, float]
) -> float:
    """Slope of log(value) against log(t) through the local maxima in window.

    Needs at least three maxima to pin a line; fewer raise ValueError.
    """
    t0, t1 = window
    peaks = [
        i for i in local_maxima(times, values) if t0 < times[i] <= t1 + 1e-12
    ]
    if len(peaks) < 3:
        raise ValueError(
            f"only {len(peaks)} local maxima in ({t0}, {t1}]; "
            "at least 3 needed to support an envelope"
        )
    log_t = np.log(times[peaks])
    log_v = np.log(values[peaks])
    slope, _ = np.polyfit(log_t, log_v, 1)
    return float(slope)


def crossing_time(
    times: np.ndarray,
    classical: np.ndarray,
    quantum: np.ndarray,
    gamma: float = 1.0,
) -> float:
    """First time after 1/gamma where classical/quantum crosses 1 upward.

    Linear interpolation between the bracketing grid points; raises if
    the ratio never reaches 1 inside the grid span.
    """
    ratio = classical / quantum
    start = float(np.asarray(1.0 / gamma))
    for i in range(1, times.size):
        if times[i] <= start:
            continue
        if ratio[i - 1] < 1.0 <= ratio[i]:
            frac = (1.0 - ratio[i - 1]) / (ratio[i] - ratio[i - 1])
            return float(times[i - 1] + frac * (times[i] - times[i - 1]))
    raise ValueError(
        f"classical/quantum ratio never crosses 1 on ({start}, {times[-1]}]"
    )


def time_averaged_probabilities(
    source: Graph | Eigensystem,
    grid: TimeGrid,
    chunk: int = 128,
) -> np.ndarray:
    """Trapezoidal time average of the quantum table over the whole grid.

    Finite-horizon estimator that converges to the exact long-time
    average; kept as an independent cross-check of lta_matrix.
    """
    eig = eigensystem_of(source)
    n = eig.values.size
    total = np.zeros((n, n))
    times = grid.times
    prev_table = None
    prev_t = None
    for part, block in iter_probability_blocks(eig, grid, "quantum", chunk):
        for k in range(part.size):
            if prev_table is not None:
                total += (part[k] - prev_t) * 0.5 * (prev_table + block[k])
            prev_table = block[k]
            prev_t = part[k]
    return total / (times[-1] - times[0])
