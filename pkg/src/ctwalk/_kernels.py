"""Hot numeric kernels.

The loop kernels below are written in numba-compatible style and get
compiled when the numba backend is active (see ctwalk._backend). Under
the numpy backend the same sources run uncompiled, except all-pairs BFS
which switches to a vectorized frontier sweep because the per-node queue
version is only fast once compiled. benchmarks/bench_backends.py times
the two paths against each other.
"""
from __future__ import annotations

import numpy as np

from ._backend import USING_NUMBA

if USING_NUMBA:
    from numba import njit, prange
else:
    prange = range

_RESCALE_LIMIT = 1e250
_RESCALE = 1e-250


def _bfs_csr(indptr, indices, n):
    dist = np.full((n, n), -1, np.int32)
    for s in prange(n):
        row = dist[s]
        row[s] = 0
        queue = np.empty(n, np.int32)
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = row[u]
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if row[v] < 0:
                    row[v] = du + 1
                    queue[tail] = v
                    tail += 1
    return dist


def _bfs_frontier(adjacency):
    adj = adjacency.astype(np.float32)
    n = adj.shape[0]
    dist = np.full((n, n), -1, np.int32)
    np.fill_diagonal(dist, 0)
    reached = np.eye(n, dtype=bool)
    frontier = reached.copy()
    step = 0
    while frontier.any():
        step += 1
        hit = (frontier.astype(np.float32) @ adj) > 0.5
        frontier = hit & ~reached
        dist[frontier] = step
        reached |= frontier
    return dist


def _adjacency_csr(adjacency):
    neighbor_lists = [np.flatnonzero(adjacency[i]) for i in range(adjacency.shape[0])]
    indptr = np.zeros(adjacency.shape[0] + 1, np.int64)
    for i, nb in enumerate(neighbor_lists):
        indptr[i + 1] = indptr[i] + nb.size
    indices = (
        np.concatenate(neighbor_lists).astype(np.int64)
        if neighbor_lists
        else np.empty(0, np.int64)
    )
    return indptr, indices


def hop_distances(adjacency) -> np.ndarray:
    """All-pairs shortest hop counts; -1 marks unreachable pairs."""
    if USING_NUMBA:
        indptr, indices = _adjacency_csr(adjacency)
        return _bfs_csr(indptr, indices, adjacency.shape[0])
    return _bfs_frontier(adjacency)


def _bessel_orders_kernel(kmax, z, rtol):
    out = np.zeros(kmax + 1)
    if z == 0.0:
        out[0] = 1.0
        return out
    if z < 12.0:
        # ascending power series; largest term stays small enough here
        half = 0.5 * z
        q = half * half
        for k in range(kmax + 1):
            lead = 1.0
            for i in range(1, k + 1):
                lead *= half / i
            if lead == 0.0:
                break  # every later order underflows too
            term = lead
            acc = term
            m = 1
            while abs(term) > rtol * abs(acc) + 1e-300:
                term *= -q / (m * (m + k))
                acc += term
                m += 1
            out[k] = acc
        return out
    # downward recurrence seeded high above both order and argument,
    # normalized with J_0 + 2*sum_{m>=1} J_{2m} = 1
    base = kmax if kmax > int(z) else int(z)
    start = base + 40 + int(2.0 * np.sqrt(40.0 * base))
    if start % 2 == 1:
        start += 1
    jnext = 0.0
    jcur = 1e-30
    norm = 2.0 * jcur
    for i in range(start, 0, -1):
        jprev = (2.0 * i / z) * jcur - jnext
        jnext = jcur
        jcur = jprev
        k = i - 1
        if abs(jcur) > _RESCALE_LIMIT:
            jcur *= _RESCALE
            jnext *= _RESCALE
            norm *= _RESCALE
            for idx in range(kmax + 1):
                out[idx] *= _RESCALE
        if k <= kmax:
            out[k] = jcur
        if k > 0 and k % 2 == 0:
            norm += 2.0 * jcur
    norm += jcur
    for idx in range(kmax + 1):
        out[idx] /= norm
    return out


def _classical_block_kernel(eigvecs, eigvecs_t, eigvals, times, gamma):
    nt = times.size
    n = eigvecs.shape[0]
    out = np.empty((nt, n, n))
    for i in range(nt):
        weights = np.exp(-gamma * times[i] * eigvals)
        out[i] = np.dot(eigvecs * weights, eigvecs_t)
    return out


def _quantum_block_kernel(eigvecs, eigvecs_t, eigvals, times, gamma):
    nt = times.size
    n = eigvecs.shape[0]
    out = np.empty((nt, n, n), np.complex128)
    for i in range(nt):
        phases = np.exp(-1j * gamma * times[i] * eigvals)
        out[i] = np.dot(eigvecs * phases, eigvecs_t)
    return out


if USING_NUMBA:
    _bfs_csr = njit(cache=True, parallel=True)(_bfs_csr)
    bessel_orders = njit(cache=True)(_bessel_orders_kernel)
    _classical_block = njit(cache=True)(_classical_block_kernel)
    _quantum_block = njit(cache=True)(_quantum_block_kernel)
else:
    bessel_orders = _bessel_orders_kernel
    _classical_block = _classical_block_kernel
    _quantum_block = _quantum_block_kernel


def classical_block(eigvecs, eigvals, times, gamma) -> np.ndarray:
    """exp(-gamma*L*t) tables for every grid time, via the spectral sum."""
    v = np.ascontiguousarray(eigvecs)
    return _classical_block(v, np.ascontiguousarray(v.T), eigvals, times, gamma)


def quantum_block(eigvecs, eigvals, times, gamma) -> np.ndarray:
    """exp(-i*gamma*L*t) amplitude tables for every grid time."""
    v = np.ascontiguousarray(eigvecs.astype(np.complex128))
    return _quantum_block(v, np.ascontiguousarray(v.T), eigvals, times, gamma)
