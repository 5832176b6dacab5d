"""Graph families used throughout the package.

Every builder returns a Graph with a dense 0/1 adjacency matrix and a
deterministic node order, so spectra, distance tables and exported files
are reproducible bit for bit. Constructions are exact integer work; no
floating point enters until the Laplacian is diagonalized elsewhere.

Node order conventions, fixed once and relied on by the observables:

* dual Sierpinski gasket: depth-first over the generating triangles,
  top, bottom-left, bottom-right at every level. The three outer
  corners (degree 2) land at indices 0, (3**g - 1) // 2 and 3**g - 1.
* Cayley tree: breadth-first from the root, children in creation order.
* hypercubic torus: C-order raveling of the coordinate grid.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from ._kernels import hop_distances

__all__ = [
    "Graph",
    "build_dual_sierpinski",
    "build_cayley_tree",
    "build_hypercubic_torus",
    "build_ring",
    "build_chain",
    "build_complete",
    "build_family",
    "FAMILY_BUILDERS",
    "dsg_node_count",
    "cayley_node_count",
    "dsg_corner_nodes",
    "dsg_left_corner_chain",
    "torus_coordinates",
    "torus_euclidean_distances",
    "graph_to_json",
    "graph_from_json",
    "edge_list_lines",
    "graph_from_edge_list",
]


@dataclass(frozen=True)
class Graph:
    """An undirected simple graph plus the metadata the CLI reports."""

    family: str
    params: Mapping[str, int]
    adjacency: np.ndarray
    labels: tuple[str, ...]
    _distances: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        a = self.adjacency
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.issubdtype(a.dtype, np.integer):
            raise ValueError("adjacency must be integer 0/1")
        if ((a != 0) & (a != 1)).any():
            raise ValueError("adjacency entries must be 0 or 1")
        if (np.diag(a) != 0).any():
            raise ValueError("self loops are not allowed")
        if (a != a.T).any():
            raise ValueError("adjacency must be symmetric")
        if len(self.labels) != a.shape[0]:
            raise ValueError("label count must match node count")
        a.setflags(write=False)
        object.__setattr__(self, "params", dict(self.params))

    @property
    def node_count(self) -> int:
        return self.adjacency.shape[0]

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1).astype(np.int64)

    def laplacian(self) -> np.ndarray:
        """Connectivity operator: degree on the diagonal, -1 per edge."""
        lap = -self.adjacency.astype(np.float64)
        np.fill_diagonal(lap, self.degrees().astype(np.float64))
        return lap

    def chemical_distances(self) -> np.ndarray:
        """All-pairs hop distance matrix (cached; graphs are immutable)."""
        cached = self._distances.get("hops")
        if cached is None:
            cached = hop_distances(self.adjacency)
            if (cached < 0).any():
                raise ValueError("graph is not connected")
            cached.setflags(write=False)
            self._distances["hops"] = cached
        return cached

    def mean_pairwise_distance(self) -> float:
        """Average hop distance over all ordered node pairs, self pairs included."""
        return float(self.chemical_distances().mean())

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adjacency))
        return list(zip(i.tolist(), j.tolist()))


def _graph_from_edges(family, params, n, edges, labels):
    adjacency = np.zeros((n, n), np.int8)
    for i, j in edges:
        if i == j:
            raise ValueError(f"self loop on node {i}")
        adjacency[i, j] = 1
        adjacency[j, i] = 1
    return Graph(family, params, adjacency, tuple(labels))


# -- dual Sierpinski gasket ------------------------------------------------

def dsg_node_count(generation: int) -> int:
    return 3**generation


def _gasket_triangles(generation):
    """Corner-index triples of the level-`generation` small triangles.

    Shared corner ids are allocated on first use; recursion order is
    top, bottom-left, bottom-right, which makes the leaf list the
    depth-first order the dual graph inherits.
    """
    counter = [3]
    leaves: list[tuple[int, int, int]] = []

    def midpoint(cache, a, b):
        key = (a, b) if a < b else (b, a)
        got = cache.get(key)
        if got is None:
            got = counter[0]
            counter[0] += 1
            cache[key] = got
        return got

    def split(top, left, right, depth):
        if depth == generation:
            leaves.append((top, left, right))
            return
        cache = {}
        tl = midpoint(cache, top, left)
        tr = midpoint(cache, top, right)
        lr = midpoint(cache, left, right)
        split(top, tl, tr, depth + 1)
        split(tl, left, lr, depth + 1)
        split(tr, lr, right, depth + 1)

    split(0, 1, 2, 0)
    return leaves


def build_dual_sierpinski(generation: int) -> Graph:
    """Gasket dual: one node per small triangle, edges across shared corners.

    N = 3**g nodes, degree 3 everywhere except the three outer corners
    (degree 2). Labels are the base-3 digits of the depth-first path.
    """
    if generation < 1:
        raise ValueError("generation must be >= 1")
    leaves = _gasket_triangles(generation)
    n = len(leaves)
    corner_owner: dict[int, int] = {}
    edges = []
    for idx, corners in enumerate(leaves):
        for vertex in corners:
            other = corner_owner.get(vertex)
            if other is None:
                corner_owner[vertex] = idx
            else:
                edges.append((other, idx))
    labels = [np.base_repr(i, 3).zfill(generation) for i in range(n)]
    return _graph_from_edges("dsg", {"generation": generation}, n, edges, labels)


def dsg_corner_nodes(generation: int) -> tuple[int, int, int]:
    """The three degree-2 nodes, in node-order position."""
    n = dsg_node_count(generation)
    return (0, (n - 1) // 2, n - 1)


def dsg_left_corner_chain(generation: int) -> list[int]:
    """Left corners of the nested gaskets: (3**k - 1) // 2 for k = 0..g.

    These sit on the axis of symmetry through node 0 and show up as the
    natural probe set for transport away from a corner.
    """
    return [(3**k - 1) // 2 for k in range(generation + 1)]


# -- Cayley tree -------------------------------------------------------------

def cayley_node_count(coordination: int, shells: int) -> int:
    z = coordination
    return (z * (z - 1) ** shells - 2) // (z - 2)


def build_cayley_tree(coordination: int, shells: int) -> Graph:
    """Finite Cayley tree: root of degree z, z-1 branches per inner node.

    `shells` generations around the root; the outermost shell has degree 1.
    """
    z = coordination
    if z < 3:
        raise ValueError("coordination must be >= 3")
    if shells < 1:
        raise ValueError("shells must be >= 1")
    edges = []
    labels = ["r"]
    previous = [0]
    next_id = 1
    for shell in range(1, shells + 1):
        current = []
        per_node = z if shell == 1 else z - 1
        for parent in previous:
            for k in range(per_node):
                edges.append((parent, next_id))
                labels.append(f"{labels[parent]}.{k}")
                current.append(next_id)
                next_id += 1
        previous = current
    n = next_id
    assert n == cayley_node_count(z, shells)
    return _graph_from_edges(
        "cayley", {"coordination": z, "shells": shells}, n, edges, labels
    )


# -- hypercubic torus --------------------------------------------------------

def torus_coordinates(dimension: int, side: int) -> np.ndarray:
    """Integer coordinates of every node, matching the node order."""
    n = side**dimension
    coords = np.stack(
        np.unravel_index(np.arange(n), (side,) * dimension), axis=1
    )
    return coords.astype(np.int64)


def build_hypercubic_torus(dimension: int, side: int) -> Graph:
    """d-dimensional periodic lattice with side length L >= 3, degree 2d."""
    if dimension < 1:
        raise ValueError("dimension must be >= 1")
    if side < 3:
        raise ValueError("side must be >= 3 so neighbor pairs stay distinct")
    coords = torus_coordinates(dimension, side)
    n = coords.shape[0]
    weights = side ** np.arange(dimension - 1, -1, -1, dtype=np.int64)
    edges = []
    for axis in range(dimension):
        shifted = coords.copy()
        shifted[:, axis] = (shifted[:, axis] + 1) % side
        targets = shifted @ weights
        edges.extend(zip(range(n), targets.tolist()))
    labels = [",".join(map(str, row)) for row in coords.tolist()]
    return _graph_from_edges(
        "torus", {"dimension": dimension, "side": side}, n, edges, labels
    )


def torus_euclidean_distances(dimension: int, side: int) -> np.ndarray:
    """Straight-line distances under the minimum-image rule."""
    coords = torus_coordinates(dimension, side)
    diff = np.abs(coords[:, None, :] - coords[None, :, :])
    diff = np.minimum(diff, side - diff)
    return np.sqrt((diff.astype(np.float64) ** 2).sum(axis=2))


# -- one-dimensional and dense reference graphs ------------------------------

def build_ring(n: int) -> Graph:
    if n < 3:
        raise ValueError("ring needs at least 3 nodes")
    edges = [(i, (i + 1) % n) for i in range(n)]
    return _graph_from_edges("ring", {"n": n}, n, edges, map(str, range(n)))


def build_chain(n: int) -> Graph:
    if n < 2:
        raise ValueError("chain needs at least 2 nodes")
    edges = [(i, i + 1) for i in range(n - 1)]
    return _graph_from_edges("chain", {"n": n}, n, edges, map(str, range(n)))


def build_complete(n: int) -> Graph:
    if n < 2:
        raise ValueError("complete graph needs at least 2 nodes")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return _graph_from_edges("complete", {"n": n}, n, edges, map(str, range(n)))


FAMILY_BUILDERS = {
    "dsg": (build_dual_sierpinski, ("generation",)),
    "cayley": (build_cayley_tree, ("coordination", "shells")),
    "torus": (build_hypercubic_torus, ("dimension", "side")),
    "ring": (build_ring, ("n",)),
    "chain": (build_chain, ("n",)),
    "complete": (build_complete, ("n",)),
}


def build_family(family: str, params: Mapping[str, int]) -> Graph:
    """Dispatch on family name; raises ValueError for unknown names or params."""
    try:
        builder, wanted = FAMILY_BUILDERS[family]
    except KeyError:
        known = ", ".join(sorted(FAMILY_BUILDERS))
        raise ValueError(f"unknown family {family!r}; choose from {known}") from None
    missing = [k for k in wanted if k not in params]
    if missing:
        raise ValueError(f"family {family!r} needs parameters {missing}")
    extra = [k for k in params if k not in wanted]
    if extra:
        raise ValueError(f"family {family!r} got unexpected parameters {extra}")
    return builder(**{k: int(params[k]) for k in wanted})


# -- serialization -----------------------------------------------------------

def graph_to_json(graph: Graph) -> dict:
    return {
        "family": graph.family,
        "params": dict(graph.params),
        "node_count": graph.node_count,
        "labels": list(graph.labels),
        "edges": [[i, j] for i, j in graph.edges()],
    }


def graph_from_json(data: Mapping) -> Graph:
    n = int(data["node_count"])
    labels = data.get("labels") or [str(i) for i in range(n)]
    return _graph_from_edges(
        str(data.get("family", "imported")),
        {k: int(v) for k, v in dict(data.get("params", {})).items()},
        n,
        [(int(i), int(j)) for i, j in data["edges"]],
        [str(s) for s in labels],
    )


def edge_list_lines(graph: Graph) -> list[str]:
    """Plain 'i j' lines, one per edge, with a node-count comment up front.

    The comment keeps isolated trailing nodes representable.
    """
    lines = [f"# nodes: {graph.node_count}"]
    lines.extend(f"{i} {j}" for i, j in graph.edges())
    return lines


def graph_from_edge_list(lines: Iterable[str]) -> Graph:
    edges = []
    declared = -1
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("nodes:"):
                declared = int(body.split(":", 1)[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"expected 'i j' per line, got {line!r}")
        edges.append((int(parts[0]), int(parts[1])))
    top = max((max(i, j) for i, j in edges), default=-1)
    n = declared if declared > top else top + 1
    if n <= 0:
        raise ValueError("edge list is empty and declares no nodes")
    return _graph_from_edges(
        "imported", {}, n, edges, [str(i) for i in range(n)]
    )
