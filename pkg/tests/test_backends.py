"""Both backends must produce the same numbers.

The flag is read at import time, so each backend runs in its own
subprocess and writes its results to an .npz that we diff here.
"""
import importlib.util
import os
import subprocess
import sys

import numpy as np
import pytest

DRIVER = """
import sys
import numpy as np
from ctwalk._backend import backend_name
from ctwalk._kernels import bessel_orders, quantum_block
from ctwalk.graphs import build_dual_sierpinski
from ctwalk.spectral import laplacian_eigensystem

graph = build_dual_sierpinski(3)
eig = laplacian_eigensystem(graph.laplacian())
times = np.linspace(0.0, 6.0, 25)
block = quantum_block(eig.vectors, eig.values, times, 1.0)
np.savez(
    sys.argv[1],
    backend=backend_name(),
    distances=graph.chemical_distances(),
    bessel=bessel_orders(60, 17.5, 1e-12),
    block_re=block.real,
    block_im=block.imag,
)
"""

HAVE_NUMBA = importlib.util.find_spec("numba") is not None


def run_backend(backend, tmp_path):
    out = tmp_path / f"{backend}.npz"
    env = dict(os.environ, CTWALK_BACKEND=backend)
    subprocess.run([sys.executable, "-c", DRIVER, str(out)],
                   env=env, check=True, capture_output=True)
    return np.load(out)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_backends_agree(tmp_path):
    plain = run_backend("numpy", tmp_path)
    jitted = run_backend("numba", tmp_path)
    assert str(plain["backend"]) == "numpy"
    assert str(jitted["backend"]) == "numba"
    assert (plain["distances"] == jitted["distances"]).all()
    assert np.abs(plain["bessel"] - jitted["bessel"]).max() < 1e-13
    assert np.abs(plain["block_re"] - jitted["block_re"]).max() < 1e-13
    assert np.abs(plain["block_im"] - jitted["block_im"]).max() < 1e-13


def test_forced_numpy_backend(tmp_path):
    data = run_backend("numpy", tmp_path)
    assert str(data["backend"]) == "numpy"
    # frontier BFS must give true hop counts
    dist = data["distances"]
    assert dist[0, 0] == 0
    assert dist.max() == 7
    assert (dist == dist.T).all()
