import os
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest

from jaclat import _kernels as K
from jaclat.qseries import E8_MODEL_BASIS, e8_model_lattice

BACKENDS = ["numpy"] + (["numba"] if K.HAVE_NUMBA else [])


def brute(gram, center, bound, R=6):
    G = np.array(gram)
    n = len(gram)
    c = np.array([float(x) for x in center])
    pts = np.array(np.meshgrid(*[np.arange(-R, R + 1)] * n)).reshape(n, -1).T
    y = pts + c
    norms = np.einsum("ij,jk,ik->i", y, G, y) / 2
    return {tuple(p) for p, v in zip(pts.tolist(), norms) if v <= float(bound) + 1e-9}


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("gram,center,bound", [
    ([[2, 1], [1, 2]], [F(1, 3), F(1, 3)], 5),
    ([[1]], [F(1, 2)], 10),
    ([[4, -2, -2], [-2, 2, 1], [-2, 1, 2]], [0, 0, 0], 4),
    ([[3, 1, 0], [1, 2, 0], [0, 0, 5]], [F(1, 5), F(2, 5), F(1, 10)], 3),
])
def test_enumeration_matches_brute_force(backend, gram, center, bound):
    pts = K.enumerate_points(gram, center, bound, backend=backend)
    assert {tuple(p) for p in pts.tolist()} == brute(gram, center, bound)


@pytest.mark.parametrize("backend", BACKENDS)
def test_e8_counts(backend):
    L = e8_model_lattice()
    h = K.count_norms(L.gram, [0] * 8, 4, backend=backend)
    assert [h[F(m)] for m in range(5)] == [1, 240, 2160, 6720, 17520]


def test_backends_agree():
    if not K.HAVE_NUMBA:
        pytest.skip("numba missing")
    gram = [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    c = [F(1, 5), F(2, 5), F(3, 5), F(4, 5)]
    a = K.count_norms(gram, c, 8, backend="numba")
    b = K.count_norms(gram, c, 8, backend="numpy")
    assert a == b
    sa = K.count_norms([[1, 0], [0, 3]], [F(1, 2), F(1, 6)], 6, backend="numba", signed=True)
    sb = K.count_norms([[1, 0], [0, 3]], [F(1, 2), F(1, 6)], 6, backend="numpy", signed=True)
    assert sa == sb


def test_exact_boundary_points_kept():
    # points exactly on the bound must be included
    pts = K.enumerate_points([[1]], [0], 2)
    assert sorted(pts[:, 0].tolist()) == [-2, -1, 0, 1, 2]


def test_env_flag_selects_numpy():
    code = "import jaclat._kernels as K; print(K.DEFAULT_BACKEND)"
    env = dict(os.environ, JACLAT_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
