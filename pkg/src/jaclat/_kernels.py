"""Shifted Fincke-Pohst enumeration kernels.

Two interchangeable implementations: a numba ``@njit`` depth-first loop and a
chunked breadth-first numpy version. Set ``JACLAT_DISABLE_NUMBA=1`` to force
the numpy path. Floating point only steers the search intervals; whether a
point is kept is decided on exact int64 norms.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._linalg import ldl, lcm

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

DISABLED = os.environ.get("JACLAT_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")
DEFAULT_BACKEND = "numba" if HAVE_NUMBA and not DISABLED else "numpy"
CHUNK = 1 << 16


def _interval(ctr, rem, d, eps):
    if rem < 0.0:
        rem = 0.0
    rad = math.sqrt(rem / d)
    return math.ceil(ctr - rad - eps), math.floor(ctr + rad + eps)


if HAVE_NUMBA:
    @njit(cache=True)
    def _enum_numba(G, d, U, c, cn, cd, bound_num, B, count_only, signed):
        n = G.shape[0]
        eps = 1e-9 * (1.0 + B)
        x = np.zeros(n, np.int64)
        hi = np.zeros(n, np.int64)
        rem = np.zeros(n)
        tsum = np.zeros(n)
        y = np.zeros(n, np.int64)
        cap = 1024
        out = np.empty((cap, n), np.int64)
        m = 0
        hist = np.zeros(bound_num + 1, np.int64)

        i = n - 1
        rem[i] = B
        ctr = -c[i]
        rad = math.sqrt(max(B, 0.0) / d[i])
        x[i] = math.ceil(ctr - rad - eps)
        hi[i] = math.floor(ctr + rad + eps)
        while True:
            if x[i] > hi[i]:
                i += 1
                if i == n:
                    break
                x[i] += 1
                continue
            if i == 0:
                for a in range(n):
                    y[a] = cd * x[a] + cn[a]
                num = 0
                for a in range(n):
                    s = 0
                    for b in range(n):
                        s += G[a, b] * y[b]
                    num += y[a] * s
                if num <= bound_num:
                    if count_only:
                        w = 1
                        if signed:
                            par = 0
                            for a in range(n):
                                par += G[a, a] * x[a]
                            if par % 2 != 0:
                                w = -1
                        hist[num] += w
                    else:
                        if m == cap:
                            bigger = np.empty((2 * cap, n), np.int64)
                            bigger[:cap] = out
                            out = bigger
                            cap *= 2
                        out[m] = x
                        m += 1
                x[0] += 1
                continue
            yi = x[i] + c[i] + tsum[i]
            r = rem[i] - d[i] * yi * yi
            i -= 1
            rem[i] = r
            s = 0.0
            for j in range(i + 1, n):
                s += U[i, j] * (x[j] + c[j])
            tsum[i] = s
            ctr = -(c[i] + s)
            rad = math.sqrt(max(r, 0.0) / d[i])
            x[i] = math.ceil(ctr - rad - eps)
            hi[i] = math.floor(ctr + rad + eps)
        return out[:m], hist


def _enum_numpy(G, d, U, c, cn, cd, bound_num, B, count_only, signed):
    n = G.shape[0]
    eps = 1e-9 * (1.0 + B)
    points: list[np.ndarray] = []
    hist = np.zeros(bound_num + 1, np.int64)

    def emit(X):
        Y = cd * X + cn
        num = np.einsum("ij,jk,ik->i", Y, G, Y)
        keep = num <= bound_num
        if count_only:
            w = None
            if signed:
                w = 1 - 2 * ((X[keep] @ np.diag(G)) % 2)
            hist[:] += np.bincount(num[keep], weights=w, minlength=bound_num + 1).astype(np.int64)
        else:
            points.append(X[keep])

    def expand(X, rem, i):
        if i + 1 < n:
            t = (X[:, i + 1:] + c[i + 1:]) @ U[i, i + 1:]
        else:
            t = np.zeros(len(X))
        ctr = -(c[i] + t)
        rad = np.sqrt(np.maximum(rem, 0.0) / d[i])
        lo = np.ceil(ctr - rad - eps).astype(np.int64)
        hi = np.floor(ctr + rad + eps).astype(np.int64)
        cnt = np.maximum(hi - lo + 1, 0)
        total = int(cnt.sum())
        if total == 0:
            return
        rows = np.repeat(np.arange(len(X)), cnt)
        offs = np.arange(total) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        X2 = X[rows]
        X2[:, i] = lo[rows] + offs
        yi = X2[:, i] + c[i] + t[rows]
        rem2 = rem[rows] - d[i] * yi * yi
        if i == 0:
            emit(X2)
            return
        for s in range(0, total, CHUNK):
            expand(X2[s:s + CHUNK], rem2[s:s + CHUNK], i - 1)

    expand(np.zeros((1, n), np.int64), np.array([B]), n - 1)
    pts = np.concatenate(points) if points else np.zeros((0, n), np.int64)
    return pts, hist


def _prepare(gram: Sequence[Sequence[int]], center: Sequence, bound):
    center = [Fraction(x) for x in center]
    cd = lcm(*(x.denominator for x in center)) if center else 1
    cn = np.array([int(x * cd) for x in center], dtype=np.int64)
    bound_num = math.floor(Fraction(bound) * 2 * cd * cd)
    dd, uu = ldl(gram)
    G = np.array(gram, dtype=np.int64).reshape(len(center), len(center))
    d = np.array([float(v) for v in dd])
    U = np.array([[float(v) for v in row] for row in uu]).reshape(len(center), len(center))
    c = np.array([float(v) for v in center])
    B = bound_num / float(cd * cd)
    return G, d, U, c, cn, cd, bound_num, B


def _run(gram, center, bound, count_only: bool, backend: str | None, signed: bool = False):
    backend = backend or DEFAULT_BACKEND
    n = len(gram)
    if n == 0:
        return np.zeros((1, 0), np.int64), None
    G, d, U, c, cn, cd, bound_num, B = _prepare(gram, center, bound)
    if bound_num < 0:
        return np.zeros((0, n), np.int64), (np.zeros(1, np.int64), cd)
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba is not available")
        pts, hist = _enum_numba(G, d, U, c, cn, cd, bound_num, B, count_only, signed)
    elif backend == "numpy":
        pts, hist = _enum_numpy(G, d, U, c, cn, cd, bound_num, B, count_only, signed)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return pts, (hist, cd)


def enumerate_points(gram: Sequence[Sequence[int]], center: Sequence, bound,
                     backend: str | None = None) -> np.ndarray:
    """Integer vectors ``x`` with ``(x+c) G (x+c)^T / 2 <= bound``, shape (m, n)."""
    pts, _ = _run(gram, center, bound, False, backend)
    return pts


def count_norms(gram: Sequence[Sequence[int]], center: Sequence, bound,
                backend: str | None = None, signed: bool = False) -> dict[Fraction, int]:
    """Histogram ``{beta(x+c): count}`` over integer ``x`` with ``beta(x+c) <= bound``.

    With ``signed`` each point is weighted by ``e(beta(x)) = (-1)^(sum G_ii x_i)``.
    """
    if len(gram) == 0:
        return {Fraction(0): 1}
    _, (hist, cd) = _run(gram, center, bound, True, backend, signed)
    return {Fraction(int(k), 2 * cd * cd): int(v) for k, v in enumerate(hist) if v}
