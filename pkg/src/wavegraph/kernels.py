"""Dense state-elimination kernels for batched evaluation.

The numba path is used when numba imports and ``WAVEGRAPH_DISABLE_NUMBA`` is
unset; otherwise the pure-numpy path runs. Both take a stack of weight
matrices of shape (batch, n, n), an elimination order and the (s, t) pair, and
return Γ_{s,t} per batch entry (NaN where a loop diverges).
"""
from __future__ import annotations

import os

import numpy as np

THRESHOLD = 1.0 - 1e-12

# the bundled TBB is too old for numba; probing it only produces a warning
os.environ.setdefault("NUMBA_THREADING_LAYER_PRIORITY", "omp workqueue tbb")

try:
    if os.environ.get("WAVEGRAPH_DISABLE_NUMBA", "") not in ("", "0"):
        raise ImportError("disabled by WAVEGRAPH_DISABLE_NUMBA")
    from numba import njit, prange
except ImportError:  # pragma: no cover - exercised via env flag
    njit = None

HAVE_NUMBA = njit is not None


def _close(through, back, loop_in, loop_out):
    """Γ for the residual two-state graph; NaN when a residual loop diverges."""
    if abs(loop_in) >= THRESHOLD:
        return complex(np.nan, np.nan)
    loop_out = loop_out + back * through / (1 - loop_in)
    if abs(loop_out) >= THRESHOLD:
        return complex(np.nan, np.nan)
    return through / (1 - loop_in) / (1 - loop_out)


def eliminate_numpy(w: np.ndarray, order: np.ndarray, s: int, t: int) -> np.ndarray:
    w = np.array(w, dtype=complex, copy=True)
    batch = w.shape[0]
    alive = np.ones(w.shape[1], dtype=bool)
    ok = np.ones(batch, dtype=bool)
    for v in order:
        loop = w[:, v, v]
        ok &= np.abs(loop) < THRESHOLD
        factor = np.where(ok, 1 / np.where(ok, 1 - loop, 1), 0)
        alive[v] = False
        col = w[:, :, v] * alive
        row = w[:, v, :] * alive
        w += col[:, :, None] * (row * factor[:, None])[:, None, :]
        w[:, v, :] = 0
        w[:, :, v] = 0
    out = np.array(
        [_close(w[b, s, t], w[b, t, s], w[b, s, s], w[b, t, t]) for b in range(batch)],
        dtype=complex,
    )
    out[~ok] = np.nan
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _eliminate_one(w, order, s, t):
        n = w.shape[0]
        alive = np.ones(n, dtype=np.bool_)
        for v in order:
            loop = w[v, v]
            if abs(loop) >= THRESHOLD:
                return complex(np.nan, np.nan)
            factor = 1.0 / (1.0 - loop)
            alive[v] = False
            for u in range(n):
                a = w[u, v]
                if not alive[u] or a == 0:
                    continue
                a = a * factor
                for x in range(n):
                    b = w[v, x]
                    if alive[x] and b != 0:
                        w[u, x] += a * b
        loop_in = w[s, s]
        if abs(loop_in) >= THRESHOLD:
            return complex(np.nan, np.nan)
        loop_out = w[t, t] + w[t, s] * w[s, t] / (1.0 - loop_in)
        if abs(loop_out) >= THRESHOLD:
            return complex(np.nan, np.nan)
        return w[s, t] / (1.0 - loop_in) / (1.0 - loop_out)

    @njit(parallel=True, cache=True)
    def _eliminate_batch(w, order, s, t):
        out = np.empty(w.shape[0], dtype=np.complex128)
        for b in prange(w.shape[0]):
            out[b] = _eliminate_one(w[b].copy(), order, s, t)
        return out

    def eliminate_numba(w: np.ndarray, order: np.ndarray, s: int, t: int) -> np.ndarray:
        w = np.ascontiguousarray(w, dtype=np.complex128)
        return _eliminate_batch(w, np.asarray(order, dtype=np.int64), int(s), int(t))

else:
    eliminate_numba = None


def eliminate(w: np.ndarray, order, s: int, t: int) -> np.ndarray:
    """Batched Γ_{s,t} through the selected backend."""
    w = np.asarray(w, dtype=complex)
    if w.ndim == 2:
        w = w[None]
    order = np.asarray(order, dtype=np.int64)
    if HAVE_NUMBA:
        return eliminate_numba(w, order, s, t)
    return eliminate_numpy(w, order, s, t)
