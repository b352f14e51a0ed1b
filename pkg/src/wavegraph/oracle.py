"""Independent ground truth for the reduction engine.

``response_factor_dense`` solves (I - W) x = e_t by LU; ``walk_sum_truncated``
adds walk weights length by length. Neither touches the rewrite rules.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.linalg import lapack

from .errors import SingularSystem
from .graph import OpticalGraph, StateId

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class TailBound:
    truncated_sum: complex
    max_len: int
    bound: float

    @property
    def divergent(self) -> bool:
        return math.isinf(self.bound)


def response_factor_dense(graph: OpticalGraph, s: StateId | str, t: StateId | str) -> complex:
    """[(I - W)^-1]_{s,t} via a partially pivoted LU solve."""
    s, t = graph.resolve(s), graph.resolve(t)
    pos = graph.index()
    m = np.eye(len(pos), dtype=complex) - graph.weight_matrix()
    anorm = np.abs(m).sum(axis=0).max()
    with warnings.catch_warnings():
        # singularity is reported below through the condition estimate
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(m, check_finite=True)
    rcond, info = lapack.zgecon(lu, anorm, norm="1")
    if info != 0 or rcond * MAX_CONDITION < 1:
        raise SingularSystem(
            f"I - W is singular or ill-conditioned (1-norm condition ~ {1 / max(rcond, 1e-300):.3g})"
        )
    rhs = np.zeros(len(pos), dtype=complex)
    rhs[pos[t]] = 1
    return complex(scipy.linalg.lu_solve((lu, piv), rhs)[pos[s]])


def walk_sum_truncated(graph: OpticalGraph, s: StateId | str, t: StateId | str, max_len: int) -> TailBound:
    """Sum of walk weights s -> t over walks with 1..max_len edges.

    The bound majorises every omitted term by its magnitude walk: with
    m_L = e_s |W|^L, the tail is at most m_L |W| (I - |W|)^-1 e_t, finite
    exactly when the spectral radius of |W| is below 1 (or when no walk of
    length max_len + 1 leaves s at all). On top of that comes a rounding
    allowance proportional to the total magnitude of all walks from s.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    s, t = graph.resolve(s), graph.resolve(t)
    pos = graph.index()
    n = len(pos)
    w = graph.weight_matrix()
    a = np.abs(w)
    v = np.zeros(n, dtype=complex)
    v[pos[s]] = 1
    m = np.abs(v)
    total, mass = 0j, 1.0
    for _ in range(max_len):
        v = v @ w
        m = m @ a
        total += v[pos[t]]
        mass += m.sum()
    step = m @ a
    if not step.any():
        tail, tail_mass = 0.0, 0.0
    elif np.abs(np.linalg.eigvals(a)).max() >= 1:
        return TailBound(complex(total), max_len, math.inf)
    else:
        onward = step @ np.linalg.inv(np.eye(n) - a)
        tail, tail_mass = float(onward[pos[t]]), float(onward.sum())
    slack = 4 * (max_len + n) * np.finfo(float).eps * (mass + tail_mass)
    return TailBound(complex(total), max_len, max(tail, 0.0) + slack)
