"""Pure-Python batch kernels, used when the compiled extension is unavailable."""

from __future__ import annotations

import numpy as np

from . import bounds_oracle as bo
from . import closed_form as cf


def _check(*arrays: np.ndarray) -> int:
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise ValueError("input arrays differ in length")
    return n


def inner_batch(mu_i, mu_j, r: float) -> tuple[np.ndarray, np.ndarray]:
    n = _check(mu_i, mu_j)
    out = np.empty(n, dtype=np.float64)
    reg = np.empty(n, dtype=np.int64)
    for k in range(n):
        out[k], reg[k] = cf.ndt_inner(float(mu_i[k]), float(mu_j[k]), r)
    return out, reg


def outer_batch(mu_1i, mu_2i, mu_1j, mu_2j, r: float) -> np.ndarray:
    n = _check(mu_1i, mu_2i, mu_1j, mu_2j)
    return np.array(
        [
            cf.ndt_outer(float(mu_1i[k]), float(mu_2i[k]), float(mu_1j[k]), float(mu_2j[k]), r)
            for k in range(n)
        ],
        dtype=np.float64,
    )


def lp_batch(mu_1i, mu_2i, mu_1j, mu_2j, r: float) -> np.ndarray:
    n = _check(mu_1i, mu_2i, mu_1j, mu_2j)
    return np.array(
        [
            bo.lp_min_for(
                float(mu_1i[k]), float(mu_2i[k]), float(mu_1j[k]), float(mu_2j[k]), r
            ).optimum
            for k in range(n)
        ],
        dtype=np.float64,
    )
