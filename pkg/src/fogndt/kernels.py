"""Batch evaluation backend for grid sweeps.

The compiled extension ``fogndt._kernels`` is used when it was built;
otherwise, or when ``FOGNDT_PURE_PYTHON`` is set to a non-empty value other
than ``0``, the pure-Python twin is used. Both expose ``inner_batch``,
``outer_batch`` and ``lp_batch``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from types import ModuleType

import numpy as np

from . import _kernels_py


def _load() -> tuple[ModuleType, str]:
    if os.environ.get("FOGNDT_PURE_PYTHON", "") not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "compiled"


_impl, BACKEND = _load()


def backends() -> dict[str, ModuleType]:
    """All importable backends by name (for benchmarks and cross-checks)."""
    found: dict[str, ModuleType] = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        found["compiled"] = _kernels
    except ImportError:
        pass
    return found


def _arr(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=np.float64)


def inner_batch(mu_i, mu_j, r: float, impl: ModuleType | None = None):
    return (impl or _impl).inner_batch(_arr(mu_i), _arr(mu_j), float(r))


def outer_batch(mu_1i, mu_2i, mu_1j, mu_2j, r: float, impl: ModuleType | None = None):
    return (impl or _impl).outer_batch(
        _arr(mu_1i), _arr(mu_2i), _arr(mu_1j), _arr(mu_2j), float(r)
    )


def lp_batch(mu_1i, mu_2i, mu_1j, mu_2j, r: float, impl: ModuleType | None = None):
    return (impl or _impl).lp_batch(_arr(mu_1i), _arr(mu_2i), _arr(mu_1j), _arr(mu_2j), float(r))


@dataclass(frozen=True)
class GridResult:
    rates: tuple[float, ...]
    checks: int
    max_inner_outer: float
    max_inner_lp: float
    worst: tuple[float, float, float] | None

    def ok(self, tol: float = 1e-9) -> bool:
        return self.max_inner_outer <= tol and self.max_inner_lp <= tol


def symmetric_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``(mu_i, mu_j)`` pairs with both coordinates in ``{0, 1/n, ..., 1}``."""
    axis = np.arange(n + 1, dtype=np.float64) / n
    a, b = np.meshgrid(axis, axis, indexing="ij")
    return a.ravel(), b.ravel()


def tightness_grid(
    n: int = 100,
    rates: tuple[float, ...] = (0.1, 0.2, 0.5, 1.0, 1.5, 2.0),
    impl: ModuleType | None = None,
) -> GridResult:
    """Compare inner bound, outer bound and LP optimum over a symmetric grid."""
    mi, mj = symmetric_grid(n)
    worst_gap, worst = -1.0, None
    gap_io = gap_il = 0.0
    for r in rates:
        inner, _ = inner_batch(mi, mj, r, impl)
        outer = outer_batch(mi, mi, mj, mj, r, impl)
        lp = lp_batch(mi, mi, mj, mj, r, impl)
        d_io = np.abs(inner - outer)
        d_il = np.abs(inner - lp)
        gap_io = max(gap_io, float(d_io.max()))
        gap_il = max(gap_il, float(d_il.max()))
        both = np.maximum(d_io, d_il)
        k = int(both.argmax())
        if both[k] > worst_gap:
            worst_gap, worst = float(both[k]), (float(mi[k]), float(mj[k]), r)
    return GridResult(tuple(rates), len(mi) * len(rates), gap_io, gap_il, worst)
