"""Constituent strategy costs and the closed-form inner/outer NDT bounds."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import TOL, ConstraintError, NdtPoint


class Strategy(str, enum.Enum):
    HT = "HT"
    ZF = "ZF"
    ST_ZF = "ST_ZF"
    X_IA = "X_IA"


@dataclass(frozen=True)
class StrategyInvocation:
    kind: Strategy
    nu: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", Strategy(self.kind))
        if not -TOL <= self.nu <= 1.0 + TOL:
            raise ConstraintError(f"message fraction nu must lie in [0, 1], got {self.nu}")


REGIMES = (1, 2, 3, 4)


def _check_regime(ell: int) -> None:
    if ell not in REGIMES:
        raise ConstraintError(f"regime must be one of 1..4, got {ell!r}")


def strategy_ndt(inv: StrategyInvocation, r: float) -> NdtPoint:
    """Fronthaul/edge NDT of one strategy carrying ``nu`` of a file per message.

    HT: (nu/r, 0); ZF: (0, nu); ST+ZF: (nu/r, nu); X-IA: (0, 3 nu).
    """
    if r <= 0:
        raise ConstraintError(f"r must be positive, got {r}")
    nu = inv.nu
    if inv.kind is Strategy.HT:
        return NdtPoint(nu / r, 0.0)
    if inv.kind is Strategy.ZF:
        return NdtPoint(0.0, nu)
    if inv.kind is Strategy.ST_ZF:
        return NdtPoint(nu / r, nu)
    return NdtPoint(0.0, 3.0 * nu)


def ndt_inner_component(ell: int, mu_i: float, mu_j: float, r: float) -> float:
    """Achievable total NDT of construction ``ell`` for symmetric fractions.

    Evaluated unconditionally, even outside the regime where construction
    ``ell`` applies.
    """
    _check_regime(ell)
    lo, hi = min(mu_i, mu_j), max(mu_i, mu_j)
    inv_r = 1.0 / r
    if ell == 1:
        return 1.0 + inv_r - (inv_r - 1.0) * hi - inv_r * lo
    if ell == 2:
        return 1.5 + inv_r * (0.5 - lo)
    if ell == 3:
        return 2.0 - lo
    return 1.0 + inv_r - inv_r * lo


def select_regime(mu_i: float, mu_j: float, r: float) -> int:
    """Construction used for ``(mu_i, mu_j, r)``; exact 1/2 boundaries map to 2."""
    if r > 1.0:
        return 4
    lo, hi = min(mu_i, mu_j), max(mu_i, mu_j)
    if hi < 0.5:
        return 1
    if lo > 0.5:
        return 3
    return 2


def ndt_inner(mu_i: float, mu_j: float, r: float) -> tuple[float, int]:
    """Minimum achievable total NDT for symmetric caches and the construction used."""
    ell = select_regime(mu_i, mu_j, r)
    value = ndt_inner_component(ell, mu_i, mu_j, r)
    if ell == 2 and r <= 1.0:
        # On a 1/2 boundary the neighbouring construction must agree.
        lo, hi = min(mu_i, mu_j), max(mu_i, mu_j)
        neighbours = ([1] if hi == 0.5 else []) + ([3] if lo == 0.5 else [])
        for other in neighbours:
            alt = ndt_inner_component(other, mu_i, mu_j, r)
            if abs(alt - value) > TOL:
                raise AssertionError(
                    f"regime formulas 2 and {other} disagree at boundary "
                    f"({mu_i}, {mu_j}, r={r}): {value} vs {alt}"
                )
    return value, ell


def ndt_outer_component(
    ell: int, mu_1i: float, mu_2i: float, mu_1j: float, mu_2j: float, r: float
) -> float:
    """Lower bound ``ell`` on the total NDT for an arbitrary 2x2 allocation."""
    _check_regime(ell)
    inv_r = 1.0 / r
    least = min(mu_1i, mu_2i, mu_1j, mu_2j)
    if ell == 1:
        total = mu_1i + mu_2i + mu_1j + mu_2j
        return 1.0 + inv_r - least - 0.5 * (inv_r - 1.0) * total
    if ell == 2:
        pair = min(mu_1i + mu_2i, mu_1j + mu_2j)
        return 1.5 + 0.5 * inv_r - least - 0.5 * (inv_r - 1.0) * pair
    if ell == 3:
        return 2.0 - least
    return 1.0 + inv_r - inv_r * least


def outer_components(
    mu_1i: float, mu_2i: float, mu_1j: float, mu_2j: float, r: float
) -> dict[int, float]:
    return {ell: ndt_outer_component(ell, mu_1i, mu_2i, mu_1j, mu_2j, r) for ell in REGIMES}


def ndt_outer_binding(
    mu_1i: float, mu_2i: float, mu_1j: float, mu_2j: float, r: float
) -> tuple[float, int]:
    """Converse bound and the component attaining it (lowest index on ties)."""
    if r > 1.0:
        return ndt_outer_component(4, mu_1i, mu_2i, mu_1j, mu_2j, r), 4
    values = [ndt_outer_component(ell, mu_1i, mu_2i, mu_1j, mu_2j, r) for ell in (1, 2, 3)]
    best = max(values)
    return best, next(ell for ell, v in zip((1, 2, 3), values) if v >= best - TOL)


def ndt_outer(mu_1i: float, mu_2i: float, mu_1j: float, mu_2j: float, r: float) -> float:
    """Converse bound: max of components 1-3 for r <= 1, component 4 otherwise."""
    if r > 1.0:
        return ndt_outer_component(4, mu_1i, mu_2i, mu_1j, mu_2j, r)
    return max(ndt_outer_component(ell, mu_1i, mu_2i, mu_1j, mu_2j, r) for ell in (1, 2, 3))
