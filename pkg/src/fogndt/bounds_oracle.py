"""Independent check of the converse bound via the underlying 2-variable LP.

The five half-planes in ``(delta_e, delta_f)`` are rebuilt from the cache
fractions and ``min delta_e + delta_f`` is solved exactly by enumerating
vertices. Nothing here calls the closed-form outer bound except the
tightness and symmetrization reports, which compare against it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from . import closed_form as cf
from .core import TOL, CachePartition, Demand, symmetrize


@dataclass(frozen=True)
class HalfPlane:
    """Constraint ``a_e * delta_e + a_f * delta_f >= b``."""

    a_e: float
    a_f: float
    b: float
    label: str = ""

    def __post_init__(self) -> None:
        if self.a_e == 0.0 and self.a_f == 0.0:
            raise ValueError("half-plane needs a nonzero normal")

    def slack(self, delta_e: float, delta_f: float) -> float:
        return self.a_e * delta_e + self.a_f * delta_f - self.b


@dataclass(frozen=True)
class LpSolution:
    optimum: float
    delta_e: float
    delta_f: float
    binding: tuple[int, ...]


def constraint_polytope(
    mu_1i: float, mu_2i: float, mu_1j: float, mu_2j: float, r: float
) -> list[HalfPlane]:
    """The five half-planes every feasible ``(delta_e, delta_f)`` satisfies.

    Order: cut-set bound on edge plus fronthaul, single-file fronthaul bound,
    two-file fronthaul bound, interference-free edge floor, nonnegativity.
    """
    least = min(mu_1i, mu_2i, mu_1j, mu_2j)
    sum_i, sum_j = mu_1i + mu_2i, mu_1j + mu_2j
    return [
        HalfPlane(1.0, r, 2.0 - least, "edge+fronthaul"),
        HalfPlane(0.0, r, 0.5 - 0.5 * min(sum_i, sum_j), "fronthaul-single"),
        HalfPlane(0.0, r, 1.0 - 0.5 * sum_i - 0.5 * sum_j, "fronthaul-pair"),
        HalfPlane(1.0, 0.0, 1.0, "edge-floor"),
        HalfPlane(0.0, 1.0, 0.0, "fronthaul-nonneg"),
    ]


def _feasible(planes: list[HalfPlane], e: float, f: float, tol: float) -> bool:
    return all(p.slack(e, f) >= -tol for p in planes)


def lp_min_total(planes: list[HalfPlane], tol: float = TOL) -> LpSolution:
    """Minimize ``delta_e + delta_f`` over the half-planes by vertex enumeration.

    Candidates are all pairwise intersections of constraint boundaries;
    parallel pairs are skipped. The objective is bounded below on these
    polytopes, so the optimum sits on a vertex.
    """
    best: tuple[float, float, float] | None = None
    for p, q in itertools.combinations(planes, 2):
        det = p.a_e * q.a_f - p.a_f * q.a_e
        if abs(det) < 1e-15:
            continue
        e = (p.b * q.a_f - p.a_f * q.b) / det
        f = (p.a_e * q.b - p.b * q.a_e) / det
        if not _feasible(planes, e, f, tol):
            continue
        value = e + f
        if best is None or value < best[0]:
            best = (value, e, f)
    if best is None:
        raise AssertionError("polytope has no vertex; objective would be unbounded")
    value, e, f = best
    binding = tuple(k for k, p in enumerate(planes) if abs(p.slack(e, f)) <= tol)
    return LpSolution(value, e, f, binding)


def lp_min_for(mu_1i: float, mu_2i: float, mu_1j: float, mu_2j: float, r: float) -> LpSolution:
    return lp_min_total(constraint_polytope(mu_1i, mu_2i, mu_1j, mu_2j, r))


def dual_weights(ell: int, r: float) -> tuple[float, float, float, float, float]:
    """Nonnegative multipliers on the five half-planes that yield outer component ``ell``.

    Components 1-3 need ``r <= 1`` and component 4 needs ``r >= 1`` for the
    weights to be nonnegative. The nonnegativity row is stated as
    ``delta_f >= 0``, so its weight carries the extra factor ``r``.
    """
    cf._check_regime(ell)
    k = 1.0 / r - 1.0
    if ell == 1:
        return (1.0, 0.0, k, 0.0, 0.0)
    if ell == 2:
        return (1.0, k, 0.0, 0.0, 0.0)
    if ell == 3:
        return (1.0, 0.0, 0.0, 0.0, k * r)
    return (1.0 / r, 0.0, 0.0, 1.0 - 1.0 / r, 0.0)


def combine(planes: list[HalfPlane], weights: tuple[float, ...]) -> HalfPlane:
    """Nonnegative combination of half-planes."""
    if len(weights) != len(planes):
        raise ValueError("one weight per half-plane required")
    return HalfPlane(
        math.fsum(w * p.a_e for w, p in zip(weights, planes)),
        math.fsum(w * p.a_f for w, p in zip(weights, planes)),
        math.fsum(w * p.b for w, p in zip(weights, planes)),
        "combination",
    )


@dataclass(frozen=True)
class TightnessReport:
    mu_i: float
    mu_j: float
    r: float
    inner: float
    regime: int
    outer: float
    lp: LpSolution
    ok: bool


def check_tightness(mu_i: float, mu_j: float, r: float, tol: float = TOL) -> TightnessReport:
    """Compare achievable NDT, converse bound and LP optimum for symmetric caches."""
    inner, ell = cf.ndt_inner(mu_i, mu_j, r)
    outer = cf.ndt_outer(mu_i, mu_i, mu_j, mu_j, r)
    lp = lp_min_for(mu_i, mu_i, mu_j, mu_j, r)
    ok = abs(inner - outer) <= tol and abs(inner - lp.optimum) <= tol
    return TightnessReport(mu_i, mu_j, r, inner, ell, outer, lp, ok)


@dataclass(frozen=True)
class SymmetrizationReport:
    original: tuple[float, float, float, float]
    symmetrized: tuple[float, float, float, float]
    before: dict[int, float]
    after: dict[int, float]
    symmetric_input: bool
    ok: bool

    @property
    def deltas(self) -> dict[int, float]:
        return {ell: self.before[ell] - self.after[ell] for ell in self.before}


def check_symmetrization(
    partition: CachePartition, demand: Demand, r: float, tol: float = TOL
) -> SymmetrizationReport:
    """Averaging each file over both ENs never raises any outer component.

    Equality must hold for every component exactly when the two demanded
    files are already cached symmetrically.
    """
    original = partition.demand_entries(demand)
    sym = symmetrize(partition).demand_entries(demand)
    before = cf.outer_components(*original, r)
    after = cf.outer_components(*sym, r)
    symmetric_input = abs(original[0] - original[1]) <= tol and abs(original[2] - original[3]) <= tol
    ok = all(after[ell] <= before[ell] + tol for ell in before)
    if symmetric_input:
        ok = ok and all(abs(after[ell] - before[ell]) <= tol for ell in before)
    else:
        # Every component shares the term -min(four entries); a strict gain
        # for that min implies a strict decrease of every component.
        gained = min(sym) - min(original)
        if gained > tol:
            ok = ok and all(before[ell] - after[ell] > tol for ell in before)
    return SymmetrizationReport(original, sym, before, after, symmetric_input, ok)
