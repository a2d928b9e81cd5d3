"""Property suites run by ``fogndt verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import bounds_oracle as bo
from . import closed_form as cf
from . import kernels
from . import planner as pl
from .core import CachePartition, Demand

RATES = (0.1, 0.2, 0.5, 1.0, 1.5, 2.0)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checks: int
    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures[:20],
            "details": self.details,
        }


def tightness_suite(seed: int = 0, grid: int = 100) -> SuiteResult:
    res = kernels.tightness_grid(grid, RATES)
    failures = [] if res.ok() else [f"worst gap at (mu_i, mu_j, r) = {res.worst}"]
    return SuiteResult(
        "tightness-grid",
        res.ok(),
        res.checks,
        failures,
        {
            "backend": kernels.BACKEND,
            "max_inner_outer": res.max_inner_outer,
            "max_inner_lp": res.max_inner_lp,
        },
    )


def _random_entries(rng: random.Random) -> tuple[float, float, float, float]:
    return tuple(rng.random() for _ in range(4))  # type: ignore[return-value]


def symmetrization_suite(seed: int = 0, samples: int = 1000) -> SuiteResult:
    rng = random.Random(seed)
    failures: list[str] = []
    for _ in range(samples):
        a1, a2, b1, b2 = _random_entries(rng)
        part = CachePartition(((a1, b1), (a2, b2)))
        r = rng.choice(RATES + (rng.uniform(0.05, 3.0),))
        rep = bo.check_symmetrization(part, Demand(1, 2), r)
        if not rep.ok:
            failures.append(f"{rep.original} r={r}: {rep.before} -> {rep.after}")
    return SuiteResult("symmetrization", not failures, samples, failures)


def planner_suite(seed: int = 0, step: float = 0.05) -> SuiteResult:
    n = round(1 / step)
    failures: list[str] = []
    checks = 0
    for r in RATES:
        for a in range(n + 1):
            for b in range(n + 1):
                mi, mj = a / n, b / n
                placement = pl.build_cache_placement([mi, mj], r)
                demand = Demand(1, 2)
                plan = pl.build_delivery_plan(placement, demand, r)
                rep = pl.verify_plan(plan, placement, demand, r)
                inner, _ = cf.ndt_inner(mi, mj, r)
                checks += 1
                if not rep.ok or abs(plan.total.delta - inner) > 1e-12:
                    failures.append(
                        f"({mi}, {mj}, r={r}): total={plan.total.delta} inner={inner} "
                        f"issues={[i.detail for i in rep.issues]}"
                    )
    return SuiteResult("plan-vs-closed-form", not failures, checks, failures)


def dual_suite(seed: int = 0, samples: int = 1000) -> SuiteResult:
    rng = random.Random(seed + 1)
    failures: list[str] = []
    for _ in range(samples):
        mus = _random_entries(rng)
        r = rng.uniform(0.05, 1.0) if rng.random() < 0.6 else rng.uniform(1.0, 4.0)
        planes = bo.constraint_polytope(*mus, r)
        lp = bo.lp_min_total(planes)
        ells = (1, 2, 3) if r <= 1.0 else (4,)
        for ell in ells:
            w = bo.dual_weights(ell, r)
            combo = bo.combine(planes, w)
            target = cf.ndt_outer_component(ell, *mus, r)
            if min(w) < 0 or abs(combo.a_e - 1) > 1e-12 or abs(combo.a_f - 1) > 1e-12:
                failures.append(f"{mus} r={r} ell={ell}: combination normal {combo}")
            if abs(combo.b - target) > 1e-12:
                failures.append(f"{mus} r={r} ell={ell}: rhs {combo.b} != {target}")
            if target > lp.optimum + 1e-9:
                failures.append(f"{mus} r={r} ell={ell}: {target} exceeds LP {lp.optimum}")
    return SuiteResult("dual-reconstruction", not failures, samples, failures)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "tightness-grid": tightness_suite,
    "symmetrization": symmetrization_suite,
    "plan-vs-closed-form": planner_suite,
    "dual-reconstruction": dual_suite,
}


def run_all(seed: int = 0) -> list[SuiteResult]:
    return [fn(seed=seed) for fn in SUITES.values()]
