"""End-to-end acceptance checks, one group per criterion."""

import random

import numpy as np
import pytest

from fogndt import bounds_oracle as bo
from fogndt import closed_form as cf
from fogndt import kernels
from fogndt import optimizer as opt
from fogndt import planner as pl
from fogndt.core import CachePartition, Demand, SystemParams, validate_partition
from fogndt.suites import RATES, dual_suite, planner_suite

C1 = pytest.mark.criterion(1, "labelled slice points at r = 1/5")
C2 = pytest.mark.criterion(2, "inner = outer = LP over the 0.01 grid")
C3 = pytest.mark.criterion(3, "every built plan verifies and matches the inner bound")
C4 = pytest.mark.criterion(4, "outer components rebuilt from dual weights")
C5 = pytest.mark.criterion(5, "symmetrizing never raises the outer bound")
C6 = pytest.mark.criterion(6, "mixing plans is linear and stays within capacity")
C7 = pytest.mark.criterion(7, "average trade-off envelope properties")
C8 = pytest.mark.criterion(8, "inner bound continuity and monotonicity")


@C1
@pytest.mark.parametrize(
    "mu, alloc, want",
    [
        (0.25, (0.5, 0.0), (4.0, 1.5)),
        (0.25, (0.25, 0.25), (3.75, 3.75)),
        (0.375, (0.75, 0.0), (4.0, 1.25)),
        (0.375, (0.5, 0.25), (2.75, 1.5)),
        (0.375, (0.375, 0.375), (2.625, 2.625)),
        (0.5, (1.0, 0.0), (4.0, 1.0)),
        (0.5, (0.5, 0.5), (1.5, 1.5)),
        (0.75, (1.0, 0.5), (1.5, 1.0)),
        (0.75, (0.75, 0.75), (1.25, 1.25)),
    ],
)
def test_slice_golden_points(mu, alloc, want):
    d12, d11, _ = opt.slice_point(opt.ClassScenario(1, 1, mu, 0.2, *alloc))
    assert abs(d12 - want[0]) <= 1e-9 and abs(d11 - want[1]) <= 1e-9
    # the allocation is an exact sample of the traced sweep
    swept = opt.sweep_allocations(1, 1, mu, 0.2)
    assert any(abs(p.mu1 - alloc[0]) <= 1e-12 and abs(p.mu2 - alloc[1]) <= 1e-12 for p in swept)


@C2
def test_tightness_grid():
    res = kernels.tightness_grid(100, RATES)
    assert res.checks == 101 * 101 * 6
    assert res.max_inner_outer <= 1e-9, res.worst
    assert res.max_inner_lp <= 1e-9, res.worst


@C2
def test_tightness_grid_python_backend_spot():
    # Same check on a coarser grid through the pure-Python backend.
    res = kernels.tightness_grid(20, RATES, impl=kernels.backends()["python"])
    assert res.ok()


@C3
def test_planner_soundness():
    res = planner_suite(step=0.05)
    assert res.checks == 21 * 21 * 6
    assert res.passed, res.failures[:5]


@C4
def test_dual_reconstruction():
    res = dual_suite(seed=0, samples=1000)
    assert res.passed, res.failures[:5]
    for ell in (1, 2, 3, 4):
        for r in (0.1, 0.5, 1.0, 2.0, 3.0):
            if (r <= 1.0) == (ell <= 3):
                assert min(bo.dual_weights(ell, r)) >= 0.0


@C5
def test_symmetrization_random():
    rng = random.Random(5)
    checked = 0
    while checked < 1000:
        a1, a2, b1, b2 = (rng.random() for _ in range(4))
        if abs(a1 - a2) <= 1e-9 and abs(b1 - b2) <= 1e-9:
            continue
        r = rng.choice(RATES + (rng.uniform(0.05, 3.0),))
        rep = bo.check_symmetrization(CachePartition(((a1, b1), (a2, b2))), Demand(1, 2), r)
        assert rep.ok, rep
        assert not rep.symmetric_input
        assert all(d >= -1e-12 for d in rep.deltas.values())
        # the smallest entry strictly grows for these draws, so every component drops
        assert all(d > 1e-12 for d in rep.deltas.values()), rep
        checked += 1


@C5
def test_symmetrization_equality_on_symmetric_inputs():
    rng = random.Random(6)
    for _ in range(200):
        x, y = rng.random(), rng.random()
        r = rng.choice(RATES)
        rep = bo.check_symmetrization(CachePartition(((x, y), (x, y))), Demand(1, 2), r)
        assert rep.ok and rep.symmetric_input
        assert all(abs(d) <= 1e-12 for d in rep.deltas.values())


@C5
@pytest.mark.parametrize("r", RATES)
def test_symmetrization_strict_family(r):
    for k in range(1, 21):
        t = 0.2 * k / 20
        part = CachePartition(((0.2 + t, 0.6), (0.2 - t, 0.6)))
        rep = bo.check_symmetrization(part, Demand(1, 2), r)
        assert rep.ok
        for ell, d in rep.deltas.items():
            # the fourth component divides the smallest entry by r
            gain = t if ell <= 3 else t / r
            assert d == pytest.approx(gain, abs=1e-12), (ell, t)


def _random_fractions(rng, n, mu):
    raw = [rng.random() for _ in range(n)]
    scale = min(1.0, mu * n / sum(raw))
    return [x * scale for x in raw]


@C6
def test_mixing():
    rng = random.Random(11)
    n = 3
    for _ in range(200):
        mu = rng.uniform(0.05, 1.0)
        r = rng.choice(RATES)
        params = SystemParams(mu, r, n)
        demand = Demand(*rng.sample(range(1, n + 1), 2))
        pa = pl.build_cache_placement(_random_fractions(rng, n, mu), r, params)
        pb = pl.build_cache_placement(_random_fractions(rng, n, mu), r, params)
        a = pl.build_delivery_plan(pa, demand, r)
        b = pl.build_delivery_plan(pb, demand, r)
        for alpha in (0.0, 0.25, 0.5, 0.75, 1.0):
            mixed = pl.mix_plans(a, b, alpha)
            got = pl.plan_ndt(mixed, r)
            want_f = alpha * a.total.delta_f + (1 - alpha) * b.total.delta_f
            want_e = alpha * a.total.delta_e + (1 - alpha) * b.total.delta_e
            assert abs(got.delta_f - want_f) <= 1e-12 and abs(got.delta_e - want_e) <= 1e-12
            placement = pl.mix_placements(pa, pb, alpha)
            assert validate_partition(placement.partition(), params).ok
            assert pl.verify_plan(mixed, placement, demand, r).ok


def _mirrored(curve, other, tol=1e-9):
    """Every point (x, y) of ``curve`` has (y, x) on the polyline ``other``."""
    poly = other.xy()
    for x, y in curve.xy():
        back = opt.interpolate(poly, y)
        assert back is not None and abs(back - x) <= tol, (x, y, back)


@C7
def test_average_half_is_symmetric():
    curve = opt.trace_average_tradeoff(1, 1, 0.375, 0.2, 0.5)
    _mirrored(curve, curve)


@C7
def test_average_mirror_pair():
    low = opt.trace_average_tradeoff(1, 1, 0.375, 0.2, 0.1)
    high = opt.trace_average_tradeoff(1, 1, 0.375, 0.2, 0.9)
    _mirrored(low, high)
    _mirrored(high, low)


@C7
@pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
def test_average_envelope_pareto_and_replannable(a):
    mu, r = 0.375, 0.2
    curve = opt.trace_average_tradeoff(1, 1, mu, r, a)
    xy = curve.xy()
    for (x0, y0), (x1, y1) in zip(xy, xy[1:]):
        assert x1 >= x0 and y1 <= y0
    # two files per class so both same-class demands exist
    params = SystemParams.two_class(mu, r, 2, 2)
    for p in curve.points:
        s = p.source
        placement = pl.build_cache_placement([s.mu1, s.mu1, s.mu2, s.mu2], r, params)
        for demand, want in ((Demand(1, 3), s.d12), (Demand(1, 2), s.d11), (Demand(3, 4), s.d22)):
            plan = pl.build_delivery_plan(placement, demand, r)
            assert pl.verify_plan(plan, placement, demand, r).ok
            assert abs(plan.total.delta - want) <= 1e-12


@C8
@pytest.mark.parametrize("r", [0.1, 0.2, 0.5, 0.8, 1.0])
def test_inner_continuity_at_half(r):
    for k in range(1001):
        x = k / 1000
        if x <= 0.5:
            # larger fraction sits on the boundary
            assert abs(cf.ndt_inner_component(1, x, 0.5, r) - cf.ndt_inner_component(2, x, 0.5, r)) <= 1e-9
        if x >= 0.5:
            assert abs(cf.ndt_inner_component(2, 0.5, x, r) - cf.ndt_inner_component(3, 0.5, x, r)) <= 1e-9
        # the dispatched value on the boundary agrees with both neighbours
        lo, hi = sorted((x, 0.5))
        here, _ = cf.ndt_inner(lo, hi, r)
        ells = (1, 2) if x <= 0.5 else (2, 3)
        for ell in ells:
            assert abs(here - cf.ndt_inner_component(ell, lo, hi, r)) <= 1e-9


@C8
@pytest.mark.parametrize("r", RATES)
def test_inner_monotone_along_rays(r):
    ray = np.arange(1001) / 1000
    for k in range(101):
        fixed = np.full_like(ray, k / 100)
        for mi, mj in ((ray, fixed), (fixed, ray)):
            vals, _ = kernels.inner_batch(mi, mj, r)
            assert np.all(np.diff(vals) <= 1e-12), (r, k)
