import itertools

import pytest
from hypothesis import given, strategies as st

from fogndt import bounds_oracle as bo
from fogndt.closed_form import (
    Strategy,
    StrategyInvocation,
    ndt_inner,
    ndt_inner_component,
    ndt_outer,
    ndt_outer_binding,
    ndt_outer_component,
    select_regime,
    strategy_ndt,
)
from fogndt.core import ConstraintError

frac = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
rate = st.floats(min_value=0.05, max_value=5.0, allow_nan=False)


@pytest.mark.parametrize(
    "kind, nu, r, expected",
    [
        (Strategy.HT, 0.2, 0.2, (1.0, 0.0)),
        (Strategy.X_IA, 0.5, 0.7, (0.0, 1.5)),
        (Strategy.ZF, 0.0, 3.0, (0.0, 0.0)),
        (Strategy.ST_ZF, 0.4, 0.5, (0.8, 0.4)),
        (Strategy.ZF, 0.3, 0.5, (0.0, 0.3)),
    ],
)
def test_strategy_ndt(kind, nu, r, expected):
    p = strategy_ndt(StrategyInvocation(kind, nu), r)
    assert (p.delta_f, p.delta_e) == pytest.approx(expected, abs=1e-12)


def test_strategy_invocation_range():
    with pytest.raises(ConstraintError):
        StrategyInvocation(Strategy.ZF, 1.5)


@pytest.mark.parametrize(
    "ell, mi, mj, r, expected",
    [
        (1, 3 / 8, 3 / 8, 1 / 5, 2.625),
        (2, 1 / 4, 1 / 2, 1 / 5, 2.75),
        (3, 3 / 4, 3 / 4, 1 / 5, 1.25),
        (3, 3 / 4, 3 / 4, 1.0, 1.25),
        (4, 0.0, 0.0, 2.0, 1.5),
    ],
)
def test_inner_component_examples(ell, mi, mj, r, expected):
    assert ndt_inner_component(ell, mi, mj, r) == pytest.approx(expected, abs=1e-12)


def test_inner_component_regime4_matches_lp():
    assert bo.lp_min_for(0, 0, 0, 0, 2.0).optimum == pytest.approx(1.5, abs=1e-12)


def test_inner_component_bad_regime():
    with pytest.raises(ConstraintError):
        ndt_inner_component(5, 0.1, 0.2, 0.5)


@pytest.mark.parametrize(
    "mi, mj, r, value, ell",
    [
        (0.5, 0.0, 0.2, 4.0, 2),
        (1.0, 1.0, 0.2, 1.0, 3),
        (0.5, 0.5, 0.2, 1.5, 2),
        (0.2, 0.3, 1.0, 1.8, 1),
        (0.2, 0.3, 1.5, 1.0 + (1 - 0.2) / 1.5, 4),
    ],
)
def test_inner_dispatch(mi, mj, r, value, ell):
    got, sel = ndt_inner(mi, mj, r)
    assert sel == ell
    assert got == pytest.approx(value, abs=1e-12)


def test_outer_components_hand_values():
    # hand evaluation at r = 1/2: 1 + 2 - 0.1 - 0.5*1*1.2, 1.5 + 1 - 0.1 - 0.5*0.6, 2 - 0.1
    e = (0.5, 0.1, 0.3, 0.3)
    assert ndt_outer_component(1, *e, 0.5) == pytest.approx(2.3, abs=1e-12)
    assert ndt_outer_component(2, *e, 0.5) == pytest.approx(2.1, abs=1e-12)
    assert ndt_outer_component(3, *e, 0.5) == pytest.approx(1.9, abs=1e-12)
    assert ndt_outer_component(3, *e, 0.9) == pytest.approx(1.9, abs=1e-12)
    assert ndt_outer_component(4, 1, 1, 1, 1, 3.0) == pytest.approx(1.0, abs=1e-12)
    assert ndt_outer(*e, 0.5) == pytest.approx(2.3, abs=1e-12)
    assert ndt_outer_binding(*e, 0.5) == (pytest.approx(2.3, abs=1e-12), 1)
    # the LP optimum on the same allocation
    assert bo.lp_min_for(*e, 0.5).optimum == pytest.approx(2.3, abs=1e-12)


def test_outer_examples():
    assert ndt_outer(3 / 8, 3 / 8, 3 / 8, 3 / 8, 1 / 5) == pytest.approx(2.625, abs=1e-12)
    assert ndt_outer(0, 0, 0, 0, 2.0) == pytest.approx(1.5, abs=1e-12)


@given(frac, frac, rate)
def test_inner_symmetric_in_arguments(a, b, r):
    assert ndt_inner(a, b, r) == ndt_inner(b, a, r)


@given(frac, frac, frac, frac, rate)
def test_outer_symmetries(a1, a2, b1, b2, r):
    v = ndt_outer(a1, a2, b1, b2, r)
    assert ndt_outer(b1, b2, a1, a2, r) == pytest.approx(v, abs=1e-12)
    assert ndt_outer(a2, a1, b2, b1, r) == pytest.approx(v, abs=1e-12)


@given(frac, frac, rate)
def test_per_component_identity_on_symmetric(a, b, r):
    for ell in (1, 2, 3, 4):
        assert ndt_inner_component(ell, a, b, r) == pytest.approx(
            ndt_outer_component(ell, a, a, b, b, r), abs=1e-12
        )


@given(frac, frac, rate)
def test_tightness_random(a, b, r):
    inner, _ = ndt_inner(a, b, r)
    assert inner == pytest.approx(ndt_outer(a, a, b, b, r), abs=1e-9)


def test_tightness_grid_scalar():
    rates = (0.1, 0.2, 0.5, 1.0, 1.5, 2.0)
    grid = [k / 100 for k in range(101)]
    worst = 0.0
    for r in rates:
        for a, b in itertools.product(grid, grid):
            worst = max(worst, abs(ndt_inner(a, b, r)[0] - ndt_outer(a, a, b, b, r)))
    assert worst <= 1e-9


@given(frac, frac, rate)
def test_inner_floor(a, b, r):
    v, _ = ndt_inner(a, b, r)
    assert v >= 1.0 - 1e-12
    if min(a, b) < 1.0:
        assert v > 1.0


def test_inner_floor_equality_at_full_cache():
    for r in (0.1, 0.5, 1.0, 2.0):
        assert ndt_inner(1.0, 1.0, r)[0] == pytest.approx(1.0, abs=1e-12)


@given(frac, frac, frac, rate)
def test_inner_monotone(a, b, c, r):
    lo, hi = sorted((a, c))
    assert ndt_inner(hi, b, r)[0] <= ndt_inner(lo, b, r)[0] + 1e-12


@pytest.mark.parametrize("r", [0.1, 0.2, 0.5, 1.0])
def test_boundary_continuity(r):
    grid = [k / 200 for k in range(201)]
    for x in grid:
        lo, hi = min(x, 0.5), max(x, 0.5)
        if x <= 0.5:
            assert ndt_inner_component(1, x, 0.5, r) == pytest.approx(
                ndt_inner_component(2, x, 0.5, r), abs=1e-9
            )
        if x >= 0.5:
            assert ndt_inner_component(2, 0.5, x, r) == pytest.approx(
                ndt_inner_component(3, 0.5, x, r), abs=1e-9
            )


def test_continuity_in_rate_at_one():
    for a, b in itertools.product([k / 20 for k in range(21)], repeat=2):
        left, _ = ndt_inner(a, b, 1.0)
        right, _ = ndt_inner(a, b, 1.0 + 1e-12)
        assert left == pytest.approx(right, abs=1e-9)


def test_select_regime_boundaries():
    assert select_regime(0.5, 0.5, 0.3) == 2
    assert select_regime(0.49, 0.5, 0.3) == 2
    assert select_regime(0.5, 0.51, 0.3) == 2
    assert select_regime(0.49, 0.49, 0.3) == 1
    assert select_regime(0.51, 0.51, 1.0) == 3
    assert select_regime(0.51, 0.51, 1.0001) == 4


@given(frac, frac, frac, frac, rate)
def test_symmetrization_dominance(a1, a2, b1, b2, r):
    ha, hb = (a1 + a2) / 2, (b1 + b2) / 2
    for ell in (1, 2, 3, 4):
        assert ndt_outer_component(ell, ha, ha, hb, hb, r) <= ndt_outer_component(
            ell, a1, a2, b1, b2, r
        ) + 1e-12
