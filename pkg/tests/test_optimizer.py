import pytest
from hypothesis import given, settings, strategies as st

from fogndt import optimizer as opt
from fogndt.core import ConstraintError, PopularityProfile

R = 0.2


def point(mu, mu1, mu2, r=R):
    return opt.slice_point(opt.ClassScenario(1, 1, mu, r, mu1, mu2))


@pytest.mark.parametrize(
    "mu, mu1, mu2, want",
    [
        (0.25, 0.5, 0.0, (4.0, 1.5)),
        (0.25, 0.25, 0.25, (3.75, 3.75)),
        (0.375, 0.75, 0.0, (4.0, 1.25)),
        (0.375, 0.5, 0.25, (2.75, 1.5)),
        (0.375, 0.375, 0.375, (2.625, 2.625)),
        (0.5, 1.0, 0.0, (4.0, 1.0)),
        (0.5, 0.5, 0.5, (1.5, 1.5)),
        (0.75, 1.0, 0.5, (1.5, 1.0)),
        (0.75, 0.75, 0.75, (1.25, 1.25)),
    ],
)
def test_slice_point_examples(mu, mu1, mu2, want):
    d12, d11, _ = point(mu, mu1, mu2)
    assert (d12, d11) == pytest.approx(want, abs=1e-12)


def test_scenario_rejects_over_budget():
    with pytest.raises(ConstraintError):
        opt.ClassScenario(1, 1, 0.25, R, 0.5, 0.25)
    with pytest.raises(ConstraintError):
        opt.ClassScenario(0, 1, 0.25, R, 0.0, 0.0)
    with pytest.raises(ConstraintError):
        opt.ClassScenario(1, 1, 0.25, -1.0, 0.0, 0.0)


def test_fractions_layout():
    assert opt.ClassScenario(2, 3, 0.5, R, 0.9, 0.2).fractions() == [0.9, 0.9, 0.2, 0.2, 0.2]


def test_pareto_examples():
    pts = [(1, 3), (2, 2), (2, 4), (3, 1), (3, 3), (1.0, 3.5)]
    assert opt.pareto_envelope(pts) == [(1, 3), (2, 2), (3, 1)]
    assert opt.pareto_envelope([(1, 1), (1, 1)]) == [(1, 1)]
    assert opt.pareto_envelope([]) == []


@given(st.lists(st.tuples(st.floats(0, 10), st.floats(0, 10)), max_size=40))
def test_pareto_is_nondominated_and_monotone(pts):
    env = opt.pareto_envelope(pts)
    for a, b in zip(env, env[1:]):
        assert a[0] < b[0] and a[1] > b[1]
    for p in pts:
        assert any(e[0] <= p[0] + 1e-9 and e[1] <= p[1] + 1e-9 for e in env)


def test_trace_three_eighths():
    region = opt.trace_region_slice(1, 1, 0.375, R)
    xy = region.xy()
    assert xy[0] == pytest.approx((2.625, 2.625))
    assert xy[-1] == pytest.approx((4.0, 1.25))
    assert opt.interpolate(xy, 2.75) == pytest.approx(1.5, abs=1e-9)
    assert opt.interpolate(xy, 3.375) == pytest.approx(1.375, abs=1e-9)
    assert opt.interpolate(xy, 1.0) is None


def test_trace_half_and_full():
    xy = opt.trace_region_slice(1, 1, 0.5, R).xy()
    assert xy[0] == pytest.approx((1.5, 1.5)) and xy[-1] == pytest.approx((4.0, 1.0))
    xy = opt.trace_region_slice(1, 1, 1.0, R).xy()
    assert xy == [pytest.approx((1.0, 1.0))]


def test_breakpoints_present_on_coarse_step():
    mus = opt.sweep_mu1(1, 1, 0.375, step=0.1)
    for b in (0.0, 0.375, 0.5, 0.75):
        assert any(abs(m - b) < 1e-15 for m in mus)
    with pytest.raises(ConstraintError):
        opt.sweep_mu1(1, 1, 0.5, step=0.0)


def test_refinement_does_not_move_envelope():
    coarse = opt.trace_region_slice(2, 3, 0.3, 0.5, step=0.05).xy()
    fine = opt.trace_region_slice(2, 3, 0.3, 0.5, step=0.001).xy()
    for x, y in fine:
        assert opt.interpolate(coarse, x) == pytest.approx(y, abs=1e-9)


def test_interior_never_beats_capacity_line():
    line = opt.trace_region_slice(1, 1, 0.375, R, step=0.01).xy()
    full = opt.trace_region_slice(1, 1, 0.375, R, step=0.01, interior=True).xy()
    for x, y in full:
        got = opt.interpolate(line, x)
        if got is not None:
            assert got <= y + 1e-9


def test_average_examples():
    prof = PopularityProfile(0.5)
    assert opt.average_ndt(1.5, 2.75, 4.0, prof) == pytest.approx((7 / 3, 19 / 6))
    assert opt.average_ndt(1.0, 2.0, 3.0, PopularityProfile(1.0)) == (1.0, None)
    assert opt.average_ndt(1.0, 2.0, 3.0, PopularityProfile(0.0)) == (None, 3.0)
    strict = opt.average_ndt(1.5, 2.75, 4.0, prof, strict_paper=True)
    assert strict[1] == pytest.approx((0.25 * 1.5 + 0.5 * 2.75) / 0.75)


def test_average_half_envelope_endpoints():
    curve = opt.trace_average_tradeoff(1, 1, 0.375, R, 0.5)
    first, last = curve.points[0], curve.points[-1]
    assert (first.avg1, first.avg2) == pytest.approx((7 / 3, 37 / 12), abs=1e-12)
    assert (first.source.mu1, first.source.mu2) == pytest.approx((0.5, 0.25))
    assert (last.avg1, last.avg2) == pytest.approx((37 / 12, 7 / 3), abs=1e-12)


def test_average_requires_interior_popularity():
    with pytest.raises(ConstraintError):
        opt.trace_average_tradeoff(1, 1, 0.375, R, 1.0)


def test_csv_round_trip():
    region = opt.trace_region_slice(1, 1, 0.375, R, step=0.01)
    rows = opt.read_csv_columns(opt.slice_to_csv(region))
    assert rows == [[x, y] for x, y in region.xy()]
    ext = opt.read_csv_columns(opt.slice_to_csv(region, extended=True))
    assert [r[2:4] for r in ext] == [[p.mu1, p.mu2] for p in region.points]
    curve = opt.trace_average_tradeoff(1, 1, 0.375, R, 0.3, step=0.01)
    assert opt.read_csv_columns(opt.tradeoff_to_csv(curve)) == [list(p) for p in curve.xy()]


@settings(max_examples=25, deadline=None)
@given(
    st.integers(1, 4), st.integers(1, 4), st.floats(0.0, 1.0), st.sampled_from([0.1, 0.2, 0.5, 1.0, 2.0])
)
def test_envelope_points_feasible_and_monotone(j1, j2, mu, r):
    region = opt.trace_region_slice(j1, j2, mu, r, step=0.02)
    for p in region.points:
        opt.ClassScenario(j1, j2, mu, r, p.mu1, p.mu2)
    xy = region.xy()
    for a, b in zip(xy, xy[1:]):
        assert a[0] < b[0] and a[1] > b[1]
