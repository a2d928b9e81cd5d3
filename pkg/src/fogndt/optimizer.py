"""Two-class allocation sweeps, Pareto envelopes and popularity-weighted averages.

Files in class k all receive the same symmetric cache fraction ``mu_k``.
Because the achievable NDT is piecewise linear in the allocation with kinks
only where a fraction crosses 0, 1/2 or 1, where the two classes swap
order, or where a class saturates, the sweep always includes those exact
allocations; the traced polylines are then exact between samples.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import closed_form as cf
from .core import TOL, ConstraintError, PopularityProfile

DEFAULT_STEP = 1e-3


@dataclass(frozen=True)
class ClassScenario:
    j1: int
    j2: int
    mu: float
    r: float
    mu1: float
    mu2: float

    def __post_init__(self) -> None:
        if self.j1 < 1 or self.j2 < 1:
            raise ConstraintError(f"class sizes must be positive, got J1={self.j1}, J2={self.j2}")
        if not 0.0 <= self.mu <= 1.0:
            raise ConstraintError(f"mu must lie in [0, 1], got {self.mu}")
        if self.r <= 0:
            raise ConstraintError(f"r must be positive, got {self.r}")
        for name, x in (("mu1", self.mu1), ("mu2", self.mu2)):
            if not -TOL <= x <= 1.0 + TOL:
                raise ConstraintError(f"{name} must lie in [0, 1], got {x}")
        used = self.j1 * self.mu1 + self.j2 * self.mu2
        budget = self.mu * (self.j1 + self.j2)
        if used > budget + TOL:
            raise ConstraintError(
                f"class allocation uses {used!r} > mu*(J1+J2) = {budget!r} of each cache"
            )

    def fractions(self) -> list[float]:
        """Per-file fractions, class 1 files first."""
        return [self.mu1] * self.j1 + [self.mu2] * self.j2


@dataclass(frozen=True)
class SlicePoint:
    mu1: float
    mu2: float
    d12: float
    d11: float
    d22: float
    regime12: int
    regime11: int
    regime22: int


def slice_point(scenario: ClassScenario) -> tuple[float, float, float]:
    """``(delta_(1),(2), delta_(1),(1), delta_(2),(2))`` for a class allocation."""
    p = _evaluate(scenario.mu1, scenario.mu2, scenario.r)
    return p.d12, p.d11, p.d22


def _evaluate(mu1: float, mu2: float, r: float) -> SlicePoint:
    d12, l12 = cf.ndt_inner(mu1, mu2, r)
    d11, l11 = cf.ndt_inner(mu1, mu1, r)
    d22, l22 = cf.ndt_inner(mu2, mu2, r)
    return SlicePoint(mu1, mu2, d12, d11, d22, l12, l11, l22)


# ---------------------------------------------------------------------------
# Pareto envelope
# ---------------------------------------------------------------------------


def pareto_indices(points: Sequence[tuple[float, float]], tol: float = TOL) -> list[int]:
    """Indices of the points not weakly dominated (smaller is better), by first coordinate.

    Coincident points collapse to the first occurrence.
    """
    order = sorted(range(len(points)), key=lambda k: (points[k][0], points[k][1], k))
    keep: list[int] = []
    best_y = math.inf
    for k in order:
        y = points[k][1]
        if y < best_y - tol:
            if keep and abs(points[keep[-1]][0] - points[k][0]) <= tol:
                # Same abscissa within tolerance: only the lower one survives.
                keep.pop()
            keep.append(k)
            best_y = y
    return keep


def pareto_envelope(points: Iterable[tuple[float, float]]) -> list[tuple[float, float]]:
    pts = [(float(x), float(y)) for x, y in points]
    return [pts[k] for k in pareto_indices(pts)]


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def _max_mu1(j1: int, j2: int, mu: float) -> float:
    return min(1.0, mu * (j1 + j2) / j1)


def _fill_mu2(mu1: float, j1: int, j2: int, mu: float) -> float:
    return min(1.0, max(0.0, (mu * (j1 + j2) - j1 * mu1) / j2))


def _breakpoints(j1: int, j2: int, mu: float) -> list[float]:
    """Allocations of class 1 at which some NDT can change slope."""
    budget = mu * (j1 + j2)
    hi = _max_mu1(j1, j2, mu)
    cands = [0.0, 0.5, 1.0, hi, mu]
    for mu2 in (0.0, 0.5, 1.0):
        cands.append((budget - j2 * mu2) / j1)
    return sorted({c for c in cands if -TOL <= c <= hi + TOL})


def sweep_mu1(j1: int, j2: int, mu: float, step: float = DEFAULT_STEP) -> list[float]:
    """Class-1 fractions to evaluate: a regular grid plus the exact breakpoints."""
    if not step > 0:
        raise ConstraintError(f"step must be positive, got {step}")
    hi = _max_mu1(j1, j2, mu)
    exact = [min(max(c, 0.0), hi) for c in _breakpoints(j1, j2, mu)]
    n = int(math.floor(hi / step + 1e-9))
    grid = [k * step for k in range(n + 1)]
    values = sorted(set(exact) | set(grid))
    out: list[float] = []
    for v in values:
        # Grid values within TOL of an exact breakpoint are replaced by it.
        if out and v - out[-1] <= TOL:
            if v in exact and out[-1] not in exact:
                out[-1] = v
            continue
        out.append(v)
    return out


def sweep_allocations(
    j1: int, j2: int, mu: float, r: float, step: float = DEFAULT_STEP, interior: bool = False
) -> list[SlicePoint]:
    """Evaluate class allocations along the capacity line (or the whole feasible set).

    With ``interior=True`` every ``(mu1, mu2)`` grid pair satisfying the
    class constraint is evaluated, not just those that fill the caches.
    """
    points: list[SlicePoint] = []
    budget = mu * (j1 + j2)
    for mu1 in sweep_mu1(j1, j2, mu, step):
        if interior:
            top = _fill_mu2(mu1, j1, j2, mu)
            n = int(math.floor(top / step + 1e-9))
            mu2s = sorted({k * step for k in range(n + 1)} | {top})
        else:
            mu2s = [_fill_mu2(mu1, j1, j2, mu)]
        for mu2 in mu2s:
            if j1 * mu1 + j2 * mu2 > budget + TOL:
                continue
            points.append(_evaluate(mu1, mu2, r))
    return points


@dataclass(frozen=True)
class RegionSlice:
    """Pareto boundary of the ``(delta_(1),(2), delta_(1),(1))`` slice."""

    j1: int
    j2: int
    mu: float
    r: float
    points: tuple[SlicePoint, ...]
    breakpoints: tuple[SlicePoint, ...]

    def xy(self) -> list[tuple[float, float]]:
        return [(p.d12, p.d11) for p in self.points]


def _regime_breaks(points: Sequence[SlicePoint], key) -> tuple[SlicePoint, ...]:
    out = []
    for k, p in enumerate(points):
        if k == 0 or k == len(points) - 1 or key(p) != key(points[k - 1]):
            out.append(p)
    return tuple(out)


def trace_region_slice(
    j1: int, j2: int, mu: float, r: float, step: float = DEFAULT_STEP, interior: bool = False
) -> RegionSlice:
    """Lower-left boundary of the slice; the class-2/class-2 NDT is left free."""
    swept = sweep_allocations(j1, j2, mu, r, step, interior)
    keep = pareto_indices([(p.d12, p.d11) for p in swept])
    pts = tuple(swept[k] for k in keep)
    return RegionSlice(
        j1, j2, mu, r, pts, _regime_breaks(pts, lambda p: (p.regime12, p.regime11))
    )


def average_ndt(
    d11: float,
    d12: float,
    d22: float,
    profile: PopularityProfile,
    strict_paper: bool = False,
) -> tuple[float | None, float | None]:
    """Average NDT seen by a class-1 file and by a class-2 file.

    Each average conditions on the class of the other requested file. A
    side whose conditioning event has probability zero (``a`` = 0 or 1) is
    returned as None. ``strict_paper`` switches the class-2 average
    to the alternative weighting that uses ``d11`` in place of ``d22``.
    """
    p11, p12, p22 = profile.p11, profile.p12, profile.p22
    avg1 = None if p11 + p12 == 0.0 else (p11 * d11 + p12 * d12) / (p11 + p12)
    own = d11 if strict_paper else d22
    avg2 = None if p22 + p12 == 0.0 else (p22 * own + p12 * d12) / (p22 + p12)
    return avg1, avg2


@dataclass(frozen=True)
class TradeoffPoint:
    avg1: float
    avg2: float
    source: SlicePoint


@dataclass(frozen=True)
class TradeoffCurve:
    profile: PopularityProfile
    points: tuple[TradeoffPoint, ...]

    def xy(self) -> list[tuple[float, float]]:
        return [(p.avg1, p.avg2) for p in self.points]


def trace_average_tradeoff(
    j1: int,
    j2: int,
    mu: float,
    r: float,
    a: float,
    step: float = DEFAULT_STEP,
    strict_paper: bool = False,
    interior: bool = False,
) -> TradeoffCurve:
    """Pareto trade-off between the per-class average NDTs under popularity ``a``."""
    profile = PopularityProfile(a)
    if not 0.0 < a < 1.0:
        raise ConstraintError(f"both class averages need 0 < a < 1, got {a}")
    mapped = []
    for p in sweep_allocations(j1, j2, mu, r, step, interior):
        x, y = average_ndt(p.d11, p.d12, p.d22, profile, strict_paper)
        mapped.append(TradeoffPoint(x, y, p))
    keep = pareto_indices([(p.avg1, p.avg2) for p in mapped])
    return TradeoffCurve(profile, tuple(mapped[k] for k in keep))


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _num(x: float) -> str:
    # repr is the shortest text that parses back to the identical double.
    return repr(float(x))


def slice_to_csv(region: RegionSlice, extended: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for p in region.points:
        row = [_num(p.d12), _num(p.d11)]
        if extended:
            row += [_num(p.mu1), _num(p.mu2), str(p.regime12)]
        w.writerow(row)
    return buf.getvalue()


def tradeoff_to_csv(curve: TradeoffCurve, extended: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for p in curve.points:
        row = [_num(p.avg1), _num(p.avg2)]
        if extended:
            row += [_num(p.source.mu1), _num(p.source.mu2), str(p.source.regime12)]
        w.writerow(row)
    return buf.getvalue()


def read_csv_columns(text: str) -> list[list[float]]:
    """Parse headerless numeric CSV into rows of floats (regime ids included)."""
    return [[float(x) for x in row] for row in csv.reader(io.StringIO(text)) if row]


def interpolate(poly: Sequence[tuple[float, float]], x: float) -> float | None:
    """Ordinate of the polyline at abscissa ``x``; None outside its range."""
    if not poly:
        return None
    if x < poly[0][0] - TOL or x > poly[-1][0] + TOL:
        return None
    for (x0, y0), (x1, y1) in zip(poly, poly[1:]):
        if x0 - TOL <= x <= x1 + TOL:
            if x1 - x0 <= TOL:
                return min(y0, y1)
            t = min(max((x - x0) / (x1 - x0), 0.0), 1.0)
            return y0 + t * (y1 - y0)
    return poly[-1][1] if abs(x - poly[-1][0]) <= TOL else poly[0][1]
