"""Cache placements and delivery plans that realize the achievable NDT.

Files are normalized to the unit interval; a placement lists which
sub-intervals of every file each EN holds, and a plan lists delivery
phases whose payloads are sub-intervals routed to an EN (hard transfer)
or to a user (edge delivery).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import closed_form as cf
from .closed_form import Strategy, StrategyInvocation, strategy_ndt
from .core import (
    TOL,
    ZERO_NDT,
    CachePartition,
    ConstraintError,
    Demand,
    NdtError,
    NdtPoint,
    SystemParams,
    validate_partition,
)


class UnsupportedPlacementError(NdtError, ValueError):
    """The placement is not one of the symmetric layouts the planner builds."""


class PlanError(NdtError, ValueError):
    """A plan's payloads do not have the shape its strategy requires."""


EN1, EN2 = "EN1", "EN2"
USER1, USER2 = "user1", "user2"
CLOUD, BOTH = "cloud", "both"
ENS = (EN1, EN2)


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open ``[lo, hi)`` inside the unit file."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (-TOL <= self.lo <= self.hi + TOL and self.hi <= 1.0 + TOL):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi})")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def mapped(self, offset: float, scale: float) -> "Interval":
        return Interval(offset + scale * self.lo, offset + scale * self.hi)


def merge(intervals: Iterable[Interval], tol: float = TOL) -> list[Interval]:
    """Union of intervals as a sorted list of disjoint, non-touching pieces."""
    out: list[Interval] = []
    for iv in sorted(intervals):
        if iv.length <= tol:
            continue
        if out and iv.lo <= out[-1].hi + tol:
            if iv.hi > out[-1].hi:
                out[-1] = Interval(out[-1].lo, iv.hi)
        else:
            out.append(iv)
    return out


def covers(pieces: Sequence[Interval], target: Interval, tol: float = TOL) -> bool:
    """Whether the merged ``pieces`` contain ``target``."""
    if target.length <= tol:
        return True
    return any(p.lo <= target.lo + tol and target.hi <= p.hi + tol for p in merge(pieces, tol))


def overlap(pieces: Sequence[Interval], target: Interval) -> float:
    return sum(max(0.0, min(p.hi, target.hi) - max(p.lo, target.lo)) for p in merge(pieces))


# ---------------------------------------------------------------------------
# Placement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CachePlacement:
    """``holdings[(file, en)]``: sorted disjoint intervals of ``file`` cached at ``en``."""

    num_files: int
    holdings: Mapping[tuple[int, str], tuple[Interval, ...]]

    def at(self, file: int, en: str) -> tuple[Interval, ...]:
        return self.holdings.get((file, en), ())

    def fraction(self, file: int, en: str) -> float:
        return math.fsum(iv.length for iv in self.at(file, en))

    def partition(self) -> CachePartition:
        """Cache partition matrix implied by the interval layout."""
        return CachePartition(
            tuple(
                tuple(self.fraction(j, en) for j in range(1, self.num_files + 1)) for en in ENS
            )
        )


def build_cache_placement(
    mu_per_file: Sequence[float], r: float, params: SystemParams | None = None
) -> CachePlacement:
    """Lay out symmetric per-file fractions in both caches.

    For ``r <= 1`` EN1 keeps the head ``[0, mu)`` and EN2 the tail
    ``[1 - mu, 1)`` of every file, so the two caches overlap only when
    ``mu > 1/2``. For ``r > 1`` both ENs keep the same head ``[0, mu)``.
    """
    fractions = [float(x) for x in mu_per_file]
    if params is not None:
        if len(fractions) != params.num_files:
            raise ConstraintError(
                f"{len(fractions)} fractions given for {params.num_files} files"
            )
        report = validate_partition(CachePartition.symmetric(fractions), params)
        if not report.ok:
            raise ConstraintError("; ".join(f"{v.where}: {v.message}" for v in report.violations))
    else:
        bad = [x for x in fractions if not -TOL <= x <= 1.0 + TOL]
        if bad:
            raise ConstraintError(f"cache fractions outside [0, 1]: {bad}")
    holdings: dict[tuple[int, str], tuple[Interval, ...]] = {}
    for file, m in enumerate(fractions, start=1):
        m = min(max(m, 0.0), 1.0)
        if m <= 0.0:
            continue
        if r <= 1.0:
            holdings[(file, EN1)] = (Interval(0.0, m),)
            holdings[(file, EN2)] = (Interval(1.0 - m, 1.0),)
        else:
            holdings[(file, EN1)] = (Interval(0.0, m),)
            holdings[(file, EN2)] = (Interval(0.0, m),)
    return CachePlacement(len(fractions), holdings)


def _symmetric_fraction(placement: CachePlacement, file: int, r: float) -> float:
    """Per-file fraction of a planner-built placement; rejects anything else."""
    a, b = placement.fraction(file, EN1), placement.fraction(file, EN2)
    if abs(a - b) > TOL:
        raise UnsupportedPlacementError(
            f"file {file} is cached asymmetrically ({a} at EN1, {b} at EN2)"
        )
    expected = build_cache_placement([a], r)
    for en in ENS:
        want = merge(expected.at(1, en))
        have = merge(placement.at(file, en))
        if len(want) != len(have) or any(
            abs(w.lo - h.lo) > TOL or abs(w.hi - h.hi) > TOL for w, h in zip(want, have)
        ):
            raise UnsupportedPlacementError(
                f"file {file} at {en} is not laid out as the r={r} caching policy requires"
            )
    return a


# ---------------------------------------------------------------------------
# Plans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Payload:
    """``interval`` of ``file`` sent from ``source`` to ``endpoint``.

    ``endpoint`` is an EN for hard transfer and a user otherwise. ``source``
    is ``cloud`` for fronthaul strategies, ``both`` for zero-forcing from
    the caches and the transmitting EN for interference alignment.
    """

    file: int
    interval: Interval
    endpoint: str
    source: str


@dataclass(frozen=True)
class Phase:
    kind: Strategy
    payloads: tuple[Payload, ...]
    ndt: NdtPoint


@dataclass(frozen=True)
class DeliveryPlan:
    demand: Demand
    phases: tuple[Phase, ...]
    total: NdtPoint
    regime: int | None = None

    def delivered(self, file: int) -> list[Interval]:
        """Intervals of ``file`` that reach a user, across all phases."""
        return [
            p.interval
            for ph in self.phases
            if ph.kind is not Strategy.HT
            for p in ph.payloads
            if p.file == file
        ]


def _phase(kind: Strategy, payloads: list[Payload], r: float) -> Phase | None:
    if not payloads or payloads[0].interval.length <= 0.0:
        return None
    nu = payloads[0].interval.length
    return Phase(kind, tuple(payloads), strategy_ndt(StrategyInvocation(kind, nu), r))


def _assemble(demand: Demand, phases: Iterable[Phase | None], regime: int | None) -> DeliveryPlan:
    kept = tuple(ph for ph in phases if ph is not None)
    total = ZERO_NDT
    for ph in kept:
        total = total + ph.ndt
    return DeliveryPlan(demand, kept, total, regime)


def build_delivery_plan(placement: CachePlacement, demand: Demand, r: float) -> DeliveryPlan:
    """Delivery of ``demand`` over a planner-built placement.

    Files are relabelled so ``f_lo`` has the smaller cache fraction ``a``
    and ``f_hi`` the larger ``b``. Phases are emitted in the order hard
    transfer, interference alignment, zero-forcing, soft transfer.
    """
    for f in (demand.i, demand.j):
        if not 1 <= f <= placement.num_files:
            raise ConstraintError(f"file {f} outside [1:{placement.num_files}]")
    mu = {f: _symmetric_fraction(placement, f, r) for f in (demand.i, demand.j)}
    f_lo, f_hi = (demand.i, demand.j) if mu[demand.i] <= mu[demand.j] else (demand.j, demand.i)
    a, b = mu[f_lo], mu[f_hi]
    user = {demand.i: USER1, demand.j: USER2}
    files = (demand.i, demand.j)
    ell = cf.select_regime(a, b, r)

    def to_users(iv: Interval, source: str) -> list[Payload]:
        return [Payload(f, iv, user[f], source) for f in files]

    def x_ia(head: Interval, tail: Interval) -> list[Payload]:
        return [Payload(f, head, user[f], EN1) for f in files] + [
            Payload(f, tail, user[f], EN2) for f in files
        ]

    if ell == 1:
        ht = [
            Payload(f_lo, Interval(a, b), EN1, CLOUD),
            Payload(f_lo, Interval(1.0 - b, 1.0 - a), EN2, CLOUD),
        ]
        phases = [
            _phase(Strategy.HT, ht, r),
            _phase(Strategy.X_IA, x_ia(Interval(0.0, b), Interval(1.0 - b, 1.0)), r),
            _phase(Strategy.ST_ZF, to_users(Interval(b, 1.0 - b), CLOUD), r),
        ]
    elif ell == 2:
        ht = [
            Payload(f_lo, Interval(a, 0.5), EN1, CLOUD),
            Payload(f_lo, Interval(0.5, 1.0 - a), EN2, CLOUD),
        ]
        phases = [
            _phase(Strategy.HT, ht, r),
            _phase(Strategy.X_IA, x_ia(Interval(0.0, 0.5), Interval(0.5, 1.0)), r),
        ]
    elif ell == 3:
        phases = [
            _phase(Strategy.X_IA, x_ia(Interval(0.0, 1.0 - a), Interval(a, 1.0)), r),
            _phase(Strategy.ZF, to_users(Interval(1.0 - a, a), BOTH), r),
        ]
    else:
        phases = [
            _phase(Strategy.ZF, to_users(Interval(0.0, a), BOTH), r),
            _phase(Strategy.ST_ZF, to_users(Interval(a, 1.0), CLOUD), r),
        ]
    return _assemble(demand, phases, ell)


def _check_shape(ph: Phase) -> float:
    """Validate the payload pattern of one phase and return its ``nu``."""
    pl = ph.payloads
    lengths = [p.interval.length for p in pl]
    if not pl:
        raise PlanError(f"{ph.kind.value} phase has no payloads")
    if any(abs(x - lengths[0]) > TOL for x in lengths):
        raise PlanError(f"{ph.kind.value} payloads differ in length: {lengths}")
    if ph.kind is Strategy.HT:
        if len(pl) != 2 or sorted(p.endpoint for p in pl) != [EN1, EN2]:
            raise PlanError("HT phase needs one payload per EN")
        if any(p.source != CLOUD for p in pl):
            raise PlanError("HT payloads must come from the cloud")
    elif ph.kind in (Strategy.ZF, Strategy.ST_ZF):
        if len(pl) != 2 or sorted(p.endpoint for p in pl) != [USER1, USER2]:
            raise PlanError(f"{ph.kind.value} phase needs one payload per user")
        want = BOTH if ph.kind is Strategy.ZF else CLOUD
        if any(p.source != want for p in pl):
            raise PlanError(f"{ph.kind.value} payloads must have source {want!r}")
    else:
        pairs = sorted((p.source, p.endpoint) for p in pl)
        if pairs != [(EN1, USER1), (EN1, USER2), (EN2, USER1), (EN2, USER2)]:
            raise PlanError("X-IA phase needs one payload from each EN to each user")
    return lengths[0]


def _infer_rate(plan: DeliveryPlan) -> float:
    for ph in plan.phases:
        if ph.kind in (Strategy.HT, Strategy.ST_ZF) and ph.ndt.delta_f > 0.0:
            return ph.payloads[0].interval.length / ph.ndt.delta_f
    return 1.0


def plan_ndt(plan: DeliveryPlan, r: float) -> NdtPoint:
    """Recompute a plan's NDT from its payload sizes."""
    total = ZERO_NDT
    for ph in plan.phases:
        nu = _check_shape(ph)
        total = total + strategy_ndt(StrategyInvocation(ph.kind, min(nu, 1.0)), r)
    return total


@dataclass(frozen=True)
class PlanIssue:
    check: str
    file: int | None
    detail: str


@dataclass(frozen=True)
class PlanReport:
    issues: tuple[PlanIssue, ...]
    recomputed: NdtPoint | None

    @property
    def ok(self) -> bool:
        return not self.issues

    def failed(self, check: str) -> bool:
        return any(i.check == check for i in self.issues)


def verify_plan(
    plan: DeliveryPlan, placement: CachePlacement, demand: Demand, r: float | None = None
) -> PlanReport:
    """Check coverage, source availability and NDT accounting of a plan.

    When ``r`` is omitted it is read off the first fronthaul phase
    (``nu / delta_f``); plans without fronthaul do not depend on it.
    """
    issues: list[PlanIssue] = []
    if plan.demand != demand:
        issues.append(PlanIssue("demand", None, f"plan is for {plan.demand}, expected {demand}"))

    # Coverage: user-bound payloads of each requested file tile [0, 1).
    for f in (demand.i, demand.j):
        pieces = sorted(plan.delivered(f))
        cursor = 0.0
        for iv in pieces:
            if iv.length <= TOL:
                continue
            if iv.lo > cursor + TOL:
                issues.append(PlanIssue("coverage", f, f"gap [{cursor!r}, {iv.lo!r})"))
            elif iv.lo < cursor - TOL:
                issues.append(
                    PlanIssue("coverage", f, f"overlap [{iv.lo!r}, {min(cursor, iv.hi)!r})")
                )
            cursor = max(cursor, iv.hi)
        if cursor < 1.0 - TOL:
            issues.append(PlanIssue("coverage", f, f"gap [{cursor!r}, 1.0)"))

    # Source availability, with hard-transferred bits added to EN holdings.
    held: dict[tuple[int, str], list[Interval]] = {
        (f, en): list(placement.at(f, en)) for f in range(1, placement.num_files + 1) for en in ENS
    }
    for ph in plan.phases:
        for p in ph.payloads:
            key_of = lambda en: (p.file, en)  # noqa: E731
            if ph.kind is Strategy.HT:
                if p.endpoint not in ENS:
                    issues.append(PlanIssue("source", p.file, f"HT endpoint {p.endpoint!r} is not an EN"))
                    continue
                dup = overlap(held.get(key_of(p.endpoint), []), p.interval)
                if dup > TOL:
                    issues.append(
                        PlanIssue(
                            "source",
                            p.file,
                            f"HT of [{p.interval.lo!r}, {p.interval.hi!r}) to {p.endpoint} "
                            "resends bits already cached there",
                        )
                    )
                held.setdefault(key_of(p.endpoint), []).append(p.interval)
            elif ph.kind is Strategy.ZF:
                for en in ENS:
                    if not covers(held.get(key_of(en), []), p.interval):
                        issues.append(
                            PlanIssue(
                                "source",
                                p.file,
                                f"ZF interval [{p.interval.lo!r}, {p.interval.hi!r}) missing at {en}",
                            )
                        )
            elif ph.kind is Strategy.X_IA:
                if p.source not in ENS or not covers(held.get(key_of(p.source), []), p.interval):
                    issues.append(
                        PlanIssue(
                            "source",
                            p.file,
                            f"X-IA interval [{p.interval.lo!r}, {p.interval.hi!r}) "
                            f"not available at source {p.source}",
                        )
                    )

    recomputed: NdtPoint | None = None
    try:
        recomputed = plan_ndt(plan, r if r is not None else _infer_rate(plan))
    except PlanError as exc:
        issues.append(PlanIssue("accounting", None, str(exc)))
    if recomputed is not None and (
        abs(recomputed.delta_f - plan.total.delta_f) > TOL
        or abs(recomputed.delta_e - plan.total.delta_e) > TOL
    ):
        issues.append(
            PlanIssue(
                "accounting",
                None,
                f"stated total ({plan.total.delta_f!r}, {plan.total.delta_e!r}) != "
                f"recomputed ({recomputed.delta_f!r}, {recomputed.delta_e!r})",
            )
        )
    return PlanReport(tuple(issues), recomputed)


# ---------------------------------------------------------------------------
# File splitting / cache sharing
# ---------------------------------------------------------------------------


def mix_plans(plan_a: DeliveryPlan, plan_b: DeliveryPlan, alpha: float) -> DeliveryPlan:
    """Run ``plan_a`` on the first ``alpha`` of every file and ``plan_b`` on the rest."""
    if plan_a.demand != plan_b.demand:
        raise ConstraintError(f"demand mismatch: {plan_a.demand} vs {plan_b.demand}")
    if not 0.0 <= alpha <= 1.0:
        raise ConstraintError(f"alpha must lie in [0, 1], got {alpha}")

    def rescale(plan: DeliveryPlan, offset: float, scale: float) -> list[Phase]:
        if scale <= 0.0:
            return []
        return [
            Phase(
                ph.kind,
                tuple(
                    Payload(p.file, p.interval.mapped(offset, scale), p.endpoint, p.source)
                    for p in ph.payloads
                ),
                ph.ndt.scaled(scale),
            )
            for ph in plan.phases
        ]

    phases = rescale(plan_a, 0.0, alpha) + rescale(plan_b, alpha, 1.0 - alpha)
    return _assemble(plan_a.demand, phases, None)


def mix_placements(pa: CachePlacement, pb: CachePlacement, alpha: float) -> CachePlacement:
    """Cache sharing: ``pa`` squeezed into ``[0, alpha)``, ``pb`` into ``[alpha, 1)``."""
    if pa.num_files != pb.num_files:
        raise ConstraintError("placements cover different libraries")
    holdings: dict[tuple[int, str], tuple[Interval, ...]] = {}
    for f in range(1, pa.num_files + 1):
        for en in ENS:
            pieces = []
            if alpha > 0.0:
                pieces += [iv.mapped(0.0, alpha) for iv in pa.at(f, en)]
            if alpha < 1.0:
                pieces += [iv.mapped(alpha, 1.0 - alpha) for iv in pb.at(f, en)]
            merged = merge(pieces, tol=0.0)
            if merged:
                holdings[(f, en)] = tuple(merged)
    return CachePlacement(pa.num_files, holdings)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def plan_to_dict(plan: DeliveryPlan) -> dict:
    return {
        "demand": {"i": plan.demand.i, "j": plan.demand.j},
        "phases": [
            {
                "kind": ph.kind.value,
                "payloads": [
                    {
                        "file": p.file,
                        "lo": p.interval.lo,
                        "hi": p.interval.hi,
                        "endpoint": p.endpoint,
                        "source": p.source,
                    }
                    for p in ph.payloads
                ],
                "ndt": {"f": ph.ndt.delta_f, "e": ph.ndt.delta_e},
            }
            for ph in plan.phases
        ],
        "total": {"f": plan.total.delta_f, "e": plan.total.delta_e, "sum": plan.total.delta},
    }


def plan_from_dict(data: Mapping) -> DeliveryPlan:
    phases = tuple(
        Phase(
            Strategy(ph["kind"]),
            tuple(
                Payload(
                    int(p["file"]),
                    Interval(float(p["lo"]), float(p["hi"])),
                    str(p["endpoint"]),
                    str(p.get("source", CLOUD)),
                )
                for p in ph["payloads"]
            ),
            NdtPoint(float(ph["ndt"]["f"]), float(ph["ndt"]["e"])),
        )
        for ph in data["phases"]
    )
    total = NdtPoint(float(data["total"]["f"]), float(data["total"]["e"]))
    return DeliveryPlan(Demand(int(data["demand"]["i"]), int(data["demand"]["j"])), phases, total)


def plan_to_json(plan: DeliveryPlan, indent: int | None = 2) -> str:
    # json writes floats with repr, i.e. the shortest string that round-trips.
    return json.dumps(plan_to_dict(plan), indent=indent)


def plan_from_json(text: str) -> DeliveryPlan:
    return plan_from_dict(json.loads(text))


def format_plan_table(plan: DeliveryPlan) -> str:
    """Human-readable phase table."""
    lines = [f"demand: user1 <- F{plan.demand.i}, user2 <- F{plan.demand.j}"]
    header = f"{'phase':<7}{'nu':>14}{'delta_f':>16}{'delta_e':>16}  payloads"
    lines.append(header)
    for ph in plan.phases:
        nu = ph.payloads[0].interval.length
        desc = ", ".join(
            f"F{p.file}[{p.interval.lo:.6g},{p.interval.hi:.6g}) {p.source}->{p.endpoint}"
            for p in ph.payloads
        )
        lines.append(
            f"{ph.kind.value:<7}{nu:>14.12g}{ph.ndt.delta_f:>16.12g}{ph.ndt.delta_e:>16.12g}  {desc}"
        )
    lines.append(
        f"{'total':<7}{'':>14}{plan.total.delta_f:>16.12g}{plan.total.delta_e:>16.12g}"
        f"  sum={plan.total.delta:.12g}"
    )
    return "\n".join(lines)
