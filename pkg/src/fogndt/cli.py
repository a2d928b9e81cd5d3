"""Command-line front end.

Subcommands: ``eval``, ``plan``, ``region``, ``average`` and ``verify``.
Options may also come from a JSON file given with ``--config``; flags
given on the command line take precedence over file values.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 constraint violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import bounds_oracle as bo
from . import closed_form as cf
from . import optimizer as opt
from . import planner as pl
from . import suites
from .core import (
    CachePartition,
    ConstraintError,
    Demand,
    NdtError,
    SystemParams,
    validate_partition,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CONSTRAINT = 0, 1, 2, 3

CONFIG_KEYS = {
    "mu": "mu",
    "rate": "rate",
    "alloc": "alloc",
    "j1": "j1",
    "j2": "j2",
    "popularity": "popularity",
    "step": "step",
    "format": "format",
    "out": "out",
    "demand": "demand",
    "strict_paper_average": "strict_paper_average",
    "extended": "extended",
    "seed": "seed",
}


class UsageError(Exception):
    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ScenarioConfig:
    mu: float | None
    rate: float | None
    alloc: tuple[tuple[float, ...], tuple[float, ...]] | None
    class_alloc: tuple[float, float] | None
    j1: int
    j2: int
    popularity: float | None
    step: float
    format: str
    out: str | None
    demand: tuple[int, int] | None


def _g(x: float) -> str:
    return f"{x:.12g}"


def _parse_alloc(value) -> tuple[tuple | None, tuple[float, float] | None]:
    """Explicit per-file list, explicit 2 x J matrix, or a ``c1:c2`` class pair."""
    if value is None:
        return None, None
    try:
        if isinstance(value, str):
            text = value.strip()
            if ":" in text:
                c1, c2 = text.split(":")
                return None, (float(c1), float(c2))
            if ";" in text:
                rows = [tuple(float(x) for x in row.split(",")) for row in text.split(";")]
            else:
                row = tuple(float(x) for x in text.split(","))
                rows = [row, row]
        elif isinstance(value, (list, tuple)) and value and isinstance(value[0], (list, tuple)):
            rows = [tuple(float(x) for x in row) for row in value]
        elif isinstance(value, (list, tuple)):
            row = tuple(float(x) for x in value)
            rows = [row, row]
        else:
            raise ValueError(f"unsupported value {value!r}")
    except ValueError as exc:
        raise UsageError("alloc", str(exc)) from None
    if len(rows) != 2 or len(rows[0]) != len(rows[1]):
        raise UsageError("alloc", "a matrix needs two rows of equal length")
    return (rows[0], rows[1]), None


def _parse_demand(value) -> tuple[int, int] | None:
    if value is None:
        return None
    try:
        parts = value.split(",") if isinstance(value, str) else list(value)
        i, j = (int(x) for x in parts)
    except (ValueError, TypeError):
        raise UsageError("demand", f"expected 'i,j', got {value!r}") from None
    return i, j


def build_config(args: argparse.Namespace) -> ScenarioConfig:
    values: dict = {}
    if args.config:
        try:
            values.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError("config", str(exc)) from None
        unknown = set(values) - set(CONFIG_KEYS)
        if unknown:
            raise UsageError("config", f"unknown keys {sorted(unknown)}")
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag

    def num(key: str, kind=float):
        v = values.get(key)
        if v is None:
            return None
        try:
            return kind(v)
        except (TypeError, ValueError):
            raise UsageError(key, f"not a number: {v!r}") from None

    alloc, class_alloc = _parse_alloc(values.get("alloc"))
    fmt = values.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise UsageError("format", f"expected csv or json, got {fmt!r}")
    step = num("step")
    if step is not None and not step > 0:
        raise UsageError("step", "must be positive")
    cfg = ScenarioConfig(
        mu=num("mu"),
        rate=num("rate"),
        alloc=alloc,
        class_alloc=class_alloc,
        j1=num("j1", int) or 1,
        j2=num("j2", int) or 1,
        popularity=num("popularity"),
        step=step or opt.DEFAULT_STEP,
        format=fmt,
        out=values.get("out"),
        demand=_parse_demand(values.get("demand")),
    )
    if cfg.rate is not None and not cfg.rate > 0:
        raise UsageError("rate", "must be positive")
    if cfg.mu is not None and not 0 <= cfg.mu <= 1:
        raise UsageError("mu", "must lie in [0, 1]")
    if cfg.j1 < 1 or cfg.j2 < 1:
        raise UsageError("j1/j2", "class sizes must be positive")
    args._extended = bool(values.get("extended", False))
    args._strict = bool(values.get("strict_paper_average", False))
    args._seed = int(values.get("seed", 0) or 0)
    return cfg


def _require(cfg: ScenarioConfig, *names: str) -> None:
    for name in names:
        if getattr(cfg, name) is None:
            raise UsageError(name, "required for this subcommand")


def _partition(cfg: ScenarioConfig) -> tuple[CachePartition, Demand, SystemParams | None]:
    """Cache partition, demand and (when mu is known) system params for eval/plan."""
    if cfg.alloc is None and cfg.class_alloc is None:
        raise UsageError("alloc", "required for this subcommand")
    if cfg.class_alloc is not None:
        c1, c2 = cfg.class_alloc
        if cfg.mu is not None:
            opt.ClassScenario(cfg.j1, cfg.j2, cfg.mu, cfg.rate, c1, c2)
        part = CachePartition.symmetric([c1] * cfg.j1 + [c2] * cfg.j2)
        default_demand = (1, cfg.j1 + 1)
    else:
        part = CachePartition(cfg.alloc)
        default_demand = (1, 2)
    i, j = cfg.demand or default_demand
    if not (1 <= i <= part.num_files and 1 <= j <= part.num_files):
        raise UsageError("demand", f"file indices must lie in [1:{part.num_files}]")
    demand = Demand(i, j)
    params = None
    if cfg.mu is not None and part.num_files >= 2:
        params = SystemParams(cfg.mu, cfg.rate, part.num_files)
        report = validate_partition(part, params)
        if not report.ok:
            raise ConstraintError(
                "; ".join(f"{v.where}: {v.message}" for v in report.violations)
            )
    return part, demand, params


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def cmd_eval(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    _require(cfg, "rate")
    part, demand, _ = _partition(cfg)
    r = cfg.rate
    entries = part.demand_entries(demand)
    outer, binding = cf.ndt_outer_binding(*entries, r)
    lp = bo.lp_min_for(*entries, r)
    symmetric = abs(entries[0] - entries[1]) <= 1e-9 and abs(entries[2] - entries[3]) <= 1e-9
    inner = regime = None
    if symmetric:
        inner, regime = cf.ndt_inner(entries[0], entries[2], r)
    result = {
        "demand": {"i": demand.i, "j": demand.j},
        "entries": list(entries),
        "r": r,
        "inner": inner,
        "regime": regime,
        "outer": outer,
        "outer_binding": binding,
        "lp": lp.optimum,
        "lp_witness": {"e": lp.delta_e, "f": lp.delta_f},
        "lp_binding": [k + 1 for k in lp.binding],
    }
    if cfg.format == "json":
        _emit(json.dumps(result, indent=2), cfg.out)
        return EXIT_OK
    lines = [
        f"inner {_g(inner)} regime {regime}" if symmetric else "inner n/a (asymmetric allocation)",
        f"outer {_g(outer)} binding {binding}",
        f"lp {_g(lp.optimum)} at delta_e={_g(lp.delta_e)} delta_f={_g(lp.delta_f)} "
        f"binding {[k + 1 for k in lp.binding]}",
    ]
    _emit("\n".join(lines), cfg.out)
    return EXIT_OK


def cmd_plan(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    _require(cfg, "rate")
    part, demand, params = _partition(cfg)
    if not part.is_symmetric():
        raise pl.UnsupportedPlacementError(
            "delivery plans exist only for symmetric allocations (same fraction at both ENs)"
        )
    placement = pl.build_cache_placement(part.entries[0], cfg.rate, params)
    plan = pl.build_delivery_plan(placement, demand, cfg.rate)
    text = pl.plan_to_json(plan)
    table = pl.format_plan_table(plan)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
        print(table)
    else:
        print(table, file=sys.stderr)
        print(text)
    return EXIT_OK


def cmd_region(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    _require(cfg, "mu", "rate")
    region = opt.trace_region_slice(cfg.j1, cfg.j2, cfg.mu, cfg.rate, cfg.step)
    if cfg.format == "json":
        data = [
            {"d12": p.d12, "d11": p.d11, "d22": p.d22, "mu1": p.mu1, "mu2": p.mu2, "regime": p.regime12}
            for p in region.points
        ]
        _emit(json.dumps(data, indent=2), cfg.out)
    else:
        _emit(opt.slice_to_csv(region, args._extended), cfg.out)
    return EXIT_OK


def cmd_average(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    _require(cfg, "mu", "rate", "popularity")
    curve = opt.trace_average_tradeoff(
        cfg.j1, cfg.j2, cfg.mu, cfg.rate, cfg.popularity, cfg.step, strict_paper=args._strict
    )
    if cfg.format == "json":
        data = [
            {"avg1": p.avg1, "avg2": p.avg2, "mu1": p.source.mu1, "mu2": p.source.mu2}
            for p in curve.points
        ]
        _emit(json.dumps(data, indent=2), cfg.out)
    else:
        _emit(opt.tradeoff_to_csv(curve, args._extended), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: ScenarioConfig, args: argparse.Namespace) -> int:
    results = suites.run_all(seed=args._seed)
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(f"{status} {res.name} ({res.checks} checks)")
        for f in res.failures[:5]:
            print(f"    {f}")
    passed = all(r.passed for r in results)
    print(f"{'all suites passed' if passed else 'verification FAILED'}")
    if cfg.out:
        Path(cfg.out).write_text(
            json.dumps({"passed": passed, "suites": [r.to_dict() for r in results]}, indent=2) + "\n"
        )
    return EXIT_OK if passed else EXIT_VERIFY


COMMANDS = {
    "eval": cmd_eval,
    "plan": cmd_plan,
    "region": cmd_region,
    "average": cmd_average,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits 2 on usage errors already
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with scenario fields")
    common.add_argument("--mu", type=float, help="fractional cache capacity")
    common.add_argument("--rate", type=float, help="fronthaul rate r")
    common.add_argument(
        "--alloc",
        help="per-file fractions 'a,b,...', a 2xJ matrix 'a,b;c,d', or a class pair 'c1:c2'",
    )
    common.add_argument("--demand", help="requested files 'i,j' (1-based)")
    common.add_argument("--j1", type=int, help="number of class-1 files")
    common.add_argument("--j2", type=int, help="number of class-2 files")
    common.add_argument("--popularity", type=float, help="probability a of class 1")
    common.add_argument("--step", type=float, help="sweep resolution in mu_(1)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", help="output path (stdout if omitted)")
    common.add_argument(
        "--strict-paper-average",
        dest="strict_paper_average",
        action="store_const",
        const=True,
        help="class-2 average weighting delta_(1),(1) instead of delta_(2),(2)",
    )
    common.add_argument(
        "--extended",
        action="store_const",
        const=True,
        help="append mu_(1), mu_(2) and regime columns to CSV output",
    )
    common.add_argument("--seed", type=int, help="random seed for verify")

    parser = _Parser(prog="fogndt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "eval": "inner bound, outer bound and LP minimum for one allocation and demand",
        "plan": "delivery plan (JSON) and phase table for one allocation and demand",
        "region": "boundary of the (delta_(1),(2), delta_(1),(1)) slice as CSV",
        "average": "trade-off between per-class average NDTs as CSV",
        "verify": "run the property suites; nonzero exit on failure",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg, args)
    except UsageError as exc:
        print(f"fogndt: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NdtError as exc:
        print(f"fogndt: constraint violation: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
