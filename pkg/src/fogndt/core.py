"""Domain types and validation for the two-EN / two-user F-RAN model.

All quantities are normalized: file length is 1.0, cache fractions are
fractions of one file, and latencies are normalized delivery times (NDT).
Every type here is an immutable value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

TOL = 1e-9


class NdtError(Exception):
    """Base class for errors raised by fogndt."""


class StructureError(NdtError, ValueError):
    """Input has the wrong shape (e.g. a cache matrix that is not 2 x J)."""


class ConstraintError(NdtError, ValueError):
    """Input is well-formed but violates a domain constraint."""


@dataclass(frozen=True)
class SystemParams:
    """Fractional cache capacity ``mu``, fronthaul rate ``r`` and library size.

    ``classes`` optionally partitions the library into contiguous classes,
    given as ``(class_id, file_count)`` pairs in file order.
    """

    mu: float
    r: float
    num_files: int
    classes: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if not 0.0 <= self.mu <= 1.0:
            raise ConstraintError(f"mu must lie in [0, 1], got {self.mu}")
        if not self.r > 0.0 or math.isinf(self.r):
            raise ConstraintError(f"r must be a positive finite number, got {self.r}")
        if self.num_files < 2:
            raise ConstraintError(f"num_files must be >= 2, got {self.num_files}")
        if self.classes:
            object.__setattr__(self, "classes", tuple((int(c), int(n)) for c, n in self.classes))
            if any(n < 0 for _, n in self.classes):
                raise ConstraintError("class file counts must be nonnegative")
            total = sum(n for _, n in self.classes)
            if total != self.num_files:
                raise ConstraintError(
                    f"class file counts sum to {total}, expected num_files={self.num_files}"
                )

    @classmethod
    def two_class(cls, mu: float, r: float, j1: int, j2: int) -> "SystemParams":
        return cls(mu=mu, r=r, num_files=j1 + j2, classes=((1, j1), (2, j2)))

    @property
    def capacity(self) -> float:
        """Per-EN cache budget, in files (``mu * J``)."""
        return self.mu * self.num_files

    def class_of(self, file: int) -> int | None:
        """Class id of 1-based file index ``file``, or None without classes."""
        if not self.classes:
            return None
        upper = 0
        for cid, count in self.classes:
            upper += count
            if file <= upper:
                return cid
        raise StructureError(f"file {file} outside [1:{self.num_files}]")


@dataclass(frozen=True)
class CachePartition:
    """Cache partition matrix: ``entries[m][j]`` is the fraction of file j+1 at EN m+1."""

    entries: tuple[tuple[float, ...], tuple[float, ...]]

    def __post_init__(self) -> None:
        rows = tuple(tuple(float(x) for x in row) for row in self.entries)
        if len(rows) != 2:
            raise StructureError(f"cache partition needs exactly 2 rows (one per EN), got {len(rows)}")
        if len(rows[0]) != len(rows[1]):
            raise StructureError(
                f"cache partition rows differ in length: {len(rows[0])} vs {len(rows[1])}"
            )
        if len(rows[0]) == 0:
            raise StructureError("cache partition has no files")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def symmetric(cls, fractions: Sequence[float]) -> "CachePartition":
        """Partition caching ``fractions[j]`` of file j+1 at both ENs."""
        row = tuple(float(x) for x in fractions)
        return cls((row, row))

    @property
    def num_files(self) -> int:
        return len(self.entries[0])

    def column(self, file: int) -> tuple[float, float]:
        """(EN1, EN2) fractions of 1-based file index ``file``."""
        if not 1 <= file <= self.num_files:
            raise StructureError(f"file {file} outside [1:{self.num_files}]")
        return self.entries[0][file - 1], self.entries[1][file - 1]

    def row_sums(self) -> tuple[float, float]:
        return math.fsum(self.entries[0]), math.fsum(self.entries[1])

    def is_symmetric(self, tol: float = TOL) -> bool:
        return all(abs(a - b) <= tol for a, b in zip(*self.entries))

    def demand_entries(self, demand: "Demand") -> tuple[float, float, float, float]:
        """The four fractions ``(mu_1i, mu_2i, mu_1j, mu_2j)`` that matter for ``demand``."""
        a1, a2 = self.column(demand.i)
        b1, b2 = self.column(demand.j)
        return a1, a2, b1, b2


@dataclass(frozen=True)
class Demand:
    """Distinct files requested by user 1 (``i``) and user 2 (``j``); 1-based."""

    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i == self.j:
            raise ConstraintError(f"requested files must be distinct, got i = j = {self.i}")
        if self.i < 1 or self.j < 1:
            raise ConstraintError(f"file indices are 1-based, got ({self.i}, {self.j})")

    def user_of(self, file: int) -> int:
        """User (1 or 2) who requested ``file``."""
        if file == self.i:
            return 1
        if file == self.j:
            return 2
        raise ConstraintError(f"file {file} is not part of demand {{{self.i}, {self.j}}}")


@dataclass(frozen=True)
class NdtPoint:
    """Fronthaul and edge NDT of one delivery; ``delta`` is their sum."""

    delta_f: float
    delta_e: float
    delta: float = field(init=False)

    def __post_init__(self) -> None:
        if self.delta_f < -TOL or self.delta_e < -TOL:
            raise ConstraintError(
                f"NDT components must be nonnegative, got f={self.delta_f}, e={self.delta_e}"
            )
        object.__setattr__(self, "delta", self.delta_f + self.delta_e)

    def __add__(self, other: "NdtPoint") -> "NdtPoint":
        return NdtPoint(self.delta_f + other.delta_f, self.delta_e + other.delta_e)

    def scaled(self, factor: float) -> "NdtPoint":
        return NdtPoint(factor * self.delta_f, factor * self.delta_e)


ZERO_NDT = NdtPoint(0.0, 0.0)


@dataclass(frozen=True)
class PopularityProfile:
    """Probability ``a`` that a request is drawn from class 1."""

    a: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.a <= 1.0:
            raise ConstraintError(f"popularity a must lie in [0, 1], got {self.a}")

    @property
    def p11(self) -> float:
        return self.a * self.a

    @property
    def p12(self) -> float:
        return 2.0 * self.a * (1.0 - self.a)

    @property
    def p22(self) -> float:
        return (1.0 - self.a) ** 2


@dataclass(frozen=True)
class Violation:
    where: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_partition(
    partition: CachePartition, params: SystemParams, tol: float = TOL
) -> ValidationReport:
    """Check entry ranges and the per-EN capacity ``sum_j mu_mj <= mu * J``.

    Raises StructureError when the partition does not have ``params.num_files``
    columns; constraint violations are returned in the report instead.
    """
    if partition.num_files != params.num_files:
        raise StructureError(
            f"partition has {partition.num_files} files, params expect {params.num_files}"
        )
    found: list[Violation] = []
    for m, row in enumerate(partition.entries, start=1):
        for j, x in enumerate(row, start=1):
            if not (-tol <= x <= 1.0 + tol):
                found.append(Violation(f"entry[{m},{j}]", f"{x!r} outside [0, 1]"))
    for m, total in enumerate(partition.row_sums(), start=1):
        if total > params.capacity + tol:
            found.append(
                Violation(f"row[{m}]", f"row sum {total!r} exceeds capacity mu*J = {params.capacity!r}")
            )
    return ValidationReport(tuple(found))


def symmetrize(partition: CachePartition) -> CachePartition:
    """Replace both per-EN fractions of every file by their mean.

    Row sums of the result equal the mean of the input row sums, so a
    partition meeting the capacity constraint still meets it.
    """
    mean = tuple(0.5 * (a + b) for a, b in zip(*partition.entries))
    return CachePartition((mean, mean))
