"""Sorted index over sweep records and nearest-target / extremal queries.

The index is an array of packed int64 keys (8 bytes per inset edge) ordered
by ``(dprime, x, y)``. All comparisons are exact:
``adprime`` targets are rescaled by C(n, 2) into ``dprime`` units and
compared as fractions, so ties are detected exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .sweep import InsetRecord, RecordColumns

METRICS = ("dprime", "adprime")


@dataclass(frozen=True)
class DeltaIndex:
    """Records sorted by ``(dprime, x, y)``.

    Normally each record is one int64 key ``dprime | x | y | k`` (high to low
    bit fields of width ``bits``), so the index costs 8 bytes per inset edge
    and rows are decoded only when a query returns them. ``columns`` holds
    sorted record columns instead when the values are too wide to pack.
    """

    n: int
    bits: int
    keys: Optional[np.ndarray] = None
    columns: Optional[RecordColumns] = None

    def __len__(self) -> int:
        return len(self.keys) if self.keys is not None else len(self.columns)

    @property
    def pairs(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def records(self) -> list[InsetRecord]:
        return self.rows(0, len(self))

    def value_at(self, i: int) -> int:
        if self.keys is not None:
            return int(self.keys[i]) >> 3 * self.bits
        return int(self.columns.dprime[i])

    def lower(self, value: int) -> int:
        """Position of the first record with ``dprime >= value``."""
        if self.keys is None:
            return int(np.searchsorted(self.columns.dprime, value))
        if value <= 0:
            return 0
        if value.bit_length() + 3 * self.bits > 62:
            return len(self.keys)
        return int(np.searchsorted(self.keys, value << 3 * self.bits))

    def rows(self, lo: int, hi: int) -> list[InsetRecord]:
        if self.keys is None:
            return self.columns.records(lo, hi)
        b, mask = self.bits, (1 << self.bits) - 1
        return [InsetRecord((v >> 2 * b) & mask, (v >> b) & mask, v & mask, v >> 3 * b) for v in self.keys[lo:hi].tolist()]

    def block(self, value: int) -> list[InsetRecord]:
        """Records whose ``dprime`` equals ``value``; already in ``(x, y)`` order."""
        return self.rows(self.lower(value), self.lower(value + 1))


@dataclass(frozen=True)
class QueryResult:
    records: tuple[InsetRecord, ...]
    metric: str
    target: Fraction
    deviation: Fraction


def build_index(records: Union[Iterable[InsetRecord], RecordColumns], n: int) -> DeltaIndex:
    """Sort records by ``(dprime, x, y)``.

    Rows are packed into a single int64 key when the values allow it, so the
    sort is one plain comparison sort over machine integers.
    """
    cols = records if isinstance(records, RecordColumns) else RecordColumns.from_rows([(r.x, r.y, r.k, r.dprime) for r in records])
    bits = n.bit_length()
    if len(cols) == 0:
        return DeltaIndex(n, bits, keys=np.empty(0, dtype=np.int64))
    x, y, dp = cols.x, cols.y, cols.dprime
    pair = x * n + y
    # sweep output is already in (x, y) order, which makes the duplicate check a scan
    if not (np.diff(pair) > 0).all():
        ordered = np.sort(pair)
        if (ordered[1:] == ordered[:-1]).any():
            raise ValueError("duplicate inset edge in sweep output")
    if int(dp.min()) >= 0 and int(dp.max()).bit_length() + 3 * bits <= 62:
        keys = (dp << 3 * bits) | (x << 2 * bits) | (y << bits) | cols.k
        keys.sort()
        return DeltaIndex(n, bits, keys=keys)
    return DeltaIndex(n, bits, columns=cols.take(np.lexsort((pair, dp))))


def parse_target(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed target {text!r}") from None


def _scale(index: DeltaIndex, target: Fraction, metric: str) -> Fraction:
    if metric == "dprime":
        return Fraction(target)
    if metric == "adprime":
        return Fraction(target) * index.pairs
    raise ValueError(f"unknown metric {metric!r}")


def closest(index: DeltaIndex, target: Union[Fraction, int, str], metric: str = "dprime") -> QueryResult:
    """Every record whose metric is nearest ``target``, sorted by ``(x, y)``."""
    if len(index) == 0:
        raise ValueError("empty index")
    if isinstance(target, str):
        target = parse_target(target)
    t = _scale(index, target, metric)
    # values are integers, so value >= t exactly when value >= ceil(t)
    pos = index.lower(math.ceil(t))
    candidates = {index.value_at(i) for i in (pos - 1, pos) if 0 <= i < len(index)}
    best = min(abs(v - t) for v in candidates)
    chosen: list[InsetRecord] = []
    for v in sorted(candidates):
        if abs(v - t) == best:
            chosen += index.block(v)
    chosen.sort(key=lambda r: (r.x, r.y))
    deviation = best if metric == "dprime" else best / index.pairs
    return QueryResult(tuple(chosen), metric, Fraction(target), Fraction(deviation))


def linear_closest(records: Sequence[InsetRecord], target: Fraction, metric: str, n: int) -> list[InsetRecord]:
    """Reference scan for :func:`closest`."""
    scale = 1 if metric == "dprime" else Fraction(1, n * (n - 1) // 2)
    devs = [abs(r.dprime * scale - target) for r in records]
    best = min(devs)
    return sorted((r for r, d in zip(records, devs) if d == best), key=lambda r: (r.x, r.y))


def top_k(index: DeltaIndex, count: int, direction: str = "max") -> list[InsetRecord]:
    if not 1 <= count <= len(index):
        raise ValueError(f"count {count} outside 1..{len(index)}")
    if direction == "min":
        return index.rows(0, count)
    if direction != "max":
        raise ValueError(f"direction must be 'max' or 'min', not {direction!r}")
    out: list[InsetRecord] = []
    hi = len(index)
    while len(out) < count:
        lo = index.lower(index.value_at(hi - 1))
        out += index.rows(lo, hi)
        hi = lo
    return out[:count]


def extremes(index: DeltaIndex) -> tuple[list[InsetRecord], list[InsetRecord]]:
    """``(max_set, min_set)``; the max set is where adding the edge leaves the smallest Wiener index."""
    if len(index) == 0:
        raise ValueError("empty index")
    return index.block(index.value_at(len(index) - 1)), index.block(index.value_at(0))
