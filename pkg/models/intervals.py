"""Normalized sets of closed integer intervals."""

from bisect import bisect_right
from typing import Iterable, Iterator, List, Tuple

Interval = Tuple[int, int]


class IntervalSet:
    """
    Sorted, disjoint, non-adjacent closed intervals [lo, hi].

    Union, intersection and difference run in time linear in the
    number of intervals.
    """

    __slots__ = ('intervals',)

    def __init__(self, intervals: Iterable[Interval] = ()):
        self.intervals: List[Interval] = self._normalize(intervals)

    @staticmethod
    def _normalize(intervals: Iterable[Interval]) -> List[Interval]:
        merged: List[Interval] = []
        for lo, hi in sorted((lo, hi) for lo, hi in intervals if lo <= hi):
            if merged and lo <= merged[-1][1] + 1:
                if hi > merged[-1][1]:
                    merged[-1] = (merged[-1][0], hi)
            else:
                merged.append((lo, hi))
        return merged

    @classmethod
    def span(cls, lo: int, hi: int) -> 'IntervalSet':
        return cls([(lo, hi)])

    @classmethod
    def points(cls, values: Iterable[int]) -> 'IntervalSet':
        return cls((v, v) for v in values)

    # ── Set algebra ───────────────────────────────────────────
    def __or__(self, other: 'IntervalSet') -> 'IntervalSet':
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return IntervalSet(self.intervals + other.intervals)

    def __and__(self, other: 'IntervalSet') -> 'IntervalSet':
        if not isinstance(other, IntervalSet):
            return NotImplemented
        out: List[Interval] = []
        a, b = self.intervals, other.intervals
        p = q = 0
        while p < len(a) and q < len(b):
            lo = max(a[p][0], b[q][0])
            hi = min(a[p][1], b[q][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[p][1] < b[q][1]:
                p += 1
            else:
                q += 1
        result = IntervalSet()
        result.intervals = out
        return result

    def __sub__(self, other: 'IntervalSet') -> 'IntervalSet':
        if not isinstance(other, IntervalSet):
            return NotImplemented
        out: List[Interval] = []
        cuts = other.intervals
        q = 0
        for lo, hi in self.intervals:
            while q < len(cuts) and cuts[q][1] < lo:
                q += 1
            start = lo
            r = q
            while r < len(cuts) and cuts[r][0] <= hi:
                if cuts[r][0] > start:
                    out.append((start, cuts[r][0] - 1))
                start = max(start, cuts[r][1] + 1)
                r += 1
            if start <= hi:
                out.append((start, hi))
        result = IntervalSet()
        result.intervals = out
        return result

    # ── Queries ───────────────────────────────────────────────
    def __contains__(self, value: int) -> bool:
        pos = bisect_right(self.intervals, (value, float('inf'))) - 1
        return pos >= 0 and self.intervals[pos][0] <= value <= self.intervals[pos][1]

    def __iter__(self) -> Iterator[int]:
        for lo, hi in self.intervals:
            yield from range(lo, hi + 1)

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __len__(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.intervals == other.intervals

    def __repr__(self) -> str:
        return f"IntervalSet({self.intervals})"
