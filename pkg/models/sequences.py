"""
1D building blocks

  • SequenceOfLastColors — SLL: rightmost occurrence of each color of a prefix
  • LastColumns          — SLC + LLP over a growing rectangle ⟨i0,i1;1,j⟩
  • SparseTable          — O(1) position-of-minimum queries
  • DistinctColorIndex1D — distinct colors of any range T[i..j]
"""

import logging
from collections import OrderedDict
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)


def _ilog2(value: int) -> int:
    return value.bit_length() - 1


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   SLL — sequence of last colors
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class SequenceOfLastColors:
    """
    (color, position) pairs of a prefix, one per distinct color, ordered by
    position, each position being the color's rightmost occurrence.

    The OrderedDict is the doubly linked list; `locator` is the σ-sized
    per-color table (0 = color absent from the prefix).
    """

    def __init__(self, sigma: int):
        self.sigma = sigma
        self.length = 0
        self._order: 'OrderedDict[int, int]' = OrderedDict()
        self.locator = np.zeros(sigma + 1, dtype=np.int64)

    @classmethod
    def of(cls, sequence: Iterable[int], sigma: int) -> 'SequenceOfLastColors':
        sll = cls(sigma)
        for color in sequence:
            sll.extend(color)
        return sll

    def extend(self, color: int, position: Optional[int] = None) -> 'SequenceOfLastColors':
        """Cover one more position; `color` moves to the tail."""
        if not 1 <= color <= self.sigma:
            raise ValueError(f"Color {color} outside [1, {self.sigma}]")
        expected = self.length + 1
        if position is not None and position != expected:
            raise ValueError(f"Position {position} does not extend prefix of length {self.length}")
        self.length = expected
        self._order[color] = expected
        self._order.move_to_end(color)
        self.locator[color] = expected
        return self

    def items(self) -> List[Tuple[int, int]]:
        return list(self._order.items())

    def position(self, color: int) -> int:
        return int(self.locator[color])

    def __len__(self) -> int:
        return len(self._order)


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   SLC + LLP — sequence of last columns
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class LastColumns:
    """
    SLC⟨i0,i1;j⟩ with its LLP pointers.

    `items` maps column → count in increasing column order; the virtual
    item at column 0 counts colors absent from the rectangle so far. The
    LLP entry of a color is the column key of its item, which is also the
    color's rightmost column (0 if absent).
    """

    def __init__(self, sigma: int):
        self.sigma = sigma
        self.column = 0
        self.items: 'OrderedDict[int, int]' = OrderedDict([(0, sigma)])
        self.llp: List[int] = [0] * (sigma + 1)

    def advance(self, column_colors: Iterable[int]) -> 'LastColumns':
        """Take in column j+1 given its colors (duplicates allowed)."""
        distinct = set(column_colors)
        self.column += 1
        items, llp = self.items, self.llp
        for color in distinct:
            donor = llp[color]
            remaining = items[donor] - 1
            if remaining:
                items[donor] = remaining
            else:
                del items[donor]
            llp[color] = self.column
        items[self.column] = len(distinct)
        return self

    def slc(self) -> List[Tuple[int, int]]:
        return list(self.items.items())

    def pointer(self, color: int) -> Tuple[int, int]:
        """The SLC item (column, count) holding `color`"""
        column = self.llp[color]
        return (column, self.items[column])


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Sparse table
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class SparseTable:
    """
    Position-of-minimum over a fixed key array.

    levels[d][p] is the position of the minimum of keys[p : p + 2**d];
    ties resolve to the leftmost position.
    """

    def __init__(self, keys: Sequence[int]):
        self.keys = np.asarray(keys, dtype=np.int64)
        length = len(self.keys)
        self.levels: List[np.ndarray] = [np.arange(length, dtype=np.int64)]
        depth = 1
        while (1 << depth) <= length:
            prev = self.levels[-1]
            span = length - (1 << depth) + 1
            left = prev[:span]
            right = prev[1 << (depth - 1):(1 << (depth - 1)) + span]
            self.levels.append(np.where(self.keys[left] <= self.keys[right], left, right))
            depth += 1
        # list mirrors for scalar reads
        self._keys = self.keys.tolist()
        self._levels = [level.tolist() for level in self.levels]

    def argmin(self, start: int, stop: int) -> int:
        """Position of the minimum in keys[start:stop] (non-empty)."""
        depth = _ilog2(stop - start)
        level = self._levels[depth]
        a = level[start]
        b = level[stop - (1 << depth)]
        keys = self._keys
        return a if keys[a] <= keys[b] else b


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Distinct colors of a range
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class DistinctColorIndex1D:
    """
    Distinct-color reporting on a fixed sequence T[1..N].

    A position p of [i, j] is the last occurrence of its color in [i, j]
    iff next[p] > j. The sparse table runs over -next so that a range
    minimum is the position whose next occurrence lies furthest right;
    splitting around it reports every such p with O(1) table queries each.
    """

    def __init__(self, sequence: Sequence[int]):
        self.sequence: List[int] = [int(c) for c in sequence]
        size = len(self.sequence)
        self.size = size
        last_seen = [size + 1] * (max(self.sequence, default=0) + 1)
        nxt = np.empty(size, dtype=np.int64)
        for p in range(size - 1, -1, -1):
            color = self.sequence[p]
            nxt[p] = last_seen[color]
            last_seen[color] = p + 1
        self.next = nxt
        self._next = nxt.tolist()
        self._table = SparseTable(-nxt)

    def query(self, i: int, j: int) -> List[Tuple[int, int]]:
        """(color, last occurrence) for every distinct color of T[i..j], by last occurrence"""
        if not 1 <= i <= j <= self.size:
            raise ValueError(f"Invalid range [{i}, {j}] for sequence of length {self.size}")
        found: List[int] = []
        nxt = self._next
        pending = [(i - 1, j)]
        while pending:
            lo, hi = pending.pop()
            if lo >= hi:
                continue
            p = self._table.argmin(lo, hi)
            if nxt[p] <= j:
                continue
            found.append(p)
            pending.append((lo, p))
            pending.append((p + 1, hi))
        found.sort()
        return [(self.sequence[p], p + 1) for p in found]

    def colors(self, i: int, j: int) -> List[int]:
        return [color for color, _ in self.query(i, j)]
