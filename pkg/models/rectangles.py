"""
Maximal rectangle enumeration

For every row pair (i0, i1) the columns are swept left to right while
SLC⟨i0,i1;j⟩/LLP and the SLLs of the rows just below and above are kept
current. Each step j:
  1. stage 1 — end markers for maximal rectangles with right column j−1
  2. stage 2 — colors of column j appended to the live φ(i0,i1;j0)
  3. update  — SLC/LLP and both border SLLs take in column j
After column n the last step closes rectangles touching the right border.
"""

import logging
import multiprocessing
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from models.events import Event, EventSequence, LocationRecords
from models.image import Fingerprint, Image, Rect
from models.intervals import IntervalSet
from models.sequences import DistinctColorIndex1D, LastColumns, SequenceOfLastColors

logger = logging.getLogger(__name__)

VARIANTS = ('column-index', 'parallel-rows')


@dataclass
class PhiSequence(EventSequence):
    """φ(i0,i1;j0): colors and end markers for one row pair and left column"""
    i0: int
    i1: int
    j0: int
    events: List[Event] = field(default_factory=list)


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Column fingerprints f⟨i0,i1;j,j⟩
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class ColumnFingerprints:
    """
    Distinct colors of every column slice rows i0..i1.

    column-index   — one DistinctColorIndex1D per column, queried per pair
    parallel-rows  — sets for (i0, i1−1) grown by one row; consecutive
                     calls for the same i0 cost one insertion per column
    """

    def __init__(self, image: Image, variant: str = 'column-index'):
        if variant not in VARIANTS:
            raise ValueError(f"Unknown fingerprint variant {variant!r}")
        self.image = image
        self.variant = variant
        self._indexes: List[DistinctColorIndex1D] = []
        if variant == 'column-index':
            self._indexes = [DistinctColorIndex1D(image.column(j)) for j in range(1, image.n + 1)]
        self._anchor = 0
        self._top = 0
        self._sets: List[set] = []

    def fingerprints(self, i0: int, i1: int) -> List[List[int]]:
        if self.variant == 'column-index':
            return [sorted(index.colors(i0, i1)) for index in self._indexes]

        if self._anchor != i0 or self._top >= i1:
            self._anchor = i0
            self._top = i0 - 1
            self._sets = [set() for _ in range(self.image.n)]
        for row in range(self._top + 1, i1 + 1):
            for column, color in zip(self._sets, self.image.row(row)):
                column.add(color)
        self._top = i1
        return [sorted(column) for column in self._sets]


def column_fingerprint(image: Image, i0: int, i1: int, j: int,
                       mode: str = 'column-index') -> Fingerprint:
    """f⟨i0,i1;j,j⟩ through either variant"""
    columns = ColumnFingerprints(image, mode)
    if mode == 'parallel-rows':
        for top in range(i0, i1):
            columns.fingerprints(i0, top)
    return Fingerprint(tuple(columns.fingerprints(i0, i1)[j - 1]))


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Row pair sweep
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class RowPairState:
    """Sweep state for one row pair ⟨i0,i1⟩ after `columns.column` columns."""

    def __init__(self, image: Image, i0: int, i1: int):
        self.image = image
        self.i0 = i0
        self.i1 = i1
        self.columns = LastColumns(image.sigma)
        # rows outside the image stay None: that side is maximal at the border
        self.below: Optional[SequenceOfLastColors] = None
        self.above: Optional[SequenceOfLastColors] = None
        self._below_row: List[int] = []
        self._above_row: List[int] = []
        if i0 > 1:
            self.below = SequenceOfLastColors(image.sigma)
            self._below_row = image.row(i0 - 1)
        if i1 < image.m:
            self.above = SequenceOfLastColors(image.sigma)
            self._above_row = image.row(i1 + 1)
        self.phi: Dict[int, PhiSequence] = {}

    @property
    def right(self) -> int:
        """Right column of the rectangles the next stage 1 closes"""
        return self.columns.column

    def _sequence(self, j0: int) -> PhiSequence:
        seq = self.phi.get(j0)
        if seq is None:
            seq = self.phi[j0] = PhiSequence(self.i0, self.i1, j0)
        return seq

    # ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
    #   I = I′ ∩ I″ — left columns maximal to bottom and top
    # ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
    def bottom_top_intervals(self) -> IntervalSet:
        right = self.right
        return self._side_intervals(self.below, right) & self._side_intervals(self.above, right)

    def _side_intervals(self, sll: Optional[SequenceOfLastColors], right: int) -> IntervalSet:
        if sll is None:
            return IntervalSet.span(1, right)
        llp = self.columns.llp
        # a′_p leaves the rectangle ⟨j0, right⟩ iff l(a′_p) < j0 ≤ i′_p
        return IntervalSet((llp[color] + 1, position) for color, position in sll.items())

    # ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
    #   Stage 1 — end markers for right column j−1
    # ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
    def stage1_emit_end_markers(self, f: Sequence[int]) -> List[Rect]:
        right = self.right
        if right == 0:
            return []
        llp = self.columns.llp
        leftmost = min(llp[c] for c in f)
        columns = list(self.columns.items)
        candidates = [col + 1 for col in columns[:-1] if col >= leftmost]
        if not candidates:
            return []

        allowed = self.bottom_top_intervals()
        markers = []
        for j0 in candidates:
            if j0 in allowed:
                rect = Rect(self.i0, self.i1, j0, right)
                self.phi[j0].end(rect)
                markers.append(rect)
        return markers

    # ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
    #   Stage 2 — color additions for column j
    # ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
    def stage2_add_colors(self, f: Sequence[int]) -> List[Tuple[int, int]]:
        llp = self.columns.llp
        groups: Dict[int, List[int]] = {}
        for color in sorted(f):
            groups.setdefault(llp[color], []).append(color)

        additions: List[Tuple[int, int]] = []
        pending: List[int] = []
        for column, count in self.columns.items.items():
            group = groups.get(column, ())
            pending.extend(group)
            # column 0 stands for the left border and never dies early
            feasible = column == 0 or len(group) < count
            if feasible and pending:
                seq = self._sequence(column + 1)
                for color in pending:
                    seq.add_color(color)
                    additions.append((column + 1, color))
        return additions

    def advance(self, f: Sequence[int]):
        self.columns.advance(f)
        j = self.columns.column
        if self.below is not None:
            self.below.extend(self._below_row[j - 1])
        if self.above is not None:
            self.above.extend(self._above_row[j - 1])

    def step(self, f: Sequence[int]):
        self.stage1_emit_end_markers(f)
        self.stage2_add_colors(f)
        self.advance(f)

    # ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
    #   Last step — right column n
    # ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
    def finalize_row_pair(self) -> List[Rect]:
        right = self.right
        starts = {1}
        starts.update(col + 1 for col in self.columns.items if 1 <= col < right)
        allowed = self.bottom_top_intervals()
        markers = []
        for j0 in sorted(starts):
            if j0 in allowed:
                rect = Rect(self.i0, self.i1, j0, right)
                self.phi[j0].end(rect)
                markers.append(rect)
        return markers

    def sequences(self) -> List[PhiSequence]:
        return [self.phi[j0] for j0 in sorted(self.phi) if self.phi[j0].has_markers()]


def sweep_row_pair(image: Image, i0: int, i1: int,
                   fingerprints: List[List[int]]) -> List[PhiSequence]:
    state = RowPairState(image, i0, i1)
    for f in fingerprints:
        state.step(f)
    state.finalize_row_pair()
    return state.sequences()


def _sweep_bottom_row(task: Tuple[Image, int, str]) -> List[PhiSequence]:
    image, i0, variant = task
    columns = ColumnFingerprints(image, variant)
    out: List[PhiSequence] = []
    for i1 in range(i0, image.m + 1):
        found = sweep_row_pair(image, i0, i1, columns.fingerprints(i0, i1))
        logger.debug(f"Row pair ({i0},{i1}): {sum(len(s.markers()) for s in found)} locations")
        out.extend(found)
    return out


def _record_bottom_row(task: Tuple[Image, int, str]) -> LocationRecords:
    image, i0, variant = task
    columns = ColumnFingerprints(image, variant)
    parts = []
    for i1 in range(i0, image.m + 1):
        # φ of one row pair lives only until it is replayed
        found = sweep_row_pair(image, i0, i1, columns.fingerprints(i0, i1))
        parts.append(LocationRecords.from_sequences(found))
    return LocationRecords.merge(parts)


def _map_bottom_rows(sweep: Callable, image: Image, variant: str, workers: int) -> list:
    if variant not in VARIANTS:
        raise ValueError(f"Unknown fingerprint variant {variant!r}")
    if workers <= 0:
        workers = multiprocessing.cpu_count()
    tasks = [(image, i0, variant) for i0 in range(1, image.m + 1)]

    if workers == 1 or len(tasks) == 1:
        return [sweep(task) for task in tasks]
    with multiprocessing.Pool(min(workers, len(tasks))) as pool:
        return pool.map(sweep, tasks)


def enumerate_maximal_rectangles(image: Image, variant: str = 'column-index',
                                 workers: int = 1) -> List[PhiSequence]:
    """
    All non-empty φ(i0,i1;j0) sequences in (i0, i1, j0) order.

    Row pairs sharing i0 run in one task; with workers > 1 the tasks are
    spread over a process pool and merged back in i0 order.
    """
    parts = _map_bottom_rows(_sweep_bottom_row, image, variant, workers)
    sequences = [seq for part in parts for seq in part]
    logger.info(f"Swept {image.m * (image.m + 1) // 2} row pairs into {len(sequences)} sequences")
    return sequences


def enumerate_location_records(image: Image, variant: str = 'column-index',
                               workers: int = 1) -> LocationRecords:
    """Maximal locations in the order of enumerate_maximal_rectangles, as records"""
    records = LocationRecords.merge(_map_bottom_rows(_record_bottom_row, image, variant, workers))
    logger.info(f"Swept {image.m * (image.m + 1) // 2} row pairs into {len(records)} locations")
    return records


def maximal_location_records(image: Image, variant: str = 'column-index',
                             workers: int = 1) -> Tuple[LocationRecords, bool]:
    """Records of the image or, when taller than wide, of its transpose"""
    if image.m > image.n:
        logger.info(f"Image is {image.m}x{image.n}: sweeping the transpose")
        return enumerate_location_records(image.transpose(), variant, workers), True
    return enumerate_location_records(image, variant, workers), False


def maximal_locations(image: Image, variant: str = 'column-index',
                      workers: int = 1) -> List[Tuple[Rect, Fingerprint]]:
    """
    Every maximal location with its fingerprint.

    Images taller than wide are swept transposed; rectangles come back in
    the caller's orientation.
    """
    records, transposed = maximal_location_records(image, variant, workers)
    if transposed:
        records = records.transpose()
    return list(records.locations())
