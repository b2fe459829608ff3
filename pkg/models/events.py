"""Color-addition / end-marker event streams shared by φ and φ̂ sequences."""

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Tuple, Union

import numpy as np

from models.image import Fingerprint, Rect


@dataclass(frozen=True)
class ColorAdd:
    color: int


@dataclass(frozen=True)
class EndMarker:
    """One maximal region whose fingerprint is the color prefix before it"""
    rect: Rect


Event = Union[ColorAdd, EndMarker]


class EventSequence:
    """Mixin for sequences that keep their events in `self.events`."""

    events: List[Event]

    def add_color(self, color: int):
        self.events.append(ColorAdd(color))

    def end(self, rect: Rect):
        self.events.append(EndMarker(rect))

    def has_markers(self) -> bool:
        return any(isinstance(e, EndMarker) for e in self.events)

    def markers(self) -> List[Rect]:
        return [e.rect for e in self.events if isinstance(e, EndMarker)]

    def colors(self) -> List[int]:
        return [e.color for e in self.events if isinstance(e, ColorAdd)]

    def batches(self) -> List[Tuple[List[int], Rect]]:
        """Colors added since the previous marker, paired with each marker"""
        out = []
        pending: List[int] = []
        for event in self.events:
            if isinstance(event, ColorAdd):
                pending.append(event.color)
            else:
                out.append((pending, event.rect))
                pending = []
        return out

    def locations(self) -> Iterator[Tuple[Rect, Fingerprint]]:
        seen: List[int] = []
        for event in self.events:
            if isinstance(event, ColorAdd):
                seen.append(event.color)
            else:
                yield event.rect, Fingerprint.of(seen)


@dataclass
class LocationRecords:
    """
    Replayed locations without their event streams.

    rows[t] = (i0, i1, j0, j1, id) where `id` indexes `fingerprints`;
    rows keep the order of the sequences they were replayed from.
    """
    rows: np.ndarray
    fingerprints: List[Fingerprint]

    @classmethod
    def from_sequences(cls, sequences: Iterable[EventSequence]) -> 'LocationRecords':
        ids: Dict[Fingerprint, int] = {}
        rows = []
        for seq in sequences:
            for rect, fp in seq.locations():
                rows.append((rect.i0, rect.i1, rect.j0, rect.j1, ids.setdefault(fp, len(ids))))
        return cls(np.array(rows, dtype=np.int64).reshape(-1, 5), list(ids))

    @classmethod
    def merge(cls, parts: Iterable['LocationRecords']) -> 'LocationRecords':
        """Concatenate in order, re-interning fingerprints"""
        ids: Dict[Fingerprint, int] = {}
        blocks = [np.empty((0, 5), dtype=np.int64)]
        for part in parts:
            if not len(part):
                continue
            local = np.array([ids.setdefault(fp, len(ids)) for fp in part.fingerprints],
                             dtype=np.int64)
            rows = part.rows.copy()
            rows[:, 4] = local[rows[:, 4]]
            blocks.append(rows)
        return cls(np.concatenate(blocks), list(ids))

    def __len__(self) -> int:
        return len(self.rows)

    def transpose(self) -> 'LocationRecords':
        return LocationRecords(self.rows[:, [2, 3, 0, 1, 4]], self.fingerprints)

    def items(self, chunk: int = 1 << 16) -> Iterator[Tuple[Rect, int]]:
        for start in range(0, len(self.rows), chunk):
            for i0, i1, j0, j1, fid in self.rows[start:start + chunk].tolist():
                yield Rect(i0, i1, j0, j1), fid

    def locations(self) -> Iterator[Tuple[Rect, Fingerprint]]:
        for rect, fid in self.items():
            yield rect, self.fingerprints[fid]
