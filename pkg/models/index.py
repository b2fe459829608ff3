"""
Fingerprint index

Signature-keyed table of distinct fingerprints. A query hashes the
requested colors, looks the signature up, then confirms the hit by listing the
distinct colors of the entry's representative rectangle.
"""

import logging
import struct
import threading
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

import numpy as np

from models.errors import IndexFormatError, SignatureCollisionError
from models.image import ColorRemap, Image, Rect
from models.naming import SignatureScheme
from models.sequences import DistinctColorIndex1D

logger = logging.getLogger(__name__)

MAGIC = b'FPIX'
VERSION = 2

_HEADER = struct.Struct('<4sHBIIIQQI')
_ENTRY = struct.Struct('<QH4II')
_RECT = struct.Struct('<4I')
_CRC = struct.Struct('<I')

FLAG_SQUARE = 0x01
FLAG_DET = 0x02
FLAG_REPORT = 0x04
FLAG_TRANSPOSED = 0x08
FLAG_PARALLEL_ROWS = 0x10


@dataclass
class Entry:
    size: int
    representative: Rect
    locations: List[Rect] = field(default_factory=list)


@dataclass
class IndexMeta:
    mode: str = 'rect'
    naming: str = 'mc'
    variant: str = 'column-index'
    report: bool = False
    transposed: bool = False
    location_count: int = 0

    @property
    def flags(self) -> int:
        flags = 0
        if self.mode == 'square':
            flags |= FLAG_SQUARE
        if self.naming == 'det':
            flags |= FLAG_DET
        if self.report:
            flags |= FLAG_REPORT
        if self.transposed:
            flags |= FLAG_TRANSPOSED
        if self.variant == 'parallel-rows':
            flags |= FLAG_PARALLEL_ROWS
        return flags

    @classmethod
    def from_flags(cls, flags: int, location_count: int) -> 'IndexMeta':
        return cls(
            mode='square' if flags & FLAG_SQUARE else 'rect',
            naming='det' if flags & FLAG_DET else 'mc',
            variant='parallel-rows' if flags & FLAG_PARALLEL_ROWS else 'column-index',
            report=bool(flags & FLAG_REPORT),
            transposed=bool(flags & FLAG_TRANSPOSED),
            location_count=location_count,
        )


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Verifier
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class VerifierGrid:
    """Distinct colors of a rectangle from one 1D reporter per image row."""

    def __init__(self, image: Image):
        self.image = image
        self.rows = [DistinctColorIndex1D(image.row(i)) for i in range(1, image.m + 1)]

    def distinct_colors_in_rect(self, rect: Rect, limit: int) -> List[int]:
        """
        Each distinct color once; stops as soon as limit+1 colors are
        known, so an overflowing answer has exactly limit+1 entries.
        """
        self.image.check(rect)
        if limit < 1:
            raise ValueError(f"limit must be positive, got {limit}")
        seen: Set[int] = set()
        found: List[int] = []
        for i in range(rect.i0, rect.i1 + 1):
            for color in self.rows[i - 1].colors(rect.j0, rect.j1):
                if color not in seen:
                    seen.add(color)
                    found.append(color)
                    if len(found) > limit:
                        return found
        return found


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Index
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class FingerprintIndex:
    """
    Immutable after build. `image` is the remapped image in the caller's
    orientation; rectangles are stored in that orientation too.

    Queries share everything except the σ-byte scratch vector, which is
    kept per thread.
    """

    def __init__(self, image: Image, remap: ColorRemap, scheme: SignatureScheme,
                 entries: Dict[int, Entry], meta: Optional[IndexMeta] = None):
        self.image = image
        self.remap = remap
        self.scheme = scheme
        self.entries = entries
        self.meta = meta or IndexMeta()
        self.grid = VerifierGrid(image)
        self._local = threading.local()

    @property
    def sigma(self) -> int:
        return self.image.sigma

    def __len__(self) -> int:
        return len(self.entries)

    def _scratch(self) -> bytearray:
        scratch = getattr(self._local, 'scratch', None)
        if scratch is None:
            scratch = self._local.scratch = bytearray(self.sigma + 1)
        return scratch

    def scratch_checksum(self) -> int:
        """Sum of the calling thread's scratch bytes; 0 between queries"""
        return sum(self._scratch())

    # ── Queries ───────────────────────────────────────────────
    def _lookup(self, colors: Iterable[int]) -> Optional[Entry]:
        dense = self.remap.to_dense(colors)
        if not dense:
            return None
        f = sorted(set(dense))
        entry = self.entries.get(self.scheme.signature_of(f))
        if entry is None or entry.size != len(f):
            return None

        reported = self.grid.distinct_colors_in_rect(entry.representative, limit=len(f))
        if len(reported) != len(f):
            return None

        scratch = self._scratch()
        for color in f:
            scratch[color] = 1
        matched = sum(scratch[color] for color in reported)
        for color in f:
            scratch[color] = 0
        return entry if matched == len(f) else None

    def query_exists(self, colors: Iterable[int]) -> bool:
        """True iff the colors (original alphabet) form a fingerprint of the image"""
        return self._lookup(colors) is not None

    def query_report(self, colors: Iterable[int]) -> List[Rect]:
        """Every maximal location of the fingerprint; [] when absent"""
        if not self.meta.report:
            raise ValueError("Index was built without --report; locations are not stored")
        entry = self._lookup(colors)
        return list(entry.locations) if entry is not None else []

    def fingerprints(self) -> List[List[int]]:
        """Every stored fingerprint in the original alphabet"""
        out = []
        for entry in self.entries.values():
            dense = self.grid.distinct_colors_in_rect(entry.representative, limit=entry.size)
            out.append(self.remap.to_original(dense))
        return sorted(out)

    def stats(self) -> Dict[str, object]:
        return {
            'mode': self.meta.mode,
            'naming': self.meta.naming,
            'variant': self.meta.variant,
            'report': self.meta.report,
            'seed': self.scheme.r,
            'sigma': self.sigma,
            'm': self.image.m,
            'n': self.image.n,
            'fingerprints': len(self.entries),
            'locations': self.meta.location_count,
        }


def build_index(locations: Iterable[Tuple[Rect, int, int]], image: Image, remap: ColorRemap,
                scheme: SignatureScheme, meta: Optional[IndexMeta] = None) -> FingerprintIndex:
    """
    Index from (rect, signature, |f|) triples.

    The representative of a fingerprint is its smallest rectangle in
    (i0, i1, j0, j1) order.
    """
    meta = meta or IndexMeta()
    entries: Dict[int, Entry] = {}
    count = 0
    for rect, signature, size in locations:
        count += 1
        entry = entries.get(signature)
        if entry is None:
            entry = entries[signature] = Entry(size, rect)
        elif entry.size != size:
            raise SignatureCollisionError(
                f"Signature {signature:#x} shared by fingerprints of sizes {entry.size} and {size}")
        elif rect < entry.representative:
            entry.representative = rect
        if meta.report:
            entry.locations.append(rect)

    for entry in entries.values():
        entry.locations.sort()
    meta.location_count = count
    logger.info(f"Indexed {count} locations under {len(entries)} fingerprints")
    return FingerprintIndex(image, remap, scheme, entries, meta)


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Persistence
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
def dump_index(index: FingerprintIndex) -> bytes:
    meta = index.meta
    image = index.image
    parts = [_HEADER.pack(MAGIC, VERSION, meta.flags, index.sigma, image.m, image.n,
                          index.scheme.r, meta.location_count, len(index.entries))]
    for signature in sorted(index.entries):
        entry = index.entries[signature]
        if entry.size > 0xFFFF:
            raise IndexFormatError(f"Fingerprint of {entry.size} colors does not fit the entry format")
        parts.append(_ENTRY.pack(signature, entry.size, *entry.representative.as_tuple(),
                                 len(entry.locations)))
        parts.extend(_RECT.pack(*rect.as_tuple()) for rect in entry.locations)
    parts.append(np.asarray(index.remap.backward, dtype='<u8').tobytes())
    parts.append(image.cells.astype('<u4').tobytes())
    body = b''.join(parts)
    return body + _CRC.pack(zlib.crc32(body))


def parse_index(raw: bytes) -> FingerprintIndex:
    if len(raw) < _HEADER.size + _CRC.size:
        raise IndexFormatError(f"Index truncated: {len(raw)} bytes")
    body, (crc,) = raw[:-_CRC.size], _CRC.unpack(raw[-_CRC.size:])
    if raw[:4] != MAGIC:
        raise IndexFormatError(f"Bad magic {raw[:4]!r}")
    if zlib.crc32(body) != crc:
        raise IndexFormatError("Index checksum mismatch")

    try:
        magic, version, flags, sigma, m, n, r, location_count, count = _HEADER.unpack_from(body, 0)
        if version != VERSION:
            raise IndexFormatError(f"Unsupported index version {version}")
        offset = _HEADER.size
        entries: Dict[int, Entry] = {}
        for _ in range(count):
            signature, size, i0, i1, j0, j1, k = _ENTRY.unpack_from(body, offset)
            offset += _ENTRY.size
            rects = [Rect(*_RECT.unpack_from(body, offset + t * _RECT.size)) for t in range(k)]
            offset += k * _RECT.size
            entries[signature] = Entry(size, Rect(i0, i1, j0, j1), rects)

        backward = np.frombuffer(body, dtype='<u8', count=sigma, offset=offset)
        offset += 8 * sigma
        cells = np.frombuffer(body, dtype='<u4', count=m * n, offset=offset)
        offset += 4 * m * n
    except (struct.error, ValueError) as e:
        raise IndexFormatError(f"Index truncated or malformed: {e}") from e
    if offset != len(body):
        raise IndexFormatError(f"{len(body) - offset} trailing bytes in index")

    original = [int(c) for c in backward]
    remap = ColorRemap({c: d for d, c in enumerate(original, start=1)}, tuple(original))
    image = Image(sigma, cells.astype(np.int64).reshape(m, n))
    meta = IndexMeta.from_flags(flags, location_count)
    return FingerprintIndex(image, remap, SignatureScheme(r, sigma), entries, meta)


def save_index(index: FingerprintIndex, path: Union[str, Path]) -> int:
    raw = dump_index(index)
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(raw)
    logger.info(f"Wrote {len(raw)} bytes to {target}")
    return len(raw)


def load_index(path: Union[str, Path]) -> FingerprintIndex:
    source = Path(path)
    if not str(path):
        raise FileNotFoundError("Empty index path")
    index = parse_index(source.read_bytes())
    logger.info(f"Loaded index with {len(index)} fingerprints from {source}")
    return index
