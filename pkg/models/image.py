"""
Image core — color matrix, coordinates and naive fingerprints

Coordinates follow the usual layout of the worked examples:
  • row 1 is the BOTTOM row, rows grow upwards
  • column 1 is the leftmost column
  • Rect ⟨i0,i1;j0,j1⟩ and Square [i,j;k] are closed ranges
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

import numpy as np

from models.errors import GeometryError, ImageFormatError

logger = logging.getLogger(__name__)

LETTERS = 'abcdefghijklmnopqrstuvwxyz'
MAX_COLOR = 2 ** 63 - 1


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Geometry
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
@dataclass(frozen=True, order=True)
class Rect:
    """Closed rectangle ⟨i0,i1;j0,j1⟩ (rows i0..i1, columns j0..j1)"""
    i0: int
    i1: int
    j0: int
    j1: int

    def __post_init__(self):
        if not (1 <= self.i0 <= self.i1 and 1 <= self.j0 <= self.j1):
            raise GeometryError(f"Invalid rectangle {self.as_tuple()}")

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.i0, self.i1, self.j0, self.j1)

    @property
    def height(self) -> int:
        return self.i1 - self.i0 + 1

    @property
    def width(self) -> int:
        return self.j1 - self.j0 + 1

    def transpose(self) -> 'Rect':
        return Rect(self.j0, self.j1, self.i0, self.i1)

    def is_square(self) -> bool:
        return self.height == self.width


@dataclass(frozen=True, order=True)
class Square:
    """Square [i,j;k] with bottom-left corner (i,j) and side k"""
    i: int
    j: int
    k: int

    def __post_init__(self):
        if self.i < 1 or self.j < 1 or self.k < 1:
            raise GeometryError(f"Invalid square {(self.i, self.j, self.k)}")

    def to_rect(self) -> Rect:
        return Rect(self.i, self.i + self.k - 1, self.j, self.j + self.k - 1)

    @classmethod
    def from_rect(cls, rect: Rect) -> 'Square':
        if not rect.is_square():
            raise GeometryError(f"Rectangle {rect.as_tuple()} is not a square")
        return cls(rect.i0, rect.j0, rect.height)

    def transpose(self) -> 'Square':
        return Square(self.j, self.i, self.k)


@dataclass(frozen=True, order=True)
class Fingerprint:
    """Set of distinct colors of a region, kept in increasing order"""
    colors: Tuple[int, ...]

    @classmethod
    def of(cls, colors: Iterable[int]) -> 'Fingerprint':
        return cls(tuple(sorted(set(int(c) for c in colors))))

    def __iter__(self) -> Iterator[int]:
        return iter(self.colors)

    def __len__(self) -> int:
        return len(self.colors)

    def __contains__(self, color: object) -> bool:
        return color in self.colors


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Image
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
@dataclass(frozen=True, eq=False)
class Image:
    """Immutable m×n color matrix; cells[0] holds row 1 (the bottom row)."""
    sigma: int
    cells: np.ndarray = field(repr=False)

    def __post_init__(self):
        cells = np.ascontiguousarray(self.cells, dtype=np.int64)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise ImageFormatError(f"Image needs at least one cell, got shape {cells.shape}")
        if self.sigma < 1:
            raise ImageFormatError(f"Alphabet size must be positive, got {self.sigma}")
        low, high = int(cells.min()), int(cells.max())
        if low < 1 or high > self.sigma:
            bad = low if low < 1 else high
            raise ImageFormatError(f"color out of range: {bad} not in [1, {self.sigma}]")
        cells.setflags(write=False)
        object.__setattr__(self, 'cells', cells)

    @property
    def m(self) -> int:
        return self.cells.shape[0]

    @property
    def n(self) -> int:
        return self.cells.shape[1]

    def cell(self, i: int, j: int) -> int:
        return int(self.cells[i - 1, j - 1])

    def row(self, i: int) -> List[int]:
        """Row i as a left-to-right color sequence"""
        return self.cells[i - 1].tolist()

    def column(self, j: int) -> List[int]:
        """Column j as a bottom-up color sequence"""
        return self.cells[:, j - 1].tolist()

    def region(self, rect: Rect) -> np.ndarray:
        self.check(rect)
        return self.cells[rect.i0 - 1:rect.i1, rect.j0 - 1:rect.j1]

    def check(self, rect: Rect):
        if rect.i1 > self.m or rect.j1 > self.n:
            raise GeometryError(
                f"Rectangle {rect.as_tuple()} outside {self.m}x{self.n} image")

    def transpose(self) -> 'Image':
        return Image(self.sigma, self.cells.T.copy())


@dataclass(frozen=True)
class ColorRemap:
    """Original color ↔ dense color in [1, σ']"""
    forward: Dict[int, int]
    backward: Tuple[int, ...]

    @property
    def sigma(self) -> int:
        return len(self.backward)

    def to_dense(self, colors: Iterable[int]) -> Optional[List[int]]:
        """Dense colors, or None if some color never occurs in the image"""
        dense = []
        for color in colors:
            mapped = self.forward.get(int(color))
            if mapped is None:
                return None
            dense.append(mapped)
        return dense

    def to_original(self, colors: Iterable[int]) -> List[int]:
        return sorted(self.backward[c - 1] for c in colors)

    @classmethod
    def identity(cls, sigma: int) -> 'ColorRemap':
        return cls({c: c for c in range(1, sigma + 1)}, tuple(range(1, sigma + 1)))


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Operations
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
def parse_color(token: str) -> int:
    """Decimal color or a single letter a–z (a → 1)"""
    token = token.strip()
    if len(token) == 1 and token.lower() in LETTERS:
        return LETTERS.index(token.lower()) + 1
    try:
        return int(token)
    except ValueError:
        raise ImageFormatError(f"Bad color token {token!r}") from None


def parse_colors(text: str) -> List[int]:
    """Comma-separated color list, e.g. 'e,f,i' or '2,7,9'"""
    tokens = [t for t in text.split(',') if t.strip()]
    if not tokens:
        raise ImageFormatError("Empty color list")
    return [parse_color(t) for t in tokens]


def load_image(raw: Union[bytes, str]) -> Image:
    """
    Parse the text grid format.

    Line 1 is `m n sigma`; then m lines of n tokens, listed top row first.
    Lines starting with '#' and blank lines are ignored.
    """
    if isinstance(raw, bytes):
        try:
            text = raw.decode('utf-8')
        except UnicodeDecodeError as e:
            raise ImageFormatError(f"Image text is not UTF-8: {e.reason} at byte {e.start}") from None
    else:
        text = raw
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith('#')]
    if not lines:
        raise ImageFormatError("Missing header line 'm n sigma'")

    header = lines[0].split()
    if len(header) != 3:
        raise ImageFormatError(f"Malformed header {lines[0]!r}, expected 'm n sigma'")
    try:
        m, n, sigma = (int(tok) for tok in header)
    except ValueError:
        raise ImageFormatError(f"Malformed header {lines[0]!r}") from None
    if m < 1 or n < 1 or sigma < 1:
        raise ImageFormatError(f"Header values must be positive: {lines[0]!r}")
    if sigma > MAX_COLOR:
        raise ImageFormatError(f"Alphabet size {sigma} exceeds the largest color {MAX_COLOR}")

    rows = lines[1:]
    if len(rows) != m:
        raise ImageFormatError(f"Expected {m} rows, found {len(rows)}")

    grid = []
    for number, line in enumerate(rows, start=1):
        tokens = line.replace(',', ' ').split()
        if len(tokens) != n:
            raise ImageFormatError(
                f"Ragged row {number}: expected {n} colors, found {len(tokens)}")
        values = [parse_color(t) for t in tokens]
        for value in values:
            if not 1 <= value <= sigma:
                raise ImageFormatError(
                    f"color out of range: {value} not in [1, {sigma}] (row {number})")
        grid.append(values)

    # last data line is row 1
    cells = np.array(grid[::-1], dtype=np.int64)
    image = Image(sigma, cells)
    logger.debug(f"Loaded {m}x{n} image over sigma={sigma}")
    return image


def remap_colors(image: Image) -> Tuple[Image, ColorRemap]:
    """
    Map present colors onto [1, σ'].

    An image whose colors are already exactly 1..σ' keeps them; otherwise
    colors are numbered in first-seen order (row 1 left to right, upwards).
    """
    flat = image.cells.ravel()
    present, first_index = np.unique(flat, return_index=True)
    dense_sigma = len(present)

    if present[0] == 1 and present[-1] == dense_sigma:
        remap = ColorRemap.identity(dense_sigma)
        return Image(dense_sigma, image.cells), remap

    # rank of each present color by first occurrence, 1-based
    rank = np.empty(dense_sigma, dtype=np.int64)
    by_first = np.argsort(first_index, kind='stable')
    rank[by_first] = np.arange(1, dense_sigma + 1)
    dense = rank[np.searchsorted(present, image.cells)]
    order = present[by_first]
    forward = {int(c): int(r) for c, r in zip(present, rank)}
    remap = ColorRemap(forward, tuple(int(c) for c in order))
    logger.debug(f"Remapped {image.sigma} declared colors onto {dense_sigma}")
    return Image(dense_sigma, dense), remap


def fingerprint_of(image: Image, rect: Rect) -> Fingerprint:
    """Distinct colors of `rect` by direct scan"""
    return Fingerprint(tuple(np.unique(image.region(rect)).tolist()))
