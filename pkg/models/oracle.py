"""
Brute-force ground truth

Slow, direct definitions used to check every fast path. All functions
refuse images above the configured size guard.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Set, Tuple

from config.settings import Config
from models.errors import SizeGuardError
from models.image import Fingerprint, Image, Rect, Square, fingerprint_of

logger = logging.getLogger(__name__)


@dataclass
class OracleReport:
    locations: Set[Tuple[Rect, Fingerprint]] = field(default_factory=set)
    squares: Set[Tuple[Square, Fingerprint]] = field(default_factory=set)

    @property
    def fingerprints(self) -> Set[Fingerprint]:
        return {fp for _, fp in self.locations} | {fp for _, fp in self.squares}


@dataclass
class ReportDiff:
    oracle_only: List[Tuple[object, Fingerprint]] = field(default_factory=list)
    fast_only: List[Tuple[object, Fingerprint]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.oracle_only or self.fast_only)

    def lines(self) -> List[str]:
        out = []
        for region, fp in self.oracle_only:
            out.append(f"oracle-only\t{region}\t{list(fp)}")
        for region, fp in self.fast_only:
            out.append(f"fast-only\t{region}\t{list(fp)}")
        return out


def _guard(image: Image, limit: Optional[int]):
    limit = Config.SIZE_GUARD if limit is None else limit
    if image.m * image.n > limit:
        raise SizeGuardError(
            f"Image {image.m}x{image.n} exceeds oracle size guard of {limit} cells")


def _fingerprints(image: Image) -> Dict[Rect, Fingerprint]:
    """Fingerprint of every rectangle, each row range grown column by column"""
    table: Dict[Rect, Fingerprint] = {}
    for i0 in range(1, image.m + 1):
        for i1 in range(i0, image.m + 1):
            for j0 in range(1, image.n + 1):
                seen: Set[int] = set()
                for j1 in range(j0, image.n + 1):
                    seen.update(image.cells[i0 - 1:i1, j1 - 1].tolist())
                    table[Rect(i0, i1, j0, j1)] = Fingerprint(tuple(sorted(seen)))
    return table


def brute_force_locations(image: Image, guard: Optional[int] = None) -> Set[Tuple[Rect, Fingerprint]]:
    """
    Rectangles whose four one-step extensions each leave the image or
    change the fingerprint.
    """
    _guard(image, guard)
    table = _fingerprints(image)
    found = set()
    for rect, fp in table.items():
        grown = []
        if rect.j0 > 1:
            grown.append(Rect(rect.i0, rect.i1, rect.j0 - 1, rect.j1))
        if rect.j1 < image.n:
            grown.append(Rect(rect.i0, rect.i1, rect.j0, rect.j1 + 1))
        if rect.i0 > 1:
            grown.append(Rect(rect.i0 - 1, rect.i1, rect.j0, rect.j1))
        if rect.i1 < image.m:
            grown.append(Rect(rect.i0, rect.i1 + 1, rect.j0, rect.j1))
        if all(table[g] != fp for g in grown):
            found.add((rect, fp))
    return found


def brute_force_fingerprints(image: Image, guard: Optional[int] = None) -> Set[Fingerprint]:
    return {fp for _, fp in brute_force_locations(image, guard)}


def _square_fp(image: Image, square: Square) -> Fingerprint:
    return fingerprint_of(image, square.to_rect())


def _fits(image: Image, i: int, j: int, k: int) -> bool:
    return i >= 1 and j >= 1 and i + k - 1 <= image.m and j + k - 1 <= image.n


def brute_force_squares(image: Image, guard: Optional[int] = None) -> Set[Tuple[Square, Fingerprint]]:
    """
    Squares not included in any larger square of the same fingerprint.

    Only the ≤ 4 squares of size k+1 around [i,j;k] are checked: a larger
    same-fingerprint container would force every intermediate container on
    the chain to share the fingerprint, one of them of size k+1.
    """
    _guard(image, guard)
    found = set()
    for k in range(1, min(image.m, image.n) + 1):
        for i in range(1, image.m - k + 2):
            for j in range(1, image.n - k + 2):
                square = Square(i, j, k)
                fp = _square_fp(image, square)
                containers = [Square(i - u, j - v, k + 1)
                              for u in (0, 1) for v in (0, 1)
                              if _fits(image, i - u, j - v, k + 1)]
                if all(_square_fp(image, c) != fp for c in containers):
                    found.add((square, fp))
    return found


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Eight-condition form of square maximality
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
def square_conditions(image: Image, square: Square) -> Dict[str, bool]:
    """
    L, R, U, D, LU, LD, RU, RD for [i,j;k] by direct fingerprint
    computation. A side or corner outside the image counts as true.
    """
    i, j, k = square.i, square.j, square.k
    m, n = image.m, image.n
    f = _square_fp(image, square)

    def region(i0: int, i1: int, j0: int, j1: int) -> Optional[Fingerprint]:
        if i0 < 1 or j0 < 1 or i1 > m or j1 > n:
            return None
        return fingerprint_of(image, Rect(i0, i1, j0, j1))

    def changes(i0: int, i1: int, j0: int, j1: int) -> bool:
        grown = region(i0, i1, j0, j1)
        return grown is None or grown != f

    def cell_outside_f(i0: int, j0: int) -> bool:
        if not (1 <= i0 <= m and 1 <= j0 <= n):
            return True
        return image.cell(i0, j0) not in f

    conditions = {
        'L': changes(i, i + k - 1, j - 1, j + k - 1),
        'R': changes(i, i + k - 1, j, j + k),
        'U': changes(i, i + k, j, j + k - 1),
        'D': changes(i - 1, i + k - 1, j, j + k - 1),
        'LD': cell_outside_f(i - 1, j - 1),
        'RU': cell_outside_f(i + k, j + k),
    }
    conditions['LU'] = cell_outside_f(i + k, j - 1) and (
        region(i, i + k, j, j + k - 1) is None or not conditions['U'])
    conditions['RD'] = cell_outside_f(i - 1, j + k) and (
        region(i, i + k - 1, j, j + k) is None or not conditions['R'])
    return conditions


def formula_maximal(conditions: Dict[str, bool]) -> bool:
    c = conditions
    return ((c['L'] or c['U'] or c['LU']) and (c['L'] or c['D'] or c['LD'])
            and (c['R'] or c['U'] or c['RU']) and (c['R'] or c['D'] or c['RD']))


def condition_disagreements(image: Image, guard: Optional[int] = None) -> List[Square]:
    """Squares where the eight-condition formula and containment disagree"""
    _guard(image, guard)
    maximal = {sq for sq, _ in brute_force_squares(image, guard)}
    disagreements = []
    for k in range(1, min(image.m, image.n) + 1):
        for i in range(1, image.m - k + 2):
            for j in range(1, image.n - k + 2):
                square = Square(i, j, k)
                if formula_maximal(square_conditions(image, square)) != (square in maximal):
                    disagreements.append(square)
    if disagreements:
        logger.warning(f"Eight-condition formula disagrees on {len(disagreements)} squares")
    return disagreements


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   compare
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
def compare(oracle: Iterable[Tuple[object, Fingerprint]],
            fast: Iterable[Tuple[object, Fingerprint]]) -> ReportDiff:
    """Symmetric difference of two (region, fingerprint) collections"""
    expected, actual = set(oracle), set(fast)
    return ReportDiff(
        oracle_only=sorted(expected - actual),
        fast_only=sorted(actual - expected),
    )


def compare_reports(oracle: OracleReport, fast: OracleReport) -> ReportDiff:
    rects = compare(oracle.locations, fast.locations)
    squares = compare(oracle.squares, fast.squares)
    return ReportDiff(rects.oracle_only + squares.oracle_only,
                      rects.fast_only + squares.fast_only)
