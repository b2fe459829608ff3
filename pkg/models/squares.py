"""
Maximal square enumeration — diagonal sweep

For a corner (x, y) the cells (x', y') ≤ (x, y) split into three parts by
their Chebyshev distance max(x−x', y−y') to the corner:

  SCT / PCT  column-dominated triangle (y−y' > x−x')
  SLT / PLT  row-dominated triangle    (x−x' > y−y')
  SLD / PLD  the diagonal through the corner

A color is listed in a part when its nearest occurrence lies there, so
K_c, the largest square with top-right corner (x, y) avoiding c, is a
constant-time minimum over the three pointer tables.

The sweep visits (i, j) column by column with rows ascending, which moves
every diagonal one step per column and keeps SLL⟨i;j−1⟩ for every row and
SLL^T⟨j;i−1⟩ for the current column at hand.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from models.events import Event, EventSequence
from models.image import Fingerprint, Image, Square
from models.intervals import IntervalSet
from models.sequences import SequenceOfLastColors

logger = logging.getLogger(__name__)

_FAR = np.iinfo(np.int64).max // 4


@dataclass
class HatPhiSequence(EventSequence):
    """φ̂(i;j): colors by growing size of squares anchored at (i, j)"""
    i: int
    j: int
    events: List[Event] = field(default_factory=list)

    def squares(self) -> List[Tuple[Square, Fingerprint]]:
        return [(Square.from_rect(rect), fp) for rect, fp in self.locations()]


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Corner structures
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class CornerState:
    """
    SCT/PCT, SLT/PLT, SLD/PLD and K for one corner (x, y).

    pct[c] — column of c's nearest occurrence in the column triangle
    plt[c] — row of c's nearest occurrence in the row triangle
    pld[c] — row of c's nearest occurrence on the diagonal
    (0 = not listed there)
    """

    __slots__ = ('x', 'y', 'sigma', 'pct', 'plt', 'pld', 'K')

    def __init__(self, x: int, y: int, sigma: int,
                 pct: np.ndarray, plt: np.ndarray, pld: np.ndarray, K: np.ndarray):
        self.x = x
        self.y = y
        self.sigma = sigma
        self.pct = pct
        self.plt = plt
        self.pld = pld
        self.K = K

    @classmethod
    def outside(cls, x: int, y: int, sigma: int) -> 'CornerState':
        """Corner on row 0 or column 0: nothing below-left, every K is 0"""
        zeros = np.zeros(sigma + 1, dtype=np.int64)
        return cls(x, y, sigma, zeros, zeros, zeros, zeros)

    def update_square_structures(self, color: int, row_last: np.ndarray,
                                 column_last: np.ndarray) -> 'CornerState':
        """
        Structures for (x+1, y+1) given its color, the SLL locator of row
        x+1 through column y and the SLL^T locator of column y+1 through row x.
        """
        x, y = self.x + 1, self.y + 1
        upper = np.maximum(self.pct, row_last)
        lower = np.maximum(self.plt, column_last)
        diag = self.pld.copy()
        diag[color] = x

        d_upper = np.where(upper > 0, y - upper, _FAR)
        d_lower = np.where(lower > 0, x - lower, _FAR)
        d_diag = np.where(diag > 0, x - diag, _FAR)
        nearest = np.minimum(np.minimum(d_upper, d_lower), d_diag)

        pct = np.where((upper > 0) & (d_upper == nearest), upper, 0)
        plt = np.where((lower > 0) & (d_lower == nearest), lower, 0)
        pld = np.where((diag > 0) & (d_diag == nearest), diag, 0)
        K = np.minimum(nearest, min(x, y))
        K[0] = 0
        return CornerState(x, y, self.sigma, pct, plt, pld, K)

    def compute_K(self, color: int) -> int:
        return int(self.K[color])

    # ── Views in queue form ───────────────────────────────────
    def sct(self) -> List[Tuple[int, int]]:
        return sorted(Counter(int(c) for c in self.pct[self.pct > 0]).items())

    def slt(self) -> List[Tuple[int, int]]:
        return sorted(Counter(int(r) for r in self.plt[self.plt > 0]).items())

    def sld(self) -> List[Tuple[int, int]]:
        return sorted(((int(c), int(self.pld[c])) for c in np.nonzero(self.pld)[0]),
                      key=lambda item: item[1])

    def pct_items(self) -> Dict[int, Tuple[int, int]]:
        counts = dict(self.sct())
        return {int(c): (int(self.pct[c]), counts[int(self.pct[c])])
                for c in np.nonzero(self.pct)[0]}

    def plt_items(self) -> Dict[int, Tuple[int, int]]:
        counts = dict(self.slt())
        return {int(c): (int(self.plt[c]), counts[int(self.plt[c])])
                for c in np.nonzero(self.plt)[0]}

    def pld_items(self) -> Dict[int, Tuple[int, int]]:
        return {color: (color, row) for color, row in self.sld()}


def corner_state(image: Image, x: int, y: int) -> CornerState:
    """Structures for one corner, built by walking its diagonal from the border."""
    steps = min(x, y)
    state = CornerState.outside(x - steps, y - steps, image.sigma)
    for t in range(steps - 1, -1, -1):
        i, j = x - t, y - t
        row_last = SequenceOfLastColors.of(image.row(i)[:j - 1], image.sigma).locator
        column_last = SequenceOfLastColors.of(image.column(j)[:i - 1], image.sigma).locator
        state = state.update_square_structures(image.cell(i, j), row_last, column_last)
    return state


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Characteristic sets
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
@dataclass
class ChiSets:
    """
    Sizes k of squares with top-right corner (x, y) for which each
    condition holds. A side or corner outside the image counts as true.
    """
    l: IntervalSet
    r: IntervalSet
    u: IntervalSet
    d: IntervalSet
    lu: IntervalSet
    ld: IntervalSet
    ru: IntervalSet
    rd: IntervalSet
    maximal: IntervalSet

    @classmethod
    def build(cls, state: CornerState, top: Optional[SequenceOfLastColors],
              right: Optional[SequenceOfLastColors],
              corner_color: Optional[int]) -> 'ChiSets':
        """
        `top` is SLL⟨x+1;y⟩ (None above the image), `right` is SLL^T⟨y+1;x⟩
        (None right of the image), `corner_color` is a_{x+1,y+1} if it exists.
        """
        x, y, K = state.x, state.y, state.K
        kmax = min(x, y)
        everything = IntervalSet.span(1, kmax)

        chi_l = IntervalSet.points(y - int(c) for c in state.pct[state.pct > 0]) \
            | IntervalSet.span(y, kmax)
        chi_d = IntervalSet.points(x - int(r) for r in state.plt[state.plt > 0]) \
            | IntervalSet.span(x, kmax)
        chi_ld = IntervalSet.points(x - int(r) for r in state.pld[(state.pld > 0) & (state.pld < x)]) \
            | IntervalSet.span(kmax, kmax)

        if top is None:
            chi_u = chi_lu = everything
        else:
            pairs = top.items()
            chi_u = IntervalSet((y + 1 - p, int(K[c])) for c, p in pairs)
            chi_lu = IntervalSet.points(
                y - p for c, p in pairs if p < y and K[c] >= y - p) - chi_u
            chi_lu = chi_lu | IntervalSet.span(y, kmax)

        if right is None:
            chi_r = chi_rd = everything
        else:
            pairs = right.items()
            chi_r = IntervalSet((x + 1 - q, int(K[c])) for c, q in pairs)
            chi_rd = IntervalSet.points(
                x - q for c, q in pairs if q < x and K[c] >= x - q) - chi_r
            chi_rd = chi_rd | IntervalSet.span(x, kmax)

        if top is None or right is None or corner_color is None:
            chi_ru = everything
        else:
            chi_ru = IntervalSet.span(1, int(K[corner_color]))

        maximal = ((chi_l | chi_u | chi_lu) & (chi_l | chi_d | chi_ld)
                   & (chi_r | chi_u | chi_ru) & (chi_r | chi_d | chi_rd) & everything)
        return cls(chi_l, chi_r, chi_u, chi_d, chi_lu, chi_ld, chi_ru, chi_rd, maximal)


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Sweep
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class SquareSweep:
    """Parallel-diagonals sweep over the frame 1..m+1 × 1..n+1."""

    def __init__(self, image: Image):
        self.image = image
        self.sigma = image.sigma
        self.rows = [SequenceOfLastColors(image.sigma) for _ in range(image.m)]
        self.diagonals: Dict[int, CornerState] = {}
        self.phi: Dict[Tuple[int, int], HatPhiSequence] = {}

    def _sequence(self, i: int, j: int) -> HatPhiSequence:
        seq = self.phi.get((i, j))
        if seq is None:
            seq = self.phi[(i, j)] = HatPhiSequence(i, j)
        return seq

    def stage1_squares(self, state: CornerState, top: Optional[SequenceOfLastColors],
                       right: Optional[SequenceOfLastColors],
                       corner_color: Optional[int]) -> List[Square]:
        """End markers for every maximal square with top-right corner (x, y)."""
        chi = ChiSets.build(state, top, right, corner_color)
        found = []
        for k in chi.maximal:
            square = Square(state.x - k + 1, state.y - k + 1, k)
            self.phi[(square.i, square.j)].end(square.to_rect())
            found.append(square)
        return found

    def stage2_squares(self, before: CornerState, after: CornerState) -> List[Tuple[Square, int]]:
        """
        Colors entering squares at size k+1 whose top-right corner is the
        new cell: appended to φ̂(i−k; j−k) for K̂_c ≤ k ≤ K_c.
        """
        i, j = after.x, after.y
        additions = []
        entering = np.nonzero(after.K <= before.K)[0]
        for color in entering[entering > 0].tolist():
            for k in range(int(after.K[color]), int(before.K[color]) + 1):
                self._sequence(i - k, j - k).add_color(color)
                additions.append((Square(i - k, j - k, k + 1), color))
        return additions

    def run(self) -> List[HatPhiSequence]:
        image = self.image
        m, n = image.m, image.n
        for j in range(1, n + 2):
            column = SequenceOfLastColors(self.sigma) if j <= n else None
            for i in range(1, m + 2):
                inside = i <= m and j <= n
                r = i - j
                before = self.diagonals.get(r) if i > 1 and j > 1 else None
                if before is not None:
                    assert (before.x, before.y) == (i - 1, j - 1)
                    self.stage1_squares(
                        before,
                        self.rows[i - 1] if i <= m else None,
                        column,
                        image.cell(i, j) if inside else None)
                if not inside:
                    continue

                color = image.cell(i, j)
                base = before or CornerState.outside(i - 1, j - 1, self.sigma)
                after = base.update_square_structures(color, self.rows[i - 1].locator, column.locator)
                self.stage2_squares(base, after)
                self.diagonals[r] = after
                self.rows[i - 1].extend(color)
                column.extend(color)

        sequences = [self.phi[key] for key in sorted(self.phi) if self.phi[key].has_markers()]
        logger.info(f"Square sweep over {m}x{n} image: {len(sequences)} anchored sequences")
        return sequences


def enumerate_maximal_squares(image: Image) -> List[HatPhiSequence]:
    return SquareSweep(image).run()


def maximal_squares(image: Image) -> List[Tuple[Square, Fingerprint]]:
    return [item for seq in enumerate_maximal_squares(image) for item in seq.squares()]
