"""
Fingerprint naming

Two ways to give every end marker a canonical name:

  det — level naming. σ̂ = σ rounded up to a power of two; B_0 holds one
        presence bit per color and B_i[p] names the pair
        (B_{i−1}[2p], B_{i−1}[2p+1]). Phases run one level at a time over
        every batch of every sequence, so each level's pairs are named in
        one sorted pass. Equal fingerprints get equal top names.
  mc  — polynomial signatures H(f) = Σ r^α mod (2^61 − 1), updated as
        colors are added; a seed is accepted once every distinct
        fingerprint got a distinct signature.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from models.errors import SignatureCollisionError
from models.events import EventSequence
from models.image import Fingerprint, Rect

logger = logging.getLogger(__name__)

MERSENNE_61 = (1 << 61) - 1

Pair = Tuple[int, int]


def next_pow2(value: int) -> int:
    return 1 if value <= 1 else 1 << (value - 1).bit_length()


def ceil_log2(value: int) -> int:
    return (max(value, 1) - 1).bit_length()


def radix_sort(values: Sequence[int], base: int = 256) -> List[int]:
    """LSD radix sort of non-negative integers"""
    out = list(values)
    if not out:
        return out
    largest = max(out)
    shift = 1
    while largest // shift:
        buckets: List[List[int]] = [[] for _ in range(base)]
        for value in out:
            buckets[(value // shift) % base].append(value)
        out = [value for bucket in buckets for value in bucket]
        shift *= base
    return out


def record_bound(t: int, height: int) -> int:
    """Most (pair, name) records a batch of t new colors can produce"""
    if t == 0:
        return 0
    return 2 * t + t * max(height - ceil_log2(t), 0)


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   NameStack — B_0 .. B_h
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class NameStack:
    """
    Halving arrays B_0 (size σ̂) .. B_h (size 1), all zero between
    sequences. Every write is remembered so a sequence can be undone.
    """

    def __init__(self, sigma_hat: int):
        self.sigma_hat = sigma_hat
        self.height = ceil_log2(sigma_hat)
        self.levels = [np.zeros(sigma_hat >> level, dtype=np.int64)
                       for level in range(self.height + 1)]
        self._touched: List[List[np.ndarray]] = [[] for _ in self.levels]

    def write(self, level: int, positions: np.ndarray, values: np.ndarray):
        self.levels[level][positions] = values
        self._touched[level].append(positions)

    def pairs(self, level: int, parents: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Children of `parents` (nodes of level+1) as two arrays"""
        row = self.levels[level]
        return row[2 * parents], row[2 * parents + 1]

    def undo(self, level: Optional[int] = None):
        targets = range(len(self.levels)) if level is None else (level,)
        for lv in targets:
            for positions in self._touched[lv]:
                self.levels[lv][positions] = 0
            self._touched[lv].clear()

    def is_clear(self) -> bool:
        return all(not row.any() for row in self.levels)


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   NameTable — pair → name, per level
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class NameTable:
    """Names issued per level, from 1 in sorted pair order; (0, 0) is 0."""

    def __init__(self, sigma_hat: int):
        self.sigma_hat = sigma_hat
        self.height = ceil_log2(sigma_hat)
        # tables[0] is unused; level 0 holds presence bits
        self.tables: List[Dict[Pair, int]] = [{} for _ in range(self.height + 1)]

    def assign(self, level: int, pair: Pair) -> int:
        if pair == (0, 0):
            return 0
        table = self.tables[level]
        name = table.get(pair)
        if name is None:
            name = table[pair] = len(table) + 1
        return name

    def lookup(self, level: int, pair: Pair) -> Optional[int]:
        if pair == (0, 0):
            return 0
        return self.tables[level].get(pair)

    def levels(self, colors: Iterable[int]) -> Optional[List[List[int]]]:
        """B_0..B_h of a color set, or None if some pair was never named"""
        row = [0] * self.sigma_hat
        for color in colors:
            if not 1 <= color <= self.sigma_hat:
                return None
            row[color - 1] = 1
        out = [row]
        for level in range(1, self.height + 1):
            names = []
            for p in range(len(row) // 2):
                name = self.lookup(level, (row[2 * p], row[2 * p + 1]))
                if name is None:
                    return None
                names.append(name)
            row = names
            out.append(row)
        return out

    def name_of(self, colors: Iterable[int]) -> Optional[int]:
        levels = self.levels(colors)
        return None if levels is None else levels[-1][0]

    def __len__(self) -> int:
        return sum(len(t) for t in self.tables)


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Deterministic naming
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
@dataclass
class DeterministicNames:
    sigma_hat: int
    table: NameTable
    names: List[Tuple[Rect, int]] = field(default_factory=list)
    # (t, records) per batch, in (C1, C0) order
    record_counts: List[Tuple[int, int]] = field(default_factory=list)
    stack_clear: bool = True
    # sequences whose undo left a nonzero entry in the level just replayed
    dirty_undos: int = 0

    def by_rect(self) -> Dict[Rect, int]:
        return dict(self.names)


def name_deterministic(sequences: Sequence[EventSequence], sigma: int) -> DeterministicNames:
    """
    Names for every end marker of `sequences`.

    L_0 holds the radix-sorted new colors of each batch (C1 = sequence,
    C0 = batch). Phase i replays L_{i−1} into B_{i−1} sequence by sequence,
    emits one record per touched parent, names the records in sorted pair
    order and keeps them in (C1, C0) order as L_i.
    """
    sigma_hat = next_pow2(sigma)
    stack = NameStack(sigma_hat)
    table = NameTable(sigma_hat)
    height = stack.height

    batches: List[List[Tuple[List[int], Rect]]] = [seq.batches() for seq in sequences]
    flat_rects = [rect for seq_batches in batches for _, rect in seq_batches]
    sizes = []

    # L_0
    updates: List[Tuple[np.ndarray, np.ndarray]] = []
    for seq_batches in batches:
        for colors, _ in seq_batches:
            ordered = radix_sort(set(colors))
            sizes.append(len(ordered))
            positions = np.asarray(ordered, dtype=np.int64) - 1
            updates.append((positions, np.ones(len(ordered), dtype=np.int64)))
    records = [0] * len(updates)
    dirty_undos = 0

    for level in range(1, height + 1):
        parent_parts, left_parts, right_parts, owners = [], [], [], []
        batch_id = 0
        for seq_batches in batches:
            for _ in seq_batches:
                positions, values = updates[batch_id]
                if len(positions):
                    stack.write(level - 1, positions, values)
                    parents = np.unique(positions // 2)
                    left, right = stack.pairs(level - 1, parents)
                    parent_parts.append(parents)
                    left_parts.append(left)
                    right_parts.append(right)
                    owners.append(np.full(len(parents), batch_id, dtype=np.int64))
                    records[batch_id] += len(parents)
                batch_id += 1
            stack.undo(level - 1)
            if stack.levels[level - 1].any():
                dirty_undos += 1

        if not parent_parts:
            updates = [(np.empty(0, np.int64), np.empty(0, np.int64)) for _ in updates]
            continue

        parents = np.concatenate(parent_parts)
        left = np.concatenate(left_parts)
        right = np.concatenate(right_parts)
        owner = np.concatenate(owners)
        width = int(max(left.max(), right.max())) + 1
        keys, inverse = np.unique(left * width + right, return_inverse=True)
        issued = np.asarray([table.assign(level, (int(k // width), int(k % width))) for k in keys],
                            dtype=np.int64)
        names = issued[inverse.ravel()]

        # records are already grouped by owner in (C1, C0) order
        bounds = np.searchsorted(owner, np.arange(len(updates) + 1))
        updates = [(parents[bounds[b]:bounds[b + 1]], names[bounds[b]:bounds[b + 1]])
                   for b in range(len(updates))]
        logger.debug(f"Naming level {level}: {len(parents)} records, {len(keys)} names")

    result = DeterministicNames(sigma_hat, table)
    batch_id = 0
    for seq_batches in batches:
        top = 0
        for colors, rect in seq_batches:
            positions, values = updates[batch_id]
            if height == 0:
                top = 1 if sizes[batch_id] or top else 0
            elif len(values):
                top = int(values[0])
            result.names.append((rect, top))
            result.record_counts.append((sizes[batch_id], records[batch_id]))
            batch_id += 1

    result.stack_clear = stack.is_clear()
    result.dirty_undos = dirty_undos
    if dirty_undos:
        logger.warning(f"{dirty_undos} sequence undos left the name stack dirty")
    logger.info(f"Named {len(flat_rects)} end markers over sigma_hat={sigma_hat}")
    return result


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#   Monte-Carlo signatures
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
class SignatureScheme:
    """H(f) = Σ_{α∈f} r^α mod 2^61 − 1 with powers precomputed for [1, σ]"""

    def __init__(self, r: int, sigma: int):
        if not 2 <= r <= MERSENNE_61 - 2:
            raise ValueError(f"Seed {r} outside [2, 2^61 - 3]")
        self.r = r
        self.sigma = sigma
        self.powers = [0] * (sigma + 1)
        value = 1
        for alpha in range(1, sigma + 1):
            value = value * r % MERSENNE_61
            self.powers[alpha] = value

    def add(self, signature: int, color: int) -> int:
        return (signature + self.powers[color]) % MERSENNE_61

    def signature_of(self, colors: Iterable[int]) -> int:
        signature = 0
        for color in colors:
            signature = self.add(signature, color)
        return signature


def draw_seed(rng: np.random.Generator) -> int:
    return int(rng.integers(2, MERSENNE_61 - 1))


def name_probabilistic(sequences: Iterable[EventSequence],
                       scheme: SignatureScheme) -> List[Tuple[Rect, int]]:
    """Signature of the color prefix at every end marker, one addition per color"""
    out = []
    for seq in sequences:
        signature = 0
        for colors, rect in seq.batches():
            for color in colors:
                signature = scheme.add(signature, color)
            out.append((rect, signature))
    return out


def find_collision(fingerprints: Iterable[Fingerprint],
                   scheme: SignatureScheme) -> Optional[Tuple[Fingerprint, Fingerprint]]:
    seen: Dict[int, Fingerprint] = {}
    for fp in fingerprints:
        signature = scheme.signature_of(fp)
        other = seen.setdefault(signature, fp)
        if other != fp:
            return other, fp
    return None


def verify_and_retry(fingerprints: Iterable[Fingerprint], sigma: int,
                     rng: np.random.Generator, budget: int = 16,
                     first: Optional[int] = None) -> Tuple[SignatureScheme, int]:
    """
    A scheme injective on `fingerprints` and the number of seeds tried.

    `first` is tried before any seed drawn from `rng`.
    """
    distinct = set(fingerprints)
    for attempt in range(1, budget + 1):
        r = first if attempt == 1 and first is not None else draw_seed(rng)
        scheme = SignatureScheme(r, sigma)
        clash = find_collision(distinct, scheme)
        if clash is None:
            logger.debug(f"Seed {r} verified on attempt {attempt}")
            return scheme, attempt
        logger.warning(f"Signature collision under seed {r}: {list(clash[0])} vs {list(clash[1])}")
    raise SignatureCollisionError(
        f"No collision-free seed for {len(distinct)} fingerprints after {budget} attempts")
