"""
Index build pipeline: remap → orient → enumerate → name → index
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from config.settings import Config
from models.events import EventSequence, LocationRecords
from models.image import ColorRemap, Fingerprint, Image, Rect, Square, remap_colors
from models.index import FingerprintIndex, IndexMeta, build_index
from models.naming import (DeterministicNames, name_deterministic, record_bound,
                           verify_and_retry)
from models.rectangles import (VARIANTS, enumerate_maximal_rectangles, maximal_location_records,
                               maximal_locations)
from models.squares import enumerate_maximal_squares, maximal_squares

logger = logging.getLogger(__name__)

MODES = ('rect', 'square')
NAMINGS = ('mc', 'det')

Region = Union[Rect, Square]


def _to_original(remap: ColorRemap, fp: Fingerprint) -> Fingerprint:
    return Fingerprint(tuple(remap.to_original(fp)))


def enumerate_locations(image: Image, mode: str = 'rect', variant: str = 'column-index',
                        workers: int = 1) -> List[Tuple[Region, Fingerprint]]:
    """Maximal rectangles or squares of `image` with fingerprints in its own colors"""
    dense, remap = remap_colors(image)
    if mode == 'square':
        found = maximal_squares(dense)
    else:
        found = maximal_locations(dense, variant, workers)
    return sorted((region, _to_original(remap, fp)) for region, fp in found)


@dataclass
class BuildReport:
    transposed: bool = False
    locations: int = 0
    fingerprints: int = 0
    seed: int = 0
    attempts: int = 0
    # (t, records) per batch, deterministic naming only
    record_counts: List[Tuple[int, int]] = field(default_factory=list)


class IndexBuilder:
    """Builds a FingerprintIndex; unset arguments fall back to Config."""

    def __init__(self, mode: Optional[str] = None, naming: Optional[str] = None,
                 variant: Optional[str] = None, workers: Optional[int] = None,
                 seed: Optional[int] = None, report: bool = False,
                 retry_budget: Optional[int] = None):
        self.mode = mode or Config.MODE
        self.naming = naming or Config.NAMING
        self.variant = variant or Config.VARIANT
        self.workers = Config.WORKERS if workers is None else workers
        self.seed = Config.SEED if seed is None else seed
        self.report = report
        self.retry_budget = Config.RETRY_BUDGET if retry_budget is None else retry_budget
        self.last_report = BuildReport()
        self.validate()

    def validate(self):
        if self.mode not in MODES:
            raise ValueError(f"Unknown mode {self.mode!r}, expected one of {MODES}")
        if self.naming not in NAMINGS:
            raise ValueError(f"Unknown naming {self.naming!r}, expected one of {NAMINGS}")
        if self.variant not in VARIANTS:
            raise ValueError(f"Unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if self.workers < 0:
            raise ValueError(f"Worker count must be >= 0, got {self.workers}")
        if self.retry_budget < 1:
            raise ValueError(f"Retry budget must be >= 1, got {self.retry_budget}")

    def _sequences(self, image: Image) -> Tuple[List[EventSequence], bool]:
        if self.mode == 'square':
            return enumerate_maximal_squares(image), False
        if image.m > image.n:
            logger.info(f"Image is {image.m}x{image.n}: sweeping the transpose")
            return enumerate_maximal_rectangles(image.transpose(), self.variant, self.workers), True
        return enumerate_maximal_rectangles(image, self.variant, self.workers), False

    def _records(self, image: Image) -> Tuple[LocationRecords, bool]:
        """Locations for mc naming; rectangle φ sequences never outlive their row pair"""
        if self.mode == 'square':
            return LocationRecords.from_sequences(enumerate_maximal_squares(image)), False
        return maximal_location_records(image, self.variant, self.workers)

    def _named_records(self, image: Image) -> Tuple[LocationRecords, List[Fingerprint], bool]:
        """Locations plus one fingerprint per level-name class"""
        sequences, transposed = self._sequences(image)
        names: DeterministicNames = name_deterministic(sequences, image.sigma)
        self.last_report.record_counts = names.record_counts
        height = names.table.height
        over = [(t, c) for t, c in names.record_counts if c > record_bound(t, height)]
        if over:
            logger.warning(f"{len(over)} batches exceed the naming record bound")

        records = LocationRecords.from_sequences(sequences)
        classes: Dict[int, int] = {}
        for (_, name), fid in zip(names.names, records.rows[:, 4].tolist()):
            classes.setdefault(name, fid)
        if len(classes) != len(records.fingerprints):
            logger.warning(f"{len(classes)} level names for {len(records.fingerprints)} fingerprints")
        return records, [records.fingerprints[classes[name]] for name in sorted(classes)], transposed

    def build(self, image: Image) -> FingerprintIndex:
        self.last_report = report = BuildReport()
        dense, remap = remap_colors(image)
        logger.info(f"Building {self.mode}/{self.naming} index for {image.m}x{image.n} image, "
                    f"sigma={dense.sigma}")

        if self.naming == 'det':
            records, distinct, transposed = self._named_records(dense)
        else:
            records, transposed = self._records(dense)
            distinct = records.fingerprints
        report.transposed = transposed
        if transposed:
            records = records.transpose()

        rng = np.random.default_rng(self.seed)
        scheme, attempts = verify_and_retry(distinct, dense.sigma, rng, self.retry_budget)
        report.seed, report.attempts = scheme.r, attempts
        report.fingerprints = len(records.fingerprints)
        report.locations = len(records)
        logger.info(f"Seed {scheme.r} accepted after {attempts} attempt(s) "
                    f"for {len(distinct)} fingerprints")

        # the prefix hash at a marker depends only on the fingerprint's color set
        signatures = [scheme.signature_of(fp) for fp in records.fingerprints]
        sizes = [len(fp) for fp in records.fingerprints]
        triples = ((rect, signatures[fid], sizes[fid]) for rect, fid in records.items())

        meta = IndexMeta(mode=self.mode, naming=self.naming, variant=self.variant,
                         report=self.report, transposed=transposed)
        return build_index(triples, dense, remap, scheme, meta)
