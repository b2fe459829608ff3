"""
Output rendering - enumerate listings, stats and bench tables
"""
import csv
import io
import json
import logging
import statistics
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from models.image import Fingerprint, Rect, Square

logger = logging.getLogger(__name__)


def _region_fields(region) -> List[int]:
    if isinstance(region, Square):
        return [region.i, region.j, region.k]
    return list(region.as_tuple())


def format_tsv(found: Iterable[Tuple[object, Fingerprint]]) -> str:
    """`i0 i1 j0 j1 colors` per rectangle or `i j k colors` per square"""
    lines = []
    for region, fp in found:
        fields = [str(v) for v in _region_fields(region)]
        fields.append(','.join(str(c) for c in fp))
        lines.append('\t'.join(fields))
    return '\n'.join(lines) + ('\n' if lines else '')


def format_json(found: Iterable[Tuple[object, Fingerprint]]) -> str:
    items = []
    for region, fp in found:
        key = 'square' if isinstance(region, Square) else 'rect'
        items.append({key: _region_fields(region), 'colors': list(fp)})
    return json.dumps(items)


def format_rects(rects: Iterable[Rect], squares: bool = False) -> str:
    lines = []
    for rect in rects:
        region = Square.from_rect(rect) if squares else rect
        lines.append(' '.join(str(v) for v in _region_fields(region)))
    return '\n'.join(lines) + ('\n' if lines else '')


def format_stats(stats: Dict[str, object]) -> str:
    return ''.join(f"{key}\t{value}\n" for key, value in stats.items())


# ── Bench ─────────────────────────────────────────────────
@dataclass(frozen=True)
class BenchRow:
    mode: str
    m: int
    n: int
    sigma: int
    run: int
    seconds: float


BENCH_FIELDS = ('mode', 'm', 'n', 'sigma', 'run', 'seconds')


def format_bench_csv(rows: Sequence[BenchRow]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(BENCH_FIELDS)
    for row in rows:
        writer.writerow([row.mode, row.m, row.n, row.sigma, row.run, f"{row.seconds:.6f}"])
    return out.getvalue()


def medians(rows: Sequence[BenchRow]) -> Dict[Tuple[str, int, int, int], float]:
    groups: Dict[Tuple[str, int, int, int], List[float]] = {}
    for row in rows:
        groups.setdefault((row.mode, row.m, row.n, row.sigma), []).append(row.seconds)
    return {key: statistics.median(values) for key, values in groups.items()}


def doubling_ratios(rows: Sequence[BenchRow]) -> List[str]:
    """Median time ratios for each size or alphabet doubling present in `rows`"""
    table = medians(rows)
    lines = []
    for (mode, m, n, sigma), seconds in sorted(table.items()):
        bigger = table.get((mode, 2 * m, 2 * n, sigma))
        if bigger is not None and seconds > 0:
            lines.append(f"{mode}: m,n {m}->{2 * m} at sigma={sigma}: x{bigger / seconds:.2f}")
        wider = table.get((mode, m, n, 2 * sigma))
        if wider is not None and seconds > 0:
            lines.append(f"{mode}: sigma {sigma}->{2 * sigma} at {m}x{n}: x{wider / seconds:.2f}")
    return lines
