"""
Fingerprint Index — command line

Finds every maximal location (rectangle or square) of every fingerprint in
a color matrix, names the fingerprints and answers membership queries.

Subcommands:
  build      — enumerate, name and write an index file
  query      — does a color set occur as a fingerprint? (exit 0 / 1)
  enumerate  — list maximal rectangles or squares (tsv / json)
  verify     — compare the fast path with brute force (exit 0 iff equal)
  stats      — describe an index file
  bench      — time builds on random images, CSV out

Exit codes: 0 ok, 1 absent / diff / failure, 2 usage, 3 bad or missing file,
130 interrupted.

Usage:
  python main.py build --input fig3.txt --output fig3.idx --naming mc --seed 7
  python main.py query --index fig3.idx --colors e,f,i
  python main.py verify --random 6,6,3 --count 50 --seed 1
"""

import argparse
import logging
import os
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config.settings import Config
from models.builder import MODES, NAMINGS, IndexBuilder, enumerate_locations
from models.errors import ImageFormatError, IndexFormatError, SizeGuardError
from models.image import Image, parse_colors
from models.index import load_index, save_index
from models.oracle import (brute_force_locations, brute_force_squares, compare,
                           condition_disagreements)
from models.rectangles import VARIANTS
from utils.image_io import parse_shape, random_image, read_image_file, save_image
from utils.report import (BenchRow, doubling_ratios, format_bench_csv, format_json,
                          format_rects, format_stats, format_tsv)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INTERRUPTED = 130


class UsageError(Exception):
    """Flags that parse but cannot be honoured together"""


# ── Logging ──────────────────────────────────────────────────
def setup_logging(quiet: bool = False):
    log_dir = os.path.dirname(Config.LOG_FILE)
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
    stream = logging.StreamHandler()
    if quiet:
        stream.setLevel(logging.WARNING)
    logging.basicConfig(
        level=getattr(logging, Config.LOG_LEVEL),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(Config.LOG_FILE, encoding='utf-8'),
            stream,
        ],
    )


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#  Subcommands
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
def cmd_build(args) -> int:
    image = read_image_file(args.input)
    builder = IndexBuilder(mode=args.mode, naming=args.naming, variant=args.variant,
                           workers=args.workers, seed=args.seed, report=args.report)
    index = builder.build(image)
    written = save_index(index, args.output)
    print(f"{len(index)} fingerprints, {index.meta.location_count} locations, "
          f"{written} bytes -> {args.output}")
    return EXIT_OK


def cmd_query(args) -> int:
    index = load_index(args.index)
    try:
        colors = parse_colors(args.colors)
    except ImageFormatError as e:
        raise UsageError(str(e)) from e
    if args.report:
        if not index.meta.report:
            raise UsageError(f"{args.index} was built without --report")
        rects = index.query_report(colors)
        sys.stdout.write(format_rects(rects, squares=index.meta.mode == 'square'))
        found = bool(rects)
    else:
        found = index.query_exists(colors)
        print('present' if found else 'absent')
    logger.debug(f"Query {colors}: {'present' if found else 'absent'}")
    return EXIT_OK if found else EXIT_FAIL


def cmd_enumerate(args) -> int:
    image = read_image_file(args.input)
    found = enumerate_locations(image, args.mode, args.variant, args.workers)
    logger.info(f"Enumerated {len(found)} maximal {args.mode} locations")
    if args.format == 'json':
        print(format_json(found))
    else:
        sys.stdout.write(format_tsv(found))
    return EXIT_OK


def _verify_one(image: Image, args) -> List[str]:
    fast = enumerate_locations(image, args.mode, args.variant, args.workers)
    if args.mode == 'square':
        oracle = brute_force_squares(image, args.guard)
        lines = compare(oracle, fast).lines()
        lines.extend(f"formula-disagrees\t{square}"
                     for square in condition_disagreements(image, args.guard))
        return lines
    return compare(brute_force_locations(image, args.guard), fast).lines()


def cmd_verify(args) -> int:
    if args.random:
        try:
            m, n, sigma = parse_shape(args.random)
        except ValueError as e:
            raise UsageError(str(e)) from e
        rng = np.random.default_rng(args.seed)
        images = [random_image(m, n, sigma, rng) for _ in range(args.count)]
    else:
        images = [read_image_file(args.input)]

    failures = 0
    for number, image in enumerate(images, start=1):
        lines = _verify_one(image, args)
        if not lines:
            continue
        failures += 1
        for line in lines:
            print(line)
        if args.random:
            repro = save_image(image, Path(args.repro_dir) / f"repro_{number}.txt")
            logger.error(f"Instance {number} differs from brute force; saved to {repro}")
        else:
            logger.error(f"{args.input} differs from brute force")

    print(f"{len(images) - failures}/{len(images)} instances match")
    return EXIT_OK if failures == 0 else EXIT_FAIL


def cmd_stats(args) -> int:
    index = load_index(args.index)
    sys.stdout.write(format_stats(index.stats()))
    return EXIT_OK


def _int_list(text: str) -> List[int]:
    try:
        values = [int(t) for t in text.split(',') if t.strip()]
    except ValueError:
        raise UsageError(f"Expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise UsageError(f"Expected positive integers, got {text!r}")
    return values


def cmd_bench(args) -> int:
    rows = []
    modes = [m.strip() for m in args.modes.split(',') if m.strip()]
    for mode in modes:
        if mode not in MODES:
            raise UsageError(f"Unknown mode {mode!r}")
        for size in _int_list(args.sizes):
            for sigma in _int_list(args.sigmas):
                for run in range(1, args.runs + 1):
                    rng = np.random.default_rng([args.seed, size, sigma, run])
                    image = random_image(size, size, sigma, rng)
                    builder = IndexBuilder(mode=mode, workers=args.workers, seed=args.seed)
                    start = time.perf_counter()
                    builder.build(image)
                    seconds = time.perf_counter() - start
                    rows.append(BenchRow(mode, size, size, sigma, run, seconds))
                    logger.info(f"bench {mode} {size}x{size} sigma={sigma} run {run}: {seconds:.3f}s")

    table = format_bench_csv(rows)
    if args.output:
        Path(args.output).write_text(table, encoding='utf-8')
    else:
        sys.stdout.write(table)
    for line in doubling_ratios(rows):
        logger.info(line)
        print(f"# {line}", file=sys.stderr)
    return EXIT_OK


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#  CLI
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
def _add_pipeline_flags(p: argparse.ArgumentParser):
    p.add_argument('--mode', choices=MODES, default=Config.MODE)
    p.add_argument('--variant', choices=VARIANTS, default=Config.VARIANT,
                   help='Column fingerprint variant for rect mode')
    p.add_argument('--workers', type=int, default=Config.WORKERS,
                   help='Row-pair worker processes (0 = one per CPU)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='fpix',
        description='Maximal fingerprint enumeration and indexing for color matrices',
    )
    parser.add_argument('--quiet', action='store_true', help='Only warnings on the console')
    subparsers = parser.add_subparsers(dest='command')

    build_p = subparsers.add_parser('build', help='Build an index file from an image')
    build_p.add_argument('--input', required=True)
    build_p.add_argument('--output', required=True)
    _add_pipeline_flags(build_p)
    build_p.add_argument('--naming', choices=NAMINGS, default=Config.NAMING)
    build_p.add_argument('--seed', type=int, default=Config.SEED)
    build_p.add_argument('--report', action='store_true',
                         help='Store every location so queries can list them')

    query_p = subparsers.add_parser('query', help='Is a color set a fingerprint of the image?')
    query_p.add_argument('--index', required=True)
    query_p.add_argument('--colors', required=True, help="e.g. 'e,f,i' or '2,7,9'")
    query_p.add_argument('--report', action='store_true')

    enum_p = subparsers.add_parser('enumerate', help='List maximal locations')
    enum_p.add_argument('--input', required=True)
    _add_pipeline_flags(enum_p)
    enum_p.add_argument('--format', choices=('tsv', 'json'), default='tsv')

    verify_p = subparsers.add_parser('verify', help='Compare against brute force')
    source = verify_p.add_mutually_exclusive_group(required=True)
    source.add_argument('--input')
    source.add_argument('--random', metavar='M,N,SIGMA')
    _add_pipeline_flags(verify_p)
    verify_p.add_argument('--count', type=int, default=1)
    verify_p.add_argument('--seed', type=int, default=Config.SEED)
    verify_p.add_argument('--guard', type=int, default=Config.SIZE_GUARD,
                          help='Largest m*n the brute force accepts')
    verify_p.add_argument('--repro-dir', default='repro')

    stats_p = subparsers.add_parser('stats', help='Describe an index file')
    stats_p.add_argument('--index', required=True)

    bench_p = subparsers.add_parser('bench', help='Time builds on random images')
    bench_p.add_argument('--modes', default='rect,square')
    bench_p.add_argument('--sizes', default=Config.BENCH_SIZES)
    bench_p.add_argument('--sigmas', default=Config.BENCH_SIGMAS)
    bench_p.add_argument('--runs', type=int, default=Config.BENCH_RUNS)
    bench_p.add_argument('--seed', type=int, default=Config.SEED or 0)
    bench_p.add_argument('--workers', type=int, default=Config.WORKERS)
    bench_p.add_argument('--output')

    return parser


COMMANDS = {
    'build': cmd_build,
    'query': cmd_query,
    'enumerate': cmd_enumerate,
    'verify': cmd_verify,
    'stats': cmd_stats,
    'bench': cmd_bench,
}


def run(argv: Optional[Sequence[str]] = None, configure_logging: bool = False) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    if configure_logging:
        setup_logging(args.quiet)
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    if getattr(args, 'workers', 0) < 0:
        print(f"error: --workers must be >= 0, got {args.workers}", file=sys.stderr)
        return EXIT_USAGE
    if (getattr(args, 'seed', None) or 0) < 0:
        print(f"error: --seed must be >= 0, got {args.seed}", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, 'count', 1) < 1 or getattr(args, 'runs', 1) < 1:
        print("error: --count and --runs must be positive", file=sys.stderr)
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args)
    except (UsageError, SizeGuardError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ImageFormatError as e:
        logger.error(f"Bad input: {e}")
        return EXIT_IO
    except (IndexFormatError, OSError) as e:
        logger.error(f"I/O failure: {e}")
        return EXIT_IO


# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
#  Entry Point
# ━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━━
def main():
    try:
        return run(sys.argv[1:], configure_logging=True)
    except KeyboardInterrupt:
        logger.info("Interrupted")
        return EXIT_INTERRUPTED
    except Exception as e:
        logger.exception(f"Fatal error: {e}")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
