# config/settings.py
"""
Fingerprint Index — Configuration

All settings can be overridden via environment variables or .env file.
Command-line flags take precedence over these values.
"""

import os
from typing import Optional
from dotenv import load_dotenv

load_dotenv()


def _optional_int(name: str) -> Optional[int]:
    value = os.getenv(name, '').strip()
    return int(value) if value else None


class Config:
    """Configuration settings for the fingerprint indexer"""

    # ── Pipeline ──────────────────────────────────────────────
    #   MODE     — 'rect' (maximal rectangles) or 'square'
    #   NAMING   — 'mc' (polynomial signatures) or 'det' (level naming)
    #   VARIANT  — column fingerprints: 'column-index' or 'parallel-rows'
    MODE: str = os.getenv('FPIX_MODE', 'rect')
    NAMING: str = os.getenv('FPIX_NAMING', 'mc')
    VARIANT: str = os.getenv('FPIX_VARIANT', 'column-index')
    SEED: Optional[int] = _optional_int('FPIX_SEED')

    # ── Workers ───────────────────────────────────────────────
    # 0 means one worker per available CPU
    WORKERS: int = int(os.getenv('FPIX_WORKERS', '0'))

    # ── Signatures ────────────────────────────────────────────
    RETRY_BUDGET: int = int(os.getenv('FPIX_RETRY_BUDGET', '16'))

    # ── Oracle / Verification ─────────────────────────────────
    SIZE_GUARD: int = int(os.getenv('FPIX_SIZE_GUARD', '400'))

    # ── Bench ─────────────────────────────────────────────────
    BENCH_RUNS: int = int(os.getenv('FPIX_BENCH_RUNS', '5'))
    BENCH_SIZES: str = os.getenv('FPIX_BENCH_SIZES', '64,128')
    BENCH_SIGMAS: str = os.getenv('FPIX_BENCH_SIGMAS', '8,16')

    # ── Logging ───────────────────────────────────────────────
    LOG_LEVEL: str = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE: str = os.getenv('LOG_FILE', 'logs/fpix.log')
