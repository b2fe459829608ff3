"""
Image files - text grid reader/writer and random instances
"""
import logging
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from models.image import LETTERS, Image, load_image

logger = logging.getLogger(__name__)


def read_image_file(path: Union[str, Path]) -> Image:
    """Load a text grid; OSError and ImageFormatError propagate"""
    source = Path(path)
    image = load_image(source.read_bytes())
    logger.info(f"Loaded {image.m}x{image.n} image (sigma={image.sigma}) from {source}")
    return image


def format_image(image: Image, letters: bool = False) -> str:
    """Text grid, top row first"""
    use_letters = letters and image.sigma <= len(LETTERS)
    lines = [f"{image.m} {image.n} {image.sigma}"]
    for i in range(image.m, 0, -1):
        row = image.row(i)
        if use_letters:
            lines.append(' '.join(LETTERS[c - 1] for c in row))
        else:
            lines.append(' '.join(str(c) for c in row))
    return '\n'.join(lines) + '\n'


def save_image(image: Image, path: Union[str, Path], letters: bool = False) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(format_image(image, letters), encoding='utf-8')
    logger.debug(f"Saved {image.m}x{image.n} image to {target}")
    return target


def random_image(m: int, n: int, sigma: int,
                 rng: Optional[np.random.Generator] = None) -> Image:
    """Uniform colors in [1, sigma]"""
    rng = rng if rng is not None else np.random.default_rng()
    cells = rng.integers(1, sigma + 1, size=(m, n))
    return Image(sigma, cells)


def parse_shape(text: str) -> Tuple[int, int, int]:
    """'m,n,sigma' for --random"""
    parts = [p.strip() for p in text.split(',')]
    if len(parts) != 3:
        raise ValueError(f"Expected m,n,sigma, got {text!r}")
    m, n, sigma = (int(p) for p in parts)
    if m < 1 or n < 1 or sigma < 1:
        raise ValueError(f"Shape values must be positive, got {text!r}")
    return m, n, sigma
