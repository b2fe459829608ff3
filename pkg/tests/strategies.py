"""Hypothesis strategies for small color matrices."""

import numpy as np
from hypothesis import strategies as st

from models.image import Image


@st.composite
def images(draw, max_m: int = 6, max_n: int = 6, max_sigma: int = 4):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    sigma = draw(st.integers(1, max_sigma))
    cells = draw(st.lists(st.integers(1, sigma), min_size=m * n, max_size=m * n))
    return Image(sigma, np.array(cells, dtype=np.int64).reshape(m, n))
