import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from models.image import load_image  # noqa: E402

# Rectangle example, top row first
FIG3 = """\
6 10 10
b g d i f f e e c g
e d e i f h e e a i
i f d b b i i i e e
a e j d b j i a h e
e f h a i e b b e f
c a b e g f i b g i
"""

# Square example, top row first
FIG5 = """\
8 8 10
a f d a f f i c
h f d g i j a i
j d i b g g a c
i f i i a h i f
f j d b b g j h
h d a i f h c b
a g i g i a h b
h f e e b d c b
"""


@pytest.fixture
def fig3_text():
    return FIG3


@pytest.fixture
def fig3():
    return load_image(FIG3)


@pytest.fixture
def fig5():
    return load_image(FIG5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
