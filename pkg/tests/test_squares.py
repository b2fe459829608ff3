import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from models.image import Fingerprint, Image, Square, fingerprint_of
from models.oracle import brute_force_squares
from models.squares import ChiSets, corner_state, enumerate_maximal_squares, maximal_squares
from strategies import images

A, B, C, D, E, F, G, H, I, J = range(1, 11)


# ── Golden values on the square example, corner (8, 8) ────
def test_column_triangle(fig5):
    state = corner_state(fig5, 8, 8)
    assert state.sct() == [(3, 1), (4, 1), (6, 2), (7, 1)]
    assert state.pct_items() == {B: (4, 1), D: (3, 1), F: (6, 2), I: (7, 1), J: (6, 2)}


def test_row_triangle(fig5):
    state = corner_state(fig5, 8, 8)
    assert state.slt() == [(1, 1), (4, 1), (5, 1), (7, 1)]
    assert state.plt_items() == {E: (1, 1), B: (4, 1), H: (5, 1), I: (7, 1)}


def test_diagonal(fig5):
    state = corner_state(fig5, 8, 8)
    assert state.sld() == [(B, 4), (G, 6), (A, 7), (C, 8)]
    assert state.pld_items() == {B: (B, 4), G: (G, 6), A: (A, 7), C: (C, 8)}


def test_lower_left_condition_sizes(fig5):
    chi = ChiSets.build(corner_state(fig5, 8, 8), None, None, None)
    assert chi.ld.intervals == [(1, 2), (4, 4), (8, 8)]


def test_k_matches_scan(fig5):
    for x, y in [(8, 8), (5, 7), (3, 2), (1, 1)]:
        state = corner_state(fig5, x, y)
        for color in range(1, fig5.sigma + 1):
            k = 0
            while k < min(x, y):
                square = Square(x - k, y - k, k + 1)
                if color in fingerprint_of(fig5, square.to_rect()):
                    break
                k += 1
            assert state.compute_K(color) == k, (x, y, color)


# ── Small cases ───────────────────────────────────────────
def test_single_cell():
    image = Image(1, np.array([[1]]))
    assert maximal_squares(image) == [(Square(1, 1, 1), Fingerprint((1,)))]


def test_uniform_two_by_two():
    image = Image(1, np.ones((2, 2), dtype=np.int64))
    assert maximal_squares(image) == [(Square(1, 1, 2), Fingerprint((1,)))]


def test_checkerboard_two_by_two():
    image = Image(2, np.array([[1, 2], [2, 1]]))
    expected = {(Square(i, j, 1), Fingerprint((image.cell(i, j),)))
                for i in (1, 2) for j in (1, 2)}
    expected.add((Square(1, 1, 2), Fingerprint((1, 2))))
    assert set(maximal_squares(image)) == expected
    assert brute_force_squares(image) == expected


def test_prefixes_are_square_fingerprints(fig5):
    for seq in enumerate_maximal_squares(fig5):
        for square, fp in seq.squares():
            assert (square.i, square.j) == (seq.i, seq.j)
            assert fingerprint_of(fig5, square.to_rect()) == fp


def test_fig5_matches_brute_force(fig5):
    assert set(maximal_squares(fig5)) == brute_force_squares(fig5)


def test_exhaustive_tiny_images():
    for m, n in [(1, 2), (2, 1), (2, 2), (1, 3), (2, 3), (3, 2), (3, 3)]:
        sigma = 2 if m * n > 6 else 3
        for cells in itertools.product(range(1, sigma + 1), repeat=m * n):
            image = Image(sigma, np.array(cells).reshape(m, n))
            assert set(maximal_squares(image)) == brute_force_squares(image), cells


@pytest.mark.property_based
@given(images(max_m=7, max_n=7, max_sigma=5))
@settings(max_examples=100, deadline=None)
def test_matches_brute_force(image):
    assert set(maximal_squares(image)) == brute_force_squares(image)


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=4))
@settings(max_examples=50, deadline=None)
def test_transpose_symmetry(image):
    direct = {(sq.transpose(), fp) for sq, fp in maximal_squares(image)}
    assert set(maximal_squares(image.transpose())) == direct


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=4))
@settings(max_examples=50, deadline=None)
def test_square_count_bound(image):
    assert len(maximal_squares(image)) <= image.m * image.n * image.sigma


def _nearest_by_scan(image, x, y):
    """pct, plt, pld rebuilt from the definition of the nearest occurrence"""
    sigma = image.sigma
    pct, plt, pld = [0] * (sigma + 1), [0] * (sigma + 1), [0] * (sigma + 1)
    nearest = {}
    for xi in range(1, x + 1):
        for yj in range(1, y + 1):
            c = image.cell(xi, yj)
            nearest[c] = min(nearest.get(c, x + y), max(x - xi, y - yj))
    for xi in range(1, x + 1):
        for yj in range(1, y + 1):
            c = image.cell(xi, yj)
            dx, dy = x - xi, y - yj
            if max(dx, dy) != nearest[c]:
                continue
            if dy > dx:
                pct[c] = yj
            elif dx > dy:
                plt[c] = xi
            else:
                pld[c] = xi
    return pct, plt, pld


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=5))
@settings(max_examples=40, deadline=None)
def test_corner_structures_match_rebuild(image):
    for x in range(1, image.m + 1):
        for y in range(1, image.n + 1):
            state = corner_state(image, x, y)
            pct, plt, pld = _nearest_by_scan(image, x, y)
            assert state.pct.tolist() == pct
            assert state.plt.tolist() == plt
            assert state.pld.tolist() == pld
