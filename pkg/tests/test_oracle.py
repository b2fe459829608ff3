import numpy as np
import pytest
from hypothesis import given, settings

from models.errors import SizeGuardError
from models.image import Fingerprint, Image, Rect, Square
from models.oracle import (OracleReport, brute_force_locations, brute_force_squares, compare,
                           compare_reports, condition_disagreements, formula_maximal,
                           square_conditions)
from strategies import images


def test_single_cell():
    image = Image(1, np.array([[1]]))
    assert brute_force_locations(image) == {(Rect(1, 1, 1, 1), Fingerprint((1,)))}
    assert brute_force_squares(image) == {(Square(1, 1, 1), Fingerprint((1,)))}


def test_two_colors_in_a_row():
    image = Image(2, np.array([[1, 2]]))
    assert brute_force_locations(image) == {
        (Rect(1, 1, 1, 2), Fingerprint((1, 2))),
        (Rect(1, 1, 1, 1), Fingerprint((1,))),
        (Rect(1, 1, 2, 2), Fingerprint((2,))),
    }


def test_uniform_images():
    assert len(brute_force_locations(Image(1, np.ones((2, 3), dtype=np.int64)))) == 1
    assert brute_force_squares(Image(1, np.ones((2, 2), dtype=np.int64))) == {
        (Square(1, 1, 2), Fingerprint((1,)))}


def test_size_guard():
    image = Image(1, np.ones((3, 4), dtype=np.int64))
    with pytest.raises(SizeGuardError):
        brute_force_locations(image, guard=11)
    with pytest.raises(SizeGuardError):
        brute_force_squares(image, guard=11)
    assert len(brute_force_locations(image, guard=12)) == 1


def test_conditions_of_a_covered_cell():
    image = Image(1, np.ones((2, 2), dtype=np.int64))
    conditions = square_conditions(image, Square(1, 1, 1))
    # left and bottom leave the image; the rest stay inside with the same colors
    assert conditions['L'] and conditions['D'] and conditions['LD']
    assert not conditions['R'] and not conditions['U'] and not conditions['RU']
    assert not formula_maximal(conditions)


def test_compare_directions():
    a = (Rect(1, 1, 1, 1), Fingerprint((1,)))
    b = (Rect(1, 1, 1, 2), Fingerprint((1, 2)))
    assert not compare({a, b}, {a, b})
    missing = compare({a, b}, {a})
    assert missing.oracle_only == [b] and missing.fast_only == []
    assert missing.lines()[0].startswith("oracle-only")
    extra = compare({a}, {a, b})
    assert extra.fast_only == [b]
    assert extra.lines()[0].startswith("fast-only")


def test_compare_reports_and_fingerprints():
    a = (Rect(1, 1, 1, 1), Fingerprint((1,)))
    s = (Square(1, 1, 1), Fingerprint((2,)))
    report = OracleReport(locations={a}, squares={s})
    assert report.fingerprints == {Fingerprint((1,)), Fingerprint((2,))}
    assert not compare_reports(report, report)
    assert compare_reports(report, OracleReport(locations={a})).oracle_only == [s]


def test_fig5_formula_agrees(fig5):
    assert condition_disagreements(fig5) == []


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=4))
@settings(max_examples=100, deadline=None)
def test_formula_agrees_with_containment(image):
    assert condition_disagreements(image) == []


@pytest.mark.property_based
@given(images(max_m=5, max_n=5, max_sigma=4))
@settings(max_examples=50, deadline=None)
def test_transpose_invariance(image):
    t = image.transpose()
    assert brute_force_locations(t) == {(r.transpose(), fp) for r, fp in brute_force_locations(image)}
    assert brute_force_squares(t) == {(s.transpose(), fp) for s, fp in brute_force_squares(image)}
