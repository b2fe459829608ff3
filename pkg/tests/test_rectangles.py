import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from models.events import LocationRecords
from models.image import Fingerprint, Image, Rect, fingerprint_of
from models.intervals import IntervalSet
from models.oracle import brute_force_locations
from models.rectangles import (ColumnFingerprints, RowPairState, column_fingerprint,
                               enumerate_location_records,
                               enumerate_maximal_rectangles, maximal_locations)
from strategies import images


def test_single_cell():
    image = Image(1, np.array([[1]]))
    assert maximal_locations(image) == [(Rect(1, 1, 1, 1), Fingerprint((1,)))]


def test_two_colors_in_a_row():
    image = Image(2, np.array([[1, 2]]))
    assert set(maximal_locations(image)) == {
        (Rect(1, 1, 1, 2), Fingerprint((1, 2))),
        (Rect(1, 1, 1, 1), Fingerprint((1,))),
        (Rect(1, 1, 2, 2), Fingerprint((2,))),
    }


def test_uniform_image_has_one_location():
    image = Image(3, np.full((2, 3), 2))
    assert maximal_locations(image) == [(Rect(1, 2, 1, 3), Fingerprint((2,)))]


def test_column_fingerprint_variants_agree(fig3):
    for i0, i1, j in [(2, 5, 10), (1, 6, 1), (3, 3, 4)]:
        expected = fingerprint_of(fig3, Rect(i0, i1, j, j))
        assert column_fingerprint(fig3, i0, i1, j, 'column-index') == expected
        assert column_fingerprint(fig3, i0, i1, j, 'parallel-rows') == expected


def test_parallel_rows_restarts_for_new_bottom_row(fig3):
    columns = ColumnFingerprints(fig3, 'parallel-rows')
    columns.fingerprints(1, 1)
    columns.fingerprints(1, 2)
    assert columns.fingerprints(2, 2) == [[c] for c in fig3.row(2)]


def test_unknown_variant():
    with pytest.raises(ValueError):
        ColumnFingerprints(Image(1, np.array([[1]])), 'quadtree')


def test_stage_one_waits_for_first_column(fig3):
    state = RowPairState(fig3, 2, 5)
    assert state.stage1_emit_end_markers([5, 6, 9]) == []


def test_fig3_matches_brute_force(fig3):
    assert set(maximal_locations(fig3)) == brute_force_locations(fig3)


def test_fig3_contains_last_column_location(fig3):
    # e, f, i fill column 10 from row 1 to row 5
    found = dict(maximal_locations(fig3))
    assert found[Rect(1, 5, 10, 10)] == Fingerprint((5, 6, 9))


def test_every_prefix_before_a_marker_is_the_rect_fingerprint(fig3):
    for seq in enumerate_maximal_rectangles(fig3):
        for rect, fp in seq.locations():
            assert (rect.i0, rect.i1, rect.j0) == (seq.i0, seq.i1, seq.j0)
            assert fingerprint_of(fig3, rect) == fp


def test_locations_come_in_row_pair_order(fig3):
    rects = [rect for rect, _ in maximal_locations(fig3)]
    keys = [(r.i0, r.i1, r.j0) for r in rects]
    assert keys == sorted(keys)


def test_exhaustive_tiny_images():
    for m, n in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2)]:
        for cells in itertools.product(range(1, 4), repeat=m * n):
            image = Image(3, np.array(cells).reshape(m, n))
            assert set(maximal_locations(image)) == brute_force_locations(image), cells


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=5))
@settings(max_examples=100, deadline=None)
def test_matches_brute_force(image):
    expected = brute_force_locations(image)
    assert set(maximal_locations(image, 'column-index')) == expected
    assert set(maximal_locations(image, 'parallel-rows')) == expected


@pytest.mark.property_based
@given(images(max_m=5, max_n=5, max_sigma=4))
@settings(max_examples=50, deadline=None)
def test_cardinality_bounds(image):
    found = maximal_locations(image)
    distinct = {fp for _, fp in found}
    assert len(distinct) <= len(found) <= image.n * image.m ** 2 * image.sigma


def test_workers_give_same_sequences(rng):
    for _ in range(3):
        image = Image(4, rng.integers(1, 5, size=(5, 6)))
        sequential = maximal_locations(image, workers=1)
        assert maximal_locations(image, workers=2) == sequential


def test_full_height_pair_is_maximal_to_bottom_and_top(fig3):
    state = RowPairState(fig3, 1, 6)
    for f in ColumnFingerprints(fig3).fingerprints(1, 6)[:4]:
        state.advance(f)
    assert state.bottom_top_intervals() == IntervalSet.span(1, 4)


def _streams(image, variant):
    return [((seq.i0, seq.i1, seq.j0), seq.events)
            for seq in enumerate_maximal_rectangles(image, variant)]


def test_fig3_variants_emit_identical_streams(fig3):
    assert _streams(fig3, 'column-index') == _streams(fig3, 'parallel-rows')


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=5))
@settings(max_examples=60, deadline=None)
def test_variants_emit_identical_streams(image):
    assert _streams(image, 'column-index') == _streams(image, 'parallel-rows')


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=5))
@settings(max_examples=60, deadline=None)
def test_records_replay_sequences_in_order(image):
    replayed = [loc for seq in enumerate_maximal_rectangles(image) for loc in seq.locations()]
    records = enumerate_location_records(image)
    assert list(records.locations()) == replayed
    assert len(records.fingerprints) == len({fp for _, fp in replayed})


def test_records_merge_reinterns_fingerprints():
    a = Fingerprint((1,))
    b = Fingerprint((1, 2))
    first = LocationRecords(np.array([[1, 1, 1, 1, 0], [1, 1, 1, 2, 1]]), [a, b])
    second = LocationRecords(np.array([[2, 2, 1, 1, 0]]), [b])
    merged = LocationRecords.merge([first, LocationRecords.merge([]), second])
    assert merged.fingerprints == [a, b]
    assert list(merged.locations()) == [
        (Rect(1, 1, 1, 1), a), (Rect(1, 1, 1, 2), b), (Rect(2, 2, 1, 1), b)]
    assert list(merged.transpose().items())[2] == (Rect(1, 1, 2, 2), 1)


def test_records_with_workers_match(rng):
    image = Image(4, rng.integers(1, 5, size=(5, 6)))
    sequential = enumerate_location_records(image, workers=1)
    pooled = enumerate_location_records(image, workers=2)
    assert list(pooled.locations()) == list(sequential.locations())
