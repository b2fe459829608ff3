import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from models.errors import SignatureCollisionError
from models.image import Fingerprint, Rect
from models.naming import (MERSENNE_61, NameStack, NameTable, SignatureScheme, ceil_log2,
                           name_deterministic, name_probabilistic, next_pow2, radix_sort,
                           record_bound, verify_and_retry)
from models.rectangles import PhiSequence, enumerate_maximal_rectangles
from models.squares import enumerate_maximal_squares
from strategies import images


class ScriptedRng:
    """Stands in for a numpy Generator, handing out fixed seeds"""

    def __init__(self, seeds):
        self.seeds = list(seeds)

    def integers(self, low, high):
        return self.seeds.pop(0)


def one_batch(colors, rect=Rect(1, 1, 1, 1)):
    seq = PhiSequence(1, 1, 1)
    for color in colors:
        seq.add_color(color)
    seq.end(rect)
    return seq


def _cube_root_of_unity() -> int:
    for g in range(2, 100):
        r = pow(g, (MERSENNE_61 - 1) // 3, MERSENNE_61)
        if r != 1:
            return r
    raise AssertionError("no cube root found")


# ── Helpers ───────────────────────────────────────────────
def test_next_pow2():
    assert [next_pow2(v) for v in (1, 2, 3, 5, 8, 9)] == [1, 2, 4, 8, 8, 16]
    assert ceil_log2(1) == 0 and ceil_log2(5) == 3


@pytest.mark.property_based
@given(st.lists(st.integers(0, 100000), max_size=50))
@settings(max_examples=100)
def test_radix_sort(values):
    assert radix_sort(values) == sorted(values)


# ── Deterministic naming ──────────────────────────────────
def test_level_names_of_one_subsequence():
    names = name_deterministic([one_batch([6, 1, 5, 3])], sigma=8)
    levels = names.table.levels([1, 3, 5, 6])
    assert levels[0] == [1, 0, 1, 0, 1, 1, 0, 0]
    assert levels[1:] == [[1, 1, 2, 0], [1, 2], [1]]
    assert names.names == [(Rect(1, 1, 1, 1), 1)]
    assert names.stack_clear


def test_name_table_assigns_sequentially():
    table = NameTable(4)
    assert table.assign(1, (0, 0)) == 0
    assert table.assign(1, (1, 0)) == 1
    assert table.assign(1, (0, 1)) == 2
    assert table.assign(1, (1, 0)) == 1
    assert table.lookup(1, (1, 1)) is None
    assert table.name_of([1, 2]) is None


def test_stack_undo():
    stack = NameStack(8)
    stack.write(0, np.array([0, 5]), np.array([1, 1]))
    assert not stack.is_clear()
    stack.undo()
    assert stack.is_clear()


def test_single_color_alphabet():
    seq = PhiSequence(1, 1, 1)
    seq.add_color(1)
    seq.end(Rect(1, 1, 1, 1))
    seq.end(Rect(1, 1, 1, 2))
    names = name_deterministic([seq], sigma=1)
    assert [name for _, name in names.names] == [1, 1]


def _partition(pairs):
    classes = {}
    for key, label in pairs:
        classes.setdefault(label, set()).add(key)
    return sorted(sorted(c) for c in classes.values())


def test_fig3_names_match_fingerprints(fig3):
    sequences = enumerate_maximal_rectangles(fig3)
    names = name_deterministic(sequences, fig3.sigma)
    fps = [fp for seq in sequences for _, fp in seq.locations()]
    assert len(names.names) == len(fps)
    for (_, name_a), fp_a in zip(names.names, fps):
        for (_, name_b), fp_b in zip(names.names, fps):
            assert (name_a == name_b) == (fp_a == fp_b)
    assert names.stack_clear


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=7), st.sampled_from(['rect', 'square']))
@settings(max_examples=60, deadline=None)
def test_names_induce_fingerprint_partition(image, mode):
    if mode == 'rect':
        sequences = enumerate_maximal_rectangles(image)
    else:
        sequences = enumerate_maximal_squares(image)
    result = name_deterministic(sequences, image.sigma)
    fps = [fp for seq in sequences for _, fp in seq.locations()]
    by_name = _partition((i, name) for i, (_, name) in enumerate(result.names))
    by_fp = _partition((i, fp) for i, fp in enumerate(fps))
    assert by_name == by_fp
    assert result.stack_clear
    for fp, (_, name) in zip(fps, result.names):
        assert result.table.name_of(fp) == name
    height = result.table.height
    assert all(records <= record_bound(t, height) for t, records in result.record_counts)


# ── Signatures ────────────────────────────────────────────
def test_signature_incremental_and_order_free():
    scheme = SignatureScheme(123456789, 10)
    seq = one_batch([3, 1])
    seq.add_color(7)
    seq.end(Rect(1, 1, 1, 2))
    sigs = name_probabilistic([seq], scheme)
    assert sigs[0][1] == scheme.signature_of([1, 3])
    assert sigs[1][1] == scheme.signature_of([7, 3, 1])
    assert scheme.signature_of([1, 3, 7]) == scheme.signature_of([7, 1, 3])


def test_seed_range_checked():
    with pytest.raises(ValueError):
        SignatureScheme(1, 4)


def test_single_fingerprint_verifies_immediately():
    scheme, attempts = verify_and_retry([Fingerprint((1,))], 1, np.random.default_rng(0))
    assert attempts == 1
    assert 2 <= scheme.r <= MERSENNE_61 - 2


def test_planted_collision_forces_retry():
    r = _cube_root_of_unity()
    assert SignatureScheme(r, 4).signature_of([1]) == SignatureScheme(r, 4).signature_of([4])
    fps = [Fingerprint((1,)), Fingerprint((4,))]
    scheme, attempts = verify_and_retry(fps, 4, ScriptedRng([r, 987654321]))
    assert attempts == 2
    assert scheme.r == 987654321


def test_retry_budget_exhausted():
    r = _cube_root_of_unity()
    fps = [Fingerprint((1,)), Fingerprint((4,))]
    with pytest.raises(SignatureCollisionError):
        verify_and_retry(fps, 4, ScriptedRng([r, r, r]), budget=3)


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=6), st.integers(0, 2 ** 32))
@settings(max_examples=60, deadline=None)
def test_signatures_induce_fingerprint_partition(image, seed):
    sequences = enumerate_maximal_rectangles(image)
    fps = [fp for seq in sequences for _, fp in seq.locations()]
    scheme, _ = verify_and_retry(fps, image.sigma, np.random.default_rng(seed))
    sigs = name_probabilistic(sequences, scheme)
    by_sig = _partition((i, sig) for i, (_, sig) in enumerate(sigs))
    by_fp = _partition((i, fp) for i, fp in enumerate(fps))
    assert by_sig == by_fp


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=9), st.sampled_from(['rect', 'square']))
@settings(max_examples=60, deadline=None)
def test_stack_clear_after_every_sequence(image, mode):
    if mode == 'rect':
        sequences = enumerate_maximal_rectangles(image)
    else:
        sequences = enumerate_maximal_squares(image)
    result = name_deterministic(sequences, image.sigma)
    assert result.dirty_undos == 0
    assert result.stack_clear


@pytest.mark.property_based
@given(images(max_m=6, max_n=6, max_sigma=8), st.integers(0, 2 ** 32))
@settings(max_examples=30, deadline=None)
def test_first_seed_verifies(image, base_seed):
    fps = {fp for seq in enumerate_maximal_rectangles(image) for _, fp in seq.locations()}
    for offset in range(20):
        _, attempts = verify_and_retry(fps, image.sigma, np.random.default_rng(base_seed + offset))
        assert attempts == 1
