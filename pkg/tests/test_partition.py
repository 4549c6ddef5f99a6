"""Tests for the interval partition container."""

import numpy as np
import pytest

from src.containers import Container, IntervalPartition
from src.system import InvalidArgument, InvalidData


GRID = np.array([0.0, 0.1, 0.3, 0.6, 1.0])


class TestContainer:
    """Keyed storage."""

    def test_sequential_keys(self):
        c = Container([10, 20, 30])
        assert c[1] == 20
        assert c.nr_items == 3

    def test_custom_keys(self):
        c = Container([100, 200, 300], keys=[5, 6, 7], name="custom")
        assert c[6] == 200
        assert "custom" in repr(c)


class TestIntervalPartition:
    """Construction, geometry and lookup."""

    def test_singletons(self):
        part = IntervalPartition.singletons(GRID)
        assert part.D == 5
        np.testing.assert_array_equal(part.boundaries, np.column_stack([np.arange(5), np.arange(5)]))
        np.testing.assert_array_equal(part.lengths, np.zeros(5))

    def test_whole(self):
        part = IntervalPartition.whole(GRID)
        assert part.D == 1
        np.testing.assert_array_equal(part.boundaries, [[0, 4]])
        np.testing.assert_allclose(part.lengths, [1.0])

    def test_lengths_and_sizes(self):
        part = IntervalPartition([0, 2, 3], GRID)
        np.testing.assert_array_equal(part.sizes, [2, 1, 2])
        np.testing.assert_allclose(part.lengths, [0.1, 0.0, 0.4])

    def test_membership_and_find_interval(self):
        part = IntervalPartition([0, 2, 3], GRID)
        np.testing.assert_array_equal(part.membership, [0, 0, 1, 2, 2])
        assert part.find_interval(0) == 0
        assert part.find_interval(1) == 0
        assert part.find_interval(2) == 1
        assert part.find_interval(4) == 2
        assert part.find_interval(5) is None

    def test_from_bounds_round_trip(self):
        part = IntervalPartition([0, 2, 3], GRID)
        again = IntervalPartition.from_bounds(part.boundaries, GRID)
        assert again == part

    def test_from_bounds_rejects_gap(self):
        with pytest.raises(InvalidArgument):
            IntervalPartition.from_bounds([[0, 1], [3, 4]], GRID)

    def test_rejects_bad_starts(self):
        with pytest.raises(InvalidArgument):
            IntervalPartition([1, 2], GRID)
        with pytest.raises(InvalidArgument):
            IntervalPartition([0, 3, 2], GRID)

    def test_rejects_unsorted_grid(self):
        with pytest.raises(InvalidData):
            IntervalPartition([0], [0.0, 0.5, 0.25])


class TestMerge:
    """Fusing consecutive intervals."""

    def test_merge_in_place(self):
        part = IntervalPartition.singletons(GRID)
        out = part.merge([[0, 1], [3, 4]])
        assert out is part
        np.testing.assert_array_equal(part.boundaries, [[0, 1], [2, 2], [3, 4]])
        np.testing.assert_array_equal(part.keys, [0, 1, 2])

    def test_merge_copy_leaves_original(self):
        part = IntervalPartition.singletons(GRID)
        out = part.merge([[1, 2, 3]], copy=True)
        assert part.D == 5
        np.testing.assert_array_equal(out.boundaries, [[0, 0], [1, 3], [4, 4]])

    def test_empty_groups_is_identity(self):
        part = IntervalPartition([0, 2], GRID)
        assert part.merge([], copy=True) == part

    def test_table_lists_every_interval(self):
        part = IntervalPartition([0, 2], GRID)
        text = part.table(alpha=[0.0, 1.5])
        assert "t_lo" in text
        assert len(text.splitlines()) == 4
