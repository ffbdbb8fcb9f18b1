"""Tests for lattice value types."""

import pytest

from src.exceptions import DomainError, PreconditionError
from src.models.lattice import (
    LatticePoint,
    SectorId,
    SectorPartition,
    SparseSequence,
    TriadicRingIndex,
)
from tests.fixtures.sample_data import create_point


class TestLatticePoint:
    """Test LatticePoint."""

    def test_norms(self):
        """Verify exact and floating norms."""
        n = create_point(3, -4)

        assert n.euclid_norm_sq == 25
        assert n.euclid_norm == 5.0
        assert n.max_norm == 4
        assert str(n) == "(3,-4)"

    def test_one_based_coordinates(self):
        """Verify coord(1) is the first coordinate."""
        n = LatticePoint.of(7, 8)

        assert n.coord(1) == 7
        assert n.coord(2) == 8
        with pytest.raises(PreconditionError):
            n.coord(0)

    def test_arithmetic(self):
        """Verify negation, addition and scaling."""
        a, b = create_point(1, 2), create_point(3, -1)

        assert a + b == create_point(4, 1)
        assert a - b == create_point(-2, 3)
        assert -a == create_point(-1, -2)
        assert a.scaled(3) == create_point(3, 6)

    def test_dimension_mismatch(self):
        """Verify points of different dimension cannot be added."""
        with pytest.raises(PreconditionError):
            create_point(1, 2) + create_point(1, 2, 3)

    def test_empty_point_rejected(self):
        """Verify a point needs a coordinate."""
        with pytest.raises(DomainError):
            LatticePoint(())

    def test_points_are_hashable_and_ordered(self):
        """Verify points work as dict keys and sort lexicographically."""
        points = [create_point(2, 0), create_point(-1, 5), create_point(2, -3)]

        assert sorted(points)[0] == create_point(-1, 5)
        assert len(set(points + points)) == 3


class TestTriadicRingIndex:
    """Test TriadicRingIndex."""

    def test_bounds(self):
        """Verify 3^k <= max|n_i| < 3^(k+1)."""
        ring = TriadicRingIndex(2)

        assert (ring.lower, ring.upper) == (9, 27)
        assert ring.contains(create_point(9, -26))
        assert not ring.contains(create_point(27, 0))

    @pytest.mark.parametrize("k,d,expected", [(0, 1, 4), (0, 2, 24), (1, 2, 264), (0, 3, 124)])
    def test_cardinality(self, k, d, expected):
        """Verify |R_k| = (2 * 3^(k+1) - 1)^d - (2 * 3^k - 1)^d."""
        assert TriadicRingIndex(k).cardinality(d) == expected

    def test_negative_index_rejected(self):
        """Verify k >= 0."""
        with pytest.raises(DomainError):
            TriadicRingIndex(-1)


class TestSectors:
    """Test SectorId and SectorPartition."""

    def test_bin_for_axis_skips_dominant(self):
        """Verify bins are stored for off-dominant axes in increasing order."""
        sector = SectorId(2, (1, 3))

        assert sector.bin_for_axis(1) == 1
        assert sector.bin_for_axis(3) == 3
        assert str(sector) == "A[2;1,3]"
        with pytest.raises(PreconditionError):
            sector.bin_for_axis(2)

    def test_sector_count(self):
        """Verify d * N^(d-1) sectors."""
        assert SectorPartition(3, 4).sector_count == 48
        assert SectorPartition(1, 5).sector_count == 1

    @pytest.mark.parametrize("d,N", [(0, 2), (2, 0)])
    def test_invalid_partition(self, d, N):
        """Verify d and N must be positive."""
        with pytest.raises(DomainError):
            SectorPartition(d, N)


class TestSparseSequence:
    """Test SparseSequence."""

    def test_from_points_sorts_by_norm(self):
        """Verify from_points orders by Euclidean norm."""
        seq = SparseSequence.from_points([create_point(9, 0), create_point(1, 0)], 1.0)

        assert [p.coords for p in seq] == [(1, 0), (9, 0)]
        assert len(seq) == 2
        assert seq.d == 2

    def test_descending_rejected(self):
        """Verify the direct constructor requires ascending norms."""
        with pytest.raises(PreconditionError):
            SparseSequence((create_point(9, 0), create_point(1, 0)))
