"""Kernel specifications: sign patterns, Riesz products, test functions."""

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from src.exceptions import ConstructionError, PreconditionError
from src.models.lattice import LatticePoint, SparseSequence


def pattern_matrix(N: int) -> np.ndarray:
    """All sign patterns of {-1,0,1}^N as a (3^N, N) int64 array.

    Rows are in lexicographic order of (-1, 0, 1) per entry, so row 0 is
    (-1,...,-1) and the zero pattern sits in the middle.
    """
    if N < 0:
        raise PreconditionError("pattern length must be non-negative")
    if N == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product((-1, 0, 1), repeat=N)), dtype=np.int64)


@dataclass(frozen=True)
class SignPattern:
    """A pattern xi in {-1,0,1}^N indexing one term of a Riesz expansion."""

    xi: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(x not in (-1, 0, 1) for x in self.xi):
            raise PreconditionError(f"sign pattern entries must be -1, 0 or 1: {self.xi}")

    @property
    def L(self) -> int:
        """Number of nonzero entries."""
        return sum(abs(x) for x in self.xi)

    def M(self, freqs: "SparseSequence | list[LatticePoint]") -> LatticePoint:
        """Frequency sum_j xi_j n_j for a bound frequency list."""
        points = list(freqs)
        if len(points) != len(self.xi):
            raise PreconditionError("pattern length differs from frequency count")
        d = points[0].d
        total = [0] * d
        for x, n in zip(self.xi, points):
            if x:
                for i, c in enumerate(n.coords):
                    total[i] += x * c
        return LatticePoint(tuple(total))

    def truncated(self, length: int) -> "SignPattern":
        """The prefix of the given length."""
        return SignPattern(self.xi[:length])


@dataclass(frozen=True)
class RieszProductSpec:
    """R(t) = prod_j (1 + cos(2*pi*<n_j,t>)) over a sparse frequency list.

    Construction certifies that the consecutive Euclidean norm ratios exceed 3
    and that all 3^N frequencies M(xi) are pairwise distinct.
    """

    freqs: SparseSequence
    d: int

    def __post_init__(self) -> None:
        if len(self.freqs) < 1:
            raise ConstructionError("a Riesz product needs at least one frequency")
        if any(n.d != self.d for n in self.freqs):
            raise ConstructionError("frequency dimension differs from spec dimension")
        if any(n.is_zero for n in self.freqs):
            raise ConstructionError("Riesz frequencies must be nonzero")
        norms = [n.euclid_norm_sq for n in self.freqs]
        for lo, hi in zip(norms, norms[1:]):
            if hi <= 9 * lo:
                raise ConstructionError(
                    f"consecutive norm ratio sqrt({hi}/{lo}) does not exceed 3"
                )
        if self.N > 12:
            raise ConstructionError(f"N={self.N} exceeds the 3^N pattern limit of N <= 12")
        frequencies = self.pattern_frequencies
        distinct = np.unique(frequencies, axis=0)
        if len(distinct) != len(frequencies):
            raise ConstructionError("two sign patterns produce the same frequency M(xi)")

    @classmethod
    def from_points(cls, points: list[LatticePoint], alpha: float = 1.0) -> "RieszProductSpec":
        """Build a spec from raw points (sorted by Euclidean norm)."""
        if not points:
            raise ConstructionError("a Riesz product needs at least one frequency")
        return cls(SparseSequence.from_points(points, alpha), points[0].d)

    @property
    def N(self) -> int:
        """Number of factors."""
        return len(self.freqs)

    @property
    def points(self) -> list[LatticePoint]:
        """The frequencies n_1..n_N."""
        return list(self.freqs)

    @cached_property
    def freq_matrix(self) -> np.ndarray:
        """(N, d) int64 array of the frequencies."""
        return np.array([n.coords for n in self.freqs], dtype=np.int64)

    @cached_property
    def patterns(self) -> np.ndarray:
        """All (3^N, N) sign patterns."""
        return pattern_matrix(self.N)

    @cached_property
    def pattern_frequencies(self) -> np.ndarray:
        """(3^N, d) array of M(xi) for every pattern row."""
        return self.patterns @ self.freq_matrix

    @cached_property
    def pattern_lengths(self) -> np.ndarray:
        """L(xi) for every pattern row."""
        return np.abs(self.patterns).sum(axis=1)

    def prefix(self, length: int) -> "RieszProductSpec | None":
        """Spec over the first ``length`` frequencies, or None when empty."""
        if length == 0:
            return None
        return RieszProductSpec(
            SparseSequence(self.freqs.points[:length], self.freqs.alpha), self.d
        )

    @property
    def max_frequency(self) -> int:
        """Largest max-coordinate over all M(xi) (the expansion degree)."""
        return int(np.abs(self.pattern_frequencies).max())


@dataclass(frozen=True)
class TestPhiSpec:
    """Antiderivative of R - 1 along the dominant axis j0 (1-based)."""

    __test__ = False

    riesz: RieszProductSpec
    j0: int

    def __post_init__(self) -> None:
        if not 1 <= self.j0 <= self.riesz.d:
            raise ConstructionError(f"axis j0={self.j0} outside 1..{self.riesz.d}")
        column = self.riesz.pattern_frequencies[:, self.j0 - 1]
        nonzero_pattern = self.riesz.pattern_lengths > 0
        if np.any((column == 0) & nonzero_pattern):
            raise ConstructionError(
                f"some M(xi) has a zero coordinate on axis {self.j0}; "
                "the antiderivative is undefined"
            )

    @property
    def d(self) -> int:
        """Dimension."""
        return self.riesz.d

    @property
    def N(self) -> int:
        """Number of Riesz factors."""
        return self.riesz.N


@dataclass(frozen=True)
class FejerProductSpec:
    """d-fold tensor product of the Fejer kernel of degree 3^(k+2)."""

    d: int
    k: int

    def __post_init__(self) -> None:
        if self.d < 1 or self.k < 0:
            raise ConstructionError("Fejer product needs d >= 1 and k >= 0")

    @property
    def degree(self) -> int:
        """Fejer degree 3^(k+2)."""
        return 3 ** (self.k + 2)
