"""Lattice geometry value types: points, rings, sectors, sparse sequences."""

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from src.exceptions import DomainError, PreconditionError


@dataclass(frozen=True, order=True)
class LatticePoint:
    """Integer frequency vector in Z^d.

    Coordinates are 1-based in the public API (``coord(1)`` is n^(1)),
    matching how axes are numbered in sector ids.
    """

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) < 1:
            raise DomainError("a lattice point needs at least one coordinate")
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    @classmethod
    def of(cls, *coords: int) -> "LatticePoint":
        """Build a point from positional coordinates."""
        return cls(tuple(coords))

    @property
    def d(self) -> int:
        """Dimension of the ambient lattice."""
        return len(self.coords)

    def coord(self, i: int) -> int:
        """Return the i-th coordinate n^(i), 1-based."""
        if not 1 <= i <= self.d:
            raise PreconditionError(f"axis {i} outside 1..{self.d}")
        return self.coords[i - 1]

    @property
    def is_zero(self) -> bool:
        """True for the origin."""
        return all(c == 0 for c in self.coords)

    @property
    def euclid_norm_sq(self) -> int:
        """Exact squared Euclidean norm |n|_2^2."""
        return sum(c * c for c in self.coords)

    @property
    def euclid_norm(self) -> float:
        """Euclidean norm |n|_2 (floating)."""
        return float(self.euclid_norm_sq) ** 0.5

    @property
    def max_norm(self) -> int:
        """Max-coordinate norm max_i |n_i|."""
        return max(abs(c) for c in self.coords)

    def __neg__(self) -> "LatticePoint":
        return LatticePoint(tuple(-c for c in self.coords))

    def __add__(self, other: "LatticePoint") -> "LatticePoint":
        if self.d != other.d:
            raise PreconditionError("dimension mismatch")
        return LatticePoint(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticePoint") -> "LatticePoint":
        return self + (-other)

    def scaled(self, factor: int) -> "LatticePoint":
        """Multiply every coordinate by an integer factor."""
        return LatticePoint(tuple(factor * c for c in self.coords))

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True, order=True)
class TriadicRingIndex:
    """Index k of the triadic ring R_k = {n : 3^k <= max_i |n_i| < 3^(k+1)}."""

    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise DomainError(f"ring index must be non-negative, got {self.k}")

    def __int__(self) -> int:
        return self.k

    @property
    def lower(self) -> int:
        """Smallest max-coordinate in the ring, 3^k."""
        return 3**self.k

    @property
    def upper(self) -> int:
        """Exclusive upper bound on the max-coordinate, 3^(k+1)."""
        return 3 ** (self.k + 1)

    def contains(self, n: LatticePoint) -> bool:
        """Membership test n in R_k."""
        return self.lower <= n.max_norm < self.upper

    def cardinality(self, d: int) -> int:
        """Exact number of lattice points in R_k for dimension d."""
        return (2 * self.upper - 1) ** d - (2 * self.lower - 1) ** d


@dataclass(frozen=True, order=True)
class SectorId:
    """Identifier of an N-sector A_{j,a}.

    ``j`` is the dominant axis (1-based) and ``a`` holds one bin index in
    1..N for each of the d-1 off-dominant axes, in increasing axis order.
    The dominant-axis bin is forced (its ratio is always 1) and is not stored.
    """

    j: int
    a: tuple[int, ...]

    def bin_for_axis(self, axis: int) -> int:
        """Bin index a_axis for an off-dominant axis (1-based)."""
        if axis == self.j:
            raise PreconditionError("the dominant axis carries no bin index")
        position = axis - 1 if axis < self.j else axis - 2
        return self.a[position]

    def __str__(self) -> str:
        bins = ",".join(str(b) for b in self.a)
        return f"A[{self.j};{bins}]"


@dataclass(frozen=True)
class SectorPartition:
    """The N-sector decomposition of Z^d minus the origin."""

    d: int
    N: int

    def __post_init__(self) -> None:
        if self.d < 1:
            raise DomainError("dimension must be positive")
        if self.N < 1:
            raise DomainError("sector granularity N must be positive")

    @property
    def sector_count(self) -> int:
        """Number of distinct sectors, d * N^(d-1)."""
        return self.d * self.N ** (self.d - 1)


@dataclass(frozen=True)
class SparseSequence:
    """Lattice points ordered by Euclidean norm with growth ratio >= 3^alpha."""

    points: tuple[LatticePoint, ...]
    alpha: float = field(default=1.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(self.points))
        norms = [p.euclid_norm_sq for p in self.points]
        if any(b < a for a, b in zip(norms, norms[1:])):
            raise PreconditionError("sparse sequence must be ascending in Euclidean norm")

    @classmethod
    def from_points(cls, points: Sequence[LatticePoint], alpha: float) -> "SparseSequence":
        """Build a sequence, sorting the points by Euclidean norm."""
        return cls(tuple(sorted(points, key=lambda p: (p.euclid_norm_sq, p.coords))), alpha)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[LatticePoint]:
        return iter(self.points)

    @property
    def d(self) -> int:
        """Dimension of the points."""
        return self.points[0].d
