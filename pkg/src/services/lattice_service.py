"""Lattice geometry: triadic rings, N-sectors and sparse sequences.

Every ring and sector decision is made in exact integer or rational
arithmetic. Enumeration comes in two forms: ``ring_points`` yields
``LatticePoint`` objects one at a time, and ``ring_blocks`` yields numpy
integer arrays for vectorized sweeps.
"""

import bisect
import itertools
import logging
import math
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from src.config.settings import Budgets, get_budgets
from src.exceptions import DomainError, PreconditionError, ResourceBudgetError
from src.models.lattice import (
    LatticePoint,
    SectorId,
    SectorPartition,
    SparseSequence,
    TriadicRingIndex,
)
from src.models.reports import CertificationReport
from src.utils.numbers import POWERS_OF_3

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_ROWS = 1 << 18


# Rings


def ring_index(n: LatticePoint) -> TriadicRingIndex:
    """Return the ring R_k containing n.

    Args:
        n: Nonzero lattice point.

    Returns:
        The unique k with 3^k <= max_i |n_i| < 3^(k+1).

    Raises:
        DomainError: For the zero vector or coordinates beyond 3^40.
    """
    m = n.max_norm
    if m == 0:
        raise DomainError("the zero vector belongs to no ring")
    k = bisect.bisect_right(POWERS_OF_3, m) - 1
    if k >= len(POWERS_OF_3) - 1:
        raise DomainError(f"max-coordinate {m} beyond the supported 3^40 range")
    return TriadicRingIndex(k)


def ring_indices_many(points: np.ndarray) -> np.ndarray:
    """Vectorized ring_index for an (m, d) array of nonzero points."""
    maxima = np.abs(np.asarray(points, dtype=np.int64)).max(axis=1)
    if np.any(maxima == 0):
        raise DomainError("the zero vector belongs to no ring")
    powers = np.array(POWERS_OF_3[:-1], dtype=np.int64)
    return np.searchsorted(powers, maxima, side="right") - 1


def check_ring_budget(k: int, d: int, budgets: Optional[Budgets] = None) -> int:
    """Return |R_k| or raise when it exceeds the ring budget."""
    budgets = budgets or get_budgets()
    if d > budgets.max_dimension:
        raise ResourceBudgetError(
            f"dimension {d} exceeds budget {budgets.max_dimension}", required=d
        )
    size = TriadicRingIndex(k).cardinality(d)
    if size > budgets.max_ring_points:
        raise ResourceBudgetError(
            f"ring R_{k} in d={d} has {size} points, budget is {budgets.max_ring_points}",
            required=size,
        )
    return size


def _box(radius: int, d: int) -> np.ndarray:
    """All points of [-radius, radius]^d in lexicographic order."""
    axis = np.arange(-radius, radius + 1, dtype=np.int64)
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def shell_blocks(lo: int, hi: int, d: int) -> Iterator[np.ndarray]:
    """Blocks of {n in Z^d : lo <= max_i |n_i| <= hi} in lexicographic order.

    Each block fixes the leading coordinate; the blocks jointly list every
    point exactly once, without any filtering pass.
    """
    if d == 1:
        pos = np.arange(lo, hi + 1, dtype=np.int64)
        neg = -pos[::-1]
        if lo == 0:
            neg = neg[:-1]
        yield np.concatenate([neg, pos])[:, None]
        return
    full = _box(hi, d - 1)
    for x in range(-hi, hi + 1):
        if abs(x) >= lo:
            yield np.column_stack([np.full(len(full), x, dtype=np.int64), full])
        else:
            for sub in shell_blocks(lo, hi, d - 1):
                yield np.column_stack([np.full(len(sub), x, dtype=np.int64), sub])


def ring_blocks(
    k: TriadicRingIndex,
    d: int,
    chunk: int = DEFAULT_BLOCK_ROWS,
    budgets: Optional[Budgets] = None,
) -> Iterator[np.ndarray]:
    """Vectorized enumeration of R_k as (m, d) int64 arrays.

    Args:
        k: Ring index.
        d: Dimension.
        chunk: Largest number of rows per yielded block.
        budgets: Resource limits (defaults to the global budgets).

    Yields:
        Integer arrays whose rows jointly list R_k exactly once.
    """
    if d < 1:
        raise DomainError("dimension must be positive")
    check_ring_budget(k.k, d, budgets)
    for block in shell_blocks(k.lower, k.upper - 1, d):
        for start in range(0, len(block), chunk):
            yield block[start : start + chunk]


def ring_points(k: TriadicRingIndex, d: int) -> Iterator[LatticePoint]:
    """Enumerate R_k, each point once, in lexicographic order."""
    for block in ring_blocks(k, d):
        for row in block.tolist():
            yield LatticePoint(tuple(row))


def orbit_sizes(reps: np.ndarray) -> np.ndarray:
    """Hyperoctahedral orbit size of descending non-negative representatives.

    The size is 2^(nonzero count) * d! / prod(multiplicity!).
    """
    reps = np.asarray(reps, dtype=np.int64)
    m, d = reps.shape
    signs = np.left_shift(1, np.count_nonzero(reps, axis=1)).astype(np.int64)
    denominator = np.ones(m, dtype=np.int64)
    run = np.ones(m, dtype=np.int64)
    for i in range(1, d):
        run = np.where(reps[:, i] == reps[:, i - 1], run + 1, 1)
        denominator *= run
    return signs * (math.factorial(d) // denominator)


def _descending_tails(top: int, length: int) -> np.ndarray:
    """All (c_1 >= ... >= c_length >= 0) with c_1 <= top, as an array."""
    if length == 0:
        return np.zeros((1, 0), dtype=np.int64)
    if length == 1:
        return np.arange(0, top + 1, dtype=np.int64)[:, None]
    parts = []
    for head in range(top + 1):
        rest = _descending_tails(head, length - 1)
        parts.append(np.column_stack([np.full(len(rest), head, dtype=np.int64), rest]))
    return np.concatenate(parts)


def ring_orbits(
    k: TriadicRingIndex, d: int, budgets: Optional[Budgets] = None
) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """One representative per hyperoctahedral orbit of R_k.

    Representatives have descending non-negative coordinates, which also
    makes each one the lexicographically largest point of its orbit.

    Yields:
        Tuples (representatives, squared norms, orbit sizes), one per value
        of the leading coordinate.
    """
    check_ring_budget(k.k, d, budgets)
    if d == 1:
        reps = np.arange(k.lower, k.upper, dtype=np.int64)[:, None]
        yield reps, reps[:, 0] ** 2, np.full(len(reps), 2, dtype=np.int64)
        return
    for head in range(k.lower, k.upper):
        tails = _descending_tails(head, d - 1)
        reps = np.column_stack([np.full(len(tails), head, dtype=np.int64), tails])
        norms_sq = np.einsum("ij,ij->i", reps, reps)
        yield reps, norms_sq, orbit_sizes(reps)


def euclid_bounds_check(n: LatticePoint) -> bool:
    """Check 3^(2k) <= |n|_2^2 <= d * 3^(2(k+1)) in integers, k = ring_index(n)."""
    k = ring_index(n).k
    norm_sq = n.euclid_norm_sq
    return 9**k <= norm_sq <= n.d * 9 ** (k + 1)


def euclid_bounds_many(points: np.ndarray) -> np.ndarray:
    """Vectorized euclid_bounds_check over an (m, d) array."""
    points = np.asarray(points, dtype=np.int64)
    k = ring_indices_many(points)
    if k.max(initial=0) > 17:
        # 9^(k+1) leaves int64 beyond ring 17
        return np.array([euclid_bounds_check(LatticePoint(tuple(r))) for r in points.tolist()])
    norms_sq = np.einsum("ij,ij->i", points, points)
    lower = np.power(np.int64(9), k)
    upper = points.shape[1] * np.power(np.int64(9), k + 1)
    return (lower <= norms_sq) & (norms_sq <= upper)


def euclid_bounds_certify(
    d: int, k_max: int, budgets: Optional[Budgets] = None
) -> CertificationReport:
    """Exact check of the Euclidean ring bounds on every point of R_0 .. R_{k_max}."""
    total = 0
    first_violation: Optional[tuple[int, ...]] = None
    for k in range(k_max + 1):
        for block in ring_blocks(TriadicRingIndex(k), d, budgets=budgets):
            total += len(block)
            ok = euclid_bounds_many(block)
            if first_violation is None and not ok.all():
                first_violation = tuple(int(c) for c in block[int(np.flatnonzero(~ok)[0])])
    if first_violation is not None:
        logger.warning(f"Euclidean ring bound violated at {first_violation}")
    notes = [f"first_violation={first_violation}"] if first_violation is not None else []
    return CertificationReport.from_check(
        "euck",
        {"d": d, "k": f"0..{k_max}"},
        first_violation is None,
        observed={"points": float(total)},
        notes=notes,
    )


# Sectors


def _check_partition_dim(n: LatticePoint, part: SectorPartition) -> None:
    if n.d != part.d:
        raise PreconditionError(f"point dimension {n.d} differs from partition dimension {part.d}")


def bin_index(ratio: Fraction, N: int) -> int:
    """Half-open bin a = min(N, floor(N (r + 1) / 2) + 1) for r in [-1, 1]."""
    return min(N, math.floor(N * (ratio + 1) / 2) + 1)


def bin_center(a: int, N: int) -> Fraction:
    """Bin center theta = (2a - 1)/N - 1."""
    return Fraction(2 * a - 1, N) - 1


def sector_of(n: LatticePoint, part: SectorPartition) -> SectorId:
    """Assign n to its N-sector A_{j,a}.

    Args:
        n: Nonzero lattice point.
        part: The sector partition (d, N).

    Returns:
        Sector with j the smallest dominant axis and one bin per other axis.

    Raises:
        DomainError: For the zero vector.
    """
    if n.is_zero:
        raise DomainError("the zero vector belongs to no sector")
    _check_partition_dim(n, part)
    top = n.max_norm
    j = next(i for i, c in enumerate(n.coords, start=1) if abs(c) == top)
    n_j = n.coord(j)
    bins = tuple(
        bin_index(Fraction(c, n_j), part.N)
        for axis, c in enumerate(n.coords, start=1)
        if axis != j
    )
    return SectorId(j=j, a=bins)


def sector_codes(points: np.ndarray, part: SectorPartition) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sector_of.

    Returns:
        (j, bins): the 1-based dominant axis per row and an (m, d-1) array of
        bin indices, computed with exact integer floor division.
    """
    points = np.asarray(points, dtype=np.int64)
    if points.shape[1] != part.d:
        raise PreconditionError("point dimension differs from partition dimension")
    absolute = np.abs(points)
    if np.any(absolute.max(axis=1) == 0):
        raise DomainError("the zero vector belongs to no sector")
    j = np.argmax(absolute, axis=1)
    rows = np.arange(len(points))
    n_j = points[rows, j]
    bins = np.empty((len(points), part.d - 1), dtype=np.int64)
    for slot in range(part.d - 1):
        # Off-dominant axis number `slot` skips the dominant column.
        axis = np.where(slot < j, slot, slot + 1)
        n_k = points[rows, axis]
        raw = np.floor_divide(part.N * (n_k + n_j), 2 * n_j) + 1
        bins[:, slot] = np.minimum(part.N, raw)
    return j + 1, bins


def encode_sectors(j: np.ndarray, bins: np.ndarray, part: SectorPartition) -> np.ndarray:
    """Integer code (j-1) N^(d-1) + sum (a_i - 1) N^i, unique per SectorId."""
    code = (j - 1) * part.N ** (part.d - 1)
    for slot in range(part.d - 1):
        code = code + (bins[:, slot] - 1) * part.N**slot
    return code


def all_sector_ids(part: SectorPartition) -> list[SectorId]:
    """Every SectorId of the partition, d * N^(d-1) of them."""
    return [
        SectorId(j=j, a=a)
        for j in range(1, part.d + 1)
        for a in itertools.product(range(1, part.N + 1), repeat=part.d - 1)
    ]


def sector_direction(sector: SectorId, part: SectorPartition) -> tuple[Fraction, ...]:
    """Bin-center direction v_{j,a}: 1 on axis j, bin centers elsewhere."""
    direction = []
    for axis in range(1, part.d + 1):
        if axis == sector.j:
            direction.append(Fraction(1))
        else:
            direction.append(bin_center(sector.bin_for_axis(axis), part.N))
    return tuple(direction)


def center_table(part: SectorPartition) -> np.ndarray:
    """sector_direction of every sector as rows indexed by encode_sectors code."""
    table = np.zeros((part.sector_count, part.d), dtype=np.float64)
    for sector in all_sector_ids(part):
        code = (sector.j - 1) * part.N ** (part.d - 1) + sum(
            (a - 1) * part.N**slot for slot, a in enumerate(sector.a)
        )
        table[code] = [float(c) for c in sector_direction(sector, part)]
    return table


def in_sector_closure(n: LatticePoint, sector: SectorId, part: SectorPartition) -> bool:
    """Membership inequality |n_k/n_j - theta_k| <= 1/N for every off-dominant axis."""
    n_j = n.coord(sector.j)
    if n_j == 0 or abs(n_j) != n.max_norm:
        return False
    for axis in range(1, part.d + 1):
        if axis == sector.j:
            continue
        theta = bin_center(sector.bin_for_axis(axis), part.N)
        if abs(Fraction(n.coord(axis), n_j) - theta) > Fraction(1, part.N):
            return False
    return True


def sector_properties_check(part: SectorPartition, radius: int) -> CertificationReport:
    """Exact check of the sector requirements on the box 1 <= max|n_i| <= radius.

    Checks symmetry, that every point lies in the closure inequality of its
    own sector with j a dominant axis, the realized sector count, the
    direction pinching bound 2/N, and the angle to the bin-center direction.
    """
    params = {"d": part.d, "N": part.N, "radius": radius}
    symmetric = True
    inside = True
    dominant = True
    realized: set[int] = set()
    max_sin = 0.0
    max_tan = 0.0
    total = 0
    slots = max(part.d - 1, 1)
    ratio_min = np.full((part.sector_count, slots), np.inf)
    ratio_max = np.full((part.sector_count, slots), -np.inf)
    centers = center_table(part)

    for block in shell_blocks(1, radius, part.d):
        total += len(block)
        j, bins = sector_codes(block, part)
        neg_j, neg_bins = sector_codes(-block, part)
        symmetric &= bool(np.array_equal(j, neg_j) and np.array_equal(bins, neg_bins))
        codes = encode_sectors(j, bins, part)
        realized.update(np.unique(codes).tolist())

        rows = np.arange(len(block))
        n_j = block[rows, j - 1]
        dominant &= bool(np.all(np.abs(n_j) == np.abs(block).max(axis=1)))

        for slot in range(part.d - 1):
            axis = np.where(slot < j - 1, slot, slot + 1)
            n_k = block[rows, axis]
            # |N n_k - (2a - 1 - N) n_j| <= |n_j| is the closure inequality.
            lhs = np.abs(part.N * n_k - (2 * bins[:, slot] - 1 - part.N) * n_j)
            inside &= bool(np.all(lhs <= np.abs(n_j)))
            ratio = n_k / n_j
            np.minimum.at(ratio_min[:, slot], codes, ratio)
            np.maximum.at(ratio_max[:, slot], codes, ratio)

        if part.d > 1:
            scaled = block / n_j[:, None]
            direction = centers[codes]
            along = np.einsum("ij,ij->i", scaled, direction) / np.linalg.norm(direction, axis=1)
            norm_scaled = np.linalg.norm(scaled, axis=1)
            perpendicular = np.sqrt(np.maximum(norm_scaled**2 - along**2, 0.0))
            max_sin = max(max_sin, float((perpendicular / norm_scaled).max()))
            max_tan = max(max_tan, float((perpendicular / np.abs(along)).max()))

    seen = np.isfinite(ratio_min)
    pinching = float((ratio_max - ratio_min)[seen].max(initial=0.0))
    sin_bound = math.sqrt(part.d - 1) / part.N
    holds = (
        symmetric
        and inside
        and dominant
        and len(realized) <= part.sector_count
        and pinching <= 2.0 / part.N + 1e-12
        and max_sin <= sin_bound + 1e-12
    )
    if not holds:
        logger.warning(f"Sector properties failed for d={part.d}, N={part.N}")
    return CertificationReport.from_check(
        "sectors",
        params,
        holds,
        observed={
            "points": float(total),
            "sectors_realized": float(len(realized)),
            "sectors_expected": float(part.sector_count),
            "max_pinching_times_N": pinching * part.N,
            "max_sin_angle": max_sin,
            "max_tan_angle": max_tan,
            "empirical_C": max_tan * part.N,
            "C_reference": math.sqrt(part.d - 1),
        },
        tolerance=1e-12,
        notes=[
            f"symmetric={symmetric}",
            f"closure_inequality={inside}",
            f"dominant_axis={dominant}",
        ],
    )


# Sparse sequences


def is_sparse(seq: Sequence[LatticePoint], alpha: float) -> bool:
    """True iff every consecutive Euclidean norm ratio is >= 3^alpha.

    Integer alpha is decided exactly on squared norms; other values use a
    relative tolerance of 1e-12.
    """
    if not seq:
        raise PreconditionError("sparsity needs a nonempty sequence")
    if any(n.is_zero for n in seq):
        raise PreconditionError("sparse sequences contain nonzero points only")
    norms = [n.euclid_norm_sq for n in seq]
    if float(alpha).is_integer():
        factor = 9 ** int(alpha)
        return all(hi >= factor * lo for lo, hi in zip(norms, norms[1:]))
    target = 3.0**alpha
    return all(
        math.sqrt(hi / lo) >= target * (1 - 1e-12) for lo, hi in zip(norms, norms[1:])
    )


def stride_padding(d: int) -> int:
    """Smallest c with 9^c >= d, so a ring gap of N + 1 + c forces ratio 3^N."""
    c = 0
    while 9**c < d:
        c += 1
    return c


def _validate_split_input(points: Sequence[LatticePoint], N: int) -> list[LatticePoint]:
    if N < 1:
        raise PreconditionError("N must be positive")
    if any(n.is_zero for n in points):
        raise PreconditionError("points must be nonzero")
    rings = [ring_index(n).k for n in points]
    if len(set(rings)) != len(rings):
        raise PreconditionError("two points share a ring index")
    if points:
        part = SectorPartition(points[0].d, N)
        sectors = {sector_of(n, part) for n in points}
        if len(sectors) > 1:
            raise PreconditionError("points span more than one N-sector")
    return sorted(points, key=lambda n: ring_index(n).k)


def _first_fit(ordered: list[LatticePoint], N: int) -> list[list[LatticePoint]]:
    factor = 9**N
    runs: list[list[LatticePoint]] = []
    for n in ordered:
        for run in runs:
            if len(run) < N and n.euclid_norm_sq >= factor * run[-1].euclid_norm_sq:
                run.append(n)
                break
        else:
            runs.append([n])
    return runs


def _stride_classes(ordered: list[LatticePoint], N: int, stride: int) -> list[list[LatticePoint]]:
    runs: list[list[LatticePoint]] = []
    for offset in range(stride):
        members = ordered[offset::stride]
        runs.extend(members[i : i + N] for i in range(0, len(members), N))
    return runs


def split_into_sparse(points: Sequence[LatticePoint], N: int) -> list[SparseSequence]:
    """Partition one-per-ring points of a single sector into N-sparse runs.

    Two strategies are computed and the one with fewer runs is returned
    (first-fit on ties): greedy first-fit on exact norm ratios, and stride
    classes of stride N + 1 + c over the ring order, chopped into runs of
    length N. The stride split guarantees at most #points/N + stride runs.

    Args:
        points: Points with distinct ring indices, all in one N-sector.
        N: Run length and sparsity exponent.

    Returns:
        N-sparse sequences of length <= N jointly partitioning the input.

    Raises:
        PreconditionError: When two points share a ring index.
    """
    ordered = _validate_split_input(points, N)
    if not ordered:
        return []
    stride = N + 1 + stride_padding(ordered[0].d)
    greedy = _first_fit(ordered, N)
    strided = _stride_classes(ordered, N, stride)
    runs = greedy if len(greedy) <= len(strided) else strided
    logger.debug(
        f"Split {len(ordered)} points with N={N}: first-fit {len(greedy)}, "
        f"stride {len(strided)} runs"
    )
    return [SparseSequence(tuple(run), float(N)) for run in runs]


def split_report(points: Sequence[LatticePoint], N: int) -> CertificationReport:
    """Verify the split postconditions: partition, sparsity, length and count."""
    params = {"N": N, "points": len(points)}
    sequences = split_into_sparse(points, N)
    flattened = sorted(p for seq in sequences for p in seq)
    partition = flattened == sorted(points)
    sparse = all(is_sparse(list(seq), N) for seq in sequences)
    lengths = all(1 <= len(seq) <= N for seq in sequences)
    bound = len(points) / N + 2 * N + 1
    count_ok = len(sequences) <= bound
    holds = partition and sparse and lengths and count_ok
    return CertificationReport.from_check(
        "split_sparse",
        params,
        holds,
        observed={"sequences": float(len(sequences)), "count_bound": bound},
        notes=[f"partition={partition}", f"sparse={sparse}", f"lengths={lengths}"],
    )
