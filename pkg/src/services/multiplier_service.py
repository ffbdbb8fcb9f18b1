"""Diagonal multipliers on T^d: ring sums, ring maxima and the estimates built on them.

Ring sweeps take one of three paths. Table symbols visit only their
support, radial symbols visit one representative per hyperoctahedral
orbit weighted by the orbit size, and every other symbol visits every
ring point in vectorized blocks. All three visit points in lexicographic
order, so ties in a ring maximum resolve to the lexicographically
largest point.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Iterator, Optional, Sequence

import numpy as np
from scipy.linalg import svdvals

from src.config.settings import Budgets, get_budgets
from src.exceptions import PreconditionError
from src.models.kernels import TestPhiSpec
from src.models.lattice import LatticePoint, SectorId, SectorPartition, TriadicRingIndex
from src.models.reports import CertificationReport, CertificationStatus
from src.models.symbols import (
    Boundedness,
    DiagnosticsConfig,
    FactorizationWitness,
    MultiplierSymbol,
    RingStats,
)
from src.models.trig_poly import GridSpec, TrigPoly
from src.services import kernel_service, lattice_service, symbol_service, trigpoly_service

logger = logging.getLogger(__name__)

REL_TOL = 1e-12
FLATNESS_FACTOR = 4.0

RingChunk = tuple[np.ndarray, np.ndarray, np.ndarray, list[np.ndarray]]


def _table_chunk(sym: MultiplierSymbol, k: int, d: int) -> Iterator[RingChunk]:
    sym.check_dimension(d)
    assert sym.table is not None
    points = sorted(p for p in sym.table if len(p) == d)
    if not points:
        return
    array = np.array(points, dtype=np.int64)
    array = array[lattice_service.ring_indices_many(array) == k]
    if len(array):
        norms_sq = np.einsum("ij,ij->i", array, array)
        yield array, norms_sq, np.ones(len(array), dtype=np.int64), [np.abs(sym.eval_many(array))]


def ring_magnitudes(
    symbols: Sequence[MultiplierSymbol],
    k: int,
    d: int,
    budgets: Optional[Budgets] = None,
) -> Iterator[RingChunk]:
    """Stream |lambda_n| over R_k for one or more symbols at once.

    Yields:
        (points, squared norms, multiplicities, [|values| per symbol]) in
        lexicographic point order.
    """
    for sym in symbols:
        sym.check_dimension(d)
    ring = TriadicRingIndex(k)
    if len(symbols) == 1 and symbols[0].is_table:
        yield from _table_chunk(symbols[0], k, d)
        return
    if all(sym.is_radial for sym in symbols):
        for reps, norms_sq, sizes in lattice_service.ring_orbits(ring, d, budgets):
            yield reps, norms_sq, sizes, [sym.radial_profile(norms_sq) for sym in symbols]
        return
    for block in lattice_service.ring_blocks(ring, d, budgets=budgets):
        norms_sq = np.einsum("ij,ij->i", block, block)
        weights = np.ones(len(block), dtype=np.int64)
        yield block, norms_sq, weights, [np.abs(sym.eval_many(block)) for sym in symbols]


def ring_stats(
    sym: MultiplierSymbol, k: int, p: float, d: int, budgets: Optional[Budgets] = None
) -> RingStats:
    """Sum of (|lambda_n|/|n|_2)^p' over R_k and its maximum mu_k.

    Args:
        sym: Symbol.
        k: Ring index.
        p: Exponent in (1, 2]; p' = p / (p - 1).
        d: Dimension.
        budgets: Resource limits.

    Returns:
        RingStats; argmax_point is None when mu_k = 0.

    Raises:
        ResourceBudgetError: When R_k is too large to enumerate.
    """
    p_prime = trigpoly_service.dual_exponent(p)
    total = 0.0
    best = 0.0
    best_point: Optional[LatticePoint] = None
    for points, norms_sq, weights, (magnitudes,) in ring_magnitudes([sym], k, d, budgets):
        ratios = magnitudes / np.sqrt(norms_sq)
        total += float(np.sum(weights * ratios**p_prime))
        top = float(ratios.max())
        if top > 0 and top >= best:
            last = int(np.flatnonzero(ratios == top)[-1])
            best = top
            best_point = LatticePoint(tuple(int(c) for c in points[last]))
    return RingStats(
        k=k,
        p=p,
        ring_sum=total,
        mu_k=best,
        argmax_point=best_point,
        count=TriadicRingIndex(k).cardinality(d),
    )


def ring_sweep(
    sym: MultiplierSymbol,
    ks: Sequence[int],
    p: float,
    d: int,
    budgets: Optional[Budgets] = None,
    workers: int = 1,
) -> list[RingStats]:
    """ring_stats for several rings, in parallel over k when workers > 1."""
    if workers <= 1 or len(ks) <= 1:
        return [ring_stats(sym, k, p, d, budgets) for k in ks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda k: ring_stats(sym, k, p, d, budgets), ks))


def ring_power_sums(
    sym: MultiplierSymbol,
    k: int,
    d: int,
    exponents: Sequence[float],
    norm_power: float = 1.0,
    budgets: Optional[Budgets] = None,
) -> list[float]:
    """sum_{n in R_k} (|lambda_n| / |n|_2^norm_power)^e for each exponent e."""
    totals = [0.0] * len(exponents)
    for _, norms_sq, weights, (magnitudes,) in ring_magnitudes([sym], k, d, budgets):
        base = magnitudes / np.asarray(norms_sq, dtype=np.float64) ** (norm_power / 2)
        for i, e in enumerate(exponents):
            totals[i] += float(np.sum(weights * base**e))
    return totals


def boundedness_refusal(
    claim_id: str,
    params: dict,
    sym: MultiplierSymbol,
    p: float,
    d: int,
    negative_control: bool,
) -> Optional[CertificationReport]:
    """A refused report for symbols flagged unbounded, unless run as a control."""
    flag = sym.boundedness(p, d)
    if flag is Boundedness.NO and not negative_control:
        logger.warning(f"Refusing {claim_id} for unbounded symbol {sym.name} (p={p}, d={d})")
        return CertificationReport(
            claim_id,
            params,
            CertificationStatus.REFUSED,
            notes=[f"symbol {sym.name} is flagged unbounded: {sym.citation}"],
        )
    return None


def _finish(report: CertificationReport, negative_control: bool) -> CertificationReport:
    return report.as_control() if negative_control else report


# Per-ring estimate


def krok1_flatness_certify(
    sym: MultiplierSymbol,
    p: float,
    d: int,
    k_range: Sequence[int],
    budgets: Optional[Budgets] = None,
    negative_control: bool = False,
    workers: int = 1,
) -> CertificationReport:
    """Empirical k-independence of the per-ring sums.

    Passes iff max_k ring_sum <= 4 * max(median_k ring_sum, ring_sum(k_min)).
    A heuristic label, never a proof of boundedness.
    """
    params = {"symbol": sym.name, "p": p, "d": d, "k": f"{min(k_range)}..{max(k_range)}"}
    refused = boundedness_refusal("krok1", params, sym, p, d, negative_control)
    if refused is not None:
        return refused
    stats = ring_sweep(sym, sorted(k_range), p, d, budgets, workers)
    sums = [s.ring_sum for s in stats]
    reference = max(float(np.median(sums)), sums[0])
    worst = max(sums)
    holds = worst <= FLATNESS_FACTOR * reference
    if not holds and not negative_control:
        logger.warning(f"krok1 flatness failed for {sym.name}: max {worst}, reference {reference}")
    report = CertificationReport.from_check(
        "krok1",
        params,
        holds,
        observed={"max_ring_sum": worst, "reference": reference, "C": worst},
        series={"ring_sum": sums, "mu": [s.mu_k for s in stats]},
        notes=["heuristic: max <= 4 * max(median, first ring sum)"],
    )
    return _finish(report, negative_control)


def krok1_chain_certify(
    sym: MultiplierSymbol,
    p: float,
    d: int,
    k: int,
    oversampling: float = 4.0,
    budgets: Optional[Budgets] = None,
) -> CertificationReport:
    """The per-ring chain on the product Fejer test function phi.

    Checks ||T phi||_p >= ||lambda phi^||_{p'} >= (2/3)^d (sum_{R_k} |lambda_n|^p')^(1/p')
    and sum_{R_k} (|lambda_n|/|n|_2)^p' <= 3^(-p'k) (3/2)^(dp') ||T phi||_p^p'.
    Reports C(p, d) = ring sum / (||T phi||_p / ||phi||_{1,1})^p'.
    """
    params = {"symbol": sym.name, "p": p, "d": d, "k": k}
    refused = boundedness_refusal("krok1_chain", params, sym, p, d, False)
    if refused is not None:
        return refused
    budgets = budgets or get_budgets()
    p_prime = trigpoly_service.dual_exponent(p)

    phi = kernel_service.product_fejer(d, k, budgets)
    t_phi = symbol_service.apply(sym, phi)
    g = trigpoly_service.choose_quadrature(t_phi, oversampling, budgets)
    norm = trigpoly_service.lp_norm(t_phi, p, g, budgets)
    coeff_dual = trigpoly_service.fourier_coeff_lq(t_phi, p_prime)
    lam_sum, ratio_sum = (
        ring_power_sums(sym, k, d, [p_prime], 0.0, budgets)[0],
        ring_power_sums(sym, k, d, [p_prime], 1.0, budgets)[0],
    )
    ring_lower = (2 / 3) ** d * lam_sum ** (1 / p_prime)

    tol = norm.tolerance
    hausdorff_young = coeff_dual <= norm.value + tol
    fejer_floor = ring_lower <= coeff_dual * (1 + REL_TOL)
    scale = 3.0 ** (-p_prime * k) * 1.5 ** (d * p_prime)
    upper = scale * (norm.value + tol) ** p_prime
    ring_bound = ratio_sum <= upper * (1 + REL_TOL)

    w11 = kernel_service.fejer_w11(d, k, oversampling, budgets).observed["w11_normalized"]
    constant = ratio_sum / (norm.value / w11) ** p_prime if norm.value > 0 else 0.0
    return CertificationReport.from_check(
        "krok1_chain",
        params,
        hausdorff_young and fejer_floor and ring_bound,
        observed={
            "lp_norm": norm.value,
            "coeff_norm": coeff_dual,
            "ring_lower": ring_lower,
            "ring_sum": ratio_sum,
            "ring_upper": upper,
            "phi_w11": w11,
            "C_p_d": constant,
            "error_hint": norm.error_hint,
        },
        tolerance=tol,
        notes=[
            f"hausdorff_young={hausdorff_young}",
            f"fejer_floor={fejer_floor}",
            f"ring_bound={ring_bound}",
            f"method={norm.method.value}",
        ],
    )


# Schatten norms of diagonal operators


def schatten_partial_sums(
    sym: MultiplierSymbol, p: float, K: int, d: int, budgets: Optional[Budgets] = None
) -> list[float]:
    """Cumulative sum_{ring(n) <= k} |lambda_n|^p for k = 0..K."""
    if p <= 0:
        raise PreconditionError(f"Schatten exponents must be positive, got {p}")
    running = 0.0
    sums = []
    for k in range(K + 1):
        running += ring_power_sums(sym, k, d, [p], 0.0, budgets)[0]
        sums.append(running)
    return sums


def schatten_partial(
    sym: MultiplierSymbol, p: float, K: int, d: int, budgets: Optional[Budgets] = None
) -> float:
    """(sum_{ring(n) <= K} |lambda_n|^p)^(1/p), the truncated p-Schatten norm."""
    return schatten_partial_sums(sym, p, K, d, budgets)[-1] ** (1 / p)


def _first_points(d: int, count: int) -> list[tuple[int, ...]]:
    points: list[tuple[int, ...]] = []
    k = 0
    while len(points) < count:
        for block in lattice_service.ring_blocks(TriadicRingIndex(k), d):
            points.extend(tuple(row) for row in block.tolist())
        k += 1
    return points[:count]


def schatten_crosscheck(
    sym: MultiplierSymbol, d: int, count: int = 50, budgets: Optional[Budgets] = None
) -> CertificationReport:
    """Singular values of T on the first ``count`` characters vs sorted |lambda|.

    The matrix <T e_m, e_n> is assembled from grid samples of T e_m and an
    FFT, so the check covers apply as well as the diagonal identity.
    """
    points = _first_points(d, count)
    degree = max(max(abs(c) for c in pt) for pt in points)
    g = GridSpec.for_degree(degree, 4.0)
    index = tuple(np.array(points, dtype=np.int64).T % g.M)
    matrix = np.zeros((count, count), dtype=np.complex128)
    for column, m in enumerate(points):
        samples = trigpoly_service.evaluate_on_grid(
            symbol_service.apply(sym, TrigPoly.character(m)), g, budgets
        )
        spectrum = np.fft.fftn(samples.reshape((g.M,) * d)) / g.M**d
        matrix[:, column] = spectrum[index]
    singular = svdvals(matrix)
    expected = np.sort(np.abs(sym.eval_many(np.array(points, dtype=np.int64))))[::-1]
    deviation = float(np.max(np.abs(singular - expected)))
    tolerance = 1e-10 * max(1.0, float(expected.max(initial=0.0)))
    return CertificationReport.from_check(
        "schatten_diagonal",
        {"symbol": sym.name, "d": d, "count": count},
        deviation <= tolerance,
        observed={"max_deviation": deviation, "largest": float(expected.max(initial=0.0))},
        tolerance=tolerance,
    )


# Factorization


def compose_factorization(
    w: FactorizationWitness,
    p: float,
    d: int,
    K_max: int,
    budgets: Optional[Budgets] = None,
) -> CertificationReport:
    """Termwise check of sum |lambda_n|^p <= ||B||^p sum (|alpha_n|/|n|_2)^p, lambda = alpha*beta.

    The witness invariant |beta_n| |n|_2 <= ||B|| is checked on every
    enumerated point; the first violation fails the report and is named.
    """
    params = {"witness": w.name, "p": p, "d": d, "K": K_max}
    composed = symbol_service.product_symbol(w.alpha, w.beta)
    bound_p = w.normB_bound**p
    lhs = rhs = 0.0
    termwise = True
    for k in range(K_max + 1):
        for points, norms_sq, weights, (alpha, beta, lam) in ring_magnitudes(
            [w.alpha, w.beta, composed], k, d, budgets
        ):
            norms = np.sqrt(norms_sq)
            witness = beta * norms <= w.normB_bound * (1 + REL_TOL)
            if not witness.all():
                bad = points[int(np.flatnonzero(~witness)[0])]
                point = LatticePoint(tuple(int(c) for c in bad))
                logger.warning(f"Witness {w.name} violated at {point}")
                return CertificationReport.from_check(
                    "factorization", params, False, notes=[f"witness violated at {point}"]
                )
            left = lam**p
            right = bound_p * (alpha / norms) ** p
            termwise &= bool(np.all(left <= right * (1 + REL_TOL)))
            lhs += float(np.sum(weights * left))
            rhs += float(np.sum(weights * right))
    return CertificationReport.from_check(
        "factorization",
        params,
        termwise,
        observed={"lhs": lhs, "rhs": rhs, "gap": rhs - lhs},
        tolerance=REL_TOL * max(rhs, 1.0),
        notes=[f"composed={composed.name}"],
    )


# Sparse sequences


def pre_krok2_certify(
    sym: MultiplierSymbol,
    spec: TestPhiSpec,
    p: float,
    oversampling: float = 4.0,
    budgets: Optional[Budgets] = None,
    seed: int = 0,
    negative_control: bool = False,
) -> CertificationReport:
    """The sparse-sequence chain on the Riesz-product test function.

    With LHS = sum_i (|lambda_{n_i}|/|n_i|_2)^p', checks
    ||T phi||_p >= ||(T phi)^||_p' >= (sum_{L(xi)=1} |(T phi)^(M(xi))|^p')^(1/p')
    >= LHS^(1/p') / (4 pi), and that LHS recovered from the L(xi)=1
    coefficients matches the direct value.
    """
    params = {"symbol": sym.name, "p": p, "d": spec.d, "N": spec.N, "j0": spec.j0}
    refused = boundedness_refusal("pre_krok2", params, sym, p, spec.d, negative_control)
    if refused is not None:
        return refused
    budgets = budgets or get_budgets()
    p_prime = trigpoly_service.dual_exponent(p)
    points = spec.riesz.points
    array = np.array([n.coords for n in points], dtype=np.int64)
    norms = np.sqrt(np.einsum("ij,ij->i", array, array).astype(np.float64))
    lam = np.abs(sym.eval_many(array))
    lhs = float(np.sum((lam / norms) ** p_prime))

    phi = kernel_service.test_phi(spec, budgets)
    t_phi = symbol_service.apply(sym, phi)
    g = trigpoly_service.choose_quadrature(t_phi, oversampling, budgets, seed)
    norm = trigpoly_service.lp_norm(t_phi, p, g, budgets)
    coeff_dual = trigpoly_service.fourier_coeff_lq(t_phi, p_prime)

    singles = [
        tuple(int(c) for c in freq)
        for freq, length in zip(spec.riesz.pattern_frequencies, spec.riesz.pattern_lengths)
        if length == 1
    ]
    restricted = sum(abs(t_phi.coeff(f)) ** p_prime for f in singles) ** (1 / p_prime)
    recovered = sum(
        (abs(t_phi.coeff(n.coords)) * 4 * math.pi * abs(n.coord(spec.j0)) / n.euclid_norm)
        ** p_prime
        for n in points
    )
    floor = lhs ** (1 / p_prime) / (4 * math.pi)

    tol = norm.tolerance
    chain = (
        coeff_dual <= norm.value + tol
        and restricted <= coeff_dual * (1 + REL_TOL)
        and floor <= restricted * (1 + REL_TOL)
    )
    identity = math.isclose(recovered, lhs, rel_tol=1e-9, abs_tol=1e-300)
    w11 = trigpoly_service.sobolev_norm_11(phi, g, normalized=True, budgets=budgets)
    ratio = lhs / norm.value**p_prime if norm.value > 0 else 0.0
    report = CertificationReport.from_check(
        "pre_krok2",
        params,
        chain and identity,
        observed={
            "lhs": lhs,
            "lhs_from_coefficients": recovered,
            "lp_norm": norm.value,
            "coeff_norm": coeff_dual,
            "restricted_norm": restricted,
            "floor": floor,
            "ratio": ratio,
            "phi_w11": w11.value,
            "K_emp": lhs * (w11.value / norm.value) ** p_prime if norm.value > 0 else 0.0,
            "error_hint": norm.error_hint,
        },
        tolerance=tol,
        notes=[f"method={norm.method.value}", f"identity={identity}"],
    )
    return _finish(report, negative_control)


def rearrange_nonincreasing(mu: Sequence[float]) -> list[int]:
    """Permutation sigma with mu[sigma[0]] >= mu[sigma[1]] >= ...; ties by index."""
    return sorted(range(len(mu)), key=lambda i: -mu[i])


def krok2_counting_certify(
    sym: MultiplierSymbol, cfg: DiagnosticsConfig, budgets: Optional[Budgets] = None
) -> CertificationReport:
    """The counting argument over the first N^(d+1) rings.

    Takes the ring argmax points, orders mu non-increasingly, buckets the
    points by N-sector, splits each bucket into N-sparse runs and bounds
    sum mu^p' by K_emp * N^d with K_emp the largest per-run sum. The
    configuration must cover those rings, so K_max + 1 >= N^(d+1).
    """
    N, d = cfg.N, cfg.d
    count = N ** (d + 1)
    if cfg.K_max + 1 < count:
        raise PreconditionError(
            f"counting needs rings 0..{count - 1} but K_max={cfg.K_max} (N={N}, d={d})"
        )
    params = {"symbol": sym.name, "p": cfg.p, "d": d, "N": N}
    p_prime = cfg.p_prime
    stats = [ring_stats(sym, k, cfg.p, d, budgets) for k in range(count)]
    mu = [s.mu_k for s in stats]
    sigma = rearrange_nonincreasing(mu)
    permutation = sorted(sigma) == list(range(count))

    part = SectorPartition(d, N)
    buckets: dict[SectorId, list[LatticePoint]] = {}
    for k in sigma:
        point = stats[k].argmax_point
        if point is not None:
            buckets.setdefault(lattice_service.sector_of(point, part), []).append(point)

    run_sums: list[float] = []
    accounting = 0.0
    runs = 0
    for points in buckets.values():
        sequences = lattice_service.split_into_sparse(points, N)
        runs += len(sequences)
        accounting += len(points) / N + 2 * N + 1
        for seq in sequences:
            run_sums.append(
                sum((stats[lattice_service.ring_index(n).k].mu_k) ** p_prime for n in seq)
            )

    total = sum(m**p_prime for m in mu)
    k_emp = max(run_sums, default=0.0)
    placed = sum(len(points) for points in buckets.values())
    nonzero = sum(1 for s in stats if s.argmax_point is not None)
    counting = placed == nonzero and len(buckets) <= part.sector_count and runs <= accounting
    bound = k_emp * N**d
    holds = permutation and counting and total <= bound * (1 + REL_TOL)
    return CertificationReport.from_check(
        "r1",
        params,
        holds,
        observed={
            "sum_mu_pprime": total,
            "K_emp": k_emp,
            "bound": bound,
            "runs": float(runs),
            "run_bound": accounting,
            "sectors_realized": float(len(buckets)),
            "sectors_total": float(part.sector_count),
            "rings": float(count),
        },
        series={"mu": mu, "sigma": [float(i) for i in sigma], "run_sums": run_sums},
        notes=[f"permutation={permutation}", f"counting={counting}"],
    )
