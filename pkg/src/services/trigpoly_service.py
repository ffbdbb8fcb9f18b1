"""Evaluation and norms of trigonometric polynomials on T^d.

L_p norms are Riemann sums on a uniform grid (exact for polynomials when
p = 2 and the grid is not undersampled), with one refinement step giving
the error hint. When a dense grid would not fit the budget the norm is
estimated on scrambled Sobol points instead.
"""

import logging
import math
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy.stats import qmc

from src.config.settings import Budgets, get_budgets
from src.exceptions import DomainError, PreconditionError, ResourceBudgetError
from src.models.reports import CertificationReport
from src.models.trig_poly import (
    GridSpec,
    NormMethod,
    NormReport,
    QuadratureSpec,
    SampleSpec,
    TrigPoly,
)

logger = logging.getLogger(__name__)

MIN_NORM_OVERSAMPLING = 4.0
POINT_CHUNK = 1 << 14


def coefficient_arrays(f: TrigPoly) -> tuple[np.ndarray, np.ndarray]:
    """Frequencies as a (t, d) int64 array and full coefficients as complex."""
    full = f.full_coefficients()
    if not full:
        return np.zeros((0, f.d), dtype=np.int64), np.zeros(0, dtype=np.complex128)
    freqs = np.array(list(full), dtype=np.int64)
    values = np.array(list(full.values()), dtype=np.complex128)
    return freqs, values


def check_grid_budget(M: int, d: int, budgets: Optional[Budgets] = None) -> None:
    """Raise ResourceBudgetError when an M^d grid is too large."""
    budgets = budgets or get_budgets()
    total = M**d
    if M > budgets.grid_axis_limit(d) or total > budgets.max_grid_points:
        raise ResourceBudgetError(
            f"grid with M={M} in d={d} needs {total} samples "
            f"(axis limit {budgets.grid_axis_limit(d)}, total {budgets.max_grid_points})",
            required=total,
        )


def evaluate_on_grid(
    f: TrigPoly, g: GridSpec, budgets: Optional[Budgets] = None
) -> np.ndarray:
    """Sample f at t = (m_1/M, ..., m_d/M).

    Coefficients are placed at n mod M and transformed with an inverse FFT.

    Args:
        f: Polynomial to evaluate.
        g: Grid; M must be at least 2 * degree + 1.
        budgets: Resource limits.

    Returns:
        Complex array of shape (M,) * d indexed by (m_1, ..., m_d).

    Raises:
        PreconditionError: When the grid is undersampled.
    """
    if g.M < 2 * f.degree + 1:
        raise PreconditionError(
            f"grid M={g.M} undersamples degree {f.degree} (needs {2 * f.degree + 1})"
        )
    check_grid_budget(g.M, f.d, budgets)
    spectrum = np.zeros((g.M,) * f.d, dtype=np.complex128)
    freqs, values = coefficient_arrays(f)
    if len(values):
        np.add.at(spectrum, tuple((freqs % g.M).T), values)
    return np.fft.ifftn(spectrum) * g.M**f.d


def grid_points(g: GridSpec, d: int) -> np.ndarray:
    """The grid as an (M^d, d) array of points, in C order of evaluate_on_grid."""
    axis = np.arange(g.M) / g.M
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def evaluate_at_points(f: TrigPoly, points: np.ndarray) -> np.ndarray:
    """Direct summation sum_n f^(n) exp(2 pi i <n, t>) at arbitrary points.

    Args:
        f: Polynomial.
        points: (m, d) array of points of [0, 1)^d.

    Returns:
        Complex array of length m.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if points.shape[1] != f.d:
        raise PreconditionError("point dimension differs from polynomial dimension")
    freqs, values = coefficient_arrays(f)
    out = np.zeros(len(points), dtype=np.complex128)
    if not len(values):
        return out
    for start in range(0, len(points), POINT_CHUNK):
        chunk = points[start : start + POINT_CHUNK]
        phases = chunk @ freqs.T.astype(np.float64)
        out[start : start + POINT_CHUNK] = np.exp(2j * np.pi * phases) @ values
    return out


def sobol_points(spec: SampleSpec, d: int) -> np.ndarray:
    """Scrambled Sobol points of size 2^log2_points."""
    engine = qmc.Sobol(d=d, scramble=True, seed=spec.seed)
    return engine.random_base2(m=spec.log2_points)


def choose_quadrature(
    f: TrigPoly,
    oversampling: float = 8.0,
    budgets: Optional[Budgets] = None,
    seed: int = 0,
) -> QuadratureSpec:
    """Pick a dense grid when it and its refinement fit the budget, else Sobol sampling."""
    budgets = budgets or get_budgets()
    grid = GridSpec.for_degree(f.degree, oversampling)
    try:
        check_grid_budget(grid.refined().M, f.d, budgets)
    except ResourceBudgetError:
        logger.debug(f"Grid M={grid.M} too large in d={f.d}; using sampled quadrature")
        return SampleSpec(budgets.sample_log2, seed)
    return grid


def _mean_power(samples: np.ndarray, p: float) -> float:
    return float(np.mean(np.abs(samples) ** p)) ** (1.0 / p)


def _norm_on(f: TrigPoly, p: float, spec: QuadratureSpec, budgets: Optional[Budgets]) -> float:
    if isinstance(spec, GridSpec):
        return _mean_power(evaluate_on_grid(f, spec, budgets), p)
    return _mean_power(evaluate_at_points(f, sobol_points(spec, f.d)), p)


def lp_norm(
    f: TrigPoly,
    p: float,
    g: QuadratureSpec,
    budgets: Optional[Budgets] = None,
) -> NormReport:
    """Quadrature L_p norm (M^-d sum |f|^p)^(1/p) with a one-step refinement.

    Args:
        f: Polynomial.
        p: Exponent, at least 1.
        g: Dense grid (oversampling >= 4) or Sobol sample spec.
        budgets: Resource limits; both the grid and its refinement must fit.

    Returns:
        NormReport with error_hint = |value(M) - value(2M)|.

    Raises:
        DomainError: For p < 1.
        PreconditionError: For grids with oversampling below 4.
    """
    if p < 1:
        raise DomainError(f"L_p norms need p >= 1, got {p}")
    if isinstance(g, GridSpec):
        oversampling = g.M / (2 * f.degree + 1)
        if oversampling < MIN_NORM_OVERSAMPLING:
            raise PreconditionError(
                f"oversampling {oversampling:.3g} below {MIN_NORM_OVERSAMPLING} "
                f"for degree {f.degree}"
            )
        check_grid_budget(g.refined().M, f.d, budgets)
        method = NormMethod.QUADRATURE
    else:
        method = NormMethod.SAMPLED

    support = f.support
    if not support:
        return NormReport(0.0, p, NormMethod.EXACT_COEFFICIENT, g, 0.0)
    if support == [(0,) * f.d]:
        return NormReport(abs(f.mean), p, NormMethod.EXACT_COEFFICIENT, g, 0.0)

    value = _norm_on(f, p, g, budgets)
    refined = _norm_on(f, p, g.refined(), budgets)
    return NormReport(value, p, method, g, abs(value - refined))


def coeff_l1_upper(f: TrigPoly) -> float:
    """Sum of |f^(n)|, an upper bound for the sup norm and hence every L_p norm."""
    if f.is_exact:
        total = sum((abs(c) for _, c in f), Fraction(0))
        return float(total) * (2 * math.pi) ** f.twopi_i_power
    return float(sum(abs(c) for c in f.full_coefficients().values()))


def partial_derivative(f: TrigPoly, j: int) -> TrigPoly:
    """d/dt_j: multiplies the coefficient at n by 2 pi i n^(j).

    The factor 2 pi i is carried in the (2 pi i)^s power, so rational
    coefficients stay rational.
    """
    if not 1 <= j <= f.d:
        raise PreconditionError(f"axis {j} outside 1..{f.d}")
    coeffs = {n: c * n[j - 1] for n, c in f if n[j - 1] != 0}
    return TrigPoly(f.d, coeffs, f.twopi_i_power + 1)


def antiderivative(f: TrigPoly, j: int) -> TrigPoly:
    """Inverse of partial_derivative along axis j.

    Raises:
        PreconditionError: When f has a term whose n^(j) vanishes.
    """
    if not 1 <= j <= f.d:
        raise PreconditionError(f"axis {j} outside 1..{f.d}")
    coeffs = {}
    for n, c in f:
        if n[j - 1] == 0:
            raise PreconditionError(f"frequency {n} has no antiderivative along axis {j}")
        coeffs[n] = c / n[j - 1]
    return TrigPoly(f.d, coeffs, f.twopi_i_power - 1)


def gradient(f: TrigPoly) -> list[TrigPoly]:
    """All first partial derivatives."""
    return [partial_derivative(f, j) for j in range(1, f.d + 1)]


def combine_norms(reports: list[NormReport], p: float) -> NormReport:
    """Sum of norm values with summed error hints."""
    methods = {r.method for r in reports}
    method = NormMethod.EXACT_COEFFICIENT
    for candidate in (NormMethod.SAMPLED, NormMethod.QUADRATURE, NormMethod.FLOAT_COEFFICIENT):
        if candidate in methods:
            method = candidate
            break
    grid = next((r.grid for r in reports if r.grid is not None), None)
    return NormReport(
        value=sum(r.value for r in reports),
        p=p,
        method=method,
        grid=grid,
        error_hint=sum(r.error_hint for r in reports),
    )


def sobolev_components(
    f: TrigPoly, g: QuadratureSpec, budgets: Optional[Budgets] = None
) -> tuple[NormReport, list[NormReport]]:
    """||f||_1 and the list of ||d_j f||_1."""
    base = lp_norm(f, 1.0, g, budgets)
    partials = [lp_norm(df, 1.0, g, budgets) for df in gradient(f)]
    return base, partials


def sobolev_norm_11(
    f: TrigPoly,
    g: QuadratureSpec,
    normalized: bool = False,
    budgets: Optional[Budgets] = None,
) -> NormReport:
    """W^1_1 norm ||f||_1 + sum_j ||d_j f||_1.

    Args:
        f: Polynomial.
        g: Quadrature spec.
        normalized: Divide each derivative norm by 2 pi (convention-normalized).
        budgets: Resource limits.
    """
    base, partials = sobolev_components(f, g, budgets)
    if normalized:
        partials = [
            NormReport(r.value / (2 * math.pi), r.p, r.method, r.grid, r.error_hint / (2 * math.pi))
            for r in partials
        ]
    return combine_norms([base, *partials], 1.0)


def fourier_coeff_norm(f: TrigPoly, q: float) -> NormReport:
    """(sum_n |f^(n)|^q)^(1/q) tagged with how it was summed.

    Rational coefficients without a (2 pi i) factor and even integer q are
    summed exactly (EXACT_COEFFICIENT); everything else is a floating-point
    sum of |f^(n)|^q (FLOAT_COEFFICIENT). Neither path samples the torus.
    """
    if q < 1:
        raise DomainError(f"coefficient norms need q >= 1, got {q}")
    if f.is_zero:
        return NormReport(0.0, q, NormMethod.EXACT_COEFFICIENT)
    if f.is_exact and f.twopi_i_power == 0 and float(q).is_integer() and int(q) % 2 == 0:
        total = sum((c ** int(q) for _, c in f), Fraction(0))
        return NormReport(float(total) ** (1.0 / q), q, NormMethod.EXACT_COEFFICIENT)
    magnitudes = np.abs(np.array(list(f.full_coefficients().values()), dtype=np.complex128))
    value = float(np.sum(magnitudes**q)) ** (1.0 / q)
    return NormReport(value, q, NormMethod.FLOAT_COEFFICIENT)


def fourier_coeff_lq(f: TrigPoly, q: float) -> float:
    """Value of fourier_coeff_norm."""
    return fourier_coeff_norm(f, q).value


def dual_exponent(p: float) -> float:
    """p' = p / (p - 1)."""
    return p / (p - 1)


def hausdorff_young_check(
    f: TrigPoly, p: float, g: QuadratureSpec, budgets: Optional[Budgets] = None
) -> CertificationReport:
    """Check ||f^||_{p'} <= ||f||_p + tolerance for p in (1, 2]."""
    if not 1 < p <= 2:
        raise DomainError(f"Hausdorff-Young needs p in (1, 2], got {p}")
    lhs = fourier_coeff_norm(f, dual_exponent(p))
    rhs = lp_norm(f, p, g, budgets)
    holds = lhs.value <= rhs.value + rhs.tolerance
    return CertificationReport.from_check(
        "hausdorff_young",
        {"p": p, "d": f.d, "degree": f.degree},
        holds,
        observed={"coeff_norm": lhs.value, "lp_norm": rhs.value, "error_hint": rhs.error_hint},
        tolerance=rhs.tolerance,
        notes=[f"coeff_method={lhs.method.value}", f"lp_method={rhs.method.value}"],
    )


def bernstein_check(
    f: TrigPoly, g: QuadratureSpec, budgets: Optional[Budgets] = None
) -> CertificationReport:
    """Check ||f'||_1 <= 2 pi deg(f) ||f||_1 + tolerance in dimension 1.

    Reports the raw ratio ||f'||_1 / ||f||_1 and the convention-normalized
    ratio divided by 2 pi deg(f).
    """
    if f.d != 1:
        raise PreconditionError("Bernstein's inequality is checked in dimension 1")
    degree = f.degree
    base = lp_norm(f, 1.0, g, budgets)
    derivative = lp_norm(partial_derivative(f, 1), 1.0, g, budgets)
    scale = 2 * math.pi * degree
    tolerance = 2 * (derivative.error_hint + scale * base.error_hint) + 1e-9
    holds = derivative.value <= scale * base.value + tolerance
    raw = derivative.value / base.value if base.value > 0 else 0.0
    normalized = raw / scale if scale > 0 else 0.0
    return CertificationReport.from_check(
        "bernstein",
        {"degree": degree},
        holds,
        observed={
            "derivative_l1": derivative.value,
            "l1": base.value,
            "raw_ratio": raw,
            "normalized_ratio": normalized,
        },
        tolerance=tolerance,
    )


def random_trig_poly(
    rng: np.random.Generator,
    d: int,
    degree: int,
    terms: int,
    real: bool = True,
) -> TrigPoly:
    """Random polynomial with ``terms`` frequencies in [-degree, degree]^d.

    Real polynomials get conjugate-symmetric coefficients.
    """
    coeffs: dict[tuple[int, ...], Union[complex, float]] = {}
    for _ in range(terms):
        n = tuple(int(x) for x in rng.integers(-degree, degree + 1, size=d))
        value = complex(rng.normal(), rng.normal())
        if real:
            mirror = tuple(-c for c in n)
            if n == mirror:
                coeffs[n] = coeffs.get(n, 0.0) + value.real
            else:
                coeffs[n] = coeffs.get(n, 0.0) + value
                coeffs[mirror] = coeffs.get(mirror, 0.0) + value.conjugate()
        else:
            coeffs[n] = coeffs.get(n, 0.0) + value
    return TrigPoly(d, coeffs)
