"""Summability diagnostics: partial-sum trends and the sequence lemmas.

Trend classes are heuristics over finitely many partial sums. The mean of
the last three increment ratios decides: below 0.9 is a convergent trend,
above 1.02 a divergent trend, anything else inconclusive.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from src.config.settings import Budgets
from src.exceptions import DomainError, PreconditionError
from src.models.reports import (
    CertificationReport,
    CertificationStatus,
    DecayReport,
    MainSumReport,
    SharpnessReport,
    TrendClass,
    TrendReport,
)
from src.models.symbols import DiagnosticsConfig, MultiplierSymbol
from src.services.multiplier_service import (
    REL_TOL,
    boundedness_refusal,
    ring_magnitudes,
    ring_power_sums,
    ring_sweep,
)

logger = logging.getLogger(__name__)

CONVERGENT_BELOW = 0.9
DIVERGENT_ABOVE = 1.02
MIN_INCREMENTS = 4
DECAY_RATIO = 0.5


def _ratio(previous: float, current: float) -> float:
    if previous == 0:
        return 0.0 if current == 0 else math.inf
    return current / previous


def classify_trend(partial_sums: Sequence[float], label: str = "") -> TrendReport:
    """Classify a partial-sum sequence by its increment ratios.

    Args:
        partial_sums: S_1, S_2, ... in order.
        label: Name carried into the report.

    Returns:
        TrendReport; fewer than four increments is always inconclusive, and
        three trailing zero increments are a convergent trend.
    """
    values = [float(v) for v in partial_sums]
    increments = np.diff(values) if len(values) > 1 else np.zeros(0)
    ratios = [_ratio(a, b) for a, b in zip(increments, increments[1:])]
    if len(increments) < MIN_INCREMENTS:
        classification = TrendClass.INCONCLUSIVE
    elif np.all(increments[-3:] == 0):
        classification = TrendClass.CONVERGENT
    else:
        mean = float(np.mean(ratios[-3:]))
        if mean < CONVERGENT_BELOW:
            classification = TrendClass.CONVERGENT
        elif mean > DIVERGENT_ABOVE:
            classification = TrendClass.DIVERGENT
        else:
            classification = TrendClass.INCONCLUSIVE
    return TrendReport(label, values, ratios, classification)


def _dyadic(values: np.ndarray) -> list[float]:
    """values[N - 1] at N = 1, 2, 4, ... up to the length."""
    return [float(values[2**m - 1]) for m in range(int(math.log2(len(values))) + 1)]


def lema1_check(b: Sequence[float], alpha: float, q: float) -> CertificationReport:
    """From sum_{j<=N} b_j = O(N^alpha) to b in l_q for q > 1/(1 - alpha).

    The premise is judged on S_N / N^alpha at N = 2^m: it holds when that
    sequence has a convergent trend or stops increasing. A failed premise
    gives a premise-violation report and no conclusion.

    Raises:
        DomainError: For alpha outside (0, 1) or q <= 0.
        PreconditionError: For empty, negative or increasing input.
    """
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if q <= 0:
        raise DomainError(f"q must be positive, got {q}")
    values = np.asarray(b, dtype=np.float64)
    if values.size == 0:
        raise PreconditionError("lema1 needs a nonempty sequence")
    if np.any(values < 0) or np.any(np.diff(values) > 0):
        raise PreconditionError("lema1 needs a non-negative non-increasing sequence")

    params = {"alpha": alpha, "q": q, "length": int(values.size)}
    N = np.arange(1, values.size + 1, dtype=np.float64)
    scaled = np.cumsum(values) / N**alpha
    premise_points = _dyadic(scaled)
    premise_trend = classify_trend(premise_points, "lema1_premise")
    tail = np.diff(premise_points)[-3:]
    premise = premise_trend.classification is TrendClass.CONVERGENT or (
        len(tail) == 3 and bool(np.all(tail <= 0))
    )
    if not premise:
        logger.info(f"lema1 premise not supported for alpha={alpha}")
        return CertificationReport(
            "lema1",
            params,
            CertificationStatus.PREMISE_VIOLATION,
            observed={"scaled_last": premise_points[-1]},
            series={"scaled_partial_sums": premise_points},
            notes=[f"premise trend {premise_trend.classification.value}; no conclusion"],
        )

    constant = float(scaled.max())
    pointwise = bool(np.all(values <= constant * N ** (alpha - 1) * (1 + REL_TOL)))
    lq_points = _dyadic(np.cumsum(values**q))
    lq_trend = classify_trend(lq_points, "lema1_lq")
    threshold = 1 / (1 - alpha)
    conclusion = q <= threshold or lq_trend.classification is not TrendClass.DIVERGENT
    notes = [f"lq_trend={lq_trend.classification.value}", f"pointwise={pointwise}"]
    if q <= threshold:
        notes.append(f"q <= 1/(1-alpha) = {threshold:g}; no summability claimed")
    return CertificationReport.from_check(
        "lema1",
        params,
        pointwise and conclusion,
        observed={"C": constant, "threshold": threshold, "lq_partial": lq_points[-1]},
        series={"scaled_partial_sums": premise_points, "lq_partial_sums": lq_points},
        notes=notes,
    )


# Main summability sum


def main_sum_partial(
    sym: MultiplierSymbol, cfg: DiagnosticsConfig, budgets: Optional[Budgets] = None
) -> MainSumReport:
    """Ring-by-ring partial sums of sum (|lambda_n|/|n|_2)^q_main.

    Alongside, checks the split (|lambda_n|/|n|_2)^q <= (|lambda_n|/|n|_2)^p' mu_k^e
    on every enumerated point, e = p'(d+1) + epsilon, and accumulates the
    second-step sum sum_k mu_k^e.
    """
    q = cfg.q_main
    e = cfg.krok2_exponent
    p_prime = cfg.p_prime
    partial, krok2, mu = [], [], []
    running = krok2_running = 0.0
    violations = 0
    for k in range(cfg.K_max + 1):
        ratios_seen = []
        ring_total = 0.0
        for _, norms_sq, weights, (magnitudes,) in ring_magnitudes([sym], k, cfg.d, budgets):
            ratios = magnitudes / np.sqrt(norms_sq)
            ratios_seen.append(ratios)
            ring_total += float(np.sum(weights * ratios**q))
        mu_k = max((float(r.max()) for r in ratios_seen if len(r)), default=0.0)
        for ratios in ratios_seen:
            lhs = ratios**q
            rhs = ratios**p_prime * mu_k**e
            violations += int(np.count_nonzero(lhs > rhs * (1 + REL_TOL)))
        running += ring_total
        krok2_running += mu_k**e
        partial.append(running)
        krok2.append(krok2_running)
        mu.append(mu_k)
    return MainSumReport(
        q_main=q,
        partial_sums=partial,
        krok2_sums=krok2,
        mu=mu,
        split_holds=violations == 0,
        split_violations=violations,
        trend=classify_trend(partial, f"main_sum[{sym.name}]"),
    )


def main_sum_certify(
    sym: MultiplierSymbol, cfg: DiagnosticsConfig, budgets: Optional[Budgets] = None
) -> CertificationReport:
    """Certify the split chain S(K) <= C sum_k mu_k^e with C the largest ring sum.

    Fails on a divergent-trend main sum; inconclusive trends are recorded.
    """
    params = {"symbol": sym.name, "p": cfg.p, "d": cfg.d, "eps": cfg.epsilon, "K": cfg.K_max}
    report = main_sum_partial(sym, cfg, budgets)
    stats = ring_sweep(sym, list(range(cfg.K_max + 1)), cfg.p, cfg.d, budgets)
    ring_sums = [s.ring_sum for s in stats]
    constant = max(ring_sums)
    bound = constant * report.krok2_sums[-1]
    chain = report.partial_sums[-1] <= bound * (1 + REL_TOL)
    divergent = report.trend.classification is TrendClass.DIVERGENT
    return CertificationReport.from_check(
        "main_sum",
        params,
        report.split_holds and chain and not divergent,
        observed={
            "q_main": report.q_main,
            "S_K": report.partial_sums[-1],
            "krok2_sum": report.krok2_sums[-1],
            "C_krok1": constant,
            "bound": bound,
            "split_violations": float(report.split_violations),
        },
        series={
            "partial_sums": report.partial_sums,
            "krok2_sums": report.krok2_sums,
            "mu": report.mu,
            "increment_ratios": report.trend.increment_ratios,
        },
        notes=[f"trend={report.trend.classification.value}"],
    )


# Ring maxima decay


def lema2_decay_report(
    sym: MultiplierSymbol, d: int, K_max: int, budgets: Optional[Budgets] = None, workers: int = 1
) -> DecayReport:
    """mu_k for k = 0..K_max and the ratio last / max.

    The maxima decay when that ratio is at most 0.5; an all-zero sequence
    decays.
    """
    stats = ring_sweep(sym, list(range(K_max + 1)), 2.0, d, budgets, workers)
    mu = [s.mu_k for s in stats]
    top = max(mu)
    ratio = mu[-1] / top if top > 0 else 0.0
    return DecayReport(
        mu=mu,
        argmax_points=[s.argmax_point for s in stats],
        trend_ratio=ratio,
        decays=ratio <= DECAY_RATIO,
    )


def lema2_certify(
    sym: MultiplierSymbol,
    p: float,
    d: int,
    K_max: int,
    budgets: Optional[Budgets] = None,
    negative_control: bool = False,
) -> CertificationReport:
    """Certify decay of mu_k; non-decay is evidence against boundedness, not proof."""
    params = {"symbol": sym.name, "p": p, "d": d, "K": K_max}
    refused = boundedness_refusal("lema2", params, sym, p, d, negative_control)
    if refused is not None:
        return refused
    report = lema2_decay_report(sym, d, K_max, budgets)
    if report.flagged and not negative_control:
        logger.warning(f"mu_k of {sym.name} does not decay (ratio {report.trend_ratio:.3g})")
    result = CertificationReport.from_check(
        "lema2",
        params,
        report.decays,
        observed={
            "trend_ratio": report.trend_ratio,
            "mu_last": report.mu[-1],
            "mu_max": max(report.mu),
        },
        series={"mu": report.mu},
        notes=[f"argmax_last={report.argmax_points[-1]}"],
    )
    return result.as_control() if negative_control else result


# Sharpness


def sharpness_explore(
    sym: MultiplierSymbol,
    d: int,
    q_grid: Sequence[float],
    K_max: int,
    p_grid: Sequence[float] = (),
    budgets: Optional[Budgets] = None,
) -> SharpnessReport:
    """Partial sums over rings 0..K-1, K = 1..K_max, for each exponent.

    ``q_grid`` drives sum (|lambda_n|/|n|_2)^q; ``p_grid`` drives the
    Schatten sums sum |lambda_n|^p, reported separately.
    """
    if K_max < 1:
        raise DomainError("sharpness needs K_max >= 1")
    ratio_rings = [ring_power_sums(sym, k, d, q_grid, 1.0, budgets) for k in range(K_max)]
    schatten_rings = (
        [ring_power_sums(sym, k, d, p_grid, 0.0, budgets) for k in range(K_max)] if p_grid else []
    )

    def trends(
        grid: Sequence[float], rings: list[list[float]], prefix: str
    ) -> dict[float, TrendReport]:
        out = {}
        for i, exponent in enumerate(grid):
            sums = list(np.cumsum([ring[i] for ring in rings]))
            out[float(exponent)] = classify_trend(sums, f"{prefix}[{exponent:g}]")
        return out

    return SharpnessReport(
        symbol=sym.name,
        d=d,
        trends=trends(q_grid, ratio_rings, "q"),
        schatten_trends=trends(p_grid, schatten_rings, "schatten") if p_grid else {},
    )


def expected_trend(sym: MultiplierSymbol, d: int, q: float) -> Optional[TrendClass]:
    """Reference class for |lambda_n| = |n|_2^(-s): convergent iff q (s + 1) > d."""
    if sym.decay_order is None:
        return None
    if q * (sym.decay_order + 1) > d:
        return TrendClass.CONVERGENT
    return TrendClass.DIVERGENT


def sharpness_certify(
    sym: MultiplierSymbol,
    d: int,
    q_grid: Sequence[float],
    K_max: int,
    budgets: Optional[Budgets] = None,
) -> CertificationReport:
    """Passes unless a classification contradicts the reference class.

    Inconclusive classifications are recorded but never contradict.
    """
    report = sharpness_explore(sym, d, q_grid, K_max, budgets=budgets)
    contradictions = []
    notes = []
    for q in sorted(report.trends):
        found = report.classification(q)
        reference = expected_trend(sym, d, q)
        notes.append(f"q={q:g}: {found.value}")
        if reference is None or found is TrendClass.INCONCLUSIVE:
            continue
        if found is not reference:
            contradictions.append(q)
    if contradictions:
        logger.warning(f"Sharpness contradictions for {sym.name} at q={contradictions}")
    q_label = ",".join(f"{q:g}" for q in sorted(report.trends))
    return CertificationReport.from_check(
        "sharpness",
        {"symbol": sym.name, "d": d, "q": q_label, "K": K_max},
        not contradictions,
        observed={f"S_K[q={q:g}]": report.trends[q].partial_sums[-1] for q in report.trends},
        series={f"q={q:g}": report.trends[q].partial_sums for q in sorted(report.trends)},
        notes=notes,
    )
