"""Certification suite: every claim family over a SuiteConfig grid.

Families run in a fixed order and each draws its random inputs from a
generator seeded by (seed, family index), so the reports depend only on
the configuration. A family never aborts the suite: budget errors become
budget-exceeded reports and any other error a failed report.
"""

import logging
import math
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Iterable, Optional, Sequence

import numpy as np

from src.config.suite_config import SuiteConfig
from src.exceptions import ConfigError, ResourceBudgetError
from src.models.kernels import TestPhiSpec
from src.models.lattice import SectorPartition
from src.models.reports import CertificationReport, CertificationStatus
from src.models.symbols import DiagnosticsConfig, MultiplierSymbol
from src.services import (
    fixture_service,
    kernel_service,
    lattice_service,
    multiplier_service,
    summability_service,
    symbol_service,
    trigpoly_service,
)
from src.services.claim_queue_service import ClaimQueueService, ClaimStatus

logger = logging.getLogger(__name__)

FAMILY_CLAIMS: dict[str, tuple[str, ...]] = {
    "euck": ("euck", "sectors"),
    "fejer_ring": ("fejer_ring", "fejer_w11"),
    "bernstein": ("bernstein",),
    "hausdorff_young": ("hausdorff_young",),
    "riesz": ("riesz_expansion", "riesz_l1", "tozsamosc"),
    "wspol": ("wspol",),
    "lemgl": ("lemgl", "lemgl_split"),
    "pre_krok2": ("pre_krok2",),
    "r1": ("r1", "split_sparse"),
    "krok1": ("krok1", "krok1_chain"),
    "main_sum": ("main_sum", "sharpness"),
    "lema1": ("lema1",),
    "lema2": ("lema2",),
    "factorization": ("factorization", "schatten_diagonal"),
}
FAMILIES = tuple(FAMILY_CLAIMS)

EUCK_MAX_RING = 4
SECTOR_RADIUS = {1: 243, 2: 81, 3: 27}
HAUSDORFF_YOUNG_P = (1.25, 1.5, 2.0)
FEJER_W11_OVERSAMPLING = 8.0
CHAIN_MAX_TERMS = 200_000
PRE_KROK2_SPECS = 5
VARIATION_LIMIT = 4.0
SCHATTEN_COUNT = 50
LEMA1_LENGTH = 4096
LEMA1_ALPHAS = (0.25, 0.5, 0.75)
# The norm control exceeds the flatness factor in d = 1 only from four rings on.
CONTROL_MIN_RINGS = 4


def guarded(
    claim_id: str, params: dict[str, Any], check: Callable[[], CertificationReport]
) -> CertificationReport:
    """Run one check, turning budget and toolkit errors into reports."""
    try:
        return check()
    except ResourceBudgetError as e:
        logger.warning(f"{claim_id} {params}: budget exceeded: {e}")
        notes = [str(e)]
        if e.required is not None:
            notes.append(f"required={e.required}")
        return CertificationReport(
            claim_id, params, CertificationStatus.BUDGET_EXCEEDED, notes=notes
        )
    except Exception as e:
        logger.warning(f"{claim_id} {params}: {type(e).__name__}: {e}")
        return CertificationReport(
            claim_id, params, CertificationStatus.FAILED, notes=[f"{type(e).__name__}: {e}"]
        )


def tagged(report: CertificationReport, **extra: Any) -> CertificationReport:
    """Copy of a report with additional key parameters."""
    return replace(report, params={**report.params, **extra})


def aggregate_reports(
    claim_id: str,
    params: dict[str, Any],
    reports: Sequence[CertificationReport],
    metric: Optional[Callable[[CertificationReport], float]] = None,
    metric_name: str = "worst",
) -> CertificationReport:
    """Fold per-case reports into one report for a parameter combination.

    A refused or budget-exceeded case decides the outcome; otherwise the
    report passes iff every case passes. ``metric`` is maximized over the
    cases that produced observations.
    """
    if not reports:
        return CertificationReport.skipped(claim_id, params, "no cases")
    for status in (CertificationStatus.REFUSED, CertificationStatus.BUDGET_EXCEEDED):
        blocking = next((r for r in reports if r.status is status), None)
        if blocking is not None:
            return replace(blocking, claim_id=claim_id, params=params)
    failures = [r for r in reports if not r.passed]
    observed = {"cases": float(len(reports)), "failures": float(len(failures))}
    measured = [r for r in reports if r.observed]
    if metric is not None and measured:
        values = [metric(r) for r in measured]
        observed[metric_name] = max(values)
    return CertificationReport(
        claim_id,
        params,
        CertificationStatus.FAILED if failures else CertificationStatus.PASSED,
        expectation=reports[0].expectation,
        observed=observed,
        tolerance=max(r.tolerance for r in reports),
        notes=[f"failed: {r.key} {'; '.join(r.notes)}" for r in failures[:5]],
    )


def _coefficient_ratio(report: CertificationReport) -> float:
    lp = report.observed.get("lp_norm", 0.0)
    return report.observed.get("coeff_norm", 0.0) / lp if lp > 0 else 0.0


def variation(values: Iterable[float]) -> float:
    """max / min of non-negative values; 1 for all-zero input."""
    values = list(values)
    if not values:
        return 1.0
    top, bottom = max(values), min(values)
    if top == 0:
        return 1.0
    return top / bottom if bottom > 0 else math.inf


class CertificationService:
    """Runs the claim families of one suite configuration."""

    def __init__(self, cfg: SuiteConfig, only: Optional[Sequence[str]] = None):
        """Initialize the suite.

        Args:
            cfg: Validated suite configuration.
            only: Claim ids or family names to keep; None keeps everything.

        Raises:
            ConfigError: When the symbol name or the parameter grid is invalid.
        """
        cfg.check_budgets()
        known = set(FAMILIES).union(*FAMILY_CLAIMS.values())
        unknown = sorted(set(only or ()) - known)
        if unknown:
            raise ConfigError(f"unknown claims {', '.join(unknown)}")
        self.cfg = cfg
        self.budgets = cfg.budgets
        self.symbol = symbol_service.get_symbol(cfg.symbol)
        self.control = symbol_service.norm_symbol()
        self.selected = set(only) if only else None
        self._runners: dict[str, Callable[[np.random.Generator], list[CertificationReport]]] = {
            "euck": self._euck,
            "fejer_ring": self._fejer_ring,
            "bernstein": self._bernstein,
            "hausdorff_young": self._hausdorff_young,
            "riesz": self._riesz,
            "wspol": self._wspol,
            "lemgl": self._lemgl,
            "pre_krok2": self._pre_krok2,
            "r1": self._r1,
            "krok1": self._krok1,
            "main_sum": self._main_sum,
            "lema1": self._lema1,
            "lema2": self._lema2,
            "factorization": self._factorization,
        }

    def selected_families(self) -> list[str]:
        """Families with at least one selected claim, in suite order."""
        if self.selected is None:
            return list(FAMILIES)
        return [
            family
            for family, claims in FAMILY_CLAIMS.items()
            if family in self.selected or self.selected & set(claims)
        ]

    def _keeps(self, family: str, report: CertificationReport) -> bool:
        if self.selected is None or family in self.selected:
            return True
        return report.claim_id in self.selected or report.claim_id == family

    def run_family(self, family: str, index: int) -> list[CertificationReport]:
        """Reports of one family, drawn from the (seed, index) generator."""
        logger.info(f"Running claim family {family}")
        rng = np.random.default_rng([self.cfg.seed, index])
        return self._runners[family](rng)

    def run(self) -> list[CertificationReport]:
        """Run the selected families and return their reports sorted by key."""
        queue = ClaimQueueService(self.run_family, self.cfg.workers)
        for family in self.selected_families():
            queue.queue_family(family, FAMILIES.index(family))
        reports: list[CertificationReport] = []
        for task in queue.run():
            if task.status is ClaimStatus.FAILED:
                reports.append(
                    CertificationReport(
                        task.family,
                        {},
                        CertificationStatus.FAILED,
                        notes=[f"family aborted: {task.error}"],
                    )
                )
                continue
            reports.extend(r for r in task.reports if self._keeps(task.family, r))
        status = queue.get_queue_status()
        if status.failed_count:
            logger.warning(
                f"{status.failed_count} of {status.completed_count + status.failed_count} "
                "claim families aborted"
            )
        reports.sort(key=lambda r: r.key)
        failed = sum(1 for r in reports if not r.passed)
        logger.info(f"Suite finished: {len(reports)} reports, {failed} not passed")
        return reports

    def write_fixtures(self, directory: Path) -> list[Path]:
        """Write the random corpora the suite draws, regenerated from the same seeds."""
        bernstein = np.random.default_rng([self.cfg.seed, FAMILIES.index("bernstein")])
        polys = fixture_service.poly_corpus(bernstein, 1, self.cfg.random_polys)
        specs = [
            spec
            for d in self._multi_dims()
            for N in self.cfg.N_values
            for spec in self._spec_corpus(d, N)
        ]
        counting = np.random.default_rng([self.cfg.seed, FAMILIES.index("r1")])
        splits = [
            points
            for d in self.cfg.dims
            for _ in self.cfg.counting_N
            for points in fixture_service.split_corpus(counting, d, self.cfg.split_inputs)
        ]
        return fixture_service.write_fixtures(directory, polys, specs, splits)

    # Inputs shared between families

    def _spec_corpus(self, d: int, N: int) -> list[TestPhiSpec]:
        rng = np.random.default_rng([self.cfg.seed, len(FAMILIES), d, N])
        return fixture_service.spec_corpus(rng, d, N, self.cfg.spec_corpus)

    def _diagnostics(self, p: float, d: int, N: int = 2) -> DiagnosticsConfig:
        return DiagnosticsConfig(p=p, epsilon=self.cfg.eps, K_max=self.cfg.K_max, N=N, d=d)

    def _counting_diagnostics(self, p: float, d: int, N: int) -> DiagnosticsConfig:
        # The counting sweep always spans rings 0..N^(d+1)-1.
        cfg = self._diagnostics(p, d, N)
        return replace(cfg, K_max=max(cfg.K_max, N ** (d + 1) - 1))

    def _multi_dims(self) -> list[int]:
        return [d for d in self.cfg.dims if d >= 2]

    def _runs_control(self) -> bool:
        # A norm suite already certifies the control symbol itself.
        return self.cfg.negative_controls and self.symbol.name != self.control.name

    # Families

    def _euck(self, rng: np.random.Generator) -> list[CertificationReport]:
        reports = []
        for d in self.cfg.dims:
            reports.append(
                guarded(
                    "euck",
                    {"d": d, "k": f"0..{EUCK_MAX_RING}"},
                    lambda: lattice_service.euclid_bounds_certify(d, EUCK_MAX_RING, self.budgets),
                )
            )
            for N in self.cfg.N_values:
                radius = SECTOR_RADIUS.get(d, 9)
                reports.append(
                    guarded(
                        "sectors",
                        {"d": d, "N": N, "radius": radius},
                        lambda: lattice_service.sector_properties_check(
                            SectorPartition(d, N), radius
                        ),
                    )
                )
        if not self.cfg.N_values:
            reports.append(CertificationReport.skipped("sectors", {}, "N_values is empty"))
        return reports

    def _fejer_ring(self, rng: np.random.Generator) -> list[CertificationReport]:
        oversampling = max(FEJER_W11_OVERSAMPLING, float(self.cfg.oversampling))
        reports = []
        for d in self.cfg.dims:
            for k in self.cfg.k_range:
                reports.append(
                    guarded(
                        "fejer_ring",
                        {"d": d, "k": k},
                        lambda: kernel_service.fejer_ring_lower_bound(d, k, self.budgets),
                    )
                )
                reports.append(
                    guarded(
                        "fejer_w11",
                        {"d": d, "k": k, "oversampling": oversampling},
                        lambda: kernel_service.fejer_w11(d, k, oversampling, self.budgets),
                    )
                )
        return reports

    def _bernstein(self, rng: np.random.Generator) -> list[CertificationReport]:
        params = {"d": 1, "polys": self.cfg.random_polys}
        cases = []
        for i, f in enumerate(fixture_service.poly_corpus(rng, 1, self.cfg.random_polys)):
            g = trigpoly_service.choose_quadrature(
                f, self.cfg.oversampling, self.budgets, self.cfg.seed
            )
            cases.append(
                guarded(
                    "bernstein",
                    {"sample": i},
                    lambda: trigpoly_service.bernstein_check(f, g, self.budgets),
                )
            )
        return [
            aggregate_reports(
                "bernstein",
                params,
                cases,
                lambda r: r.observed.get("normalized_ratio", 0.0),
                "max_normalized_ratio",
            )
        ]

    def _hausdorff_young(self, rng: np.random.Generator) -> list[CertificationReport]:
        dims = [d for d in self.cfg.dims if d <= 2]
        if not dims:
            return [CertificationReport.skipped("hausdorff_young", {}, "no dimension d <= 2")]
        exponents = sorted(set(HAUSDORFF_YOUNG_P) | set(self.cfg.p_values))
        per_dim = math.ceil(self.cfg.random_polys / len(dims))
        reports = []
        for d in dims:
            polys = fixture_service.poly_corpus(rng, d, per_dim)
            grids = [
                trigpoly_service.choose_quadrature(
                    f, self.cfg.oversampling, self.budgets, self.cfg.seed
                )
                for f in polys
            ]
            for p in exponents:
                cases = [
                    guarded(
                        "hausdorff_young",
                        {"sample": i},
                        lambda: trigpoly_service.hausdorff_young_check(f, p, g, self.budgets),
                    )
                    for i, (f, g) in enumerate(zip(polys, grids))
                ]
                reports.append(
                    aggregate_reports(
                        "hausdorff_young",
                        {"d": d, "p": p, "polys": len(polys)},
                        cases,
                        _coefficient_ratio,
                        "max_ratio",
                    )
                )
        return reports

    def _riesz(self, rng: np.random.Generator) -> list[CertificationReport]:
        if not self.cfg.N_values:
            return [
                CertificationReport.skipped(claim, {}, "N_values is empty")
                for claim in FAMILY_CLAIMS["riesz"]
            ]
        reports = []
        for d in self.cfg.dims:
            for N in self.cfg.N_values:
                params = {"N": N, "d": d}
                spec = kernel_service.geometric_riesz_spec(d, N)

                def grid():
                    expansion = kernel_service.riesz_expand(spec, self.budgets)
                    return trigpoly_service.choose_quadrature(
                        expansion, self.cfg.oversampling, self.budgets, self.cfg.seed
                    )

                reports.append(
                    guarded(
                        "riesz_expansion",
                        params,
                        lambda: kernel_service.riesz_expansion_check(spec, grid(), self.budgets),
                    )
                )
                reports.append(
                    guarded(
                        "riesz_l1",
                        params,
                        lambda: kernel_service.riesz_l1_certify(spec, grid(), self.budgets),
                    )
                )
                reports.append(
                    guarded(
                        "tozsamosc",
                        params,
                        lambda: kernel_service.riesz_decomposition_check(spec, self.budgets),
                    )
                )
        return reports

    def _wspol(self, rng: np.random.Generator) -> list[CertificationReport]:
        if not self.cfg.N_values or not self._multi_dims():
            return [CertificationReport.skipped("wspol", {}, "needs d >= 2 and N values")]
        N_label = ",".join(str(N) for N in self.cfg.N_values)
        reports = []
        for d in self._multi_dims():
            params = {"d": d, "N": N_label, "specs": self.cfg.spec_corpus}

            def check() -> CertificationReport:
                worst_by_N: dict[int, float] = {}
                failures = []
                for N in self.cfg.N_values:
                    cases = [kernel_service.wspol_constant(s) for s in self._spec_corpus(d, N)]
                    failures.extend(r for r in cases if not r.passed)
                    worst_by_N[N] = max(r.observed.get("C_prime", 0.0) for r in cases)
                spread = variation(worst_by_N.values())
                finite = all(math.isfinite(v) for v in worst_by_N.values())
                return CertificationReport.from_check(
                    "wspol",
                    params,
                    not failures and finite and spread < VARIATION_LIMIT,
                    observed={
                        "C_prime": max(worst_by_N.values()),
                        "variation": spread,
                    },
                    series={"C_prime_by_N": list(worst_by_N.values())},
                    notes=[f"failed: {r.key} {'; '.join(r.notes)}" for r in failures[:5]],
                )

            reports.append(guarded("wspol", params, check))
        return reports

    def _lemgl(self, rng: np.random.Generator) -> list[CertificationReport]:
        if not self.cfg.N_values or not self._multi_dims():
            return [
                CertificationReport.skipped(claim, {}, "needs d >= 2 and N values")
                for claim in FAMILY_CLAIMS["lemgl"]
            ]
        N_label = ",".join(str(N) for N in self.cfg.N_values)
        reports = []
        for d in self._multi_dims():
            params = {"d": d, "N": N_label, "specs": self.cfg.spec_corpus}

            def gradients() -> CertificationReport:
                off_axis: dict[int, float] = {}
                w11: dict[int, float] = {}
                failures = []
                tolerance = 0.0
                for N in self.cfg.N_values:
                    cases = []
                    for spec in self._spec_corpus(d, N):
                        phi = kernel_service.test_phi(spec, self.budgets)
                        g = trigpoly_service.choose_quadrature(
                            phi, self.cfg.oversampling, self.budgets, self.cfg.seed
                        )
                        cases.append(kernel_service.gradient_report(spec, g, self.budgets)[1])
                    failures.extend(r for r in cases if not r.passed)
                    off_axis[N] = max(r.observed["C_report"] for r in cases)
                    w11[N] = max(r.observed["w11"] for r in cases)
                    tolerance = max(tolerance, *(r.tolerance for r in cases))
                spreads = (variation(off_axis.values()), variation(w11.values()))
                return CertificationReport.from_check(
                    "lemgl",
                    params,
                    not failures and max(spreads) < VARIATION_LIMIT,
                    observed={
                        "C_report": max(off_axis.values()),
                        "w11": max(w11.values()),
                        "off_axis_variation": spreads[0],
                        "w11_variation": spreads[1],
                    },
                    tolerance=tolerance,
                    series={
                        "off_axis_by_N": list(off_axis.values()),
                        "w11_by_N": list(w11.values()),
                    },
                    notes=[f"failed: {r.key} {'; '.join(r.notes)}" for r in failures[:5]],
                )

            def splits() -> CertificationReport:
                cases = [
                    kernel_service.gradient_split_bounds(spec, j, self.budgets)
                    for N in self.cfg.N_values
                    for spec in self._spec_corpus(d, N)
                    for j in range(1, d + 1)
                    if j != spec.j0
                ]
                return aggregate_reports(
                    "lemgl_split",
                    params,
                    cases,
                    lambda r: r.observed.get("total_bound", 0.0),
                    "max_total_bound",
                )

            reports.append(guarded("lemgl", params, gradients))
            reports.append(guarded("lemgl_split", params, splits))
        return reports

    def _pre_krok2(self, rng: np.random.Generator) -> list[CertificationReport]:
        if not self.cfg.N_values:
            return [CertificationReport.skipped("pre_krok2", {}, "N_values is empty")]
        reports = []
        for d in self.cfg.dims:
            for N in self.cfg.N_values:
                for p in self.cfg.p_values:
                    params = {"symbol": self.symbol.name, "p": p, "d": d, "N": N}

                    def check() -> CertificationReport:
                        specs = self._spec_corpus(d, N)[:PRE_KROK2_SPECS]
                        cases = [
                            multiplier_service.pre_krok2_certify(
                                self.symbol,
                                spec,
                                p,
                                float(self.cfg.oversampling),
                                self.budgets,
                                self.cfg.seed,
                            )
                            for spec in specs
                        ]
                        return aggregate_reports(
                            "pre_krok2",
                            params,
                            cases,
                            lambda r: r.observed.get("K_emp", 0.0),
                            "max_K_emp",
                        )

                    reports.append(guarded("pre_krok2", params, check))
        return reports

    def _r1(self, rng: np.random.Generator) -> list[CertificationReport]:
        reports = []
        for d in self.cfg.dims:
            for N in self.cfg.counting_N:
                for p in self.cfg.p_values:
                    reports.append(
                        guarded(
                            "r1",
                            {"symbol": self.symbol.name, "p": p, "d": d, "N": N},
                            lambda: multiplier_service.krok2_counting_certify(
                                self.symbol, self._counting_diagnostics(p, d, N), self.budgets
                            ),
                        )
                    )
                inputs = fixture_service.split_corpus(rng, d, self.cfg.split_inputs)
                cases = [
                    guarded(
                        "split_sparse",
                        {"sample": i},
                        lambda: lattice_service.split_report(points, N),
                    )
                    for i, points in enumerate(inputs)
                ]
                reports.append(
                    aggregate_reports(
                        "split_sparse",
                        {"d": d, "N": N, "inputs": len(inputs)},
                        cases,
                        lambda r: r.observed.get("sequences", 0.0),
                        "max_sequences",
                    )
                )
        return reports

    def _krok1(self, rng: np.random.Generator) -> list[CertificationReport]:
        lo = min(self.cfg.k_range)
        control_range = sorted(set(self.cfg.k_range) | set(range(lo, lo + CONTROL_MIN_RINGS)))
        reports = []
        for d in self.cfg.dims:
            for p in self.cfg.p_values:
                symbols: list[tuple[MultiplierSymbol, list[int], bool]] = [
                    (self.symbol, sorted(self.cfg.k_range), False)
                ]
                if self._runs_control():
                    symbols.append((self.control, control_range, True))
                for sym, ks, control in symbols:
                    reports.append(
                        guarded(
                            "krok1",
                            {"symbol": sym.name, "p": p, "d": d, "k": f"{min(ks)}..{max(ks)}"},
                            lambda: multiplier_service.krok1_flatness_certify(
                                sym, p, d, ks, self.budgets, control
                            ),
                        )
                    )
                for k in self.cfg.k_range:
                    params = {"symbol": self.symbol.name, "p": p, "d": d, "k": k}
                    terms = (2 * kernel_service.fejer_degree(k) - 1) ** d
                    if terms > CHAIN_MAX_TERMS:
                        reports.append(
                            CertificationReport.skipped(
                                "krok1_chain",
                                params,
                                f"Fejer product has {terms} terms, suite cap {CHAIN_MAX_TERMS}",
                            )
                        )
                        continue
                    reports.append(
                        guarded(
                            "krok1_chain",
                            params,
                            lambda: multiplier_service.krok1_chain_certify(
                                self.symbol, p, d, k, float(self.cfg.oversampling), self.budgets
                            ),
                        )
                    )
        return reports

    def _main_sum(self, rng: np.random.Generator) -> list[CertificationReport]:
        reports = []
        for d in self.cfg.dims:
            for p in self.cfg.p_values:
                reports.append(
                    guarded(
                        "main_sum",
                        {
                            "symbol": self.symbol.name,
                            "p": p,
                            "d": d,
                            "eps": self.cfg.eps,
                            "K": self.cfg.K_max,
                        },
                        lambda: summability_service.main_sum_certify(
                            self.symbol, self._diagnostics(p, d), self.budgets
                        ),
                    )
                )
            if self.cfg.sharpness_q:
                q_label = ",".join(f"{q:g}" for q in sorted(self.cfg.sharpness_q))
                K = self.cfg.sharpness_K
                reports.append(
                    guarded(
                        "sharpness",
                        {"symbol": self.symbol.name, "d": d, "q": q_label, "K": K},
                        lambda: summability_service.sharpness_certify(
                            self.symbol, d, self.cfg.sharpness_q, K, self.budgets
                        ),
                    )
                )
        return reports

    def _lema1(self, rng: np.random.Generator) -> list[CertificationReport]:
        j = np.arange(1, LEMA1_LENGTH + 1, dtype=np.float64)
        cases: list[tuple[str, np.ndarray, float, float]] = [
            (f"power:{1 - alpha:g}", j ** (alpha - 1), alpha, 1 / (1 - alpha) + 1)
            for alpha in LEMA1_ALPHAS
        ]
        cases.append(("constant", np.ones(LEMA1_LENGTH), 0.5, 3.0))
        return [
            guarded(
                "lema1",
                {"sequence": name, "alpha": alpha, "q": q, "length": LEMA1_LENGTH},
                lambda: tagged(summability_service.lema1_check(b, alpha, q), sequence=name),
            )
            for name, b, alpha, q in cases
        ]

    def _lema2(self, rng: np.random.Generator) -> list[CertificationReport]:
        reports = []
        for d in self.cfg.dims:
            for p in self.cfg.p_values:
                symbols: list[tuple[MultiplierSymbol, bool]] = [(self.symbol, False)]
                if self._runs_control():
                    symbols.append((self.control, True))
                for sym, control in symbols:
                    reports.append(
                        guarded(
                            "lema2",
                            {"symbol": sym.name, "p": p, "d": d, "K": self.cfg.K_max},
                            lambda: summability_service.lema2_certify(
                                sym, p, d, self.cfg.K_max, self.budgets, control
                            ),
                        )
                    )
        return reports

    def _factorization(self, rng: np.random.Generator) -> list[CertificationReport]:
        reports = []
        for d in self.cfg.dims:
            for witness in symbol_service.catalog_witnesses(d):
                for p in self.cfg.p_values:
                    reports.append(
                        guarded(
                            "factorization",
                            {"witness": witness.name, "p": p, "d": d, "K": self.cfg.K_max},
                            lambda: multiplier_service.compose_factorization(
                                witness, p, d, self.cfg.K_max, self.budgets
                            ),
                        )
                    )
            reports.append(
                guarded(
                    "schatten_diagonal",
                    {"symbol": self.symbol.name, "d": d, "count": SCHATTEN_COUNT},
                    lambda: multiplier_service.schatten_crosscheck(
                        self.symbol, d, SCHATTEN_COUNT, self.budgets
                    ),
                )
            )
        return reports


def run_suite(
    cfg: SuiteConfig, only: Optional[Sequence[str]] = None
) -> list[CertificationReport]:
    """Run the certification suite and return its reports sorted by key."""
    return CertificationService(cfg, only).run()
