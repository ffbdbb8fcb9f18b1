"""Command-line entry point.

Exit codes: 0 pass, 1 certification failure, 2 usage or configuration
error, 3 resource budget exceeded.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from pydantic import ValidationError

from src.config.settings import LOG_FORMAT, get_settings
from src.config.suite_config import SuiteConfig, load_suite_config, parse_int_range
from src.exceptions import (
    ConfigError,
    ConstructionError,
    DomainError,
    PreconditionError,
    ResourceBudgetError,
)
from src.models.kernels import FejerProductSpec, RieszProductSpec, TestPhiSpec
from src.models.lattice import SectorPartition
from src.models.reports import CertificationReport, CertificationStatus
from src.models.symbols import DiagnosticsConfig
from src.services import (
    kernel_service,
    lattice_service,
    multiplier_service,
    report_service,
    summability_service,
    symbol_service,
    trigpoly_service,
)
from src.services.certification_service import CertificationService
from src.utils.numbers import format_decimal
from src.utils.serialization import (
    csv_text,
    kernel_spec_to_json,
    parse_freqs,
    report_slug,
    slugify,
    trigpoly_to_json,
    write_csv,
    write_json,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

RINGS_FIELDS = ["k", "ring_sum", "mu_k", "argmax_n"]
SHARPNESS_FIELDS = ["q", "K", "partial_sum", "classifier"]
DIAGNOSE_FIELDS = ["k", "partial_sum", "krok2_sum", "mu_k"]


class UsageError(Exception):
    """Invalid flag values that argparse cannot detect."""


def _float_list(text: str) -> list[float]:
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from e
    return values


def _int_range(text: str) -> list[int]:
    try:
        return parse_int_range(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a..b or a,b,c, got {text!r}") from e


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    parser = argparse.ArgumentParser(
        prog="tml", description="Certify Fourier-multiplier estimates on the torus."
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
    )
    parser.add_argument("--out", type=Path, default=None, help="Output directory")
    sub = parser.add_subparsers(dest="command", required=True)

    rings = sub.add_parser("rings", help="Ring sums and ring maxima of a symbol")
    rings.add_argument("--d", type=int, required=True)
    rings.add_argument("--k", type=_int_range, required=True)
    rings.add_argument("--symbol", required=True)
    rings.add_argument("--p", type=float, default=2.0)

    sectors = sub.add_parser("sectors", help="Exact sector property check")
    sectors.add_argument("--d", type=int, required=True)
    sectors.add_argument("--N", type=int, required=True)
    sectors.add_argument("--radius", type=int, default=27)

    riesz = sub.add_parser("riesz", help="Riesz product identities")
    riesz.add_argument("--freqs", required=True, help='Frequencies "a,b;c,d"')
    riesz.add_argument("--oversampling", type=int, default=4)

    testfn = sub.add_parser("testfn", help="Build a test function and its W^1_1 norm")
    testfn.add_argument("--type", choices=["fejer_product", "riesz_phi"], required=True)
    testfn.add_argument("--d", type=int, default=1)
    testfn.add_argument("--k", type=int, default=None)
    testfn.add_argument("--freqs", default=None)
    testfn.add_argument("--j0", type=int, default=None)
    testfn.add_argument("--oversampling", type=int, default=8)

    diagnose = sub.add_parser("diagnose", help="Main summability sum and ring-maxima decay")
    diagnose.add_argument("--symbol", required=True)
    diagnose.add_argument("--d", type=int, required=True)
    diagnose.add_argument("--p", type=float, default=2.0)
    diagnose.add_argument("--eps", type=float, default=0.1)
    diagnose.add_argument("--K", type=int, default=5)

    certify = sub.add_parser("certify", help="Run the certification suite")
    certify.add_argument("--suite-config", type=Path, default=None)
    certify.add_argument("--only", default=None, help="Comma separated claim ids or families")
    certify.add_argument("--symbol", default=None)
    certify.add_argument("--seed", type=int, default=None)
    certify.add_argument("--workers", type=int, default=None)
    certify.add_argument("--no-fixtures", action="store_true", help="Skip fixtures/*.json")

    sharpness = sub.add_parser("sharpness", help="Partial sums of sum (|lambda_n|/|n|)^q")
    sharpness.add_argument("--symbol", required=True)
    sharpness.add_argument("--d", type=int, required=True)
    sharpness.add_argument("--p-grid", type=_float_list, default=[])
    sharpness.add_argument("--q-grid", type=_float_list, required=True)
    sharpness.add_argument("--K", type=int, default=8)
    return parser


def _out_dir(args: argparse.Namespace) -> Path:
    return args.out if args.out is not None else get_settings().output_dir


def _report_exit(reports: Sequence[CertificationReport]) -> int:
    failed = [r for r in reports if not r.passed]
    if any(r.status is not CertificationStatus.BUDGET_EXCEEDED for r in failed):
        return EXIT_FAILED
    return EXIT_BUDGET if failed else EXIT_OK


def _emit_reports(reports: Sequence[CertificationReport], out_dir: Path) -> int:
    for report in reports:
        path = report_service.write_report(report, out_dir)
        status = "PASS" if report.passed else "FAIL"
        print(f"{status} {report.key} ({report.status.value}) -> {path}")
    return _report_exit(reports)


def cmd_rings(args: argparse.Namespace) -> int:
    """Ring table: k, ring_sum, mu_k, argmax_n."""
    sym = symbol_service.get_symbol(args.symbol)
    stats = multiplier_service.ring_sweep(sym, args.k, args.p, args.d)
    rows: list[dict[str, Any]] = [
        {
            "k": s.k,
            "ring_sum": s.ring_sum,
            "mu_k": s.mu_k,
            "argmax_n": "" if s.argmax_point is None else str(s.argmax_point),
        }
        for s in stats
    ]
    path = _out_dir(args) / "tables" / f"rings_{slugify(sym.name)}_d{args.d}.csv"
    write_csv(path, RINGS_FIELDS, rows)
    sys.stdout.write(csv_text(RINGS_FIELDS, rows))
    return EXIT_OK


def cmd_sectors(args: argparse.Namespace) -> int:
    """Exact sector property check on a box."""
    report = lattice_service.sector_properties_check(SectorPartition(args.d, args.N), args.radius)
    return _emit_reports([report], _out_dir(args))


def cmd_riesz(args: argparse.Namespace) -> int:
    """Expansion, L_1 and decomposition identities of one Riesz product."""
    spec = RieszProductSpec.from_points(parse_freqs(args.freqs))
    expansion = kernel_service.riesz_expand(spec)
    g = trigpoly_service.choose_quadrature(expansion, args.oversampling)
    reports = [
        kernel_service.riesz_expansion_check(spec, g),
        kernel_service.riesz_l1_certify(spec, g),
        kernel_service.riesz_decomposition_check(spec),
    ]
    return _emit_reports(reports, _out_dir(args))


def cmd_testfn(args: argparse.Namespace) -> int:
    """Build a test function, write it as a fixture and report its norms."""
    out_dir = _out_dir(args)
    if args.type == "fejer_product":
        if args.k is None:
            raise UsageError("testfn --type fejer_product needs --k")
        fejer = FejerProductSpec(args.d, args.k)
        phi = kernel_service.product_fejer(fejer.d, fejer.k)
        reports = [kernel_service.fejer_w11(fejer.d, fejer.k, float(args.oversampling))]
        spec_json = kernel_spec_to_json(fejer)
    else:
        if args.freqs is None or args.j0 is None:
            raise UsageError("testfn --type riesz_phi needs --freqs and --j0")
        points = parse_freqs(args.freqs)
        spec = TestPhiSpec(RieszProductSpec.from_points(points, float(len(points))), args.j0)
        phi = kernel_service.test_phi(spec)
        g = trigpoly_service.choose_quadrature(phi, args.oversampling)
        _, gradient = kernel_service.gradient_report(spec, g)
        ratio = kernel_service.poincare_ratio(spec, g)
        gradient.observed["poincare_ratio"] = ratio.value
        reports = [gradient]
        spec_json = kernel_spec_to_json(spec)
    path = write_json(
        out_dir / "fixtures" / f"testfn_{args.type}.json",
        {"spec": spec_json, "phi": trigpoly_to_json(phi)},
    )
    print(f"wrote {path}")
    return _emit_reports(reports, out_dir)


def cmd_diagnose(args: argparse.Namespace) -> int:
    """Main-sum partial sums and ring-maxima decay of one symbol."""
    sym = symbol_service.get_symbol(args.symbol)
    cfg = DiagnosticsConfig(p=args.p, epsilon=args.eps, K_max=args.K, d=args.d)
    main = summability_service.main_sum_partial(sym, cfg)
    decay = summability_service.lema2_decay_report(sym, args.d, args.K)
    rows = [
        {"k": k, "partial_sum": s, "krok2_sum": t, "mu_k": m}
        for k, (s, t, m) in enumerate(zip(main.partial_sums, main.krok2_sums, main.mu))
    ]
    out_dir = _out_dir(args)
    table = out_dir / "tables" / f"diagnose_{slugify(sym.name)}_d{args.d}.csv"
    write_csv(table, DIAGNOSE_FIELDS, rows)
    sys.stdout.write(csv_text(DIAGNOSE_FIELDS, rows))
    print(f"q_main={format_decimal(main.q_main)} trend={main.trend.classification.value}")
    print(f"split_holds={main.split_holds} mu_decays={decay.decays}")
    return EXIT_OK


def cmd_certify(args: argparse.Namespace) -> int:
    """Run the suite, write suite.json, reports and tables."""
    cfg = load_suite_config(args.suite_config) if args.suite_config else SuiteConfig()
    cfg = cfg.with_overrides(symbol=args.symbol, seed=args.seed, workers=args.workers)
    only = [c.strip() for c in args.only.split(",") if c.strip()] if args.only else None
    service = CertificationService(cfg, only)
    out_dir = _out_dir(args)
    logger.info(f"Running {len(service.selected_families())} claim families into {out_dir}")
    reports = service.run()
    if not args.no_fixtures:
        service.write_fixtures(out_dir / "fixtures")
    document = report_service.write_suite(reports, cfg, out_dir)
    for report in reports:
        if not report.passed:
            path = f"reports/{report_slug(report)}.json"
            print(f"FAIL {report.key} ({report.status.value}) -> {path}")
    print(f"{document.counts['total']} reports, {document.counts['not_passed']} not passed")
    return _report_exit(reports)


def cmd_sharpness(args: argparse.Namespace) -> int:
    """Partial-sum table q, K, partial_sum, classifier."""
    if not args.q_grid:
        raise UsageError("--q-grid needs at least one exponent")
    sym = symbol_service.get_symbol(args.symbol)
    report = summability_service.sharpness_explore(sym, args.d, args.q_grid, args.K, args.p_grid)
    rows = [
        {"q": row.q, "K": row.K, "partial_sum": row.partial_sum, "classifier": row.classifier.value}
        for row in report.rows
    ]
    out_dir = _out_dir(args)
    table = out_dir / "tables" / f"sharpness_{slugify(sym.name)}_d{args.d}.csv"
    write_csv(table, SHARPNESS_FIELDS, rows)
    sys.stdout.write(csv_text(SHARPNESS_FIELDS, rows))
    for p, trend in sorted(report.schatten_trends.items()):
        print(f"schatten p={format_decimal(p)}: {trend.classification.value}")
    return EXIT_OK


COMMANDS = {
    "rings": cmd_rings,
    "sectors": cmd_sectors,
    "riesz": cmd_riesz,
    "testfn": cmd_testfn,
    "diagnose": cmd_diagnose,
    "certify": cmd_certify,
    "sharpness": cmd_sharpness,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(level=args.log_level, format=LOG_FORMAT)
    try:
        return COMMANDS[args.command](args)
    except ResourceBudgetError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        UsageError,
        ConfigError,
        ValidationError,
        DomainError,
        PreconditionError,
        ConstructionError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
