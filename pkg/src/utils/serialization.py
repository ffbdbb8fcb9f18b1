"""JSON and CSV encoding of polynomials, kernel specs and reports.

Output is deterministic: JSON keys are sorted, numbers are decimal strings
with 17 significant digits (exact rationals as ``p/q``), CSV uses ``\\n``
line endings.
"""

import csv
import io
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence, Union

from src.exceptions import ConfigError
from src.models.kernels import FejerProductSpec, RieszProductSpec, TestPhiSpec
from src.models.lattice import LatticePoint, SparseSequence
from src.models.report_schema import ReportDocument
from src.models.reports import CertificationReport
from src.models.trig_poly import TrigPoly
from src.utils.numbers import format_decimal, format_rational, is_rational_text, parse_rational

KernelJson = Union[FejerProductSpec, TestPhiSpec, RieszProductSpec]

_SLUG = re.compile(r"[^A-Za-z0-9_.=,-]+")


# Polynomials


def _coefficient_text(value: Union[Fraction, complex]) -> tuple[str, str]:
    if isinstance(value, Fraction):
        return format_rational(value), "0"
    return format_decimal(value.real), format_decimal(value.imag)


def trigpoly_to_json(f: TrigPoly) -> dict[str, Any]:
    """``{"d", "twopi_i_power", "terms": [{"freq", "re", "im"}]}``.

    ``re`` and ``im`` are always the full coefficient f^(n). When the
    (2 pi i)^s factor is present they are decimals, and the exact reduced
    coefficient is kept alongside as ``reduced_re`` and ``reduced_im``.
    """
    terms = []
    for freq, value in f:
        if f.twopi_i_power == 0:
            re_text, im_text = _coefficient_text(value)
            terms.append({"freq": list(freq), "re": re_text, "im": im_text})
            continue
        full = complex(value) * f.scale_factor
        reduced_re, reduced_im = _coefficient_text(value)
        terms.append(
            {
                "freq": list(freq),
                "re": format_decimal(full.real),
                "im": format_decimal(full.imag),
                "reduced_re": reduced_re,
                "reduced_im": reduced_im,
            }
        )
    return {"d": f.d, "twopi_i_power": f.twopi_i_power, "terms": terms}


def _coefficient(re_value: Any, im_value: Any) -> Union[Fraction, complex]:
    re_text, im_text = str(re_value), str(im_value)
    if is_rational_text(re_text) and is_rational_text(im_text):
        real, imag = parse_rational(re_text), parse_rational(im_text)
        if imag == 0:
            return real
        return complex(float(real), float(imag))
    return complex(float(re_text), float(im_text))


def trigpoly_from_json(data: Union[Mapping[str, Any], Sequence[Any]]) -> TrigPoly:
    """Decode a polynomial; a bare list of terms is read with twopi_i_power 0.

    A nonzero ``twopi_i_power`` is kept only when every term carries its
    reduced coefficient; otherwise ``re`` and ``im`` are read as full
    coefficients of a polynomial without the (2 pi i)^s factor.

    Raises:
        ConfigError: On malformed documents.
    """
    if isinstance(data, Mapping):
        terms = data.get("terms", [])
        power = int(data.get("twopi_i_power", 0))
        d = data.get("d")
    else:
        terms, power, d = data, 0, None
    try:
        reduced = power != 0 and all("reduced_re" in term for term in terms)
        if not reduced:
            power = 0
        re_key, im_key = ("reduced_re", "reduced_im") if reduced else ("re", "im")
        coeffs = {
            tuple(int(c) for c in term["freq"]): _coefficient(
                term.get(re_key, 0), term.get(im_key, 0)
            )
            for term in terms
        }
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"malformed polynomial term: {e}") from e
    if d is None:
        if not coeffs:
            raise ConfigError("an empty term list needs an explicit dimension")
        d = len(next(iter(coeffs)))
    return TrigPoly(int(d), coeffs, power)


# Kernel specs


def parse_freqs(text: str) -> list[LatticePoint]:
    """Parse ``"a,b;c,d"`` into lattice points.

    Raises:
        ConfigError: On malformed or mixed-dimension input.
    """
    points = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        try:
            points.append(LatticePoint(tuple(int(c) for c in chunk.split(","))))
        except ValueError as e:
            raise ConfigError(f"bad frequency {chunk!r}: {e}") from e
    if not points:
        raise ConfigError("no frequencies given")
    if len({p.d for p in points}) != 1:
        raise ConfigError("frequencies of different dimensions")
    return points


def kernel_spec_to_json(spec: KernelJson) -> dict[str, Any]:
    """Encode a Fejer product or Riesz test-function spec."""
    if isinstance(spec, FejerProductSpec):
        return {"type": "fejer_product", "d": spec.d, "k": spec.k}
    riesz = spec.riesz if isinstance(spec, TestPhiSpec) else spec
    data: dict[str, Any] = {
        "type": "riesz_phi" if isinstance(spec, TestPhiSpec) else "riesz_product",
        "d": riesz.d,
        "freqs": [list(n.coords) for n in riesz.points],
        "alpha": format_decimal(riesz.freqs.alpha),
    }
    if isinstance(spec, TestPhiSpec):
        data["j0"] = spec.j0
    return data


def kernel_spec_from_json(data: Mapping[str, Any]) -> KernelJson:
    """Decode a kernel spec; the constructors re-validate every invariant."""
    kind = data.get("type")
    if kind == "fejer_product":
        return FejerProductSpec(int(data["d"]), int(data["k"]))
    if kind not in ("riesz_phi", "riesz_product"):
        raise ConfigError(f"unknown kernel type {kind!r}")
    points = tuple(LatticePoint(tuple(int(c) for c in n)) for n in data["freqs"])
    alpha = float(data.get("alpha", 1.0))
    riesz = RieszProductSpec(SparseSequence(points, alpha), int(data["d"]))
    if kind == "riesz_phi":
        return TestPhiSpec(riesz, int(data["j0"]))
    return riesz


# Reports


def _param(value: Any) -> Any:
    if isinstance(value, bool) or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return format_decimal(value)
    if isinstance(value, (list, tuple)):
        return [_param(v) for v in value]
    return str(value)


def report_to_document(report: CertificationReport) -> ReportDocument:
    """Validated JSON document of one report."""
    return ReportDocument(
        claim_id=report.claim_id,
        key=report.key,
        params={name: _param(value) for name, value in report.params.items()},
        passed=report.passed,
        status=report.status.value,
        expectation=report.expectation.value,
        observed={name: format_decimal(value) for name, value in report.observed.items()},
        tolerance=format_decimal(report.tolerance),
        series={
            name: [format_decimal(v) for v in values] for name, values in report.series.items()
        },
        artifacts=list(report.artifacts),
        notes=list(report.notes),
    )


def slugify(text: str) -> str:
    """File-name-safe form of a key or symbol name."""
    return _SLUG.sub("_", text).strip("_")


def report_slug(report: CertificationReport) -> str:
    """File-name-safe form of the report key."""
    return slugify(report.key)


# Files


def dumps_json(data: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: Path, data: Any) -> Path:
    """Write canonical JSON, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_json(data), encoding="utf-8")
    return path


def read_json(path: Path) -> Any:
    """Read a JSON file.

    Raises:
        ConfigError: On unreadable or malformed files.
    """
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read JSON {path}: {e}") from e


def csv_text(fieldnames: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> str:
    """CSV text with a header row; floats are formatted with format_decimal."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(
            {k: format_decimal(v) if isinstance(v, float) else v for k, v in row.items()}
        )
    return buffer.getvalue()


def write_csv(path: Path, fieldnames: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> Path:
    """Write a CSV table, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(fieldnames, rows), encoding="utf-8")
    return path
