"""Multiplier symbol catalog and the diagonal action T^f(n) = lambda_n f^(n).

Catalog names:

- ``one``: lambda = 1, the Sobolev embedding.
- ``zero``: lambda = 0.
- ``power:s``: lambda_n = |n|_2^(-s).
- ``norm``: lambda_n = |n|_2, the unbounded negative control.
- ``table:<file>``: CSV rows ``n_1,...,n_d,re,im``; missing points are 0.
"""

import csv
import logging
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.exceptions import ConfigError, DomainError, PreconditionError
from src.models.symbols import (
    Boundedness,
    FactorizationWitness,
    MultiplierSymbol,
    SymbolKind,
)
from src.models.trig_poly import Coefficient, TrigPoly

logger = logging.getLogger(__name__)

SOBOLEV_CITATION = "W^1_1(T^d) embeds in L_p exactly for p <= d/(d-1)"


def _norms(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=np.float64)
    return np.sqrt(np.einsum("ij,ij->i", points, points))


def _sobolev_rule(p: float, d: int) -> Boundedness:
    if d == 1 or p <= d / (d - 1):
        return Boundedness.YES
    return Boundedness.NO


def _smoothing_rule(s: float):
    def rule(p: float, d: int) -> Boundedness:
        if 1 + s >= d * (1 - 1 / p):
            return Boundedness.YES
        return Boundedness.UNKNOWN

    return rule


def _always(flag: Boundedness):
    def rule(p: float, d: int) -> Boundedness:
        return flag

    return rule


def one_symbol() -> MultiplierSymbol:
    """lambda = 1."""
    return MultiplierSymbol(
        name="one",
        kind=SymbolKind.BUILTIN,
        evaluator=lambda points: np.ones(len(points), dtype=np.complex128),
        radial_profile=lambda norms_sq: np.ones(len(norms_sq)),
        bounded_rule=_sobolev_rule,
        citation=SOBOLEV_CITATION,
        decay_order=0.0,
    )


def zero_symbol() -> MultiplierSymbol:
    """lambda = 0."""
    return MultiplierSymbol(
        name="zero",
        kind=SymbolKind.BUILTIN,
        evaluator=lambda points: np.zeros(len(points), dtype=np.complex128),
        radial_profile=lambda norms_sq: np.zeros(len(norms_sq)),
        bounded_rule=_always(Boundedness.YES),
        citation="the zero operator",
    )


def power_symbol(s: float) -> MultiplierSymbol:
    """lambda_n = |n|_2^(-s).

    s = 0 is the identity and follows the Sobolev embedding exactly. Positive
    s maps W^1_1 into W^(1+s)_1, which embeds in L_p when 1 + s >= d(1 - 1/p);
    outside that range the answer is left unknown. Orders s <= -1 are at
    least one derivative and unbounded; the range -1 < s < 0 is unknown.
    """
    if not math.isfinite(s):
        raise DomainError(f"power exponent must be finite, got {s}")
    if s == 0:
        rule = _sobolev_rule
        citation = SOBOLEV_CITATION
    elif s > 0:
        rule = _smoothing_rule(s)
        citation = "W^(1+s)_1(T^d) embeds in L_p for 1 + s >= d(1 - 1/p)"
    elif s <= -1:
        rule = _always(Boundedness.NO)
        citation = "differential order >= 1 does not map W^1_1 into L_p, p > 1"
    else:
        rule = _always(Boundedness.UNKNOWN)
        citation = ""
    return MultiplierSymbol(
        name=f"power:{s:g}",
        kind=SymbolKind.BUILTIN,
        evaluator=lambda points: _norms(points) ** (-s),
        radial_profile=lambda norms_sq: np.asarray(norms_sq, dtype=np.float64) ** (-s / 2),
        bounded_rule=rule,
        citation=citation,
        decay_order=s,
    )


def norm_symbol() -> MultiplierSymbol:
    """lambda_n = |n|_2, never bounded."""
    return MultiplierSymbol(
        name="norm",
        kind=SymbolKind.BUILTIN,
        evaluator=_norms,
        radial_profile=lambda norms_sq: np.sqrt(np.asarray(norms_sq, dtype=np.float64)),
        bounded_rule=_always(Boundedness.NO),
        citation="|n|_2 grows along every ring; negative control",
        decay_order=-1.0,
    )


def load_table_symbol(path: Path, name: Optional[str] = None) -> MultiplierSymbol:
    """Load a finitely supported symbol from CSV.

    Args:
        path: File with rows ``n_1,...,n_d,re,im``. Blank lines and lines
            starting with ``#`` are ignored.
        name: Symbol name; defaults to ``table:<path>``.

    Returns:
        A table symbol, zero off the listed points.

    Raises:
        ConfigError: On unreadable files, malformed rows, the zero point,
            duplicated points or inconsistent dimensions.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read symbol table {path}: {e}") from e

    values: dict[tuple[int, ...], complex] = {}
    d: Optional[int] = None
    for number, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        if len(row) < 3:
            raise ConfigError(f"expected n_1,...,n_d,re,im, got {row}", line=number)
        try:
            point = tuple(int(c) for c in row[:-2])
            value = complex(float(row[-2]), float(row[-1]))
        except ValueError as e:
            raise ConfigError(f"malformed symbol row: {e}", line=number) from e
        if d is None:
            d = len(point)
        elif len(point) != d:
            raise ConfigError(f"row has dimension {len(point)}, expected {d}", line=number)
        if not any(point):
            raise ConfigError("symbols are not defined at the zero frequency", line=number)
        if point in values:
            raise ConfigError(f"duplicate point {point}", line=number)
        values[point] = value

    logger.info(f"Loaded symbol table {path} with {len(values)} points")
    return table_symbol(values, d, name or f"table:{path}")


def table_symbol(
    values: dict[tuple[int, ...], complex], d: Optional[int], name: str = "table"
) -> MultiplierSymbol:
    """Immutable finitely supported symbol from a point -> value map."""
    frozen = {tuple(k): complex(v) for k, v in values.items() if v != 0}

    def evaluate(points: np.ndarray) -> np.ndarray:
        values = [frozen.get(tuple(row), 0j) for row in points.tolist()]
        return np.array(values, dtype=np.complex128)

    return MultiplierSymbol(
        name=name,
        kind=SymbolKind.TABLE,
        evaluator=evaluate,
        d=d,
        bounded_rule=_always(Boundedness.YES),
        citation="finite rank",
        table=frozen,
    )


def get_symbol(name: str) -> MultiplierSymbol:
    """Resolve a catalog name.

    Raises:
        ConfigError: For unknown names or malformed parameters.
    """
    name = name.strip()
    if name == "one":
        return one_symbol()
    if name == "zero":
        return zero_symbol()
    if name == "norm":
        return norm_symbol()
    if name.startswith("power:"):
        try:
            s = float(name.removeprefix("power:"))
        except ValueError as e:
            raise ConfigError(f"bad power exponent in {name!r}") from e
        return power_symbol(s)
    if name.startswith("table:"):
        return load_table_symbol(Path(name.removeprefix("table:")), name)
    raise ConfigError(f"unknown symbol {name!r}; expected one, zero, norm, power:s or table:<file>")


def product_symbol(alpha: MultiplierSymbol, beta: MultiplierSymbol) -> MultiplierSymbol:
    """lambda_n = alpha_n * beta_n."""
    if alpha.d is not None and beta.d is not None and alpha.d != beta.d:
        raise PreconditionError("factor symbols have different dimensions")
    radial = None
    if alpha.radial_profile is not None and beta.radial_profile is not None:
        a, b = alpha.radial_profile, beta.radial_profile
        radial = lambda norms_sq: a(norms_sq) * b(norms_sq)  # noqa: E731
    return MultiplierSymbol(
        name=f"{alpha.name}*{beta.name}",
        kind=SymbolKind.BUILTIN,
        evaluator=lambda points: alpha.eval_many(points) * beta.eval_many(points),
        d=alpha.d if alpha.d is not None else beta.d,
        radial_profile=radial,
        decay_order=(
            alpha.decay_order + beta.decay_order
            if alpha.decay_order is not None and beta.decay_order is not None
            else None
        ),
    )


def catalog_witnesses(d: int) -> list[FactorizationWitness]:
    """The three factorization witnesses of the catalog.

    |beta_n| |n|_2 is 1 for the first two and 0 for the third.
    """
    if d < 1:
        raise DomainError("dimension must be positive")
    inverse = power_symbol(1.0)
    return [
        FactorizationWitness(inverse, inverse, 1.0, "power1*power1"),
        FactorizationWitness(one_symbol(), inverse, 1.0, "one*power1"),
        FactorizationWitness(one_symbol(), zero_symbol(), 0.0, "one*zero"),
    ]


def _factor(value: complex) -> Union[Coefficient, int]:
    if value.imag == 0 and float(value.real).is_integer():
        return int(value.real)
    return value


def apply(sym: MultiplierSymbol, f: TrigPoly) -> TrigPoly:
    """Coefficient-wise product lambda_n f^(n).

    The zero frequency passes through unchanged. Integer symbol values keep
    rational coefficients exact.
    """
    sym.check_dimension(f.d)
    origin = (0,) * f.d
    nonzero = [n for n in f.support if n != origin]
    coeffs: dict[tuple[int, ...], Union[Coefficient, int]] = {}
    if nonzero:
        values = sym.eval_many(np.array(nonzero, dtype=np.int64))
        for n, value in zip(nonzero, values.tolist()):
            coeffs[n] = f.reduced_coeff(n) * _factor(value)
    if origin in f.support:
        coeffs[origin] = f.reduced_coeff(origin)
    return TrigPoly(f.d, coeffs, f.twopi_i_power)
