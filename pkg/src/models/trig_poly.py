"""Trigonometric polynomials on the torus T^d = [0,1)^d and quadrature specs.

Characters are e_n(t) = exp(2*pi*i*<n,t>). A ``TrigPoly`` stores *reduced*
coefficients c_n together with an integer power s of the factor (2*pi*i):

    f(t) = (2*pi*i)^s * sum_n c_n e_n(t)

Kernel constructions produce rational c_n with s = 0; differentiation
multiplies c_n by n^(j) and raises s by one, so derivatives and
antiderivatives of rational polynomials stay coefficient-exact.
"""

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Union

from src.exceptions import PreconditionError

Frequency = tuple[int, ...]
Coefficient = Union[Fraction, complex]

TWO_PI_I = 2j * math.pi


def normalize_coefficient(value: Union[int, float, complex, Fraction]) -> Coefficient:
    """Map ints to Fractions and floats to complex numbers."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, int):
        return Fraction(value)
    return complex(value)


def _is_zero(value: Coefficient) -> bool:
    return value == 0


class TrigPoly:
    """Finitely supported Fourier series on T^d."""

    __slots__ = ("_d", "_coeffs", "_power")

    def __init__(
        self,
        d: int,
        coeffs: Mapping[Frequency, Union[int, float, complex, Fraction]],
        twopi_i_power: int = 0,
    ):
        """Build a polynomial.

        Args:
            d: Dimension of the torus.
            coeffs: Map from frequency tuples to reduced coefficients.
            twopi_i_power: Power s of the common factor (2*pi*i).
        """
        if d < 1:
            raise PreconditionError("dimension must be positive")
        normalized: dict[Frequency, Coefficient] = {}
        for freq, value in coeffs.items():
            key = tuple(int(c) for c in freq)
            if len(key) != d:
                raise PreconditionError(f"frequency {key} is not {d}-dimensional")
            coefficient = normalize_coefficient(value)
            if not _is_zero(coefficient):
                normalized[key] = coefficient
        self._d = d
        self._coeffs = dict(sorted(normalized.items()))
        self._power = int(twopi_i_power) if normalized else 0

    # Constructors

    @classmethod
    def zero(cls, d: int) -> "TrigPoly":
        """The zero polynomial."""
        return cls(d, {})

    @classmethod
    def constant(cls, d: int, value: Union[int, float, complex, Fraction] = 1) -> "TrigPoly":
        """A constant function."""
        return cls(d, {(0,) * d: value})

    @classmethod
    def character(
        cls, freq: Iterable[int], value: Union[int, float, complex, Fraction] = 1
    ) -> "TrigPoly":
        """A single scaled character value * e_n."""
        key = tuple(freq)
        return cls(len(key), {key: value})

    @classmethod
    def cosine(cls, freq: Iterable[int]) -> "TrigPoly":
        """cos(2*pi*<n,t>) = (e_n + e_{-n}) / 2."""
        key = tuple(freq)
        if all(c == 0 for c in key):
            return cls.constant(len(key))
        negated = tuple(-c for c in key)
        return cls(len(key), {key: Fraction(1, 2), negated: Fraction(1, 2)})

    # Accessors

    @property
    def d(self) -> int:
        """Torus dimension."""
        return self._d

    @property
    def twopi_i_power(self) -> int:
        """Power s of the common (2*pi*i) factor."""
        return self._power

    @property
    def support(self) -> list[Frequency]:
        """Frequencies with nonzero coefficient, sorted."""
        return list(self._coeffs)

    def __len__(self) -> int:
        return len(self._coeffs)

    def __iter__(self) -> Iterator[tuple[Frequency, Coefficient]]:
        return iter(self._coeffs.items())

    @property
    def degree(self) -> int:
        """Largest max-coordinate over the support (0 for constants and zero)."""
        return max((max(abs(c) for c in freq) for freq in self._coeffs), default=0)

    @property
    def is_exact(self) -> bool:
        """True when every reduced coefficient is rational."""
        return all(isinstance(c, Fraction) for c in self._coeffs.values())

    @property
    def is_zero(self) -> bool:
        """True for the zero polynomial."""
        return not self._coeffs

    def reduced_coeff(self, freq: Iterable[int]) -> Coefficient:
        """Reduced coefficient c_n (without the (2*pi*i)^s factor)."""
        return self._coeffs.get(tuple(freq), Fraction(0))

    def coeff(self, freq: Iterable[int]) -> complex:
        """Full Fourier coefficient f^(n) as a complex number."""
        value = self._coeffs.get(tuple(freq))
        if value is None:
            return 0j
        return complex(value) * self.scale_factor

    @property
    def scale_factor(self) -> complex:
        """The factor (2*pi*i)^s as a complex number."""
        return TWO_PI_I**self._power if self._power else 1 + 0j

    @property
    def mean(self) -> complex:
        """Mean value (coefficient at the zero frequency)."""
        return self.coeff((0,) * self._d)

    def full_coefficients(self) -> dict[Frequency, complex]:
        """All full coefficients as complex numbers."""
        factor = self.scale_factor
        return {freq: complex(c) * factor for freq, c in self._coeffs.items()}

    def is_real_valued(self, rel_tol: float = 1e-12) -> bool:
        """True iff f^(-n) equals the conjugate of f^(n) for every n."""
        sign = -1 if self._power % 2 else 1
        for freq, value in self._coeffs.items():
            mirror = self._coeffs.get(tuple(-c for c in freq), Fraction(0))
            if isinstance(value, Fraction) and isinstance(mirror, Fraction):
                if mirror != sign * value:
                    return False
                continue
            expected = complex(value).conjugate() * sign
            if not cmath.isclose(complex(mirror), expected, rel_tol=rel_tol, abs_tol=1e-300):
                return False
        return True

    # Algebra

    def _as_float(self) -> "TrigPoly":
        return TrigPoly(self._d, self.full_coefficients(), 0)

    def _aligned(self, other: "TrigPoly") -> tuple["TrigPoly", "TrigPoly"]:
        if self._d != other._d:
            raise PreconditionError("dimension mismatch")
        if self._power == other._power or other.is_zero or self.is_zero:
            return self, other
        return self._as_float(), other._as_float()

    def __add__(self, other: "TrigPoly") -> "TrigPoly":
        a, b = self._aligned(other)
        power = a._power if not a.is_zero else b._power
        merged: dict[Frequency, Coefficient] = dict(a._coeffs)
        for freq, value in b._coeffs.items():
            merged[freq] = merged.get(freq, Fraction(0)) + value
        return TrigPoly(self._d, merged, power)

    def __neg__(self) -> "TrigPoly":
        return TrigPoly(self._d, {f: -c for f, c in self._coeffs.items()}, self._power)

    def __sub__(self, other: "TrigPoly") -> "TrigPoly":
        return self + (-other)

    def scale(self, factor: Union[int, float, complex, Fraction]) -> "TrigPoly":
        """Multiply every coefficient by a scalar."""
        value = normalize_coefficient(factor)
        return TrigPoly(self._d, {f: c * value for f, c in self._coeffs.items()}, self._power)

    def __mul__(self, other: "TrigPoly") -> "TrigPoly":
        """Pointwise product (convolution of coefficients)."""
        if self._d != other._d:
            raise PreconditionError("dimension mismatch")
        product: dict[Frequency, Coefficient] = {}
        for fa, ca in self._coeffs.items():
            for fb, cb in other._coeffs.items():
                key = tuple(x + y for x, y in zip(fa, fb))
                product[key] = product.get(key, Fraction(0)) + ca * cb
        return TrigPoly(self._d, product, self._power + other._power)

    def conjugate(self) -> "TrigPoly":
        """Complex conjugate function."""
        sign = -1 if self._power % 2 else 1
        flipped: dict[Frequency, Coefficient] = {}
        for freq, value in self._coeffs.items():
            mirrored = tuple(-c for c in freq)
            flipped[mirrored] = (
                value * sign if isinstance(value, Fraction) else value.conjugate() * sign
            )
        return TrigPoly(self._d, flipped, self._power)

    def without_constant(self) -> "TrigPoly":
        """Copy with the zero-frequency coefficient removed."""
        origin = (0,) * self._d
        return TrigPoly(
            self._d, {f: c for f, c in self._coeffs.items() if f != origin}, self._power
        )

    def same_coefficients(self, other: "TrigPoly") -> bool:
        """Coefficient-exact equality (same support, power and reduced values)."""
        return (
            self._d == other._d
            and self._power == other._power
            and self._coeffs == other._coeffs
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return self.same_coefficients(other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"<TrigPoly(d={self._d}, terms={len(self._coeffs)}, "
            f"degree={self.degree}, s={self._power})>"
        )


@dataclass(frozen=True)
class GridSpec:
    """Uniform M^d grid t = (m_1/M, ..., m_d/M) for evaluation and quadrature."""

    M: int
    degree: int = 0

    def __post_init__(self) -> None:
        if self.M < 1:
            raise PreconditionError("grid needs at least one sample per axis")

    @property
    def oversampling(self) -> float:
        """M / (2 * degree + 1)."""
        return self.M / (2 * self.degree + 1)

    def refined(self) -> "GridSpec":
        """The doubled grid used for the one-step refinement."""
        return GridSpec(2 * self.M, self.degree)

    @classmethod
    def for_degree(cls, degree: int, oversampling: float = 4.0) -> "GridSpec":
        """Smallest power-of-two grid with at least the requested oversampling."""
        needed = math.ceil(oversampling * (2 * degree + 1))
        M = 1
        while M < needed:
            M *= 2
        return cls(M, degree)


@dataclass(frozen=True)
class SampleSpec:
    """Scrambled Sobol point set of size 2^log2_points used when dense grids are too large."""

    log2_points: int = 16
    seed: int = 0

    @property
    def n_points(self) -> int:
        """Number of sample points."""
        return 1 << self.log2_points

    def refined(self) -> "SampleSpec":
        """The doubled point set used for the one-step refinement."""
        return SampleSpec(self.log2_points + 1, self.seed)


QuadratureSpec = Union[GridSpec, SampleSpec]


class NormMethod(Enum):
    """How a norm value was obtained."""

    EXACT_COEFFICIENT = "exact-coefficient"
    FLOAT_COEFFICIENT = "float-coefficient"
    QUADRATURE = "quadrature"
    SAMPLED = "sampled"

    @property
    def needs_grid(self) -> bool:
        """True for values read off a quadrature grid or sample set."""
        return self in (NormMethod.QUADRATURE, NormMethod.SAMPLED)


@dataclass(frozen=True)
class NormReport:
    """Value of a norm together with how it was computed."""

    value: float
    p: float
    method: NormMethod
    grid: Optional[QuadratureSpec] = None
    error_hint: float = 0.0

    def __post_init__(self) -> None:
        if self.value < 0:
            raise PreconditionError("a norm cannot be negative")
        if self.method.needs_grid and self.grid is None:
            raise PreconditionError("quadrature norms must record their grid")

    @property
    def tolerance(self) -> float:
        """Pass/fail margin 2 * error_hint + 1e-9."""
        return 2.0 * self.error_hint + 1e-9
