"""Multiplier symbols, factorization witnesses and diagnostic parameters."""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Mapping, Optional

import numpy as np

from src.exceptions import DomainError, PreconditionError
from src.models.lattice import LatticePoint


class SymbolKind(Enum):
    """Where a symbol's values come from."""

    BUILTIN = "builtin"
    TABLE = "table"


class Boundedness(Enum):
    """Catalog flag: is the symbol a bounded W^1_1 -> L_p multiplier."""

    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


PointsEvaluator = Callable[[np.ndarray], np.ndarray]
RadialProfile = Callable[[np.ndarray], np.ndarray]
BoundednessRule = Callable[[float, int], Boundedness]


def _unknown(p: float, d: int) -> Boundedness:
    return Boundedness.UNKNOWN


@dataclass(frozen=True)
class MultiplierSymbol:
    """The sequence lambda_n on Z^d minus the origin.

    ``evaluator`` maps an (m, d) integer array of nonzero points to m complex
    values. Radial symbols additionally expose ``radial_profile`` mapping
    squared Euclidean norms to |lambda_n|, which lets ring sweeps work on
    symmetry orbits instead of every point.
    ``decay_order`` is s when |lambda_n| = |n|_2^(-s) exactly.
    """

    name: str
    kind: SymbolKind
    evaluator: PointsEvaluator = field(repr=False, compare=False)
    d: Optional[int] = None
    radial_profile: Optional[RadialProfile] = field(default=None, repr=False, compare=False)
    bounded_rule: BoundednessRule = field(default=_unknown, repr=False, compare=False)
    citation: str = ""
    decay_order: Optional[float] = None
    table: Optional[Mapping[tuple[int, ...], complex]] = field(
        default=None, repr=False, compare=False
    )

    def check_dimension(self, d: int) -> None:
        """Raise when a fixed-dimension symbol is used in another dimension."""
        if self.d is not None and self.d != d:
            raise PreconditionError(f"symbol {self.name} is defined for d={self.d}, not d={d}")

    def eval_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluate on an (m, d) array of nonzero points."""
        points = np.atleast_2d(np.asarray(points, dtype=np.int64))
        self.check_dimension(points.shape[1])
        return np.asarray(self.evaluator(points), dtype=np.complex128).reshape(points.shape[0])

    def eval(self, n: LatticePoint) -> complex:
        """lambda_n for one nonzero point."""
        if n.is_zero:
            raise DomainError("symbols are not defined at the zero frequency")
        return complex(self.eval_many(np.array([n.coords]))[0])

    @property
    def is_table(self) -> bool:
        """True for finitely supported table symbols."""
        return self.table is not None

    @property
    def is_radial(self) -> bool:
        """True when |lambda_n| depends only on |n|_2."""
        return self.radial_profile is not None

    def boundedness(self, p: float, d: int) -> Boundedness:
        """Catalog boundedness flag for W^1_1(T^d) -> L_p."""
        return self.bounded_rule(p, d)


@dataclass(frozen=True)
class FactorizationWitness:
    """lambda_n = alpha_n * beta_n with |beta_n| |n|_2 <= normB_bound."""

    alpha: MultiplierSymbol
    beta: MultiplierSymbol
    normB_bound: float
    name: str = ""


@dataclass(frozen=True)
class DiagnosticsConfig:
    """Exponents and ranges of the summability diagnostics."""

    p: float
    epsilon: float
    K_max: int
    N: int = 2
    d: int = 2

    def __post_init__(self) -> None:
        if not 1.0 < self.p <= 2.0:
            raise DomainError(f"p must lie in (1, 2], got {self.p}")
        if self.epsilon <= 0:
            raise DomainError("epsilon must be positive")
        if self.K_max < 0 or self.N < 1 or self.d < 1:
            raise DomainError("K_max >= 0, N >= 1 and d >= 1 are required")
        if self.q_main_exact != self.p_prime_exact * (self.d + 2) + Fraction(self.epsilon):
            raise DomainError("main exponent forms disagree")

    @property
    def p_prime_exact(self) -> Fraction:
        """p / (p - 1) in exact arithmetic on the binary value of p."""
        p = Fraction(self.p)
        return p / (p - 1)

    @property
    def p_prime(self) -> float:
        """Dual exponent p' = p / (p - 1)."""
        return float(self.p_prime_exact)

    @property
    def q_main_exact(self) -> Fraction:
        """p' + p'(d + 1) + epsilon, exact."""
        p_prime = self.p_prime_exact
        return p_prime + p_prime * (self.d + 1) + Fraction(self.epsilon)

    @property
    def q_main(self) -> float:
        """Exponent of the main summability sum."""
        return float(self.q_main_exact)

    @property
    def krok2_exponent(self) -> float:
        """Exponent p'(d + 1) + epsilon applied to mu_k."""
        return float(self.p_prime_exact * (self.d + 1) + Fraction(self.epsilon))


@dataclass(frozen=True)
class RingStats:
    """Per-ring sum and maximum of |lambda_n| / |n|_2."""

    k: int
    p: float
    ring_sum: float
    mu_k: float
    argmax_point: Optional[LatticePoint]
    count: int

    def __post_init__(self) -> None:
        if self.mu_k < 0:
            raise PreconditionError("mu_k cannot be negative")
