"""Domain value types."""

from .kernels import FejerProductSpec, RieszProductSpec, SignPattern, TestPhiSpec
from .lattice import LatticePoint, SectorId, SectorPartition, SparseSequence, TriadicRingIndex
from .reports import (
    CertificationReport,
    CertificationStatus,
    DecayReport,
    Expectation,
    MainSumReport,
    SharpnessReport,
    TrendClass,
    TrendReport,
)
from .symbols import (
    Boundedness,
    DiagnosticsConfig,
    FactorizationWitness,
    MultiplierSymbol,
    RingStats,
    SymbolKind,
)
from .trig_poly import GridSpec, NormMethod, NormReport, SampleSpec, TrigPoly

__all__ = [
    "Boundedness",
    "CertificationReport",
    "CertificationStatus",
    "DecayReport",
    "DiagnosticsConfig",
    "Expectation",
    "FactorizationWitness",
    "FejerProductSpec",
    "GridSpec",
    "LatticePoint",
    "MainSumReport",
    "MultiplierSymbol",
    "NormMethod",
    "NormReport",
    "RieszProductSpec",
    "RingStats",
    "SampleSpec",
    "SectorId",
    "SectorPartition",
    "SharpnessReport",
    "SignPattern",
    "SparseSequence",
    "SymbolKind",
    "TestPhiSpec",
    "TrendClass",
    "TrendReport",
    "TriadicRingIndex",
    "TrigPoly",
]
