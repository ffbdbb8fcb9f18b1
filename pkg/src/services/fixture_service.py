"""Seeded input corpora for the certification suite."""

import logging
from pathlib import Path
from typing import Sequence

import numpy as np

from src.models.kernels import TestPhiSpec
from src.models.lattice import LatticePoint
from src.models.trig_poly import TrigPoly
from src.services import kernel_service, trigpoly_service
from src.utils.serialization import kernel_spec_to_json, trigpoly_to_json, write_json

logger = logging.getLogger(__name__)

MAX_POLY_DEGREE = 10
MAX_SPLIT_RING = 15


def poly_corpus(
    rng: np.random.Generator, d: int, count: int, max_degree: int = MAX_POLY_DEGREE
) -> list[TrigPoly]:
    """Random real polynomials of degree at most ``max_degree``."""
    polys = []
    for _ in range(count):
        degree = int(rng.integers(1, max_degree + 1))
        terms = int(rng.integers(1, 2 * degree + 2))
        polys.append(trigpoly_service.random_trig_poly(rng, d, degree, terms))
    return polys


def spec_corpus(rng: np.random.Generator, d: int, N: int, count: int) -> list[TestPhiSpec]:
    """Random same-sector N-sparse test-function specs."""
    return [kernel_service.random_sparse_spec(rng, d, N) for _ in range(count)]


def _direction(rng: np.random.Generator, d: int) -> tuple[int, ...]:
    j0 = int(rng.integers(0, d))
    top = int(rng.integers(1, 3))
    coords = [int(rng.integers(-top, top + 1)) for _ in range(d)]
    coords[j0] = top * int(rng.choice((-1, 1)))
    return tuple(coords)


def split_corpus(
    rng: np.random.Generator, d: int, count: int, max_ring: int = MAX_SPLIT_RING
) -> list[list[LatticePoint]]:
    """Single-sector inputs with one point per ring.

    Each input scales one direction v with max|v_i| in {1, 2} by 3^k over a
    random set of ring indices k. Scaling keeps every coordinate ratio, so
    all points share the sector of v for every N, and v 3^k lies in R_k.
    """
    inputs = []
    for _ in range(count):
        v = _direction(rng, d)
        size = int(rng.integers(1, max_ring + 2))
        rings = sorted(int(k) for k in rng.choice(max_ring + 1, size=size, replace=False))
        inputs.append([LatticePoint(tuple(3**k * c for c in v)) for k in rings])
    return inputs


def write_fixtures(
    directory: Path,
    polys: Sequence[TrigPoly] = (),
    specs: Sequence[TestPhiSpec] = (),
    splits: Sequence[Sequence[LatticePoint]] = (),
) -> list[Path]:
    """Write the corpora as JSON files under ``directory``."""
    directory = Path(directory)
    written = []
    if polys:
        written.append(write_json(directory / "polys.json", [trigpoly_to_json(f) for f in polys]))
    if specs:
        written.append(
            write_json(directory / "specs.json", [kernel_spec_to_json(s) for s in specs])
        )
    if splits:
        written.append(
            write_json(
                directory / "splits.json",
                [[list(n.coords) for n in points] for points in splits],
            )
        )
    logger.info(f"Wrote {len(written)} fixture files to {directory}")
    return written
