"""Seeded random instance generators for tests and audits."""

from __future__ import annotations

import numpy as np

from .operators import HermitianOperator, OrthoProjection
from .relent import DensityMatrix


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> HermitianOperator:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(scale * 0.5 * (m + m.conj().T))


def random_psd(rng: np.random.Generator, dim: int, scale: float = 1.0) -> HermitianOperator:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(scale * (m @ m.conj().T) / dim)


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(m)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> DensityMatrix:
    rank = dim if rank is None else rank
    m = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = m @ m.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def random_block_projection(rng: np.random.Generator, dim: int) -> OrthoProjection:
    """Coordinate-mask projection with rank in [1, dim-1]."""
    rank = int(rng.integers(1, dim))
    idx = rng.choice(dim, size=rank, replace=False)
    return OrthoProjection.from_mask(dim, idx)


def random_projection(rng: np.random.Generator, dim: int, rank: int) -> OrthoProjection:
    """General (non-block) projection of the given rank."""
    u = random_unitary(rng, dim)
    v = u[:, :rank]
    return OrthoProjection(v @ v.conj().T)
