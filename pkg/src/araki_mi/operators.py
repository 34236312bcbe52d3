"""Finite Hermitian operators with cached spectral data, and orthogonal projections."""

from __future__ import annotations

from typing import Callable, Iterable, Optional

import numpy as np

HERMITICITY_TOL = 1e-12
RECOMPOSITION_TOL = 1e-9


def _square_complex(mat) -> np.ndarray:
    m = np.asarray(mat, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


class HermitianOperator:
    """A Hermitian matrix together with its (lazily computed) eigendecomposition."""

    def __init__(self, mat):
        m = _square_complex(mat)
        scale = max(1.0, float(np.linalg.norm(m)))
        defect = np.linalg.norm(m - m.conj().T)
        if defect > HERMITICITY_TOL * scale:
            raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
        self.mat = 0.5 * (m + m.conj().T)
        self.dim = m.shape[0]
        self._w: Optional[np.ndarray] = None
        self._u: Optional[np.ndarray] = None

    def _decompose(self):
        if self._w is None:
            w, u = np.linalg.eigh(self.mat)
            recomp = np.linalg.norm((u * w) @ u.conj().T - self.mat)
            if recomp > RECOMPOSITION_TOL * max(1.0, np.linalg.norm(self.mat)):
                raise ArithmeticError(f"eigendecomposition failed to recompose ({recomp:.3e})")
            self._w, self._u = w, u
        return self._w, self._u

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._decompose()[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._decompose()[1]

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Functional calculus: f applied to the eigenvalues."""
        w, u = self._decompose()
        return (u * f(w)) @ u.conj().T

    def operator_norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues)))

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def trace(self) -> float:
        return float(np.real(np.trace(self.mat)))

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim})"


class OrthoProjection:
    """Orthogonal projection, either a coordinate-block mask or a general idempotent."""

    def __init__(self, mat, mask: Optional[tuple] = None):
        m = _square_complex(mat)
        scale = max(1.0, float(np.linalg.norm(m)))
        if np.linalg.norm(m - m.conj().T) > HERMITICITY_TOL * scale:
            raise ValueError("projection is not Hermitian")
        if np.linalg.norm(m @ m - m) > 1e-12 * scale:
            raise ValueError("projection is not idempotent")
        self.mat = 0.5 * (m + m.conj().T)
        self.dim = m.shape[0]
        self.mask = mask

    @classmethod
    def from_mask(cls, dim: int, indices: Iterable[int]) -> "OrthoProjection":
        idx = tuple(sorted(set(int(i) for i in indices)))
        if idx and (idx[0] < 0 or idx[-1] >= dim):
            raise ValueError("mask indices out of range")
        m = np.zeros((dim, dim), dtype=complex)
        for i in idx:
            m[i, i] = 1.0
        return cls(m, mask=idx)

    def complement(self) -> "OrthoProjection":
        mask = None
        if self.mask is not None:
            mask = tuple(i for i in range(self.dim) if i not in self.mask)
        return OrthoProjection(np.eye(self.dim) - self.mat, mask=mask)

    def rank(self) -> int:
        return int(round(float(np.real(np.trace(self.mat)))))

    def range_basis(self) -> np.ndarray:
        """Orthonormal basis of the range, as columns."""
        if self.mask is not None:
            b = np.zeros((self.dim, len(self.mask)), dtype=complex)
            for col, i in enumerate(self.mask):
                b[i, col] = 1.0
            return b
        w, u = np.linalg.eigh(self.mat)
        return u[:, w > 0.5]

    def __repr__(self):
        return f"OrthoProjection(dim={self.dim}, rank={self.rank()})"


def commutator_norm(p: OrthoProjection, q: OrthoProjection) -> float:
    return float(np.linalg.norm(p.mat @ q.mat - q.mat @ p.mat))
