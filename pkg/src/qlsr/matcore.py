"""Dense complex kernels for the doubled-up matrix algebra.

The central objects are the signature matrix ``J_p = diag(I_p, -I_p)``, the
weighted adjoint ``flat(X) = J X^H J`` and the doubled-up block form
``delta(U, V) = [[U, V], [V*, U*]]``.  On top of those sit tolerant
rank/kernel computations and a lower-triangular complex Schur decomposition
with a deterministic eigenvalue order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT, Tolerances


class ShapeError(ValueError):
    """Raised when matrix dimensions violate a structural precondition."""


def as_cmat(X) -> np.ndarray:
    """Coerce input to a finite 2-D complex array."""
    A = np.atleast_2d(np.asarray(X, dtype=complex))
    if A.ndim != 2:
        raise ShapeError(f"expected a matrix, got ndim={A.ndim}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix contains non-finite entries")
    return A


def jmat(p: int) -> np.ndarray:
    """The signature matrix diag(I_p, -I_p)."""
    return np.diag(np.concatenate([np.ones(p), -np.ones(p)])).astype(complex)


def flat(X) -> np.ndarray:
    """Weighted adjoint J_k X^H J_j for X of shape (2j, 2k)."""
    X = as_cmat(X)
    r, c = X.shape
    if r % 2 or c % 2:
        raise ShapeError(f"flat requires even dimensions, got {X.shape}")
    j, k = r // 2, c // 2
    return jmat(k) @ X.conj().T @ jmat(j)


def delta(U, V) -> np.ndarray:
    """Doubled-up block matrix [[U, V], [V*, U*]]."""
    U, V = as_cmat(U), as_cmat(V)
    if U.shape != V.shape:
        raise ShapeError(f"delta blocks differ in shape: {U.shape} vs {V.shape}")
    return np.block([[U, V], [V.conj(), U.conj()]])


def numerical_rank(X, tol: Tolerances = DEFAULT) -> int:
    X = as_cmat(X)
    s = sla.svdvals(X)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_cutoff(*X.shape) * s[0]))


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis of a subspace of C^ambient_dim.

    ``basis`` has shape (ambient_dim, dim); its columns are orthonormal.
    """

    ambient_dim: int
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    def orthonormality_defect(self) -> float:
        G = self.basis.conj().T @ self.basis
        return float(np.linalg.norm(G - np.eye(self.dim)))


def subspace_from_columns(cols: np.ndarray, ambient_dim: int) -> SubspaceBasis:
    cols = np.asarray(cols, dtype=complex).reshape(ambient_dim, -1)
    return SubspaceBasis(ambient_dim=ambient_dim, basis=cols)


def kernel_basis(X, tol: Tolerances = DEFAULT) -> SubspaceBasis:
    """Orthonormal basis of the numerical null space of X.

    Singular directions with sigma <= tol * sigma_max are counted as null;
    the zero matrix yields the full identity basis.
    """
    X = as_cmat(X)
    _, s, Vh = sla.svd(X)
    if s.size and s[0] > 0.0:
        r = int(np.count_nonzero(s > tol.rank_cutoff(*X.shape) * s[0]))
    else:
        r = 0
    return SubspaceBasis(ambient_dim=X.shape[1], basis=Vh[r:].conj().T)


def intersect(B1: SubspaceBasis, B2: SubspaceBasis,
              tol: Tolerances = DEFAULT) -> SubspaceBasis:
    """Orthonormal basis of Range(B1) intersect Range(B2).

    Computed as the null space of the stacked projector complements
    [I - P1; I - P2]; a vector is annihilated by both iff it lies in both
    ranges.
    """
    if B1.ambient_dim != B2.ambient_dim:
        raise ShapeError(
            f"ambient dimensions differ: {B1.ambient_dim} vs {B2.ambient_dim}")
    d = B1.ambient_dim
    eye = np.eye(d)
    stacked = np.vstack([eye - B1.projector(), eye - B2.projector()])
    # The input bases typically carry ~1e-12 numerical error from upstream
    # SVDs, so a machine-epsilon cutoff would miss true intersections; use
    # the subspace-comparison tolerance instead.
    _, s, Vh = sla.svd(stacked)
    r = int(np.count_nonzero(s > max(tol.inv, tol.rank_cutoff(2 * d, d))))
    return SubspaceBasis(ambient_dim=d, basis=Vh[r:].conj().T)


def projector_distance(B1: SubspaceBasis, B2: SubspaceBasis) -> float:
    """Spectral-norm distance between the orthogonal projectors of two spans."""
    return float(np.linalg.norm(B1.projector() - B2.projector(), 2))


def _eig_key(z: complex) -> tuple[float, float]:
    return (z.real, z.imag)


def schur_lower(A) -> tuple[np.ndarray, np.ndarray]:
    """Lower-triangular complex Schur decomposition A = U^H T U.

    U is unitary, T lower triangular, and the diagonal of T is sorted
    ascending by real part (ties broken by imaginary part) so the output is
    reproducible.  Implemented as an ordered upper Schur form conjugated by
    the anti-diagonal permutation.
    """
    A = as_cmat(A)
    if A.shape[0] != A.shape[1]:
        raise ShapeError(f"schur_lower requires a square matrix, got {A.shape}")
    n = A.shape[0]
    if n == 0:
        return np.zeros((0, 0), complex), np.zeros((0, 0), complex)
    T, Z = sla.schur(A, output="complex")
    trexc, = sla.get_lapack_funcs(("trexc",), (T,))
    # Selection sort of the diagonal into *descending* order; the flip below
    # turns it ascending.  trexc uses 1-based indices.
    for i in range(n):
        j = max(range(i, n), key=lambda k: _eig_key(np.diag(T)[k]))
        if j != i:
            T, Z, info = trexc(T, Z, j + 1, i + 1)
            if info != 0:
                raise np.linalg.LinAlgError(f"trexc failed with info={info}")
    P = np.fliplr(np.eye(n))
    T_low = P @ T @ P
    U = P @ Z.conj().T
    return U, T_low
