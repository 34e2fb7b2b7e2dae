"""Passive-system stability, minimality and minimal-subsystem extraction.

For annihilation-only systems Hurwitz stability, observability and
controllability coincide, and the minimal mode count follows a Gilbert-style
recipe: diagonalize the Hamiltonian, cluster its eigenvalues, and keep one
mode per independent coupled direction in each eigenspace.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT, Tolerances
from .matcore import numerical_rank
from .sysmodel import PassiveSystem
from .structure import (_block_normalized, controllability_matrix,
                        observability_matrix)


def is_hurwitz(sys: PassiveSystem, tol: Tolerances = DEFAULT) -> bool:
    """True iff every drift eigenvalue satisfies Re(lambda) < -tol.eig."""
    if sys.n == 0:
        return True
    eigs = np.linalg.eigvals(sys.drift)
    return bool(np.max(eigs.real) < -tol.eig)


def _eig_clusters(omega: np.ndarray, tol: Tolerances) -> list[np.ndarray]:
    """Group sorted real eigenvalues into near-degenerate clusters.

    Returns index arrays into the sorted order.
    """
    order = np.argsort(omega)
    clusters: list[list[int]] = []
    for idx in order:
        if clusters and abs(omega[idx] - omega[clusters[-1][-1]]) \
                <= tol.cluster * (1.0 + abs(omega[idx])):
            clusters[-1].append(idx)
        else:
            clusters.append([idx])
    return [np.array(c) for c in clusters]


@dataclass(frozen=True)
class MinimalityReport:
    hurwitz: bool
    observable: bool
    controllable: bool
    n_min: int
    sigma_set: tuple[tuple[float, float], ...]  # (eigenvalue, trace coupling)
    warnings: tuple[str, ...] = ()


def passive_equivalence_report(sys: PassiveSystem,
                               tol: Tolerances = DEFAULT) -> MinimalityReport:
    """Evaluate Hurwitz / observable / controllable independently.

    The three predicates are provably equivalent for passive systems; a
    numerical disagreement is reported as a warning, never silently fixed.
    """
    n = sys.n
    A = sys.drift
    hurwitz = is_hurwitz(sys, tol)
    obs_rank = numerical_rank(_block_normalized(
        observability_matrix(sys.Omega_minus, sys.C_minus, n), sys.m), tol)
    observable = obs_rank == n
    B = -sys.C_minus.conj().T @ sys.S
    controllable = numerical_rank(_block_normalized(
        controllability_matrix(A, B, n).conj().T, sys.m), tol) == n

    warn = []
    if len({hurwitz, observable, controllable}) > 1:
        warn.append(
            f"equivalence violated: hurwitz={hurwitz} observable={observable} "
            f"controllable={controllable}")

    sigma = _sigma_set(sys, tol)
    n_min = n_min_mimo(sys, tol)
    return MinimalityReport(hurwitz=hurwitz, observable=observable,
                            controllable=controllable, n_min=n_min,
                            sigma_set=tuple(sigma), warnings=tuple(warn))


def _sigma_set(sys: PassiveSystem, tol: Tolerances) -> list[tuple[float, float]]:
    """Coupled part of the Hamiltonian spectrum: (omega, Tr[C P_omega C^H])."""
    omega, U = np.linalg.eigh(sys.Omega_minus)
    out = []
    for cluster in _eig_clusters(omega, tol):
        P = U[:, cluster]
        block = sys.C_minus @ P
        trace = float(np.real(np.trace(block @ block.conj().T)))
        if trace > tol.coup:
            out.append((float(np.mean(omega[cluster])), trace))
    return out


def n_min_siso(sys: PassiveSystem, tol: Tolerances = DEFAULT) -> int:
    """Minimal mode count of a single-input system: number of distinct
    Hamiltonian eigenvalues with nonzero trace coupling."""
    if sys.m != 1:
        raise ValueError(f"n_min_siso requires m=1, got m={sys.m}")
    return len(_sigma_set(sys, tol))


def n_min_mimo(sys: PassiveSystem, tol: Tolerances = DEFAULT) -> int:
    """Minimal mode count: sum over eigenvalue clusters of rank of the
    coupling restricted to the cluster eigenspace."""
    omega, U = np.linalg.eigh(sys.Omega_minus)
    total = 0
    for cluster in _eig_clusters(omega, tol):
        total += numerical_rank(sys.C_minus @ U[:, cluster], tol)
    return total


def minimal_subsystem(sys: PassiveSystem, tol: Tolerances = DEFAULT
                      ) -> tuple[PassiveSystem, np.ndarray]:
    """Extract a minimal (observable, Hurwitz) subsystem.

    Diagonalizes Omega_minus, compresses the coupling on each eigenvalue
    cluster by SVD and deletes uncoupled directions.  Returns the reduced
    system together with the isometry mapping retained modes back into the
    original mode space; the transfer function is preserved.
    """
    omega, U = np.linalg.eigh(sys.Omega_minus)
    iso_cols = []
    coupling_cols = []
    freqs = []
    for cluster in _eig_clusters(omega, tol):
        E = U[:, cluster]
        block = sys.C_minus @ E                  # m x tau
        u, s, vh = np.linalg.svd(block, full_matrices=False)
        cut = tol.rank_cutoff(*block.shape) * (s[0] if s.size else 0.0)
        r = int(np.count_nonzero(s > max(cut, tol.coup)))
        if r == 0:
            continue
        w_mean = float(np.mean(omega[cluster]))
        for j in range(r):
            col = u[:, j] * s[j]                 # compressed coupling column
            mode = E @ vh[j].conj()              # original-space direction
            # rotate so the dominant coupling entry is real non-negative
            k = int(np.argmax(np.abs(col)))
            phase = col[k] / abs(col[k])
            coupling_cols.append(col / phase)
            iso_cols.append(mode * phase)
            freqs.append(w_mean)
    n_min = len(freqs)
    if n_min == 0:
        warnings.warn("system has no coupled modes; returning empty subsystem")
        empty = PassiveSystem(S=sys.S,
                              C_minus=np.zeros((sys.m, 0)),
                              Omega_minus=np.zeros((0, 0)))
        return empty, np.zeros((sys.n, 0), dtype=complex)
    iso = np.column_stack(iso_cols)
    C_min = np.column_stack(coupling_cols)
    Omega_min = np.diag(np.array(freqs)).astype(complex)
    reduced = PassiveSystem(S=sys.S, C_minus=C_min, Omega_minus=Omega_min)
    return reduced, iso
