"""System data model: general and passive open-oscillator systems.

A general system is the triple (S, C, Omega) with doubled-up coupling
C = delta(C_minus, C_plus) and Hamiltonian Omega = delta(Omega_minus,
Omega_plus); a passive system keeps only the annihilation blocks.  From the
triple we build the doubled-up state-space quadruple, verify the
physical-realizability relations, and propagate averaged (classical)
trajectories with exact matrix exponentials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT, Tolerances
from .matcore import as_cmat, delta, flat, jmat


class ValidationError(ValueError):
    """A system matrix violates one of the structural invariants."""


def _check_unitary(S: np.ndarray, tol: float, name: str) -> None:
    defect = np.linalg.norm(S.conj().T @ S - np.eye(S.shape[0]))
    if defect > tol:
        raise ValidationError(f"{name} is not unitary (defect {defect:.2e})")


def _check_hermitian(X: np.ndarray, tol: float, name: str) -> None:
    defect = np.linalg.norm(X - X.conj().T)
    if defect > tol:
        raise ValidationError(f"{name} is not Hermitian (defect {defect:.2e})")


def _check_symmetric(X: np.ndarray, tol: float, name: str) -> None:
    defect = np.linalg.norm(X - X.T)
    if defect > tol:
        raise ValidationError(f"{name} is not symmetric (defect {defect:.2e})")


@dataclass(frozen=True)
class GeneralSystem:
    """Open-oscillator system (S, C_minus, C_plus, Omega_minus, Omega_plus).

    S is m x m unitary; the coupling blocks are m x n; Omega_minus is n x n
    Hermitian and Omega_plus n x n complex-symmetric, so that the doubled-up
    Hamiltonian matrix is Hermitian.
    """

    S: np.ndarray
    C_minus: np.ndarray
    C_plus: np.ndarray
    Omega_minus: np.ndarray
    Omega_plus: np.ndarray

    def __post_init__(self):
        for name in ("S", "C_minus", "C_plus", "Omega_minus", "Omega_plus"):
            object.__setattr__(self, name, as_cmat(getattr(self, name)))
        m, n = self.C_minus.shape
        if self.S.shape != (m, m):
            raise ValidationError(f"S must be {m}x{m}, got {self.S.shape}")
        if self.C_plus.shape != (m, n):
            raise ValidationError(f"C_plus must be {m}x{n}, got {self.C_plus.shape}")
        if self.Omega_minus.shape != (n, n) or self.Omega_plus.shape != (n, n):
            raise ValidationError("Hamiltonian blocks must be n x n")

    @property
    def n(self) -> int:
        return self.C_minus.shape[1]

    @property
    def m(self) -> int:
        return self.C_minus.shape[0]

    @property
    def coupling(self) -> np.ndarray:
        """Doubled-up coupling delta(C_minus, C_plus), shape (2m, 2n)."""
        return delta(self.C_minus, self.C_plus)

    @property
    def hamiltonian(self) -> np.ndarray:
        """Doubled-up Hamiltonian delta(Omega_minus, Omega_plus), shape (2n, 2n)."""
        return delta(self.Omega_minus, self.Omega_plus)

    def validate(self, tol: Tolerances = DEFAULT) -> "GeneralSystem":
        _check_unitary(self.S, tol.orth * max(1.0, np.linalg.norm(self.S)), "S")
        _check_hermitian(self.Omega_minus,
                         tol.orth * (1.0 + np.linalg.norm(self.Omega_minus)),
                         "Omega_minus")
        _check_symmetric(self.Omega_plus,
                         tol.orth * (1.0 + np.linalg.norm(self.Omega_plus)),
                         "Omega_plus")
        return self

    def repaired(self) -> "GeneralSystem":
        """Symmetrized copy: averages Omega blocks with their (conjugate) transpose."""
        return GeneralSystem(
            S=self.S,
            C_minus=self.C_minus,
            C_plus=self.C_plus,
            Omega_minus=(self.Omega_minus + self.Omega_minus.conj().T) / 2,
            Omega_plus=(self.Omega_plus + self.Omega_plus.T) / 2,
        )


@dataclass(frozen=True)
class PassiveSystem:
    """Annihilation-only system (S, C_minus, Omega_minus)."""

    S: np.ndarray
    C_minus: np.ndarray
    Omega_minus: np.ndarray

    def __post_init__(self):
        for name in ("S", "C_minus", "Omega_minus"):
            object.__setattr__(self, name, as_cmat(getattr(self, name)))
        m, n = self.C_minus.shape
        if self.S.shape != (m, m):
            raise ValidationError(f"S must be {m}x{m}, got {self.S.shape}")
        if self.Omega_minus.shape != (n, n):
            raise ValidationError("Omega_minus must be n x n")

    @property
    def n(self) -> int:
        return self.C_minus.shape[1]

    @property
    def m(self) -> int:
        return self.C_minus.shape[0]

    @property
    def drift(self) -> np.ndarray:
        """A = -1/2 C^H C - i Omega, the annihilation-sector drift matrix."""
        C = self.C_minus
        return -0.5 * C.conj().T @ C - 1j * self.Omega_minus

    def validate(self, tol: Tolerances = DEFAULT) -> "PassiveSystem":
        self.to_general().validate(tol)
        return self

    def repaired(self) -> "PassiveSystem":
        return PassiveSystem(
            S=self.S,
            C_minus=self.C_minus,
            Omega_minus=(self.Omega_minus + self.Omega_minus.conj().T) / 2,
        )

    def to_general(self) -> GeneralSystem:
        zc = np.zeros_like(self.C_minus)
        zo = np.zeros_like(self.Omega_minus)
        return GeneralSystem(S=self.S, C_minus=self.C_minus, C_plus=zc,
                             Omega_minus=self.Omega_minus, Omega_plus=zo)


AnySystem = GeneralSystem | PassiveSystem


@dataclass(frozen=True)
class StateSpace:
    """Doubled-up quadruple (A, B, C, D) with A 2n x 2n and D 2m x 2m."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    @property
    def n(self) -> int:
        return self.A.shape[0] // 2

    @property
    def m(self) -> int:
        return self.D.shape[0] // 2


def build_state_space(sys: GeneralSystem, tol: Tolerances = DEFAULT) -> StateSpace:
    """Doubled-up state space of a general system.

    A = -1/2 flat(C) C - i J_n Omega,  B = -flat(C) delta(S, 0),
    C = delta(C_minus, C_plus),        D = delta(S, 0).
    """
    sys.validate(tol)
    C = sys.coupling
    Omega = sys.hamiltonian
    D = delta(sys.S, np.zeros_like(sys.S))
    Cf = flat(C)
    A = -0.5 * Cf @ C - 1j * jmat(sys.n) @ Omega
    B = -Cf @ D
    return StateSpace(A=A, B=B, C=C, D=D)


@dataclass(frozen=True)
class RealizabilityReport:
    """Residual norms of the three physical-realizability relations."""

    drift_residual: float       # || A + flat(A) + flat(C) C ||
    input_residual: float       # || B + flat(C) D ||
    scattering_residual: float  # || flat(D) D - I ||
    tol: float
    passed: bool

    def residuals(self) -> tuple[float, float, float]:
        return (self.drift_residual, self.input_residual, self.scattering_residual)


def check_physical_realizability(ss: StateSpace,
                                 tol: Tolerances = DEFAULT) -> RealizabilityReport:
    scale = max(1.0, np.linalg.norm(ss.A), np.linalg.norm(ss.B),
                np.linalg.norm(ss.C), np.linalg.norm(ss.D))
    r1 = np.linalg.norm(ss.A + flat(ss.A) + flat(ss.C) @ ss.C) / scale
    r2 = np.linalg.norm(ss.B + flat(ss.C) @ ss.D) / scale
    r3 = np.linalg.norm(flat(ss.D) @ ss.D - np.eye(ss.D.shape[0])) / scale
    passed = max(r1, r2, r3) <= tol.pr
    return RealizabilityReport(drift_residual=float(r1), input_residual=float(r2),
                               scattering_residual=float(r3), tol=tol.pr,
                               passed=passed)


def passive_state_space(sys: PassiveSystem, tol: Tolerances = DEFAULT
                        ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Annihilation-sector quadruple (A, B, C, D) of a passive system."""
    sys.validate(tol)
    A = sys.drift
    B = -sys.C_minus.conj().T @ sys.S
    return A, B, sys.C_minus.copy(), sys.S.copy()


def mean_response(ss: StateSpace, t_grid: np.ndarray, x0: np.ndarray,
                  u: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Averaged trajectories under a piecewise-constant mean input.

    ``u`` holds one constant input vector per grid interval, shape
    (len(t_grid) - 1, 2m); ``None`` means zero input.  Propagation is exact
    per segment via the augmented matrix exponential, so no integrator
    tolerance enters.  Returns (states, outputs), one row per grid time.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ValueError("t_grid must be a non-empty 1-D array")
    if np.any(np.diff(t) <= 0):
        raise ValueError("t_grid must be strictly ascending")
    d = ss.A.shape[0]
    p = ss.B.shape[1]
    x = np.asarray(x0, dtype=complex).reshape(d)
    if u is None:
        u = np.zeros((t.size - 1, p), dtype=complex)
    u = np.asarray(u, dtype=complex).reshape(t.size - 1, p) if t.size > 1 \
        else np.zeros((0, p), dtype=complex)

    states = np.empty((t.size, d), dtype=complex)
    outputs = np.empty((t.size, ss.C.shape[0]), dtype=complex)
    states[0] = x
    for k in range(t.size - 1):
        dt = t[k + 1] - t[k]
        # exp of [[A, B u_k], [0, 0]] advances x and accumulates the forced term
        M = np.zeros((d + 1, d + 1), dtype=complex)
        M[:d, :d] = ss.A
        M[:d, d] = ss.B @ u[k]
        E = sla.expm(M * dt)
        states[k + 1] = E[:d, :d] @ states[k] + E[:d, d]
    for k in range(t.size):
        uk = u[min(k, u.shape[0] - 1)] if u.shape[0] else np.zeros(p, complex)
        outputs[k] = ss.C @ states[k] + ss.D @ uk
    return states, outputs
