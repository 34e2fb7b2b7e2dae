"""Constructive realizations of passive systems.

Four unitarily equivalent forms are produced: a cascade of one-mode stages
(lower-triangular Schur form of the drift), a MIMO canonical form built from
an SVD of the coupling, an independent-oscillator form (arrowhead
Hamiltonian) and a chain-mode form (tridiagonal / Jacobi Hamiltonian from
orthogonal-polynomial recurrence coefficients).  Continued-fraction and
arrowhead-inverse identities serve as independent transfer-function oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .matcore import ShapeError, schur_lower
from .sysmodel import PassiveSystem


# ---------------------------------------------------------------------------
# cascade


@dataclass(frozen=True)
class CascadeNetlist:
    """Ordered one-mode stages behind a static unitary stage.

    ``coupling`` column k is the m-vector coupling of stage k+1; ``omegas``
    holds the stage detunings.  Stage order follows the signal path: the
    static stage acts first.
    """

    S0: np.ndarray
    coupling: np.ndarray      # m x n, column per stage
    omegas: np.ndarray        # n real detunings

    @property
    def n_stages(self) -> int:
        return self.coupling.shape[1]


def cascade_realization(sys: PassiveSystem, tol: Tolerances = DEFAULT
                        ) -> tuple[CascadeNetlist, np.ndarray]:
    """Schur-based cascade form: returns the netlist and the mode unitary U
    with A' = U A U^H lower triangular, C' = C U^H."""
    sys.validate(tol)
    U, A_low = schur_lower(sys.drift)
    C_prime = sys.C_minus @ U.conj().T
    # A'_kk = -1/2 ||C'_k||^2 - i omega'_kk
    omegas = -np.imag(np.diag(A_low))
    netlist = CascadeNetlist(S0=sys.S.copy(), coupling=C_prime, omegas=omegas)
    return netlist, U


def series_product(netlist: CascadeNetlist) -> PassiveSystem:
    """Assemble the n-mode system realized by the cascaded stages.

    The drift is lower triangular with strict-lower entries -C'_k^H C'_j and
    the Hamiltonian carries the matching strict-upper blocks
    (i/2) C'_j^H C'_k, so the composite transfer function is the product of
    the stage transfer functions times the static stage.
    """
    C = netlist.coupling
    n = netlist.n_stages
    if netlist.omegas.shape != (n,):
        raise ShapeError("stage count mismatch between coupling and omegas")
    Omega = np.diag(netlist.omegas.astype(complex))
    for j in range(n):
        for k in range(j + 1, n):
            hjk = 0.5j * np.vdot(C[:, j], C[:, k])
            Omega[j, k] = hjk
            Omega[k, j] = np.conj(hjk)
    return PassiveSystem(S=netlist.S0, C_minus=C, Omega_minus=Omega)


# ---------------------------------------------------------------------------
# MIMO canonical form


@dataclass(frozen=True)
class MimoCanonical:
    """Canonical form with principal, coupled-auxiliary and free-auxiliary modes.

    The assembled pair (C_bar, Omega_bar) has the sparsity pattern:
    C_bar = [[sigma_C, 0, 0], [0, 0, 0]] and Omega_bar dense only in the
    first block row/column plus the diagonal sigma_Omega3 block.
    """

    sigma_C: np.ndarray        # r positive singular values (diagonal entries)
    Omega1: np.ndarray         # r x r Hermitian
    Omega21: np.ndarray        # r x aux1
    Omega22: np.ndarray        # r x aux2
    sigma_Omega3: np.ndarray   # aux1 nonzero auxiliary frequencies
    r: int
    aux1: int
    aux2: int
    C_bar: np.ndarray          # m x n
    Omega_bar: np.ndarray      # n x n
    mode_unitary: np.ndarray   # n x n: new modes = mode_unitary @ old modes
    output_unitary: np.ndarray  # m x m rotation of the field channels


def mimo_realization(sys: PassiveSystem, tol: Tolerances = DEFAULT) -> MimoCanonical:
    """Unitary canonical form driven by an SVD of the coupling matrix.

    The coupled field channels see the r = rank(C) principal modes through a
    positive diagonal coupling; auxiliary modes split into those with nonzero
    reduced frequency and inert ones.  The transformed system
    (I, C_bar, Omega_bar) reproduces the original transfer function in the
    rotated input/output frame.
    """
    sys.validate(tol)
    n, m = sys.n, sys.m
    Uc, svals, Vch = np.linalg.svd(sys.C_minus)
    cut = tol.rank_cutoff(m, n) * (svals[0] if svals.size else 0.0)
    r = int(np.count_nonzero(svals > cut))
    if r == 0:
        import warnings
        warnings.warn("coupling matrix is zero; all modes are auxiliary")
    R1 = Uc.conj().T                      # field-frame rotation
    R2 = Vch.conj().T                     # mode-frame rotation, C = Uc S Vch
    Om = R2.conj().T @ sys.Omega_minus @ R2
    Omega1 = Om[:r, :r]
    Omega2 = Om[:r, r:]
    Omega3 = Om[r:, r:]
    evals, evecs = np.linalg.eigh(Omega3)
    scale = max(1.0, float(np.max(np.abs(evals))) if evals.size else 1.0)
    nonzero = np.abs(evals) > tol.rank_cutoff(n - r, n - r) * scale
    order = np.concatenate([np.flatnonzero(nonzero), np.flatnonzero(~nonzero)])
    T = evecs[:, order]
    aux1 = int(np.count_nonzero(nonzero))
    aux2 = (n - r) - aux1
    sigma_Omega3 = evals[order][:aux1]
    O2T = Omega2 @ T
    Omega21, Omega22 = O2T[:, :aux1], O2T[:, aux1:]

    C_bar = np.zeros((m, n), dtype=complex)
    C_bar[:r, :r] = np.diag(svals[:r])
    Omega_bar = np.zeros((n, n), dtype=complex)
    Omega_bar[:r, :r] = Omega1
    Omega_bar[:r, r:r + aux1] = Omega21
    Omega_bar[:r, r + aux1:] = Omega22
    Omega_bar[r:r + aux1, :r] = Omega21.conj().T
    Omega_bar[r + aux1:, :r] = Omega22.conj().T
    Omega_bar[r:r + aux1, r:r + aux1] = np.diag(sigma_Omega3)

    block_T = np.eye(n, dtype=complex)
    block_T[r:, r:] = T
    mode_unitary = block_T.conj().T @ R2.conj().T
    return MimoCanonical(sigma_C=svals[:r], Omega1=Omega1, Omega21=Omega21,
                         Omega22=Omega22, sigma_Omega3=sigma_Omega3,
                         r=r, aux1=aux1, aux2=aux2, C_bar=C_bar,
                         Omega_bar=Omega_bar, mode_unitary=mode_unitary,
                         output_unitary=R1)


def mimo_system(canon: MimoCanonical) -> PassiveSystem:
    """The passive system (I, C_bar, Omega_bar) realized by the canonical form."""
    m = canon.C_bar.shape[0]
    return PassiveSystem(S=np.eye(m), C_minus=canon.C_bar,
                         Omega_minus=canon.Omega_bar)


# ---------------------------------------------------------------------------
# independent-oscillator form


@dataclass(frozen=True)
class IndepOscParams:
    """Principal mode of rate gamma and detuning omega0, coupled to
    independent auxiliary modes (kappa_j, omega_j)."""

    gamma: float
    omega0: float
    aux: tuple[tuple[float, float], ...]   # (kappa_j >= 0, omega_j)

    @property
    def n_modes(self) -> int:
        return 1 + len(self.aux)


def independent_oscillator(sys: PassiveSystem, tol: Tolerances = DEFAULT
                           ) -> tuple[IndepOscParams, np.ndarray]:
    """Arrowhead realization of a single-input system.

    The first transformed mode carries the entire coupling (rate gamma equal
    to the sum of the per-mode rates); the remaining modes diagonalize the
    residual Hamiltonian block, with coupling phases absorbed so every
    arrowhead off-diagonal weight is non-negative.  Returns the parameters
    and the full unitary T (new modes = T @ old modes).
    """
    if sys.m != 1:
        raise ValueError(f"independent_oscillator requires m=1, got m={sys.m}")
    sys.validate(tol)
    n = sys.n
    c = sys.C_minus.reshape(n)
    gamma = float(np.real(np.vdot(c, c)))
    if gamma <= tol.coup:
        raise ValueError("zero coupling: no principal mode exists")
    # unitary whose first row sends the modes onto the coupling direction;
    # the rotated coupling C R^H picks up conj(R[0]), hence no conjugate here
    first = c / np.sqrt(gamma)
    basis = np.linalg.svd(first.reshape(1, n))[2].conj().T  # first col = first^H
    R = np.zeros((n, n), dtype=complex)
    R[0] = first
    R[1:] = basis[:, 1:].conj().T
    M = R @ sys.Omega_minus @ R.conj().T
    omega0 = float(np.real(M[0, 0]))
    if n == 1:
        return IndepOscParams(gamma=gamma, omega0=omega0, aux=()), R
    evals, evecs = np.linalg.eigh(M[1:, 1:])
    order = np.argsort(evals)
    evals, evecs = evals[order], evecs[:, order]
    V = np.eye(n, dtype=complex)
    V[1:, 1:] = evecs.conj().T
    eps = evecs.conj().T @ M[1:, 0]
    phases = np.where(np.abs(eps) > 0, eps / np.where(np.abs(eps) > 0,
                                                      np.abs(eps), 1.0), 1.0)
    Phase = np.eye(n, dtype=complex)
    Phase[1:, 1:] = np.diag(np.conj(phases))
    T = Phase @ V @ R
    kappas = np.abs(eps) ** 2
    aux = tuple((float(k), float(w)) for k, w in zip(kappas, evals))
    return IndepOscParams(gamma=gamma, omega0=omega0, aux=aux), T


def indep_system(params: IndepOscParams) -> PassiveSystem:
    """The arrowhead passive system realizing the given parameters."""
    n = params.n_modes
    Omega = np.zeros((n, n), dtype=complex)
    Omega[0, 0] = params.omega0
    for j, (kappa, omega) in enumerate(params.aux, start=1):
        Omega[j, j] = omega
        Omega[0, j] = Omega[j, 0] = np.sqrt(kappa)
    C = np.zeros((1, n), dtype=complex)
    C[0, 0] = np.sqrt(params.gamma)
    return PassiveSystem(S=np.eye(1), C_minus=C, Omega_minus=Omega)


def tf_indep(params: IndepOscParams, s: complex) -> complex:
    """Scalar Sigma(s) of the independent-oscillator form by direct summation:
    Sigma(s) = (gamma/2) / (s + i omega0 + sum_k kappa_k / (s + i omega_k))."""
    shift = sum(kappa / (s + 1j * omega) for kappa, omega in params.aux)
    return 0.5 * params.gamma / (s + 1j * params.omega0 + shift)


# ---------------------------------------------------------------------------
# chain-mode form


@dataclass(frozen=True)
class ChainParams:
    """Nearest-neighbour chain: diagonal detunings and positive couplings.

    ``gamma_bar`` is the total rate of the head mode; ``diag`` holds the
    n chain detunings and ``offdiag`` the n-1 couplings b_k, with the
    squared couplings playing the role of the chain rates.
    """

    gamma_bar: float
    diag: np.ndarray          # n real
    offdiag: np.ndarray       # n-1 positive

    @property
    def depth(self) -> int:
        return self.diag.shape[0]

    @property
    def kappa_tilde(self) -> np.ndarray:
        return self.offdiag ** 2


def chain_mode(sys: PassiveSystem, tol: Tolerances = DEFAULT
               ) -> tuple[ChainParams, np.ndarray]:
    """Tridiagonalize a diagonal single-input system into chain-mode form.

    Requires m = 1, a real diagonal Omega_minus with distinct entries, and a
    coupling row of positive entries; run ``minimal_subsystem`` followed by a
    phase normalization first if the system is not already in that shape.
    The construction is a Lanczos recursion on diag(omega) started from the
    normalized coupling weights, with full reorthogonalization.  Returns the
    chain parameters and the unitary W (chain modes = W @ original modes)
    whose first row is the start vector.
    """
    if sys.m != 1:
        raise ValueError(f"chain_mode requires m=1, got m={sys.m}")
    n = sys.n
    Om = sys.Omega_minus
    if np.linalg.norm(Om - np.diag(np.diag(Om))) > tol.orth * (1 + np.linalg.norm(Om)):
        raise ValueError("chain_mode requires a diagonal Omega_minus")
    omega = np.real(np.diag(Om))
    if n > 1 and np.min(np.diff(np.sort(omega))) <= tol.cluster * (1 + np.max(np.abs(omega))):
        raise ValueError("chain_mode requires distinct mode frequencies")
    c = sys.C_minus.reshape(n)
    if np.any(np.abs(c.imag) > tol.coup * (1 + np.abs(c.real))) or np.any(c.real <= 0):
        raise ValueError("chain_mode requires positive real coupling entries")
    rates = c.real.astype(float) ** 2
    gamma_bar = float(np.sum(rates))

    q = np.sqrt(rates / gamma_bar)
    Q = np.empty((n, n))
    alphas = np.empty(n)
    betas = np.empty(max(n - 1, 0))
    Q[0] = q
    for k in range(n):
        w = omega * Q[k]
        alphas[k] = float(Q[k] @ w)
        w -= alphas[k] * Q[k]
        if k > 0:
            w -= betas[k - 1] * Q[k - 1]
        # full reorthogonalization keeps the basis orthonormal at small n
        w -= Q[:k + 1].T @ (Q[:k + 1] @ w)
        if k < n - 1:
            b = float(np.linalg.norm(w))
            if b <= tol.coup:
                raise ValueError("Lanczos breakdown: frequencies not distinct "
                                 "or couplings vanish")
            betas[k] = b
            Q[k + 1] = w / b
    params = ChainParams(gamma_bar=gamma_bar, diag=alphas, offdiag=betas)
    return params, Q.astype(complex)


def chain_system(params: ChainParams) -> PassiveSystem:
    """The tridiagonal passive system realizing the given chain parameters."""
    n = params.depth
    Omega = (np.diag(params.diag.astype(complex))
             + np.diag(params.offdiag.astype(complex), 1)
             + np.diag(params.offdiag.astype(complex), -1))
    C = np.zeros((1, n), dtype=complex)
    C[0, 0] = np.sqrt(params.gamma_bar)
    return PassiveSystem(S=np.eye(1), C_minus=C, Omega_minus=Omega)


def tf_chain(params: ChainParams, s: complex) -> complex:
    """Scalar Sigma(s) of the chain form by backward continued fraction:
    Sigma = (gamma_bar/2) / (s + i a_1 + b_1^2/(s + i a_2 + b_2^2/(...)))."""
    a = params.diag
    b = params.offdiag
    acc = complex(s + 1j * a[-1])
    for k in range(params.depth - 2, -1, -1):
        acc = s + 1j * a[k] + b[k] ** 2 / acc
    return 0.5 * params.gamma_bar / acc


# ---------------------------------------------------------------------------
# resolvent corner identities (oracles)


def arrowhead_E11(a0: float, a: np.ndarray, b: np.ndarray,
                  s: complex = 0.0) -> complex:
    """(1,1) entry of (s I + i M)^{-1} for the arrowhead matrix M with corner
    a0, diagonal tail a and arm weights b: equals
    1 / (s + i a0 + sum_k b_k^2 / (s + i a_k))."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return 1.0 / (s + 1j * a0 + np.sum(b ** 2 / (s + 1j * a)))


def tridiag_E11(a: np.ndarray, b: np.ndarray, s: complex = 0.0) -> complex:
    """(1,1) entry of (s I + i T)^{-1} for the Jacobi matrix T with diagonal a
    and off-diagonal b, as a backward continued fraction."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    acc = complex(s + 1j * a[-1])
    for k in range(a.size - 2, -1, -1):
        acc = s + 1j * a[k] + b[k] ** 2 / acc
    return 1.0 / acc


def recover_indep_from_chain(params: ChainParams,
                             tol: Tolerances = DEFAULT) -> IndepOscParams:
    """Recover the unique independent-oscillator parameters from a chain.

    Eigendecomposes the trailing Jacobi submatrix (rows/columns 2..n of the
    chain Hamiltonian): its eigenvalues are the auxiliary detunings and the
    squared first components of its eigenvectors distribute the first chain
    rate over the auxiliary couplings.  Degenerate trailing eigenvalues make
    the map ill-posed and raise an error.
    """
    n = params.depth
    if n == 1:
        return IndepOscParams(gamma=params.gamma_bar,
                              omega0=float(params.diag[0]), aux=())
    a = params.diag[1:]
    b = params.offdiag[1:]
    J = np.diag(a.astype(float)) + np.diag(b, 1) + np.diag(b, -1)
    mu, V = np.linalg.eigh(J)
    if mu.size > 1 and np.min(np.diff(mu)) <= tol.cluster * (1 + np.max(np.abs(mu))):
        raise ValueError("trailing chain spectrum is degenerate; "
                         "independent-oscillator parameters are not unique")
    kappa1 = float(params.offdiag[0] ** 2)
    kappas = kappa1 * np.abs(V[0]) ** 2
    aux = tuple((float(k), float(w)) for k, w in zip(kappas, mu))
    return IndepOscParams(gamma=params.gamma_bar,
                          omega0=float(params.diag[0]), aux=aux)
