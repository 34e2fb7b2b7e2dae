"""Transfer-function evaluation, fractional forms and lossless predicates.

G(s) = D + C (sI - A)^{-1} B evaluated by linear solves; the companion
matrix function Sigma(s) = (1/2) C (sI + i J Omega)^{-1} flat(C) (passive:
(1/2) C (sI + i Omega)^{-1} C^H) yields the fractional identity
G = (I - Sigma)(I + Sigma)^{-1} D and the lossless positive-real test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT, Tolerances
from .matcore import flat, jmat
from .passive import is_hurwitz
from .sysmodel import (AnySystem, GeneralSystem, PassiveSystem,
                       build_state_space, passive_state_space)


class PoleProximityError(ValueError):
    """Evaluation point is numerically indistinguishable from a pole."""

    def __init__(self, s: complex, pole: complex):
        super().__init__(f"s={s} is too close to the pole {pole}")
        self.s = s
        self.pole = pole


def _quadruple(sys: AnySystem):
    if isinstance(sys, PassiveSystem):
        return passive_state_space(sys)
    ss = build_state_space(sys)
    return ss.A, ss.B, ss.C, ss.D


def _sigma_operator(sys: AnySystem):
    """(M, C_left, C_right, factor) with Sigma(s) = factor * C_left (sI + iM)^{-1} C_right."""
    if isinstance(sys, PassiveSystem):
        return sys.Omega_minus, sys.C_minus, sys.C_minus.conj().T
    C = sys.coupling
    return jmat(sys.n) @ sys.hamiltonian, C, flat(C)


def _pole_guard(s: complex, eigs: np.ndarray, scale: float) -> None:
    if eigs.size == 0:
        return
    d = np.abs(s - eigs)
    k = int(np.argmin(d))
    if d[k] <= 1e-10 * max(1.0, scale):
        raise PoleProximityError(s, complex(eigs[k]))


def spectral_scale(A: np.ndarray) -> float:
    """Spectral-radius scale used to size frequency grids."""
    if A.size == 0:
        return 1.0
    rho = float(np.max(np.abs(np.linalg.eigvals(A))))
    return rho if rho > 0 else 1.0


def _refined_solve(K: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Linear solve with one step of iterative refinement.

    Resolvents near weakly damped modes are ill conditioned; the refinement
    step recovers roughly one order of magnitude of accuracy there.
    """
    lu, piv = sla.lu_factor(K)
    X = sla.lu_solve((lu, piv), B)
    X += sla.lu_solve((lu, piv), B - K @ X)
    return X


def eval_G(sys: AnySystem, s: complex) -> np.ndarray:
    """Transfer function D + C (sI - A)^{-1} B via a linear solve."""
    A, B, C, D = _quadruple(sys)
    eigs = np.linalg.eigvals(A) if A.size else np.array([])
    _pole_guard(s, eigs, spectral_scale(A))
    if A.size == 0:
        return D.copy()
    X = _refined_solve(s * np.eye(A.shape[0]) - A, B)
    return D + C @ X


def eval_Sigma(sys: AnySystem, s: complex) -> np.ndarray:
    """Matrix function (1/2) C (sI + i M)^{-1} C' for the system's M."""
    M, Cl, Cr = _sigma_operator(sys)
    if M.size == 0:
        return np.zeros((Cl.shape[0], Cl.shape[0]), dtype=complex)
    poles = -1j * np.linalg.eigvals(M)
    _pole_guard(s, poles, spectral_scale(M))
    X = _refined_solve(s * np.eye(M.shape[0]) + 1j * M, Cr)
    return 0.5 * Cl @ X


def standard_grid(sys: AnySystem, points: int = 201) -> np.ndarray:
    """Symmetric logarithmic frequency grid scaled by the drift spectrum.

    Magnitudes span [1e-3, 1e3] * rho; both signs are included plus omega=0.
    Frequencies within 1e-6 * rho of a pole of G on the imaginary axis are
    dropped.
    """
    A, _, _, _ = _quadruple(sys)
    rho = spectral_scale(A)
    half = max(1, (points - 1) // 2)
    mags = np.logspace(-3, 3, half) * rho
    omegas = np.concatenate([-mags[::-1], [0.0], mags])
    if A.size:
        eigs = np.linalg.eigvals(A)
        axis_poles = eigs[np.abs(eigs.real) <= 1e-6 * rho].imag
        if axis_poles.size:
            keep = np.all(np.abs(omegas[:, None] - axis_poles[None, :])
                          > 1e-6 * rho, axis=1)
            omegas = omegas[keep]
    return omegas


@dataclass(frozen=True)
class GridCheck:
    """Worst-case residual of an identity over a frequency grid."""

    max_residual: float
    argmax: complex
    skipped: tuple[complex, ...] = field(default_factory=tuple)


def fractional_identity_check(sys: AnySystem, s_grid) -> GridCheck:
    """max over the grid of || G(s) - (I - Sigma)(I + Sigma)^{-1} D ||,
    for Re[s] > 0 grid points."""
    _, _, _, D = _quadruple(sys)
    worst, arg = 0.0, 0j
    skipped = []
    for s in np.atleast_1d(np.asarray(s_grid, dtype=complex)):
        try:
            G = eval_G(sys, s)
            Sig = eval_Sigma(sys, s)
            eye = np.eye(Sig.shape[0])
            rhs = (eye - Sig) @ np.linalg.solve(eye + Sig, D)
        except (PoleProximityError, np.linalg.LinAlgError):
            skipped.append(complex(s))
            continue
        r = float(np.linalg.norm(G - rhs))
        if r > worst:
            worst, arg = r, complex(s)
    return GridCheck(max_residual=worst, argmax=arg, skipped=tuple(skipped))


def allpass_check(sys: AnySystem, omega_grid) -> GridCheck:
    """max over the grid of the all-pass defect of G on the imaginary axis.

    General systems use the flat-adjoint identity flat(G) G = I; passive
    systems the plain unitarity G^H G = I.  Pole hits are skipped and
    reported.
    """
    passive = isinstance(sys, PassiveSystem)
    worst, arg = 0.0, 0j
    skipped = []
    for w in np.atleast_1d(np.asarray(omega_grid, dtype=float)):
        try:
            G = eval_G(sys, 1j * w)
        except PoleProximityError:
            skipped.append(complex(1j * w))
            continue
        adj = G.conj().T if passive else flat(G)
        r = float(np.linalg.norm(adj @ G - np.eye(G.shape[0])))
        if r > worst:
            worst, arg = r, complex(1j * w)
    return GridCheck(max_residual=worst, argmax=arg, skipped=tuple(skipped))


def is_lossless_bounded_real(sys: PassiveSystem, tol: Tolerances = DEFAULT) -> bool:
    """Hurwitz stable with unitary frequency response on the standard grid."""
    if not is_hurwitz(sys, tol):
        return False
    return allpass_check(sys, standard_grid(sys)).max_residual <= tol.tf


def _herm(X: np.ndarray) -> np.ndarray:
    return X + X.conj().T


def is_lossless_positive_real(sys: PassiveSystem, tol: Tolerances = DEFAULT) -> bool:
    """Grid-sampled test: Sigma + Sigma^H is PSD in the open right half-plane
    and vanishes on the imaginary axis."""
    omegas = standard_grid(sys)
    rho = spectral_scale(sys.drift) if sys.n else 1.0
    for sigma_re in np.logspace(-2, 2, 5) * rho:
        for w in omegas[:: max(1, len(omegas) // 40)]:
            Sig = eval_Sigma(sys, sigma_re + 1j * w)
            if float(np.min(np.linalg.eigvalsh(_herm(Sig)))) < -tol.tf:
                return False
    # poles of Sigma sit on the axis at omega = -eig(Omega_minus)
    axis_poles = -np.linalg.eigvalsh(sys.Omega_minus) if sys.n else np.array([])
    for w in omegas:
        if axis_poles.size and np.min(np.abs(w - axis_poles)) <= 1e-6 * rho:
            continue
        try:
            Sig = eval_Sigma(sys, 1j * w)
        except PoleProximityError:
            continue
        if float(np.linalg.norm(_herm(Sig))) > tol.tf:
            return False
    return True


@dataclass(frozen=True)
class SigmaRational:
    """Scalar lossless rational function in pole/residue form.

    Sigma(s) = direct + sum_k residues[k] / (s + 1j * pole_freqs[k]); poles
    sit at s = -1j * pole_freqs[k] on the imaginary axis.
    """

    pole_freqs: tuple[float, ...]
    residues: tuple[float, ...]
    direct: complex = 0.0

    def __post_init__(self):
        if len(self.pole_freqs) != len(self.residues):
            raise ValueError("pole_freqs and residues must have equal length")

    def __call__(self, s: complex) -> complex:
        val = complex(self.direct)
        for w, r in zip(self.pole_freqs, self.residues):
            val += r / (s + 1j * w)
        return val

    def as_polynomials(self) -> tuple[np.ndarray, np.ndarray]:
        """(numerator, denominator) coefficient arrays, highest degree first."""
        den = np.array([1.0 + 0j])
        for w in self.pole_freqs:
            den = np.polymul(den, [1.0, 1j * w])
        num = np.polymul([complex(self.direct)], den) if self.direct else \
            np.zeros(1, dtype=complex)
        for k, (w, r) in enumerate(zip(self.pole_freqs, self.residues)):
            term = np.array([complex(r)])
            for j, wj in enumerate(self.pole_freqs):
                if j != k:
                    term = np.polymul(term, [1.0, 1j * wj])
            num = np.polyadd(num, term)
        return num, den


@dataclass(frozen=True)
class GenuinenessReport:
    genuine: bool
    gamma: float | None
    omega0: float | None
    aux: tuple[tuple[float, float], ...]   # (kappa_k, omega_k)
    diagnostics: tuple[str, ...]
    G_samples: tuple[tuple[complex, complex], ...]  # (s, G(s))


def genuineness_probe(sigma: SigmaRational, tol: Tolerances = DEFAULT
                      ) -> GenuinenessReport:
    """Decide whether a scalar lossless function fits the single-channel
    template Sigma(s) = (gamma/2) / (s + i omega0 + Delta(s)) with Delta a
    sum of simple imaginary-axis pole terms with non-negative weights.

    The fit inverts Sigma as a rational function, splits off the linear part
    s + i omega0, and expands the remainder in partial fractions.  Failure of
    any structural condition (nonzero direct term, non-imaginary or repeated
    Delta poles, negative or complex weights) marks the function non-genuine.
    """
    diags: list[str] = []
    scale = max(1.0, max((abs(w) for w in sigma.pole_freqs), default=1.0))
    samples = []
    for s in (0.37 + 0.21j, 1.0 + 1.3j, 2.5 - 0.7j):
        sp = s * scale
        val = sigma(sp)
        samples.append((complex(sp), (1 - val) / (1 + val)))

    def fail(msg: str) -> GenuinenessReport:
        diags.append(msg)
        return GenuinenessReport(genuine=False, gamma=None, omega0=None,
                                 aux=(), diagnostics=tuple(diags),
                                 G_samples=tuple(samples))

    if abs(sigma.direct) > tol.tf:
        return fail(f"direct term {sigma.direct} is nonzero")
    if any(r < -tol.tf for r in sigma.residues):
        return fail("negative residue in Sigma")
    gamma = 2.0 * float(sum(sigma.residues))
    if gamma <= tol.coup:
        return fail("Sigma has zero total weight")

    num, den = sigma.as_polynomials()
    num = np.trim_zeros(num, "f")
    if num.size == 0:
        return fail("Sigma is identically zero")
    # (gamma/2) / Sigma = (gamma/2) den / num =: q(s) + rem(s)/num(s)
    q, rem = np.polydiv(0.5 * gamma * den, num)
    if len(q) != 2:
        return fail("inverse of Sigma is not linear plus proper")
    if abs(q[0] - 1.0) > 1e-8:
        return fail(f"leading coefficient {q[0]} of 1/Sigma mismatch")
    if abs(q[1].real) > tol.tf * scale:
        return fail(f"constant term {q[1]} of 1/Sigma is not purely imaginary")
    omega0 = float(q[1].imag)

    rem = np.trim_zeros(rem, "f")
    aux: list[tuple[float, float]] = []
    if rem.size:
        roots = np.roots(num)
        if roots.size and np.min(np.abs(roots[:, None] - roots[None, :])
                                 + np.eye(roots.size) * 1e30) < 1e-8 * scale:
            return fail("repeated Delta pole")
        for r0 in roots:
            if abs(r0.real) > 1e-8 * scale:
                return fail(f"Delta pole {r0} off the imaginary axis")
            kappa = np.polyval(rem, r0) / np.polyval(np.polyder(num), r0)
            if abs(kappa.imag) > 1e-8 * scale ** 2 or kappa.real < -tol.tf:
                return fail(f"Delta weight {kappa} not real non-negative")
            aux.append((float(kappa.real), float(-r0.imag)))
    aux.sort(key=lambda t: t[1])
    return GenuinenessReport(genuine=True, gamma=gamma, omega0=omega0,
                             aux=tuple(aux), diagnostics=tuple(diags),
                             G_samples=tuple(samples))
