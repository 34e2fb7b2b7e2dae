"""Shared random-system generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from qlsr import GeneralSystem, PassiveSystem


def random_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (X + X.conj().T) / 2


def random_symmetric(n: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (X + X.T) / 2


def random_passive(n: int, m: int, rng: np.random.Generator,
                   identity_S: bool = False) -> PassiveSystem:
    S = np.eye(m) if identity_S else random_unitary(m, rng)
    return PassiveSystem(
        S=S,
        C_minus=rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)),
        Omega_minus=random_hermitian(n, rng))


def random_general(n: int, m: int, rng: np.random.Generator) -> GeneralSystem:
    return GeneralSystem(
        S=random_unitary(m, rng),
        C_minus=rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)),
        C_plus=rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n)),
        Omega_minus=random_hermitian(n, rng),
        Omega_plus=random_symmetric(n, rng))


def random_sizes(rng: np.random.Generator, n_max: int = 8, m_max: int = 4
                 ) -> tuple[int, int]:
    return int(rng.integers(1, n_max + 1)), int(rng.integers(1, m_max + 1))


def siso_with_df_modes(n: int, l: int, rng: np.random.Generator
                       ) -> PassiveSystem:
    """Passive single-input system with exactly l uncoupled (dark) modes."""
    assert 0 < l < n
    omega = np.sort(rng.normal(size=n) * 3)
    c = np.zeros(n, dtype=complex)
    coupled = rng.choice(n, size=n - l, replace=False)
    c[coupled] = rng.normal(size=n - l) + 1j * rng.normal(size=n - l)
    return PassiveSystem(S=np.eye(1), C_minus=c.reshape(1, n),
                         Omega_minus=np.diag(omega))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)


# Per-criterion verdict lines recorded by the acceptance suite; printed in
# the terminal summary so they survive output capture.
CRITERION_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
