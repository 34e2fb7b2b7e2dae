"""Numerical tolerances shared across the library.

All routines accept an optional :class:`Tolerances`; when omitted they use
``DEFAULT``.  The CLI can override the headline tolerance globally via
``--tol`` or the ``QLSR_TOL`` environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

_EPS = 2.0 ** -52


@dataclass(frozen=True)
class Tolerances:
    """Tolerance bundle.

    rank     relative singular-value cutoff for numerical rank; ``None``
             means ``max(rows, cols) * 2**-52``
    orth     absolute orthonormality / unitarity tolerance
    pr       physical-realizability residual tolerance
    eig      stability margin: Hurwitz requires Re(lambda) < -eig
    cluster  relative eigenvalue clustering width, scaled by (1 + |omega|)
    coup     threshold below which a trace coupling counts as zero
    inv      subspace-invariance residual tolerance
    tf       transfer-function identity tolerance for boolean classifiers
    """

    rank: float | None = None
    orth: float = 1e-10
    pr: float = 1e-9
    eig: float = 1e-10
    cluster: float = 1e-8
    coup: float = 1e-10
    inv: float = 1e-8
    tf: float = 1e-8

    def rank_cutoff(self, rows: int, cols: int) -> float:
        if self.rank is not None:
            return self.rank
        return max(rows, cols) * _EPS

    def scaled(self, tol: float) -> "Tolerances":
        """Override the headline tolerances with a single user-given value."""
        return replace(self, rank=tol, pr=tol, tf=tol)


DEFAULT = Tolerances()


def from_environment() -> Tolerances:
    """Tolerances honoring the QLSR_TOL environment variable."""
    raw = os.environ.get("QLSR_TOL")
    if raw is None:
        return DEFAULT
    return DEFAULT.scaled(float(raw))
