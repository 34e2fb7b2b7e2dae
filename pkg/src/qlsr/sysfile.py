"""JSON serialization of system descriptions.

A system file is a JSON object with ``kind`` ("general" or "passive"),
counts ``m`` and ``n``, the matrices as row-major nested arrays whose complex
entries are two-element [re, im] arrays, and an optional free-form
``metadata`` object.  Omitted ``C_plus`` / ``Omega_plus`` blocks default to
zero.  Floats are written with Python's shortest round-trip representation,
so save/load is lossless at full binary precision.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .config import DEFAULT, Tolerances
from .sysmodel import AnySystem, GeneralSystem, PassiveSystem, ValidationError


class SystemFileError(ValueError):
    """A system file fails to parse or violates the format contract."""


def _encode_matrix(X: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.atleast_2d(X)]


def _decode_matrix(obj, name: str, shape: tuple[int, int]) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SystemFileError(f"matrix {name} is not a numeric nested array: {exc}")
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise SystemFileError(
            f"matrix {name} must be a nested array of [re, im] pairs, "
            f"got array of shape {arr.shape}")
    if arr.shape[:2] != shape:
        raise SystemFileError(
            f"matrix {name} must have shape {shape}, got {arr.shape[:2]}")
    return arr[..., 0] + 1j * arr[..., 1]


def save_system(sys: AnySystem, path: str | Path,
                metadata: dict | None = None) -> None:
    """Write a system to a JSON file."""
    doc: dict = {"m": sys.m, "n": sys.n}
    if isinstance(sys, PassiveSystem):
        doc["kind"] = "passive"
        matrices = {"S": sys.S, "C_minus": sys.C_minus,
                    "Omega_minus": sys.Omega_minus}
    else:
        doc["kind"] = "general"
        matrices = {"S": sys.S, "C_minus": sys.C_minus, "C_plus": sys.C_plus,
                    "Omega_minus": sys.Omega_minus, "Omega_plus": sys.Omega_plus}
    for name, X in matrices.items():
        doc[name] = _encode_matrix(X)
    if metadata:
        doc["metadata"] = metadata
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_system(path: str | Path, repair: bool = False,
                tol: Tolerances = DEFAULT) -> AnySystem:
    """Read and validate a system file.

    ``repair=True`` symmetrizes slightly non-Hermitian Hamiltonian blocks
    before validation instead of rejecting them.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise SystemFileError(f"{path}: no such file")
    except json.JSONDecodeError as exc:
        raise SystemFileError(f"{path}: invalid JSON at line {exc.lineno}, "
                              f"column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise SystemFileError(f"{path}: top level must be a JSON object")
    kind = doc.get("kind")
    if kind not in ("general", "passive"):
        raise SystemFileError(f"{path}: kind must be 'general' or 'passive', "
                              f"got {kind!r}")
    try:
        m, n = int(doc["m"]), int(doc["n"])
    except (KeyError, TypeError, ValueError):
        raise SystemFileError(f"{path}: integer fields 'm' and 'n' are required")

    def matrix(name: str, shape: tuple[int, int], required: bool) -> np.ndarray:
        if name not in doc:
            if required:
                raise SystemFileError(f"{path}: missing matrix {name}")
            return np.zeros(shape, dtype=complex)
        return _decode_matrix(doc[name], name, shape)

    S = matrix("S", (m, m), required=True)
    C_minus = matrix("C_minus", (m, n), required=True)
    Omega_minus = matrix("Omega_minus", (n, n), required=True)
    try:
        if kind == "passive":
            if "C_plus" in doc or "Omega_plus" in doc:
                for name in ("C_plus", "Omega_plus"):
                    if name in doc:
                        X = _decode_matrix(doc[name], name,
                                           (m, n) if name == "C_plus" else (n, n))
                        if np.any(X != 0):
                            raise SystemFileError(
                                f"{path}: kind 'passive' forbids nonzero {name}")
            sys: AnySystem = PassiveSystem(S=S, C_minus=C_minus,
                                           Omega_minus=Omega_minus)
        else:
            sys = GeneralSystem(S=S, C_minus=C_minus,
                                C_plus=matrix("C_plus", (m, n), required=False),
                                Omega_minus=Omega_minus,
                                Omega_plus=matrix("Omega_plus", (n, n),
                                                  required=False))
        if repair:
            sys = sys.repaired()
        sys.validate(tol)
    except ValidationError as exc:
        raise SystemFileError(f"{path}: {exc}")
    return sys
