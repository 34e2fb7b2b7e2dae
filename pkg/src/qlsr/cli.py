"""Command-line surface: analyze, synthesize, freqresp, verify.

Analysis findings are data, not errors: commands exit 0 whenever they run to
completion, and nonzero only on load/usage failures.  The ``--tol`` option
(or the QLSR_TOL environment variable) overrides the headline tolerances.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys as _sys
from pathlib import Path

import numpy as np

from . import config, passive, structure, synthesis, transfer
from .config import Tolerances
from .sysfile import SystemFileError, _encode_matrix, load_system
from .sysmodel import (GeneralSystem, PassiveSystem, build_state_space,
                       check_physical_realizability)


@dataclasses.dataclass(frozen=True)
class AnalysisReport:
    """Aggregated structural findings for one system."""

    kind: str
    n: int
    m: int
    realizability_residuals: tuple[float, float, float]
    realizable: bool
    controllable: bool
    observable: bool
    rank_Os: int
    df_dimension: int
    df_hypothesis_ok: bool
    hurwitz: bool | None = None
    n_min: int | None = None
    sigma_set: tuple[tuple[float, float], ...] | None = None
    lossless_bounded_real: bool | None = None
    lossless_positive_real: bool | None = None
    warnings: tuple[str, ...] = ()

    def to_json(self) -> str:
        def scrub(obj):
            if isinstance(obj, (np.bool_,)):
                return bool(obj)
            if isinstance(obj, np.integer):
                return int(obj)
            if isinstance(obj, np.floating):
                return float(obj)
            raise TypeError(f"not JSON serializable: {type(obj)}")
        return json.dumps(dataclasses.asdict(self), indent=1, default=scrub)

    def to_text(self) -> str:
        lines = [
            f"system: kind={self.kind} n={self.n} m={self.m}",
            "realizability residuals: "
            + " ".join(f"{r:.3e}" for r in self.realizability_residuals)
            + f"  -> {'ok' if self.realizable else 'VIOLATED'}",
            f"controllable: {self.controllable}  observable: {self.observable}"
            f"  rank_Os: {self.rank_Os}",
            f"decoherence-free modes: l={self.df_dimension}"
            f"  (invariance hypothesis {'holds' if self.df_hypothesis_ok else 'fails'})",
        ]
        if self.hurwitz is not None:
            lines.append(f"hurwitz: {self.hurwitz}  n_min: {self.n_min}")
            lines.append("coupled spectrum: "
                         + ", ".join(f"(w={w:.6g}, tr={t:.6g})"
                                     for w, t in (self.sigma_set or ()))
                         if self.sigma_set else "coupled spectrum: empty")
            lines.append(f"lossless bounded real: {self.lossless_bounded_real}"
                         f"  lossless positive real: {self.lossless_positive_real}")
        for w in self.warnings:
            lines.append(f"warning: {w}")
        return "\n".join(lines)


def analyze_system(sys_obj, tol: Tolerances) -> AnalysisReport:
    general = sys_obj.to_general() if isinstance(sys_obj, PassiveSystem) else sys_obj
    ss = build_state_space(general, tol)
    pr = check_physical_realizability(ss, tol)
    co = structure.ctrb_obsv_report(general, tol)
    df = structure.df_decompose(general, tol)
    warnings = list(co.warnings)
    kwargs: dict = {}
    if isinstance(sys_obj, PassiveSystem):
        rep = passive.passive_equivalence_report(sys_obj, tol)
        warnings.extend(rep.warnings)
        kwargs = dict(
            hurwitz=rep.hurwitz, n_min=rep.n_min, sigma_set=rep.sigma_set,
            lossless_bounded_real=transfer.is_lossless_bounded_real(sys_obj, tol),
            lossless_positive_real=transfer.is_lossless_positive_real(sys_obj, tol),
        )
    return AnalysisReport(
        kind="passive" if isinstance(sys_obj, PassiveSystem) else "general",
        n=sys_obj.n, m=sys_obj.m,
        realizability_residuals=pr.residuals(), realizable=pr.passed,
        controllable=co.controllable, observable=co.observable,
        rank_Os=co.rank_Os, df_dimension=df.l,
        df_hypothesis_ok=df.hypothesis_ok,
        warnings=tuple(warnings), **kwargs)


def _cmd_analyze(args, tol: Tolerances) -> int:
    report = analyze_system(load_system(args.path, tol=tol), tol)
    text = report.to_json() if args.json else report.to_text()
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return 0


def _sigma_residual(orig, rebuilt, grid) -> float:
    worst = 0.0
    for w in grid:
        try:
            r = float(np.linalg.norm(transfer.eval_Sigma(orig, 1j * w)
                                     - transfer.eval_Sigma(rebuilt, 1j * w)))
        except transfer.PoleProximityError:
            continue
        worst = max(worst, r)
    return worst


def _cmd_synthesize(args, tol: Tolerances) -> int:
    sys_obj = load_system(args.path, tol=tol)
    if not isinstance(sys_obj, PassiveSystem):
        print("error: synthesis requires a passive system", file=_sys.stderr)
        return 2
    form = args.form
    grid = transfer.standard_grid(sys_obj)
    artifact: dict = {"form": form, "source": str(args.path)}

    if form == "cascade":
        netlist, U = synthesis.cascade_realization(sys_obj, tol)
        rebuilt = synthesis.series_product(netlist)
        residual = max(
            float(np.linalg.norm(transfer.eval_G(sys_obj, 1j * w)
                                 - transfer.eval_G(rebuilt, 1j * w)))
            for w in grid)
        artifact.update(
            S0=_encode_matrix(netlist.S0),
            coupling=_encode_matrix(netlist.coupling),
            omegas=list(map(float, netlist.omegas)),
            transform_unitary=_encode_matrix(U))
    elif form == "mimo":
        canon = synthesis.mimo_realization(sys_obj, tol)
        rebuilt = synthesis.mimo_system(canon)
        R1 = canon.output_unitary
        residual = 0.0
        for w in grid:
            G = transfer.eval_G(sys_obj, 1j * w)
            Gbar = transfer.eval_G(rebuilt, 1j * w)
            residual = max(residual, float(np.linalg.norm(
                G - R1.conj().T @ Gbar @ R1 @ sys_obj.S)))
        artifact.update(
            r=canon.r, aux1=canon.aux1, aux2=canon.aux2,
            sigma_C=list(map(float, canon.sigma_C)),
            C_bar=_encode_matrix(canon.C_bar),
            Omega_bar=_encode_matrix(canon.Omega_bar),
            transform_unitary=_encode_matrix(canon.mode_unitary),
            output_unitary=_encode_matrix(canon.output_unitary))
    elif form in ("indep", "chain"):
        if sys_obj.m != 1:
            print("error: form requires single-input single-output",
                  file=_sys.stderr)
            return 2
        if form == "indep":
            params, T = synthesis.independent_oscillator(sys_obj, tol)
            rebuilt = synthesis.indep_system(params)
            artifact.update(gamma=params.gamma, omega0=params.omega0,
                            aux=[[k, w] for k, w in params.aux],
                            transform_unitary=_encode_matrix(T))
        else:
            reduced, iso = passive.minimal_subsystem(sys_obj, tol)
            if reduced.n != sys_obj.n:
                print(f"notice: reduced to minimal subsystem "
                      f"({sys_obj.n} -> {reduced.n} modes)")
            params, W = synthesis.chain_mode(reduced, tol)
            rebuilt = synthesis.chain_system(params)
            artifact.update(gamma_bar=params.gamma_bar,
                            diag=list(map(float, params.diag)),
                            offdiag=list(map(float, params.offdiag)),
                            transform_unitary=_encode_matrix(W),
                            mode_isometry=_encode_matrix(iso))
        residual = _sigma_residual(sys_obj, rebuilt, grid)
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(form)

    artifact["verification"] = {"grid_points": len(grid),
                                "max_residual": residual}
    Path(args.output).write_text(json.dumps(artifact, indent=1) + "\n")
    print(f"{form} realization written to {args.output} "
          f"(grid residual {residual:.3e})")
    return 0


def _cmd_freqresp(args, tol: Tolerances) -> int:
    sys_obj = load_system(args.path, tol=tol)
    if args.wmin is not None and args.wmax is not None:
        omegas = np.linspace(args.wmin, args.wmax, args.points)
    else:
        omegas = transfer.standard_grid(sys_obj, points=args.points)
    p = sys_obj.m if isinstance(sys_obj, PassiveSystem) else 2 * sys_obj.m
    header = ["omega"]
    for i in range(p):
        for j in range(p):
            header += [f"ReG_{i}_{j}", f"ImG_{i}_{j}"]
    header += ["allpass_deviation", "sigma_herm_norm"]

    out = Path(args.output) if args.output else None
    fh = out.open("w", newline="") if out else _sys.stdout
    try:
        writer = csv.writer(fh)
        writer.writerow(header)
        eye = np.eye(p)
        for w in omegas:
            row: list = [repr(float(w))]
            try:
                G = transfer.eval_G(sys_obj, 1j * w)
            except transfer.PoleProximityError:
                # pole hit: flag the whole row
                writer.writerow(row + ["nan"] * (len(header) - 1))
                continue
            for i in range(p):
                for j in range(p):
                    row += [repr(float(G[i, j].real)), repr(float(G[i, j].imag))]
            if isinstance(sys_obj, PassiveSystem):
                dev = np.linalg.norm(G.conj().T @ G - eye)
            else:
                from .matcore import flat
                dev = np.linalg.norm(flat(G) @ G - eye)
            row.append(repr(float(dev)))
            try:
                Sig = transfer.eval_Sigma(sys_obj, 1j * w)
                row.append(repr(float(np.linalg.norm(Sig + Sig.conj().T))))
            except transfer.PoleProximityError:
                # G can be regular where Sigma has an axis pole
                row.append("nan")
            writer.writerow(row)
    finally:
        if out:
            fh.close()
    return 0


def _cmd_verify(args, tol: Tolerances) -> int:
    sys_obj = load_system(args.path, tol=tol)
    general = sys_obj.to_general() if isinstance(sys_obj, PassiveSystem) else sys_obj
    checks: list[tuple[str, bool, str]] = []

    pr = check_physical_realizability(build_state_space(general, tol), tol)
    checks.append(("physical realizability", pr.passed,
                   f"max residual {max(pr.residuals()):.3e}"))
    co = structure.ctrb_obsv_report(general, tol)
    checks.append(("rank test consistency", not co.warnings,
                   f"rank_Os={co.rank_Os}"))
    grid = transfer.standard_grid(sys_obj)
    rho = transfer.spectral_scale(build_state_space(general, tol).A)
    rhp = [0.3 * rho + 1j * w for w in grid[:: max(1, len(grid) // 20)]]
    frac = transfer.fractional_identity_check(sys_obj, rhp)
    checks.append(("fractional identity", frac.max_residual <= tol.tf,
                   f"max residual {frac.max_residual:.3e}"))
    ap = transfer.allpass_check(sys_obj, grid)
    checks.append(("all-pass on axis", ap.max_residual <= 10 * tol.tf,
                   f"max deviation {ap.max_residual:.3e}"))
    if isinstance(sys_obj, PassiveSystem):
        rep = passive.passive_equivalence_report(sys_obj, tol)
        checks.append(("stability/minimality consistency", not rep.warnings,
                       f"hurwitz={rep.hurwitz} n_min={rep.n_min}"))
    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qlsr",
        description="Analysis and synthesis of open-oscillator linear systems")
    parser.add_argument("--tol", type=float, default=None,
                        help="override the headline tolerances")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural analysis report")
    p.add_argument("path")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("synthesize", help="write a realization artifact")
    p.add_argument("path")
    p.add_argument("--form", required=True,
                   choices=["cascade", "mimo", "indep", "chain"])
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_synthesize)

    p = sub.add_parser("freqresp", help="frequency-response CSV sweep")
    p.add_argument("path")
    p.add_argument("--wmin", type=float, default=None)
    p.add_argument("--wmax", type=float, default=None)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_freqresp)

    p = sub.add_parser("verify", help="run the invariant suite on one system")
    p.add_argument("path")
    p.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    tol = config.from_environment()
    if args.tol is not None:
        tol = tol.scaled(args.tol)
    try:
        return args.func(args, tol)
    except SystemFileError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
