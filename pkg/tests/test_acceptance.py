"""Acceptance suite: twelve property-based criteria at desk scale.

Each test prints one pass/fail line (written through the capture layer so it
always reaches the console) and then asserts the verdict.
"""

from __future__ import annotations

import csv
import json
import sys as _sys

import numpy as np
import pytest

import qlsr
from qlsr import (DEFAULT, PassiveSystem, SigmaRational, allpass_check,
                  build_Os, build_state_space, cascade_realization,
                  chain_mode, chain_system, check_physical_realizability,
                  controllability_matrix, ctrb_obsv_report, df_decompose,
                  eval_G, eval_Sigma, fractional_identity_check,
                  genuineness_probe, indep_system, independent_oscillator,
                  is_hurwitz, is_lossless_bounded_real,
                  is_lossless_positive_real, jmat, kernel_basis,
                  minimal_subsystem, mimo_realization, mimo_system,
                  n_min_mimo, numerical_rank, observability_matrix,
                  passive_equivalence_report, projector_distance,
                  recover_indep_from_chain, save_system, series_product,
                  spectral_scale, standard_grid, subspaces, tf_chain,
                  tf_indep)
from qlsr.cli import main as cli_main
from conftest import (random_general, random_passive, random_sizes,
                      siso_with_df_modes)

RNG = np.random.default_rng(0xACCE97)


def _criterion(num: int, desc: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'} - {desc}"
    if detail:
        line += f" ({detail})"
    import conftest
    conftest.CRITERION_LINES.append(line)
    print(line, file=_sys.__stdout__, flush=True)
    assert ok, line


def _mixed_general(rng):
    n, m = random_sizes(rng)
    if rng.random() < 0.3 and n > 1:
        return siso_with_df_modes(n, int(rng.integers(1, n)), rng).to_general()
    return random_general(n, m, rng)


def test_criterion_01_realizability_roundtrip():
    worst = 0.0
    for _ in range(200):
        n, m = random_sizes(RNG)
        ss = build_state_space(random_general(n, m, RNG))
        worst = max(worst, max(check_physical_realizability(ss).residuals()))
    _criterion(1, "state-space relations hold to 1e-12", worst <= 1e-12,
               f"worst residual {worst:.2e}")


def test_criterion_02_rank_equivalence():
    disagreements = 0
    for _ in range(200):
        rep = ctrb_obsv_report(_mixed_general(RNG))
        disagreements += len(rep.warnings)
    _criterion(2, "rank(O_s) = Kalman controllability = observability",
               disagreements == 0, f"{disagreements} disagreements")


def test_criterion_03_kernel_subspaces():
    worst = 0.0
    for _ in range(200):
        sys = _mixed_general(RNG)
        ss = build_state_space(sys)
        Os = build_Os(sys).matrix
        rep = subspaces(sys)
        from qlsr.structure import _block_normalized
        obs_full = kernel_basis(_block_normalized(
            observability_matrix(ss.A, ss.C), 2 * sys.m), DEFAULT)
        ctrb_full = kernel_basis(_block_normalized(
            controllability_matrix(ss.A, ss.B).conj().T, 2 * sys.m), DEFAULT)
        worst = max(worst,
                    projector_distance(rep.unobs, obs_full),
                    projector_distance(rep.unctrb, ctrb_full))
    _criterion(3, "O_s kernels match full-matrix kernels to 1e-8",
               worst <= 1e-8, f"worst projector gap {worst:.2e}")


def test_criterion_04_df_decomposition():
    worst_unitary = worst_symp = worst_leak = 0.0
    all_even = True
    for k in range(200):
        sys = _mixed_general(RNG)
        n = sys.n
        df = df_decompose(sys)
        all_even &= subspaces(sys).unobs_and_unctrb.dim % 2 == 0
        V = df.V
        worst_unitary = max(worst_unitary, float(np.linalg.norm(
            V @ V.conj().T - np.eye(2 * n))))
        ld = n - df.l
        Jsplit = np.block(
            [[jmat(df.l), np.zeros((2 * df.l, 2 * ld))],
             [np.zeros((2 * ld, 2 * df.l)), jmat(ld)]])
        worst_symp = max(worst_symp, float(np.linalg.norm(
            jmat(n) @ V - V @ Jsplit)))
        if df.l and df.hypothesis_ok:
            worst_leak = max(
                worst_leak,
                float(np.linalg.norm(sys.coupling @ df.V1)),
                float(np.linalg.norm(
                    df.V2.conj().T @ sys.hamiltonian @ df.V1)))
    ok = worst_unitary <= 1e-10 and worst_symp <= 1e-10 \
        and worst_leak <= 1e-8 and all_even
    _criterion(4, "DF transform unitary/symplectic, exact block sparsity",
               ok, f"unitary {worst_unitary:.2e} symplectic {worst_symp:.2e} "
               f"leak {worst_leak:.2e} even={all_even}")


def test_criterion_05_passive_equivalence():
    disagreements = 0
    undamped_ok = True
    for k in range(200):
        n, m = random_sizes(RNG)
        if k % 3 == 0 and n > 1:
            sys = siso_with_df_modes(n, int(RNG.integers(1, n)), RNG)
            rep = passive_equivalence_report(sys)
            undamped_ok &= not (rep.hurwitz or rep.observable
                                or rep.controllable)
        else:
            rep = passive_equivalence_report(random_passive(n, m, RNG))
        disagreements += len(rep.warnings)
    _criterion(5, "Hurwitz = observable = controllable for passive systems",
               disagreements == 0 and undamped_ok,
               f"{disagreements} disagreements, undamped classified "
               f"false={undamped_ok}")


def test_criterion_06_minimal_mode_count():
    formula_ok = True
    hurwitz_ok = True
    worst_gap = 0.0
    cases = []
    for _ in range(180):
        n, m = random_sizes(RNG, 6, 3)
        cases.append(random_passive(n, m, RNG))
    # degenerate-eigenvalue and decoupled-mode fixtures
    cases.append(PassiveSystem(
        S=np.eye(2), C_minus=np.array([[1.0, 0, 1], [0, 1.0, 0]]),
        Omega_minus=np.diag([1.0, 1.0, 3.0])))
    cases.append(PassiveSystem(S=np.eye(1), C_minus=np.zeros((1, 3)),
                               Omega_minus=np.diag([1.0, 2.0, 3.0])))
    for _ in range(19):
        n = int(RNG.integers(2, 7))
        cases.append(siso_with_df_modes(n, int(RNG.integers(1, n)), RNG))
    import warnings as _warnings
    for sys in cases:
        rank = numerical_rank(observability_matrix(
            sys.Omega_minus, sys.C_minus, sys.n), DEFAULT)
        formula_ok &= n_min_mimo(sys) == rank
        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore")
            reduced, _ = minimal_subsystem(sys)
        if reduced.n:
            hurwitz_ok &= is_hurwitz(reduced)
        grid = standard_grid(sys)[::8]
        scale = max(max(np.linalg.norm(eval_G(sys, 1j * w)) for w in grid), 1.0)
        gap = max(np.linalg.norm(eval_G(sys, 1j * w)
                                 - eval_G(reduced, 1j * w)) for w in grid)
        worst_gap = max(worst_gap, gap / scale)
    ok = formula_ok and hurwitz_ok and worst_gap <= 1e-8
    _criterion(6, "n_min equals observability rank; reduction preserves G",
               ok, f"formula={formula_ok} hurwitz={hurwitz_ok} "
               f"worst relative gap {worst_gap:.2e}")


def test_criterion_07_allpass_and_fractional():
    worst_ap = worst_frac = worst_temp = 0.0
    for _ in range(200):
        n, m = random_sizes(RNG, 6, 3)
        gen = random_general(n, m, RNG)
        ap = allpass_check(gen, standard_grid(gen)[::8])
        worst_ap = max(worst_ap, ap.max_residual)
        A = build_state_space(gen).A
        rho = spectral_scale(A)
        # poles of Sigma for a general system sit anywhere in the plane, so
        # sample right-half-plane points away from them
        sigma_poles = -1j * np.linalg.eigvals(jmat(gen.n) @ gen.hamiltonian)
        poles = np.concatenate([np.linalg.eigvals(A), sigma_poles])
        s_grid = []
        while len(s_grid) < 6:
            s = rho * (0.05 + RNG.random()) + 1j * rho * RNG.normal()
            if np.min(np.abs(s - poles)) > 0.05 * rho:
                s_grid.append(s)
        worst_frac = max(worst_frac,
                         fractional_identity_check(gen, s_grid).max_residual)
        # Hermitian-part factorization of Sigma for passive systems
        psv = random_passive(n, m, RNG)
        s = abs(RNG.normal()) + 0.1 + 1j * RNG.normal() * 2
        Sig = eval_Sigma(psv, s)
        M = psv.C_minus @ np.linalg.inv(
            s * np.eye(n) + 1j * psv.Omega_minus)
        lhs = Sig + Sig.conj().T
        rhs = s.real * (M @ M.conj().T)
        worst_temp = max(worst_temp, float(
            np.linalg.norm(lhs - rhs) / max(1.0, np.linalg.norm(lhs))))
    ok = worst_ap <= 1e-9 and worst_frac <= 1e-9 and worst_temp <= 1e-10
    _criterion(7, "all-pass, fractional and Hermitian-part identities",
               ok, f"allpass {worst_ap:.2e} fractional {worst_frac:.2e} "
               f"herm-part {worst_temp:.2e}")


def test_criterion_08_lossless_and_genuineness():
    lossless_ok = True
    for _ in range(25):
        n, m = random_sizes(RNG, 5, 3)
        sys = random_passive(n, m, RNG)
        lossless_ok &= is_lossless_bounded_real(sys)
        lossless_ok &= is_lossless_positive_real(sys)
    # the rational function (s^2 + 1) / (s (s^2 + 2)) in pole/residue form,
    # realized as a 3-mode system with axis poles for the grid test
    r2 = np.sqrt(2.0)
    sigma = SigmaRational(pole_freqs=(0.0, r2, -r2),
                          residues=(0.5, 0.25, 0.25))
    probe_sys = PassiveSystem(
        S=np.eye(1), C_minus=[[1.0, 1 / r2, 1 / r2]],
        Omega_minus=np.diag([0.0, r2, -r2]))
    check = [abs(sigma(s) - eval_Sigma(probe_sys, s)[0, 0]) < 1e-12
             for s in (0.3 + 1j, 1.0 - 0.4j)]
    grid_lpr = is_lossless_positive_real(probe_sys) and all(check)
    # Known red: this function is exactly the Sigma of the minimal 3-mode
    # system above, so a probe consistent with its positive examples must
    # accept it; the rejection clause is asserted unweakened regardless.
    # See the README test section.
    rejected = not genuineness_probe(sigma).genuine
    ok = lossless_ok and grid_lpr and rejected
    _criterion(8, "minimal passive systems lossless; degree-3 axis-pole "
               "function accepted LPR but rejected as genuine",
               ok, f"lossless={lossless_ok} grid_lpr={grid_lpr} "
               f"probe_rejects={rejected}")


def test_criterion_09_synthesis_equivalence():
    worst_casc = worst_mimo = worst_indep = worst_chain = worst_alg = 0.0
    for k in range(60):
        n, m = random_sizes(RNG, 6, 3)
        sys = random_passive(n, m, RNG)
        grid = standard_grid(sys)[::8]

        netlist, _ = cascade_realization(sys)
        rebuilt = series_product(netlist)
        worst_casc = max(worst_casc, max(
            np.linalg.norm(eval_G(sys, 1j * w) - eval_G(rebuilt, 1j * w))
            for w in grid))
        C = netlist.coupling
        Om = rebuilt.Omega_minus
        worst_alg = max(worst_alg, max(
            abs(Om[j, kk] - 0.5j * np.vdot(C[:, j], C[:, kk]))
            for j in range(n) for kk in range(j + 1, n)) if n > 1 else 0.0)

        canon = mimo_realization(sys)
        mref = mimo_system(canon)
        R1 = canon.output_unitary
        worst_mimo = max(worst_mimo, max(
            np.linalg.norm(eval_G(sys, 1j * w)
                           - R1.conj().T @ eval_G(mref, 1j * w) @ R1 @ sys.S)
            for w in grid))

        siso = random_passive(int(RNG.integers(1, 8)), 1, RNG)
        sgrid = standard_grid(siso)[::8]
        params, _ = independent_oscillator(siso)
        worst_indep = max(worst_indep, max(
            abs(eval_Sigma(siso, 1j * w)[0, 0]
                - eval_Sigma(indep_system(params), 1j * w)[0, 0])
            for w in sgrid))
        reduced, _ = minimal_subsystem(siso)
        cparams, _ = chain_mode(reduced)
        worst_chain = max(worst_chain, max(
            abs(eval_Sigma(siso, 1j * w)[0, 0]
                - eval_Sigma(chain_system(cparams), 1j * w)[0, 0])
            for w in sgrid))
    ok = max(worst_casc, worst_mimo, worst_indep, worst_chain) <= 1e-8 \
        and worst_alg <= 1e-10
    _criterion(9, "all four realization forms reproduce the transfer function",
               ok, f"cascade {worst_casc:.2e} mimo {worst_mimo:.2e} indep "
               f"{worst_indep:.2e} chain {worst_chain:.2e} algebra "
               f"{worst_alg:.2e}")


def test_criterion_10_chain_jacobi_oracles():
    worst_spec = worst_arrow = worst_tri = worst_tf = 0.0
    for _ in range(40):
        siso = random_passive(int(RNG.integers(1, 8)), 1, RNG)
        reduced, _ = minimal_subsystem(siso)
        params, _ = chain_mode(reduced)
        jac = chain_system(params).Omega_minus
        worst_spec = max(worst_spec, float(np.max(np.abs(
            np.sort(np.linalg.eigvalsh(jac))
            - np.sort(np.real(np.diag(reduced.Omega_minus)))))))
        indep = recover_indep_from_chain(params)
        for _ in range(3):
            s = abs(RNG.normal()) + 0.1 + 1j * RNG.normal() * 2
            a = np.concatenate([[indep.omega0], [w for _, w in indep.aux]])
            b = np.sqrt([k for k, _ in indep.aux])
            worst_tf = max(
                worst_tf,
                abs(tf_indep(indep, s)
                    - 0.5 * indep.gamma * qlsr.arrowhead_E11(a[0], a[1:], b, s)),
                abs(tf_chain(params, s) - 0.5 * params.gamma_bar
                    * qlsr.tridiag_E11(params.diag, params.offdiag, s)))
    for _ in range(500):
        n = int(RNG.integers(2, 9))
        s = RNG.normal() + 1j * RNG.normal()
        a0, a = RNG.normal(), RNG.normal(size=n - 1) * 3
        b = np.abs(RNG.normal(size=n - 1)) + 0.05
        M = np.diag(np.concatenate([[a0], a]))
        M[0, 1:], M[1:, 0] = b, b
        if np.min(np.abs(np.linalg.eigvals(s * np.eye(n) + 1j * M))) > 1e-3:
            E = np.linalg.inv(s * np.eye(n) + 1j * M)
            worst_arrow = max(worst_arrow,
                              abs(E[0, 0] - qlsr.arrowhead_E11(a0, a, b, s)))
        ad = RNG.normal(size=n) * 3
        bd = np.abs(RNG.normal(size=n - 1)) + 0.05
        T = np.diag(ad) + np.diag(bd, 1) + np.diag(bd, -1)
        if np.min(np.abs(np.linalg.eigvals(s * np.eye(n) + 1j * T))) > 1e-3:
            E = np.linalg.inv(s * np.eye(n) + 1j * T)
            worst_tri = max(worst_tri,
                            abs(E[0, 0] - qlsr.tridiag_E11(ad, bd, s)))
    ok = worst_spec <= 1e-9 and worst_arrow <= 1e-10 \
        and worst_tri <= 1e-10 and worst_tf <= 1e-10
    _criterion(10, "Jacobi spectrum and resolvent-corner oracles",
               ok, f"spectrum {worst_spec:.2e} arrowhead {worst_arrow:.2e} "
               f"tridiag {worst_tri:.2e} tf {worst_tf:.2e}")


def test_criterion_11_uniqueness_roundtrip():
    worst = worst_w0 = 0.0
    for _ in range(200):
        siso = random_passive(int(RNG.integers(1, 8)), 1, RNG)
        reduced, _ = minimal_subsystem(siso)
        params, _ = chain_mode(reduced)
        direct, _ = independent_oscillator(reduced)
        rec = recover_indep_from_chain(params)
        scale = 1.0 + abs(direct.gamma) + abs(direct.omega0)
        worst = max(worst, abs(rec.gamma - direct.gamma) / scale)
        worst_w0 = max(worst_w0, abs(rec.omega0 - direct.omega0) / scale)
        for (k1, w1), (k2, w2) in zip(sorted(rec.aux, key=lambda t: t[1]),
                                      sorted(direct.aux, key=lambda t: t[1])):
            sc = 1.0 + abs(k2) + abs(w2)
            worst = max(worst, abs(k1 - k2) / sc, abs(w1 - w2) / sc)
    ok = worst <= 1e-8 and worst_w0 <= 1e-10
    _criterion(11, "chain and arrowhead parameters agree through both routes",
               ok, f"worst {worst:.2e} omega0 {worst_w0:.2e}")


def test_criterion_12_cli_and_serialization(tmp_path, capsys):
    ok = True
    detail = []
    try:
        sys_obj = random_passive(4, 1, RNG, identity_S=True)
        p = tmp_path / "sys.json"
        save_system(sys_obj, p)
        loaded = qlsr.load_system(p)
        p2 = tmp_path / "sys2.json"
        save_system(loaded, p2)
        ok &= p.read_text() == p2.read_text()
        detail.append(f"roundtrip={'ok' if ok else 'differs'}")

        assert cli_main(["analyze", str(p), "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        ok &= report["hurwitz"] and report["n_min"] == 4

        out = tmp_path / "chain.json"
        assert cli_main(["synthesize", str(p), "--form", "chain",
                         "-o", str(out)]) == 0
        capsys.readouterr()
        artifact = json.loads(out.read_text())
        ok &= artifact["verification"]["max_residual"] <= 1e-8
        detail.append(f"chain residual {artifact['verification']['max_residual']:.2e}")

        sweep = tmp_path / "sweep.csv"
        assert cli_main(["freqresp", str(p), "--points", "41",
                         "-o", str(sweep)]) == 0
        with sweep.open() as fh:
            rows = list(csv.DictReader(fh))
        ok &= bool(rows)
        ok &= all(float(r["allpass_deviation"]) <= 1e-9 for r in rows)
        detail.append("sweep all-pass ok")
    except Exception as exc:
        ok = False
        detail.append(repr(exc))
    _criterion(12, "CLI analyze/synthesize/freqresp and lossless round-trip",
               ok, "; ".join(detail))
