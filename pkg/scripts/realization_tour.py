#!/usr/bin/env python3
"""Tour of the realization forms on one random single-input system.

Builds a random passive system, reduces it to a minimal subsystem, and
prints the cascade, canonical, independent-oscillator and chain-mode
parameters together with the worst transfer-function residual of each form
over the standard frequency grid.
"""

from __future__ import annotations

import argparse

import numpy as np

from qlsr import (cascade_realization, chain_mode, chain_system, eval_Sigma,
                  indep_system, independent_oscillator, minimal_subsystem,
                  mimo_realization, mimo_system, passive_equivalence_report,
                  recover_indep_from_chain, series_product, standard_grid,
                  PassiveSystem)


def sigma_gap(a, b, grid) -> float:
    return max(float(np.linalg.norm(eval_Sigma(a, 1j * w)
                                    - eval_Sigma(b, 1j * w))) for w in grid)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--modes", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n = args.modes
    Om = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    sys = PassiveSystem(S=np.eye(1),
                        C_minus=rng.normal(size=(1, n))
                        + 1j * rng.normal(size=(1, n)),
                        Omega_minus=(Om + Om.conj().T) / 2)

    rep = passive_equivalence_report(sys)
    print(f"random single-input system: n={n}, hurwitz={rep.hurwitz}, "
          f"n_min={rep.n_min}")
    grid = standard_grid(sys)[::5]

    netlist, _ = cascade_realization(sys)
    print(f"\ncascade: {netlist.n_stages} one-mode stages, detunings "
          f"{np.round(netlist.omegas, 4)}")
    print(f"  residual {sigma_gap(sys, series_product(netlist), grid):.2e}")

    canon = mimo_realization(sys)
    print(f"\ncanonical: r={canon.r} principal, {canon.aux1} coupled and "
          f"{canon.aux2} free auxiliary modes")
    print(f"  residual {sigma_gap(sys, mimo_system(canon), grid):.2e}")

    params, _ = independent_oscillator(sys)
    print(f"\nindependent oscillators: gamma={params.gamma:.6g}, "
          f"omega0={params.omega0:.6g}")
    for k, w in params.aux:
        print(f"  kappa={k:.6g}  omega={w:.6g}")
    print(f"  residual {sigma_gap(sys, indep_system(params), grid):.2e}")

    reduced, _ = minimal_subsystem(sys)
    chain, _ = chain_mode(reduced)
    print(f"\nchain: gamma_bar={chain.gamma_bar:.6g}")
    print(f"  diag    {np.round(chain.diag, 4)}")
    print(f"  offdiag {np.round(chain.offdiag, 4)}")
    print(f"  residual {sigma_gap(sys, chain_system(chain), grid):.2e}")

    rec = recover_indep_from_chain(chain)
    gap = max(abs(a - b) + abs(c - d)
              for (a, c), (b, d) in zip(sorted(rec.aux, key=lambda t: t[1]),
                                        sorted(params.aux, key=lambda t: t[1])))
    print(f"\nuniqueness check: chain -> oscillator parameter gap {gap:.2e}")


if __name__ == "__main__":
    main()
