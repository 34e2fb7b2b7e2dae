"""Realization analysis and synthesis for open-oscillator linear systems."""

from .config import DEFAULT, Tolerances
from .matcore import (ShapeError, SubspaceBasis, delta, flat, intersect, jmat,
                      kernel_basis, numerical_rank, projector_distance,
                      schur_lower)
from .passive import (MinimalityReport, is_hurwitz, minimal_subsystem,
                      n_min_mimo, n_min_siso, passive_equivalence_report)
from .structure import (CtrbObsvReport, DFDecomposition, OsMatrix, build_Os,
                        check_kernel_C_condition, controllability_matrix,
                        ctrb_obsv_report, df_decompose, observability_matrix,
                        subspaces)
from .synthesis import (CascadeNetlist, ChainParams, IndepOscParams,
                        MimoCanonical, arrowhead_E11, cascade_realization,
                        chain_mode, chain_system, indep_system,
                        independent_oscillator, mimo_realization, mimo_system,
                        recover_indep_from_chain, series_product, tf_chain,
                        tf_indep, tridiag_E11)
from .sysfile import SystemFileError, load_system, save_system
from .sysmodel import (GeneralSystem, PassiveSystem, RealizabilityReport,
                       StateSpace, ValidationError, build_state_space,
                       check_physical_realizability, mean_response,
                       passive_state_space)
from .transfer import (GenuinenessReport, GridCheck, PoleProximityError,
                       SigmaRational, allpass_check, eval_G, eval_Sigma,
                       fractional_identity_check, genuineness_probe,
                       is_lossless_bounded_real, is_lossless_positive_real,
                       spectral_scale, standard_grid)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
