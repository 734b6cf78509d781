"""Numerical laboratory for quantum virtual-path states on a periodic 1-D grid."""

from .hilbert import (BOUNDARY_MASS_LIMIT, BoundaryError, GridSpace,
                      Representation, RepresentationError, StateVector,
                      apply_diagonal_phase, boundary_mass, check_boundary,
                      conjugate_transform, density_moments, fidelity,
                      gaussian_state, inner, make_grid)
from .generators import (Direction, GeneratorPair, PhenomenologicalPair, Regime,
                         apply_hb, apply_hf, apply_hphen_f, build_commuting,
                         build_weyl_pair, commutator_check, evolve, phen_pair,
                         phen_evolve_backward, phen_evolve_forward,
                         time_reversal, weyl_displace)
from .qvp import (ConditionalState, NetDirection, QvpParams, ResolutionPolicy,
                  build_qvp, clock_time_of, coarse_model, default_seed,
                  default_seed_width, iterate_qvp, limit_ket, net_evolution,
                  qbinomial_oracle, qbinomial_row, qvp_params, qvp_step,
                  resolution_threshold, step_displacement, suggest_weyl_grid,
                  upsilon_set)
from .analysis import (PeakReport, SingleLobeError, SpacingReport, coarse_grain,
                       density_bhattacharyya, lobe_density_fidelity, lobe_stats,
                       model_match, predict_clock_time, predict_spread,
                       score_peaks, spacing_report, theta_scan)

__version__ = "0.1.0"
