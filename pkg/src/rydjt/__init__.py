"""Vibronic spectra, Jahn-Teller states and Born-Oppenheimer surfaces of a
three-atom Rydberg tweezer molecule."""

from .basis import ElectronicBasis, FockTruncation, ProductBasis, enumerate_resonant
from .operators import (
    ModelParams,
    SparseOperator,
    build_coupling,
    build_h_full_linearized,
    build_h_res,
    build_phonon_energy,
    build_ring_hopping,
    expand_pair_potential,
)
from .spectra import EigenResult, SweepTable, lowest_eigenpairs, sector_decoupling_check, spectrum_sweep
from .perturbation import e_gs2, e_jt2_gamma, e_jt2_series, gamma_sum, jt_unperturbed_energy
from .observables import (
    build_jt_ansatz,
    entanglement_entropy,
    fidelity,
    jt_branch_state,
    jt_branches,
    mode_displacements,
    overlap,
    rydberg_density,
    sample_branch,
    spin_reduced_density,
)
from .born_oppenheimer import bo_ground_energy, bo_matrix, find_minima, normal_mode_frame, transition_sweep
from .physical import PhysicalParams, classical_distortion, kappa_from_physical, vdw_gradient

__version__ = "0.1.0"
