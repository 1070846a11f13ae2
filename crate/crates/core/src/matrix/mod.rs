//! Non-negative transition matrices and their Perron–Frobenius theory.

pub mod dense;
pub mod frobenius;
pub mod poly;
pub mod spectral;
pub mod transition;

pub use dense::{matrix_max_norm, vector_max_norm, Matrix};
pub use frobenius::{frobenius_normal_form, is_irreducible, FrobeniusBlock, FrobeniusForm};
pub use spectral::{
    beta_over_family, leading_eigenvector, smallest_halving_power, spectral_radius, universal_beta, Beta,
    Eigenvector, SpectralOptions, SpectralRadius,
};
pub use transition::{
    build_transition_matrix, depth_decomposition, is_f_stable, obstruction_verdict, Depth, DepthDecomposition,
    ObstructionVerdict, PerronBlock, TransitionMatrix, universe_summary, UniverseSummary, entries_are_reciprocal_sums, HALVING_CAP,
};
