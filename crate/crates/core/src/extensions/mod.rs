//! Extensions `0 → M → V → W → 0` as codifferentials `d = δ + μ + λ + ψ`:
//! validation, construction from `(δ, μ, λ)`, equivalence and classification.

pub mod classify;
pub mod equivalence;
pub mod obstruction;
pub mod structure;

pub use classify::{classify_extensions, Classification, ClassifyOptions, ExtensionClass};
pub use equivalence::{
    equivalent_general, equivalent_restricted, find_isomorphism, grid_combinations, Fingerprint,
    GeneralWitness, ScalarGrid,
};
pub use obstruction::{
    classify_bimodule_extensions, classify_infinitesimal_extensions, lambda_classes,
    mc_obstruction, mc_residual, obstruction_group, solve_psi, tau_classes, BimoduleExtensions,
    InfinitesimalExtension, InfinitesimalExtensions, PsiSolution,
};
pub use structure::{ExtensionStructure, Relation, ValidationReport};
