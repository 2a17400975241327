//! Coboundary operators `D_α = ad_α` as matrices and the cohomology groups
//! built from them: plain, restricted to a kernel, iterated and triple.

pub mod complex;
pub mod tower;

pub use complex::{
    coboundary_matrix, cohomology, cohomology_at, image_pieces, restricted_cohomology,
    CoboundaryOperator, CochainSpace, CohomologySpace,
};
pub use tower::{
    iterated_cohomology, triple_cohomology, triple_d_mu, triple_d_psi, IteratedClass,
    IteratedCohomology, Lift, Operator, Tower, TripleClass, TripleCohomology,
};
