//! Graded spaces, cochains as sums of basis coderivations, the Gerstenhaber
//! bracket and the group actions on cochains.

pub mod action;
pub mod bracket;
pub mod cochain;
pub mod space;

pub use action::{apply_group_element, apply_linear_map, pullback_exp_beta};
pub use bracket::{bracket, circle_product, square};
pub use cochain::{bidegree_split, cochain_basis, BasisCoderivation, Cochain};
pub use space::{Bidegree, GradedSpace, Parity, Side, SplitSpace};
