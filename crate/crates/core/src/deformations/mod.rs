//! First-order deformations: of an extension (moving `λ` and `ψ`) and of a
//! representation (moving `δ` and `λ`, or `μ` and `λ`).

pub mod extension;
pub mod first_order;
pub mod representation;

pub use extension::{
    check_deformation, classify_infinitesimal_deformations, eta_admissible, solve_zeta,
    Admissibility, DeformationClass, DeformationDirection, DeformationReport,
    InfinitesimalDeformations, Stage,
};
pub use first_order::FirstOrder;
pub use representation::{
    module_identity_holds, rep_deform_a, rep_deform_b, RepDeformA, RepDeformB, RepDeformationA,
    RepDeformationB,
};

use crate::coalgebra::Cochain;
use crate::cohomology::{coboundary_matrix, CochainSpace};
use crate::error::Result;
use crate::linalg::{Matrix, Subspace};

/// Solves `[op_i, x] = rhs_i` for all `i` with `x` in `piece`. Returns the
/// particular solution reduced modulo the solution space of the homogeneous
/// system, and that space.
pub(crate) fn solve_stacked(
    piece: &CochainSpace,
    equations: &[(&Cochain, Cochain)],
) -> Result<Option<(Cochain, Subspace)>> {
    let space = piece.space();
    let mut m = Matrix::zeros(0, piece.dim());
    let mut rhs = Vec::new();
    for (op, target) in equations {
        let arity = piece.basis().first().map_or(1, |b| b.arity());
        let grow = op
            .arities()
            .into_iter()
            .max()
            .unwrap_or(1)
            .saturating_sub(1);
        let cod = CochainSpace::full(space, arity + grow, None);
        m = m.vstack(&coboundary_matrix(op, piece, &cod)?)?;
        match cod.coordinates(target) {
            Ok(v) => rhs.extend(v),
            Err(_) => return Ok(None),
        }
    }
    Ok(m.solve_affine(&rhs)?.map(|(x, kernel)| {
        let reduced = kernel.reduce(&x).expect("same length");
        (piece.cochain(&reduced), kernel)
    }))
}
