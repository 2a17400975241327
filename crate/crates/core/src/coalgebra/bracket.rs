use super::cochain::{BasisCoderivation, Cochain};
use super::space::GradedSpace;
use crate::error::Result;
use crate::linalg::Scalar;

/// Koszul sign and result of inserting `g` into `f` at every matching slot.
fn insert_basis(
    space: &GradedSpace,
    f: &BasisCoderivation,
    g: &BasisCoderivation,
    mut emit: impl FnMut(BasisCoderivation, bool),
) {
    let g_odd = g.parity(space).is_odd();
    let mut passed_odd = false;
    for (p, &slot) in f.inputs().iter().enumerate() {
        if slot == g.output() {
            let mut inputs = Vec::with_capacity(f.arity() + g.arity() - 1);
            inputs.extend_from_slice(&f.inputs()[..p]);
            inputs.extend_from_slice(g.inputs());
            inputs.extend_from_slice(&f.inputs()[p + 1..]);
            emit(
                BasisCoderivation::new(inputs, f.output()),
                g_odd && passed_odd,
            );
        }
        passed_odd ^= space.parity(slot).is_odd();
    }
}

/// `f ∘ g`: insert `g` into each input slot of `f`, with the sign
/// `(-1)^{|g|·(parity of the inputs passed over)}`.
///
/// Extended bilinearly, so mixed arities and parities are fine.
pub fn circle_product(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    f.same_space(g)?;
    let space = f.space();
    let mut out = Cochain::zero(space);
    for (fb, fx) in f.terms() {
        for (gb, gx) in g.terms() {
            insert_basis(space, fb, gb, |b, negative| {
                let x: Scalar = fx * gx;
                out.add_term(b, if negative { -x } else { x });
            });
        }
    }
    Ok(out)
}

/// Graded commutator `[f,g] = f∘g − (−1)^{|f||g|} g∘f`, term by term.
pub fn bracket(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    f.same_space(g)?;
    let space = f.space();
    let mut out = Cochain::zero(space);
    for (fb, fx) in f.terms() {
        let f_odd = fb.parity(space).is_odd();
        for (gb, gx) in g.terms() {
            let x: Scalar = fx * gx;
            insert_basis(space, fb, gb, |b, negative| {
                out.add_term(b, if negative { -x.clone() } else { x.clone() });
            });
            let swap_negative = !(f_odd && gb.parity(space).is_odd());
            insert_basis(space, gb, fb, |b, negative| {
                out.add_term(
                    b,
                    if negative ^ swap_negative {
                        -x.clone()
                    } else {
                        x.clone()
                    },
                );
            });
        }
    }
    Ok(out)
}

/// `[d,d]`.
pub fn square(d: &Cochain) -> Cochain {
    bracket(d, d).expect("same space")
}

/// Panicking shorthand used where both cochains come from the same space.
pub(crate) fn br(f: &Cochain, g: &Cochain) -> Cochain {
    bracket(f, g).expect("cochains on the same space")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::space::GradedSpace;
    use std::sync::Arc;

    fn odd2() -> Arc<GradedSpace> {
        Arc::new(GradedSpace::with_prefix("f", 0, 2))
    }

    fn one_one() -> Arc<GradedSpace> {
        Arc::new(GradedSpace::with_dims(1, 1))
    }

    #[test]
    fn half_square_of_lambda_on_odd_plane() {
        let v = odd2();
        let lambda = Cochain::from_one_based(&v, &[(&[1, 2], 2, 1), (&[2, 1], 2, 1)]);
        let half = square(&lambda).scale(&crate::linalg::ratio(1, 2));
        let expected = Cochain::from_one_based(&v, &[(&[1, 1, 2], 2, -1), (&[2, 1, 1], 2, 1)]);
        assert_eq!(half, expected);
    }

    #[test]
    fn circle_product_on_one_one() {
        let v = one_one();
        let mu = Cochain::from_one_based(&v, &[(&[2, 2], 2, 1)]);
        let phi = Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)]);
        let expected = Cochain::from_one_based(&v, &[(&[1, 1, 2], 2, 1), (&[2, 1, 1], 2, -1)]);
        assert_eq!(circle_product(&mu, &phi).unwrap(), expected);
        assert!(circle_product(&phi, &mu).unwrap().is_zero());
        assert_eq!(bracket(&phi, &mu).unwrap(), expected);
    }

    #[test]
    fn delta_lambda_on_one_one() {
        let v = one_one();
        let delta = Cochain::from_one_based(&v, &[(&[2, 2], 2, 1)]);
        let lambda = Cochain::from_one_based(&v, &[(&[1, 2], 1, 1), (&[2, 1], 1, 1)]);
        assert_eq!(
            bracket(&delta, &lambda).unwrap(),
            Cochain::from_one_based(&v, &[(&[1, 2, 2], 1, 1), (&[2, 2, 1], 1, 1)])
        );
        assert_eq!(
            square(&lambda).scale(&crate::linalg::ratio(1, 2)),
            Cochain::from_one_based(&v, &[(&[1, 2, 2], 1, 1), (&[2, 2, 1], 1, -1)])
        );
    }

    #[test]
    fn identity_insertion() {
        let v = one_one();
        let id = Cochain::from_one_based(&v, &[(&[1], 1, 1), (&[2], 2, 1)]);
        let f = Cochain::from_one_based(&v, &[(&[1, 2], 1, 3), (&[2, 2], 2, -1)]);
        // the identity coderivation acts on each slot, so f∘id counts the arity
        assert_eq!(
            circle_product(&f, &id).unwrap(),
            f.scale(&crate::linalg::scalar(2))
        );
        assert_eq!(circle_product(&id, &f).unwrap(), f);
        let lin = Cochain::from_one_based(&v, &[(&[1], 1, 4), (&[2], 2, -1)]);
        assert_eq!(circle_product(&lin, &id).unwrap(), lin);
        assert!(circle_product(&f, &Cochain::zero(&v)).unwrap().is_zero());
    }

    #[test]
    fn space_mismatch() {
        let a = Cochain::from_one_based(&odd2(), &[(&[1], 1, 1)]);
        let b = Cochain::from_one_based(&one_one(), &[(&[1], 1, 1)]);
        assert!(bracket(&a, &b).is_err());
    }
}
