use num_traits::{One, Zero};

use super::bracket::br;
use super::cochain::{require_bidegree, BasisCoderivation, Cochain};
use super::space::{Bidegree, Parity, Side, SplitSpace};
use crate::error::{Error, Result};
use crate::linalg::{ratio, Matrix, Scalar};

/// `f* = exp(−ad_β)` applied to `d` for `β ∈ C^{0,1}` even. For arity two
/// this is `d + [d,β] + ½[[d,β],β]`. This equals `f⁻¹ ∘ d ∘ (f ⊗ … ⊗ f)` for
/// `f = 1 + β`; the series stops because `β² = 0`.
pub fn pullback_exp_beta(d: &Cochain, beta: &Cochain, split: &SplitSpace) -> Result<Cochain> {
    d.same_space(beta)?;
    require_bidegree(beta, split, Bidegree::mixed(0, 1))?;
    if !beta.has_parity(Parity::Even) {
        return Err(Error::WrongParity {
            expected: "even (an element of Hom(W, M) preserving parity)",
        });
    }
    // the series stops: each bracket with β moves a W slot to M, so an
    // arity-n cochain is killed after at most n+1 steps
    let mut total = d.clone();
    let mut term = d.clone();
    let max_steps = d.arities().into_iter().max().unwrap_or(0) + 1;
    for k in 1..=max_steps + 1 {
        term = br(&term, beta).scale(&ratio(1, k as i64));
        if term.is_zero() {
            return Ok(total);
        }
        total = &total + &term;
    }
    Err(Error::Precondition(format!(
        "exp(-ad beta) series does not terminate: term {term}"
    )))
}

/// Checks that `g` is square of the right size, invertible and even, and
/// returns its inverse.
fn even_inverse(g: &Matrix, split: &SplitSpace, block: bool) -> Result<Matrix> {
    let space = split.space();
    let n = space.dim();
    if g.rows() != n || g.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.rows().max(g.cols()),
        });
    }
    for r in 0..n {
        for c in 0..n {
            if g.get(r, c).is_zero() {
                continue;
            }
            if space.parity(r) != space.parity(c) {
                return Err(Error::ParityViolating);
            }
            if block && split.side(r) != split.side(c) {
                return Err(Error::NotBlockDiagonal);
            }
        }
    }
    g.inverse().ok_or(Error::Singular)
}

/// `g*(φ) = g⁻¹ ∘ φ ∘ (g ⊗ … ⊗ g)` for an even invertible `g` that may mix
/// `M` and `W`. Columns of `g` are images of basis vectors.
///
/// Used for changes of basis that are not in the block-diagonal group, such
/// as swapping the two halves of a split.
pub fn apply_linear_map(c: &Cochain, g: &Matrix, split: &SplitSpace) -> Result<Cochain> {
    let ginv = even_inverse(g, split, false)?;
    Ok(transform(c, g, &ginv))
}

/// [`apply_linear_map`] restricted to `g ∈ G_{M,W}` (block diagonal).
pub fn apply_group_element(c: &Cochain, g: &Matrix, split: &SplitSpace) -> Result<Cochain> {
    let ginv = even_inverse(g, split, true)?;
    Ok(transform(c, g, &ginv))
}

/// Action with a precomputed inverse; no checks.
pub(crate) fn transform(c: &Cochain, g: &Matrix, ginv: &Matrix) -> Cochain {
    let n = g.rows();
    let mut out = Cochain::zero(c.space());
    for (b, x) in c.terms() {
        // e_J ↦ Π g[I_q][J_q] · φ(e_I); enumerate the J with all factors nonzero
        let choices: Vec<Vec<(usize, &Scalar)>> = b
            .inputs()
            .iter()
            .map(|&i| {
                (0..n)
                    .filter_map(|j| nz(g.get(i, j)).map(|v| (j, v)))
                    .collect()
            })
            .collect();
        let outputs: Vec<(usize, &Scalar)> = (0..n)
            .filter_map(|k| nz(ginv.get(k, b.output())).map(|v| (k, v)))
            .collect();
        // cartesian product of the per-slot choices
        let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), x.clone())];
        for slot in &choices {
            partial = partial
                .into_iter()
                .flat_map(|(ins, coeff)| {
                    slot.iter().map(move |&(j, v)| {
                        let mut ins = ins.clone();
                        ins.push(j);
                        (ins, &coeff * v)
                    })
                })
                .collect();
        }
        for (inputs, coeff) in partial {
            for &(k, v) in &outputs {
                out.add_term(BasisCoderivation::new(inputs.clone(), k), &coeff * v);
            }
        }
    }
    out
}

fn nz(x: &Scalar) -> Option<&Scalar> {
    (!x.is_zero()).then_some(x)
}

/// The linear map `1 + β` on `V` for `β ∈ C^{0,1}` (arity one).
pub fn exp_beta_matrix(beta: &Cochain) -> Matrix {
    let n = beta.space().dim();
    let mut m = Matrix::identity(n);
    for (b, x) in beta.terms() {
        let (r, c) = (b.output(), b.inputs()[0]);
        let v = m.get(r, c) + x;
        m.set(r, c, v);
    }
    m
}

/// An arity-one cochain as the matrix of the linear map it defines.
pub fn linear_part(c: &Cochain) -> Matrix {
    let n = c.space().dim();
    let mut m = Matrix::zeros(n, n);
    for (b, x) in c.terms() {
        if b.arity() == 1 {
            m.set(b.output(), b.inputs()[0], x.clone());
        }
    }
    m
}

/// The arity-one cochain `Σ m[r][c] φ^c_r`.
pub fn from_linear(space: &std::sync::Arc<super::GradedSpace>, m: &Matrix) -> Cochain {
    let mut out = Cochain::zero(space);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out.add_term(BasisCoderivation::new(vec![c], r), m.get(r, c).clone());
        }
    }
    out
}

/// Diagonal matrix helper, mainly for tests and examples.
pub fn diagonal(entries: &[Scalar]) -> Matrix {
    let mut m = Matrix::zeros(entries.len(), entries.len());
    for (i, x) in entries.iter().enumerate() {
        m.set(i, i, x.clone());
    }
    m
}

/// Permutation matrix sending `e_i` to `e_{perm[i]}`.
pub fn permutation(perm: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(perm.len(), perm.len());
    for (i, &j) in perm.iter().enumerate() {
        m.set(j, i, Scalar::one());
    }
    m
}

/// True when `g` preserves the split.
pub fn is_block_diagonal(g: &Matrix, split: &SplitSpace) -> bool {
    (0..g.rows())
        .all(|r| (0..g.cols()).all(|c| g.get(r, c).is_zero() || split.side(r) == split.side(c)))
}

/// Indices on one side of the split, for building block matrices.
pub fn side_indices(split: &SplitSpace, side: Side) -> Vec<usize> {
    split.indices(side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::bracket::square;
    use crate::coalgebra::GradedSpace;
    use crate::linalg::scalar;
    use std::sync::Arc;

    fn odd2_split() -> (Arc<GradedSpace>, SplitSpace) {
        let v = Arc::new(GradedSpace::with_prefix("f", 0, 2));
        let split = SplitSpace::with_ideal(Arc::clone(&v), &[1]).unwrap();
        (v, split)
    }

    #[test]
    fn pullback_case_two_subcase_two() {
        let (v, split) = odd2_split();
        let d = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1), (&[1, 2], 2, 1), (&[2, 1], 2, 1)]);
        let beta = Cochain::from_one_based(&v, &[(&[1], 2, 1)]);
        let out = pullback_exp_beta(&d, &beta, &split).unwrap();
        let expected = &d + &Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)]);
        assert_eq!(out, expected);
        assert!(square(&out).is_zero());
    }

    #[test]
    fn pullback_matches_conjugation() {
        let (v, split) = odd2_split();
        let d = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1), (&[1, 2], 2, 3), (&[2, 2], 2, -1)]);
        let beta = Cochain::from_one_based(&v, &[(&[1], 2, 5)]);
        let f = exp_beta_matrix(&beta);
        let by_matrix = apply_linear_map(&d, &f, &split).unwrap();
        assert_eq!(pullback_exp_beta(&d, &beta, &split).unwrap(), by_matrix);
    }

    #[test]
    fn pullback_of_delta_only() {
        // the sign here follows the explicit conjugation f⁻¹ d (f ⊗ f)
        let (v, split) = odd2_split();
        let d = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1)]);
        let beta = Cochain::from_one_based(&v, &[(&[1], 2, 1)]).scale(&scalar(3));
        let expected = &d + &Cochain::from_one_based(&v, &[(&[1, 1], 2, -3)]);
        assert_eq!(pullback_exp_beta(&d, &beta, &split).unwrap(), expected);
    }

    #[test]
    fn pullback_rejects_wrong_bidegree() {
        let (v, split) = odd2_split();
        let d = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1)]);
        let beta = Cochain::from_one_based(&v, &[(&[2], 1, 1)]);
        assert!(pullback_exp_beta(&d, &beta, &split).is_err());
        assert!(pullback_exp_beta(&d, &Cochain::zero(&v), &split).unwrap() == d);
    }

    #[test]
    fn diagonal_action_on_psi_112() {
        let (v, split) = odd2_split();
        let tau = Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)]);
        let g = diagonal(&[scalar(3), scalar(5)]);
        // g⁻¹ ∘ τ ∘ (g ⊗ g) = r²/u · τ
        assert_eq!(
            apply_group_element(&tau, &g, &split).unwrap(),
            tau.scale(&ratio(9, 5))
        );
        let ginv = g.inverse().unwrap();
        assert_eq!(
            apply_group_element(&tau, &ginv, &split).unwrap(),
            tau.scale(&ratio(5, 9))
        );
        let g = diagonal(&[scalar(1), scalar(7)]);
        assert_eq!(
            apply_group_element(&tau, &g, &split).unwrap(),
            tau.scale(&ratio(1, 7))
        );
        assert_eq!(
            apply_group_element(&tau, &Matrix::identity(2), &split).unwrap(),
            tau
        );
    }

    #[test]
    fn group_element_checks() {
        let (v, split) = odd2_split();
        let tau = Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)]);
        let swap = permutation(&[1, 0]);
        assert_eq!(
            apply_group_element(&tau, &swap, &split),
            Err(Error::NotBlockDiagonal)
        );
        assert_eq!(
            apply_linear_map(&tau, &swap, &split).unwrap(),
            Cochain::from_one_based(&v, &[(&[2, 2], 1, 1)])
        );
        assert_eq!(
            apply_group_element(&tau, &diagonal(&[scalar(0), scalar(1)]), &split),
            Err(Error::Singular)
        );
        let w = Arc::new(GradedSpace::with_dims(1, 1));
        let split11 = SplitSpace::with_ideal(Arc::clone(&w), &[1]).unwrap();
        let c = Cochain::from_one_based(&w, &[(&[2, 2], 2, 1)]);
        assert_eq!(
            apply_linear_map(&c, &permutation(&[1, 0]), &split11),
            Err(Error::ParityViolating)
        );
    }
}
