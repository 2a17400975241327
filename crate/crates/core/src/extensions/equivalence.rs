//! Deciding when two extensions are the same.
//!
//! Restricted equivalence (`exp(β)` only) is linear once `β` is split into a
//! particular solution of the `λ` equation plus a `D_μ`-cocycle, so it is
//! solved exactly. The general group adds block-diagonal `g`, which is
//! searched over a finite grid of entries; a failed search proves nothing.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::coalgebra::action::transform;
use crate::coalgebra::bracket::br;
use crate::coalgebra::{pullback_exp_beta, Bidegree, Cochain, GradedSpace, Parity, SplitSpace};
use crate::cohomology::{coboundary_matrix, cohomology, CochainSpace, Tower};
use crate::error::{Error, Result};
use crate::linalg::{ratio, scalar, simplicity_key, Matrix, Scalar, Subspace};

use super::structure::ExtensionStructure;

/// Finite set of rationals used for brute-force searches. Always contains 0
/// and 1; kept sorted by simplicity (0, 1, -1, 2, -2, 1/2, ...).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarGrid {
    values: Vec<Scalar>,
}

impl ScalarGrid {
    pub fn new(values: impl IntoIterator<Item = Scalar>) -> Result<Self> {
        let set: BTreeSet<Scalar> = values.into_iter().collect();
        if !set.contains(&Scalar::zero()) || !set.contains(&Scalar::one()) {
            return Err(Error::Precondition(
                "a scalar grid must contain 0 and 1".into(),
            ));
        }
        let mut values: Vec<Scalar> = set.into_iter().collect();
        values.sort_by_key(simplicity_key);
        Ok(ScalarGrid { values })
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        ScalarGrid::new(values.iter().map(|&x| scalar(x)))
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Adds `-x`, `2x` and `x/2` for every `x`; used to check that a result
    /// does not change when the search widens.
    pub fn enlarged(&self) -> ScalarGrid {
        let half = ratio(1, 2);
        let two = scalar(2);
        ScalarGrid::new(
            self.values
                .iter()
                .flat_map(|x| [x.clone(), -x, x * &two, x * &half]),
        )
        .expect("still contains 0 and 1")
    }
}

impl Default for ScalarGrid {
    /// `{-1, 0, 1}`.
    fn default() -> Self {
        ScalarGrid::from_i64(&[-1, 0, 1]).expect("contains 0 and 1")
    }
}

/// Every `Σ c_i b_i` with coefficients from the grid, starting with zero.
pub fn grid_combinations(
    space: &Arc<GradedSpace>,
    basis: &[Cochain],
    grid: &ScalarGrid,
) -> Vec<Cochain> {
    let mut out = vec![Cochain::zero(space)];
    for b in basis {
        out = out
            .iter()
            .flat_map(|acc| grid.values().iter().map(move |x| acc + &b.scale(x)))
            .collect();
    }
    out
}

/// Matrices with entries from the grid on the allowed positions, zero
/// elsewhere, in a fixed order with the identity first.
fn grid_matrices<'a>(
    n: usize,
    positions: &'a [(usize, usize)],
    grid: &'a ScalarGrid,
) -> impl Iterator<Item = Matrix> + 'a {
    let k = positions.len();
    let base = grid.len();
    let total = base.checked_pow(k as u32).unwrap_or(usize::MAX);
    std::iter::once(Matrix::identity(n)).chain((0..total).filter_map(move |mut code| {
        let mut m = Matrix::zeros(n, n);
        for &(r, c) in positions {
            m.set(r, c, grid.values()[code % base].clone());
            code /= base;
        }
        (m != Matrix::identity(n)).then_some(m)
    }))
}

fn even_positions(space: &GradedSpace, split: Option<&SplitSpace>) -> Vec<(usize, usize)> {
    let n = space.dim();
    let mut out = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let same_side = split.is_none_or(|s| s.side(r) == s.side(c));
            if space.parity(r) == space.parity(c) && same_side {
                out.push((r, c));
            }
        }
    }
    out
}

/// Finds `β ∈ C^{0,1}` (even) with `exp(β)*(e1) = e2`. Both must share the
/// split, `δ` and `μ`. Exact: no grid is involved.
pub fn equivalent_restricted(
    e1: &ExtensionStructure,
    e2: &ExtensionStructure,
) -> Result<Option<Cochain>> {
    let split = e1.split();
    if split != e2.split() {
        return Err(Error::Precondition(
            "the extensions live on different splits".into(),
        ));
    }
    if e1.delta() != e2.delta() || e1.mu() != e2.mu() {
        return Err(Error::Precondition(
            "restricted equivalence needs the same delta and mu".into(),
        ));
    }
    let mu = e1.mu();
    let c01 = CochainSpace::piece(split, Some(Bidegree::mixed(0, 1)), Parity::Even, false);
    let c11 = CochainSpace::piece(split, Some(Bidegree::mixed(1, 1)), Parity::Odd, false);
    let c02 = CochainSpace::piece(split, Some(Bidegree::mixed(0, 2)), Parity::Odd, false);

    // λ2 = λ1 + [μ,β]
    let d_mu = coboundary_matrix(mu, &c01, &c11)?;
    let rhs = c11.coordinates(&(e2.lambda() - e1.lambda()))?;
    let Some((b0, kernel)) = d_mu.solve_affine(&rhs)? else {
        return Ok(None);
    };
    let beta0 = c01.cochain(&b0);

    // with β = β0 + h, [μ,h] = 0:
    // ψ2 − ψ1 − [δ+λ1,β0] − ½[[μ,β0],β0] = [δ+λ1,h] + ½[[μ,β0],h]
    let half = ratio(1, 2);
    let dl = e1.dl();
    let mu_beta0 = br(mu, &beta0);
    let target = &(&(e2.psi() - e1.psi()) - &br(&dl, &beta0)) - &br(&mu_beta0, &beta0).scale(&half);
    let hs = c01.cochains(&kernel);
    let cols = hs
        .iter()
        .map(|h| c02.coordinates(&(&br(&dl, h) + &br(&mu_beta0, h).scale(&half))))
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_columns(c02.dim(), &cols)?;
    let Some((coeffs, _)) = m.solve_affine(&c02.coordinates(&target)?)? else {
        return Ok(None);
    };
    let mut beta = beta0;
    for (h, x) in hs.iter().zip(&coeffs) {
        beta = &beta + &h.scale(x);
    }
    let image = pullback_exp_beta(&e1.assemble(), &beta, split)?;
    if image != e2.assemble() {
        return Err(Error::Precondition(format!(
            "restricted solve produced beta = {beta} that does not transport the structure"
        )));
    }
    Ok(Some(beta))
}

/// `h = g·exp(β)` with `g` block diagonal: `h*(d) = exp(β)*(g*(d))`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralWitness {
    pub g: Matrix,
    pub beta: Cochain,
}

impl GeneralWitness {
    pub fn apply(&self, d: &Cochain, split: &SplitSpace) -> Result<Cochain> {
        let moved = crate::coalgebra::apply_group_element(d, &self.g, split)?;
        pullback_exp_beta(&moved, &self.beta, split)
    }

    /// `h⁻¹ = g⁻¹ · exp(−g β g⁻¹)`.
    pub fn inverse(&self) -> Result<GeneralWitness> {
        let ginv = self.g.inverse().ok_or(Error::Singular)?;
        Ok(GeneralWitness {
            beta: -&transform(&self.beta, &ginv, &self.g),
            g: ginv,
        })
    }
}

fn search_general(
    e1: &ExtensionStructure,
    e2: &ExtensionStructure,
    grid: &ScalarGrid,
) -> Result<Option<GeneralWitness>> {
    let split = e1.split();
    let space = split.space();
    let positions = even_positions(space, Some(split));
    for g in grid_matrices(space.dim(), &positions, grid) {
        let Some(ginv) = g.inverse() else { continue };
        if &transform(e1.delta(), &g, &ginv) != e2.delta()
            || &transform(e1.mu(), &g, &ginv) != e2.mu()
        {
            continue;
        }
        let moved = ExtensionStructure::new(
            split,
            e2.delta().clone(),
            e2.mu().clone(),
            transform(e1.lambda(), &g, &ginv),
            transform(e1.psi(), &g, &ginv),
        )?;
        if let Some(beta) = equivalent_restricted(&moved, e2)? {
            return Ok(Some(GeneralWitness { g, beta }));
        }
    }
    Ok(None)
}

/// Looks for `h = g·exp(β)` with `h*(e1) = e2`: `g` block diagonal and even
/// with entries in the grid, `β` solved exactly for each `g`. Searches both
/// directions. `None` means no witness was found, not that none exists.
pub fn equivalent_general(
    e1: &ExtensionStructure,
    e2: &ExtensionStructure,
    grid: &ScalarGrid,
) -> Result<Option<GeneralWitness>> {
    if e1.split() != e2.split() {
        return Err(Error::Precondition(
            "the extensions live on different splits".into(),
        ));
    }
    if let Some(w) = search_general(e1, e2, grid)? {
        return Ok(Some(w));
    }
    match search_general(e2, e1, grid)? {
        Some(w) => {
            let inv = w.inverse()?;
            debug_assert_eq!(inv.apply(&e1.assemble(), e1.split())?, e2.assemble());
            Ok(Some(inv))
        }
        None => Ok(None),
    }
}

/// An even invertible `g` (any block structure) with entries in the grid and
/// `g*(d1) = d2`, trying both directions.
pub fn find_isomorphism(d1: &Cochain, d2: &Cochain, grid: &ScalarGrid) -> Result<Option<Matrix>> {
    d1.same_space(d2)?;
    let space = d1.space();
    let positions = even_positions(space, None);
    for g in grid_matrices(space.dim(), &positions, grid) {
        let Some(ginv) = g.inverse() else { continue };
        if &transform(d1, &g, &ginv) == d2 {
            return Ok(Some(g));
        }
        if &transform(d2, &g, &ginv) == d1 {
            return Ok(Some(ginv));
        }
    }
    Ok(None)
}

/// Numbers that any equivalence preserves. Unequal fingerprints prove two
/// extensions inequivalent; equal ones prove nothing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    /// dim `{x : d(x, ·) = 0}`.
    pub left_annihilator: usize,
    /// dim `{x : d(·, x) = 0}`.
    pub right_annihilator: usize,
    /// dim of the span of all products.
    pub products: usize,
    /// dim `ker D_d` on `C^1`, even then odd.
    pub derivations: [usize; 2],
    /// dim `H^2_d`, even then odd.
    pub second_cohomology: [usize; 2],
    /// dim `H^{0,2}_{μ,δ+λ}`.
    pub tau: usize,
}

impl Fingerprint {
    pub fn of(e: &ExtensionStructure) -> Result<Fingerprint> {
        let d = e.assemble();
        let space = d.space();
        let n = space.dim();
        let product = |i: usize, j: usize| d.evaluate(&[i, j]);
        // rows indexed by (j, k) for the left annihilator, columns by i
        let mut left = Matrix::zeros(n * n, n);
        let mut right = Matrix::zeros(n * n, n);
        let mut all = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = product(i, j)?;
                for (k, x) in v.iter().enumerate() {
                    left.set(j * n + k, i, x.clone());
                    right.set(i * n + k, j, x.clone());
                }
                all.push(v);
            }
        }
        let products = Subspace::span(n, all)?.dim();

        let mut derivations = [0; 2];
        let mut second = [0; 2];
        for p in [Parity::Even, Parity::Odd] {
            let c1 = CochainSpace::full(space, 1, Some(p));
            let c2 = CochainSpace::full(space, 2, Some(p.flip()));
            derivations[p.bit() as usize] = coboundary_matrix(&d, &c1, &c2)?.kernel().dim();
            let prev = CochainSpace::full(space, 1, Some(p.flip()));
            let mid = CochainSpace::full(space, 2, Some(p));
            let next = CochainSpace::full(space, 3, Some(p.flip()));
            second[p.bit() as usize] = cohomology(&d, &prev, &mid, &next)?.dim();
        }
        let tau = Tower::standard(e.split(), e.mu(), &e.dl(), e.psi())
            .iterated(Bidegree::mixed(0, 2), Parity::Odd)?
            .dim();
        Ok(Fingerprint {
            left_annihilator: left.kernel().dim(),
            right_annihilator: right.kernel().dim(),
            products,
            derivations,
            second_cohomology: second,
            tau,
        })
    }
}
