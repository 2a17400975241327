use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::coalgebra::bracket::br;
use crate::coalgebra::space::bracket_bidegree;
use crate::coalgebra::{
    cochain_basis, BasisCoderivation, Bidegree, Cochain, GradedSpace, Parity, SplitSpace,
};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar, Subspace};

/// A finite set of basis coderivations used as matrix coordinates.
#[derive(Clone, Debug)]
pub struct CochainSpace {
    space: Arc<GradedSpace>,
    basis: Vec<BasisCoderivation>,
    index: HashMap<BasisCoderivation, usize>,
}

impl PartialEq for CochainSpace {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.basis == other.basis
    }
}

impl CochainSpace {
    pub fn from_basis(space: &Arc<GradedSpace>, basis: Vec<BasisCoderivation>) -> Self {
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        CochainSpace {
            space: Arc::clone(space),
            basis,
            index,
        }
    }

    pub fn empty(space: &Arc<GradedSpace>) -> Self {
        CochainSpace::from_basis(space, Vec::new())
    }

    /// The direct sum of the listed bidegree pieces, optionally one parity
    /// only. With `restricted`, mixed pieces with no `M` input are dropped
    /// (the complex `C^{k,l}`, `k ≥ 1`, together with the `C^n`).
    pub fn new(
        split: &SplitSpace,
        pieces: &[Bidegree],
        parity: Option<Parity>,
        restricted: bool,
    ) -> Self {
        let wanted: BTreeSet<Bidegree> = pieces
            .iter()
            .copied()
            .filter(|b| !(restricted && b.is_mixed() && b.m_inputs == 0))
            .collect();
        let arities: BTreeSet<usize> = wanted
            .iter()
            .map(Bidegree::arity)
            .filter(|&n| n >= 1)
            .collect();
        let basis = arities
            .into_iter()
            .flat_map(|n| cochain_basis(split.space(), n, parity))
            .filter(|b| wanted.contains(&b.bidegree(split)))
            .collect();
        CochainSpace::from_basis(split.space(), basis)
    }

    /// A single piece; `None` gives the zero space.
    pub fn piece(
        split: &SplitSpace,
        piece: Option<Bidegree>,
        parity: Parity,
        restricted: bool,
    ) -> Self {
        match piece {
            Some(b) => CochainSpace::new(split, &[b], Some(parity), restricted),
            None => CochainSpace::empty(split.space()),
        }
    }

    /// All cochains of one arity, ignoring any split.
    pub fn full(space: &Arc<GradedSpace>, arity: usize, parity: Option<Parity>) -> Self {
        CochainSpace::from_basis(space, cochain_basis(space, arity, parity))
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisCoderivation] {
        &self.basis
    }

    pub fn contains(&self, c: &Cochain) -> bool {
        c.terms().keys().all(|b| self.index.contains_key(b))
    }

    /// Coordinates of `c`; errors if `c` has a term outside the space.
    pub fn coordinates(&self, c: &Cochain) -> Result<Vec<Scalar>> {
        let mut v = crate::linalg::zero_vector(self.dim());
        for (b, x) in c.terms() {
            match self.index.get(b) {
                Some(&i) => v[i] = x.clone(),
                None => return Err(Error::InconsistentPiece(b.to_string())),
            }
        }
        Ok(v)
    }

    pub fn cochain(&self, v: &[Scalar]) -> Cochain {
        assert_eq!(v.len(), self.dim(), "coordinate vector of the wrong length");
        Cochain::from_terms(
            &self.space,
            self.basis.iter().cloned().zip(v.iter().cloned()),
        )
        .expect("basis of this space")
    }

    pub fn basis_cochain(&self, i: usize) -> Cochain {
        Cochain::from_terms(
            &self.space,
            [(self.basis[i].clone(), Scalar::from_integer(1.into()))],
        )
        .expect("basis of this space")
    }

    pub fn cochains(&self, s: &Subspace) -> Vec<Cochain> {
        s.basis_vectors().iter().map(|v| self.cochain(v)).collect()
    }
}

/// The matrix of `φ ↦ [α, φ]` from `dom` to `cod`.
#[derive(Clone, Debug)]
pub struct CoboundaryOperator {
    pub alpha: Cochain,
    pub domain: CochainSpace,
    pub codomain: CochainSpace,
    pub matrix: Matrix,
}

impl CoboundaryOperator {
    pub fn new(alpha: &Cochain, domain: CochainSpace, codomain: CochainSpace) -> Result<Self> {
        let matrix = coboundary_matrix(alpha, &domain, &codomain)?;
        Ok(CoboundaryOperator {
            alpha: alpha.clone(),
            domain,
            codomain,
            matrix,
        })
    }

    pub fn kernel(&self) -> Subspace {
        self.matrix.kernel()
    }

    pub fn image(&self) -> Subspace {
        self.matrix.image()
    }
}

/// Entry `(r, c)` is the coefficient of `cod.basis[r]` in `[α, dom.basis[c]]`.
/// Errors when some bracket leaves `cod`.
pub fn coboundary_matrix(
    alpha: &Cochain,
    dom: &CochainSpace,
    cod: &CochainSpace,
) -> Result<Matrix> {
    let columns = (0..dom.dim())
        .map(|c| cod.coordinates(&br(alpha, &dom.basis_cochain(c))))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(cod.dim(), &columns)
}

/// Bidegrees reached by bracketing `alpha` with the given pieces.
pub fn image_pieces(alpha: &Cochain, split: &SplitSpace, pieces: &[Bidegree]) -> Vec<Bidegree> {
    let alpha_pieces: BTreeSet<Bidegree> =
        alpha.terms().keys().map(|b| b.bidegree(split)).collect();
    let mut out = BTreeSet::new();
    for a in &alpha_pieces {
        for p in pieces {
            if let Some(b) = bracket_bidegree(*a, *p) {
                out.insert(b);
            }
        }
    }
    out.into_iter().collect()
}

/// A cohomology space `ker / im` at one spot of a complex.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub ambient: CochainSpace,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    /// Canonical representatives of a basis of the quotient.
    pub classes: Vec<Vec<Scalar>>,
}

impl CohomologySpace {
    pub(crate) fn build(
        ambient: CochainSpace,
        cocycles: Subspace,
        coboundaries: Subspace,
    ) -> Result<Self> {
        if !coboundaries.is_subspace_of(&cocycles)? {
            return Err(Error::Precondition(
                "coboundaries are not cocycles (the operator does not square to zero)".into(),
            ));
        }
        let classes = cocycles.quotient_basis(&coboundaries)?;
        Ok(CohomologySpace {
            ambient,
            cocycles,
            coboundaries,
            classes,
        })
    }

    pub fn dim(&self) -> usize {
        self.classes.len()
    }

    pub fn is_cocycle(&self, c: &Cochain) -> Result<bool> {
        self.cocycles.contains(&self.ambient.coordinates(c)?)
    }

    /// Canonical representative of the class of a cocycle.
    pub fn class_of(&self, c: &Cochain) -> Result<Cochain> {
        let v = self.ambient.coordinates(c)?;
        if !self.cocycles.contains(&v)? {
            return Err(Error::Precondition(format!("{c} is not a cocycle")));
        }
        Ok(self.ambient.cochain(&self.coboundaries.reduce(&v)?))
    }

    pub fn representatives(&self) -> Vec<Cochain> {
        self.classes
            .iter()
            .map(|v| self.ambient.cochain(v))
            .collect()
    }
}

fn require_codifferential(alpha: &Cochain) -> Result<()> {
    let sq = br(alpha, alpha);
    if sq.is_zero() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "[alpha,alpha] = {sq} is not zero"
        )))
    }
}

/// `H_α` at `mid` for the complex `prev → mid → next`.
pub fn cohomology(
    alpha: &Cochain,
    prev: &CochainSpace,
    mid: &CochainSpace,
    next: &CochainSpace,
) -> Result<CohomologySpace> {
    require_codifferential(alpha)?;
    let incoming = coboundary_matrix(alpha, prev, mid)?;
    let outgoing = coboundary_matrix(alpha, mid, next)?;
    CohomologySpace::build(mid.clone(), outgoing.kernel(), incoming.image())
}

/// Pieces of the previous spot: everything `alpha` sends into `piece`.
fn preceding_pieces(alpha: &Cochain, split: &SplitSpace, piece: Bidegree) -> Vec<Bidegree> {
    let shrink = alpha.arities().into_iter().max().unwrap_or(1) - 1;
    let Some(n) = piece.arity().checked_sub(shrink) else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let mut candidates: Vec<Bidegree> = (0..=n).map(|k| Bidegree::mixed(k, n - k)).collect();
    candidates.push(Bidegree::base(n));
    candidates
        .into_iter()
        .filter(|c| image_pieces(alpha, split, &[*c]).contains(&piece))
        .collect()
}

/// `H_α` at one bidegree piece, with neighbours chosen by the grading rules.
pub fn cohomology_at(
    alpha: &Cochain,
    split: &SplitSpace,
    piece: Bidegree,
    parity: Parity,
    restricted: bool,
) -> Result<CohomologySpace> {
    let flip = alpha.parity().unwrap_or(Parity::Odd);
    let mid = CochainSpace::new(split, &[piece], Some(parity), restricted);
    let prev = CochainSpace::new(
        split,
        &preceding_pieces(alpha, split, piece),
        Some(parity + flip),
        restricted,
    );
    let next = CochainSpace::new(
        split,
        &image_pieces(alpha, split, &[piece]),
        Some(parity + flip),
        restricted,
    );
    cohomology(alpha, &prev, &mid, &next)
}

/// `H_μ(ker D_c)`: cohomology of `D_μ` on the subcomplex `ker D_c`, at one
/// bidegree piece. Needs `[μ, c] = 0`, so that `D_μ` preserves `ker D_c`.
pub fn restricted_cohomology(
    mu: &Cochain,
    constraint: &Cochain,
    split: &SplitSpace,
    piece: Bidegree,
    parity: Parity,
    restricted: bool,
) -> Result<CohomologySpace> {
    let compat = br(mu, constraint);
    if !compat.is_zero() {
        return Err(Error::Precondition(format!(
            "[mu, constraint] = {compat} is not zero"
        )));
    }
    require_codifferential(mu)?;
    let constrained_kernel = |space: &CochainSpace| -> Result<Subspace> {
        let cod = CochainSpace::new(
            split,
            &image_pieces(constraint, split, &pieces_of(space, split)),
            None,
            restricted,
        );
        Ok(coboundary_matrix(constraint, space, &cod)?.kernel())
    };
    let mid = CochainSpace::new(split, &[piece], Some(parity), restricted);
    let prev = CochainSpace::new(
        split,
        &preceding_pieces(mu, split, piece),
        Some(parity.flip()),
        restricted,
    );
    let next = CochainSpace::new(
        split,
        &image_pieces(mu, split, &[piece]),
        Some(parity.flip()),
        restricted,
    );
    let cocycles = coboundary_matrix(mu, &mid, &next)?
        .kernel()
        .intersection(&constrained_kernel(&mid)?)?;
    let sources = constrained_kernel(&prev)?;
    let coboundaries = sources.image_under(&coboundary_matrix(mu, &prev, &mid)?)?;
    CohomologySpace::build(mid, cocycles, coboundaries)
}

fn pieces_of(space: &CochainSpace, split: &SplitSpace) -> Vec<Bidegree> {
    let set: BTreeSet<Bidegree> = space.basis().iter().map(|b| b.bidegree(split)).collect();
    set.into_iter().collect()
}
