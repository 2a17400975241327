//! Iterated and triple cohomology.
//!
//! A tower is three odd operators on the mixed pieces `C^{k,l}`: an inner one
//! whose cohomology is taken first, an outer one acting on that cohomology,
//! and a third one corrected by a lift. With inner `μ`, outer `δ+λ` and third
//! `ψ` this gives `H_{μ,δ+λ}` and `H_{μ,δ+λ,ψ}`; swapping `μ` and `ψ` gives the
//! mirror groups `H_{ψ,δ+λ}` and `H_{ψ,δ+λ,μ}`.

use crate::coalgebra::bracket::br;
use crate::coalgebra::{Bidegree, Cochain, Parity, SplitSpace};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar, Subspace};

use super::complex::{coboundary_matrix, CochainSpace, CohomologySpace};

/// An odd cochain together with the bidegree shift of `ad` of it on mixed
/// pieces. The shift is fixed by the role, not read off the terms, so a zero
/// operator still has a well-defined place in the tower.
#[derive(Clone, Debug)]
pub struct Operator {
    pub cochain: Cochain,
    pub shift: (isize, isize),
}

impl Operator {
    /// `μ ∈ C^{2,0}`: `C^{k,l} → C^{k+1,l}`.
    pub fn mu(c: &Cochain) -> Self {
        Operator {
            cochain: c.clone(),
            shift: (1, 0),
        }
    }

    /// `δ+λ`: `C^{k,l} → C^{k,l+1}`.
    pub fn delta_lambda(c: &Cochain) -> Self {
        Operator {
            cochain: c.clone(),
            shift: (0, 1),
        }
    }

    /// `ψ ∈ C^{0,2}`: `C^{k,l} → C^{k-1,l+2}`.
    pub fn psi(c: &Cochain) -> Self {
        Operator {
            cochain: c.clone(),
            shift: (-1, 2),
        }
    }

    fn target(&self, s: Option<Bidegree>) -> Option<Bidegree> {
        s?.shifted(self.shift.0, self.shift.1)
    }

    fn source(&self, s: Option<Bidegree>) -> Option<Bidegree> {
        s?.shifted(-self.shift.0, -self.shift.1)
    }
}

/// Iterated cohomology at one piece: classes of inner-cocycles `φ` with
/// `[outer, φ]` an inner-coboundary, modulo inner-coboundaries and
/// `[outer, β]` for inner-cocycles `β`.
pub type IteratedCohomology = CohomologySpace;

/// Triple cohomology at one piece, with coordinates in the ambient piece.
pub type TripleCohomology = CohomologySpace;

#[derive(Clone, Debug)]
pub struct Tower<'a> {
    split: &'a SplitSpace,
    inner: Operator,
    outer: Operator,
    third: Operator,
    restricted: bool,
}

/// A lift: `β` with `[inner, β] = [outer, φ]`, plus the space of all
/// differences between lifts.
#[derive(Clone, Debug)]
pub struct Lift {
    pub beta: Cochain,
    pub freedom: Vec<Cochain>,
}

impl<'a> Tower<'a> {
    pub fn new(split: &'a SplitSpace, inner: Operator, outer: Operator, third: Operator) -> Self {
        Tower {
            split,
            inner,
            outer,
            third,
            restricted: false,
        }
    }

    /// The tower behind `H_{μ,δ+λ,ψ}`.
    pub fn standard(split: &'a SplitSpace, mu: &Cochain, dl: &Cochain, psi: &Cochain) -> Self {
        Tower::new(
            split,
            Operator::mu(mu),
            Operator::delta_lambda(dl),
            Operator::psi(psi),
        )
    }

    /// The tower behind `H_{ψ,δ+λ,μ}`.
    pub fn mirror(split: &'a SplitSpace, mu: &Cochain, dl: &Cochain, psi: &Cochain) -> Self {
        Tower::new(
            split,
            Operator::psi(psi),
            Operator::delta_lambda(dl),
            Operator::mu(mu),
        )
    }

    /// Drop mixed pieces with no `M` input.
    pub fn restricted(mut self, on: bool) -> Self {
        self.restricted = on;
        self
    }

    pub fn split(&self) -> &SplitSpace {
        self.split
    }

    pub fn piece(&self, s: Option<Bidegree>, p: Parity) -> CochainSpace {
        CochainSpace::piece(self.split, s, p, self.restricted)
    }

    /// Matrix of `op` from the piece `(s, p)` to `(s + shift, p + 1)`.
    fn d(&self, op: &Operator, s: Option<Bidegree>, p: Parity) -> Result<Matrix> {
        let dom = self.piece(s, p);
        let cod = self.piece(op.target(s), p.flip());
        coboundary_matrix(&op.cochain, &dom, &cod)
    }

    fn inner_cocycles(&self, s: Option<Bidegree>, p: Parity) -> Result<Subspace> {
        Ok(self.d(&self.inner, s, p)?.kernel())
    }

    /// Image of the inner operator inside the piece `(t, p)`.
    fn inner_image_into(&self, t: Option<Bidegree>, p: Parity) -> Result<Subspace> {
        let dom = self.piece(self.inner.source(t), p.flip());
        let cod = self.piece(t, p);
        Ok(coboundary_matrix(&self.inner.cochain, &dom, &cod)?.image())
    }

    /// Cocycles of the induced outer operator at `(s, p)`.
    pub fn iterated_cocycles(&self, s: Bidegree, p: Parity) -> Result<Subspace> {
        let s = Some(s);
        let z_inner = self.inner_cocycles(s, p)?;
        let t = self.outer.target(s);
        let target = self.inner_image_into(t, p.flip())?;
        let outer = self.d(&self.outer, s, p)?;
        z_inner.intersection(&Subspace::preimage(&outer, &target)?)
    }

    /// Coboundaries of the induced outer operator at `(s, p)`.
    pub fn iterated_coboundaries(&self, s: Bidegree, p: Parity) -> Result<Subspace> {
        let s = Some(s);
        let from_inner = self.inner_image_into(s, p)?;
        let prev = self.outer.source(s);
        let sources = self.inner_cocycles(prev, p.flip())?;
        let outer = coboundary_matrix(
            &self.outer.cochain,
            &self.piece(prev, p.flip()),
            &self.piece(s, p),
        )?;
        let from_outer = sources.image_under(&outer)?;
        from_inner.sum(&from_outer)
    }

    pub fn iterated(&self, s: Bidegree, p: Parity) -> Result<IteratedCohomology> {
        CohomologySpace::build(
            self.piece(Some(s), p),
            self.iterated_cocycles(s, p)?,
            self.iterated_coboundaries(s, p)?,
        )
    }

    /// All `β` with `[inner, β] = [outer, φ]` for `φ` at `(s, p)`; `None` if
    /// there is none (then `φ` does not define an iterated class).
    pub fn lift(&self, phi: &Cochain, s: Bidegree, p: Parity) -> Result<Option<Lift>> {
        let t = self.outer.target(Some(s));
        let src = self.inner.source(t);
        let src_space = self.piece(src, p);
        let rhs_space = self.piece(t, p.flip());
        let rhs = rhs_space.coordinates(&br(&self.outer.cochain, phi))?;
        let m = coboundary_matrix(&self.inner.cochain, &src_space, &rhs_space)?;
        Ok(m.solve_affine(&rhs)?.map(|(particular, kernel)| Lift {
            beta: src_space.cochain(&particular),
            freedom: src_space.cochains(&kernel),
        }))
    }

    /// `[third, φ] − [outer, β]` for a chosen lift `β`.
    pub fn triple_map_with(&self, phi: &Cochain, beta: &Cochain) -> Cochain {
        &br(&self.third.cochain, phi) - &br(&self.outer.cochain, beta)
    }

    /// The induced third operator with the particular lift.
    pub fn triple_map(&self, phi: &Cochain, s: Bidegree, p: Parity) -> Result<Cochain> {
        let lift = self.lift(phi, s, p)?.ok_or_else(|| {
            Error::Precondition(format!(
                "{phi} has no lift: [outer, phi] is not an inner coboundary"
            ))
        })?;
        Ok(self.triple_map_with(phi, &lift.beta))
    }

    fn third_shift(&self) -> (isize, isize) {
        (
            2 * self.outer.shift.0 - self.inner.shift.0,
            2 * self.outer.shift.1 - self.inner.shift.1,
        )
    }

    fn third_target(&self, s: Bidegree) -> Option<Bidegree> {
        let (a, b) = self.third_shift();
        s.shifted(a, b)
    }

    fn third_source(&self, s: Bidegree) -> Option<Bidegree> {
        let (a, b) = self.third_shift();
        s.shifted(-a, -b)
    }

    /// Matrix of the triple map on a basis of the iterated cocycles, into the
    /// ambient target piece. Returns the basis used as well.
    fn triple_on_cocycles(
        &self,
        s: Bidegree,
        p: Parity,
    ) -> Result<(Vec<Cochain>, CochainSpace, Matrix)> {
        let z = self.iterated_cocycles(s, p)?;
        let ambient = self.piece(Some(s), p);
        let basis = ambient.cochains(&z);
        let target = self.piece(self.third_target(s), p.flip());
        let cols = basis
            .iter()
            .map(|phi| target.coordinates(&self.triple_map(phi, s, p)?))
            .collect::<Result<Vec<_>>>()?;
        let m = Matrix::from_columns(target.dim(), &cols)?;
        Ok((basis, target, m))
    }

    /// `H_{inner,outer,third}` at `(s, p)`.
    pub fn triple(&self, s: Bidegree, p: Parity) -> Result<TripleCohomology> {
        let ambient = self.piece(Some(s), p);
        let b_here = self.iterated_coboundaries(s, p)?;

        let (basis, _, m) = self.triple_on_cocycles(s, p)?;
        let b_next = match self.third_target(s) {
            Some(t) => self.iterated_coboundaries(t, p.flip())?,
            None => Subspace::zero(m.rows()),
        };
        let coeffs = Subspace::preimage(&m, &b_next)?;
        let cocycle_vectors = coeffs
            .basis_vectors()
            .iter()
            .map(|c| combine(&ambient, &basis, c))
            .collect::<Result<Vec<_>>>()?;
        let cocycles = Subspace::span(ambient.dim(), cocycle_vectors)?.sum(&b_here)?;

        let images = match self.third_source(s) {
            Some(src) => {
                let (_, target, m) = self.triple_on_cocycles(src, p.flip())?;
                debug_assert_eq!(target, ambient);
                m.image()
            }
            None => Subspace::zero(ambient.dim()),
        };
        let coboundaries = images.sum(&b_here)?;
        CohomologySpace::build(ambient, cocycles, coboundaries)
    }
}

fn combine(ambient: &CochainSpace, basis: &[Cochain], coeffs: &[Scalar]) -> Result<Vec<Scalar>> {
    let mut total = Cochain::zero(ambient.space());
    for (c, x) in basis.iter().zip(coeffs) {
        total = &total + &c.scale(x);
    }
    ambient.coordinates(&total)
}

/// A class in an iterated (or triple) cohomology group, stored as a
/// representative and the subspace it is taken modulo.
#[derive(Clone, Debug)]
pub struct IteratedClass {
    pub rep: Cochain,
    pub ambient: CochainSpace,
    pub modulus: Subspace,
}

impl IteratedClass {
    pub fn new(group: &CohomologySpace, rep: &Cochain) -> Result<Self> {
        if !group.is_cocycle(rep)? {
            return Err(Error::Precondition(format!(
                "{rep} does not define a class"
            )));
        }
        Ok(IteratedClass {
            rep: rep.clone(),
            ambient: group.ambient.clone(),
            modulus: group.coboundaries.clone(),
        })
    }

    /// Canonical representative: the remainder after reduction.
    pub fn canonical(&self) -> Cochain {
        let v = self
            .ambient
            .coordinates(&self.rep)
            .expect("rep lies in the ambient piece");
        self.ambient
            .cochain(&self.modulus.reduce(&v).expect("dimensions agree"))
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().is_zero()
    }
}

impl PartialEq for IteratedClass {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.modulus == other.modulus
            && self.canonical() == other.canonical()
    }
}

/// A class in a triple cohomology group.
pub type TripleClass = IteratedClass;

/// `H^{s}_{μ,δ+λ}` at the given piece and parity.
pub fn iterated_cohomology(
    mu: &Cochain,
    dl: &Cochain,
    split: &SplitSpace,
    piece: Bidegree,
    parity: Parity,
) -> Result<IteratedCohomology> {
    check_pair(mu, dl, split)?;
    Tower::standard(split, mu, dl, &Cochain::zero(mu.space())).iterated(piece, parity)
}

/// `[μ,μ] = 0`, `[μ, δ+λ] = 0`, and `½[δ+λ,δ+λ]` a `D_μ`-coboundary.
fn check_pair(mu: &Cochain, dl: &Cochain, split: &SplitSpace) -> Result<()> {
    let mm = br(mu, mu);
    if !mm.is_zero() {
        return Err(Error::Precondition(format!("[mu,mu] = {mm}")));
    }
    let md = br(mu, dl);
    if !md.is_zero() {
        return Err(Error::Precondition(format!("[mu, delta+lambda] = {md}")));
    }
    let half = br(dl, dl).scale(&crate::linalg::ratio(1, 2));
    let target = CochainSpace::piece(split, Some(Bidegree::mixed(1, 2)), Parity::Even, false);
    let source = CochainSpace::piece(split, Some(Bidegree::mixed(0, 2)), Parity::Odd, false);
    let ok = match target.coordinates(&half) {
        Ok(v) => coboundary_matrix(mu, &source, &target)?
            .image()
            .contains(&v)?,
        Err(_) => false,
    };
    if !ok {
        return Err(Error::Precondition(format!(
            "induced Maurer-Cartan equation fails: 1/2[delta+lambda,delta+lambda] = {half} is not a D_mu-coboundary"
        )));
    }
    Ok(())
}

/// `D_ψ([φ̄]) = [overline{[ψ,φ] − [δ+λ,β]}]` with `[δ+λ,φ] = [μ,β]`.
pub fn triple_d_psi(
    class: &IteratedClass,
    psi: &Cochain,
    mu: &Cochain,
    dl: &Cochain,
    split: &SplitSpace,
) -> Result<IteratedClass> {
    apply_triple(&Tower::standard(split, mu, dl, psi), class)
}

/// Mirror of [`triple_d_psi`]: `D_μ` on `H_{ψ,δ+λ}`, lifting along `ψ`.
pub fn triple_d_mu(
    class: &IteratedClass,
    psi: &Cochain,
    mu: &Cochain,
    dl: &Cochain,
    split: &SplitSpace,
) -> Result<IteratedClass> {
    apply_triple(&Tower::mirror(split, mu, dl, psi), class)
}

fn apply_triple(tower: &Tower<'_>, class: &IteratedClass) -> Result<IteratedClass> {
    let (s, p) = locate(&class.rep, tower.split())?;
    let image = tower.triple_map(&class.rep, s, p)?;
    let Some(target) = tower.third_target(s) else {
        // no piece to land in: the map is zero
        return Ok(IteratedClass {
            rep: Cochain::zero(class.rep.space()),
            ambient: CochainSpace::empty(class.rep.space()),
            modulus: Subspace::zero(0),
        });
    };
    let group = tower.iterated(target, p.flip())?;
    if !group.is_cocycle(&image)? {
        return Err(Error::Precondition(format!(
            "image {image} is not an iterated cocycle; the structure is not an extension"
        )));
    }
    IteratedClass::new(&group, &image)
}

/// `H_{μ,δ+λ,ψ}` at one piece.
pub fn triple_cohomology(
    mu: &Cochain,
    dl: &Cochain,
    psi: &Cochain,
    split: &SplitSpace,
    piece: Bidegree,
    parity: Parity,
) -> Result<TripleCohomology> {
    Tower::standard(split, mu, dl, psi).triple(piece, parity)
}

/// Bidegree and parity of a homogeneous representative.
fn locate(c: &Cochain, split: &SplitSpace) -> Result<(Bidegree, Parity)> {
    let parity = c.parity().ok_or(Error::Inhomogeneous)?;
    let mut pieces = c.terms().keys().map(|b| b.bidegree(split));
    let first = pieces.next().ok_or(Error::Inhomogeneous)?;
    if pieces.any(|b| b != first) || !first.is_mixed() {
        return Err(Error::Inhomogeneous);
    }
    Ok((first, parity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::GradedSpace;
    use std::sync::Arc;

    fn odd2() -> (Arc<GradedSpace>, SplitSpace) {
        let v = Arc::new(GradedSpace::with_prefix("f", 0, 2));
        let split = SplitSpace::with_ideal(Arc::clone(&v), &[1]).unwrap();
        (v, split)
    }

    #[test]
    fn case_one_tau_space() {
        let (v, split) = odd2();
        let zero = Cochain::zero(&v);
        let h =
            iterated_cohomology(&zero, &zero, &split, Bidegree::mixed(0, 2), Parity::Odd).unwrap();
        assert_eq!(
            h.representatives(),
            vec![Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)])]
        );
    }

    #[test]
    fn case_two_subcase_two_tau_space_is_zero() {
        let (v, split) = odd2();
        let zero = Cochain::zero(&v);
        let dl = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1), (&[1, 2], 2, 1), (&[2, 1], 2, 1)]);
        let h =
            iterated_cohomology(&zero, &dl, &split, Bidegree::mixed(0, 2), Parity::Odd).unwrap();
        assert_eq!(h.dim(), 0);
        assert_eq!(h.cocycles.dim(), 1);
    }

    #[test]
    fn iterated_with_zero_inner_is_plain_cohomology() {
        let (v, split) = odd2();
        let zero = Cochain::zero(&v);
        let delta = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1)]);
        for piece in [
            Bidegree::mixed(0, 2),
            Bidegree::mixed(1, 1),
            Bidegree::mixed(0, 1),
        ] {
            for p in [Parity::Odd, Parity::Even] {
                let it = iterated_cohomology(&zero, &delta, &split, piece, p).unwrap();
                let plain =
                    super::super::complex::cohomology_at(&delta, &split, piece, p, false).unwrap();
                assert_eq!(it.cocycles, plain.cocycles);
                assert_eq!(it.coboundaries, plain.coboundaries);
            }
        }
    }

    #[test]
    fn triple_d_psi_with_zero_psi_on_case_two_subcase_one() {
        let (v, split) = odd2();
        let zero = Cochain::zero(&v);
        let delta = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1)]);
        let h =
            iterated_cohomology(&zero, &delta, &split, Bidegree::mixed(0, 2), Parity::Odd).unwrap();
        let tau = Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)]);
        let class = IteratedClass::new(&h, &tau).unwrap();
        let image = triple_d_psi(&class, &zero, &zero, &delta, &split).unwrap();
        assert!(image.is_zero());
    }

    #[test]
    fn empty_piece_gives_no_classes() {
        let v = Arc::new(GradedSpace::with_dims(1, 1));
        let split = SplitSpace::with_ideal(Arc::clone(&v), &[1]).unwrap();
        let zero = Cochain::zero(&v);
        // C^{0,2} for W even and M odd has only odd elements
        let h = triple_cohomology(
            &zero,
            &zero,
            &zero,
            &split,
            Bidegree::mixed(0, 2),
            Parity::Even,
        )
        .unwrap();
        assert_eq!(h.ambient.dim(), 0);
        assert_eq!(h.dim(), 0);
    }
}
