//! `d_t = d + t(η + ζ)` with `η ∈ C^{1,1}` and `ζ ∈ C^{0,2}`.

use std::fmt;

use crate::coalgebra::bracket::br;
use crate::coalgebra::cochain::require_bidegree;
use crate::coalgebra::{Bidegree, Cochain, Parity, SplitSpace};
use crate::cohomology::{
    coboundary_matrix, CochainSpace, IteratedClass, Tower, TripleClass, TripleCohomology,
};
use crate::error::{Error, Result};
use crate::extensions::{ExtensionStructure, Relation};
use crate::linalg::{scalar, Matrix, Subspace};

use super::first_order::FirstOrder;
use super::solve_stacked;

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationDirection {
    pub eta: Cochain,
    pub zeta: Cochain,
}

impl DeformationDirection {
    pub fn new(split: &SplitSpace, eta: Cochain, zeta: Cochain) -> Result<Self> {
        for (c, b) in [
            (&eta, Bidegree::mixed(1, 1)),
            (&zeta, Bidegree::mixed(0, 2)),
        ] {
            c.same_space(&Cochain::zero(split.space()))?;
            require_bidegree(c, split, b)?;
            if !c.has_parity(Parity::Odd) {
                return Err(Error::WrongParity { expected: "odd" });
            }
        }
        Ok(DeformationDirection { eta, zeta })
    }

    pub fn zero(split: &SplitSpace) -> Self {
        let z = Cochain::zero(split.space());
        DeformationDirection {
            eta: z.clone(),
            zeta: z,
        }
    }

    pub fn sum(&self) -> Cochain {
        &self.eta + &self.zeta
    }
}

impl fmt::Display for DeformationDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "eta = {}, zeta = {}", self.eta, self.zeta)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationReport {
    /// The four conditions; the last one always vanishes.
    pub conditions: Vec<Relation>,
    /// The `t`-coefficient of `[d_t, d_t]`.
    pub first_order: Cochain,
    /// `[d_t,d_t] = 2t·(sum of the residuals)` and the fourth condition is zero.
    pub consistent: bool,
    pub extension_valid: bool,
}

impl DeformationReport {
    pub fn passed(&self) -> bool {
        self.extension_valid && self.conditions.iter().all(Relation::passed)
    }
}

pub fn check_deformation(e: &ExtensionStructure, dir: &DeformationDirection) -> DeformationReport {
    let (mu, psi, dl) = (e.mu(), e.psi(), e.dl());
    let (eta, zeta) = (&dir.eta, &dir.zeta);
    let conditions = vec![
        Relation {
            name: "[delta+lambda,eta] + [mu,zeta]",
            residual: &br(&dl, eta) + &br(mu, zeta),
        },
        Relation {
            name: "[delta+lambda,zeta] + [psi,eta]",
            residual: &br(&dl, zeta) + &br(psi, eta),
        },
        Relation {
            name: "[mu,eta]",
            residual: br(mu, eta),
        },
        Relation {
            name: "[psi,zeta]",
            residual: br(psi, zeta),
        },
    ];
    let dt = FirstOrder::new(e.assemble(), dir.sum());
    let first_order = dt.square().linear;
    let total = conditions
        .iter()
        .fold(Cochain::zero(e.split().space()), |acc, r| {
            &acc + &r.residual
        });
    let consistent = first_order == total.scale(&scalar(2)) && conditions[3].passed();
    DeformationReport {
        conditions,
        first_order,
        consistent,
        extension_valid: e.is_valid(),
    }
}

fn require_valid(e: &ExtensionStructure) -> Result<()> {
    if e.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidExtension(format!("{e} is not an extension")))
    }
}

/// Some `ζ` completing `η` to a deformation, or `None`.
pub fn solve_zeta(e: &ExtensionStructure, eta: &Cochain) -> Result<Option<Cochain>> {
    require_valid(e)?;
    if !br(e.mu(), eta).is_zero() {
        return Ok(None);
    }
    let piece = CochainSpace::piece(e.split(), Some(Bidegree::mixed(0, 2)), Parity::Odd, false);
    let dl = e.dl();
    let equations = [(e.mu(), -&br(&dl, eta)), (&dl, -&br(e.psi(), eta))];
    Ok(solve_stacked(&piece, &equations)?.map(|(zeta, _)| zeta))
}

/// Where the test for `{[η̄]}` stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// `[μ,η] ≠ 0`, so `η̄` is undefined.
    MuCocycle,
    /// `[δ+λ,η]` is not a `D_μ`-coboundary, so `[η̄]` is undefined.
    IteratedCocycle,
    /// `D_ψ([η̄]) ≠ 0`.
    TripleCocycle,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::MuCocycle => "D_mu-cocycle",
            Stage::IteratedCocycle => "iterated cocycle",
            Stage::TripleCocycle => "triple cocycle",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Admissibility {
    Admissible { class: TripleClass, zeta: Cochain },
    Rejected { stage: Stage, reason: String },
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible { .. })
    }
}

/// Whether `η` extends to a deformation, decided by the triple class
/// `{[η̄]} ∈ H^{1,1}_{μ,δ+λ,ψ}`. An admissible `η` comes with a `ζ`.
pub fn eta_admissible(e: &ExtensionStructure, eta: &Cochain) -> Result<Admissibility> {
    require_valid(e)?;
    require_bidegree(eta, e.split(), Bidegree::mixed(1, 1))?;
    let s = Bidegree::mixed(1, 1);
    let mu_eta = br(e.mu(), eta);
    if !mu_eta.is_zero() {
        return Ok(Admissibility::Rejected {
            stage: Stage::MuCocycle,
            reason: format!("[mu,eta] = {mu_eta}"),
        });
    }
    let dl = e.dl();
    let tower = Tower::standard(e.split(), e.mu(), &dl, e.psi());
    if tower.lift(eta, s, Parity::Odd)?.is_none() {
        return Ok(Admissibility::Rejected {
            stage: Stage::IteratedCocycle,
            reason: format!(
                "[delta+lambda,eta] = {} is not in the image of D_mu",
                br(&dl, eta)
            ),
        });
    }
    let group = tower.triple(s, Parity::Odd)?;
    if !group.is_cocycle(eta)? {
        return Ok(Admissibility::Rejected {
            stage: Stage::TripleCocycle,
            reason: format!(
                "D_psi of the class is {}",
                tower.triple_map(eta, s, Parity::Odd)?
            ),
        });
    }
    let zeta = solve_zeta(e, eta)?
        .ok_or_else(|| Error::Precondition(format!("{eta} has a triple class but no zeta")))?;
    Ok(Admissibility::Admissible {
        class: IteratedClass::new(&group, eta)?,
        zeta,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationClass {
    pub eta: Cochain,
    pub zeta: Cochain,
}

/// The classification of first-order deformations of one extension.
#[derive(Clone, Debug)]
pub struct InfinitesimalDeformations {
    /// `H^{1,1}_{μ,δ+λ,ψ}`.
    pub eta_group: TripleCohomology,
    /// `H^{0,2}_{μ,δ+λ,ψ}`.
    pub tau_group: TripleCohomology,
    /// One deformation per basis class of `eta_group`.
    pub eta_classes: Vec<DeformationClass>,
    /// Representatives of a basis of `tau_group`.
    pub tau_classes: Vec<Cochain>,
    /// `C^{1,1} ⊕ C^{0,2}`, odd part.
    pub directions: CochainSpace,
    /// Directions satisfying all four conditions.
    pub valid: Subspace,
    /// `[d,γ]` for `γ ∈ C^{0,1} ⊕ C^{1,0}` even that move only `η` and `ζ`.
    pub trivial: Subspace,
    split: SplitSpace,
}

impl InfinitesimalDeformations {
    pub fn is_valid(&self, dir: &DeformationDirection) -> Result<bool> {
        self.valid
            .contains(&self.directions.coordinates(&dir.sum())?)
    }

    /// Representative of the equivalence class of a direction: the remainder
    /// modulo trivial deformations.
    pub fn canonicalize(&self, dir: &DeformationDirection) -> Result<DeformationDirection> {
        let reduced = self
            .trivial
            .reduce(&self.directions.coordinates(&dir.sum())?)?;
        let c = self.directions.cochain(&reduced);
        let split = &self.split;
        let eta = c.filter(|b| b.bidegree(split) == Bidegree::mixed(1, 1));
        let zeta = c.filter(|b| b.bidegree(split) == Bidegree::mixed(0, 2));
        DeformationDirection::new(split, eta, zeta)
    }

    /// Dimension of the space of classes; equals the sum of the two group
    /// dimensions.
    pub fn dim(&self) -> usize {
        self.valid.dim() - self.trivial.dim()
    }
}

pub fn classify_infinitesimal_deformations(
    e: &ExtensionStructure,
) -> Result<InfinitesimalDeformations> {
    require_valid(e)?;
    let split = e.split();
    let dl = e.dl();
    let tower = Tower::standard(split, e.mu(), &dl, e.psi());
    let eta_group = tower.triple(Bidegree::mixed(1, 1), Parity::Odd)?;
    let tau_group = tower.triple(Bidegree::mixed(0, 2), Parity::Odd)?;

    let mut eta_classes = Vec::new();
    for eta in eta_group.representatives() {
        let zeta = solve_zeta(e, &eta)?
            .ok_or_else(|| Error::Precondition(format!("{eta} has a triple class but no zeta")))?;
        let dir = DeformationDirection::new(split, eta.clone(), zeta.clone())?;
        if !check_deformation(e, &dir).passed() {
            return Err(Error::Precondition(format!(
                "emitted direction {dir} fails"
            )));
        }
        eta_classes.push(DeformationClass { eta, zeta });
    }
    let tau_classes = tau_group.representatives();

    let d = e.assemble();
    let pieces = [Bidegree::mixed(1, 1), Bidegree::mixed(0, 2)];
    let directions = CochainSpace::new(split, &pieces, Some(Parity::Odd), false);
    let valid = coboundary_matrix(
        &d,
        &directions,
        &CochainSpace::full(split.space(), 3, Some(Parity::Even)),
    )?
    .kernel();

    let gammas = CochainSpace::new(
        split,
        &[Bidegree::mixed(0, 1), Bidegree::mixed(1, 0)],
        Some(Parity::Even),
        false,
    );
    let all2 = CochainSpace::full(split.space(), 2, Some(Parity::Odd));
    let m = coboundary_matrix(&d, &gammas, &all2)?;
    // rows outside C^{1,1} ⊕ C^{0,2} must vanish
    let outside: Vec<usize> = (0..all2.dim())
        .filter(|&i| !pieces.contains(&all2.basis()[i].bidegree(split)))
        .collect();
    let mut proj = Matrix::zeros(outside.len(), all2.dim());
    for (r, &i) in outside.iter().enumerate() {
        proj.set(r, i, scalar(1));
    }
    let allowed = proj.mul(&m)?.kernel();
    let images = allowed
        .basis_vectors()
        .iter()
        .map(|v| directions.coordinates(&all2.cochain(&m.mul_vec(v)?)))
        .collect::<Result<Vec<_>>>()?;
    let trivial = Subspace::span(directions.dim(), images)?;

    Ok(InfinitesimalDeformations {
        eta_group,
        tau_group,
        eta_classes,
        tau_classes,
        directions,
        valid,
        trivial,
        split: split.clone(),
    })
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

    fn case_one(v: &Arc<GradedSpace>, split: &SplitSpace) -> ExtensionStructure {
        ExtensionStructure::from_codifferential(
            split,
            &Cochain::from_one_based(v, &[(&[1, 1], 2, 1)]),
        )
        .unwrap()
    }

    #[test]
    fn zero_direction_passes() {
        let (v, split) = odd2();
        let e = case_one(&v, &split);
        let r = check_deformation(&e, &DeformationDirection::zero(&split));
        assert!(r.passed() && r.consistent);
    }

    #[test]
    fn case_one_conditions() {
        let (v, split) = odd2();
        let e = case_one(&v, &split);
        let sym = Cochain::from_one_based(&v, &[(&[1, 2], 2, 1), (&[2, 1], 2, 1)]);
        let dir = DeformationDirection::new(&split, sym.clone(), Cochain::zero(&v)).unwrap();
        let r = check_deformation(&e, &dir);
        assert!(r.passed() && r.consistent);

        let lop = Cochain::from_one_based(&v, &[(&[1, 2], 2, 1)]);
        let dir = DeformationDirection::new(&split, lop, Cochain::zero(&v)).unwrap();
        let r = check_deformation(&e, &dir);
        assert!(!r.passed() && r.consistent);
        assert_eq!(
            r.conditions[1].residual,
            Cochain::from_one_based(&v, &[(&[1, 1, 1], 2, -1)])
        );
    }

    #[test]
    fn admissibility_on_case_one() {
        let (v, split) = odd2();
        let e = case_one(&v, &split);
        let sym = Cochain::from_one_based(&v, &[(&[1, 2], 2, 1), (&[2, 1], 2, 1)]);
        match eta_admissible(&e, &sym).unwrap() {
            Admissibility::Admissible { zeta, .. } => {
                let dir = DeformationDirection::new(&split, sym, zeta).unwrap();
                assert!(check_deformation(&e, &dir).passed());
            }
            other => panic!("{other:?}"),
        }
        let lop = Cochain::from_one_based(&v, &[(&[1, 2], 2, 1)]);
        assert!(matches!(
            eta_admissible(&e, &lop).unwrap(),
            Admissibility::Rejected {
                stage: Stage::TripleCocycle,
                ..
            }
        ));
        assert!(eta_admissible(&e, &Cochain::zero(&v))
            .unwrap()
            .is_admissible());
    }

    #[test]
    fn classification_dimensions_add_up() {
        let (v, split) = odd2();
        for d in [
            Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)]),
            Cochain::from_one_based(&v, &[(&[1, 1], 1, 1), (&[1, 2], 2, 1), (&[2, 1], 2, 1)]),
            Cochain::from_one_based(&v, &[(&[1, 1], 1, 1)]),
            Cochain::from_one_based(&v, &[(&[1, 1], 1, 1), (&[2, 2], 2, 1)]),
        ] {
            let e = ExtensionStructure::from_codifferential(&split, &d).unwrap();
            let out = classify_infinitesimal_deformations(&e).unwrap();
            assert_eq!(out.dim(), out.eta_group.dim() + out.tau_group.dim(), "{d}");
            for c in &out.eta_classes {
                let dir = DeformationDirection::new(&split, c.eta.clone(), c.zeta.clone()).unwrap();
                let once = out.canonicalize(&dir).unwrap();
                assert_eq!(out.canonicalize(&once).unwrap(), once);
            }
        }
    }
}
