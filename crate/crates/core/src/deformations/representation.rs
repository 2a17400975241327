//! Deformations of a representation: an extension with `ψ = 0`, deformed
//! either in `(δ, λ)` with `μ` fixed or in `(λ, μ)` with `δ` fixed.
//!
//! Everything here lives on the restricted complex: mixed pieces need an `M`
//! input, base pieces `C^n` are kept. Only block-diagonal changes of basis
//! are allowed, so equivalences come from `α ∈ C^{1,0}` and `γ ∈ C^1`.

use crate::coalgebra::bracket::br;
use crate::coalgebra::cochain::require_bidegree;
use crate::coalgebra::{Bidegree, Cochain, Parity, SplitSpace};
use crate::cohomology::{
    coboundary_matrix, cohomology, cohomology_at, restricted_cohomology, CochainSpace,
    CohomologySpace, Tower,
};
use crate::error::{Error, Result};
use crate::extensions::{ExtensionStructure, Relation};
use crate::linalg::{scalar, Matrix, Subspace};

use super::solve_stacked;

fn check_odd(c: &Cochain, split: &SplitSpace, b: Bidegree) -> Result<()> {
    c.same_space(&Cochain::zero(split.space()))?;
    require_bidegree(c, split, b)?;
    if c.has_parity(Parity::Odd) {
        Ok(())
    } else {
        Err(Error::WrongParity { expected: "odd" })
    }
}

/// `d_t = d + t(δ₁ + λ₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepDeformationA {
    pub delta1: Cochain,
    pub lambda1: Cochain,
}

impl RepDeformationA {
    pub fn new(split: &SplitSpace, delta1: Cochain, lambda1: Cochain) -> Result<Self> {
        check_odd(&delta1, split, Bidegree::base(2))?;
        check_odd(&lambda1, split, Bidegree::mixed(1, 1))?;
        Ok(RepDeformationA { delta1, lambda1 })
    }
}

/// `d_t = d + t(λ₁ + μ₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepDeformationB {
    pub lambda1: Cochain,
    pub mu1: Cochain,
}

impl RepDeformationB {
    pub fn new(split: &SplitSpace, lambda1: Cochain, mu1: Cochain) -> Result<Self> {
        check_odd(&lambda1, split, Bidegree::mixed(1, 1))?;
        check_odd(&mu1, split, Bidegree::mixed(2, 0))?;
        Ok(RepDeformationB { lambda1, mu1 })
    }
}

fn require_representation(e: &ExtensionStructure) -> Result<()> {
    if !e.psi().is_zero() {
        return Err(Error::Precondition(format!(
            "deformations of a representation need psi = 0, got {}",
            e.psi()
        )));
    }
    if !e.is_valid() {
        return Err(Error::InvalidExtension(format!("{e} is not an extension")));
    }
    Ok(())
}

/// `D_λ D_δ + D_{δ+λ} D_λ = 0` on every basis cochain of arity at most
/// `max_arity`.
pub fn module_identity_holds(e: &ExtensionStructure, max_arity: usize) -> bool {
    let (delta, lambda, dl) = (e.delta(), e.lambda(), e.dl());
    let space = e.split().space();
    (1..=max_arity).all(|n| {
        let c = CochainSpace::full(space, n, None);
        (0..c.dim()).all(|i| {
            let phi = c.basis_cochain(i);
            (&br(lambda, &br(delta, &phi)) + &br(&dl, &br(lambda, &phi))).is_zero()
        })
    })
}

fn restricted_piece(split: &SplitSpace, b: Bidegree, p: Parity) -> CochainSpace {
    CochainSpace::piece(split, Some(b), p, true)
}

/// `τ ∈ C^{1,1}` with `[μ,τ] = 0` and `[δ+λ,τ] = 0`, modulo `[δ+λ, α+γ]` for
/// even `α ∈ C^{1,0}`, `γ ∈ C^1` with `[μ,α+γ] = 0` and `[δ,γ] = 0`.
fn tau_group(e: &ExtensionStructure) -> Result<CohomologySpace> {
    let split = e.split();
    let space = split.space();
    let dl = e.dl();
    let ambient = restricted_piece(split, Bidegree::mixed(1, 1), Parity::Odd);
    let c3 = CochainSpace::full(space, 3, Some(Parity::Even));
    let cocycles = coboundary_matrix(e.mu(), &ambient, &c3)?
        .vstack(&coboundary_matrix(&dl, &ambient, &c3)?)?
        .kernel();

    let sources = CochainSpace::new(
        split,
        &[Bidegree::base(1), Bidegree::mixed(1, 0)],
        Some(Parity::Even),
        true,
    );
    let c2 = CochainSpace::full(space, 2, Some(Parity::Odd));
    let by_dl = coboundary_matrix(&dl, &sources, &c2)?;
    let by_mu = coboundary_matrix(e.mu(), &sources, &c2)?;
    let target = Bidegree::mixed(1, 1);
    let outside: Vec<usize> = (0..c2.dim())
        .filter(|&i| c2.basis()[i].bidegree(split) != target)
        .collect();
    let mut proj = Matrix::zeros(outside.len(), c2.dim());
    for (r, &i) in outside.iter().enumerate() {
        proj.set(r, i, scalar(1));
    }
    let allowed = by_mu.vstack(&proj.mul(&by_dl)?)?.kernel();
    let images = allowed
        .basis_vectors()
        .iter()
        .map(|v| ambient.coordinates(&c2.cochain(&by_dl.mul_vec(v)?)))
        .collect::<Result<Vec<_>>>()?;
    let coboundaries = Subspace::span(ambient.dim(), images)?;
    CohomologySpace::build(ambient, cocycles, coboundaries)
}

/// Basis of the classes in `group` whose image under `f` reduces to zero
/// modulo `target`'s coboundaries.
fn admissible_classes(
    group: &CohomologySpace,
    target: &CohomologySpace,
    f: impl Fn(&Cochain) -> Cochain,
) -> Result<Vec<Cochain>> {
    let z = group.ambient.cochains(&group.cocycles);
    let cols = z
        .iter()
        .map(|c| {
            target
                .coboundaries
                .reduce(&target.ambient.coordinates(&f(c))?)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_columns(target.ambient.dim(), &cols)?;
    let good = m
        .kernel()
        .image_under(&group.cocycles.basis().transpose())?;
    Ok(good
        .quotient_basis(&group.coboundaries)?
        .iter()
        .map(|v| group.ambient.cochain(v))
        .collect())
}

/// Some `x` in `piece` with `[op, x] = c − target`, i.e. moving `c` onto `target`.
fn mover(op: &Cochain, piece: &CochainSpace, from: &Cochain, to: &Cochain) -> Result<Cochain> {
    solve_stacked(piece, &[(op, to - from)])?
        .map(|(x, _)| x)
        .ok_or_else(|| Error::Precondition(format!("{from} and {to} are not cohomologous")))
}

fn reduce_mod(group: &CohomologySpace, c: &Cochain) -> Result<Cochain> {
    Ok(group
        .ambient
        .cochain(&group.coboundaries.reduce(&group.ambient.coordinates(c)?)?))
}

/// First scenario: `δ` and `λ` vary, `μ` is fixed.
#[derive(Clone, Debug)]
pub struct RepDeformA {
    /// `[δ,δ₁]`, `[λ,δ₁] + [δ+λ,λ₁]`, `[μ,λ₁]`.
    pub conditions: Vec<Relation>,
    /// `H^2_δ` on odd `C^2`.
    pub h2_delta: CohomologySpace,
    /// Basis of the classes `δ̄₁` with `[D_λ̄(δ̄₁)] = 0`.
    pub admissible: Vec<Cochain>,
    /// The classes `[τ̄]` of the variation in `λ₁`.
    pub tau_group: CohomologySpace,
    /// Canonical representative of the class of `δ₁` when it is a cocycle.
    pub delta1_class: Option<Cochain>,
    /// Canonical representative of `[D_λ̄(δ̄₁)]`.
    pub obstruction: Option<Cochain>,
    /// The fixed solution `λ₁⁰` for the given `δ₁`.
    pub particular: Option<Cochain>,
    /// Class of `τ = λ₁ − λ₁⁰`.
    pub tau_class: Option<Cochain>,
    /// The direction moved to canonical form by an infinitesimal equivalence.
    pub canonical: Option<RepDeformationA>,
}

impl RepDeformA {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(Relation::passed)
    }

    /// `(dim of admissible δ̄₁, dim of [τ̄] classes)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.admissible.len(), self.tau_group.dim())
    }
}

fn base(split: &SplitSpace, n: usize, p: Parity) -> CochainSpace {
    CochainSpace::new(split, &[Bidegree::base(n)], Some(p), true)
}

pub fn rep_deform_a(e: &ExtensionStructure, dir: &RepDeformationA) -> Result<RepDeformA> {
    require_representation(e)?;
    let split = e.split();
    let space = split.space();
    let (delta, mu, lambda, dl) = (e.delta(), e.mu(), e.lambda(), e.dl());
    check_odd(&dir.delta1, split, Bidegree::base(2))?;
    check_odd(&dir.lambda1, split, Bidegree::mixed(1, 1))?;

    let h2_delta = cohomology(
        delta,
        &base(split, 1, Parity::Even),
        &base(split, 2, Parity::Odd),
        &base(split, 3, Parity::Even),
    )?;
    let tower = Tower::standard(split, mu, &dl, e.psi()).restricted(true);
    let obstruction_group = tower.iterated(Bidegree::mixed(1, 2), Parity::Even)?;
    let admissible = admissible_classes(&h2_delta, &obstruction_group, |c| br(lambda, c))?;
    let tau_group = tau_group(e)?;

    let (delta1, lambda1) = (&dir.delta1, &dir.lambda1);
    let conditions = vec![
        Relation {
            name: "[delta,delta1]",
            residual: br(delta, delta1),
        },
        Relation {
            name: "[lambda,delta1] + [delta+lambda,lambda1]",
            residual: &br(lambda, delta1) + &br(&dl, lambda1),
        },
        Relation {
            name: "[mu,lambda1]",
            residual: br(mu, lambda1),
        },
    ];

    let mut out = RepDeformA {
        conditions,
        h2_delta,
        admissible,
        tau_group,
        delta1_class: None,
        obstruction: None,
        particular: None,
        tau_class: None,
        canonical: None,
    };
    if !out.conditions[0].passed() {
        return Ok(out);
    }
    let particular_for = |d1: &Cochain| -> Result<Option<Cochain>> {
        let piece = restricted_piece(split, Bidegree::mixed(1, 1), Parity::Odd);
        Ok(solve_stacked(
            &piece,
            &[(&dl, -&br(lambda, d1)), (mu, Cochain::zero(space))],
        )?
        .map(|(x, _)| x))
    };
    let class = out.h2_delta.class_of(delta1)?;
    out.obstruction = Some(reduce_mod(&obstruction_group, &br(lambda, delta1))?);
    out.particular = particular_for(delta1)?;
    out.delta1_class = Some(class.clone());
    if !out.passed() {
        return Ok(out);
    }
    let l0 = out
        .particular
        .clone()
        .expect("conditions hold, so a solution exists");
    out.tau_class = Some(reduce_mod(&out.tau_group, &(lambda1 - &l0))?);

    // move δ₁ to its canonical representative with γ, then λ₁ picks up [λ,γ]
    let gamma = mover(delta, &base(split, 1, Parity::Even), delta1, &class)?;
    let moved = lambda1 + &br(lambda, &gamma);
    let l0c = particular_for(&class)?.expect("cohomologous delta1 keeps a solution");
    let lambda1c = &reduce_mod(&out.tau_group, &(&moved - &l0c))? + &l0c;
    out.canonical = Some(RepDeformationA {
        delta1: class,
        lambda1: lambda1c,
    });
    Ok(out)
}

/// Second scenario: `λ` and `μ` vary, `δ` is fixed.
#[derive(Clone, Debug)]
pub struct RepDeformB {
    /// `D_μ(μ₁)`, `D_{δ+λ}(μ₁) + D_μ(λ₁)`, `D_{δ+λ}(λ₁)`.
    pub conditions: Vec<Relation>,
    /// `H^{2,0}_μ` on odd cochains.
    pub h20_mu: CohomologySpace,
    /// Basis of the classes `μ̄₁` with `overline{D_{δ+λ}(μ₁)} = 0` in
    /// `H_μ(ker D_{δ+λ})`.
    pub admissible: Vec<Cochain>,
    pub tau_group: CohomologySpace,
    pub mu1_class: Option<Cochain>,
    pub obstruction: Option<Cochain>,
    pub particular: Option<Cochain>,
    pub tau_class: Option<Cochain>,
    pub canonical: Option<RepDeformationB>,
}

impl RepDeformB {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(Relation::passed)
    }

    /// `(dim of admissible μ̄₁, dim of [τ̄] classes)`.
    pub fn dims(&self) -> (usize, usize) {
        (self.admissible.len(), self.tau_group.dim())
    }
}

pub fn rep_deform_b(e: &ExtensionStructure, dir: &RepDeformationB) -> Result<RepDeformB> {
    require_representation(e)?;
    let split = e.split();
    let space = split.space();
    let (mu, dl) = (e.mu(), e.dl());
    check_odd(&dir.lambda1, split, Bidegree::mixed(1, 1))?;
    check_odd(&dir.mu1, split, Bidegree::mixed(2, 0))?;

    let h20_mu = cohomology_at(mu, split, Bidegree::mixed(2, 0), Parity::Odd, true)?;
    let obstruction_group =
        restricted_cohomology(mu, &dl, split, Bidegree::mixed(2, 1), Parity::Even, true)?;
    let admissible = admissible_classes(&h20_mu, &obstruction_group, |c| br(&dl, c))?;
    let tau_group = tau_group(e)?;

    let (lambda1, mu1) = (&dir.lambda1, &dir.mu1);
    let conditions = vec![
        Relation {
            name: "[mu,mu1]",
            residual: br(mu, mu1),
        },
        Relation {
            name: "[delta+lambda,mu1] + [mu,lambda1]",
            residual: &br(&dl, mu1) + &br(mu, lambda1),
        },
        Relation {
            name: "[delta+lambda,lambda1]",
            residual: br(&dl, lambda1),
        },
    ];
    let mut out = RepDeformB {
        conditions,
        h20_mu,
        admissible,
        tau_group,
        mu1_class: None,
        obstruction: None,
        particular: None,
        tau_class: None,
        canonical: None,
    };
    if !out.conditions[0].passed() {
        return Ok(out);
    }
    let particular_for = |m1: &Cochain| -> Result<Option<Cochain>> {
        let piece = restricted_piece(split, Bidegree::mixed(1, 1), Parity::Odd);
        Ok(
            solve_stacked(&piece, &[(mu, -&br(&dl, m1)), (&dl, Cochain::zero(space))])?
                .map(|(x, _)| x),
        )
    };
    let class = out.h20_mu.class_of(mu1)?;
    out.obstruction = Some(obstruction_group.class_of(&br(&dl, mu1))?);
    out.particular = particular_for(mu1)?;
    out.mu1_class = Some(class.clone());
    if !out.passed() {
        return Ok(out);
    }
    let l0 = out
        .particular
        .clone()
        .expect("conditions hold, so a solution exists");
    out.tau_class = Some(reduce_mod(&out.tau_group, &(lambda1 - &l0))?);

    let alpha = mover(
        mu,
        &restricted_piece(split, Bidegree::mixed(1, 0), Parity::Even),
        mu1,
        &class,
    )?;
    let moved = lambda1 + &br(e.lambda(), &alpha);
    let l0c = particular_for(&class)?.expect("cohomologous mu1 keeps a solution");
    let lambda1c = &reduce_mod(&out.tau_group, &(&moved - &l0c))? + &l0c;
    out.canonical = Some(RepDeformationB {
        lambda1: lambda1c,
        mu1: class,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::GradedSpace;
    use std::sync::Arc;

    fn module(a: i64, b: i64) -> (Arc<GradedSpace>, SplitSpace, ExtensionStructure) {
        let v = Arc::new(GradedSpace::with_dims(1, 1));
        let split = SplitSpace::with_ideal(Arc::clone(&v), &[0]).unwrap();
        let d = Cochain::from_one_based(&v, &[(&[2, 2], 2, 1), (&[1, 2], 1, a), (&[2, 1], 1, b)]);
        let e = ExtensionStructure::from_codifferential(&split, &d).unwrap();
        (v, split, e)
    }

    #[test]
    fn identity_on_the_four_modules() {
        for (a, b) in [(0, 0), (-1, 0), (0, 1), (-1, 1)] {
            let (_, _, e) = module(a, b);
            assert!(e.is_valid());
            assert!(module_identity_holds(&e, 2));
        }
    }

    #[test]
    fn trivial_directions() {
        let (v, split, e) = module(-1, 1);
        let z = Cochain::zero(&v);
        let a = rep_deform_a(
            &e,
            &RepDeformationA::new(&split, z.clone(), z.clone()).unwrap(),
        )
        .unwrap();
        assert!(a.passed());
        assert!(a.tau_class.unwrap().is_zero());
        assert!(a.delta1_class.unwrap().is_zero());
        let b = rep_deform_b(&e, &RepDeformationB::new(&split, z.clone(), z).unwrap()).unwrap();
        assert!(b.passed());
        assert!(b.tau_class.unwrap().is_zero());
    }

    #[test]
    fn rejects_nonzero_psi() {
        let v = Arc::new(GradedSpace::with_prefix("f", 0, 2));
        let split = SplitSpace::with_ideal(Arc::clone(&v), &[1]).unwrap();
        let e = ExtensionStructure::from_codifferential(
            &split,
            &Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)]),
        )
        .unwrap();
        let z = Cochain::zero(&v);
        let dir = RepDeformationA::new(&split, z.clone(), z).unwrap();
        assert!(matches!(
            rep_deform_a(&e, &dir),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn canonical_form_is_stable() {
        let (v, split, e) = module(0, 1);
        // δ₁ = t·δ deforms the algebra on W by rescaling
        let delta1 = Cochain::from_one_based(&v, &[(&[2, 2], 2, 1)]);
        let l1 = solve_stacked(
            &restricted_piece(&split, Bidegree::mixed(1, 1), Parity::Odd),
            &[
                (&e.dl(), -&br(e.lambda(), &delta1)),
                (e.mu(), Cochain::zero(&v)),
            ],
        )
        .unwrap()
        .map(|(x, _)| x);
        if let Some(l1) = l1 {
            let dir = RepDeformationA::new(&split, delta1, l1).unwrap();
            let out = rep_deform_a(&e, &dir).unwrap();
            assert!(out.passed());
            let c = out.canonical.unwrap();
            let again = rep_deform_a(&e, &c).unwrap();
            assert_eq!(again.canonical.unwrap(), c);
        }
    }

    #[test]
    fn deforming_the_product_on_the_ideal() {
        let v = Arc::new(GradedSpace::with_prefix("f", 0, 2));
        let split = SplitSpace::with_ideal(Arc::clone(&v), &[1]).unwrap();
        let d = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1), (&[1, 2], 2, 1), (&[2, 1], 2, 1)]);
        let e = ExtensionStructure::from_codifferential(&split, &d).unwrap();
        let mu1 = Cochain::from_one_based(&v, &[(&[2, 2], 2, 1)]);
        let z = Cochain::zero(&v);
        let probe = rep_deform_b(
            &e,
            &RepDeformationB::new(&split, z.clone(), mu1.clone()).unwrap(),
        )
        .unwrap();
        assert_eq!(probe.dims(), (1, 0));
        assert!(probe.obstruction.as_ref().unwrap().is_zero());
        let l0 = probe.particular.clone().unwrap();
        let dir = RepDeformationB::new(&split, l0, mu1).unwrap();
        let out = rep_deform_b(&e, &dir).unwrap();
        assert!(out.passed());
        assert_eq!(out.canonical.as_ref(), Some(&dir));
    }
}
