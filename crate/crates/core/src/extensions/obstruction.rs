//! Building extensions from `δ`, `μ` and a choice of `λ`: the Maurer-Cartan
//! obstruction, solving for `ψ`, and the classes that parametrise the rest.

use crate::coalgebra::bracket::br;
use crate::coalgebra::{Bidegree, Cochain, Parity, SplitSpace};
use crate::cohomology::{
    coboundary_matrix, cohomology_at, image_pieces, iterated_cohomology, restricted_cohomology,
    CochainSpace, CohomologySpace, IteratedCohomology,
};
use crate::error::{Error, Result};
use crate::linalg::{ratio, Matrix};

use super::equivalence::{grid_combinations, ScalarGrid};
use super::structure::ExtensionStructure;

/// `[δ,λ] + ½[λ,λ]`.
pub fn mc_residual(delta: &Cochain, lambda: &Cochain) -> Cochain {
    &br(delta, lambda) + &br(lambda, lambda).scale(&ratio(1, 2))
}

fn require_zero(what: &str, c: Cochain) -> Result<()> {
    if c.is_zero() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{what} = {c} is not zero")))
    }
}

/// Placement, `[δ,δ] = 0`, `[μ,μ] = 0` and `[μ,λ] = 0`.
pub(crate) fn check_data(
    delta: &Cochain,
    mu: &Cochain,
    lambda: &Cochain,
    split: &SplitSpace,
) -> Result<()> {
    let zero = Cochain::zero(split.space());
    ExtensionStructure::new(split, delta.clone(), mu.clone(), lambda.clone(), zero)?;
    require_zero("[delta,delta]", br(delta, delta))?;
    require_zero("[mu,mu]", br(mu, mu))?;
    require_zero("[mu,lambda]", br(mu, lambda))
}

/// `H^{1,2}_μ(ker D_{δ+λ})`, where the Maurer-Cartan residual lives.
pub fn obstruction_group(
    delta: &Cochain,
    mu: &Cochain,
    lambda: &Cochain,
    split: &SplitSpace,
) -> Result<CohomologySpace> {
    check_data(delta, mu, lambda, split)?;
    restricted_cohomology(
        mu,
        &(delta + lambda),
        split,
        Bidegree::mixed(1, 2),
        Parity::Even,
        false,
    )
}

/// Canonical representative of the class of `[δ,λ] + ½[λ,λ]` in
/// `H^{1,2}_μ(ker D_{δ+λ})`. Zero exactly when some `ψ` completes `λ`.
pub fn mc_obstruction(
    delta: &Cochain,
    mu: &Cochain,
    lambda: &Cochain,
    split: &SplitSpace,
) -> Result<Cochain> {
    let group = obstruction_group(delta, mu, lambda, split)?;
    group.class_of(&mc_residual(delta, lambda))
}

/// A solution `ψ` and a basis of the solutions of the homogeneous problem.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiSolution {
    pub psi: Cochain,
    pub freedom: Vec<Cochain>,
}

/// Solves `[μ,ψ] = −residual` for odd `ψ ∈ C^{0,2}` with `[constraint,ψ] = 0`.
/// The particular solution is reduced modulo the freedom.
fn solve_constrained(
    mu: &Cochain,
    constraint: &Cochain,
    residual: &Cochain,
    split: &SplitSpace,
) -> Result<Option<PsiSolution>> {
    let piece = CochainSpace::piece(split, Some(Bidegree::mixed(0, 2)), Parity::Odd, false);
    let target = CochainSpace::piece(split, Some(Bidegree::mixed(1, 2)), Parity::Even, false);
    let Ok(rhs) = target.coordinates(&(-residual)) else {
        return Ok(None);
    };
    let cod = CochainSpace::new(
        split,
        &image_pieces(constraint, split, &[Bidegree::mixed(0, 2)]),
        Some(Parity::Even),
        false,
    );
    let allowed = coboundary_matrix(constraint, &piece, &cod)?.kernel();
    let d_mu = coboundary_matrix(mu, &piece, &target)?;
    let basis = allowed.basis().transpose();
    let restricted = d_mu.mul(&basis)?;
    let Some((coeffs, kernel)) = restricted.solve_affine(&rhs)? else {
        return Ok(None);
    };
    let freedom = kernel.image_under(&basis)?;
    let particular = freedom.reduce(&basis.mul_vec(&coeffs)?)?;
    Ok(Some(PsiSolution {
        psi: piece.cochain(&particular),
        freedom: piece.cochains(&freedom),
    }))
}

/// All `ψ` completing `(δ, μ, λ)` to an extension: `[μ,ψ] = −([δ,λ] + ½[λ,λ])`
/// and `[δ+λ,ψ] = 0`. `None` when the obstruction is nonzero.
pub fn solve_psi(
    delta: &Cochain,
    mu: &Cochain,
    lambda: &Cochain,
    split: &SplitSpace,
) -> Result<Option<PsiSolution>> {
    check_data(delta, mu, lambda, split)?;
    solve_constrained(mu, &(delta + lambda), &mc_residual(delta, lambda), split)
}

/// `H^{0,2}_{μ,δ+λ}`: the classes `τ` with `ψ + τ` again an extension,
/// modulo those absorbed by a restricted equivalence.
pub fn tau_classes(e: &ExtensionStructure) -> Result<IteratedCohomology> {
    let report = e.validate();
    if !report.passed() {
        return Err(Error::InvalidExtension(failures(&report)));
    }
    iterated_cohomology(
        e.mu(),
        &e.dl(),
        e.split(),
        Bidegree::mixed(0, 2),
        Parity::Odd,
    )
}

fn failures(report: &super::structure::ValidationReport) -> String {
    let names: Vec<&str> = report
        .relations
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.name)
        .collect();
    format!("relations fail: {}", names.join(", "))
}

/// `H^{1,1}_μ` restricted to odd cochains: the possible `λ` up to restricted
/// equivalence, before the Maurer-Cartan condition.
pub fn lambda_classes(mu: &Cochain, split: &SplitSpace) -> Result<CohomologySpace> {
    cohomology_at(mu, split, Bidegree::mixed(1, 1), Parity::Odd, false)
}

/// Infinitesimal extensions: `λ` and `ψ` with `[δ,λ] + [μ,ψ] = 0`,
/// `[μ,λ] = 0` and `[δ,ψ] = 0`.
#[derive(Clone, Debug)]
pub struct InfinitesimalExtensions {
    /// `H^{1,1}_μ`.
    pub lambda_group: CohomologySpace,
    /// `H^{1,2}_μ(ker D_δ)`, where `[δ,λ]` has to vanish.
    pub obstruction_group: CohomologySpace,
    /// Representatives of a basis of the admissible classes `λ̄`.
    pub admissible: Vec<Cochain>,
    /// `H^{0,2}_{μ,δ}`.
    pub tau: CohomologySpace,
    /// Grid combinations of the admissible basis, each completed by a `ψ`.
    pub samples: Vec<InfinitesimalExtension>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InfinitesimalExtension {
    pub lambda: Cochain,
    pub psi: Cochain,
}

impl InfinitesimalExtension {
    /// Residuals of the three infinitesimal conditions.
    pub fn residuals(&self, delta: &Cochain, mu: &Cochain) -> [Cochain; 3] {
        [
            &br(delta, &self.lambda) + &br(mu, &self.psi),
            br(mu, &self.lambda),
            br(delta, &self.psi),
        ]
    }
}

pub fn classify_infinitesimal_extensions(
    delta: &Cochain,
    mu: &Cochain,
    split: &SplitSpace,
    grid: &ScalarGrid,
) -> Result<InfinitesimalExtensions> {
    let zero = Cochain::zero(split.space());
    check_data(delta, mu, &zero, split)?;
    let lambda_group = lambda_classes(mu, split)?;
    let obstruction_group =
        restricted_cohomology(mu, delta, split, Bidegree::mixed(1, 2), Parity::Even, false)?;

    // the map λ ↦ class of [δ,λ] on D_μ-cocycles, then its kernel mod coboundaries
    let amb = &lambda_group.ambient;
    let z = amb.cochains(&lambda_group.cocycles);
    let cols = z
        .iter()
        .map(|l| {
            let v = obstruction_group.ambient.coordinates(&br(delta, l))?;
            obstruction_group.coboundaries.reduce(&v)
        })
        .collect::<Result<Vec<_>>>()?;
    let m = Matrix::from_columns(obstruction_group.ambient.dim(), &cols)?;
    let zbasis = lambda_group.cocycles.basis().transpose();
    let good = m.kernel().image_under(&zbasis)?;
    let admissible_vectors = good.quotient_basis(&lambda_group.coboundaries)?;
    let admissible: Vec<Cochain> = admissible_vectors.iter().map(|v| amb.cochain(v)).collect();

    let tau = iterated_cohomology(mu, delta, split, Bidegree::mixed(0, 2), Parity::Odd)?;

    let mut samples = Vec::new();
    for lambda in grid_combinations(split.space(), &admissible, grid) {
        let solution =
            solve_constrained(mu, delta, &br(delta, &lambda), split)?.ok_or_else(|| {
                Error::Precondition(format!("admissible {lambda} has no completing psi"))
            })?;
        let sample = InfinitesimalExtension {
            lambda,
            psi: solution.psi,
        };
        if sample.residuals(delta, mu).iter().any(|r| !r.is_zero()) {
            return Err(Error::Precondition(format!(
                "infinitesimal conditions fail for {}",
                sample.lambda
            )));
        }
        samples.push(sample);
    }
    Ok(InfinitesimalExtensions {
        lambda_group,
        obstruction_group,
        admissible,
        tau,
        samples,
    })
}

/// Bimodule data `λ = λ_L + λ_R` and the classes `[ψ̄] ∈ H^{0,2}_{μ,δ+λ}`
/// of extensions with that action.
#[derive(Clone, Debug)]
pub struct BimoduleExtensions {
    pub left: Cochain,
    pub right: Cochain,
    pub classes: IteratedCohomology,
}

/// Fails unless `λ_L` is a left action, `λ_R` a right action, the two
/// commute and `[μ,λ] = 0`.
pub fn classify_bimodule_extensions(
    delta: &Cochain,
    mu: &Cochain,
    lambda: &Cochain,
    split: &SplitSpace,
) -> Result<BimoduleExtensions> {
    check_data(delta, mu, lambda, split)?;
    let zero = Cochain::zero(split.space());
    let e = ExtensionStructure::new(split, delta.clone(), mu.clone(), lambda.clone(), zero)?;
    let (left, right) = (e.lambda_left(), e.lambda_right());
    let checks = [
        ("left action", mc_residual(delta, &left)),
        ("right action", mc_residual(delta, &right)),
        ("left and right actions commute", br(&left, &right)),
    ];
    let failed: Vec<&str> = checks
        .iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(n, _)| *n)
        .collect();
    if !failed.is_empty() {
        return Err(Error::InvalidExtension(format!(
            "not a bimodule: {} fails",
            failed.join(", ")
        )));
    }
    let classes = iterated_cohomology(mu, &e.dl(), split, Bidegree::mixed(0, 2), Parity::Odd)?;
    Ok(BimoduleExtensions {
        left,
        right,
        classes,
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

    #[test]
    fn obstruction_for_lambda_on_case_two() {
        let (v, split) = odd2();
        let delta = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1)]);
        let mu = Cochain::zero(&v);
        let good = Cochain::from_one_based(&v, &[(&[1, 2], 2, 1)]);
        assert!(mc_obstruction(&delta, &mu, &good, &split)
            .unwrap()
            .is_zero());
        let bad = good.scale(&crate::linalg::scalar(2));
        let obs = mc_obstruction(&delta, &mu, &bad, &split).unwrap();
        assert_eq!(obs, mc_residual(&delta, &bad));
        assert!(!obs.is_zero());
        assert!(solve_psi(&delta, &mu, &bad, &split).unwrap().is_none());
        let sol = solve_psi(&delta, &mu, &good, &split).unwrap().unwrap();
        assert!(sol.psi.is_zero());
        assert!(sol.freedom.is_empty());
    }

    #[test]
    fn psi_solved_through_mu() {
        // 1|1 with μ = ψ^{22}_2 and a λ whose residual μ can absorb
        let v = Arc::new(GradedSpace::with_dims(1, 1));
        let split = SplitSpace::with_ideal(Arc::clone(&v), &[1]).unwrap();
        let mu = Cochain::from_one_based(&v, &[(&[2, 2], 2, 1)]);
        let delta = Cochain::zero(&v);
        let lambda = Cochain::zero(&v);
        let sol = solve_psi(&delta, &mu, &lambda, &split).unwrap().unwrap();
        assert!(sol.psi.is_zero());
        // ψ = φ^{11}_2 is even here, so C^{0,2}_odd is empty
        assert!(sol.freedom.is_empty());
    }

    #[test]
    fn tau_classes_case_one() {
        let (v, split) = odd2();
        let z = Cochain::zero(&v);
        let e = ExtensionStructure::new(&split, z.clone(), z.clone(), z.clone(), z).unwrap();
        let taus = tau_classes(&e).unwrap();
        assert_eq!(
            taus.representatives(),
            vec![Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)])]
        );
    }

    #[test]
    fn bimodule_checks() {
        let (v, split) = odd2();
        let delta = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1)]);
        let mu = Cochain::zero(&v);
        let lambda = Cochain::from_one_based(&v, &[(&[1, 2], 2, 1), (&[2, 1], 2, 1)]);
        let b = classify_bimodule_extensions(&delta, &mu, &lambda, &split).unwrap();
        assert_eq!(b.left, Cochain::from_one_based(&v, &[(&[1, 2], 2, 1)]));
        assert_eq!(b.classes.dim(), 0);
        // λ = 0 gives ker D_δ mod [δ, C^{0,1}]
        let b0 = classify_bimodule_extensions(&delta, &mu, &Cochain::zero(&v), &split).unwrap();
        assert_eq!(b0.classes.dim(), 0);
        let twice = lambda.scale(&crate::linalg::scalar(2));
        assert!(matches!(
            classify_bimodule_extensions(&delta, &mu, &twice, &split),
            Err(Error::InvalidExtension(_))
        ));
    }

    #[test]
    fn infinitesimal_case_two() {
        let (v, split) = odd2();
        let delta = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1)]);
        let mu = Cochain::zero(&v);
        let out =
            classify_infinitesimal_extensions(&delta, &mu, &split, &ScalarGrid::default()).unwrap();
        // [δ,λ] never vanishes in H_μ = C when μ = 0, except for λ with a = b = 0
        assert_eq!(out.lambda_group.dim(), 2);
        assert!(out.admissible.is_empty());
        assert_eq!(out.samples.len(), 1);
        assert_eq!(out.tau.dim(), 0);
    }
}
