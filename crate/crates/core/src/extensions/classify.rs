//! Classification of extensions with fixed `δ` and `μ`.
//!
//! Candidates are `λ` running over grid combinations of a basis of
//! `H^{1,1}_μ`, completed by `ψ` when the Maurer-Cartan obstruction vanishes,
//! then shifted by grid combinations of `H^{0,2}_{μ,δ+λ}`. Candidates are
//! merged only when an explicit witness is found.

use rayon::prelude::*;

use crate::coalgebra::{Cochain, SplitSpace};
use crate::error::{Error, Result};

use super::equivalence::{
    equivalent_general, grid_combinations, Fingerprint, GeneralWitness, ScalarGrid,
};
use super::obstruction::{check_data, lambda_classes, solve_psi, tau_classes};
use super::structure::ExtensionStructure;

#[derive(Clone, Debug, Default)]
pub struct ClassifyOptions {
    pub grid: ScalarGrid,
    pub parallel: bool,
}

/// A representative together with what was merged into it.
#[derive(Clone, Debug)]
pub struct ExtensionClass {
    pub structure: ExtensionStructure,
    pub fingerprint: Fingerprint,
    /// Other candidates shown equivalent to this one, with witnesses
    /// `h*(candidate) = representative`.
    pub merged: Vec<(Cochain, GeneralWitness)>,
    /// Indices of other classes with the same fingerprint for which no
    /// witness was found either way.
    pub unresolved_with: Vec<usize>,
}

impl ExtensionClass {
    pub fn codifferential(&self) -> Cochain {
        self.structure.assemble()
    }

    pub fn is_proven_distinct(&self) -> bool {
        self.unresolved_with.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub classes: Vec<ExtensionClass>,
    /// Values of `λ` rejected by the Maurer-Cartan obstruction.
    pub obstructed: Vec<Cochain>,
    /// Number of candidate structures examined (zero excluded).
    pub candidates: usize,
}

impl Classification {
    pub fn codifferentials(&self) -> Vec<Cochain> {
        self.classes
            .iter()
            .map(ExtensionClass::codifferential)
            .collect()
    }

    /// True when every pair of classes is known to be inequivalent.
    pub fn fully_resolved(&self) -> bool {
        self.classes.iter().all(ExtensionClass::is_proven_distinct)
    }
}

enum LambdaOutcome {
    Obstructed(Cochain),
    Completed(Vec<ExtensionStructure>),
}

fn expand(
    delta: &Cochain,
    mu: &Cochain,
    lambda: Cochain,
    split: &SplitSpace,
    grid: &ScalarGrid,
) -> Result<LambdaOutcome> {
    let Some(solution) = solve_psi(delta, mu, &lambda, split)? else {
        return Ok(LambdaOutcome::Obstructed(lambda));
    };
    let base = ExtensionStructure::new(split, delta.clone(), mu.clone(), lambda, solution.psi)?;
    let taus = tau_classes(&base)?.representatives();
    let mut out = Vec::new();
    for tau in grid_combinations(split.space(), &taus, grid) {
        let e = base.with_lambda_psi(base.lambda().clone(), base.psi() + &tau)?;
        if !e.is_valid() {
            return Err(Error::InvalidExtension(format!(
                "candidate {e} fails the relations"
            )));
        }
        if !e.assemble().is_zero() {
            out.push(e);
        }
    }
    Ok(LambdaOutcome::Completed(out))
}

fn par_map<T: Sync, U: Send>(
    items: &[T],
    parallel: bool,
    f: impl Fn(&T) -> Result<U> + Sync + Send,
) -> Result<Vec<U>> {
    if parallel {
        items.par_iter().map(&f).collect()
    } else {
        items.iter().map(&f).collect()
    }
}

/// All extensions of `δ` by `μ` on the given split, up to equivalence, as far
/// as the grid reaches. The zero codifferential is left out. Output order is
/// by simplicity of the assembled codifferential and does not depend on
/// `parallel`.
pub fn classify_extensions(
    delta: &Cochain,
    mu: &Cochain,
    split: &SplitSpace,
    options: &ClassifyOptions,
) -> Result<Classification> {
    check_data(delta, mu, &Cochain::zero(split.space()), split)?;
    let grid = &options.grid;
    let lambdas = grid_combinations(
        split.space(),
        &lambda_classes(mu, split)?.representatives(),
        grid,
    );
    let outcomes = par_map(&lambdas, options.parallel, |l| {
        expand(delta, mu, l.clone(), split, grid)
    })?;

    let mut obstructed = Vec::new();
    let mut candidates = Vec::new();
    for outcome in outcomes {
        match outcome {
            LambdaOutcome::Obstructed(l) => obstructed.push(l),
            LambdaOutcome::Completed(es) => candidates.extend(es),
        }
    }
    candidates.sort_by_cached_key(|e| e.assemble().simplicity_key());
    candidates.dedup_by(|a, b| a.assemble() == b.assemble());
    let fingerprints = par_map(&candidates, options.parallel, Fingerprint::of)?;

    let mut classes: Vec<ExtensionClass> = Vec::new();
    for (e, fp) in candidates.iter().zip(fingerprints) {
        let same: Vec<usize> = (0..classes.len())
            .filter(|&i| classes[i].fingerprint == fp)
            .collect();
        let found = par_map(&same, options.parallel, |&i| {
            equivalent_general(e, &classes[i].structure, grid)
        })?;
        match same.iter().zip(found).find_map(|(&i, w)| w.map(|w| (i, w))) {
            Some((i, w)) => classes[i].merged.push((e.assemble(), w)),
            None => {
                let new = classes.len();
                for &i in &same {
                    classes[i].unresolved_with.push(new);
                }
                classes.push(ExtensionClass {
                    structure: e.clone(),
                    fingerprint: fp,
                    merged: Vec::new(),
                    unresolved_with: same,
                });
            }
        }
    }
    Ok(Classification {
        candidates: candidates.len(),
        classes,
        obstructed,
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
    fn case_one_gives_one_class() {
        let (v, split) = odd2();
        let z = Cochain::zero(&v);
        let out = classify_extensions(&z, &z, &split, &ClassifyOptions::default()).unwrap();
        assert_eq!(
            out.codifferentials(),
            vec![Cochain::from_one_based(&v, &[(&[1, 1], 2, 1)])]
        );
        assert!(out.fully_resolved());
        assert_eq!(out.classes[0].merged.len(), 1);
    }

    #[test]
    fn case_two_gives_four_classes() {
        let (v, split) = odd2();
        let delta = Cochain::from_one_based(&v, &[(&[1, 1], 1, 1)]);
        let z = Cochain::zero(&v);
        let out = classify_extensions(&delta, &z, &split, &ClassifyOptions::default()).unwrap();
        let expected = vec![
            delta.clone(),
            Cochain::from_one_based(&v, &[(&[1, 1], 1, 1), (&[1, 2], 2, 1)]),
            Cochain::from_one_based(&v, &[(&[1, 1], 1, 1), (&[2, 1], 2, 1)]),
            Cochain::from_one_based(&v, &[(&[1, 1], 1, 1), (&[1, 2], 2, 1), (&[2, 1], 2, 1)]),
        ];
        assert_eq!(out.codifferentials(), expected);
        assert!(out.fully_resolved());
        assert_eq!(out.obstructed.len(), 5);
        let par = classify_extensions(
            &delta,
            &z,
            &split,
            &ClassifyOptions {
                parallel: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(par.codifferentials(), expected);
    }
}
