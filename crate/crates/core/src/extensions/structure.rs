use std::fmt;

use crate::coalgebra::bracket::br;
use crate::coalgebra::cochain::require_bidegree;
use crate::coalgebra::{bidegree_split, Bidegree, Cochain, Parity, Side, SplitSpace};
use crate::error::{Error, Result};
use crate::linalg::ratio;

/// An extension `d = δ + μ + λ + ψ` of the algebra `δ` on `W` by the algebra
/// `μ` on the ideal `M`. Construction checks bidegrees and parity only; use
/// [`ExtensionStructure::validate`] for the relations.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionStructure {
    split: SplitSpace,
    delta: Cochain,
    mu: Cochain,
    lambda: Cochain,
    psi: Cochain,
}

fn place(c: &Cochain, split: &SplitSpace, b: Bidegree) -> Result<()> {
    c.same_space(&Cochain::zero(split.space()))?;
    require_bidegree(c, split, b)?;
    if !c.has_parity(Parity::Odd) {
        return Err(Error::WrongParity { expected: "odd" });
    }
    Ok(())
}

impl ExtensionStructure {
    pub fn new(
        split: &SplitSpace,
        delta: Cochain,
        mu: Cochain,
        lambda: Cochain,
        psi: Cochain,
    ) -> Result<Self> {
        place(&delta, split, Bidegree::base(2))?;
        place(&mu, split, Bidegree::mixed(2, 0))?;
        place(&lambda, split, Bidegree::mixed(1, 1))?;
        place(&psi, split, Bidegree::mixed(0, 2))?;
        Ok(ExtensionStructure {
            split: split.clone(),
            delta,
            mu,
            lambda,
            psi,
        })
    }

    /// Splits an arity-two odd cochain into its four components. Fails on
    /// terms sending something in `M` to `W`.
    pub fn from_codifferential(split: &SplitSpace, d: &Cochain) -> Result<Self> {
        if d.arities().iter().any(|&n| n != 2) {
            return Err(Error::InvalidExtension(format!("{d} is not of arity two")));
        }
        let zero = Cochain::zero(split.space());
        let (mut delta, mut mu, mut lambda, mut psi) =
            (zero.clone(), zero.clone(), zero.clone(), zero);
        for (b, part) in bidegree_split(d, split) {
            let slot = if b == Bidegree::base(2) {
                &mut delta
            } else if b == Bidegree::mixed(2, 0) {
                &mut mu
            } else if b == Bidegree::mixed(1, 1) {
                &mut lambda
            } else if b == Bidegree::mixed(0, 2) {
                &mut psi
            } else {
                return Err(Error::InvalidExtension(format!(
                    "component {part} lies in {b}; M would not be an ideal"
                )));
            };
            *slot = part;
        }
        ExtensionStructure::new(split, delta, mu, lambda, psi)
    }

    pub fn split(&self) -> &SplitSpace {
        &self.split
    }

    pub fn delta(&self) -> &Cochain {
        &self.delta
    }

    pub fn mu(&self) -> &Cochain {
        &self.mu
    }

    pub fn lambda(&self) -> &Cochain {
        &self.lambda
    }

    pub fn psi(&self) -> &Cochain {
        &self.psi
    }

    /// `δ + λ`.
    pub fn dl(&self) -> Cochain {
        &self.delta + &self.lambda
    }

    pub fn assemble(&self) -> Cochain {
        &(&(&self.delta + &self.mu) + &self.lambda) + &self.psi
    }

    /// Left action `W ⊗ M → M`.
    pub fn lambda_left(&self) -> Cochain {
        let split = &self.split;
        self.lambda.filter(|b| split.side(b.inputs()[0]) == Side::W)
    }

    /// Right action `M ⊗ W → M`.
    pub fn lambda_right(&self) -> Cochain {
        let split = &self.split;
        self.lambda.filter(|b| split.side(b.inputs()[0]) == Side::M)
    }

    pub fn with_lambda_psi(&self, lambda: Cochain, psi: Cochain) -> Result<Self> {
        ExtensionStructure::new(
            &self.split,
            self.delta.clone(),
            self.mu.clone(),
            lambda,
            psi,
        )
    }

    pub fn validate(&self) -> ValidationReport {
        let half = ratio(1, 2);
        let (delta, mu, lambda, psi) = (&self.delta, &self.mu, &self.lambda, &self.psi);
        let dl = self.dl();
        let mc = &(&br(delta, lambda) + &br(lambda, lambda).scale(&half)) + &br(mu, psi);
        let relations = vec![
            Relation::new("associativity of delta", br(delta, delta)),
            Relation::new("associativity of mu", br(mu, mu)),
            Relation::new("Maurer-Cartan equation", mc.clone()),
            Relation::new("compatibility", br(mu, lambda)),
            Relation::new("cocycle condition", br(&dl, psi)),
        ];
        let automatic = vec![
            Relation::new("[mu,delta]", br(mu, delta)),
            Relation::new("[psi,psi]", br(psi, psi)),
        ];
        let square = br(&self.assemble(), &self.assemble());
        let two = crate::linalg::scalar(2);
        let recombined = [
            br(delta, delta),
            br(mu, mu),
            mc.scale(&two),
            br(mu, lambda).scale(&two),
            br(&dl, psi).scale(&two),
            br(delta, mu).scale(&two),
            br(psi, psi),
        ]
        .iter()
        .fold(Cochain::zero(delta.space()), |acc, c| &acc + c);
        ValidationReport {
            identity_holds: recombined == square,
            relations,
            automatic,
            square,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }
}

impl fmt::Display for ExtensionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.assemble())
    }
}

/// One relation and what is left over when it fails.
#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub name: &'static str,
    pub residual: Cochain,
}

impl Relation {
    fn new(name: &'static str, residual: Cochain) -> Self {
        Relation { name, residual }
    }

    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    /// The five conditions for an extension.
    pub relations: Vec<Relation>,
    /// `[μ,δ]` and `[ψ,ψ]`, which vanish for bidegree reasons.
    pub automatic: Vec<Relation>,
    /// `[d,d]` for the assembled `d`.
    pub square: Cochain,
    /// `[d,d]` equals the recombination of the relation residuals.
    pub identity_holds: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(Relation::passed) && self.square.is_zero()
    }

    /// The relation-wise verdict and the global `[d,d] = 0` check agree.
    pub fn consistent(&self) -> bool {
        self.identity_holds
            && self.automatic.iter().all(Relation::passed)
            && self.relations.iter().all(Relation::passed) == self.square.is_zero()
    }
}
