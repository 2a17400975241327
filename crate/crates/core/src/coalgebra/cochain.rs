use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::space::{Bidegree, GradedSpace, Parity, Side, SplitSpace};
use crate::error::{Error, Result};
use crate::linalg::{zero_vector, Scalar};

/// The coderivation `φ^I_i`: sends `e_I` to `e_i` and every other basis
/// tensor of the same length to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisCoderivation {
    inputs: Vec<usize>,
    output: usize,
}

impl BasisCoderivation {
    /// Panics on an empty input list.
    pub fn new(inputs: Vec<usize>, output: usize) -> Self {
        assert!(!inputs.is_empty(), "basis coderivation needs arity >= 1");
        BasisCoderivation { inputs, output }
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    /// Parity of the output plus the parities of all inputs.
    pub fn parity(&self, space: &GradedSpace) -> Parity {
        self.inputs
            .iter()
            .fold(space.parity(self.output), |acc, &i| acc + space.parity(i))
    }

    pub fn bidegree(&self, split: &SplitSpace) -> Bidegree {
        let m_inputs = self
            .inputs
            .iter()
            .filter(|&&i| split.side(i) == Side::M)
            .count();
        Bidegree {
            m_inputs,
            w_inputs: self.arity() - m_inputs,
            target: split.side(self.output),
        }
    }

    fn check(&self, space: &GradedSpace) -> Result<()> {
        for &i in self.inputs.iter().chain(std::iter::once(&self.output)) {
            space.check_index(i)?;
        }
        Ok(())
    }
}

impl fmt::Display for BasisCoderivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ins: Vec<String> = self.inputs.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "[{} -> {}]", ins.join(","), self.output + 1)
    }
}

/// All `dim^(n+1)` basis coderivations of arity `n`, in lexicographic order
/// of `(I, i)`, optionally restricted to one parity. This order fixes matrix
/// coordinates everywhere in the crate.
pub fn cochain_basis(
    space: &GradedSpace,
    arity: usize,
    parity: Option<Parity>,
) -> Vec<BasisCoderivation> {
    assert!(arity >= 1, "cochain arity must be at least 1");
    let dim = space.dim();
    if dim == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut inputs = vec![0usize; arity];
    loop {
        for output in 0..dim {
            let c = BasisCoderivation::new(inputs.clone(), output);
            if parity.is_none_or(|p| c.parity(space) == p) {
                out.push(c);
            }
        }
        // odometer increment, last position fastest
        let mut pos = arity;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            inputs[pos] += 1;
            if inputs[pos] < dim {
                break;
            }
            inputs[pos] = 0;
        }
    }
}

/// A finite linear combination of basis coderivations. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cochain {
    space: Arc<GradedSpace>,
    terms: BTreeMap<BasisCoderivation, Scalar>,
}

impl fmt::Debug for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cochain({self})")
    }
}

impl Cochain {
    pub fn zero(space: &Arc<GradedSpace>) -> Self {
        Cochain {
            space: Arc::clone(space),
            terms: BTreeMap::new(),
        }
    }

    /// Single term `coeff · φ^inputs_output` (indices are 0-based).
    pub fn term(
        space: &Arc<GradedSpace>,
        inputs: &[usize],
        output: usize,
        coeff: Scalar,
    ) -> Result<Self> {
        Cochain::from_terms(
            space,
            [(BasisCoderivation::new(inputs.to_vec(), output), coeff)],
        )
    }

    /// Sum of terms; repeated coderivations are added together.
    pub fn from_terms(
        space: &Arc<GradedSpace>,
        terms: impl IntoIterator<Item = (BasisCoderivation, Scalar)>,
    ) -> Result<Self> {
        let mut c = Cochain::zero(space);
        for (b, x) in terms {
            b.check(space)?;
            c.add_term(b, x);
        }
        Ok(c)
    }

    /// Convenience for tests and examples: `(inputs, output, coeff)` with
    /// 1-based indices, as written in the literature.
    pub fn from_one_based(space: &Arc<GradedSpace>, terms: &[(&[usize], usize, i64)]) -> Self {
        let items = terms.iter().map(|(ins, out, c)| {
            (
                BasisCoderivation::new(ins.iter().map(|i| i - 1).collect(), out - 1),
                crate::linalg::scalar(*c),
            )
        });
        Cochain::from_terms(space, items).expect("valid 1-based indices")
    }

    pub(crate) fn add_term(&mut self, b: BasisCoderivation, x: Scalar) {
        if x.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(x);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += x;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn terms(&self) -> &BTreeMap<BasisCoderivation, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, b: &BasisCoderivation) -> Scalar {
        self.terms.get(b).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn arities(&self) -> BTreeSet<usize> {
        self.terms.keys().map(BasisCoderivation::arity).collect()
    }

    /// The common parity of all terms; `None` for the zero cochain or a
    /// mixture.
    pub fn parity(&self) -> Option<Parity> {
        let mut ps = self.terms.keys().map(|b| b.parity(&self.space));
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }

    /// True when every term has parity `p` (vacuously true for zero).
    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms.keys().all(|b| b.parity(&self.space) == p)
    }

    pub fn same_space(&self, other: &Cochain) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Splits into pieces homogeneous in both arity and parity.
    pub fn components(&self) -> BTreeMap<(usize, Parity), Cochain> {
        let mut out: BTreeMap<(usize, Parity), Cochain> = BTreeMap::new();
        for (b, x) in &self.terms {
            out.entry((b.arity(), b.parity(&self.space)))
                .or_insert_with(|| Cochain::zero(&self.space))
                .add_term(b.clone(), x.clone());
        }
        out
    }

    pub fn scale(&self, factor: &Scalar) -> Cochain {
        let mut c = Cochain::zero(&self.space);
        if factor.is_zero() {
            return c;
        }
        for (b, x) in &self.terms {
            c.terms.insert(b.clone(), x * factor);
        }
        c
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&BasisCoderivation) -> bool) -> Cochain {
        Cochain {
            space: Arc::clone(&self.space),
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(b))
                .map(|(b, x)| (b.clone(), x.clone()))
                .collect(),
        }
    }

    /// Value on the basis tensor `e_{args}` in V-coordinates.
    pub fn evaluate(&self, args: &[usize]) -> Result<Vec<Scalar>> {
        let arities = self.arities();
        if !arities.contains(&args.len()) && !self.is_zero() {
            return Err(Error::ArityMismatch {
                found: args.len(),
                present: arities.into_iter().collect(),
            });
        }
        for &a in args {
            self.space.check_index(a)?;
        }
        let mut out = zero_vector(self.space.dim());
        for (b, x) in &self.terms {
            if b.inputs() == args {
                out[b.output()] += x;
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Cochain) -> Result<Cochain> {
        self.same_space(other)?;
        let mut c = self.clone();
        for (b, x) in &other.terms {
            c.add_term(b.clone(), x.clone());
        }
        Ok(c)
    }

    /// Sort key preferring few terms and simple coefficients (1 before -1 before 2 ...).
    pub fn simplicity_key(&self) -> impl Ord {
        let coeffs: Vec<_> = self
            .terms
            .iter()
            .map(|(b, x)| (b.clone(), crate::linalg::simplicity_key(x)))
            .collect();
        (self.terms.len(), coeffs)
    }
}

impl Add for &Cochain {
    type Output = Cochain;

    /// Panics if the cochains live on different spaces.
    fn add(self, rhs: &Cochain) -> Cochain {
        self.checked_add(rhs)
            .expect("adding cochains on different spaces")
    }
}

impl Sub for &Cochain {
    type Output = Cochain;

    fn sub(self, rhs: &Cochain) -> Cochain {
        self + &(-rhs)
    }
}

impl Neg for &Cochain {
    type Output = Cochain;

    fn neg(self) -> Cochain {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for Cochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (b, x)) in self.terms.iter().enumerate() {
            let name = if b.parity(&self.space).is_odd() {
                "psi"
            } else {
                "phi"
            };
            let magnitude = x.abs();
            let sign = if x.is_negative() { "-" } else { "+" };
            if n == 0 {
                if x.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if !magnitude.is_one() {
                write!(f, "{magnitude} ")?;
            }
            write!(f, "{name}{b}")?;
        }
        Ok(())
    }
}

/// Partitions the terms of `c` by bidegree relative to `split`. The parts
/// sum back to `c`; ideal-violating terms land in their own buckets.
pub fn bidegree_split(c: &Cochain, split: &SplitSpace) -> BTreeMap<Bidegree, Cochain> {
    let mut out: BTreeMap<Bidegree, Cochain> = BTreeMap::new();
    for (b, x) in c.terms() {
        out.entry(b.bidegree(split))
            .or_insert_with(|| Cochain::zero(c.space()))
            .add_term(b.clone(), x.clone());
    }
    out
}

/// Errors unless every term of `c` has the given bidegree.
pub fn require_bidegree(c: &Cochain, split: &SplitSpace, expected: Bidegree) -> Result<()> {
    for b in c.terms().keys() {
        let found = b.bidegree(split);
        if found != expected {
            return Err(Error::WrongBidegree {
                expected: expected.to_string(),
                found: found.to_string(),
            });
        }
    }
    Ok(())
}
