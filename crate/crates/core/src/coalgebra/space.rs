use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn flip(self) -> Self {
        Parity::from_bit(self.bit() + 1)
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^(self * other)`.
    pub fn koszul_sign(self, other: Parity) -> i8 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bit(self.bit() + rhs.bit())
    }
}

/// Flips an optional parity filter; `None` (no filter) stays `None`.
pub fn flip_filter(p: Option<Parity>) -> Option<Parity> {
    p.map(Parity::flip)
}

/// A Z2-graded vector space with a named, ordered basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    names: Vec<String>,
    parities: Vec<Parity>,
}

impl GradedSpace {
    pub fn new(names: Vec<String>, parities: Vec<Parity>) -> Result<Self> {
        if names.len() != parities.len() {
            return Err(Error::InvalidSpace(format!(
                "{} basis names but {} parities",
                names.len(),
                parities.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidSpace(format!("duplicate basis name {n:?}")));
            }
        }
        Ok(GradedSpace { names, parities })
    }

    /// Space of dimension `even|odd` with basis `e1, e2, ...`, even elements first.
    pub fn with_dims(even: usize, odd: usize) -> Self {
        let names = (1..=even + odd).map(|i| format!("e{i}")).collect();
        let parities = std::iter::repeat_n(Parity::Even, even)
            .chain(std::iter::repeat_n(Parity::Odd, odd))
            .collect();
        GradedSpace { names, parities }
    }

    /// Same as [`GradedSpace::with_dims`] but with a custom basis prefix (`f1, f2, ...`).
    pub fn with_prefix(prefix: &str, even: usize, odd: usize) -> Self {
        let mut s = GradedSpace::with_dims(even, odd);
        s.names = (1..=even + odd).map(|i| format!("{prefix}{i}")).collect();
        s
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn parity(&self, index: usize) -> Parity {
        self.parities[index]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parities
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn even_dim(&self) -> usize {
        self.parities.iter().filter(|p| !p.is_odd()).count()
    }

    pub fn odd_dim(&self) -> usize {
        self.dim() - self.even_dim()
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.dim() {
            return Err(Error::InvalidBasisIndex {
                index,
                dim: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.even_dim(), self.odd_dim())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    M,
    W,
}

/// `V = M ⊕ W` where `M` is the ideal and `W` the quotient algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplitSpace {
    space: Arc<GradedSpace>,
    sides: Vec<Side>,
}

impl SplitSpace {
    pub fn new(space: Arc<GradedSpace>, sides: Vec<Side>) -> Result<Self> {
        if sides.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: sides.len(),
            });
        }
        Ok(SplitSpace { space, sides })
    }

    /// Split where the listed indices span `M` and everything else is `W`.
    pub fn with_ideal(space: Arc<GradedSpace>, m_indices: &[usize]) -> Result<Self> {
        for &i in m_indices {
            space.check_index(i)?;
        }
        let sides = (0..space.dim())
            .map(|i| {
                if m_indices.contains(&i) {
                    Side::M
                } else {
                    Side::W
                }
            })
            .collect();
        SplitSpace::new(space, sides)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn side(&self, index: usize) -> Side {
        self.sides[index]
    }

    pub fn sides(&self) -> &[Side] {
        &self.sides
    }

    pub fn indices(&self, side: Side) -> Vec<usize> {
        (0..self.sides.len())
            .filter(|&i| self.sides[i] == side)
            .collect()
    }
}

/// Bidegree of a basis coderivation relative to a split: how many inputs come
/// from `M` and from `W`, and where the output lands.
///
/// `target = M` gives the spaces `C^{k,l}`; `target = W` with no `M` inputs
/// gives `C^l`; anything else would map part of the ideal out of `M`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub m_inputs: usize,
    pub w_inputs: usize,
    pub target: Side,
}

impl Bidegree {
    /// `C^{k,l} = Hom(T^{k,l}(M, W), M)`.
    pub fn mixed(k: usize, l: usize) -> Self {
        Bidegree {
            m_inputs: k,
            w_inputs: l,
            target: Side::M,
        }
    }

    /// `C^l = Hom(T^l(W), W)`.
    pub fn base(l: usize) -> Self {
        Bidegree {
            m_inputs: 0,
            w_inputs: l,
            target: Side::W,
        }
    }

    pub fn arity(&self) -> usize {
        self.m_inputs + self.w_inputs
    }

    pub fn is_mixed(&self) -> bool {
        self.target == Side::M
    }

    pub fn is_base(&self) -> bool {
        self.target == Side::W && self.m_inputs == 0
    }

    pub fn is_ideal_violating(&self) -> bool {
        self.target == Side::W && self.m_inputs > 0
    }

    /// Moves a mixed bidegree by `(dk, dl)`; `None` when an index goes negative.
    /// Base bidegrees only move along `l` and only when `dk == 0`.
    pub fn shifted(&self, dk: isize, dl: isize) -> Option<Bidegree> {
        let k = self.m_inputs as isize + dk;
        let l = self.w_inputs as isize + dl;
        if k < 0 || l < 0 || k + l < 1 {
            return None;
        }
        match self.target {
            Side::M => Some(Bidegree::mixed(k as usize, l as usize)),
            Side::W if self.m_inputs == 0 && dk == 0 => Some(Bidegree::base(l as usize)),
            Side::W => None,
        }
    }
}

/// Bidegree containing `[x, y]` for `x` and `y` of the given bidegrees, by the
/// grading rules for the bracket. `None` when the bracket always vanishes or
/// one side maps part of `M` into `W`.
pub fn bracket_bidegree(x: Bidegree, y: Bidegree) -> Option<Bidegree> {
    if x.is_ideal_violating() || y.is_ideal_violating() {
        return None;
    }
    let n = x.arity() + y.arity() - 1;
    match (x.is_mixed(), y.is_mixed()) {
        (true, true) => {
            let k = (x.m_inputs + y.m_inputs).checked_sub(1)?;
            Some(Bidegree::mixed(k, n - k))
        }
        (false, false) => Some(Bidegree::base(n)),
        (true, false) => Some(Bidegree::mixed(x.m_inputs, n - x.m_inputs)),
        (false, true) => Some(Bidegree::mixed(y.m_inputs, n - y.m_inputs)),
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_mixed() {
            write!(f, "C^{{{},{}}}", self.m_inputs, self.w_inputs)
        } else if self.is_base() {
            write!(f, "C^{}", self.w_inputs)
        } else {
            write!(
                f,
                "Hom(T^{{{},{}}}, W) (ideal-violating)",
                self.m_inputs, self.w_inputs
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_arithmetic() {
        assert_eq!(Parity::Odd + Parity::Odd, Parity::Even);
        assert_eq!(Parity::Odd + Parity::Even, Parity::Odd);
        assert_eq!(Parity::Odd.koszul_sign(Parity::Odd), -1);
        assert_eq!(Parity::Even.koszul_sign(Parity::Odd), 1);
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = GradedSpace::new(vec!["a".into(), "a".into()], vec![Parity::Odd, Parity::Odd]);
        assert!(err.is_err());
    }

    #[test]
    fn shifts() {
        assert_eq!(
            Bidegree::mixed(0, 2).shifted(1, 0),
            Some(Bidegree::mixed(1, 2))
        );
        assert_eq!(Bidegree::mixed(0, 2).shifted(-1, 2), None);
        assert_eq!(Bidegree::base(2).shifted(0, 1), Some(Bidegree::base(3)));
        assert_eq!(Bidegree::base(2).shifted(1, 0), None);
        assert_eq!(Bidegree::mixed(1, 0).shifted(-1, 0), None);
    }

    #[test]
    fn bracket_grading_rules() {
        let m = Bidegree::mixed;
        let b = Bidegree::base;
        assert_eq!(bracket_bidegree(m(2, 0), m(0, 1)), Some(m(1, 1)));
        assert_eq!(bracket_bidegree(m(1, 1), m(1, 1)), Some(m(1, 2)));
        assert_eq!(bracket_bidegree(m(0, 2), m(0, 2)), None);
        assert_eq!(bracket_bidegree(b(2), b(2)), Some(b(3)));
        assert_eq!(bracket_bidegree(b(2), m(0, 2)), Some(m(0, 3)));
        assert_eq!(bracket_bidegree(m(1, 1), b(1)), Some(m(1, 1)));
    }
}
