use std::fmt;

use crate::coalgebra::bracket::br;
use crate::coalgebra::Cochain;

/// `a + t·b` with `t² = 0`, coefficients in cochains. Brackets are exact and
/// drop everything of order `t²`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrder {
    pub constant: Cochain,
    pub linear: Cochain,
}

impl FirstOrder {
    pub fn new(constant: Cochain, linear: Cochain) -> Self {
        FirstOrder { constant, linear }
    }

    pub fn constant(c: Cochain) -> Self {
        let z = Cochain::zero(c.space());
        FirstOrder::new(c, z)
    }

    /// `[a + tb, c + td] = [a,c] + t([a,d] + [b,c])`.
    pub fn bracket(&self, other: &FirstOrder) -> FirstOrder {
        FirstOrder {
            constant: br(&self.constant, &other.constant),
            linear: &br(&self.constant, &other.linear) + &br(&self.linear, &other.constant),
        }
    }

    pub fn square(&self) -> FirstOrder {
        self.bracket(self)
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_zero()
    }
}

impl fmt::Display for FirstOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + t({})", self.constant, self.linear)
    }
}
