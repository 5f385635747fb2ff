use std::fmt;
use std::ops::Add;

use num::{One, Zero};

use super::{format_rational, RatFun, Rational};
use crate::error::Result;

/// Order of vanishing; `Inf` belongs to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Fin(i64),
    Inf,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Fin(v) => Some(v),
            Valuation::Inf => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, o: Valuation) -> Valuation {
        match (self, o) {
            (Valuation::Fin(a), Valuation::Fin(b)) => Valuation::Fin(a + b),
            _ => Valuation::Inf,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Fin(v) => write!(f, "{v}"),
            Valuation::Inf => write!(f, "inf"),
        }
    }
}

/// Field operations needed by the dense matrix code.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    /// Text in the input grammar.
    fn to_text(&self) -> String;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn divide(&self, o: &Self) -> Option<Self> {
        o.inverse().map(|i| self.times(&i))
    }
}

/// A scalar type viewed as the fraction field of a local ring.
///
/// For rational functions the ring is `A`, the functions regular at `t = 0`.
/// For rationals it is the field itself, seen as a single point.
pub trait Local: Scalar {
    /// Whether the spectrum has a generic point distinct from the closed one.
    const HAS_GENERIC_POINT: bool;

    fn order(&self) -> Valuation;
    fn residue(&self) -> Result<Rational>;
    /// Lift a residue-field element back into the ring.
    fn lift(c: &Rational) -> Self;

    fn is_unit(&self) -> bool {
        self.order() == Valuation::Fin(0)
    }

    fn is_integral(&self) -> bool {
        self.order() >= Valuation::Fin(0)
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn to_text(&self) -> String {
        format_rational(self)
    }
}

impl Local for Rational {
    const HAS_GENERIC_POINT: bool = false;

    fn order(&self) -> Valuation {
        if Zero::is_zero(self) {
            Valuation::Inf
        } else {
            Valuation::Fin(0)
        }
    }
    fn residue(&self) -> Result<Rational> {
        Ok(self.clone())
    }
    fn lift(c: &Rational) -> Self {
        c.clone()
    }
}

impl Scalar for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.recip()
    }
    fn from_i64(v: i64) -> Self {
        RatFun::from_int(v)
    }
    fn to_text(&self) -> String {
        self.to_string()
    }
    fn is_one(&self) -> bool {
        RatFun::is_one(self)
    }
}

impl Local for RatFun {
    const HAS_GENERIC_POINT: bool = true;

    fn order(&self) -> Valuation {
        self.tval()
    }
    fn residue(&self) -> Result<Rational> {
        RatFun::residue(self)
    }
    fn lift(c: &Rational) -> Self {
        RatFun::from_rational(c.clone())
    }
}
