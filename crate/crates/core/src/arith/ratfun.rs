use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{One, Signed, Zero};

use super::{Poly, Rational, Valuation};
use crate::error::{Error, Result};

/// Exact rational function in `t` over the rationals.
///
/// Stored as `num / den` with `gcd(num, den) = 1` and `den` monic, so two
/// values are equal iff their fields are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: Poly::one(), den: Poly::one() }
    }

    pub fn t() -> Self {
        RatFun::t_pow(1)
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(k: i64) -> Self {
        let m = Poly::monomial(Rational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            RatFun { num: m, den: Poly::one() }
        } else {
            RatFun { num: Poly::one(), den: m }
        }
    }

    pub fn from_int(v: i64) -> Self {
        RatFun::from_rational(Rational::from_integer(v.into()))
    }

    pub fn from_rational(c: Rational) -> Self {
        RatFun { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFun::zero();
        }
        if den.is_constant() {
            let inv = den.leading().recip();
            return RatFun { num: num.scale(&inv), den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let inv = den.leading().recip();
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    /// Constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    pub fn tval(&self) -> Valuation {
        match self.num.order() {
            None => Valuation::Inf,
            Some(a) => Valuation::Fin(a as i64 - self.den.order().unwrap_or(0) as i64),
        }
    }

    /// Value at `t = 0`.
    pub fn residue(&self) -> Result<Rational> {
        match self.tval() {
            Valuation::Inf => Ok(Rational::zero()),
            Valuation::Fin(v) if v < 0 => Err(Error::NegativeValuation(v)),
            Valuation::Fin(_) => Ok(self.num.coeff(0) / self.den.coeff(0)),
        }
    }

    pub fn recip(&self) -> Option<RatFun> {
        if self.is_zero() {
            return None;
        }
        let c = self.num.leading().recip();
        Some(RatFun { num: self.den.scale(&c), den: self.num.scale(&c) })
    }

    pub fn pow(&self, k: i64) -> Option<RatFun> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = RatFun::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Some(acc)
    }

    /// Laurent coefficients `c_e` for `tval <= e < k`, as the finite sum
    /// `sum c_e t^e`. The difference `self - result` has `tval >= k`.
    pub fn truncate_below(&self, k: i64) -> RatFun {
        let v = match self.tval() {
            Valuation::Inf => return RatFun::zero(),
            Valuation::Fin(v) => v,
        };
        if v >= k {
            return RatFun::zero();
        }
        let a = self.num.order().unwrap();
        let b = self.den.order().unwrap_or(0);
        let n1 = self.num.shift_down(a);
        let d1 = self.den.shift_down(b);
        let terms = (k - v) as usize;
        let d0_inv = d1.coeff(0).recip();
        let mut s: Vec<Rational> = Vec::with_capacity(terms);
        for j in 0..terms {
            let mut acc = n1.coeff(j);
            for i in 1..=j {
                let di = d1.coeff(i);
                if !di.is_zero() {
                    acc -= di * &s[j - i];
                }
            }
            s.push(acc * &d0_inv);
        }
        let series = RatFun::from_poly(Poly::from_coeffs(s));
        &series * &RatFun::t_pow(v)
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFun {
    fn one() -> Self {
        RatFun::one()
    }
}

impl<'a> Add<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn add(self, o: &RatFun) -> RatFun {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return RatFun { num: self.num.add(&o.num), den: Poly::one() };
            }
            return RatFun::reduce(self.num.add(&o.num), self.den.clone());
        }
        // a/b + c/d over lcm(b, d); only the common factor g can cancel
        let g = Poly::gcd(&self.den, &o.den);
        if g.is_one() {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return RatFun { num, den: self.den.mul(&o.den) };
        }
        let b1 = self.den.div_rem(&g).0;
        let d1 = o.den.div_rem(&g).0;
        let num = self.num.mul(&d1).add(&o.num.mul(&b1));
        if num.is_zero() {
            return RatFun::zero();
        }
        let h = Poly::gcd(&num, &g);
        let (num, g) = if h.is_one() { (num, g) } else { (num.div_rem(&h).0, g.div_rem(&h).0) };
        let den = b1.mul(&d1).mul(&g);
        let inv = den.leading().recip();
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl<'a> Sub<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn sub(self, o: &RatFun) -> RatFun {
        self + &(-o)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }
}

impl<'a> Mul<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn mul(self, o: &RatFun) -> RatFun {
        if self.is_zero() || o.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFun { num: self.num.mul(&o.num), den: Poly::one() };
        }
        // cross-cancel so the product stays reduced
        let g1 = Poly::gcd(&self.num, &o.den);
        let g2 = Poly::gcd(&o.num, &self.den);
        let a = self.num.div_rem(&g1).0;
        let d = o.den.div_rem(&g1).0;
        let c = o.num.div_rem(&g2).0;
        let b = self.den.div_rem(&g2).0;
        let num = a.mul(&c);
        let den = b.mul(&d);
        let inv = den.leading().recip();
        RatFun { num: num.scale(&inv), den: den.scale(&inv) }
    }
}

impl<'a> Div<&'a RatFun> for &'a RatFun {
    type Output = RatFun;
    fn div(self, o: &RatFun) -> RatFun {
        self * &o.recip().expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFun> for RatFun {
            type Output = RatFun;
            fn $m(self, o: RatFun) -> RatFun {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = if out.is_empty() { c.clone() } else { c.abs() };
        if !out.is_empty() {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&fmt_rational(&mag));
        match k {
            0 => {}
            1 => out.push_str("*t"),
            _ => out.push_str(&format!("*t^{k}")),
        }
    }
    out
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", fmt_poly(&self.num))
        } else {
            write!(f, "({})/({})", fmt_poly(&self.num), fmt_poly(&self.den))
        }
    }
}

/// Printer for rationals in the input grammar.
pub fn format_rational(c: &Rational) -> String {
    fmt_rational(c)
}
