//! Rational functions in `t` kept in canonical form: common factors removed
//! and a monic denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::Coefficient;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<C> {
    num: Polynomial<C>,
    den: Polynomial<C>,
}

impl<C: Coefficient> RationalFunction<C> {
    pub fn new(num: Polynomial<C>, den: Polynomial<C>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Polynomial<C>, den: Polynomial<C>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = C::poly_gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let lead = den.leading().cloned().expect("nonzero denominator");
        let inv = C::one() / lead;
        Self {
            num: num.scale(&inv),
            den: den.monic(),
        }
    }

    pub fn zero() -> Self {
        Self {
            num: Polynomial::zero(),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(p: Polynomial<C>) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    /// The function `t`.
    pub fn identity() -> Self {
        Self::from_poly(Polynomial::identity())
    }

    pub fn numerator(&self) -> &Polynomial<C> {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial<C> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<C> {
        if self.is_polynomial() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn eval(&self, x: &C) -> Result<C> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(format!("{x:?}")));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.den * &self.den;
        Self::canonical(n, d)
    }

    /// Multiplicative inverse.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        Ok(Self::canonical(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::canonical(self.num.scale(c), self.den.clone())
    }

    /// Logarithmic derivative `g′/g`.
    pub fn dlog(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroFunction);
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let d = &self.num * &self.den;
        Ok(Self::canonical(n, d))
    }

    /// `f(1/s)` as a rational function of `s`.
    pub fn invert_variable(&self) -> Self {
        // num(1/s)/den(1/s) = s^(dd - dn) · rev(num)/rev(den)
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let mut n = self.num.reversed();
        let mut d = self.den.reversed();
        if dd >= dn {
            n = &n * &Polynomial::monomial(C::one(), dd - dn);
        } else {
            d = &d * &Polynomial::monomial(C::one(), dn - dd);
        }
        Self::canonical(n, d)
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> RationalFunction<D> {
        RationalFunction::canonical(self.num.map(&f), self.den.map(&f))
    }
}

impl<C: Coefficient> Add for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn add(self, rhs: Self) -> RationalFunction<C> {
        if self.den == rhs.den {
            return RationalFunction::canonical(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::canonical(n, &self.den * &rhs.den)
    }
}

impl<C: Coefficient> Sub for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn sub(self, rhs: Self) -> RationalFunction<C> {
        self + &(-rhs)
    }
}

impl<C: Coefficient> Mul for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn mul(self, rhs: Self) -> RationalFunction<C> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::canonical(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<C: Coefficient> Neg for &RationalFunction<C> {
    type Output = RationalFunction<C>;
    fn neg(self) -> RationalFunction<C> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}]/[{}]", self.num, self.den)
        }
    }
}
