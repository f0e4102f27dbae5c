//! Dense univariate polynomials in `t`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Coefficient;

/// Polynomial with coefficients indexed by degree. The zero polynomial has
/// no coefficients; otherwise the highest coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> Polynomial<C> {
    pub fn new(coeffs: Vec<C>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn identity() -> Self {
        Self::new(vec![C::zero(), C::one()])
    }

    /// `c·t^k`.
    pub fn monomial(c: C, k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `t − r`.
    pub fn linear_factor(r: C) -> Self {
        Self::new(vec![-r, C::one()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    /// Largest coefficient modulus.
    pub fn scale_hint(&self) -> f64 {
        self.coeffs
            .iter()
            .map(Coefficient::magnitude)
            .fold(0.0, f64::max)
    }

    fn trim(&mut self) {
        let scale = self.scale_hint();
        while let Some(last) = self.coeffs.last() {
            if last.is_zero() || last.negligible(scale) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn eval(&self, x: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * C::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Divide by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lead) => {
                let inv = C::one() / lead.clone();
                let mut p = self.scale(&inv);
                if let Some(last) = p.coeffs.last_mut() {
                    *last = C::one();
                }
                p
            }
        }
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    ///
    /// Panics when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![C::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            rem[k + dd] = C::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        // remainder trimming is relative to the dividend, not to what is left
        let scale = self.scale_hint();
        while let Some(last) = rem.last() {
            if last.is_zero() || last.negligible(scale) {
                rem.pop();
            } else {
                break;
            }
        }
        (Self::new(quot), Self { coeffs: rem })
    }

    /// Coefficients of `p(a + x)` as a polynomial in `x`.
    pub fn taylor_shift(&self, a: &C) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let next = c[j + 1].clone();
                c[j] = c[j].clone() + a.clone() * next;
            }
        }
        // no trimming: the leading coefficient is unchanged by a shift
        Self { coeffs: c }
    }

    /// Coefficients reversed: `t^d · p(1/t)` for `d = deg p`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }
}

impl<C: Coefficient> Add for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn add(self, rhs: Self) -> Polynomial<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<C: Coefficient> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn sub(self, rhs: Self) -> Polynomial<C> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<C: Coefficient> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn mul(self, rhs: Self) -> Polynomial<C> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<C: Coefficient> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;
    fn neg(self) -> Polynomial<C> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cx, ExactComplex};
    use num_complex::Complex64;

    type P = Polynomial<Complex64>;

    fn p(c: &[f64]) -> P {
        P::new(c.iter().map(|&x| cx(x, 0.0)).collect())
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(p(&[1.0, 2.0, 0.0, 0.0]).degree(), Some(1));
        assert!(p(&[0.0]).is_zero());
        assert_eq!(P::zero().degree(), None);
    }

    #[test]
    fn div_rem_recovers_dividend() {
        let a = p(&[-1.0, 0.0, 0.0, 1.0]);
        let b = p(&[-1.0, 1.0]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[1.0, 1.0, 1.0]));
        assert!(r.is_zero());
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let a = p(&[3.0, -2.0, 5.0, 1.0]);
        let s = cx(0.7, -0.2);
        let shifted = a.taylor_shift(&s);
        let x = cx(0.3, 0.1);
        let lhs = shifted.eval(&x);
        let rhs = a.eval(&(s + x));
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn derivative_of_cube() {
        assert_eq!(p(&[0.0, 0.0, 0.0, 1.0]).derivative(), p(&[0.0, 0.0, 3.0]));
        assert!(p(&[4.0]).derivative().is_zero());
    }

    #[test]
    fn exact_arithmetic_cancels_exactly() {
        let t = Polynomial::<ExactComplex>::identity();
        let one = Polynomial::<ExactComplex>::one();
        let a = &(&t - &one) * &(&t + &one);
        let b = &(&t * &t) - &one;
        assert!((&a - &b).is_zero());
    }
}
