//! Linear differential operators `Σ p_i (d/dt)^i` with rational coefficients.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::rational::RationalFunction;
use crate::scalar::Coefficient;

#[derive(Clone, Debug, PartialEq)]
pub struct DifferentialOperator<C> {
    coeffs: Vec<RationalFunction<C>>,
}

impl<C: Coefficient> DifferentialOperator<C> {
    /// Operator from coefficients `[p_0, …, p_n]`; trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<RationalFunction<C>>) -> Result<Self> {
        while coeffs.last().is_some_and(RationalFunction::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::AllCoefficientsZero);
        }
        Ok(Self { coeffs })
    }

    /// `d/dt`.
    pub fn derivation() -> Self {
        Self {
            coeffs: vec![RationalFunction::zero(), RationalFunction::one()],
        }
    }

    /// Multiplication by `f`, an order-0 operator. `f` must be nonzero.
    pub fn multiplication(f: RationalFunction<C>) -> Result<Self> {
        Self::new(vec![f])
    }

    pub fn coeffs(&self) -> &[RationalFunction<C>] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RationalFunction<C> {
        self.coeffs.get(i).cloned().unwrap_or_else(RationalFunction::zero)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &RationalFunction<C> {
        self.coeffs.last().expect("operators are nonempty")
    }

    pub fn require_order(&self, required: usize) -> Result<()> {
        if self.order() < required {
            return Err(Error::OrderTooLow {
                order: self.order(),
                required,
            });
        }
        Ok(())
    }

    /// Operator sum; `None` when the sum vanishes identically.
    pub fn add(&self, rhs: &Self) -> Option<Self> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect()).ok()
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Left multiplication by a rational function.
    pub fn scale_left(&self, f: &RationalFunction<C>) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|c| f * c).collect())
    }

    /// Operator product `self ∘ rhs` under `(d/dt)∘a = a·(d/dt) + a′`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let n = self.order() + rhs.order();
        let mut out = vec![RationalFunction::zero(); n + 1];
        // derivatives of rhs coefficients, computed once per order needed
        let mut derivs: Vec<Vec<RationalFunction<C>>> = rhs
            .coeffs
            .iter()
            .map(|b| vec![b.clone()])
            .collect();
        for ds in derivs.iter_mut() {
            for _ in 0..self.order() {
                let next = ds.last().unwrap().derivative();
                ds.push(next);
            }
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, binom) in binomials(i).into_iter().enumerate() {
                let factor = a.scale(&C::from_int(binom));
                for (j, ds) in derivs.iter().enumerate() {
                    let bk = &ds[k];
                    if bk.is_zero() {
                        continue;
                    }
                    let idx = i - k + j;
                    out[idx] = &out[idx] + &(&factor * bk);
                }
            }
        }
        Self::new(out).expect("composition of nonzero operators is nonzero")
    }

    /// Apply the operator to a rational function.
    pub fn apply(&self, f: &RationalFunction<C>) -> RationalFunction<C> {
        let mut acc = RationalFunction::zero();
        let mut d = f.clone();
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                d = d.derivative();
            }
            acc = &acc + &(p * &d);
        }
        acc
    }

    /// Coordinate change `s = 1/t`; the result acts on functions of `s` and is
    /// normalized, so it is defined up to a rational unit.
    pub fn pullback_to_infinity(&self) -> Result<Self> {
        self.require_order(1)?;
        // d/dt = −s² d/ds
        let s2 = RationalFunction::from_poly(Polynomial::monomial(-C::one(), 2));
        let dt = Self {
            coeffs: vec![RationalFunction::zero(), s2],
        };
        let mut power = Self {
            coeffs: vec![RationalFunction::one()],
        };
        let mut acc: Option<Self> = None;
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = dt.compose(&power);
            }
            if p.is_zero() {
                continue;
            }
            let term = power.scale_left(&p.invert_variable())?;
            acc = match acc {
                None => Some(term),
                Some(a) => a.add(&term),
            };
        }
        normalize(acc.ok_or(Error::AllCoefficientsZero)?.coeffs)
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> DifferentialOperator<D> {
        DifferentialOperator {
            coeffs: self.coeffs.iter().map(|c| c.map(&f)).collect(),
        }
    }
}

fn binomials(n: usize) -> Vec<i64> {
    let mut row = vec![1i64];
    for k in 0..n {
        let next = row[k] * (n - k) as i64 / (k as i64 + 1);
        row.push(next);
    }
    row
}

/// Canonical operator from raw coefficients: denominators cleared and, when
/// at least two coefficients are nonzero, the monic polynomial content divided out.
pub fn normalize<C: Coefficient>(raw: Vec<RationalFunction<C>>) -> Result<DifferentialOperator<C>> {
    let op = DifferentialOperator::new(raw)?;
    let nonzero: Vec<&RationalFunction<C>> = op.coeffs.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.len() < 2 {
        return Ok(op);
    }
    let mut lcm = Polynomial::one();
    for c in &nonzero {
        let d = c.denominator();
        if d.is_constant() {
            continue;
        }
        let g = C::poly_gcd(&lcm, d);
        lcm = (&lcm * d).div_rem(&g).0;
    }
    let cleared: Vec<Polynomial<C>> = op
        .coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                Polynomial::zero()
            } else {
                (&lcm * c.numerator()).div_rem(c.denominator()).0
            }
        })
        .collect();
    let mut content: Option<Polynomial<C>> = None;
    for p in cleared.iter().filter(|p| !p.is_zero()) {
        content = Some(match content {
            None => p.monic(),
            Some(g) => C::poly_gcd(&g, p),
        });
    }
    let content = content.unwrap_or_else(Polynomial::one);
    let coeffs = cleared
        .into_iter()
        .map(|p| {
            let q = if content.is_constant() { p } else { p.div_rem(&content).0 };
            RationalFunction::from_poly(q)
        })
        .collect();
    DifferentialOperator::new(coeffs)
}

impl<C: Coefficient + fmt::Display> fmt::Display for DifferentialOperator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*D")?,
                _ => write!(f, "{c}*D^{i}")?,
            }
        }
        Ok(())
    }
}
