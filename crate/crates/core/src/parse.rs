//! Text syntax for operators, rational functions and constants.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := number | 't' | 'D' | 'i' | '(' expr ')'
//! ```
//!
//! `D` is `d/dt`, `*` is operator composition (ordinary multiplication on
//! functions), and a divisor must be a nonzero function. Numbers are exact
//! decimals, so `0.25` and `1/4` are the same value.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::operator::DifferentialOperator;
use crate::rational::RationalFunction;
use crate::scalar::{Coefficient, ExactComplex, Real};
use crate::singular::Operator;

type Op = DifferentialOperator<ExactComplex>;
type Rf = RationalFunction<ExactComplex>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    T,
    D,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                out.push((start, Tok::Num(decimal(&src[start..i], start)?)));
                continue;
            }
            't' => Tok::T,
            'D' => Tok::D,
            'i' | 'I' => Tok::I,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(Error::Parse {
                    offset: start,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        i += 1;
        out.push((start, tok));
    }
    Ok(out)
}

fn decimal(s: &str, offset: usize) -> Result<BigRational> {
    let bad = || Error::Parse {
        offset,
        message: format!("malformed number '{s}'"),
    };
    let (int, frac) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(n, d))
}

/// Parser values: `None` is the zero operator.
type Value = Option<Op>;

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn real(q: BigRational) -> ExactComplex {
    Complex::new(q, BigRational::zero())
}

fn constant(c: ExactComplex) -> Value {
    if c.is_zero() {
        None
    } else {
        Some(Op::multiplication(Rf::constant(c)).expect("nonzero"))
    }
}

fn add(a: Value, b: Value) -> Value {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => a.add(&b),
    }
}

fn neg(a: Value) -> Value {
    a.map(|a| a.neg())
}

fn compose(a: &Value, b: &Value) -> Value {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.compose(b)),
        _ => None,
    }
}

fn as_function(v: &Value) -> Option<Rf> {
    match v {
        None => Some(Rf::zero()),
        Some(op) if op.order() == 0 => Some(op.coeff(0)),
        Some(_) => None,
    }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = add(acc, self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = add(acc, neg(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = compose(&acc, &rhs);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.offset();
                    let rhs = self.unary()?;
                    let Some(f) = as_function(&rhs) else {
                        return Err(Error::Parse {
                            offset: at,
                            message: "divisor must be a function of t, not an operator".into(),
                        });
                    };
                    let inv = f.recip().map_err(|_| Error::Parse {
                        offset: at,
                        message: "division by zero".into(),
                    })?;
                    acc = match acc {
                        None => None,
                        Some(op) => Some(op.scale_left(&inv)?),
                    };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(neg(self.unary()?))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let exp = match self.peek() {
            Some(Tok::Num(q)) if q.is_integer() => q.to_integer(),
            _ => return self.err("exponent must be an integer"),
        };
        let exp: u32 = match u32::try_from(exp) {
            Ok(e) if e <= 64 => e,
            _ => return self.err("exponent out of range"),
        };
        self.pos += 1;
        let base = if negative {
            let Some(f) = as_function(&base) else {
                return self.err("negative powers apply to functions only");
            };
            match f.recip() {
                Ok(inv) => Some(Op::multiplication(inv)?),
                Err(_) => return self.err("zero raised to a negative power"),
            }
        } else {
            base
        };
        let mut acc = constant(Complex::one());
        for _ in 0..exp {
            acc = compose(&acc, &base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value> {
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Num(q) => Ok(constant(real(q))),
            Tok::I => Ok(constant(Complex::new(BigRational::zero(), BigRational::one()))),
            Tok::T => Ok(Some(Op::multiplication(Rf::identity())?)),
            Tok::D => Ok(Some(Op::derivation())),
            Tok::LParen => {
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(v)
            }
            _ => {
                self.pos -= 1;
                self.err("expected a number, 't', 'D', 'i' or '('")
            }
        }
    }
}

fn parse_value(src: &str) -> Result<Value> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(v)
}

/// Parse an operator expression such as `t*(1-t)*D^2 + (1-2*t)*D - 1/4`.
pub fn parse_operator(src: &str) -> Result<Op> {
    parse_value(src)?.ok_or(Error::AllCoefficientsZero)
}

/// Parse a rational function of `t`; the zero function is allowed.
pub fn parse_rational(src: &str) -> Result<Rf> {
    as_function(&parse_value(src)?).ok_or(Error::Parse {
        offset: 0,
        message: "expected a function of t, found an operator".into(),
    })
}

/// Parse a complex constant such as `1/2 + i`.
pub fn parse_constant(src: &str) -> Result<ExactComplex> {
    let f = parse_rational(src)?;
    f.as_constant().ok_or(Error::Parse {
        offset: 0,
        message: "expected a constant".into(),
    })
}

/// [`parse_operator`] followed by conversion to floating coefficients.
pub fn parse_operator_as<T: Real>(src: &str) -> Result<Operator<T>> {
    Ok(parse_operator(src)?.map(Complex::<T>::from_exact))
}

/// [`parse_rational`] followed by conversion to floating coefficients.
pub fn parse_rational_as<T: Real>(src: &str) -> Result<RationalFunction<Complex<T>>> {
    Ok(parse_rational(src)?.map(Complex::<T>::from_exact))
}

/// [`parse_constant`] followed by conversion to floating point.
pub fn parse_constant_as<T: Real>(src: &str) -> Result<Complex<T>> {
    Ok(Complex::<T>::from_exact(&parse_constant(src)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::scalar::Coefficient;

    fn q(n: i64, d: i64) -> ExactComplex {
        real(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn legendre_operator() {
        let op = parse_operator("t*(1-t)*D^2 + (1-2*t)*D - 1/4").unwrap();
        assert_eq!(op.order(), 2);
        let t = Rf::identity();
        let one = Rf::one();
        assert_eq!(op.coeff(2), &t * &(&one - &t));
        assert_eq!(op.coeff(1), &one - &(&t * &Rf::constant(q(2, 1))));
        assert_eq!(op.coeff(0), Rf::constant(q(-1, 4)));
    }

    #[test]
    fn composition_follows_leibniz() {
        // D*t = t D + 1
        let op = parse_operator("D*t").unwrap();
        assert_eq!(op.coeff(1), Rf::identity());
        assert_eq!(op.coeff(0), Rf::one());
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_constant("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_constant("1/4").unwrap(), q(1, 4));
        assert_eq!(
            parse_constant("1/2 + i").unwrap(),
            Complex::new(BigRational::new(1.into(), 2.into()), BigRational::one())
        );
    }

    #[test]
    fn rational_functions() {
        let f = parse_rational("1/t").unwrap();
        assert_eq!(f.denominator(), &Polynomial::identity());
        let g = parse_rational("t^-2 * t^2").unwrap();
        assert_eq!(g, Rf::one());
        assert!(parse_rational("t - t").unwrap().is_zero());
        assert_eq!(parse_rational("2*t").unwrap(), Rf::identity().scale(&ExactComplex::from_int(2)));
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(parse_operator("t + $"), Err(Error::Parse { offset: 4, .. })));
        assert!(matches!(parse_operator("D/D"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("(t + 1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("1/(t-t)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_rational("D"), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("t - t"), Err(Error::AllCoefficientsZero)));
        assert!(matches!(parse_operator("1..2"), Err(Error::Parse { .. })));
    }
}
