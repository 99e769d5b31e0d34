//! Exact arithmetic in ℚ(t) ⊂ ℂ((t)) with the t-adic valuation.
//!
//! Elements are stored as a reduced fraction of integer polynomials. The
//! canonical form makes equality syntactic: the joint content of numerator
//! and denominator is 1 and the lowest-degree coefficient of the denominator
//! is positive.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Largest exponent magnitude accepted by the parser.
pub const MAX_EXPONENT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero at position {0}")]
    ZeroDivisorAt(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot reduce an element of valuation {0} at t = 0")]
    NegativeValuation(i64),
}

/// Integer polynomial in t, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// c·t^k
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Poly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn lead(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Lowest nonzero coefficient.
    pub fn trailing(&self) -> Option<&BigInt> {
        self.order().map(|k| &self.coeffs[k])
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Nonnegative gcd of all coefficients; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides every coefficient by `c`, which must divide all of them.
    fn div_scalar_exact(&self, c: &BigInt) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .map(|a| {
                    debug_assert!((a % c).is_zero());
                    a / c
                })
                .collect(),
        )
    }

    /// Divides by t^k; the k lowest coefficients must be zero.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        Poly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut p = self.div_scalar_exact(&self.content());
        if p.lead().is_some_and(Signed::is_negative) {
            p = -p;
        }
        p
    }

    /// r = lead(b)^e · a mod b, computed without leaving ℤ[t].
    fn pseudo_rem(a: &Poly, b: &Poly) -> Poly {
        let db = b.degree().expect("pseudo_rem by zero polynomial");
        let lb = b.lead().unwrap().clone();
        let mut r = a.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lead().unwrap().clone();
            r = &r.scale(&lb) - &(b * &Poly::monomial(lr, dr - db));
        }
        r
    }

    /// Primitive gcd with positive leading coefficient (primitive PRS).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.primitive(), b.primitive());
        if x.degree() < y.degree() {
            std::mem::swap(&mut x, &mut y);
        }
        while !y.is_zero() {
            let r = Poly::pseudo_rem(&x, &y).primitive();
            x = y;
            y = r;
        }
        x
    }

    /// Exact quotient a / b in ℤ[t], or `None` if b does not divide a.
    pub fn div_exact(a: &Poly, b: &Poly) -> Option<Poly> {
        let db = b.degree()?;
        let lb = b.lead().unwrap();
        let mut r = a.clone();
        let mut q = vec![BigInt::zero(); a.coeffs.len().saturating_sub(db)];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let (c, rem) = r.lead().unwrap().div_rem(lb);
            if !rem.is_zero() {
                return None;
            }
            q[dr - db] = c.clone();
            r = &r - &(b * &Poly::monomial(c, dr - db));
        }
        Some(Poly::from_coeffs(q))
    }

    pub fn eval_zero(&self) -> BigInt {
        self.coeff(0)
    }

    fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl fmt::Display for Poly {
    /// Ascending order, e.g. `30+6*t`, `1-t`, `-t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{a}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{a}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// t-adic valuation; `Infinity` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// An element of ℚ(t) in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentScalar {
    num: Poly,
    den: Poly,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        LaurentScalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        LaurentScalar::from_int(1)
    }

    pub fn t() -> Self {
        LaurentScalar { num: Poly::monomial(BigInt::one(), 1), den: Poly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        LaurentScalar::from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        LaurentScalar::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        LaurentScalar::from_parts(p, Poly::one()).expect("denominator 1 is nonzero")
    }

    /// a/b for integers a, b with b ≠ 0.
    pub fn from_ratio(a: i64, b: i64) -> Result<Self, FieldError> {
        LaurentScalar::from_parts(Poly::from_i64s(&[a]), Poly::from_i64s(&[b]))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        LaurentScalar::from_parts(Poly::constant(q.numer().clone()), Poly::constant(q.denom().clone()))
            .expect("rational denominators are nonzero")
    }

    /// Canonicalizes num/den.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(LaurentScalar::zero());
        }
        let g = Poly::gcd(&num, &den);
        let mut num = Poly::div_exact(&num, &g).expect("gcd divides numerator");
        let mut den = Poly::div_exact(&den, &g).expect("gcd divides denominator");
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        if den.trailing().is_some_and(Signed::is_negative) {
            num = -num;
            den = -den;
        }
        Ok(LaurentScalar { num, den })
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn val(&self) -> Valuation {
        match (self.num.order(), self.den.order()) {
            (Some(a), Some(b)) => Valuation::Finite(a as i64 - b as i64),
            _ => Valuation::Infinity,
        }
    }

    /// Nonzero with valuation 0.
    pub fn is_unit(&self) -> bool {
        self.val() == Valuation::Finite(0)
    }

    /// Value at t = 0; requires val ≥ 0.
    pub fn reduce_at_zero(&self) -> Result<BigRational, FieldError> {
        match self.val() {
            Valuation::Infinity => Ok(BigRational::zero()),
            Valuation::Finite(v) if v < 0 => Err(FieldError::NegativeValuation(v)),
            Valuation::Finite(_) => {
                // den(0) ≠ 0 whenever val ≥ 0 because num and den are coprime.
                Ok(BigRational::new(self.num.eval_zero(), self.den.eval_zero()))
            }
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        LaurentScalar::from_parts(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        if rhs.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        LaurentScalar::from_parts(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    /// x^k for any integer k; negative k requires x ≠ 0. 0^0 = 1.
    pub fn pow(&self, k: i64) -> Result<Self, FieldError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = LaurentScalar::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn parse(text: &str) -> Result<Self, FieldError> {
        parse_scalar(text)
    }
}

impl Default for LaurentScalar {
    fn default() -> Self {
        LaurentScalar::zero()
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        LaurentScalar::from_parts(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        LaurentScalar::from_parts(num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        LaurentScalar::from_parts(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar { num: -self.num.clone(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for LaurentScalar {
            type Output = LaurentScalar;
            fn $m(self, rhs: LaurentScalar) -> LaurentScalar {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        -&self
    }
}

impl From<i64> for LaurentScalar {
    fn from(c: i64) -> Self {
        LaurentScalar::from_int(c)
    }
}

impl fmt::Display for LaurentScalar {
    /// `t^v * num'/den'` with the t-power extracted, or `num/den` when v = 0.
    /// Multi-term polynomials are parenthesized; a denominator of 1 is omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let a = self.num.order().unwrap();
        let b = self.den.order().unwrap();
        let num = self.num.shift_down(a);
        let den = self.den.shift_down(b);
        let wrap = |p: &Poly| {
            if p.term_count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        let body = if den.is_one() {
            if a == b { num.to_string() } else { wrap(&num) }
        } else {
            format!("{}/{}", wrap(&num), wrap(&den))
        };
        let v = a as i64 - b as i64;
        match v.cmp(&0) {
            Ordering::Equal => write!(f, "{body}"),
            _ => {
                let tp = if v == 1 { "t".to_string() } else { format!("t^{v}") };
                if body == "1" {
                    write!(f, "{tp}")
                } else {
                    write!(f, "{tp} * {body}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    T,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, FieldError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Int(s.parse().expect("digits parse")), start));
                continue;
            }
            't' => Tok::T,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(FieldError::Syntax { pos: i, msg: format!("unexpected character '{c}'") })
            }
        };
        out.push((tok, i));
        i += 1;
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T, FieldError> {
        Err(FieldError::Syntax { pos: self.pos(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<LaurentScalar, FieldError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentScalar, FieldError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    acc = acc.checked_div(&rhs).map_err(|_| FieldError::ZeroDivisorAt(pos))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<LaurentScalar, FieldError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<LaurentScalar, FieldError> {
        let base_pos = self.pos();
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let k = self.exponent()?;
        base.pow(k).map_err(|_| FieldError::ZeroDivisorAt(base_pos))
    }

    fn exponent(&mut self) -> Result<i64, FieldError> {
        let paren = *self.peek() == Tok::LParen;
        if paren {
            self.bump();
        }
        let neg = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let pos = self.pos();
        let k = match self.bump() {
            Tok::Int(n) => n
                .to_i64()
                .filter(|k| *k <= MAX_EXPONENT)
                .ok_or(FieldError::Syntax { pos, msg: format!("exponent exceeds {MAX_EXPONENT}") })?,
            _ => return Err(FieldError::Syntax { pos, msg: "expected integer exponent".into() }),
        };
        if paren && self.bump() != Tok::RParen {
            return Err(FieldError::Syntax { pos: self.toks[self.at - 1].1, msg: "expected ')'".into() });
        }
        Ok(if neg { -k } else { k })
    }

    fn atom(&mut self) -> Result<LaurentScalar, FieldError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(LaurentScalar::from_bigint(n))
            }
            Tok::T => {
                self.bump();
                Ok(LaurentScalar::t())
            }
            Tok::LParen => {
                self.bump();
                let v = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(v)
            }
            Tok::End => self.err("unexpected end of input"),
            _ => self.err("expected a number, 't' or '('"),
        }
    }
}

/// Parses integers, rationals, `t`, `+ - * / ^` and parentheses with the
/// usual precedence. Exponents are integer literals, optionally signed.
pub fn parse_scalar(text: &str) -> Result<LaurentScalar, FieldError> {
    let mut p = Parser { toks: tokenize(text)?, at: 0 };
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> LaurentScalar {
        parse_scalar(text).unwrap()
    }

    #[test]
    fn parse_literals() {
        let x = s("2 + t");
        assert_eq!(x.num(), &Poly::from_i64s(&[2, 1]));
        assert!(x.den().is_one());
        let y = s("(1+t)/(1-t)");
        assert_eq!(y.num(), &Poly::from_i64s(&[1, 1]));
        assert_eq!(y.den(), &Poly::from_i64s(&[1, -1]));
    }

    #[test]
    fn parse_cancels_common_factor() {
        let x = s("t/t^2");
        assert!(x.num().is_one());
        assert_eq!(x.den(), &Poly::from_i64s(&[0, 1]));
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&LaurentScalar::from_int(2) * &s("3+t"), s("6+2*t"));
        assert!(s("t").checked_div(&s("t")).unwrap().is_one());
        assert_eq!(s("1+t").pow(-1).unwrap(), s("1/(1+t)"));
    }

    #[test]
    fn valuations() {
        assert_eq!(s("t^2*(1+t)").val(), Valuation::Finite(2));
        assert_eq!(s("5").val(), Valuation::Finite(0));
        assert_eq!(s("(t+t^2)/t^3").val(), Valuation::Finite(-2));
        assert_eq!(LaurentScalar::zero().val(), Valuation::Infinity);
    }

    #[test]
    fn reductions() {
        let r = |x: &str| s(x).reduce_at_zero().unwrap();
        assert_eq!(r("2+t"), BigRational::from_integer(2.into()));
        assert_eq!(r("t"), BigRational::zero());
        assert_eq!(r("(6+2*t)/(3-t)"), BigRational::from_integer(2.into()));
        assert_eq!(s("1/t").reduce_at_zero(), Err(FieldError::NegativeValuation(-1)));
    }

    #[test]
    fn printing() {
        assert_eq!(s("30+6*t").to_string(), "30+6*t");
        assert_eq!(s("3/2").to_string(), "3/2");
        assert_eq!(s("(1+t)/(1-t)").to_string(), "(1+t)/(1-t)");
        assert_eq!(s("t^2").to_string(), "t^2");
        assert_eq!(s("-3*t^-2/2").to_string(), "t^-2 * -3/2");
        assert_eq!(s("t*(1+t)").to_string(), "t * (1+t)");
        assert_eq!(s("-1").to_string(), "-1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_scalar("2 +"), Err(FieldError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_scalar("x"), Err(FieldError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_scalar("2t"), Err(FieldError::Syntax { pos: 1, .. })));
        assert_eq!(parse_scalar("1/(t-t)"), Err(FieldError::ZeroDivisorAt(2)));
        assert_eq!(parse_scalar("0^-1"), Err(FieldError::ZeroDivisorAt(0)));
        assert!(parse_scalar("t^t").is_err());
        assert!(parse_scalar("(1+t").is_err());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(s("-t^2"), -s("t^2"));
        assert_eq!(s("2^-2"), s("1/4"));
        assert_eq!(s("t^(-1)"), s("1/t"));
    }
}
