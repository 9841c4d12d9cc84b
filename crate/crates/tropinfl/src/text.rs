//! Text forms: rationals (`-3/4`, `1e-9`, `0.25`), Laurent scalars
//! (`3*t^-2 - 1/2 + t`), and bivariate polynomials whose monomials may carry
//! a power of `t` (`t^-1*x^2 + 3*x*y - 1`).

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use tropinfl_core::field::{Domain, PrimeField, Rationals};
use tropinfl_core::lattice::LatticePoint;
use tropinfl_core::poly::Polynomial;
use tropinfl_core::puiseux::{Laurent, LaurentRing};
use tropinfl_core::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    End,
    #[error("bad number {0:?}")]
    Number(String),
    #[error("variable {0} is not allowed here")]
    Variable(char),
    #[error("{0} does not fit the exact range")]
    Overflow(String),
    #[error("{0} has no inverse modulo {1}")]
    NotInField(String, u64),
}

/// Exact rational from `a`, `a/b`, `a.b` or scientific `a.be-k`.
pub fn parse_big_rational(s: &str) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::Number(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], i64::from_str(&s[i + 1..]).map_err(|_| bad())?),
        None => (s, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if (int.is_empty() && frac.is_empty()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{}{}", if int.is_empty() || int == "-" || int == "+" { format!("{int}0") } else { int.to_string() }, frac);
    let n = BigInt::from_str(&digits).map_err(|_| bad())?;
    let shift = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        BigRational::from_integer(n * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(n, num_traits::pow(ten, (-shift) as usize))
    };
    Ok(value)
}

pub fn to_small(q: &BigRational) -> Result<Rational, ParseError> {
    let n = i128::try_from(q.numer()).map_err(|_| ParseError::Overflow(q.to_string()))?;
    let d = i128::try_from(q.denom()).map_err(|_| ParseError::Overflow(q.to_string()))?;
    Ok(Rational::new(n, d))
}

pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    to_small(&parse_big_rational(s)?)
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Terms of a polynomial in `x`, `y` with Laurent coefficients over `Q`,
/// keyed by `(i, j)` and then by the power of `t`.
pub type RawPolynomial = BTreeMap<LatticePoint, BTreeMap<i64, BigRational>>;

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseError> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(ParseError::Unexpected(c, self.pos - 1)),
            None => Err(ParseError::End),
        }
    }

    fn number(&mut self) -> Result<BigRational, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|c: char| !(c.is_ascii_digit() || c == '/' || c == '.')).unwrap_or(rest.len());
        self.pos += len;
        parse_big_rational(&rest[..len])
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = self.peek() == Some('(');
        if paren {
            self.bump();
        }
        let negative = self.peek() == Some('-');
        if negative {
            self.bump();
        }
        let q = self.number()?;
        if !q.is_integer() {
            return Err(ParseError::Number(q.to_string()));
        }
        let e = i64::try_from(q.to_integer()).map_err(|_| ParseError::Overflow(q.to_string()))?;
        if paren {
            self.expect(')')?;
        }
        Ok(if negative { -e } else { e })
    }

    /// One product of factors: `(coefficient, t power, x power, y power)`.
    fn term(&mut self, allow_xy: bool) -> Result<(BigRational, i64, LatticePoint), ParseError> {
        let mut c = BigRational::one();
        let mut t = 0;
        let mut p = LatticePoint::new(0, 0);
        loop {
            match self.peek() {
                Some(d) if d.is_ascii_digit() || d == '.' => c *= self.number()?,
                Some(v @ ('t' | 'x' | 'y')) => {
                    self.bump();
                    if !allow_xy && v != 't' {
                        return Err(ParseError::Variable(v));
                    }
                    let e = if self.peek() == Some('^') {
                        self.bump();
                        self.exponent()?
                    } else {
                        1
                    };
                    match v {
                        't' => t += e,
                        'x' => p.x += e,
                        _ => p.y += e,
                    }
                }
                Some(other) => return Err(ParseError::Unexpected(other, self.pos)),
                None => return Err(ParseError::End),
            }
            if self.peek() == Some('*') {
                self.bump();
            } else {
                return Ok((c, t, p));
            }
        }
    }

    fn sum(&mut self, allow_xy: bool) -> Result<RawPolynomial, ParseError> {
        let mut out = RawPolynomial::new();
        let mut first = true;
        loop {
            let mut sign = BigRational::one();
            match self.peek() {
                Some('+') => {
                    self.bump();
                }
                Some('-') => {
                    self.bump();
                    sign = -sign;
                }
                Some(c) if !first => return Err(ParseError::Unexpected(c, self.pos)),
                None if !first => return Ok(out),
                _ => {}
            }
            first = false;
            let (c, t, p) = self.term(allow_xy)?;
            let slot = out.entry(p).or_default().entry(t).or_insert_with(BigRational::zero);
            *slot += sign * c;
            if self.peek().is_none() {
                return Ok(out);
            }
        }
    }
}

fn prune(mut raw: RawPolynomial) -> RawPolynomial {
    for terms in raw.values_mut() {
        terms.retain(|_, c| !c.is_zero());
    }
    raw.retain(|_, terms| !terms.is_empty());
    raw
}

/// Parses `c*t^e*x^i*y^j + ...`; like monomials are combined.
pub fn parse_polynomial_raw(s: &str) -> Result<RawPolynomial, ParseError> {
    Lexer { src: s, pos: 0 }.sum(true).map(prune)
}

/// Parses a scalar `c1*t^e1 + c2*t^e2 + ...`.
pub fn parse_laurent_raw(s: &str) -> Result<BTreeMap<i64, BigRational>, ParseError> {
    let raw = prune(Lexer { src: s, pos: 0 }.sum(false)?);
    Ok(raw.into_values().next().unwrap_or_default())
}

pub fn laurent_over_q(ring: &LaurentRing<Rationals>, terms: &BTreeMap<i64, BigRational>) -> Laurent<BigRational> {
    ring.from_terms(terms.iter().map(|(&e, c)| (e, c.clone())))
}

pub fn laurent_over_p(ring: &LaurentRing<PrimeField>, terms: &BTreeMap<i64, BigRational>) -> Result<Laurent<u64>, ParseError> {
    let f = ring.base();
    let mut out = Vec::new();
    for (&e, c) in terms {
        let v = tropinfl_core::field::Field::from_rational(f, c).ok_or_else(|| ParseError::NotInField(c.to_string(), f.modulus()))?;
        out.push((e, v));
    }
    Ok(ring.from_terms(out))
}

pub fn polynomial_over_q(ring: &LaurentRing<Rationals>, raw: &RawPolynomial) -> Polynomial<Laurent<BigRational>> {
    Polynomial::from_terms(ring, raw.iter().map(|(&p, terms)| (p, laurent_over_q(ring, terms))))
}

fn join_terms(parts: Vec<(bool, String)>) -> String {
    if parts.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (negative, body)) in parts.into_iter().enumerate() {
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

fn monomial(coeff: &str, factors: &[(&str, i64)]) -> String {
    let vars: Vec<String> = factors
        .iter()
        .filter(|(_, e)| *e != 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    match (coeff, vars.is_empty()) {
        (c, true) => c.to_string(),
        ("1", false) => vars.join("*"),
        (c, false) => format!("{}*{}", c, vars.join("*")),
    }
}

/// Coefficients as `(negative, absolute value text)`.
pub trait CoefficientText: Domain {
    fn coefficient_text(&self, c: &Self::Elem) -> (bool, String);
}

impl CoefficientText for Rationals {
    fn coefficient_text(&self, c: &BigRational) -> (bool, String) {
        (c.is_negative(), c.abs().to_string())
    }
}

impl CoefficientText for PrimeField {
    fn coefficient_text(&self, c: &u64) -> (bool, String) {
        (false, c.to_string())
    }
}

pub fn format_laurent<F: CoefficientText + tropinfl_core::field::Field>(ring: &LaurentRing<F>, x: &Laurent<F::Elem>) -> String {
    let base = ring.base();
    let parts = ring
        .terms(x)
        .map(|(e, c)| {
            let (neg, abs) = base.coefficient_text(c);
            (neg, monomial(&abs, &[("t", e)]))
        })
        .collect();
    join_terms(parts)
}

/// `x`, `y` polynomial over the Laurent ring; each monomial is expanded
/// into its `t` terms so the result parses back to the same polynomial.
pub fn format_polynomial<F: CoefficientText + tropinfl_core::field::Field>(
    ring: &LaurentRing<F>,
    f: &Polynomial<Laurent<F::Elem>>,
) -> String {
    let base = ring.base();
    let mut parts = Vec::new();
    for (p, c) in f.terms() {
        for (e, a) in ring.terms(c) {
            let (neg, abs) = base.coefficient_text(a);
            parts.push((neg, monomial(&abs, &[("t", e), ("x", p.x), ("y", p.y)])));
        }
    }
    join_terms(parts)
}

/// Polynomial over a field (no `t`).
pub fn format_field_polynomial<F: CoefficientText>(field: &F, f: &Polynomial<F::Elem>) -> String {
    let parts = f
        .terms()
        .map(|(p, c)| {
            let (neg, abs) = field.coefficient_text(c);
            (neg, monomial(&abs, &[("x", p.x), ("y", p.y)]))
        })
        .collect();
    join_terms(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_big_rational("-3/4").unwrap(), q(-3, 4));
        assert_eq!(parse_big_rational("1e-9").unwrap(), q(1, 1_000_000_000));
        assert_eq!(parse_big_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_big_rational("2.5e1").unwrap(), q(25, 1));
        assert_eq!(parse_big_rational(".5").unwrap(), q(1, 2));
        assert!(parse_big_rational("1/0").is_err());
        assert!(parse_big_rational("abc").is_err());
        assert_eq!(format_rational(&Rational::new(6, 4)), "3/2");
    }

    #[test]
    fn laurent_round_trip() {
        let ring = LaurentRing::new(Rationals);
        for s in ["3*t^-2 - 1/2 + t", "t", "-t^5", "0", "7"] {
            let x = laurent_over_q(&ring, &parse_laurent_raw(s).unwrap());
            assert_eq!(format_laurent(&ring, &x), s);
        }
        let x = laurent_over_q(&ring, &parse_laurent_raw("t^(-1) + 2*t^-1 - t*t").unwrap());
        assert_eq!(format_laurent(&ring, &x), "3*t^-1 - t^2");
        assert_eq!(parse_laurent_raw("x + 1"), Err(ParseError::Variable('x')));
    }

    #[test]
    fn polynomial_round_trip() {
        let ring = LaurentRing::new(Rationals);
        let f = polynomial_over_q(&ring, &parse_polynomial_raw("x + y + 1").unwrap());
        assert_eq!(f.len(), 3);
        let g = polynomial_over_q(&ring, &parse_polynomial_raw("t^-1*x^2 + 3*x*y - 1/2*t^2 + x*y").unwrap());
        let text = format_polynomial(&ring, &g);
        assert_eq!(text, "-1/2*t^2 + 4*x*y + t^-1*x^2");
        assert_eq!(polynomial_over_q(&ring, &parse_polynomial_raw(&text).unwrap()), g);
        assert!(parse_polynomial_raw("x y").is_err());
        assert!(parse_polynomial_raw("x +").is_err());
        assert!(parse_polynomial_raw("x - x").unwrap().is_empty());
    }
}
