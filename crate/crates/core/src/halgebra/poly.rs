//! Monomials and integer polynomials in the generators of a free
//! graded-commutative algebra, with Koszul signs.
//!
//! Sign convention: moving a symbol of parity a past a symbol of parity b
//! contributes (-1)^{ab}. Parities are the declared parities of the
//! generators, so odd generators anticommute and square to zero.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::halgebra::series::{GenSpec, Parity};

/// Exponent vector over the generator list.
pub type Monomial = Vec<u32>;

/// Sum of integer-coefficient monomials, kept sorted and merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub terms: Vec<(BigInt, Monomial)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn from_terms(mut terms: Vec<(BigInt, Monomial)>) -> Self {
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut merged: Vec<(BigInt, Monomial)> = Vec::with_capacity(terms.len());
        for (c, m) in terms {
            if let Some(last) = merged.last_mut() {
                if last.1 == m {
                    last.0 += c;
                    continue;
                }
            }
            merged.push((c, m));
        }
        merged.retain(|(c, _)| !c.is_zero());
        Polynomial { terms: merged }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Polynomial::from_terms(terms)
    }
}

/// Product of two canonical monomials: None when an odd generator would
/// acquire exponent >= 2, otherwise the sign and merged exponents. The
/// sign counts crossings of odd letters of `b` moving left past odd
/// letters of `a` with larger generator index.
pub fn mul_monomials(gens: &[GenSpec], a: &Monomial, b: &Monomial) -> Option<(i8, Monomial)> {
    let mut sign = 1i8;
    let mut out = a.clone();
    for (i, &bi) in b.iter().enumerate() {
        if bi == 0 {
            continue;
        }
        if gens[i].parity == Parity::Odd {
            if bi > 1 || a[i] + bi > 1 {
                return None;
            }
            let crossings: u32 = (i + 1..a.len())
                .filter(|&j| gens[j].parity == Parity::Odd)
                .map(|j| a[j])
                .sum();
            if crossings % 2 == 1 {
                sign = -sign;
            }
        }
        out[i] += bi;
    }
    Some((sign, out))
}

/// Bidegree of a monomial.
pub fn bidegree(gens: &[GenSpec], m: &Monomial) -> (u64, u64) {
    let mut g = 0u64;
    let mut d = 0u64;
    for (i, &e) in m.iter().enumerate() {
        g += e as u64 * gens[i].grading as u64;
        d += e as u64 * gens[i].degree as u64;
    }
    (g, d)
}

/// Parses a polynomial like `s1^2 - s0^2` or `2*a*b - 3*c^2` over the
/// named generators.
pub fn parse_polynomial(gens: &[GenSpec], input: &str) -> Result<Polynomial> {
    let name_index: std::collections::HashMap<&str, usize> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| (g.name.as_str(), i))
        .collect();
    let tokens = tokenize(input)?;
    let mut pos = 0usize;
    let mut terms: Vec<(BigInt, Monomial)> = Vec::new();

    while pos < tokens.len() {
        let mut sign = BigInt::from(1);
        while let Some(tok) = tokens.get(pos) {
            match tok {
                Token::Plus => pos += 1,
                Token::Minus => {
                    sign = -sign;
                    pos += 1;
                }
                _ => break,
            }
        }
        if pos >= tokens.len() {
            return Err(Error::Parse("dangling sign".into()));
        }
        let mut coeff = sign;
        let mut mono: Monomial = vec![0; gens.len()];
        loop {
            match tokens.get(pos) {
                Some(Token::Int(v)) => {
                    coeff *= v;
                    pos += 1;
                }
                Some(Token::Ident(name)) => {
                    let Some(&gi) = name_index.get(name.as_str()) else {
                        return Err(Error::Parse(format!("unknown generator {name}")));
                    };
                    pos += 1;
                    let mut exp = 1u32;
                    if let Some(Token::Caret) = tokens.get(pos) {
                        pos += 1;
                        match tokens.get(pos) {
                            Some(Token::Int(v)) => {
                                exp = u32::try_from(v.clone())
                                    .map_err(|_| Error::Parse("bad exponent".into()))?;
                                pos += 1;
                            }
                            _ => return Err(Error::Parse("expected exponent".into())),
                        }
                    }
                    mono[gi] += exp;
                }
                _ => return Err(Error::Parse("expected factor".into())),
            }
            if let Some(Token::Star) = tokens.get(pos) {
                pos += 1;
                continue;
            }
            break;
        }
        terms.push((coeff, mono));
    }
    Ok(Polynomial::from_terms(terms))
}

#[derive(Debug, PartialEq)]
enum Token {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '0'..='9' => {
                let mut num = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        num.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(num.parse::<BigInt>().expect("digits")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(name));
            }
            other => {
                return Err(Error::Parse(format!("unexpected character {other:?}")));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens() -> Vec<GenSpec> {
        vec![
            GenSpec::new("s0", 1, 0),
            GenSpec::new("s1", 1, 0),
            GenSpec::with_parity("rho", 2, 1, Parity::Odd),
            GenSpec::with_parity("eta", 3, 1, Parity::Odd),
        ]
    }

    #[test]
    fn parse_difference_of_squares() {
        let p = parse_polynomial(&gens(), "s1^2 - s0^2").unwrap();
        assert_eq!(
            p.terms,
            vec![
                (BigInt::from(1), vec![0, 2, 0, 0]),
                (BigInt::from(-1), vec![2, 0, 0, 0]),
            ]
        );
    }

    #[test]
    fn parse_with_coefficients() {
        let p = parse_polynomial(&gens(), "2*s0*s1 - 3*rho").unwrap();
        assert_eq!(
            p.terms,
            vec![
                (BigInt::from(-3), vec![0, 0, 1, 0]),
                (BigInt::from(2), vec![1, 1, 0, 0]),
            ]
        );
    }

    #[test]
    fn parse_rejects_unknown_names() {
        assert!(parse_polynomial(&gens(), "zeta").is_err());
    }

    #[test]
    fn odd_squares_vanish() {
        let g = gens();
        let rho = vec![0, 0, 1, 0];
        assert!(mul_monomials(&g, &rho, &rho).is_none());
    }

    #[test]
    fn odd_letters_anticommute() {
        let g = gens();
        let rho = vec![0u32, 0, 1, 0];
        let eta = vec![0u32, 0, 0, 1];
        let (s1, m1) = mul_monomials(&g, &rho, &eta).unwrap();
        let (s2, m2) = mul_monomials(&g, &eta, &rho).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(s1, -s2);
    }

    #[test]
    fn even_letters_commute() {
        let g = gens();
        let a = vec![1u32, 0, 0, 0];
        let b = vec![0u32, 1, 1, 0];
        let (s1, m1) = mul_monomials(&g, &a, &b).unwrap();
        let (s2, m2) = mul_monomials(&g, &b, &a).unwrap();
        assert_eq!((s1, m1), (s2, m2));
    }
}
