//! Sparse multivariate polynomials over the rationals.
//!
//! The symbol set is fixed: `x`, `y`, `z`, `p`. Exponent vectors are stored
//! as fixed-width arrays and terms are kept in a `BTreeMap`, so equality is
//! plain map equality and iteration order is lexicographic with
//! `x > y > z > p`. Zero coefficients are never stored.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const NVARS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    X,
    Y,
    Z,
    P,
}

impl Symbol {
    pub const ALL: [Symbol; NVARS] = [Symbol::X, Symbol::Y, Symbol::Z, Symbol::P];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::X => "x",
            Symbol::Y => "y",
            Symbol::Z => "z",
            Symbol::P => "p",
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Symbol::X),
            "y" => Ok(Symbol::Y),
            "z" => Ok(Symbol::Z),
            "p" => Ok(Symbol::P),
            other => Err(Error::Parse(format!(
                "unknown symbol {other:?}; the symbol set is {{x, y, z, p}}"
            ))),
        }
    }
}

/// Exponent vector indexed by `Symbol::index`.
pub type Monomial = [u32; NVARS];

pub const ONE_MONOMIAL: Monomial = [0; NVARS];

fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = *a;
    for (o, e) in out.iter_mut().zip(b) {
        *o += e;
    }
    out
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(ONE_MONOMIAL, c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rational::int(n))
    }

    pub fn var(s: Symbol) -> Self {
        let mut m = ONE_MONOMIAL;
        m[s.index()] = 1;
        Self::monomial(m, Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, possibly zero)
    /// terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    /// Univariate polynomial `sum coeffs[k] * s^k`.
    pub fn univariate(s: Symbol, coeffs: &[Rational]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(k, c)| {
            let mut m = ONE_MONOMIAL;
            m[s.index()] = k as u32;
            (m, c.clone())
        }))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The scalar value when the polynomial has no symbol dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&ONE_MONOMIAL).cloned(),
            _ => None,
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&ONE_MONOMIAL).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.keys().map(|m| m[s.index()]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    /// Symbols that occur with a positive exponent in some term.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        Symbol::ALL
            .into_iter()
            .filter(|s| self.terms.keys().any(|m| m[s.index()] > 0))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to `s`.
    pub fn derivative(&self, s: Symbol) -> Self {
        let i = s.index();
        Self::from_terms(self.terms.iter().filter(|(m, _)| m[i] > 0).map(|(m, c)| {
            let mut d = *m;
            d[i] -= 1;
            (d, c * rational::int(m[i] as i64))
        }))
    }

    /// Replaces every occurrence of `s` by `value`.
    pub fn substitute(&self, s: Symbol, value: &MPoly) -> Self {
        let i = s.index();
        let max = self.degree_in(s) as usize;
        if max == 0 {
            return self.clone();
        }
        let mut powers = vec![MPoly::one()];
        for k in 1..=max {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        let mut by_power: Vec<MPoly> = vec![MPoly::zero(); max + 1];
        for (m, c) in &self.terms {
            let mut rest = *m;
            let k = rest[i] as usize;
            rest[i] = 0;
            by_power[k].add_term(rest, c.clone());
        }
        let mut out = MPoly::zero();
        for (k, part) in by_power.iter().enumerate() {
            if !part.is_zero() {
                out += &(part * &powers[k]);
            }
        }
        out
    }

    /// Exact evaluation at rational values, one per symbol.
    pub fn eval_rational(&self, values: &[Rational; NVARS]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in values.iter().zip(m) {
                if *e > 0 {
                    term *= num_traits::pow(v.clone(), *e as usize);
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_f64(&self, values: &[f64; NVARS]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut term = rational::to_f64(c);
                for (v, e) in values.iter().zip(m) {
                    term *= v.powi(*e as i32);
                }
                term
            })
            .sum()
    }

    fn mul_impl(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca * cb;
                match acc.entry(mono_mul(ma, mb)) {
                    Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    Entry::Occupied(mut o) => *o.get_mut() += prod,
                }
            }
        }
        MPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl From<Rational> for MPoly {
    fn from(c: Rational) -> Self {
        MPoly::constant(c)
    }
}

impl<'a> Add<&'a MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &'a MPoly) -> MPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for MPoly {
    type Output = MPoly;
    fn add(mut self, rhs: MPoly) -> MPoly {
        self += &rhs;
        self
    }
}

impl<'a> AddAssign<&'a MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &'a MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &'a MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl<'a> Sub<&'a MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &'a MPoly) -> MPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for MPoly {
    type Output = MPoly;
    fn sub(mut self, rhs: MPoly) -> MPoly {
        self -= &rhs;
        self
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl<'a> Mul<&'a MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &'a MPoly) -> MPoly {
        self.mul_impl(rhs)
    }
}

impl Mul for MPoly {
    type Output = MPoly;
    fn mul(self, rhs: MPoly) -> MPoly {
        self.mul_impl(&rhs)
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for s in Symbol::ALL {
        let e = m[s.index()];
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{s}")?;
        } else {
            write!(f, "{s}^{e}")?;
        }
    }
    Ok(())
}

/// Canonical text: terms in descending lexicographic order, e.g.
/// `16*x^4 - 48*x^2 + 12` or `1/2*z^2 - 2*z + 1`.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if *m == ONE_MONOMIAL {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

fn parse_term(text: &str) -> Result<(Monomial, Rational)> {
    let mut m = ONE_MONOMIAL;
    let mut c = Rational::one();
    for factor in text.split('*') {
        let factor = factor.trim();
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in {text:?}")));
        }
        if factor.starts_with(|ch: char| ch.is_ascii_digit()) {
            c *= rational::parse_rational(factor)?;
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: u32 = e
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        let s: Symbol = name.parse()?;
        m[s.index()] += exp;
    }
    Ok((m, c))
}

impl FromStr for MPoly {
    type Err = Error;

    /// Parses sums of terms such as `-1/2*x^2*y + 3*p - 7`. Accepts the
    /// canonical rendering and any other flat sum over the fixed symbols.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = MPoly::zero();
        let mut sign_negative = false;
        let mut start = 0;
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        for (i, &b) in bytes.iter().enumerate() {
            if (b == b'+' || b == b'-') && i > 0 {
                // a sign directly after '^' or '/' belongs to the number
                let prev = s[..i].trim_end();
                if prev.ends_with('^') || prev.ends_with('/') || prev.ends_with('*') {
                    continue;
                }
                pieces.push((sign_negative, &s[start..i]));
                sign_negative = b == b'-';
                start = i + 1;
            } else if i == 0 && (b == b'+' || b == b'-') {
                sign_negative = b == b'-';
                start = 1;
            }
        }
        pieces.push((sign_negative, &s[start..]));
        for (neg, piece) in pieces {
            let (m, c) = parse_term(piece)?;
            out.add_term(m, if neg { -c } else { c });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn x() -> MPoly {
        MPoly::var(Symbol::X)
    }

    #[test]
    fn render_hermite_like() {
        let h3 = &(&x().pow(3) * &MPoly::int(8)) - &(&x() * &MPoly::int(12));
        assert_eq!(h3.to_string(), "8*x^3 - 12*x");
        let l2 = MPoly::univariate(Symbol::Z, &[int(1), int(-2), frac(1, 2)]);
        assert_eq!(l2.to_string(), "1/2*z^2 - 2*z + 1");
        assert_eq!((-&x()).to_string(), "-x");
        assert_eq!(MPoly::zero().to_string(), "0");
    }

    #[test]
    fn parse_roundtrip_examples() {
        for text in ["16*x^4 - 48*x^2 + 12", "-x*y^2 + 1/3*z - p", "0", "-5/7"] {
            let p: MPoly = text.parse().unwrap();
            assert_eq!(p.to_string(), text);
        }
        let p: MPoly = "x + x - 2*x".parse().unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn unknown_symbol_is_rejected() {
        assert!("2*w".parse::<MPoly>().is_err());
        assert!("t^2".parse::<MPoly>().is_err());
    }

    #[test]
    fn no_zero_terms_after_cancellation() {
        let a: MPoly = "x + 1".parse().unwrap();
        let b: MPoly = "x - 1".parse().unwrap();
        let d = &(&a * &b) - &"x^2".parse().unwrap();
        assert_eq!(d, MPoly::int(-1));
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn substitution() {
        // (x + 1)^2 with x -> y - 1 gives y^2
        let p: MPoly = "x^2 + 2*x + 1".parse().unwrap();
        let v: MPoly = "y - 1".parse().unwrap();
        assert_eq!(p.substitute(Symbol::X, &v), "y^2".parse().unwrap());
        assert_eq!(p.substitute(Symbol::Z, &v), p);
    }

    #[test]
    fn partial_derivative() {
        let p: MPoly = "x^3*y + 2*x - y".parse().unwrap();
        assert_eq!(p.derivative(Symbol::X), "3*x^2*y + 2".parse().unwrap());
        assert_eq!(p.derivative(Symbol::P), MPoly::zero());
    }

    #[test]
    fn evaluation() {
        let p: MPoly = "3*x^2*y - 1/2*p".parse().unwrap();
        let v = [int(2), int(5), int(0), int(4)];
        assert_eq!(p.eval_rational(&v), int(58));
        assert!((p.eval_f64(&[2.0, 5.0, 0.0, 4.0]) - 58.0).abs() < 1e-12);
    }
}
