//! Truncated power series in `t` with [`MPoly`] coefficients.
//!
//! A [`TSeries`] of order `N` stores exactly `N + 1` coefficients. Binary
//! operations require equal orders; there is no silent re-truncation.
//!
//! Each series also tracks how many leading coefficients are *reliable*.
//! Differentiation and division by `t` consume the top coefficient, so the
//! result is re-padded to order `N` with an entry that must not take part in
//! comparisons. Everything downstream propagates the smaller reliable prefix,
//! and identity checks compare only that prefix.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Monomial, Symbol, NVARS};
use crate::rational::{self, Rational};

pub const DEFAULT_ORDER: usize = 16;

#[derive(Clone, PartialEq, Eq)]
pub struct TSeries {
    order: usize,
    /// Number of leading coefficients that are exact (0..=order+1).
    reliable: usize,
    coeffs: Vec<MPoly>,
}

impl TSeries {
    /// Series from the given coefficients, zero-padded or truncated to `order`.
    pub fn new(mut coeffs: Vec<MPoly>, order: usize) -> Self {
        coeffs.resize(order + 1, MPoly::zero());
        Self {
            order,
            reliable: order + 1,
            coeffs,
        }
    }

    pub fn from_fn(order: usize, mut f: impl FnMut(usize) -> MPoly) -> Self {
        Self::new((0..=order).map(&mut f).collect(), order)
    }

    pub fn from_rationals(coeffs: &[Rational], order: usize) -> Self {
        Self::new(coeffs.iter().cloned().map(MPoly::constant).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(MPoly::one(), order)
    }

    pub fn constant(c: MPoly, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// `c * t^k`, or zero when `k > order`.
    pub fn monomial(c: MPoly, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The series variable `t` itself.
    pub fn t(order: usize) -> Self {
        Self::monomial(MPoly::one(), 1, order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Highest power whose coefficient is exact, or `None` if no
    /// coefficient is.
    pub fn reliable_order(&self) -> Option<usize> {
        self.reliable.checked_sub(1)
    }

    pub fn reliable_len(&self) -> usize {
        self.reliable
    }

    pub fn coeffs(&self) -> &[MPoly] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<MPoly> {
        self.coeffs
    }

    pub fn coefficient(&self, k: usize) -> Result<&MPoly> {
        self.coeffs.get(k).ok_or(Error::OutOfRange {
            index: k,
            order: self.order,
        })
    }

    pub(crate) fn with_reliable(mut self, reliable: usize) -> Self {
        self.reliable = reliable.min(self.order + 1);
        self
    }

    fn check_order(&self, other: &TSeries) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Result<TSeries> {
        if order > self.order {
            return Err(Error::OutOfRange {
                index: order,
                order: self.order,
            });
        }
        let out = TSeries::new(self.coeffs[..=order].to_vec(), order);
        Ok(out.with_reliable(self.reliable))
    }

    pub fn map_coeffs(&self, f: impl Fn(&MPoly) -> MPoly) -> TSeries {
        TSeries {
            order: self.order,
            reliable: self.reliable,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &TSeries) -> Result<TSeries> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TSeries::new(coeffs, self.order).with_reliable(self.reliable.min(other.reliable)))
    }

    pub fn sub(&self, other: &TSeries) -> Result<TSeries> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(TSeries::new(coeffs, self.order).with_reliable(self.reliable.min(other.reliable)))
    }

    pub fn neg(&self) -> TSeries {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &MPoly) -> TSeries {
        self.map_coeffs(|a| a * c)
    }

    pub fn scale_rational(&self, c: &Rational) -> TSeries {
        self.map_coeffs(|a| a.scale(c))
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &TSeries) -> Result<TSeries> {
        self.check_order(other)?;
        let n = self.order;
        let mut out = vec![MPoly::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Ok(TSeries::new(out, n).with_reliable(self.reliable.min(other.reliable)))
    }

    pub fn pow(&self, e: u32) -> Result<TSeries> {
        let mut acc = TSeries::one(self.order).with_reliable(self.reliable);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    fn scalar_constant(&self, what: &str) -> Result<Rational> {
        self.coeffs[0]
            .as_constant()
            .ok_or_else(|| Error::domain(format!("{what}: constant term {} is not a scalar", self.coeffs[0])))
    }

    /// Multiplicative inverse; the constant term must be a nonzero scalar.
    pub fn inverse(&self) -> Result<TSeries> {
        let c0 = self.scalar_constant("inverse")?;
        if c0.is_zero() {
            return Err(Error::domain("inverse: constant term is zero"));
        }
        let inv0 = c0.recip();
        let n = self.order;
        let mut out: Vec<MPoly> = Vec::with_capacity(n + 1);
        out.push(MPoly::constant(inv0.clone()));
        for k in 1..=n {
            let mut acc = MPoly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    acc += &(&self.coeffs[j] * &out[k - j]);
                }
            }
            out.push(acc.scale(&-inv0.clone()));
        }
        Ok(TSeries::new(out, n).with_reliable(self.reliable))
    }

    pub fn div(&self, other: &TSeries) -> Result<TSeries> {
        self.mul(&other.inverse()?)
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Result<TSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::domain(format!(
                "exp: constant term {} is not zero",
                self.coeffs[0]
            )));
        }
        // b' = a' b  =>  k b_k = sum_{j=1..k} j a_j b_{k-j}
        let n = self.order;
        let mut out: Vec<MPoly> = Vec::with_capacity(n + 1);
        out.push(MPoly::one());
        for k in 1..=n {
            let mut acc = MPoly::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    let term = &self.coeffs[j] * &out[k - j];
                    acc += &term.scale(&rational::int(j as i64));
                }
            }
            out.push(acc.scale(&rational::frac(1, k as i64)));
        }
        Ok(TSeries::new(out, n).with_reliable(self.reliable))
    }

    /// `log` of a series with constant term exactly 1.
    pub fn log(&self) -> Result<TSeries> {
        if !self.coeffs[0].is_one() {
            return Err(Error::domain(format!(
                "log: constant term {} is not 1",
                self.coeffs[0]
            )));
        }
        // a' = l' a  =>  k l_k = k a_k - sum_{j=1..k-1} j l_j a_{k-j}
        let n = self.order;
        let mut out: Vec<MPoly> = vec![MPoly::zero(); n + 1];
        for k in 1..=n {
            let mut acc = self.coeffs[k].scale(&rational::int(k as i64));
            for j in 1..k {
                if !out[j].is_zero() && !self.coeffs[k - j].is_zero() {
                    let term = &out[j] * &self.coeffs[k - j];
                    acc -= &term.scale(&rational::int(j as i64));
                }
            }
            out[k] = acc.scale(&rational::frac(1, k as i64));
        }
        Ok(TSeries::new(out, n).with_reliable(self.reliable))
    }

    /// `self(inner(t))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &TSeries) -> Result<TSeries> {
        self.check_order(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::domain(format!(
                "compose: inner constant term {} is not zero",
                inner.coeffs[0]
            )));
        }
        let n = self.order;
        let mut acc = TSeries::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc.with_reliable(self.reliable.min(inner.reliable)))
    }

    /// d/dt. The top coefficient of the result is padding and is excluded
    /// from the reliable prefix.
    pub fn derivative(&self) -> TSeries {
        let n = self.order;
        let coeffs = (1..=n)
            .map(|k| self.coeffs[k].scale(&rational::int(k as i64)))
            .collect();
        TSeries::new(coeffs, n).with_reliable(self.reliable.saturating_sub(1))
    }

    pub fn nth_derivative(&self, k: usize) -> TSeries {
        (0..k).fold(self.clone(), |acc, _| acc.derivative())
    }

    /// Divides by `t^r`; the first `r` coefficients must vanish.
    pub fn shift_div_t(&self, r: usize) -> Result<TSeries> {
        if r > self.order + 1 {
            return Err(Error::OutOfRange {
                index: r,
                order: self.order,
            });
        }
        if let Some(k) = self.coeffs[..r].iter().position(|c| !c.is_zero()) {
            return Err(Error::domain(format!(
                "shift_div_t: coefficient of t^{k} is {} (must be zero)",
                self.coeffs[k]
            )));
        }
        let coeffs = self.coeffs[r..].to_vec();
        Ok(TSeries::new(coeffs, self.order).with_reliable(self.reliable.saturating_sub(r)))
    }

    /// Multiplies by `t^r`. Exact: the new low coefficients are known zeros.
    pub fn shift_mul_t(&self, r: usize) -> TSeries {
        let n = self.order;
        let mut coeffs = vec![MPoly::zero(); r.min(n + 1)];
        coeffs.extend(self.coeffs.iter().take((n + 1).saturating_sub(r)).cloned());
        TSeries::new(coeffs, n).with_reliable(self.reliable + r)
    }

    /// `(t d/dt)^n`, which scales the coefficient of `t^k` by `k^n`.
    pub fn euler_operator(&self, n: u32) -> TSeries {
        TSeries {
            order: self.order,
            reliable: self.reliable,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(&Rational::from_integer(num_traits::pow(k.into(), n as usize))))
                .collect(),
        }
    }

    /// The same operator expanded as `sum_k stirling(n, k) t^k f^(k)(t)`,
    /// given the Stirling row `{n, 0..=n}`.
    pub fn euler_operator_expanded(&self, stirling_row: &[Rational]) -> Result<TSeries> {
        let mut acc = TSeries::zero(self.order);
        let mut deriv = self.clone();
        for (k, s) in stirling_row.iter().enumerate() {
            if k > 0 {
                deriv = deriv.derivative();
            }
            if !s.is_zero() {
                acc = acc.add(&deriv.shift_mul_t(k).scale_rational(s))?;
            }
        }
        Ok(acc)
    }

    pub fn substitute(&self, s: Symbol, value: &MPoly) -> TSeries {
        self.map_coeffs(|c| c.substitute(s, value))
    }

    /// Exact partial sum `sum_k c_k(values) t^k` over the reliable prefix.
    pub fn eval_rational(&self, values: &[Rational; NVARS], t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        let mut tk = Rational::one();
        for c in &self.coeffs[..self.reliable] {
            acc += c.eval_rational(values) * &tk;
            tk *= t;
        }
        acc
    }

    /// Coefficient-wise comparison over the shared reliable prefix.
    pub fn compare(&self, other: &TSeries) -> Result<Comparison> {
        self.check_order(other)?;
        let len = self.reliable.min(other.reliable);
        let first_mismatch = (0..len).find(|&k| self.coeffs[k] != other.coeffs[k]);
        Ok(Comparison {
            compared_len: len,
            first_mismatch,
        })
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            order: self.order,
            reliable_order: self.reliable_order(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| {
                    c.terms()
                        .map(|(m, q)| TermJson {
                            exponents: *m,
                            num: q.numer().to_string(),
                            den: q.denom().to_string(),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<TSeries> {
        if j.coeffs.len() != j.order + 1 {
            return Err(Error::Parse(format!(
                "series of order {} needs {} coefficients, got {}",
                j.order,
                j.order + 1,
                j.coeffs.len()
            )));
        }
        let reliable = match j.reliable_order {
            Some(r) if r > j.order => {
                return Err(Error::Parse(format!(
                    "reliable_order {r} exceeds order {}",
                    j.order
                )))
            }
            Some(r) => r + 1,
            None => 0,
        };
        let coeffs = j
            .coeffs
            .iter()
            .map(|terms| {
                let mut poly = MPoly::zero();
                for t in terms {
                    let q = rational::parse_rational(&format!("{}/{}", t.num, t.den))?;
                    if !poly.coeff(&t.exponents).is_zero() {
                        return Err(Error::Parse("repeated monomial".into()));
                    }
                    poly.add_term(t.exponents, q);
                }
                Ok(poly)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TSeries::new(coeffs, j.order).with_reliable(reliable))
    }

    /// One line per coefficient: `t^k: <poly>`; unreliable entries are
    /// marked with `?`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            let mark = if k < self.reliable { "" } else { " ?" };
            out.push_str(&format!("t^{k}: {c}{mark}\n"));
        }
        out
    }
}

impl fmt::Display for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            if k < self.reliable {
                write!(f, "{c}")?;
            } else {
                f.write_str("?")?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for TSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TSeries(order={}, reliable={}, {self})", self.order, self.reliable)
    }
}

/// Result of comparing two series over their shared reliable prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub compared_len: usize,
    pub first_mismatch: Option<usize>,
}

impl Comparison {
    pub fn equal(&self) -> bool {
        self.first_mismatch.is_none()
    }

    pub fn compared_order(&self) -> Option<usize> {
        self.compared_len.checked_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exponents: Monomial,
    pub num: String,
    pub den: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub order: usize,
    pub reliable_order: Option<usize>,
    pub coeffs: Vec<Vec<TermJson>>,
}

/// Frequently used closed-form series.
pub mod standard {
    use super::*;

    /// `1 / (1 - t)`.
    pub fn geometric(order: usize) -> TSeries {
        TSeries::from_fn(order, |_| MPoly::one())
    }

    /// `-log(1 - t) = sum_{k>=1} t^k / k`.
    pub fn neg_log_one_minus(order: usize) -> TSeries {
        TSeries::from_fn(order, |k| {
            if k == 0 {
                MPoly::zero()
            } else {
                MPoly::constant(rational::frac(1, k as i64))
            }
        })
    }

    /// `Li_2(t) = sum_{k>=1} t^k / k^2`.
    pub fn dilog(order: usize) -> TSeries {
        TSeries::from_fn(order, |k| {
            if k == 0 {
                MPoly::zero()
            } else {
                MPoly::constant(rational::frac(1, (k * k) as i64))
            }
        })
    }

    /// `mu*t / (1 - lambda*t)`, the substitution of the Euler transform.
    pub fn euler_argument(mu: &Rational, lambda: &Rational, order: usize) -> Result<TSeries> {
        let denom = TSeries::new(vec![MPoly::one(), MPoly::constant(-lambda.clone())], order);
        TSeries::t(order).scale_rational(mu).div(&denom)
    }

    /// `exp(2xt - t^2)`, the Hermite generating function.
    pub fn hermite_gf(order: usize) -> Result<TSeries> {
        let x2 = MPoly::var(Symbol::X).scale(&rational::int(2));
        TSeries::new(vec![MPoly::zero(), x2, MPoly::int(-1)], order).exp()
    }

    /// `1 / sqrt(1 - 4t^2) = sum_n C(2n, n) t^{2n}` from the central
    /// binomial closed form.
    pub fn inv_sqrt_one_minus_4t2(order: usize) -> TSeries {
        TSeries::from_fn(order, |k| {
            if k % 2 == 1 {
                MPoly::zero()
            } else {
                let n = (k / 2) as u64;
                MPoly::constant(rational::big(rational::binomial(2 * n, n)))
            }
        })
    }

    /// Polynomial in `t` given by its coefficients.
    pub fn poly_t(coeffs: &[i64], order: usize) -> TSeries {
        TSeries::new(coeffs.iter().map(|&c| MPoly::int(c)).collect(), order)
    }
}
