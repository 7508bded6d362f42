//! Series transformations: the binomial transform pair, the Euler series
//! transformation, the Hermite series transformation and its general
//! derivative form, and the Stirling / r-Stirling transforms for polynomial
//! multipliers.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Symbol};
use crate::rational::{self, Rational};
use crate::sequences::StirlingTable;
use crate::series::{standard, TSeries};
use crate::special;

type Provider = dyn Fn(usize) -> MPoly + Send + Sync;

/// A coefficient sequence `a_0, a_1, ...` given by a pure function of the
/// index. `degree` is set when only finitely many entries are nonzero.
#[derive(Clone)]
pub struct CoeffSeq {
    provider: Arc<Provider>,
    description: String,
    degree: Option<usize>,
}

impl CoeffSeq {
    pub fn new(description: impl Into<String>, f: impl Fn(usize) -> MPoly + Send + Sync + 'static) -> Self {
        Self {
            provider: Arc::new(f),
            description: description.into(),
            degree: None,
        }
    }

    pub fn rational(description: impl Into<String>, f: impl Fn(usize) -> Rational + Send + Sync + 'static) -> Self {
        Self::new(description, move |k| MPoly::constant(f(k)))
    }

    /// Finite sequence; entries past the end are zero.
    pub fn finite(description: impl Into<String>, values: Vec<MPoly>) -> Self {
        let degree = values.len().saturating_sub(1);
        let values = Arc::new(values);
        Self {
            provider: Arc::new(move |k| values.get(k).cloned().unwrap_or_default()),
            description: description.into(),
            degree: Some(degree),
        }
    }

    pub fn from_rationals(description: impl Into<String>, values: &[Rational]) -> Self {
        Self::finite(description, values.iter().cloned().map(MPoly::constant).collect())
    }

    pub fn get(&self, k: usize) -> MPoly {
        (self.provider)(k)
    }

    pub fn prefix(&self, len: usize) -> Vec<MPoly> {
        (0..len).map(|k| self.get(k)).collect()
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    /// The sequence as an ordinary generating function of the given order.
    pub fn to_series(&self, order: usize) -> TSeries {
        TSeries::from_fn(order, |k| self.get(k))
    }
}

impl fmt::Debug for CoeffSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoeffSeq")
            .field("description", &self.description)
            .field("degree", &self.degree)
            .finish()
    }
}

/// b_n = sum_k C(n,k) (-1)^k a_k.
pub fn binomial_transform(a: &CoeffSeq, n: usize) -> MPoly {
    let row = rational::binomial_row(n as u64);
    let mut acc = MPoly::zero();
    for (k, c) in row.into_iter().enumerate() {
        let ak = a.get(k);
        if !ak.is_zero() {
            acc += &ak.scale(&(rational::sign(k as u64) * rational::big(c)));
        }
    }
    acc
}

/// The transform is an involution, so the inverse uses the same sum.
pub fn inverse_binomial_transform(b: &CoeffSeq, n: usize) -> MPoly {
    binomial_transform(b, n)
}

pub fn binomial_transform_prefix(a: &CoeffSeq, len: usize) -> Vec<MPoly> {
    let values = a.prefix(len);
    (0..len)
        .map(|n| {
            let row = rational::binomial_row(n as u64);
            let mut acc = MPoly::zero();
            for (k, c) in row.into_iter().enumerate() {
                if !values[k].is_zero() {
                    acc += &values[k].scale(&(rational::sign(k as u64) * rational::big(c)));
                }
            }
            acc
        })
        .collect()
}

/// Coefficients of the Euler transform computed directly:
/// sum_k C(n,k) mu^k lambda^(n-k) a_k.
pub fn euler_transform_direct(f: &TSeries, lambda: &Rational, mu: &Rational) -> TSeries {
    let n_max = f.order();
    let a = f.coeffs();
    let coeffs = (0..=n_max)
        .map(|n| {
            let row = rational::binomial_row(n as u64);
            let mut acc = MPoly::zero();
            for (k, c) in row.into_iter().enumerate() {
                if a[k].is_zero() {
                    continue;
                }
                let w = rational::big(c)
                    * num_traits::pow(mu.clone(), k)
                    * num_traits::pow(lambda.clone(), n - k);
                acc += &a[k].scale(&w);
            }
            acc
        })
        .collect();
    TSeries::new(coeffs, n_max).truncate_reliable_to(f)
}

/// `1/(1 - lambda t) * f(mu t / (1 - lambda t))`, computed by composition and
/// checked against the direct binomial sums.
pub fn euler_transform(f: &TSeries, lambda: &Rational, mu: &Rational) -> Result<TSeries> {
    let order = f.order();
    let arg = standard::euler_argument(mu, lambda, order)?;
    let prefactor = TSeries::new(vec![MPoly::one(), MPoly::constant(-lambda.clone())], order).inverse()?;
    let out = prefactor.mul(&f.compose(&arg)?)?;
    let direct = euler_transform_direct(f, lambda, mu);
    if !out.compare(&direct)?.equal() {
        return Err(Error::domain("euler transform: composition and binomial sums disagree"));
    }
    Ok(out)
}

/// sum_n a_n H_n(x) t^n / n! for an arbitrary weight sequence `a`.
pub fn hermite_weighted_lhs(a: impl Fn(usize) -> MPoly, order: usize) -> TSeries {
    let h = special::hermite_table(order as u64);
    TSeries::from_fn(order, |n| {
        let an = a(n);
        if an.is_zero() {
            return an;
        }
        let inv_fact = Rational::new(One::one(), rational::factorial(n as u64));
        (&an * &h[n]).scale(&inv_fact)
    })
}

/// sum_n a_n H_n(x) t^n / n!.
pub fn hermite_transform_lhs(a: &CoeffSeq, order: usize) -> TSeries {
    hermite_weighted_lhs(|n| a.get(n), order)
}

/// exp(2xt - t^2) * sum_n c_n H_n(x - t) t^n / n! for an arbitrary weight
/// sequence `c`.
pub fn hermite_weighted_rhs(c: impl Fn(usize) -> MPoly, order: usize) -> Result<TSeries> {
    let x_minus_t = TSeries::new(vec![MPoly::var(Symbol::X), MPoly::int(-1)], order);
    let h = special::hermite_series_table(order as u64, &x_minus_t)?;
    let mut sum = TSeries::zero(order);
    for (n, hn) in h.iter().enumerate() {
        let cn = c(n);
        if cn.is_zero() {
            continue;
        }
        let inv_fact = Rational::new(One::one(), rational::factorial(n as u64));
        sum = sum.add(&hn.shift_mul_t(n).scale(&cn.scale(&inv_fact)))?;
    }
    standard::hermite_gf(order)?.mul(&sum)
}

/// Right-hand side of the Hermite series transformation:
/// exp(2xt - t^2) * sum_n (-1)^n H_n(x - t) t^n / n! * b_n, with b_n the
/// binomial transform of `a` computed by direct summation.
pub fn hermite_transform_rhs(a: &CoeffSeq, order: usize) -> Result<TSeries> {
    let b = binomial_transform_prefix(a, order + 1);
    hermite_weighted_rhs(|n| b[n].scale(&rational::sign(n as u64)), order)
}

/// sum_n a_n g_n t^n for g = sum g_n t^n.
pub fn derivative_transform_lhs(a: &CoeffSeq, g: &TSeries) -> TSeries {
    TSeries::from_fn(g.order(), |n| &a.get(n) * &g.coeffs()[n])
}

/// sum_n (-1)^n g^(n)(t) t^n / n! * b_n, the general derivative form of the
/// transformation (any g, not only the Hermite generating function).
pub fn derivative_transform_rhs(a: &CoeffSeq, g: &TSeries) -> Result<TSeries> {
    let order = g.order();
    let b = binomial_transform_prefix(a, order + 1);
    let mut acc = TSeries::zero(order);
    let mut deriv = g.clone();
    for (n, bn) in b.iter().enumerate() {
        if n > 0 {
            deriv = deriv.derivative();
        }
        if bn.is_zero() {
            continue;
        }
        let w = rational::sign(n as u64) / rational::big(rational::factorial(n as u64));
        acc = acc.add(&deriv.shift_mul_t(n).scale(&bn.scale(&w)))?;
    }
    Ok(acc)
}

/// First coefficient where two series disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub power: usize,
    pub lhs: MPoly,
    pub rhs: MPoly,
}

/// Outcome of comparing two sides of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformReport {
    pub lhs: TSeries,
    pub rhs: TSeries,
    pub compared_order: Option<usize>,
    pub equal: bool,
    pub first_mismatch: Option<Mismatch>,
}

impl TransformReport {
    pub fn compare(lhs: TSeries, rhs: TSeries) -> Result<TransformReport> {
        let cmp = lhs.compare(&rhs)?;
        let first_mismatch = cmp.first_mismatch.map(|k| Mismatch {
            power: k,
            lhs: lhs.coeffs()[k].clone(),
            rhs: rhs.coeffs()[k].clone(),
        });
        Ok(TransformReport {
            compared_order: cmp.compared_order(),
            equal: first_mismatch.is_none(),
            first_mismatch,
            lhs,
            rhs,
        })
    }
}

/// f(n) = sum_j p_j n^j for the finite Taylor data `p`.
fn eval_poly_at_int(p: &[MPoly], n: usize) -> MPoly {
    let mut acc = MPoly::zero();
    let mut pow = Rational::one();
    let nn = rational::int(n as i64);
    for pj in p {
        if !pj.is_zero() && !pow.is_zero() {
            acc += &pj.scale(&pow);
        }
        pow *= &nn;
    }
    acc
}

fn taylor_data(f: &CoeffSeq) -> Result<Vec<MPoly>> {
    let degree = f.degree().ok_or_else(|| {
        Error::domain(format!(
            "{}: only polynomial multipliers are supported in exact mode",
            f.description()
        ))
    })?;
    Ok(f.prefix(degree + 1))
}

/// sum_k S(n, k) t^k g^(k)(t) for the row `S(n, 0..=n)`.
fn stirling_operator(row: &[Rational], g: &TSeries) -> Result<TSeries> {
    g.euler_operator_expanded(row)
}

/// Both sides of
/// `sum_n g_n f(n) t^n = sum_j p_j sum_k {j,k} t^k g^(k)(t)`
/// for a polynomial `f = sum_j p_j t^j`.
pub fn stirling_transform(f: &CoeffSeq, g: &TSeries) -> Result<TransformReport> {
    stirling_transform_with(f, g, &StirlingTable::plain())
}

pub fn stirling_transform_with(f: &CoeffSeq, g: &TSeries, table: &StirlingTable) -> Result<TransformReport> {
    let p = taylor_data(f)?;
    let order = g.order();
    let lhs = TSeries::from_fn(order, |n| &g.coeffs()[n] * &eval_poly_at_int(&p, n));
    let mut rhs = TSeries::zero(order);
    for (j, pj) in p.iter().enumerate() {
        if pj.is_zero() {
            continue;
        }
        let row = table.row(j as u64)?;
        rhs = rhs.add(&stirling_operator(&row, g)?.scale(pj))?;
    }
    TransformReport::compare(lhs.truncate_reliable_to(g), rhs)
}

/// Both sides of the r-Stirling transform:
/// `sum_{n>=r} g_n (n)_r f_r(n)/n^r t^n = sum_{j>=r} p_j sum_k {j,k}_r t^k g^(k)(t)`
/// where `f_r` drops the first `r` Taylor terms. `f_r(n)/n^r` is expanded as
/// `sum_{j>=r} p_j n^(j-r)`, so no division by `n` occurs.
pub fn r_stirling_transform(f: &CoeffSeq, g: &TSeries, r: usize) -> Result<TransformReport> {
    r_stirling_transform_with(f, g, &StirlingTable::restricted(r as u64))
}

pub fn r_stirling_transform_with(f: &CoeffSeq, g: &TSeries, table: &StirlingTable) -> Result<TransformReport> {
    let r = match table.kind() {
        crate::sequences::StirlingKind::Plain => 0,
        crate::sequences::StirlingKind::Restricted(r) => r as usize,
    };
    let p = taylor_data(f)?;
    let degree = p.iter().rposition(|c| !c.is_zero());
    if degree.is_none_or(|d| d < r) {
        return Err(Error::domain(format!(
            "{}: degree must be at least r = {r}",
            f.description()
        )));
    }
    let shifted = &p[r..];
    let order = g.order();
    let lhs = TSeries::from_fn(order, |n| {
        if n < r {
            return MPoly::zero();
        }
        let falling = rational::big(crate::sequences::falling_factorial_int(&n.into(), r as u64));
        (&g.coeffs()[n] * &eval_poly_at_int(shifted, n)).scale(&falling)
    });
    let mut rhs = TSeries::zero(order);
    for (j, pj) in p.iter().enumerate().skip(r) {
        if pj.is_zero() {
            continue;
        }
        let row = table.row(j as u64)?;
        rhs = rhs.add(&stirling_operator(&row, g)?.scale(pj))?;
    }
    TransformReport::compare(lhs.truncate_reliable_to(g), rhs)
}

impl TSeries {
    /// Caps the reliable prefix at that of `source`.
    pub(crate) fn truncate_reliable_to(self, source: &TSeries) -> TSeries {
        let keep = self.reliable_len().min(source.reliable_len());
        self.with_reliable(keep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use crate::sequences::{harmonic, harmonic2};

    #[test]
    fn all_ones_transform() {
        let ones = CoeffSeq::rational("1", |_| int(1));
        assert_eq!(binomial_transform(&ones, 0), MPoly::one());
        for n in 1..10 {
            assert!(binomial_transform(&ones, n).is_zero());
        }
    }

    #[test]
    fn reciprocal_is_fixed() {
        let a = CoeffSeq::rational("1/(k+1)", |k| frac(1, k as i64 + 1));
        for n in 0..12 {
            assert_eq!(binomial_transform(&a, n), MPoly::constant(frac(1, n as i64 + 1)));
        }
    }

    #[test]
    fn harmonic_over_k_gives_square_harmonic() {
        let a = CoeffSeq::rational("h_k/k", |k| {
            if k == 0 {
                int(0)
            } else {
                harmonic(k as u64) / int(k as i64)
            }
        });
        for n in 0..12 {
            assert_eq!(binomial_transform(&a, n), MPoly::constant(-harmonic2(n as u64)));
        }
    }

    #[test]
    fn euler_identity_and_examples() {
        let f = TSeries::from_rationals(&[int(2), int(-1), frac(1, 3), int(5)], 6);
        assert_eq!(euler_transform(&f, &int(0), &int(1)).unwrap(), f);

        // (1-t)^{-p-1} -> (1-t)^p
        let n = 10;
        let p = MPoly::var(Symbol::P);
        let log1mt = standard::poly_t(&[1, -1], n).log().unwrap();
        let f = log1mt.scale(&(&-&p - &MPoly::one())).exp().unwrap();
        let want = log1mt.scale(&p).exp().unwrap();
        assert_eq!(euler_transform(&f, &int(1), &int(-1)).unwrap(), want);

        // -log(1-t) -> log(1-t)/(1-t) = -sum h_n t^n
        let f = standard::neg_log_one_minus(n);
        let got = euler_transform(&f, &int(1), &int(-1)).unwrap();
        let want = TSeries::from_fn(n, |k| MPoly::constant(-harmonic(k as u64)));
        assert_eq!(got, want);
    }

    #[test]
    fn hermite_transform_all_ones_collapses() {
        let ones = CoeffSeq::rational("1", |_| int(1));
        let lhs = hermite_transform_lhs(&ones, 10);
        let rhs = hermite_transform_rhs(&ones, 10).unwrap();
        assert_eq!(lhs, standard::hermite_gf(10).unwrap());
        assert_eq!(rhs, lhs);
    }

    #[test]
    fn hermite_transform_reciprocal() {
        let a = CoeffSeq::rational("1/(k+1)", |k| frac(1, k as i64 + 1));
        let lhs = hermite_transform_lhs(&a, 12);
        let rhs = hermite_transform_rhs(&a, 12).unwrap();
        let report = TransformReport::compare(lhs, rhs).unwrap();
        assert!(report.equal);
        assert_eq!(report.compared_order, Some(12));
    }

    #[test]
    fn derivative_form_with_hermite_gf_matches_explicit_rhs() {
        let a = CoeffSeq::rational("k^2 - 3", |k| int((k * k) as i64 - 3));
        let g = standard::hermite_gf(9).unwrap();
        let via_derivatives = derivative_transform_rhs(&a, &g).unwrap();
        let explicit = hermite_transform_rhs(&a, 9).unwrap();
        let cmp = via_derivatives.compare(&explicit).unwrap();
        assert!(cmp.equal());
        assert_eq!(cmp.compared_order(), Some(9));
    }

    #[test]
    fn stirling_transform_constant_multiplier() {
        let f = CoeffSeq::from_rationals("1", &[int(1)]);
        let g = standard::hermite_gf(8).unwrap();
        let r = stirling_transform(&f, &g).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, g);
    }

    #[test]
    fn stirling_transform_rejects_non_polynomial() {
        let f = CoeffSeq::rational("1/k!", |k| Rational::new(One::one(), rational::factorial(k as u64)));
        let g = standard::geometric(5);
        assert!(matches!(stirling_transform(&f, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn r_stirling_transform_cases() {
        let g = standard::hermite_gf(10).unwrap();
        let cubic = CoeffSeq::from_rationals("t^3", &[int(0), int(0), int(0), int(1)]);
        assert!(r_stirling_transform(&cubic, &g, 1).unwrap().equal);
        // r = 0 reduces to the plain transform
        let a = r_stirling_transform(&cubic, &g, 0).unwrap();
        let b = stirling_transform(&cubic, &g).unwrap();
        assert_eq!(a, b);
        let low = CoeffSeq::from_rationals("t", &[int(0), int(1)]);
        assert!(matches!(r_stirling_transform(&low, &g, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn report_records_first_mismatch() {
        let a = standard::geometric(5);
        let mut coeffs = a.coeffs().to_vec();
        coeffs[3] = MPoly::int(7);
        let r = TransformReport::compare(a, TSeries::new(coeffs, 5)).unwrap();
        assert!(!r.equal);
        let m = r.first_mismatch.unwrap();
        assert_eq!((m.power, m.lhs, m.rhs), (3, MPoly::one(), MPoly::int(7)));
    }
}
