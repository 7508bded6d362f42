//! Double-precision evaluation of both sides of registered identities and
//! partial-sum convergence measurements.
//!
//! Series identities with Hermite weights, and the bilinear Mehler family,
//! are summed term by term in floating point. Every other record falls back
//! to its exact series, whose coefficients are evaluated at the point.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::registry::{IdentityRecord, Registry};
use crate::sequences::Sequences;

pub const SAFETY_RADIUS: f64 = 0.25;
pub const DEFAULT_TRUNCATION: usize = 30;
/// Value used for the symbol `p` when a point does not specify it.
pub const DEFAULT_P: f64 = 0.5;
/// Highest truncation for the exact-series fallback.
pub const EXACT_FALLBACK_MAX: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub t: f64,
    pub p: f64,
    pub truncation: usize,
}

impl EvalPoint {
    pub fn new(x: f64, y: f64, z: f64, t: f64) -> Self {
        Self {
            x,
            y,
            z,
            t,
            p: DEFAULT_P,
            truncation: DEFAULT_TRUNCATION,
        }
    }

    pub fn with_truncation(mut self, truncation: usize) -> Self {
        self.truncation = truncation;
        self
    }

    /// Parses `x,y,z,t`.
    pub fn parse(text: &str) -> Result<EvalPoint> {
        let parts: Vec<f64> = text
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse(format!("point {text:?}: {e}")))?;
        match parts[..] {
            [x, y, z, t] => Ok(EvalPoint::new(x, y, z, t)),
            _ => Err(Error::Parse(format!("point {text:?}: expected x,y,z,t"))),
        }
    }

    fn values(&self) -> [f64; 4] {
        [self.x, self.y, self.z, self.p]
    }

    pub fn check(&self) -> Result<()> {
        let all = [self.x, self.y, self.z, self.t, self.p];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("evaluation point must be finite"));
        }
        if self.t.abs() > SAFETY_RADIUS {
            return Err(Error::domain(format!(
                "|t| = {} exceeds the safety radius {SAFETY_RADIUS}",
                self.t.abs()
            )));
        }
        Ok(())
    }
}

/// Neumaier's compensated sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut s = CompensatedSum::default();
    values.iter().for_each(|&v| s.add(v));
    s.value()
}

/// Partial sums S_0 = 0, S_1, ..., S_len.
pub fn partial_sums(terms: &[f64]) -> Vec<f64> {
    let mut s = CompensatedSum::default();
    let mut out = vec![0.0];
    for &v in terms {
        s.add(v);
        out.push(s.value());
    }
    out
}

/// H_0(x) ..= H_n(x) in floating point.
pub fn hermite_values(n: usize, x: f64) -> Vec<f64> {
    let mut h = vec![1.0];
    if n >= 1 {
        h.push(2.0 * x);
    }
    for k in 1..n {
        h.push(2.0 * x * h[k] - 2.0 * k as f64 * h[k - 1]);
    }
    h
}

/// Term vectors of both sides; sides given in closed form are one term.
#[derive(Debug, Clone, PartialEq)]
pub struct Terms {
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
}

fn powers_over_factorial(n: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = 1.0;
    for k in 0..=n {
        if k > 0 {
            v *= t / k as f64;
        }
        out.push(v);
    }
    out
}

fn hermite_weight_terms(record: &IdentityRecord, seqs: &Sequences, pt: &EvalPoint) -> Option<Terms> {
    let w = record.weights.as_ref()?;
    let n = pt.truncation;
    let vals = pt.values();
    let hx = hermite_values(n, pt.x);
    let hs = hermite_values(n, pt.x - pt.t);
    let tn = powers_over_factorial(n, pt.t);
    let pre = (2.0 * pt.x * pt.t - pt.t * pt.t).exp();
    let lhs = (0..=n).map(|k| (w.lhs)(seqs, k).eval_f64(&vals) * hx[k] * tn[k]).collect();
    let rhs = (0..=n)
        .map(|k| pre * (w.rhs)(seqs, k).eval_f64(&vals) * hs[k] * tn[k])
        .collect();
    Some(Terms { lhs, rhs })
}

fn bilinear_terms(pt: &EvalPoint) -> Vec<f64> {
    let n = pt.truncation;
    let hx = hermite_values(n, pt.x);
    let hz = hermite_values(n, pt.z);
    let tn = powers_over_factorial(n, pt.t);
    (0..=n).map(|k| hx[k] * hz[k] * tn[k]).collect()
}

fn bilinear_y_terms(pt: &EvalPoint) -> Vec<f64> {
    let n = pt.truncation;
    let (x, y, z, t) = (pt.x, pt.y, pt.z, pt.t);
    let ha = hermite_values(n, x - 2.0 * y * t);
    let hb = hermite_values(n, z - y);
    let tn = powers_over_factorial(n, t);
    let pre = (4.0 * x * y * t - 4.0 * y * y * t * t).exp();
    (0..=n).map(|k| pre * ha[k] * hb[k] * tn[k]).collect()
}

/// Closed form `(1-4t^2)^{-1/2} exp{x^2 - (x-2zt)^2/(1-4t^2)}`.
pub fn mehler_closed_form(x: f64, z: f64, t: f64) -> f64 {
    let d = 1.0 - 4.0 * t * t;
    let e = x - 2.0 * z * t;
    (x * x - e * e / d).exp() / d.sqrt()
}

/// Coefficients of the exact series evaluated at the point.
fn exact_terms(record: &IdentityRecord, seqs: &Sequences, pt: &EvalPoint) -> Result<Terms> {
    let order = pt.truncation.min(EXACT_FALLBACK_MAX);
    let (l, r) = record.build(seqs, order)?;
    let vals = pt.values();
    let side = |s: &crate::TSeries| -> Vec<f64> {
        let len = s.reliable_len();
        let mut tk = 1.0;
        s.coeffs()[..len]
            .iter()
            .map(|c| {
                let v = c.eval_f64(&vals) * tk;
                tk *= pt.t;
                v
            })
            .collect()
    };
    Ok(Terms {
        lhs: side(&l),
        rhs: side(&r),
    })
}

/// Term vectors of both sides of `id` at `pt`.
pub fn identity_terms(reg: &Registry, id: &str, pt: &EvalPoint) -> Result<Terms> {
    pt.check()?;
    let record = reg.lookup(id)?;
    if let Some(terms) = hermite_weight_terms(record, reg.sequences(), pt) {
        return Ok(terms);
    }
    let closed = || vec![mehler_closed_form(pt.x, pt.z, pt.t)];
    match id {
        "EQ39" => Ok(Terms {
            lhs: bilinear_terms(pt),
            rhs: bilinear_y_terms(pt),
        }),
        "EQ40-MEHLER" => Ok(Terms {
            lhs: bilinear_terms(pt),
            rhs: closed(),
        }),
        "EQ41" => Ok(Terms {
            lhs: closed(),
            rhs: bilinear_y_terms(pt),
        }),
        _ => exact_terms(record, reg.sequences(), pt),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericEval {
    pub identity: String,
    pub point: EvalPoint,
    pub lhs: f64,
    pub rhs: f64,
    pub absdiff: f64,
}

pub fn eval_identity(reg: &Registry, id: &str, pt: &EvalPoint) -> Result<NumericEval> {
    let terms = identity_terms(reg, id, pt)?;
    let lhs = compensated_sum(&terms.lhs);
    let rhs = compensated_sum(&terms.rhs);
    Ok(NumericEval {
        identity: id.to_string(),
        point: *pt,
        lhs,
        rhs,
        absdiff: (lhs - rhs).abs(),
    })
}

/// `k^alpha` with the `k = 0` term taken as 0.
fn real_power(k: usize, alpha: f64) -> f64 {
    if k == 0 {
        0.0
    } else {
        (alpha * (k as f64).ln()).exp()
    }
}

/// Stirling function `{alpha, n} = (1/n!) sum_k C(n,k) (-1)^{n-k} k^alpha`.
pub fn stirling_function(alpha: f64, n: usize) -> f64 {
    let mut s = CompensatedSum::default();
    let mut c = 1.0;
    for k in 0..=n {
        if k > 0 {
            c *= (n - k + 1) as f64 / k as f64;
        }
        let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        s.add(sign * c * real_power(k, alpha));
    }
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    s.value() / fact
}

/// Both sides of `sum k^alpha H_k(x) t^k/k! = exp(2xt-t^2) sum {alpha,n} H_n(x-t) t^n`
/// for real `alpha`.
pub fn stirling_function_terms(alpha: f64, pt: &EvalPoint) -> Result<Terms> {
    pt.check()?;
    if alpha <= 0.0 {
        return Err(Error::domain("alpha must be positive"));
    }
    let n = pt.truncation;
    let hx = hermite_values(n, pt.x);
    let hs = hermite_values(n, pt.x - pt.t);
    let tn = powers_over_factorial(n, pt.t);
    let pre = (2.0 * pt.x * pt.t - pt.t * pt.t).exp();
    let lhs = (0..=n).map(|k| real_power(k, alpha) * hx[k] * tn[k]).collect();
    let rhs = (0..=n)
        .map(|k| pre * stirling_function(alpha, k) * hs[k] * pt.t.powi(k as i32))
        .collect();
    Ok(Terms { lhs, rhs })
}

pub fn eval_stirling_function_series(alpha: f64, pt: &EvalPoint) -> Result<NumericEval> {
    let terms = stirling_function_terms(alpha, pt)?;
    let lhs = compensated_sum(&terms.lhs);
    let rhs = compensated_sum(&terms.rhs);
    Ok(NumericEval {
        identity: format!("EQ53(alpha={alpha})"),
        point: *pt,
        lhs,
        rhs,
        absdiff: (lhs - rhs).abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccelReport {
    pub identity: String,
    pub point: EvalPoint,
    pub tol: f64,
    pub lhs_terms_to_tol: usize,
    pub rhs_terms_to_tol: usize,
    pub lhs_converged: bool,
    pub rhs_converged: bool,
}

/// Smallest `m` such that every partial sum from `S_m` on lies within `tol`
/// of the full sum, and whether the last term itself is below `tol`.
fn terms_to_tol(terms: &[f64], tol: f64) -> (usize, bool) {
    let sums = partial_sums(terms);
    let reference = *sums.last().unwrap();
    let mut m = sums.len() - 1;
    while m > 0 && (sums[m - 1] - reference).abs() < tol {
        m -= 1;
    }
    let converged = terms.len() <= 1 || terms.last().is_some_and(|v| v.abs() < tol);
    (m, converged)
}

pub fn measure_acceleration(reg: &Registry, id: &str, pt: &EvalPoint, tol: f64) -> Result<AccelReport> {
    let terms = identity_terms(reg, id, pt)?;
    let (lhs_terms_to_tol, lhs_converged) = terms_to_tol(&terms.lhs, tol);
    let (rhs_terms_to_tol, rhs_converged) = terms_to_tol(&terms.rhs, tol);
    Ok(AccelReport {
        identity: id.to_string(),
        point: *pt,
        tol,
        lhs_terms_to_tol,
        rhs_terms_to_tol,
        lhs_converged,
        rhs_converged,
    })
}

pub const EVAL_CSV_HEADER: &str = "identity,x,y,z,t,truncation,lhs,rhs,absdiff";
pub const ACCEL_CSV_HEADER: &str =
    "identity,x,y,z,t,truncation,tol,lhs_terms_to_tol,rhs_terms_to_tol,lhs_converged,rhs_converged";

pub fn eval_csv(rows: &[NumericEval]) -> String {
    let mut out = format!("{EVAL_CSV_HEADER}\n");
    for r in rows {
        let p = &r.point;
        writeln!(
            out,
            "{},{},{},{},{},{},{:e},{:e},{:e}",
            r.identity, p.x, p.y, p.z, p.t, p.truncation, r.lhs, r.rhs, r.absdiff
        )
        .unwrap();
    }
    out
}

pub fn accel_csv(rows: &[AccelReport]) -> String {
    let mut out = format!("{ACCEL_CSV_HEADER}\n");
    for r in rows {
        let p = &r.point;
        writeln!(
            out,
            "{},{},{},{},{},{},{:e},{},{},{},{}",
            r.identity,
            p.x,
            p.y,
            p.z,
            p.t,
            p.truncation,
            r.tol,
            r.lhs_terms_to_tol,
            r.rhs_terms_to_tol,
            r.lhs_converged,
            r.rhs_converged
        )
        .unwrap();
    }
    out
}
