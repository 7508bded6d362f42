//! Hermite, Laguerre, exponential, geometric and r-variant polynomials.
//!
//! Each family has a primary construction and at least one independent
//! route used as a test oracle:
//!
//! * Hermite: three-term recurrence, generating-function extraction, and
//!   Rodrigues differentiation of `exp(-x^2)`.
//! * Laguerre: explicit binomial sum and generating-function extraction.
//! * Exponential/geometric polynomials: Stirling sums, checked against the
//!   Euler-operator characterisation.
//! * r-exponential/r-geometric polynomials: *defined* by the Euler-operator
//!   equations; the Stirling-sum closed forms are only cross-checked.
//!
//! Polynomials in the series variable `t` (the exponential and geometric
//! families) are returned as coefficient vectors and rendered in `x`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Symbol};
use crate::rational::{self, Rational};
use crate::sequences::{stirling2, StirlingTable};
use crate::series::{standard, TSeries};

/// H_n(x), physicists' convention, from H_{n+1} = 2x H_n - 2n H_{n-1}.
pub fn hermite(n: u64) -> MPoly {
    hermite_table(n).pop().unwrap()
}

/// H_0 ..= H_n in one pass of the recurrence.
pub fn hermite_table(n: u64) -> Vec<MPoly> {
    let two_x = MPoly::var(Symbol::X).scale(&rational::int(2));
    let mut out = vec![MPoly::one()];
    if n >= 1 {
        out.push(two_x.clone());
    }
    for k in 1..n as usize {
        let next = &(&two_x * &out[k]) - &out[k - 1].scale(&rational::int(2 * k as i64));
        out.push(next);
    }
    out
}

/// H_n in an arbitrary symbol.
pub fn hermite_in(n: u64, s: Symbol) -> MPoly {
    hermite(n).substitute(Symbol::X, &MPoly::var(s))
}

/// H_n(arg) for a polynomial argument, by substitution.
pub fn hermite_shifted(n: u64, arg: &MPoly) -> MPoly {
    hermite(n).substitute(Symbol::X, arg)
}

/// H_0(arg) ..= H_n(arg) for a series argument such as `x - t`, via the
/// three-term recurrence carried out in series arithmetic.
pub fn hermite_series_table(n: u64, arg: &TSeries) -> Result<Vec<TSeries>> {
    let order = arg.order();
    let two_arg = arg.scale_rational(&rational::int(2));
    let mut out = vec![TSeries::one(order)];
    if n >= 1 {
        out.push(two_arg.clone());
    }
    for k in 1..n as usize {
        let next = two_arg
            .mul(&out[k])?
            .sub(&out[k - 1].scale_rational(&rational::int(2 * k as i64)))?;
        out.push(next);
    }
    Ok(out)
}

/// H_n(x) from the generating function `exp(2xt - t^2)`: n! times the
/// coefficient of t^n.
pub fn hermite_from_gf(max_n: u64) -> Result<Vec<MPoly>> {
    let gf = standard::hermite_gf(max_n as usize)?;
    Ok(gf
        .coeffs()
        .iter()
        .enumerate()
        .map(|(n, c)| c.scale(&rational::big(rational::factorial(n as u64))))
        .collect())
}

/// H_n(x) from the Rodrigues formula. Writing
/// `(d/dx)^n exp(-x^2) = P_n(x) exp(-x^2)` gives `P_{n+1} = P_n' - 2x P_n`
/// and `H_n = (-1)^n P_n`.
pub fn hermite_rodrigues(n: u64) -> MPoly {
    let x = MPoly::var(Symbol::X);
    let mut p = MPoly::one();
    for _ in 0..n {
        p = &p.derivative(Symbol::X) - &(&x * &p).scale(&rational::int(2));
    }
    p.scale(&rational::sign(n))
}

/// L_n(z) = sum_k C(n,k) (-1)^k z^k / k!.
pub fn laguerre(n: u64) -> MPoly {
    let coeffs: Vec<Rational> = (0..=n)
        .map(|k| {
            rational::sign(k) * rational::big(rational::binomial(n, k))
                / rational::big(rational::factorial(k))
        })
        .collect();
    MPoly::univariate(Symbol::Z, &coeffs)
}

/// L_0 ..= L_max from `exp(-zt/(1-t)) / (1-t)`.
pub fn laguerre_from_gf(max_n: u64) -> Result<Vec<MPoly>> {
    let n = max_n as usize;
    let geo = standard::geometric(n);
    let arg = TSeries::t(n).mul(&geo)?.scale(&-MPoly::var(Symbol::Z));
    Ok(geo.mul(&arg.exp()?)?.into_coeffs())
}

/// Coefficients of phi_n(t) = sum_k {n,k} t^k.
pub fn exp_poly_coeffs(n: u64) -> Vec<Rational> {
    (0..=n).map(|k| rational::big(stirling2(n, k))).collect()
}

/// Coefficients of w_n(t) = sum_k {n,k} k! t^k.
pub fn geom_poly_coeffs(n: u64) -> Vec<Rational> {
    (0..=n)
        .map(|k| rational::big(stirling2(n, k) * rational::factorial(k)))
        .collect()
}

pub fn exp_poly(n: u64) -> MPoly {
    MPoly::univariate(Symbol::X, &exp_poly_coeffs(n))
}

pub fn geom_poly(n: u64) -> MPoly {
    MPoly::univariate(Symbol::X, &geom_poly_coeffs(n))
}

fn check_r(n: u64, r: u64) -> Result<()> {
    if n < r {
        return Err(Error::domain(format!("need n >= r, got n = {n}, r = {r}")));
    }
    Ok(())
}

/// Reads a polynomial of degree at most `n` off a series, rejecting any
/// nonzero coefficient above the degree.
fn polynomial_part(s: &TSeries, n: u64) -> Result<Vec<Rational>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    for (k, c) in s.coeffs()[..s.reliable_len()].iter().enumerate() {
        let q = c
            .as_constant()
            .ok_or_else(|| Error::domain(format!("coefficient of t^{k} is not a scalar: {c}")))?;
        if k as u64 > n {
            if !q.is_zero() {
                return Err(Error::domain(format!(
                    "operator image is not a polynomial of degree {n} (t^{k} coefficient {q})"
                )));
            }
        } else {
            out.push(q);
        }
    }
    Ok(out)
}

/// `(t d/dt)^{n-r} t^r e^t` as a series of the given order.
pub fn r_exp_operator_series(n: u64, r: u64, order: usize) -> Result<TSeries> {
    check_r(n, r)?;
    let et = TSeries::t(order).exp()?;
    Ok(et.shift_mul_t(r as usize).euler_operator((n - r) as u32))
}

/// `r! (t d/dt)^{n-r} t^r / (1-t)^{r+1}` as a series of the given order.
pub fn r_geom_operator_series(n: u64, r: u64, order: usize) -> Result<TSeries> {
    check_r(n, r)?;
    let base = standard::geometric(order).pow(r as u32 + 1)?;
    let scaled = base
        .shift_mul_t(r as usize)
        .scale_rational(&rational::big(rational::factorial(r)));
    Ok(scaled.euler_operator((n - r) as u32))
}

/// Coefficients of the r-exponential polynomial, obtained by applying the
/// operator to `t^r e^t` and dividing out `e^t`.
pub fn r_exp_poly_coeffs(n: u64, r: u64) -> Result<Vec<Rational>> {
    let order = n as usize + 2;
    let lhs = r_exp_operator_series(n, r, order)?;
    let e_minus_t = TSeries::t(order).neg().exp()?;
    polynomial_part(&lhs.mul(&e_minus_t)?, n)
}

/// Coefficients of the r-geometric polynomial: multiply the operator image by
/// `1 - t` and undo the substitution `u = t/(1-t)` via `t = u/(1+u)`.
pub fn r_geom_poly_coeffs(n: u64, r: u64) -> Result<Vec<Rational>> {
    let order = n as usize + 2;
    let lhs = r_geom_operator_series(n, r, order)?;
    let g = lhs.mul(&standard::poly_t(&[1, -1], order))?;
    let back = standard::euler_argument(&rational::int(1), &rational::int(-1), order)?;
    polynomial_part(&g.compose(&back)?, n)
}

/// Stirling-sum candidate for the r-exponential polynomial.
pub fn r_exp_poly_closed_form(n: u64, r: u64) -> Result<Vec<Rational>> {
    check_r(n, r)?;
    let table = StirlingTable::restricted(r);
    (0..=n).map(|k| table.get(n, k).map(rational::big)).collect()
}

/// Stirling-sum candidate for the r-geometric polynomial.
pub fn r_geom_poly_closed_form(n: u64, r: u64) -> Result<Vec<Rational>> {
    check_r(n, r)?;
    let table = StirlingTable::restricted(r);
    (0..=n)
        .map(|k| table.get(n, k).map(|s| rational::big(s * rational::factorial(k))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Hermite,
    Laguerre,
    ExpPoly,
    GeomPoly,
    RExpPoly(u64),
    RGeomPoly(u64),
}

impl Family {
    pub fn parse(name: &str, r: Option<u64>) -> Result<Family> {
        let need_r = || r.ok_or_else(|| Error::Parse(format!("{name} needs r")));
        Ok(match name {
            "hermite" => Family::Hermite,
            "laguerre" => Family::Laguerre,
            "exp-poly" | "exp_poly" => Family::ExpPoly,
            "geom-poly" | "geom_poly" => Family::GeomPoly,
            "r-exp-poly" | "r_exp_poly" => Family::RExpPoly(need_r()?),
            "r-geom-poly" | "r_geom_poly" => Family::RGeomPoly(need_r()?),
            other => return Err(Error::Parse(format!("unknown polynomial family {other:?}"))),
        })
    }

    pub fn variable(self) -> Symbol {
        match self {
            Family::Laguerre => Symbol::Z,
            _ => Symbol::X,
        }
    }
}

/// A member of one of the polynomial families, rendered in the family's
/// variable (`z` for Laguerre, `x` otherwise).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFamily {
    pub family: Family,
    pub degree: u64,
    pub value: MPoly,
}

impl PolyFamily {
    pub fn build(family: Family, n: u64) -> Result<PolyFamily> {
        let value = match family {
            Family::Hermite => hermite(n),
            Family::Laguerre => laguerre(n),
            Family::ExpPoly => exp_poly(n),
            Family::GeomPoly => geom_poly(n),
            Family::RExpPoly(r) => MPoly::univariate(Symbol::X, &r_exp_poly_coeffs(n, r)?),
            Family::RGeomPoly(r) => MPoly::univariate(Symbol::X, &r_geom_poly_coeffs(n, r)?),
        };
        Ok(PolyFamily {
            family,
            degree: n,
            value,
        })
    }

    /// Value at 1 for the univariate families.
    pub fn at_one(&self) -> Rational {
        let mut v = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
        v[self.family.variable().index()] = rational::int(1);
        self.value.eval_rational(&v)
    }
}

impl fmt::Display for PolyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Leading coefficient of H_n, for the degree invariant.
pub fn hermite_leading(n: u64) -> BigInt {
    BigInt::from(2).pow(n as u32)
}
