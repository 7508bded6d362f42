use num_traits::{One, Zero};

use std::sync::Arc;

use super::{IdentityRecord, Kind, Weight};
use crate::error::Result;
use crate::mpoly::{MPoly, Symbol};
use crate::rational::{self, Rational};
use crate::sequences::{binom_symbolic, falling_factorial, Sequences};
use crate::series::{standard, TSeries};
use crate::special;
use crate::transforms::{hermite_weighted_lhs, hermite_weighted_rhs};

use Symbol::{P, X, Y, Z};

/// Citation labels accepted in `paper_eq`, with a short description.
pub const BIBLIOGRAPHY: &[(&str, &str)] = &[
    ("Eq. 1", "generating function exp(2xt - t^2)"),
    ("Eq. 12", "weights 1/(n+1)"),
    ("Eq. 13", "binomial transform of 1/(k+1)"),
    ("Eq. 14", "-log(1-t)/t"),
    ("Eq. 15", "invariance of -log(1-t)/t"),
    ("Eq. 17", "binomial transform of 1/k"),
    ("Eq. 18", "log(1-t)/(1-t)"),
    ("Eq. 19", "weights 1/n against harmonic numbers"),
    ("Eq. 20", "harmonic weights against 1/n"),
    ("Eq. 21", "inverse transform of harmonic numbers"),
    ("Eq. 22", "weights h_n/(n+1)"),
    ("Eq. 23", "binomial transform of h_k/(k+1)"),
    ("Eq. 24", "log^2(1-t)/(2t)"),
    ("Eq. 25", "anti-invariance of log^2(1-t)/(2t)"),
    ("Eq. 27", "binomial transform of h_k/k"),
    ("Eq. 28", "Li_2(t) + log^2(1-t)/2"),
    ("Eq. 29-30", "Landen identity"),
    ("Eq. 30", "-Li_2(t)/(1-t)"),
    ("Eq. 31", "weights h_n/n against square harmonic numbers"),
    ("Eq. 32", "Laguerre binomial sum"),
    ("Eq. 33", "Laguerre generating function"),
    ("Eq. 34", "Hermite-Laguerre bilinear series"),
    ("Eq. 35", "Laguerre-Hermite bilinear series"),
    ("Eq. 36", "Hermite addition formula"),
    ("Eq. 37", "Hermite addition formula as a binomial transform"),
    ("Eq. 39", "bilinear Hermite series with free y"),
    ("Eq. 40", "Mehler formula"),
    ("Eq. 41", "Mehler closed form against the y series"),
    ("Eq. 42", "binomial transform of C(p+k,k)"),
    ("Eq. 43", "(1-t)^(-p-1)"),
    ("Eq. 44", "(1-t)^p"),
    ("Eq. 45", "weights C(p+n,n)"),
    ("Eq. 46", "finite right side for integer p"),
    ("Eq. 47", "Stirling row sums"),
    ("Eq. 48", "inverse Stirling row sums"),
    ("Eq. 49", "signed inverse Stirling row sums"),
    ("Eq. 50", "Stirling weights"),
    ("Eq. 52", "Stirling functions as binomial transforms"),
    ("Eq. 53", "weights k^alpha"),
    ("Eq. 54", "weights k^m"),
    ("Eq. 55", "exponential number recurrence"),
    ("Eq. 56", "inverse exponential number recurrence"),
    ("Eq. 57", "signed inverse exponential number recurrence"),
    ("Eq. 58", "exponential number weights"),
    ("Eq. 59", "geometric number recurrence"),
    ("Eq. 60", "inverse geometric number recurrence"),
    ("Eq. 61", "signed inverse geometric number recurrence"),
    ("Eq. 62", "geometric number weights"),
    ("Eq. 63", "Fibonacci generating function"),
    ("Eq. 64", "Euler transform of the Fibonacci generating function"),
    ("Eq. 65", "even-index Fibonacci generating function"),
    ("Eq. 66", "F_2n as a binomial sum"),
    ("Eq. 67", "inverse of F_2n binomial sum"),
    ("Eq. 68", "signed inverse of F_2n binomial sum"),
    ("Eq. 69", "weights F_2n"),
    ("Eq. 70", "alternating Fibonacci generating function"),
    ("Eq. 71", "Euler transform of the alternating Fibonacci generating function"),
    ("Eq. 72", "binomial transform of F_k"),
    ("Eq. 73", "Fibonacci weights"),
    ("Eq. 74", "alternating Fibonacci weights"),
    ("Eq. 75", "Lucas generating function"),
    ("Eq. 76", "invariance of the Lucas generating function"),
    ("Eq. 77", "binomial transform of L_k"),
    ("Eq. 78", "Lucas weights"),
    ("Eq. 79", "alternating Lucas generating function"),
    ("Eq. 80", "Euler transform of the alternating Lucas generating function"),
    ("Eq. 81", "even-index Lucas generating function"),
    ("Eq. 82", "L_2n as a binomial sum"),
    ("Eq. 83", "inverse of L_2n binomial sum"),
    ("Eq. 84", "signed inverse of L_2n binomial sum"),
    ("Eq. 85", "weights L_2n"),
    ("Eq. 86", "alternating Lucas weights"),
    ("Eq. 88", "polynomial multipliers"),
    ("Eq. 89+", "r-Stirling closed form for n^m"),
    ("Eq. 90", "r-Stirling closed form for polynomial multipliers"),
    ("Eq. 93", "powers through falling factorials"),
    ("Eq. 95", "Euler operator on e^t"),
    ("Eq. 96", "Euler operator on 1/(1-t)"),
    ("Eq. 99", "r-Stirling falling factorial expansion"),
    ("Eq. 102", "Euler operator on t^r e^t"),
    ("Eq. 105", "Euler operator on t^r/(1-t)^(r+1)"),
    ("Eq. dd", "powers of the Euler operator"),
];

fn konst(q: Rational) -> MPoly {
    MPoly::constant(q)
}

fn q(n: i64, d: i64) -> MPoly {
    konst(rational::frac(n, d))
}

fn sign(n: usize) -> Rational {
    rational::sign(n as u64)
}

fn fact(n: usize) -> Rational {
    rational::big(rational::factorial(n as u64))
}

fn var_pow(s: Symbol, e: usize) -> MPoly {
    MPoly::var(s).pow(e as u32)
}

#[derive(Clone, Copy)]
enum Alt {
    None,
    K,
    NMinusK,
}

/// sum_k C(n,k) s_k f(k) with the chosen sign pattern.
fn binom_sum(n: usize, alt: Alt, f: impl Fn(usize) -> MPoly) -> MPoly {
    let mut acc = MPoly::zero();
    for (k, c) in rational::binomial_row(n as u64).into_iter().enumerate() {
        let fk = f(k);
        if fk.is_zero() {
            continue;
        }
        let s = match alt {
            Alt::None => Rational::one(),
            Alt::K => sign(k),
            Alt::NMinusK => sign(n - k),
        };
        acc += &fk.scale(&(s * rational::big(c)));
    }
    acc
}

fn h(s: &Sequences, n: usize) -> Rational {
    s.harmonic.get(n)
}

fn h2(s: &Sequences, n: usize) -> Rational {
    s.harmonic2.get(n)
}

fn fib(s: &Sequences, n: usize) -> MPoly {
    konst(s.fibonacci.get(n))
}

fn luc(s: &Sequences, n: usize) -> MPoly {
    konst(s.lucas.get(n))
}

/// phi_n as a row sum of the Stirling table.
fn phi_stirling(s: &Sequences, n: usize) -> Rational {
    (0..=n as u64).map(|k| s.stirling2(n as u64, k)).sum()
}

/// w_n as a weighted row sum of the Stirling table.
fn w_stirling(s: &Sequences, n: usize) -> Rational {
    (0..=n).map(|k| s.stirling2(n as u64, k as u64) * fact(k)).sum()
}

fn inv_n(n: usize) -> Rational {
    if n == 0 {
        Rational::zero()
    } else {
        rational::frac(1, n as i64)
    }
}

/// Series record `sum a_n H_n(x) t^n/n! = exp(2xt-t^2) sum c_n H_n(x-t) t^n/n!`
/// with both weight sequences stated explicitly.
fn pair(
    id: &str,
    eq: &str,
    symbols: &[Symbol],
    a: impl Fn(&Sequences, usize) -> MPoly + Send + Sync + 'static,
    c: impl Fn(&Sequences, usize) -> MPoly + Send + Sync + 'static,
) -> IdentityRecord {
    let a: Weight = Arc::new(a);
    let c: Weight = Arc::new(c);
    let (wa, wc) = (a.clone(), c.clone());
    IdentityRecord::new(
        id,
        eq,
        Kind::Series,
        symbols,
        move |s, n| Ok(hermite_weighted_lhs(|k| a(s, k), n)),
        move |s, n| hermite_weighted_rhs(|k| c(s, k), n),
    )
    .with_weights(move |s, n| wa(s, n), move |s, n| wc(s, n))
}

/// Finite-sum record; coefficient n of each side is its value at n.
fn finite(
    id: &str,
    eq: &str,
    symbols: &[Symbol],
    lhs: impl Fn(&Sequences, usize) -> MPoly + Send + Sync + 'static,
    rhs: impl Fn(&Sequences, usize) -> MPoly + Send + Sync + 'static,
) -> IdentityRecord {
    IdentityRecord::new(
        id,
        eq,
        Kind::FiniteSum,
        symbols,
        move |s, n| Ok(TSeries::from_fn(n, |k| lhs(s, k))),
        move |s, n| Ok(TSeries::from_fn(n, |k| rhs(s, k))),
    )
}

fn gf(
    id: &str,
    eq: &str,
    symbols: &[Symbol],
    lhs: impl Fn(&Sequences, usize) -> Result<TSeries> + Send + Sync + 'static,
    rhs: impl Fn(&Sequences, usize) -> Result<TSeries> + Send + Sync + 'static,
) -> IdentityRecord {
    IdentityRecord::new(id, eq, Kind::GeneratingFunction, symbols, lhs, rhs)
}

fn operator(
    id: &str,
    eq: &str,
    symbols: &[Symbol],
    lhs: impl Fn(&Sequences, usize) -> Result<TSeries> + Send + Sync + 'static,
    rhs: impl Fn(&Sequences, usize) -> Result<TSeries> + Send + Sync + 'static,
) -> IdentityRecord {
    IdentityRecord::new(id, eq, Kind::Operator, symbols, lhs, rhs)
}

/// `1/(1-t) f(mu t/(1-t))` by composition.
fn euler(f: &TSeries, mu: i64) -> Result<TSeries> {
    let order = f.order();
    let arg = standard::euler_argument(&rational::int(mu), &rational::int(1), order)?;
    standard::geometric(order).mul(&f.compose(&arg)?)
}

fn log_one_minus(order: usize) -> Result<TSeries> {
    standard::poly_t(&[1, -1], order).log()
}

/// Builds `f` one order higher, divides by `t`, and truncates back.
fn div_t(order: usize, f: impl Fn(usize) -> Result<TSeries>) -> Result<TSeries> {
    f(order + 1)?.shift_div_t(1)?.truncate(order)
}

fn ratio(num: &[i64], den: &[i64], order: usize) -> Result<TSeries> {
    standard::poly_t(num, order).div(&standard::poly_t(den, order))
}

fn coeff_series(order: usize, f: impl Fn(usize) -> MPoly) -> TSeries {
    TSeries::from_fn(order, f)
}

/// `sum_n H_n(x) H_n(z) t^n/n!`.
fn bilinear_hermite(order: usize) -> TSeries {
    let hx = special::hermite_table(order as u64);
    TSeries::from_fn(order, |n| {
        (&hx[n] * &special::hermite_in(n as u64, Z)).scale(&(Rational::one() / fact(n)))
    })
}

/// `exp(4xyt - 4y^2 t^2) sum_n H_n(x - 2yt) H_n(z - y) t^n/n!`.
fn bilinear_with_y(order: usize) -> Result<TSeries> {
    let y = MPoly::var(Y);
    let xy4 = (&MPoly::var(X) * &y).scale(&rational::int(4));
    let y2 = (&y * &y).scale(&rational::int(-4));
    let prefactor = TSeries::new(vec![MPoly::zero(), xy4, y2], order).exp()?;
    let arg = TSeries::new(vec![MPoly::var(X), y.scale(&rational::int(-2))], order);
    let hs = special::hermite_series_table(order as u64, &arg)?;
    let z_minus_y = &MPoly::var(Z) - &y;
    let mut sum = TSeries::zero(order);
    for (n, hn) in hs.iter().enumerate() {
        let w = special::hermite_shifted(n as u64, &z_minus_y).scale(&(Rational::one() / fact(n)));
        sum = sum.add(&hn.shift_mul_t(n).scale(&w))?;
    }
    prefactor.mul(&sum)
}

/// `(1-4t^2)^{-1/2} exp{x^2 - (x-2zt)^2/(1-4t^2)}`.
fn mehler_closed_form(order: usize) -> Result<TSeries> {
    let x = MPoly::var(X);
    let inv = standard::poly_t(&[1, 0, -4], order).inverse()?;
    let lin = TSeries::new(vec![x.clone(), MPoly::var(Z).scale(&rational::int(-2))], order);
    let exponent = TSeries::constant(&x * &x, order).sub(&lin.mul(&lin)?.mul(&inv)?)?;
    standard::inv_sqrt_one_minus_4t2(order).mul(&exponent.exp()?)
}

/// `exp(2xt - t^2) sum_{j>=r} p_j sum_k {j,k}_r t^k H_k(x-t)`.
fn stirling_hermite_rhs(s: &Sequences, order: usize, p: &[Rational], r: u64) -> Result<TSeries> {
    let arg = TSeries::new(vec![MPoly::var(X), MPoly::int(-1)], order);
    let hs = special::hermite_series_table(order as u64, &arg)?;
    let table = s.r_stirling_table(r);
    let mut sum = TSeries::zero(order);
    for (j, pj) in p.iter().enumerate().skip(r as usize) {
        if pj.is_zero() {
            continue;
        }
        for k in 0..=j.min(order) {
            let st = rational::big(table.get(j as u64, k as u64)?);
            if st.is_zero() {
                continue;
            }
            sum = sum.add(&hs[k].shift_mul_t(k).scale_rational(&(st * pj)))?;
        }
    }
    standard::hermite_gf(order)?.mul(&sum)
}

/// k! sum_{j>=r} p_j {j,k}_r, the Hermite weight of the right side above.
fn stirling_weight(s: &Sequences, p: &[Rational], r: u64, k: usize) -> Rational {
    let table = s.r_stirling_table(r);
    let sum: Rational = p
        .iter()
        .enumerate()
        .skip(r as usize)
        .map(|(j, pj)| pj * rational::big(table.get(j as u64, k as u64).expect("j >= r")))
        .sum();
    sum * fact(k)
}

fn poly_value(p: &[Rational], n: usize) -> Rational {
    let nn = rational::int(n as i64);
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * &nn + c)
}

fn falling(n: usize, r: usize) -> Rational {
    (0..r).map(|i| rational::int(n as i64 - i as i64)).product()
}

fn eq46_weight(p: u64, n: usize) -> MPoly {
    if n as u64 > p {
        MPoly::zero()
    } else {
        konst(rational::big(rational::binomial(p, n as u64)))
    }
}

/// Number of nonzero terms on the finite right side of EQ46 for integer `p`,
/// counted over indices up to `order`.
pub fn eq46_rhs_terms(p: u64, order: usize) -> usize {
    (0..=order).filter(|&n| !eq46_weight(p, n).is_zero()).count()
}

/// sum_k S(n,k) t^k as a series (Stirling row from the shared table).
fn stirling_row_series(row: &[Rational], order: usize) -> TSeries {
    TSeries::new(row.iter().cloned().map(MPoly::constant).collect(), order)
}

const EULER_POWERS: usize = 5;
const R_MAX: u64 = 3;

pub(super) fn records() -> Vec<IdentityRecord> {
    let mut v = Vec::new();
    series_records(&mut v);
    gf_records(&mut v);
    finite_records(&mut v);
    operator_records(&mut v);
    v
}

fn series_records(v: &mut Vec<IdentityRecord>) {
    v.push(IdentityRecord::new(
        "EQ1",
        "Eq. 1",
        Kind::Series,
        &[X],
        |_, n| Ok(hermite_weighted_lhs(|_| MPoly::one(), n)),
        |_, n| standard::hermite_gf(n),
    )
    .with_weights(|_, _| MPoly::one(), |_, n| if n == 0 { MPoly::one() } else { MPoly::zero() }));
    v.push(pair(
        "EQ12",
        "Eq. 12",
        &[X],
        |_, n| q(1, n as i64 + 1),
        |_, n| konst(sign(n) * rational::frac(1, n as i64 + 1)),
    ));
    v.push(pair(
        "EQ19",
        "Eq. 19",
        &[X],
        |_, n| konst(inv_n(n)),
        |s, n| konst(-sign(n) * h(s, n)),
    ));
    v.push(pair(
        "EQ20",
        "Eq. 20",
        &[X],
        |s, n| konst(h(s, n)),
        |_, n| konst(-sign(n) * inv_n(n)),
    ));
    v.push(
        pair(
            "EQ22",
            "Eq. 22",
            &[X],
            |s, n| konst(h(s, n) * rational::frac(1, n as i64 + 1)),
            |s, n| konst(-sign(n) * h(s, n) * rational::frac(1, n as i64 + 1)),
        )
        .with_notes("right side carries the factor -h_n that the companion binomial sum requires"),
    );
    v.push(pair(
        "EQ31",
        "Eq. 31",
        &[X],
        |s, n| konst(h(s, n) * inv_n(n)),
        |s, n| konst(-sign(n) * h2(s, n)),
    ));
    v.push(
        pair(
            "EQ31-SYM",
            "Eq. 31",
            &[X],
            |s, n| konst(h2(s, n)),
            |s, n| konst(-sign(n) * h(s, n) * inv_n(n)),
        )
        .with_notes("reader-derived symmetric version from the inverse of the h_k/k transform"),
    );
    v.push(pair(
        "EQ34",
        "Eq. 34",
        &[X, Z],
        |_, n| var_pow(Z, n).scale(&(Rational::one() / fact(n))),
        |_, n| special::laguerre(n as u64).scale(&sign(n)),
    ));
    v.push(pair(
        "EQ35",
        "Eq. 35",
        &[X, Z],
        |_, n| special::laguerre(n as u64),
        |_, n| var_pow(Z, n).scale(&(sign(n) / fact(n))),
    ));
    v.push(
        IdentityRecord::new(
            "EQ39",
            "Eq. 39",
            Kind::Series,
            &[X, Y, Z],
            |_, n| Ok(bilinear_hermite(n)),
            |_, n| bilinear_with_y(n),
        )
        .with_notes("denominator-cleared form after t -> 2yt"),
    );
    v.push(IdentityRecord::new(
        "EQ40-MEHLER",
        "Eq. 40",
        Kind::Series,
        &[X, Z],
        |_, n| Ok(bilinear_hermite(n)),
        |_, n| mehler_closed_form(n),
    ));
    v.push(IdentityRecord::new(
        "EQ41",
        "Eq. 41",
        Kind::Series,
        &[X, Y, Z],
        |_, n| mehler_closed_form(n),
        |_, n| bilinear_with_y(n),
    ));
    v.push(pair(
        "EQ45",
        "Eq. 45",
        &[X, P],
        |_, n| binom_symbolic(&(&MPoly::var(P) + &MPoly::int(n as i64)), n as u64),
        |_, n| binom_symbolic(&MPoly::var(P), n as u64),
    ));
    for p in 1..=4u64 {
        v.push(pair(
            &format!("EQ46-P{p}"),
            "Eq. 46",
            &[X],
            move |_, n| konst(rational::big(rational::binomial(p + n as u64, n as u64))),
            move |_, n| eq46_weight(p, n),
        ));
    }
    v.push(
        pair(
            "EQ50",
            "Eq. 50",
            &[X],
            |s, n| konst(s.stirling2(n as u64 + 1, 3)),
            |s, n| konst(s.stirling2(n as u64, 2)),
        )
        .with_notes("m = 2"),
    );
    v.push(
        pair(
            "EQ53",
            "Eq. 53",
            &[X],
            |_, n| konst(num_traits::pow(rational::int(n as i64), 4)),
            |_, n| binom_sum(n, Alt::NMinusK, |k| konst(num_traits::pow(rational::int(k as i64), 4))),
        )
        .with_notes("integer alpha = 4; Stirling functions from their binomial-sum definition"),
    );
    v.push(
        pair(
            "EQ54",
            "Eq. 54",
            &[X],
            |_, n| konst(num_traits::pow(rational::int(n as i64), 3)),
            |s, n| konst(s.stirling2(3, n as u64) * fact(n)),
        )
        .with_notes("m = 3"),
    );
    v.push(pair(
        "EQ58",
        "Eq. 58",
        &[X],
        |s, n| konst(s.bell.get(n + 1)),
        |s, n| konst(phi_stirling(s, n)),
    ));
    v.push(
        pair(
            "EQ62",
            "Eq. 62",
            &[X],
            |s, n| {
                let w = s.fubini.get(n) * rational::int(2);
                konst(if n == 0 { w - rational::int(1) } else { w })
            },
            |s, n| konst(w_stirling(s, n)),
        )
        .with_notes("left weight is 2w_n - [n=0]; the constant term needs this correction"),
    );
    v.push(pair("EQ69", "Eq. 69", &[X], |s, n| fib(s, 2 * n), fib));
    v.push(pair("EQ73", "Eq. 73", &[X], fib, |s, n| fib(s, n).scale(&-sign(n))));
    v.push(pair(
        "EQ74",
        "Eq. 74",
        &[X],
        |s, n| fib(s, n).scale(&sign(n)),
        |s, n| fib(s, 2 * n).scale(&sign(n)),
    ));
    v.push(pair("EQ78", "Eq. 78", &[X], luc, |s, n| luc(s, n).scale(&sign(n))));
    v.push(pair("EQ85", "Eq. 85", &[X], |s, n| luc(s, 2 * n), luc));
    v.push(pair(
        "EQ86",
        "Eq. 86",
        &[X],
        |s, n| luc(s, n).scale(&sign(n)),
        |s, n| luc(s, 2 * n).scale(&sign(n)),
    ));

    let cubic = || {
        vec![
            rational::int(5),
            rational::frac(1, 2),
            rational::int(-3),
            rational::int(2),
        ]
    };
    v.push(
        IdentityRecord::new(
            "EQ88",
            "Eq. 88",
            Kind::Series,
            &[X],
            move |_, n| {
                let p = cubic();
                Ok(hermite_weighted_lhs(|k| konst(poly_value(&p, k)), n))
            },
            move |s, n| stirling_hermite_rhs(s, n, &cubic(), 0),
        )
        .with_notes("f(n) = 2n^3 - 3n^2 + n/2 + 5")
        .with_weights(
            move |_, k| konst(poly_value(&cubic(), k)),
            move |s, k| konst(stirling_weight(s, &cubic(), 0, k)),
        ),
    );
    v.push(
        IdentityRecord::new(
            "EQ89+",
            "Eq. 89+",
            Kind::Series,
            &[X],
            |_, n| {
                Ok(hermite_weighted_lhs(
                    |k| konst(num_traits::pow(rational::int(k as i64), 2) * falling(k, 1)),
                    n,
                ))
            },
            |s, n| {
                let p = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::one()];
                stirling_hermite_rhs(s, n, &p, 1)
            },
        )
        .with_notes("m = 3, r = 1")
        .with_weights(
            |_, k| konst(num_traits::pow(rational::int(k as i64), 2) * falling(k, 1)),
            |s, k| {
                let p = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::one()];
                konst(stirling_weight(s, &p, 1, k))
            },
        ),
    );
    let quad = || {
        vec![
            Rational::zero(),
            Rational::zero(),
            rational::frac(-5, 2),
            rational::int(3),
        ]
    };
    v.push(
        IdentityRecord::new(
            "EQ90",
            "Eq. 90",
            Kind::Series,
            &[X],
            move |_, n| {
                let p = quad();
                Ok(hermite_weighted_lhs(
                    |k| konst((&p[3] * rational::int(k as i64) + &p[2]) * falling(k, 2)),
                    n,
                ))
            },
            move |s, n| stirling_hermite_rhs(s, n, &quad(), 2),
        )
        .with_notes("r = 2, f(t) = 3t^3 - 5t^2/2")
        .with_weights(
            move |_, k| {
                let p = quad();
                konst((&p[3] * rational::int(k as i64) + &p[2]) * falling(k, 2))
            },
            move |s, k| konst(stirling_weight(s, &quad(), 2, k)),
        ),
    );
}

fn gf_records(v: &mut Vec<IdentityRecord>) {
    let log_over_t = |n: usize| div_t(n, |m| Ok(log_one_minus(m)?.neg()));
    let log_sq_over_2t = |n: usize| {
        div_t(n, |m| {
            let l = log_one_minus(m)?;
            Ok(l.mul(&l)?.scale_rational(&rational::frac(1, 2)))
        })
    };
    let dilog_plus = |n: usize| -> Result<TSeries> {
        let l = log_one_minus(n)?;
        standard::dilog(n).add(&l.mul(&l)?.scale_rational(&rational::frac(1, 2)))
    };

    v.push(gf(
        "EQ14",
        "Eq. 14",
        &[],
        move |_, n| log_over_t(n),
        |_, n| Ok(coeff_series(n, |k| q(1, k as i64 + 1))),
    ));
    v.push(gf(
        "EQ15",
        "Eq. 15",
        &[],
        move |_, n| euler(&log_over_t(n)?, -1),
        move |_, n| log_over_t(n),
    ));
    v.push(gf(
        "EQ18",
        "Eq. 18",
        &[],
        |_, n| euler(&log_one_minus(n)?.neg(), -1),
        |s, n| Ok(coeff_series(n, |k| konst(-h(s, k)))),
    ));
    v.push(gf(
        "EQ24",
        "Eq. 24",
        &[],
        move |_, n| log_sq_over_2t(n),
        |s, n| Ok(coeff_series(n, |k| konst(h(s, k) * rational::frac(1, k as i64 + 1)))),
    ));
    v.push(gf(
        "EQ25",
        "Eq. 25",
        &[],
        move |_, n| euler(&log_sq_over_2t(n)?, -1),
        move |_, n| Ok(log_sq_over_2t(n)?.neg()),
    ));
    v.push(gf(
        "EQ28",
        "Eq. 28",
        &[],
        move |_, n| dilog_plus(n),
        |s, n| Ok(coeff_series(n, |k| konst(h(s, k) * inv_n(k)))),
    ));
    v.push(gf(
        "EQ28-30-LANDEN",
        "Eq. 29-30",
        &[],
        move |_, n| dilog_plus(n),
        |_, n| {
            let arg = standard::euler_argument(&rational::int(-1), &rational::int(1), n)?;
            Ok(standard::dilog(n).compose(&arg)?.neg())
        },
    ));
    v.push(gf(
        "EQ30",
        "Eq. 30",
        &[],
        move |_, n| euler(&dilog_plus(n)?, -1),
        |s, n| Ok(coeff_series(n, |k| konst(-h2(s, k)))),
    ));
    v.push(gf(
        "EQ33",
        "Eq. 33",
        &[Z],
        |_, n| {
            let arg = standard::euler_argument(&rational::int(1), &rational::int(1), n)?;
            standard::geometric(n).mul(&arg.scale(&MPoly::var(Z).scale(&rational::int(-1))).exp()?)
        },
        |_, n| Ok(coeff_series(n, |k| special::laguerre(k as u64))),
    ));
    let neg_binom = |n: usize| -> Result<TSeries> {
        let p1 = &MPoly::var(P) + &MPoly::one();
        log_one_minus(n)?.scale(&-&p1).exp()
    };
    v.push(gf(
        "EQ43",
        "Eq. 43",
        &[P],
        move |_, n| neg_binom(n),
        |_, n| {
            Ok(coeff_series(n, |k| {
                binom_symbolic(&(&MPoly::var(P) + &MPoly::int(k as i64)), k as u64)
            }))
        },
    ));
    v.push(gf(
        "EQ44",
        "Eq. 44",
        &[P],
        move |_, n| euler(&neg_binom(n)?, -1),
        |_, n| Ok(coeff_series(n, |k| binom_symbolic(&MPoly::var(P), k as u64).scale(&sign(k)))),
    ));
    v.push(gf(
        "EQ63",
        "Eq. 63",
        &[],
        |_, n| ratio(&[0, 1], &[1, -1, -1], n),
        |s, n| Ok(coeff_series(n, |k| fib(s, k))),
    ));
    v.push(gf(
        "EQ64",
        "Eq. 64",
        &[],
        |_, n| euler(&ratio(&[0, 1], &[1, -1, -1], n)?, 1),
        |_, n| ratio(&[0, 1], &[1, -3, 1], n),
    ));
    v.push(gf(
        "EQ65",
        "Eq. 65",
        &[],
        |_, n| ratio(&[0, 1], &[1, -3, 1], n),
        |s, n| Ok(coeff_series(n, |k| fib(s, 2 * k))),
    ));
    v.push(gf(
        "EQ70",
        "Eq. 70",
        &[],
        |_, n| ratio(&[0, -1], &[1, 1, -1], n),
        |s, n| Ok(coeff_series(n, |k| fib(s, k).scale(&sign(k)))),
    ));
    v.push(gf(
        "EQ71",
        "Eq. 71",
        &[],
        |_, n| euler(&ratio(&[0, -1], &[1, 1, -1], n)?, 1),
        |s, n| Ok(coeff_series(n, |k| fib(s, k).scale(&rational::int(-1)))),
    ));
    v.push(gf(
        "EQ75",
        "Eq. 75",
        &[],
        |_, n| ratio(&[2, -1], &[1, -1, -1], n),
        |s, n| Ok(coeff_series(n, |k| luc(s, k))),
    ));
    v.push(gf(
        "EQ76",
        "Eq. 76",
        &[],
        |_, n| euler(&ratio(&[2, -1], &[1, -1, -1], n)?, -1),
        |_, n| ratio(&[2, -1], &[1, -1, -1], n),
    ));
    v.push(gf(
        "EQ79",
        "Eq. 79",
        &[],
        |_, n| ratio(&[2, 1], &[1, 1, -1], n),
        |s, n| Ok(coeff_series(n, |k| luc(s, k).scale(&sign(k)))),
    ));
    v.push(gf(
        "EQ80",
        "Eq. 80",
        &[],
        |_, n| euler(&ratio(&[2, 1], &[1, 1, -1], n)?, -1),
        |_, n| ratio(&[2, -3], &[1, -3, 1], n),
    ));
    v.push(gf(
        "EQ81",
        "Eq. 81",
        &[],
        |_, n| ratio(&[2, -3], &[1, -3, 1], n),
        |s, n| Ok(coeff_series(n, |k| luc(s, 2 * k))),
    ));
}

/// Packs a family of finite identities indexed by `m` onto powers of `p`.
fn packed_in_p(range: impl Fn(usize) -> std::ops::RangeInclusive<usize>, f: impl Fn(usize, usize) -> Rational, n: usize) -> MPoly {
    let mut acc = MPoly::zero();
    for m in range(n) {
        let val = f(n, m);
        if !val.is_zero() {
            acc += &var_pow(P, m).scale(&val);
        }
    }
    acc
}

fn finite_records(v: &mut Vec<IdentityRecord>) {
    v.push(finite(
        "EQ13",
        "Eq. 13",
        &[],
        |_, n| binom_sum(n, Alt::K, |k| q(1, k as i64 + 1)),
        |_, n| q(1, n as i64 + 1),
    ));
    v.push(finite(
        "EQ17",
        "Eq. 17",
        &[],
        |_, n| binom_sum(n, Alt::K, |k| konst(inv_n(k))),
        |s, n| konst(-h(s, n)),
    ));
    v.push(
        finite(
            "EQ21",
            "Eq. 21",
            &[],
            |s, n| binom_sum(n, Alt::K, |k| konst(h(s, k))),
            |_, n| konst(-inv_n(n)),
        )
        .with_notes("n = 0 entry is 0 on both sides"),
    );
    v.push(finite(
        "EQ23",
        "Eq. 23",
        &[],
        |s, n| binom_sum(n, Alt::K, |k| konst(h(s, k) * rational::frac(1, k as i64 + 1))),
        |s, n| konst(-h(s, n) * rational::frac(1, n as i64 + 1)),
    ));
    v.push(finite(
        "EQ27",
        "Eq. 27",
        &[],
        |s, n| binom_sum(n, Alt::K, |k| konst(h(s, k) * inv_n(k))),
        |s, n| konst(-h2(s, n)),
    ));
    v.push(finite(
        "EQ32",
        "Eq. 32",
        &[Z],
        |_, n| {
            let from_gf = special::laguerre_from_gf(n as u64).expect("laguerre generating function");
            from_gf[n].clone()
        },
        |_, n| binom_sum(n, Alt::K, |k| var_pow(Z, k).scale(&(Rational::one() / fact(k)))),
    ));
    v.push(
        finite(
            "EQ32-INV",
            "Eq. 32",
            &[Z],
            |_, n| binom_sum(n, Alt::K, |k| special::laguerre(k as u64)),
            |_, n| var_pow(Z, n).scale(&(Rational::one() / fact(n))),
        )
        .with_notes("inverse of the Laguerre binomial sum"),
    );
    v.push(finite(
        "EQ36",
        "Eq. 36",
        &[Y, Z],
        |_, n| special::hermite_shifted(n as u64, &(&MPoly::var(Z) + &MPoly::var(Y))),
        |_, n| {
            let two_y = MPoly::var(Y).scale(&rational::int(2));
            binom_sum(n, Alt::None, |k| &two_y.pow((n - k) as u32) * &special::hermite_in(k as u64, Z))
        },
    ));
    v.push(
        finite(
            "EQ37",
            "Eq. 37",
            &[Y, Z],
            |_, n| special::hermite_shifted(n as u64, &(&MPoly::var(Z) - &MPoly::var(Y))).scale(&sign(n)),
            |_, n| {
                let two_y = MPoly::var(Y).scale(&rational::int(2));
                binom_sum(n, Alt::K, |k| &two_y.pow((n - k) as u32) * &special::hermite_in(k as u64, Z))
            },
        )
        .with_notes("both sides multiplied by (2y)^n"),
    );
    v.push(finite(
        "EQ42",
        "Eq. 42",
        &[P],
        |_, n| binom_sum(n, Alt::K, |k| binom_symbolic(&(&MPoly::var(P) + &MPoly::int(k as i64)), k as u64)),
        |_, n| binom_symbolic(&MPoly::var(P), n as u64).scale(&sign(n)),
    ));
    let m_range = |n: usize| 0..=n + 1;
    v.push(
        finite(
            "EQ47",
            "Eq. 47",
            &[P],
            move |s, n| {
                packed_in_p(m_range, |n, m| {
                    (0..=n)
                        .map(|k| rational::big(rational::binomial(n as u64, k as u64)) * s.stirling2(k as u64, m as u64))
                        .sum()
                }, n)
            },
            move |s, n| packed_in_p(m_range, |n, m| s.stirling2(n as u64 + 1, m as u64 + 1), n),
        )
        .with_notes("coefficient of p^m holds the identity for m"),
    );
    v.push(
        finite(
            "EQ48",
            "Eq. 48",
            &[P],
            move |s, n| {
                packed_in_p(m_range, |n, m| {
                    (0..=n)
                        .map(|k| {
                            rational::big(rational::binomial(n as u64, k as u64))
                                * sign(n - k)
                                * s.stirling2(k as u64 + 1, m as u64 + 1)
                        })
                        .sum()
                }, n)
            },
            move |s, n| packed_in_p(m_range, |n, m| s.stirling2(n as u64, m as u64), n),
        )
        .with_notes("coefficient of p^m holds the identity for m"),
    );
    v.push(
        finite(
            "EQ49",
            "Eq. 49",
            &[P],
            move |s, n| {
                packed_in_p(m_range, |n, m| {
                    (0..=n)
                        .map(|k| {
                            rational::big(rational::binomial(n as u64, k as u64))
                                * sign(k)
                                * s.stirling2(k as u64 + 1, m as u64 + 1)
                        })
                        .sum()
                }, n)
            },
            move |s, n| packed_in_p(m_range, |n, m| sign(n) * s.stirling2(n as u64, m as u64), n),
        )
        .with_notes("coefficient of p^m holds the identity for m"),
    );
    let alpha_range = |_: usize| 1..=6usize;
    v.push(
        finite(
            "EQ52",
            "Eq. 52",
            &[P],
            move |s, n| packed_in_p(alpha_range, |n, a| sign(n) * fact(n) * s.stirling2(a as u64, n as u64), n),
            move |_, n| {
                packed_in_p(alpha_range, |n, a| {
                    (0..=n)
                        .map(|k| {
                            rational::big(rational::binomial(n as u64, k as u64))
                                * sign(k)
                                * num_traits::pow(rational::int(k as i64), a)
                        })
                        .sum()
                }, n)
            },
        )
        .with_notes("coefficient of p^alpha holds the identity for integer alpha = 1..6"),
    );
    v.push(finite(
        "EQ55",
        "Eq. 55",
        &[],
        |s, n| konst(phi_stirling(s, n + 1)),
        |s, n| binom_sum(n, Alt::None, |k| konst(s.bell.get(k))),
    ));
    v.push(finite(
        "EQ56",
        "Eq. 56",
        &[],
        |s, n| konst(phi_stirling(s, n)),
        |s, n| binom_sum(n, Alt::NMinusK, |k| konst(s.bell.get(k + 1))),
    ));
    v.push(finite(
        "EQ57",
        "Eq. 57",
        &[],
        |s, n| konst(sign(n) * phi_stirling(s, n)),
        |s, n| binom_sum(n, Alt::K, |k| konst(s.bell.get(k + 1))),
    ));
    v.push(
        finite(
            "EQ59",
            "Eq. 59",
            &[],
            |s, n| {
                if n == 0 {
                    MPoly::zero()
                } else {
                    konst(w_stirling(s, n) * rational::int(2))
                }
            },
            |s, n| {
                if n == 0 {
                    MPoly::zero()
                } else {
                    binom_sum(n, Alt::None, |k| konst(s.fubini.get(k)))
                }
            },
        )
        .with_notes("holds for n >= 1; the n = 0 entry is zeroed on both sides"),
    );
    v.push(
        finite(
            "EQ60",
            "Eq. 60",
            &[],
            |s, n| konst(w_stirling(s, n) + sign(n)),
            |s, n| binom_sum(n, Alt::NMinusK, |k| konst(s.fubini.get(k) * rational::int(2))),
        )
        .with_notes("corrected by the term (-1)^n inherited from the n = 0 case"),
    );
    v.push(
        finite(
            "EQ61",
            "Eq. 61",
            &[],
            |s, n| konst(sign(n) * w_stirling(s, n) + rational::int(1)),
            |s, n| binom_sum(n, Alt::K, |k| konst(s.fubini.get(k) * rational::int(2))),
        )
        .with_notes("corrected by the constant 1 inherited from the n = 0 case"),
    );
    v.push(finite(
        "EQ66",
        "Eq. 66",
        &[],
        |s, n| fib(s, 2 * n),
        |s, n| binom_sum(n, Alt::None, |k| fib(s, k)),
    ));
    v.push(finite(
        "EQ67",
        "Eq. 67",
        &[],
        fib,
        |s, n| binom_sum(n, Alt::NMinusK, |k| fib(s, 2 * k)),
    ));
    v.push(finite(
        "EQ68",
        "Eq. 68",
        &[],
        |s, n| fib(s, n).scale(&sign(n)),
        |s, n| binom_sum(n, Alt::K, |k| fib(s, 2 * k)),
    ));
    v.push(finite(
        "EQ72",
        "Eq. 72",
        &[],
        |s, n| fib(s, n).scale(&rational::int(-1)),
        |s, n| binom_sum(n, Alt::K, |k| fib(s, k)),
    ));
    v.push(finite(
        "EQ77",
        "Eq. 77",
        &[],
        luc,
        |s, n| binom_sum(n, Alt::K, |k| luc(s, k)),
    ));
    v.push(finite(
        "EQ82",
        "Eq. 82",
        &[],
        |s, n| luc(s, 2 * n),
        |s, n| binom_sum(n, Alt::None, |k| luc(s, k)),
    ));
    v.push(finite(
        "EQ83",
        "Eq. 83",
        &[],
        luc,
        |s, n| binom_sum(n, Alt::NMinusK, |k| luc(s, 2 * k)),
    ));
    v.push(finite(
        "EQ84",
        "Eq. 84",
        &[],
        |s, n| luc(s, n).scale(&sign(n)),
        |s, n| binom_sum(n, Alt::K, |k| luc(s, 2 * k)),
    ));
    v.push(
        finite(
            "EQ93",
            "Eq. 93",
            &[P],
            |_, n| var_pow(P, n),
            |s, n| {
                let p = MPoly::var(P);
                (0..=n)
                    .map(|k| falling_factorial(&p, k as u64).scale(&s.stirling2(n as u64, k as u64)))
                    .fold(MPoly::zero(), |a, b| &a + &b)
            },
        )
        .with_notes("m kept symbolic as p; stands in for the series form it is read off from"),
    );
    v.push(
        finite(
            "EQ99",
            "Eq. 99",
            &[Z, P],
            |_, n| {
                let p = MPoly::var(P);
                (0..=R_MAX.min(n as u64))
                    .map(|r| {
                        let v = &falling_factorial(&p, r) * &p.pow((n as u64 - r) as u32);
                        &var_pow(Z, r as usize) * &v
                    })
                    .fold(MPoly::zero(), |a, b| &a + &b)
            },
            |s, n| {
                let p = MPoly::var(P);
                let mut acc = MPoly::zero();
                for r in 0..=R_MAX.min(n as u64) {
                    let table = s.r_stirling_table(r);
                    for k in 0..=n as u64 {
                        let st = rational::big(table.get(n as u64, k).expect("n >= r"));
                        if !st.is_zero() {
                            acc += &(&var_pow(Z, r as usize) * &falling_factorial(&p, k)).scale(&st);
                        }
                    }
                }
                acc
            },
        )
        .with_notes("m kept symbolic as p; coefficient of z^r holds the identity for r = 0..3"),
    );
}

fn operator_records(v: &mut Vec<IdentityRecord>) {
    v.push(
        operator(
            "EQ-dd",
            "Eq. dd",
            &[X, P],
            |_, n| {
                let f = standard::hermite_gf(n)?;
                let mut acc = TSeries::zero(n);
                for j in 0..=EULER_POWERS {
                    acc = acc.add(&f.euler_operator(j as u32).scale(&var_pow(P, j)))?;
                }
                Ok(acc)
            },
            |s, n| {
                let f = standard::hermite_gf(n)?;
                let mut acc = TSeries::zero(n);
                for j in 0..=EULER_POWERS {
                    let row = s.stirling_table().row(j as u64)?;
                    acc = acc.add(&f.euler_operator_expanded(&row)?.scale(&var_pow(P, j)))?;
                }
                Ok(acc)
            },
        )
        .with_notes("applied to exp(2xt - t^2); coefficient of p^n holds the n-th power"),
    );
    v.push(
        operator(
            "EQ95",
            "Eq. 95",
            &[P],
            |_, n| {
                let et = TSeries::t(n).exp()?;
                let mut acc = TSeries::zero(n);
                for j in 0..=EULER_POWERS {
                    acc = acc.add(&et.euler_operator(j as u32).scale(&var_pow(P, j)))?;
                }
                Ok(acc)
            },
            |s, n| {
                let et = TSeries::t(n).exp()?;
                let mut acc = TSeries::zero(n);
                for j in 0..=EULER_POWERS {
                    let phi = stirling_row_series(&s.stirling_table().row(j as u64)?, n);
                    acc = acc.add(&et.mul(&phi)?.scale(&var_pow(P, j)))?;
                }
                Ok(acc)
            },
        )
        .with_notes("coefficient of p^n holds the n-th power; stands in for the series it is read off from"),
    );
    v.push(
        operator(
            "EQ96",
            "Eq. 96",
            &[P],
            |_, n| {
                let g = standard::geometric(n);
                let mut acc = TSeries::zero(n);
                for j in 0..=EULER_POWERS {
                    acc = acc.add(&g.euler_operator(j as u32).scale(&var_pow(P, j)))?;
                }
                Ok(acc)
            },
            |s, n| {
                let u = standard::euler_argument(&rational::int(1), &rational::int(1), n)?;
                let g = standard::geometric(n);
                let mut acc = TSeries::zero(n);
                for j in 0..=EULER_POWERS {
                    let row: Vec<Rational> = s
                        .stirling_table()
                        .row(j as u64)?
                        .into_iter()
                        .enumerate()
                        .map(|(k, c)| c * fact(k))
                        .collect();
                    let w = stirling_row_series(&row, n).compose(&u)?;
                    acc = acc.add(&g.mul(&w)?.scale(&var_pow(P, j)))?;
                }
                Ok(acc)
            },
        )
        .with_notes("coefficient of p^n holds the n-th power"),
    );
    v.push(
        operator(
            "EQ102",
            "Eq. 102",
            &[Z, P],
            |_, n| {
                let mut acc = TSeries::zero(n);
                for r in 0..=R_MAX {
                    for m in r..=r + EULER_POWERS as u64 {
                        let lhs = special::r_exp_operator_series(m, r, n)?;
                        acc = acc.add(&lhs.scale(&(&var_pow(Z, r as usize) * &var_pow(P, m as usize))))?;
                    }
                }
                Ok(acc)
            },
            |s, n| {
                let et = TSeries::t(n).exp()?;
                let mut acc = TSeries::zero(n);
                for r in 0..=R_MAX {
                    let table = s.r_stirling_table(r);
                    for m in r..=r + EULER_POWERS as u64 {
                        let poly = stirling_row_series(&table.row(m)?, n);
                        let w = &var_pow(Z, r as usize) * &var_pow(P, m as usize);
                        acc = acc.add(&et.mul(&poly)?.scale(&w))?;
                    }
                }
                Ok(acc)
            },
        )
        .with_notes("coefficient of z^r p^n holds the identity for r = 0..3"),
    );
    v.push(
        operator(
            "EQ105",
            "Eq. 105",
            &[Z, P],
            |_, n| {
                let mut acc = TSeries::zero(n);
                for r in 0..=R_MAX {
                    for m in r..=r + EULER_POWERS as u64 {
                        let lhs = special::r_geom_operator_series(m, r, n)?;
                        acc = acc.add(&lhs.scale(&(&var_pow(Z, r as usize) * &var_pow(P, m as usize))))?;
                    }
                }
                Ok(acc)
            },
            |s, n| {
                let u = standard::euler_argument(&rational::int(1), &rational::int(1), n)?;
                let g = standard::geometric(n);
                let mut acc = TSeries::zero(n);
                for r in 0..=R_MAX {
                    let table = s.r_stirling_table(r);
                    for m in r..=r + EULER_POWERS as u64 {
                        let row: Vec<Rational> = table
                            .row(m)?
                            .into_iter()
                            .enumerate()
                            .map(|(k, c)| c * fact(k))
                            .collect();
                        let w = stirling_row_series(&row, n).compose(&u)?;
                        let weight = &var_pow(Z, r as usize) * &var_pow(P, m as usize);
                        acc = acc.add(&g.mul(&w)?.scale(&weight))?;
                    }
                }
                Ok(acc)
            },
        )
        .with_notes("coefficient of z^r p^n holds the identity for r = 0..3"),
    );
}
