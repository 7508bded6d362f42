//! Exact number sequences: harmonic numbers, Fibonacci and Lucas numbers,
//! exponential (Bell) and geometric (Fubini) numbers, Stirling numbers of
//! the second kind and their r-restricted variant, falling factorials and
//! binomial coefficients with a polynomial top argument.
//!
//! The free functions compute from scratch. [`Sequences`] bundles memoized
//! generators whose seeds and Stirling recurrence weights are configurable
//! through [`SequenceParams`], which is how the identity registry is
//! fault-injected in tests.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::mpoly::MPoly;
use crate::rational::{self, Rational};

pub fn harmonic(n: u64) -> Rational {
    (1..=n).map(|j| rational::frac(1, j as i64)).sum()
}

pub fn harmonic2(n: u64) -> Rational {
    (1..=n).map(|j| rational::frac(1, (j * j) as i64)).sum()
}

fn linear2(a0: BigInt, a1: BigInt, n: u64) -> BigInt {
    let (mut a, mut b) = (a0, a1);
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

pub fn fibonacci(n: u64) -> BigInt {
    linear2(BigInt::zero(), BigInt::one(), n)
}

pub fn lucas(n: u64) -> BigInt {
    linear2(BigInt::from(2), BigInt::one(), n)
}

/// Exponential numbers: phi_0 = 1, phi_{n+1} = sum_k C(n,k) phi_k.
pub fn bell(n: u64) -> BigInt {
    bell_numbers(BigInt::one(), n as usize + 1).pop().unwrap()
}

/// Geometric numbers: w_0 = 1, 2 w_n = sum_{k<=n} C(n,k) w_k for n >= 1.
pub fn fubini(n: u64) -> BigInt {
    fubini_numbers(BigInt::one(), n as usize + 1).pop().unwrap()
}

fn bell_numbers(seed: BigInt, len: usize) -> Vec<BigInt> {
    let mut out = vec![seed];
    while out.len() < len {
        let n = out.len() as u64 - 1;
        let row = rational::binomial_row(n);
        out.push(row.iter().zip(&out).map(|(c, v)| c * v).sum());
    }
    out.truncate(len);
    out
}

fn fubini_numbers(seed: BigInt, len: usize) -> Vec<BigInt> {
    let mut out = vec![seed];
    while out.len() < len {
        let n = out.len() as u64;
        let row = rational::binomial_row(n);
        out.push(row.iter().zip(&out).map(|(c, v)| c * v).sum());
    }
    out.truncate(len);
    out
}

pub fn stirling2(n: u64, k: u64) -> BigInt {
    StirlingTable::plain().get(n, k).expect("plain table is defined for all n")
}

/// r-Stirling number of the second kind: partitions of {1..n} into k blocks
/// with 1..r in distinct blocks.
pub fn r_stirling2(n: u64, k: u64, r: u64) -> Result<BigInt> {
    StirlingTable::restricted(r).get(n, k)
}

/// (m)_k = m (m-1) ... (m-k+1).
pub fn falling_factorial_int(m: &BigInt, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * (m - j))
}

pub fn falling_factorial(m: &MPoly, k: u64) -> MPoly {
    (0..k).fold(MPoly::one(), |acc, j| &acc * &(m - &MPoly::int(j as i64)))
}

/// C(p, n) = (p)_n / n! as a polynomial in whatever symbols `p` carries.
pub fn binom_symbolic(p: &MPoly, n: u64) -> MPoly {
    falling_factorial(p, n).scale(&Rational::new(BigInt::one(), rational::factorial(n)))
}

/// Weights of the recurrence {n,k} = (a k + b) {n-1,k} + c {n-1,k-1}.
/// The standard numbers use a = 1, b = 0, c = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingRule {
    pub k_factor: i64,
    pub offset: i64,
    pub carry: i64,
}

impl Default for StirlingRule {
    fn default() -> Self {
        Self {
            k_factor: 1,
            offset: 0,
            carry: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StirlingKind {
    Plain,
    Restricted(u64),
}

/// Lazily grown triangle of (r-)Stirling numbers of the second kind.
///
/// Plain numbers are the r = 0 case: the base row is `{r, k}_r = [k = r]`
/// and later rows follow the recurrence.
#[derive(Debug)]
pub struct StirlingTable {
    r: u64,
    rule: StirlingRule,
    rows: RwLock<Vec<Vec<BigInt>>>,
}

impl StirlingTable {
    pub fn plain() -> Self {
        Self::with_rule(0, StirlingRule::default())
    }

    pub fn restricted(r: u64) -> Self {
        Self::with_rule(r, StirlingRule::default())
    }

    pub fn with_rule(r: u64, rule: StirlingRule) -> Self {
        let mut base = vec![BigInt::zero(); r as usize + 1];
        base[r as usize] = BigInt::one();
        Self {
            r,
            rule,
            rows: RwLock::new(vec![base]),
        }
    }

    pub fn kind(&self) -> StirlingKind {
        if self.r == 0 {
            StirlingKind::Plain
        } else {
            StirlingKind::Restricted(self.r)
        }
    }

    fn ensure(&self, n: u64) {
        let need = (n - self.r) as usize + 1;
        if self.rows.read().unwrap().len() >= need {
            return;
        }
        let mut rows = self.rows.write().unwrap();
        while rows.len() < need {
            let prev = rows.last().unwrap();
            let n = self.r + rows.len() as u64;
            let mut row = Vec::with_capacity(n as usize + 1);
            for k in 0..=n as usize {
                let stay = prev.get(k).cloned().unwrap_or_default();
                let weight = self.rule.k_factor * k as i64 + self.rule.offset;
                let moved = if k > 0 { prev[k - 1].clone() } else { BigInt::zero() };
                row.push(stay * weight + moved * self.rule.carry);
            }
            rows.push(row);
        }
    }

    pub fn get(&self, n: u64, k: u64) -> Result<BigInt> {
        if n < self.r {
            return Err(Error::domain(format!(
                "r-Stirling number needs n >= r (n = {n}, r = {})",
                self.r
            )));
        }
        if k > n {
            return Ok(BigInt::zero());
        }
        self.ensure(n);
        Ok(self.rows.read().unwrap()[(n - self.r) as usize][k as usize].clone())
    }

    /// Row `{n, 0..=n}` as rationals.
    pub fn row(&self, n: u64) -> Result<Vec<Rational>> {
        (0..=n).map(|k| self.get(n, k).map(rational::big)).collect()
    }
}

/// Seeds and recurrence weights for the memoized generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceParams {
    pub fibonacci_seeds: (BigInt, BigInt),
    pub lucas_seeds: (BigInt, BigInt),
    pub bell_seed: BigInt,
    pub fubini_seed: BigInt,
    pub stirling: StirlingRule,
}

impl Default for SequenceParams {
    fn default() -> Self {
        Self {
            fibonacci_seeds: (BigInt::zero(), BigInt::one()),
            lucas_seeds: (BigInt::from(2), BigInt::one()),
            bell_seed: BigInt::one(),
            fubini_seed: BigInt::one(),
            stirling: StirlingRule::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeqName {
    Harmonic,
    Harmonic2,
    Fibonacci,
    Lucas,
    Bell,
    Fubini,
}

impl SeqName {
    pub const ALL: [SeqName; 6] = [
        SeqName::Harmonic,
        SeqName::Harmonic2,
        SeqName::Fibonacci,
        SeqName::Lucas,
        SeqName::Bell,
        SeqName::Fubini,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SeqName::Harmonic => "harmonic",
            SeqName::Harmonic2 => "harmonic2",
            SeqName::Fibonacci => "fibonacci",
            SeqName::Lucas => "lucas",
            SeqName::Bell => "bell",
            SeqName::Fubini => "fubini",
        }
    }

    pub fn parse(s: &str) -> Option<SeqName> {
        SeqName::ALL.into_iter().find(|n| n.as_str() == s)
    }
}

#[derive(Debug, Clone)]
enum Rule {
    Harmonic { power: u32 },
    Linear2,
    Bell,
    Fubini,
}

/// Memoized generator. Values are appended under a write lock and never
/// change afterwards.
#[derive(Debug)]
pub struct SeqGen {
    name: SeqName,
    rule: Rule,
    memo: RwLock<Vec<Rational>>,
}

impl SeqGen {
    fn new(name: SeqName, rule: Rule, seeds: Vec<Rational>) -> Self {
        Self {
            name,
            rule,
            memo: RwLock::new(seeds),
        }
    }

    pub fn name(&self) -> SeqName {
        self.name
    }

    pub fn get(&self, n: usize) -> Rational {
        if let Some(v) = self.memo.read().unwrap().get(n) {
            return v.clone();
        }
        let mut memo = self.memo.write().unwrap();
        while memo.len() <= n {
            let next = self.next_value(&memo);
            memo.push(next);
        }
        memo[n].clone()
    }

    pub fn prefix(&self, len: usize) -> Vec<Rational> {
        if len > 0 {
            self.get(len - 1);
        }
        self.memo.read().unwrap()[..len].to_vec()
    }

    fn next_value(&self, memo: &[Rational]) -> Rational {
        let n = memo.len();
        match self.rule {
            Rule::Harmonic { power } => {
                let nn = num_traits::pow(BigInt::from(n), power as usize);
                &memo[n - 1] + Rational::new(BigInt::one(), nn)
            }
            Rule::Linear2 => &memo[n - 1] + &memo[n - 2],
            Rule::Bell => {
                let row = rational::binomial_row(n as u64 - 1);
                row.iter().zip(memo).map(|(c, v)| v * rational::big(c.clone())).sum()
            }
            Rule::Fubini => {
                let row = rational::binomial_row(n as u64);
                row.iter().zip(memo).map(|(c, v)| v * rational::big(c.clone())).sum()
            }
        }
    }

    /// Checks the defining recurrence at every memoized index.
    pub fn satisfies_recurrence(&self) -> bool {
        let memo = self.memo.read().unwrap();
        (1..memo.len()).all(|n| match self.rule {
            Rule::Linear2 if n < 2 => true,
            _ => self.next_value(&memo[..n]) == memo[n],
        })
    }
}

/// A consistent set of generators built from one [`SequenceParams`].
#[derive(Debug)]
pub struct Sequences {
    params: SequenceParams,
    pub harmonic: SeqGen,
    pub harmonic2: SeqGen,
    pub fibonacci: SeqGen,
    pub lucas: SeqGen,
    pub bell: SeqGen,
    pub fubini: SeqGen,
    stirling: Arc<StirlingTable>,
    restricted: RwLock<BTreeMap<u64, Arc<StirlingTable>>>,
}

impl Default for Sequences {
    fn default() -> Self {
        Self::new(SequenceParams::default())
    }
}

impl Sequences {
    pub fn new(params: SequenceParams) -> Self {
        let big = |b: &BigInt| rational::big(b.clone());
        Self {
            harmonic: SeqGen::new(SeqName::Harmonic, Rule::Harmonic { power: 1 }, vec![Rational::zero()]),
            harmonic2: SeqGen::new(SeqName::Harmonic2, Rule::Harmonic { power: 2 }, vec![Rational::zero()]),
            fibonacci: SeqGen::new(
                SeqName::Fibonacci,
                Rule::Linear2,
                vec![big(&params.fibonacci_seeds.0), big(&params.fibonacci_seeds.1)],
            ),
            lucas: SeqGen::new(
                SeqName::Lucas,
                Rule::Linear2,
                vec![big(&params.lucas_seeds.0), big(&params.lucas_seeds.1)],
            ),
            bell: SeqGen::new(SeqName::Bell, Rule::Bell, vec![big(&params.bell_seed)]),
            fubini: SeqGen::new(SeqName::Fubini, Rule::Fubini, vec![big(&params.fubini_seed)]),
            stirling: Arc::new(StirlingTable::with_rule(0, params.stirling.clone())),
            restricted: RwLock::new(BTreeMap::new()),
            params,
        }
    }

    pub fn params(&self) -> &SequenceParams {
        &self.params
    }

    pub fn by_name(&self, name: SeqName) -> &SeqGen {
        match name {
            SeqName::Harmonic => &self.harmonic,
            SeqName::Harmonic2 => &self.harmonic2,
            SeqName::Fibonacci => &self.fibonacci,
            SeqName::Lucas => &self.lucas,
            SeqName::Bell => &self.bell,
            SeqName::Fubini => &self.fubini,
        }
    }

    pub fn stirling_table(&self) -> &StirlingTable {
        &self.stirling
    }

    pub fn stirling2(&self, n: u64, k: u64) -> Rational {
        rational::big(self.stirling.get(n, k).expect("plain table"))
    }

    pub fn r_stirling_table(&self, r: u64) -> Arc<StirlingTable> {
        if r == 0 {
            return self.stirling.clone();
        }
        if let Some(t) = self.restricted.read().unwrap().get(&r) {
            return t.clone();
        }
        self.restricted
            .write()
            .unwrap()
            .entry(r)
            .or_insert_with(|| Arc::new(StirlingTable::with_rule(r, self.params.stirling.clone())))
            .clone()
    }

    pub fn r_stirling2(&self, n: u64, k: u64, r: u64) -> Result<Rational> {
        self.r_stirling_table(r).get(n, k).map(rational::big)
    }
}
