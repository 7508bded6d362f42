use hseries_core::rational::{self, Rational};
use hseries_core::sequences::{
    bell, binom_symbolic, fibonacci, fubini, lucas, r_stirling2, stirling2, SeqName, Sequences,
};
use hseries_core::series::standard;
use hseries_core::{MPoly, Symbol, TSeries};
use num_bigint::BigInt;

/// Block counts of every set partition of {0..n}, with elements 0..r
/// forced into distinct blocks. Enumerates restricted growth strings.
fn partition_block_counts(n: usize, r: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n + 1];
    let mut labels = vec![0usize; n];
    fn walk(i: usize, blocks: usize, labels: &mut [usize], r: usize, counts: &mut [u64]) {
        if i == labels.len() {
            counts[blocks] += 1;
            return;
        }
        for b in 0..=blocks {
            if i < r && b != blocks {
                continue;
            }
            labels[i] = b;
            walk(i + 1, blocks.max(b + 1), labels, r, counts);
        }
    }
    walk(0, 0, &mut labels, r, &mut counts);
    counts
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

#[test]
fn stirling_matches_set_partition_enumeration() {
    for n in 0..=9usize {
        let counts = partition_block_counts(n, 0);
        for k in 0..=n {
            assert_eq!(stirling2(n as u64, k as u64), BigInt::from(counts[k]), "{{{n},{k}}}");
        }
        assert_eq!(bell(n as u64), BigInt::from(counts.iter().sum::<u64>()));
        let ordered: u64 = counts.iter().enumerate().map(|(k, c)| c * factorial(k as u64)).sum();
        assert_eq!(fubini(n as u64), BigInt::from(ordered));
    }
}

#[test]
fn r_stirling_matches_restricted_enumeration() {
    for r in 0..=3usize {
        for n in r..=8 {
            let counts = partition_block_counts(n, r);
            for k in 0..=n {
                let got = r_stirling2(n as u64, k as u64, r as u64).unwrap();
                assert_eq!(got, BigInt::from(counts[k]), "{{{n},{k}}}_{r}");
            }
        }
    }
}

#[test]
fn r_stirling_at_zero_is_plain() {
    for n in 0..=12 {
        for k in 0..=12 {
            assert_eq!(r_stirling2(n, k, 0).unwrap(), stirling2(n, k));
        }
    }
}

#[test]
fn stirling_triangle_boundaries() {
    for n in 0..=12u64 {
        assert_eq!(stirling2(n, n), BigInt::from(1));
        assert_eq!(stirling2(n, n + 3), BigInt::from(0));
        if n >= 1 {
            assert_eq!(stirling2(n, 0), BigInt::from(0));
        }
    }
    for r in 1..=3u64 {
        assert_eq!(r_stirling2(r, r, r).unwrap(), BigInt::from(1));
        assert_eq!(r_stirling2(r + 4, r - 1, r).unwrap(), BigInt::from(0));
        assert!(r_stirling2(r - 1, 0, r).is_err());
    }
}

#[test]
fn memoized_generators_satisfy_their_recurrences() {
    let s = Sequences::default();
    for name in SeqName::ALL {
        let g = s.by_name(name);
        let first = g.prefix(30);
        assert!(g.satisfies_recurrence(), "{}", name.as_str());
        assert_eq!(g.prefix(30), first);
    }
    assert_eq!(s.harmonic.get(4), rational::frac(25, 12));
    assert_eq!(s.harmonic2.get(3), rational::frac(49, 36));
    assert_eq!(s.harmonic.get(0), rational::int(0));
}

#[test]
fn fibonacci_and_lucas_generating_functions() {
    let n = 12;
    let denom = standard::poly_t(&[1, -1, -1], n);
    let fib_gf = standard::poly_t(&[0, 1], n).div(&denom).unwrap();
    let luc_gf = standard::poly_t(&[2, -1], n).div(&denom).unwrap();
    for k in 0..=n {
        assert_eq!(fib_gf.coeffs()[k], MPoly::constant(rational::big(fibonacci(k as u64))));
        assert_eq!(luc_gf.coeffs()[k], MPoly::constant(rational::big(lucas(k as u64))));
    }
}

#[test]
fn symbolic_binomial() {
    let p = MPoly::var(Symbol::P);
    assert_eq!(binom_symbolic(&p, 0), MPoly::one());
    assert_eq!(binom_symbolic(&p, 2), "1/2*p^2 - 1/2*p".parse().unwrap());
}

#[test]
fn vandermonde_in_symbolic_p() {
    let p = MPoly::var(Symbol::P);
    for n in 0..=10u64 {
        let mut lhs = MPoly::zero();
        for k in 0..=n {
            let term = binom_symbolic(&(&p + &MPoly::int(k as i64)), k)
                .scale(&(rational::big(rational::binomial(n, k)) * rational::sign(k)));
            lhs += &term;
        }
        let rhs = binom_symbolic(&p, n).scale(&rational::sign(n));
        assert_eq!(lhs, rhs, "n = {n}");
    }
}

#[test]
fn bell_and_fubini_from_exponential_generating_functions() {
    let n = 10;
    let et = TSeries::t(n).exp().unwrap();
    let bell_egf = et.sub(&TSeries::one(n)).unwrap().exp().unwrap();
    let two_minus_et = TSeries::constant(MPoly::int(2), n).sub(&et).unwrap();
    let fubini_egf = two_minus_et.inverse().unwrap();
    for k in 0..=n {
        let scale = rational::big(rational::factorial(k as u64));
        let b: Rational = bell_egf.coeffs()[k].constant_term() * &scale;
        let w: Rational = fubini_egf.coeffs()[k].constant_term() * &scale;
        assert_eq!(b, rational::big(bell(k as u64)));
        assert_eq!(w, rational::big(fubini(k as u64)));
    }
}
