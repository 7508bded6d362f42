use super::*;
use crate::mpoly::MPoly;
use crate::rational::{frac, int};
use crate::series::TSeries;
use crate::transforms::{hermite_weighted_lhs, hermite_weighted_rhs};

fn reg() -> Registry {
    register_all().unwrap()
}

#[test]
fn catalogue_size_and_lookup() {
    let r = reg();
    assert!(r.len() >= 55, "only {} records", r.len());
    let mehler = r.lookup("EQ40-MEHLER").unwrap();
    assert_eq!(mehler.symbols, [Symbol::X, Symbol::Z].into_iter().collect());
    let eq45 = r.lookup("EQ45").unwrap();
    assert_eq!(eq45.symbols, [Symbol::X, Symbol::P].into_iter().collect());
    assert!(matches!(r.lookup("EQ999"), Err(Error::UnknownIdentity(_))));
}

#[test]
fn declared_symbols_cover_both_sides() {
    let r = reg();
    for rec in r.records() {
        let (lhs, rhs) = rec.build(r.sequences(), 5).unwrap();
        for side in [&lhs, &rhs] {
            for c in side.coeffs() {
                assert!(c.symbols().is_subset(&rec.symbols), "{}: {c}", rec.id);
            }
        }
    }
}

#[test]
fn citations_are_in_bibliography() {
    for rec in reg().records() {
        assert!(BIBLIOGRAPHY.iter().any(|(l, _)| *l == rec.paper_eq), "{}", rec.id);
    }
}

#[test]
fn duplicate_id_rejected() {
    let mut r = reg();
    let rec = r.lookup("EQ12").unwrap().clone();
    assert!(matches!(r.register(rec), Err(Error::Config(_))));
}

#[test]
fn unknown_citation_rejected() {
    let mut r = Registry::empty(SequenceParams::default());
    let rec = IdentityRecord::new("X1", "Eq. 1000", Kind::Series, &[], |_, n| Ok(TSeries::zero(n)), |_, n| {
        Ok(TSeries::zero(n))
    });
    assert!(matches!(r.register(rec), Err(Error::Config(_))));
}

#[test]
fn eq1_and_eq73() {
    let r = reg();
    assert!(r.verify("EQ1", 12).unwrap().equal);
    let rep = r.verify("EQ73", 12).unwrap();
    assert!(rep.equal);
    let want: MPoly = "8/3*x^3 - 4*x".parse().unwrap();
    assert_eq!(rep.lhs.coeffs()[3], want);
}

#[test]
fn every_identity_passes_at_order_8() {
    let suite = reg().verify_all(None, 8, 4).unwrap();
    let failed: Vec<_> = suite.outcomes.iter().filter(|o| o.status == Status::Fail).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    assert_eq!(suite.passed + suite.failed, suite.total());
}

#[test]
fn order_zero_passes() {
    let suite = reg().verify_all(None, 0, 2).unwrap();
    assert!(suite.all_passed());
    assert!(suite.outcomes.iter().all(|o| o.compared_order == Some(0)));
}

#[test]
fn order_above_maximum_rejected() {
    assert!(matches!(reg().verify("EQ1", MAX_ORDER + 1), Err(Error::Config(_))));
}

#[test]
fn corrupted_builder_reports_power_5() {
    let mut r = Registry::empty(SequenceParams::default());
    r.register(IdentityRecord::new(
        "EQ20",
        "Eq. 20",
        Kind::Series,
        &[Symbol::X],
        |s, n| {
            Ok(hermite_weighted_lhs(
                |k| {
                    let bump = if k == 5 { int(1) } else { int(0) };
                    MPoly::constant(s.harmonic.get(k) + bump)
                },
                n,
            ))
        },
        |_, n| {
            hermite_weighted_rhs(
                |k| {
                    if k == 0 {
                        MPoly::zero()
                    } else {
                        MPoly::constant(-crate::rational::sign(k as u64) * frac(1, k as i64))
                    }
                },
                n,
            )
        },
    ))
    .unwrap();
    let rep = r.verify("EQ20", 12).unwrap();
    assert!(!rep.equal);
    assert_eq!(rep.first_mismatch.unwrap().power, 5);
}

#[test]
fn literal_eq22_is_rejected() {
    let s = Sequences::default();
    let lhs = hermite_weighted_lhs(|n| MPoly::constant(s.harmonic.get(n) * frac(1, n as i64 + 1)), 8);
    let literal = hermite_weighted_rhs(
        |n| MPoly::constant(crate::rational::sign(n as u64) * frac(1, n as i64 + 1)),
        8,
    )
    .unwrap();
    assert!(!TransformReport::compare(lhs, literal).unwrap().equal);
}

#[test]
fn literal_eq62_is_rejected() {
    let s = Sequences::default();
    let lhs = hermite_weighted_lhs(|n| MPoly::constant(s.fubini.get(n) * int(2)), 8);
    let rhs = hermite_weighted_rhs(|n| MPoly::constant(s.fubini.get(n)), 8).unwrap();
    let rep = TransformReport::compare(lhs, rhs).unwrap();
    assert_eq!(rep.first_mismatch.unwrap().power, 0);
}

#[test]
fn eq46_right_side_is_finite() {
    for p in 1..=4 {
        assert_eq!(eq46_rhs_terms(p, 12), p as usize + 1);
    }
}

#[test]
fn eq41_at_y_zero_is_eq40() {
    let r = reg();
    let (l41, r41) = r.lookup("EQ41").unwrap().build(r.sequences(), 8).unwrap();
    let (l40, r40) = r.lookup("EQ40-MEHLER").unwrap().build(r.sequences(), 8).unwrap();
    let zero = MPoly::zero();
    assert_eq!(l41.substitute(Symbol::Y, &zero), r40);
    assert_eq!(r41.substitute(Symbol::Y, &zero), l40);
}

#[test]
fn symmetric_pairs_are_distinct_records() {
    let r = reg();
    for (a, b) in [("EQ19", "EQ20"), ("EQ34", "EQ35"), ("EQ69", "EQ74"), ("EQ85", "EQ86")] {
        let (la, _) = r.lookup(a).unwrap().build(r.sequences(), 6).unwrap();
        let (lb, _) = r.lookup(b).unwrap().build(r.sequences(), 6).unwrap();
        assert_ne!(la, lb, "{a} / {b}");
    }
}

#[test]
fn parallelism_does_not_change_report() {
    let r = reg();
    let one = r.verify_all(None, 6, 1).unwrap().without_timing();
    let eight = r.verify_all(None, 6, 8).unwrap().without_timing();
    assert_eq!(one.to_json_lines(), eight.to_json_lines());
}

#[test]
fn json_line_schema() {
    let r = reg();
    let ids = vec!["EQ1".to_string()];
    let suite = r.verify_all(Some(&ids), 8, 1).unwrap().without_timing();
    let line = suite.to_json_lines();
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["identity"], "EQ1");
    assert_eq!(v["paper_eq"], "Eq. 1");
    assert_eq!(v["order"], 8);
    assert_eq!(v["compared_order"], 8);
    assert_eq!(v["status"], "pass");
    assert!(v["first_mismatch"].is_null());
    assert_eq!(v["millis"], 0);
    let back: Outcome = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(back, suite.outcomes[0]);
}

#[test]
fn hermite_weights_reproduce_builders() {
    let r = reg();
    let mut seen = 0;
    for rec in r.records() {
        let Some(w) = &rec.weights else { continue };
        let s = r.sequences();
        let (lhs, rhs) = rec.build(s, 10).unwrap();
        assert_eq!(hermite_weighted_lhs(|n| (w.lhs)(s, n), 10), lhs, "{}", rec.id);
        assert_eq!(hermite_weighted_rhs(|n| (w.rhs)(s, n), 10).unwrap(), rhs, "{}", rec.id);
        seen += 1;
    }
    assert!(seen >= 10);
}
