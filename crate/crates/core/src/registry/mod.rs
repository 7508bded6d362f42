//! Catalogue of generating-function identities and the runner that checks
//! them coefficient by coefficient.
//!
//! Every record carries two builders producing truncated series. Finite-sum
//! identities are packed as series too: the coefficient of `t^n` holds the
//! value at index `n`, and extra integer parameters ride on the spare symbols
//! `p` and `z`.

mod catalog;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mpoly::{MPoly, Symbol};
use crate::sequences::{SequenceParams, Sequences};
use crate::series::TSeries;
use crate::transforms::TransformReport;

pub use catalog::{eq46_rhs_terms, BIBLIOGRAPHY};

/// Highest order accepted by [`Registry::verify`].
pub const MAX_ORDER: usize = 40;

pub type Builder = Arc<dyn Fn(&Sequences, usize) -> Result<TSeries> + Send + Sync>;
pub type Weight = Arc<dyn Fn(&Sequences, usize) -> MPoly + Send + Sync>;

/// Weights `a`, `c` of a record of the form
/// `sum a_n H_n(x) t^n/n! = exp(2xt - t^2) sum c_n H_n(x - t) t^n/n!`.
#[derive(Clone)]
pub struct HermiteWeights {
    pub lhs: Weight,
    pub rhs: Weight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Series,
    GeneratingFunction,
    FiniteSum,
    Operator,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Series => "series",
            Kind::GeneratingFunction => "generating-function",
            Kind::FiniteSum => "finite-sum",
            Kind::Operator => "operator",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone)]
pub struct IdentityRecord {
    pub id: String,
    pub paper_eq: String,
    pub symbols: BTreeSet<Symbol>,
    pub kind: Kind,
    pub lhs: Builder,
    pub rhs: Builder,
    pub default_order: usize,
    pub notes: String,
    pub weights: Option<HermiteWeights>,
}

impl IdentityRecord {
    pub fn new(
        id: impl Into<String>,
        paper_eq: impl Into<String>,
        kind: Kind,
        symbols: &[Symbol],
        lhs: impl Fn(&Sequences, usize) -> Result<TSeries> + Send + Sync + 'static,
        rhs: impl Fn(&Sequences, usize) -> Result<TSeries> + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.into(),
            paper_eq: paper_eq.into(),
            symbols: symbols.iter().copied().collect(),
            kind,
            lhs: Arc::new(lhs),
            rhs: Arc::new(rhs),
            default_order: 12,
            notes: String::new(),
            weights: None,
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn with_weights(
        mut self,
        lhs: impl Fn(&Sequences, usize) -> MPoly + Send + Sync + 'static,
        rhs: impl Fn(&Sequences, usize) -> MPoly + Send + Sync + 'static,
    ) -> Self {
        self.weights = Some(HermiteWeights {
            lhs: Arc::new(lhs),
            rhs: Arc::new(rhs),
        });
        self
    }

    pub fn build(&self, seqs: &Sequences, order: usize) -> Result<(TSeries, TSeries)> {
        Ok(((self.lhs)(seqs, order)?, (self.rhs)(seqs, order)?))
    }
}

impl fmt::Debug for IdentityRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityRecord")
            .field("id", &self.id)
            .field("paper_eq", &self.paper_eq)
            .field("kind", &self.kind)
            .field("symbols", &self.symbols)
            .finish()
    }
}

/// Sort key: numeric part of the id first, then the full id.
fn id_key(id: &str) -> (u64, String) {
    let digits: String = id
        .chars()
        .skip_while(|c| !c.is_ascii_digit())
        .take_while(|c| c.is_ascii_digit())
        .collect();
    (digits.parse().unwrap_or(0), id.to_string())
}

pub struct Registry {
    records: BTreeMap<(u64, String), IdentityRecord>,
    seqs: Sequences,
}

impl Registry {
    pub fn empty(params: SequenceParams) -> Self {
        Self {
            records: BTreeMap::new(),
            seqs: Sequences::new(params),
        }
    }

    pub fn register(&mut self, record: IdentityRecord) -> Result<()> {
        if !BIBLIOGRAPHY.iter().any(|(label, _)| *label == record.paper_eq) {
            return Err(Error::Config(format!(
                "{}: citation {:?} missing from the bibliography table",
                record.id, record.paper_eq
            )));
        }
        let key = id_key(&record.id);
        if self.records.contains_key(&key) {
            return Err(Error::Config(format!("duplicate identity id {}", record.id)));
        }
        self.records.insert(key, record);
        Ok(())
    }

    pub fn sequences(&self) -> &Sequences {
        &self.seqs
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records in report order.
    pub fn records(&self) -> impl Iterator<Item = &IdentityRecord> {
        self.records.values()
    }

    pub fn ids(&self) -> Vec<String> {
        self.records().map(|r| r.id.clone()).collect()
    }

    pub fn lookup(&self, id: &str) -> Result<&IdentityRecord> {
        self.records
            .get(&id_key(id))
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    /// Builds both sides and compares them. A mismatch is reported, not
    /// raised.
    pub fn verify(&self, id: &str, order: usize) -> Result<TransformReport> {
        let record = self.lookup(id)?;
        if order > MAX_ORDER {
            return Err(Error::Config(format!("order {order} exceeds the maximum {MAX_ORDER}")));
        }
        let (lhs, rhs) = record.build(&self.seqs, order)?;
        TransformReport::compare(lhs, rhs)
    }

    fn outcome(&self, record: &IdentityRecord, order: usize) -> Outcome {
        let start = Instant::now();
        let result = self.verify(&record.id, order);
        let millis = start.elapsed().as_millis() as u64;
        let (compared_order, first_mismatch, error, pass) = match result {
            Ok(r) => (
                r.compared_order,
                r.first_mismatch.map(|m| MismatchJson {
                    power: m.power,
                    lhs: m.lhs.to_string(),
                    rhs: m.rhs.to_string(),
                }),
                None,
                r.equal,
            ),
            Err(e) => (None, None, Some(e.to_string()), false),
        };
        Outcome {
            identity: record.id.clone(),
            paper_eq: record.paper_eq.clone(),
            order,
            compared_order,
            status: if pass { Status::Pass } else { Status::Fail },
            first_mismatch,
            millis,
            error,
        }
    }

    /// Verifies the given ids (all when `None`) on a pool of `parallelism`
    /// workers. Report order follows the registry order.
    pub fn verify_all(&self, ids: Option<&[String]>, order: usize, parallelism: usize) -> Result<SuiteReport> {
        let selected: Vec<&IdentityRecord> = match ids {
            None => self.records().collect(),
            Some(ids) => {
                let mut picked = ids.iter().map(|id| self.lookup(id)).collect::<Result<Vec<_>>>()?;
                picked.sort_by_key(|r| id_key(&r.id));
                picked.dedup_by(|a, b| a.id == b.id);
                picked
            }
        };
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        let results: Vec<Outcome> =
            pool.install(|| selected.par_iter().map(|r| self.outcome(r, order)).collect());
        Ok(SuiteReport::new(results))
    }
}

/// The full catalogue with default sequence parameters.
pub fn register_all() -> Result<Registry> {
    register_all_with(SequenceParams::default())
}

pub fn register_all_with(params: SequenceParams) -> Result<Registry> {
    let mut reg = Registry::empty(params);
    for record in catalog::records() {
        reg.register(record)?;
    }
    Ok(reg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MismatchJson {
    pub power: usize,
    pub lhs: String,
    pub rhs: String,
}

/// One line of the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub identity: String,
    pub paper_eq: String,
    pub order: usize,
    pub compared_order: Option<usize>,
    pub status: Status,
    pub first_mismatch: Option<MismatchJson>,
    pub millis: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub outcomes: Vec<Outcome>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn new(outcomes: Vec<Outcome>) -> Self {
        let passed = outcomes.iter().filter(|o| o.status == Status::Pass).count();
        let failed = outcomes.len() - passed;
        Self {
            outcomes,
            passed,
            failed,
        }
    }

    pub fn total(&self) -> usize {
        self.outcomes.len()
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    /// Clears wall-clock timings so that reports compare byte for byte.
    pub fn without_timing(mut self) -> Self {
        for o in &mut self.outcomes {
            o.millis = 0;
        }
        self
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            out.push_str(&serde_json::to_string(o).expect("outcome serializes"));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            let status = match o.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let compared = o
                .compared_order
                .map_or_else(|| "-".to_string(), |c| c.to_string());
            out.push_str(&format!(
                "{status} {:<18} order {} compared {} {}ms",
                o.identity, o.order, compared, o.millis
            ));
            if let Some(m) = &o.first_mismatch {
                out.push_str(&format!(" mismatch at t^{}: {} != {}", m.power, m.lhs, m.rhs));
            }
            if let Some(e) = &o.error {
                out.push_str(&format!(" error: {e}"));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} passed, {} failed, {} total\n",
            self.passed,
            self.failed,
            self.total()
        ));
        out
    }
}

#[cfg(test)]
mod tests;
