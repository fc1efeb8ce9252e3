//! Machine-readable verdicts.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const ENGINE: &str = concat!("qdyson ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub a: Vec<u32>,
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub extra: Map<String, Value>,
}

impl Params {
    pub fn new(n: usize, a: &[u32], i: &[usize], j: &[usize]) -> Self {
        Params {
            n,
            a: a.to_vec(),
            i: i.to_vec(),
            j: j.to_vec(),
            extra: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }
}

/// Outcome of one identity check. `holds` is exact equality of the two sides,
/// whose canonical renderings are carried in `lhs` and `rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Params,
    pub holds: bool,
    pub lhs: String,
    pub rhs: String,
    pub elapsed_ms: f64,
    pub engine: String,
}

impl VerificationReport {
    pub fn new(
        identity: &str,
        params: Params,
        holds: bool,
        lhs: String,
        rhs: String,
        started: Instant,
    ) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            params,
            holds,
            lhs,
            rhs,
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
            engine: ENGINE.to_string(),
        }
    }

    /// One-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Short human-readable summary line.
    pub fn summary_line(&self) -> String {
        let p = &self.params;
        let verdict = if self.holds { "HOLDS" } else { "FAILS" };
        let mut line = format!("{} n={} a={:?}", self.identity, p.n, p.a);
        if !p.i.is_empty() || !p.j.is_empty() {
            line.push_str(&format!(" I={:?} J={:?}", p.i, p.j));
        }
        line.push_str(&format!(": {verdict} ({:.2} ms)", self.elapsed_ms));
        line
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub rejected: usize,
    pub seed: u64,
}
