//! Verdicts, witnesses, and the JSON report rows emitted by the CLI.
//!
//! A refuted verdict always carries a machine-checkable witness: enough data
//! to replay the failing instance (the witness poset is serialized as
//! elements plus covers).

use crate::poset::Poset;
use serde::{Deserialize, Serialize};

/// Result of a bounded check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Holds { bound: String },
    Refuted { witness: Witness },
    Skipped { reason: String },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Refuted { witness } => Some(witness),
            _ => None,
        }
    }
}

/// Serialized poset: labels plus cover pairs; enough to rebuild the instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetData {
    pub elements: Vec<String>,
    pub covers: Vec<String>,
}

impl PosetData {
    pub fn of(p: &Poset) -> PosetData {
        PosetData {
            elements: p.elements().map(|x| p.label(x)).collect(),
            covers: p
                .covers()
                .iter()
                .map(|&(a, b)| format!("{}<{}", p.label(a), p.label(b)))
                .collect(),
        }
    }
}

fn hom_strings(p: &Poset, image: &[u32]) -> Vec<String> {
    image
        .iter()
        .enumerate()
        .map(|(x, &v)| format!("{}->{}", p.label(x), v))
        .collect()
}

/// Machine-checkable refutation data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum Witness {
    /// A counting inequality failed at this poset.
    CountGap {
        poset: PosetData,
        left: u64,
        right: u64,
    },
    /// EV-systems too small for any injection.
    EvCountGap { left: u64, right: u64 },
    /// Exhaustive injection search found no admissible map at the bound.
    NoInjectionFound { searched_nodes: u64 },
    /// Two distinct homomorphisms collide under a scheme map.
    Collision {
        poset: PosetData,
        first: Vec<String>,
        second: Vec<String>,
    },
    /// A fiber class changed under a scheme map.
    FingerprintMismatch {
        poset: PosetData,
        hom: Vec<String>,
        image_hom: Vec<String>,
        element: String,
    },
    /// Signature comparability did not transfer (or strictness/equality was
    /// not preserved) between two instances.
    TransferViolation {
        p: PosetData,
        q: PosetData,
        hom_p: Vec<String>,
        hom_q: Vec<String>,
        x: String,
        y: String,
        detail: String,
    },
    /// An identity or pipeline assertion failed; free-form but replayable
    /// from the named instance.
    Structural { instance: String, detail: String },
}

impl Witness {
    pub fn count_gap(p: &Poset, left: u64, right: u64) -> Witness {
        Witness::CountGap {
            poset: PosetData::of(p),
            left,
            right,
        }
    }

    pub fn collision(p: &Poset, first: &[u32], second: &[u32]) -> Witness {
        Witness::Collision {
            poset: PosetData::of(p),
            first: hom_strings(p, first),
            second: hom_strings(p, second),
        }
    }

    pub fn fingerprint_mismatch(p: &Poset, hom: &[u32], image_hom: &[u32], x: usize) -> Witness {
        Witness::FingerprintMismatch {
            poset: PosetData::of(p),
            hom: hom_strings(p, hom),
            image_hom: hom_strings(p, image_hom),
            element: p.label(x),
        }
    }
}

/// One row of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: String,
    pub status: Status,
    pub bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub witness: Option<Witness>,
    pub runtime_ms: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Refuted,
    Skipped,
}

impl ClaimReport {
    pub fn from_verdict(claim: &str, verdict: Verdict, runtime_ms: u64) -> ClaimReport {
        let (status, bound, witness) = match verdict {
            Verdict::Holds { bound } => (Status::Holds, bound, None),
            Verdict::Refuted { witness } => (Status::Refuted, String::new(), Some(witness)),
            Verdict::Skipped { reason } => (Status::Skipped, reason, None),
        };
        ClaimReport {
            claim: claim.to_string(),
            status,
            bound,
            witness,
            runtime_ms,
        }
    }

    /// Stable text rendering; excludes runtime so identical runs are
    /// byte-identical.
    pub fn text_line(&self) -> String {
        let status = match self.status {
            Status::Holds => "HOLDS",
            Status::Refuted => "REFUTED",
            Status::Skipped => "SKIPPED",
        };
        let mut line = format!("{:<52} {:<8} {}", self.claim, status, self.bound);
        if let Some(w) = &self.witness {
            line.push_str(&format!(
                " witness: {}",
                serde_json::to_string(w).expect("witness serializes")
            ));
        }
        line.trim_end().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_round_trip() {
        let report = ClaimReport {
            claim: "demo".into(),
            status: Status::Refuted,
            bound: String::new(),
            witness: Some(Witness::count_gap(&Poset::chain(2), 3, 2)),
            runtime_ms: 7,
        };
        let s = serde_json::to_string(&report).unwrap();
        let back: ClaimReport = serde_json::from_str(&s).unwrap();
        assert_eq!(report, back);
    }
}
