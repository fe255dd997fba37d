//! Structured pass/fail evidence for the checks.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Witnesses kept per report; the total count is recorded under `witnesses`.
const MAX_WITNESSES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of one check on one instance and one parameter tuple.
///
/// A failing report always carries at least one witness. `sizes` records the
/// cardinalities of both sides of every asserted set equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub instance: String,
    pub params: String,
    pub verdict: Verdict,
    pub sizes: BTreeMap<String, usize>,
    pub witnesses: Vec<String>,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
}

impl CheckReport {
    pub fn new(check: &str, params: impl Into<String>) -> Self {
        CheckReport {
            check: check.to_string(),
            instance: String::new(),
            params: params.into(),
            verdict: Verdict::Pass,
            sizes: BTreeMap::new(),
            witnesses: Vec::new(),
            notes: Vec::new(),
            seed: None,
        }
    }

    pub fn with_instance(mut self, instance: &str) -> Self {
        self.instance = instance.to_string();
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.verdict = Verdict::Fail;
        let total = self.sizes.entry("witnesses".into()).or_insert(0);
        *total += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness.into());
        }
    }

    /// Records a failure with a lazily built witness unless `cond` holds.
    pub fn require(&mut self, cond: bool, witness: impl FnOnce() -> String) -> bool {
        if !cond {
            self.fail(witness());
        }
        cond
    }

    pub fn size(&mut self, key: &str, value: usize) {
        self.sizes.insert(key.to_string(), value);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Merges another report's evidence into this one under a prefix.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for (k, v) in other.sizes {
            if k == "witnesses" {
                continue;
            }
            self.sizes.insert(format!("{prefix}.{k}"), v);
        }
        for w in other.witnesses {
            self.fail(format!("{prefix}: {w}"));
        }
        self.notes.extend(other.notes.into_iter().map(|n| format!("{prefix}: {n}")));
        if self.seed.is_none() {
            self.seed = other.seed;
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(line)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} {} [{}] {}", self.check, self.instance, self.params)?;
        for w in &self.witnesses {
            write!(f, "\n    witness: {w}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_report_has_witness() {
        let mut r = CheckReport::new("demo", "M={x}");
        assert!(r.passed());
        assert!(!r.require(false, || "x -> y".into()));
        assert!(!r.passed());
        assert_eq!(r.witnesses, vec!["x -> y".to_string()]);
        assert_eq!(r.sizes["witnesses"], 1);
    }

    #[test]
    fn json_round_trip() {
        let mut r = CheckReport::new("demo", "sigma=1").with_instance("K");
        r.size("lhs", 2);
        r.note("strict");
        r.seed = Some(7);
        let line = r.to_json_line();
        assert!(!line.contains('\n'));
        assert_eq!(CheckReport::from_json_line(&line).unwrap(), r);
    }

    #[test]
    fn witness_list_is_capped() {
        let mut r = CheckReport::new("demo", "");
        for i in 0..40 {
            r.fail(i.to_string());
        }
        assert_eq!(r.witnesses.len(), MAX_WITNESSES);
        assert_eq!(r.sizes["witnesses"], 40);
    }
}
