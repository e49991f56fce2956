use serde::{Deserialize, Serialize};

/// Outcome of a bounded falsification search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict<W> {
    NoCounterexample { trials: usize },
    Counterexample { trials: usize, witness: W },
}

impl<W> Verdict<W> {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample { .. })
    }

    pub fn trials(&self) -> usize {
        match self {
            Verdict::NoCounterexample { trials } | Verdict::Counterexample { trials, .. } => *trials,
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Counterexample { witness, .. } => Some(witness),
            Verdict::NoCounterexample { .. } => None,
        }
    }
}
