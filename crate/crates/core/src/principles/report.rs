use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{AuditConfig, PrincipleError, PrincipleId, PrincipleVerdict};
use crate::impact::Measure;
use crate::semantics::SemanticsKind;

/// Reference status of a (principle, measure, semantics) cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Satisfied,
    Violated,
    /// Satisfied on graphs with at least two arguments of maximum in-degree.
    SatisfiedOnClass,
}

/// Reference expectation for the revised degree-difference and walk
/// measures; `None` for the original degree-difference variant.
pub fn reference_expectation(p: PrincipleId, measure: Measure, semantics: SemanticsKind) -> Option<Expectation> {
    use Expectation::*;
    let cs = semantics == SemanticsKind::Cs;
    match measure {
        Measure::DvOriginal => None,
        Measure::Dv => Some(match p {
            PrincipleId::Balanced => Violated,
            PrincipleId::Independence | PrincipleId::Directionality if cs => Violated,
            _ => Satisfied,
        }),
        Measure::Si => Some(match p {
            PrincipleId::Independence | PrincipleId::Directionality if cs => Violated,
            PrincipleId::Existence if cs => SatisfiedOnClass,
            _ => Satisfied,
        }),
    }
}

fn matches(expectation: Expectation, v: &PrincipleVerdict) -> bool {
    match expectation {
        Expectation::Satisfied => v.holds(),
        Expectation::Violated => !v.holds(),
        Expectation::SatisfiedOnClass => v
            .restricted
            .as_ref()
            .is_some_and(|c| !c.outcome.is_counterexample()),
    }
}

/// A cell whose premises all hold while the implied principle was falsified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inconsistency {
    pub measure: Measure,
    pub semantics: SemanticsKind,
    pub premises: Vec<PrincipleId>,
    pub conclusion: PrincipleId,
}

const IMPLICATIONS: [(&[PrincipleId], PrincipleId); 3] = [
    (
        &[
            PrincipleId::Anonymity,
            PrincipleId::Directionality,
            PrincipleId::Minimisation,
            PrincipleId::Independence,
        ],
        PrincipleId::Symmetry,
    ),
    (&[PrincipleId::Zero, PrincipleId::Balanced], PrincipleId::Minimisation),
    (&[PrincipleId::Void, PrincipleId::Minimisation], PrincipleId::Zero),
];

/// Checks the known implications between principles on every
/// (measure, semantics) cell present in `matrix`.
pub fn crosscheck_implications(matrix: &[PrincipleVerdict]) -> Result<Vec<Inconsistency>, PrincipleError> {
    let mut cells: Vec<(Measure, SemanticsKind)> = matrix.iter().map(|v| (v.measure, v.semantics)).collect();
    cells.sort();
    cells.dedup();
    let mut found = Vec::new();
    for (measure, semantics) in cells {
        let holds = |p: PrincipleId| {
            matrix
                .iter()
                .find(|v| v.principle == p && v.measure == measure && v.semantics == semantics)
                .map(PrincipleVerdict::holds)
                .ok_or(PrincipleError::IncompleteMatrix {
                    principle: p,
                    measure,
                    semantics,
                })
        };
        for (premises, conclusion) in IMPLICATIONS {
            let mut all = true;
            for &p in premises {
                all &= holds(p)?;
            }
            if all && !holds(conclusion)? {
                found.push(Inconsistency {
                    measure,
                    semantics,
                    premises: premises.to_vec(),
                    conclusion,
                });
            }
        }
    }
    Ok(found)
}

/// Outcome of an audit run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub corpus_size: usize,
    pub matrix: Vec<PrincipleVerdict>,
}

/// Column order of the rendered table: semantics-major, dv before si.
fn columns(matrix: &[PrincipleVerdict]) -> Vec<(Measure, SemanticsKind)> {
    let order = [SemanticsKind::Hbs, SemanticsKind::Max, SemanticsKind::Car, SemanticsKind::Cs];
    let mut cols = Vec::new();
    for kind in order {
        for m in [Measure::Dv, Measure::DvOriginal, Measure::Si] {
            if matrix.iter().any(|v| v.measure == m && v.semantics == kind) {
                cols.push((m, kind));
            }
        }
    }
    cols
}

fn symbol(v: &PrincipleVerdict) -> &'static str {
    if v.holds() {
        "✓"
    } else if v.restricted.as_ref().is_some_and(|c| !c.outcome.is_counterexample()) {
        "✓≥2"
    } else {
        "✗"
    }
}

impl AuditReport {
    pub fn get(&self, p: PrincipleId, measure: Measure, semantics: SemanticsKind) -> Option<&PrincipleVerdict> {
        self.matrix
            .iter()
            .find(|v| v.principle == p && v.measure == measure && v.semantics == semantics)
    }

    /// Cells that disagree with the reference table, as readable lines.
    pub fn reference_mismatches(&self) -> Vec<String> {
        self.matrix
            .iter()
            .filter_map(|v| {
                let e = reference_expectation(v.principle, v.measure, v.semantics)?;
                (!matches(e, v)).then(|| {
                    format!(
                        "{} {}x{}: expected {:?}, found {}",
                        v.principle,
                        v.measure,
                        v.semantics,
                        e,
                        if v.holds() { "no counterexample" } else { "a counterexample" }
                    )
                })
            })
            .collect()
    }

    pub fn matches_reference(&self) -> bool {
        self.reference_mismatches().is_empty()
    }

    pub fn crosscheck(&self) -> Result<Vec<Inconsistency>, PrincipleError> {
        crosscheck_implications(&self.matrix)
    }

    /// `{"corpus_size", "config", "matrix": [...], "inconsistencies": [...]}`
    pub fn to_json(&self) -> serde_json::Value {
        let inconsistencies = match self.crosscheck() {
            Ok(list) => serde_json::to_value(list).expect("plain data"),
            Err(e) => serde_json::Value::String(e.to_string()),
        };
        serde_json::json!({
            "corpus_size": self.corpus_size,
            "config": self.config,
            "matrix": self.matrix,
            "inconsistencies": inconsistencies,
        })
    }

    /// Principles as rows, (measure, semantics) as columns, ✓/✗ cells.
    pub fn render_table(&self) -> String {
        let cols = columns(&self.matrix);
        let labels: Vec<String> = cols.iter().map(|(m, k)| format!("{m}/{k}")).collect();
        let width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0).max(4);
        let mut out = String::new();
        let _ = write!(out, "{:<15}", "principle");
        for l in &labels {
            let _ = write!(out, " {l:>width$}");
        }
        out.push('\n');
        for p in PrincipleId::ALL {
            if !self.matrix.iter().any(|v| v.principle == p) {
                continue;
            }
            let _ = write!(out, "{:<15}", p.as_str());
            for &(m, k) in &cols {
                let cell = self.get(p, m, k).map_or("·", symbol);
                let _ = write!(out, " {cell:>width$}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "corpus instances: {}", self.corpus_size);
        if let Some(v) = self.matrix.iter().find(|v| v.principle == PrincipleId::Symmetry) {
            let _ = writeln!(out, "symmetry automorphism instances: {}", v.instances);
        }
        for v in self.matrix.iter().filter(|v| v.skipped > 0) {
            let _ = writeln!(
                out,
                "{} {}/{}: {} comparisons skipped (impact not evaluable)",
                v.principle, v.measure, v.semantics, v.skipped
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::Verdict;

    fn cell(p: PrincipleId, m: Measure, k: SemanticsKind, holds: bool) -> PrincipleVerdict {
        let outcome = if holds {
            Verdict::NoCounterexample { trials: 1 }
        } else {
            Verdict::Counterexample {
                trials: 1,
                witness: super::super::Witness::new(vec![], vec![], vec![], 1.0, 0.0),
            }
        };
        PrincipleVerdict {
            principle: p,
            measure: m,
            semantics: k,
            tolerance: 1e-7,
            instances: 1,
            skipped: 0,
            outcome,
            restricted: None,
        }
    }

    fn table_shaped() -> Vec<PrincipleVerdict> {
        let mut m = Vec::new();
        for measure in [Measure::Dv, Measure::Si] {
            for k in SemanticsKind::ALL {
                for p in PrincipleId::ALL {
                    let holds = reference_expectation(p, measure, k) != Some(Expectation::Violated);
                    m.push(cell(p, measure, k, holds));
                }
            }
        }
        m
    }

    #[test]
    fn reference_pattern_is_consistent() {
        assert!(crosscheck_implications(&table_shaped()).unwrap().is_empty());
    }

    #[test]
    fn symmetry_failure_under_its_premises_is_flagged() {
        let mut m = table_shaped();
        for v in &mut m {
            if v.principle == PrincipleId::Symmetry && v.measure == Measure::Si && v.semantics == SemanticsKind::Hbs {
                *v = cell(PrincipleId::Symmetry, Measure::Si, SemanticsKind::Hbs, false);
            }
        }
        let found = crosscheck_implications(&m).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].conclusion, PrincipleId::Symmetry);
    }

    #[test]
    fn missing_row_is_incomplete() {
        let m: Vec<_> = table_shaped()
            .into_iter()
            .filter(|v| v.principle != PrincipleId::Symmetry)
            .collect();
        assert!(matches!(
            crosscheck_implications(&m),
            Err(PrincipleError::IncompleteMatrix {
                principle: PrincipleId::Symmetry,
                ..
            })
        ));
    }

    #[test]
    fn expectation_counts() {
        let violated = table_shaped().iter().filter(|v| !v.holds()).count();
        assert_eq!(violated, 4 + 4);
        assert_eq!(
            reference_expectation(PrincipleId::Existence, Measure::Si, SemanticsKind::Cs),
            Some(Expectation::SatisfiedOnClass)
        );
        assert_eq!(reference_expectation(PrincipleId::Void, Measure::DvOriginal, SemanticsKind::Hbs), None);
    }
}
