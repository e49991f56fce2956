//! Gradual semantics: h-categoriser, card-based, max-based (fixed-point
//! iteration) and the counting semantics (damped alternating series).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::af::{AfError, ArgumentationFramework, Attack};
use crate::verdict::Verdict;

/// Absolute tolerance for semantics-level property checks.
pub const PROPERTY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemanticsKind {
    Hbs,
    Car,
    Max,
    Cs,
}

impl SemanticsKind {
    pub const ALL: [SemanticsKind; 4] = [
        SemanticsKind::Hbs,
        SemanticsKind::Car,
        SemanticsKind::Max,
        SemanticsKind::Cs,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SemanticsKind::Hbs => "hbs",
            SemanticsKind::Car => "car",
            SemanticsKind::Max => "max",
            SemanticsKind::Cs => "cs",
        }
    }
}

impl fmt::Display for SemanticsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SemanticsKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hbs" => Ok(SemanticsKind::Hbs),
            "car" => Ok(SemanticsKind::Car),
            "max" => Ok(SemanticsKind::Max),
            "cs" => Ok(SemanticsKind::Cs),
            other => Err(format!("unknown semantics `{other}` (expected hbs, car, max or cs)")),
        }
    }
}

/// Counting-semantics parameters. The adjacency matrix has a 1 at
/// (row i, column j) iff argument j attacks argument i.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingConfig {
    pub damping: f64,
    /// Normalization factor; the framework's maximum in-degree when absent.
    pub norm_override: Option<f64>,
}

impl Default for CountingConfig {
    fn default() -> Self {
        CountingConfig {
            damping: 0.98,
            norm_override: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemanticsSpec {
    pub kind: SemanticsKind,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub counting: CountingConfig,
}

impl SemanticsSpec {
    pub fn new(kind: SemanticsKind) -> Self {
        SemanticsSpec {
            kind,
            tolerance: 1e-12,
            max_iterations: 1_000_000,
            counting: CountingConfig::default(),
        }
    }

    pub fn hbs() -> Self {
        Self::new(SemanticsKind::Hbs)
    }

    pub fn car() -> Self {
        Self::new(SemanticsKind::Car)
    }

    pub fn max() -> Self {
        Self::new(SemanticsKind::Max)
    }

    pub fn cs() -> Self {
        Self::new(SemanticsKind::Cs)
    }

    pub fn with_damping(mut self, damping: f64) -> Self {
        self.counting.damping = damping;
        self
    }

    pub fn with_norm(mut self, norm: Option<f64>) -> Self {
        self.counting.norm_override = norm;
        self
    }

    pub fn validate(&self) -> Result<(), SemanticsError> {
        let bad = |m: String| Err(SemanticsError::InvalidSpec(m));
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return bad(format!("tolerance {} must lie in (0, 1)", self.tolerance));
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive".into());
        }
        if self.kind == SemanticsKind::Cs {
            let d = self.counting.damping;
            if !(d > 0.0 && d < 1.0) {
                return bad(format!("damping {d} must lie in (0, 1)"));
            }
            if let Some(n) = self.counting.norm_override {
                if !(n > 0.0 && n.is_finite()) {
                    return bad(format!("normalization {n} must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Parameter block of the weighting JSON document.
    pub fn params_json(&self) -> serde_json::Value {
        match self.kind {
            SemanticsKind::Cs => json!({
                "alpha": self.counting.damping,
                "norm": self.counting.norm_override,
                "tolerance": self.tolerance,
                "max_iterations": self.max_iterations,
            }),
            _ => json!({
                "tolerance": self.tolerance,
                "max_iterations": self.max_iterations,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error("no convergence within {max_iterations} iterations")]
    NonConvergence { max_iterations: usize },
    #[error("normalization {norm} is below the maximum in-degree {required}; the counting series may diverge")]
    DivergentSeries { norm: f64, required: usize },
    #[error("invalid semantics configuration: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Af(#[from] AfError),
}

/// Degree of every argument of a framework.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Weighting {
    degrees: BTreeMap<String, f64>,
}

impl Weighting {
    pub fn get(&self, x: &str) -> Option<f64> {
        self.degrees.get(x).copied()
    }

    /// Degree of `x`, or `UnknownArgument`.
    pub fn degree(&self, x: &str) -> Result<f64, AfError> {
        self.get(x).ok_or_else(|| AfError::UnknownArgument(x.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, f64)> {
        self.degrees.iter().map(|(k, v)| (k, *v))
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `{"semantics":..,"params":{..},"degrees":{..}}`
    pub fn to_json(&self, spec: &SemanticsSpec) -> serde_json::Value {
        json!({
            "semantics": spec.kind.as_str(),
            "params": spec.params_json(),
            "degrees": self.degrees,
        })
    }

    fn from_vec(af: &ArgumentationFramework, values: Vec<f64>) -> Self {
        Weighting {
            degrees: af.arguments().iter().cloned().zip(values).collect(),
        }
    }
}

/// Acceptability degrees of every argument under `spec`.
pub fn degrees(af: &ArgumentationFramework, spec: &SemanticsSpec) -> Result<Weighting, SemanticsError> {
    let values = solve(&af.attacker_lists(), spec)?;
    Ok(Weighting::from_vec(af, values))
}

/// Fixed-point iteration started from a constant vector. Only meaningful
/// for hbs, car and max; used to probe uniqueness of the fixed point.
pub fn iterate_from(
    af: &ArgumentationFramework,
    spec: &SemanticsSpec,
    start: f64,
) -> Result<Weighting, SemanticsError> {
    spec.validate()?;
    if spec.kind == SemanticsKind::Cs {
        return Err(SemanticsError::InvalidSpec(
            "the counting semantics is not a fixed-point iteration".into(),
        ));
    }
    let values = picard(&af.attacker_lists(), spec, start)?;
    Ok(Weighting::from_vec(af, values))
}

/// Counting degrees by summing the damped alternating series term by term,
/// independently of the linear solve used by [`degrees`].
pub fn counting_series(
    af: &ArgumentationFramework,
    spec: &SemanticsSpec,
) -> Result<Weighting, SemanticsError> {
    spec.validate()?;
    let attackers = af.attacker_lists();
    let n = attackers.len();
    let Some(norm) = normalization(&attackers, spec)? else {
        return Ok(Weighting::from_vec(af, vec![1.0; n]));
    };
    let factor = spec.counting.damping / norm;
    let mut term = vec![1.0; n];
    let mut total = vec![1.0; n];
    for _ in 0..spec.max_iterations {
        term = attackers
            .iter()
            .map(|atts| -factor * atts.iter().map(|&j| term[j]).sum::<f64>())
            .collect();
        let mut size: f64 = 0.0;
        for (t, s) in term.iter().zip(total.iter_mut()) {
            *s += t;
            size = size.max(t.abs());
        }
        if size < spec.tolerance {
            return Ok(Weighting::from_vec(af, total));
        }
    }
    Err(SemanticsError::NonConvergence {
        max_iterations: spec.max_iterations,
    })
}

/// Degrees over attacker lists indexed by argument position.
pub(crate) fn solve(attackers: &[Vec<usize>], spec: &SemanticsSpec) -> Result<Vec<f64>, SemanticsError> {
    spec.validate()?;
    match spec.kind {
        SemanticsKind::Cs => counting_solve(attackers, spec),
        _ => picard(attackers, spec, 1.0),
    }
}

fn picard(attackers: &[Vec<usize>], spec: &SemanticsSpec, start: f64) -> Result<Vec<f64>, SemanticsError> {
    let n = attackers.len();
    let mut cur = vec![start; n];
    let mut next = vec![0.0; n];
    for _ in 0..spec.max_iterations {
        let mut delta: f64 = 0.0;
        for (i, atts) in attackers.iter().enumerate() {
            let v = if atts.is_empty() {
                1.0
            } else {
                match spec.kind {
                    SemanticsKind::Hbs => 1.0 / (1.0 + atts.iter().map(|&j| cur[j]).sum::<f64>()),
                    SemanticsKind::Car => {
                        let k = atts.len() as f64;
                        let sum: f64 = atts.iter().map(|&j| cur[j]).sum();
                        1.0 / (1.0 + k + sum / k)
                    }
                    SemanticsKind::Max => {
                        1.0 / (1.0 + atts.iter().map(|&j| cur[j]).fold(0.0, f64::max))
                    }
                    SemanticsKind::Cs => unreachable!("counting semantics is solved linearly"),
                }
            };
            delta = delta.max((v - cur[i]).abs());
            next[i] = v;
        }
        std::mem::swap(&mut cur, &mut next);
        if delta < spec.tolerance {
            return Ok(cur);
        }
    }
    Err(SemanticsError::NonConvergence {
        max_iterations: spec.max_iterations,
    })
}

/// `None` for attack-free frameworks, whose counting degrees are all 1.
fn normalization(attackers: &[Vec<usize>], spec: &SemanticsSpec) -> Result<Option<f64>, SemanticsError> {
    let max_in = attackers.iter().map(Vec::len).max().unwrap_or(0);
    if max_in == 0 {
        return Ok(None);
    }
    match spec.counting.norm_override {
        Some(norm) if norm < max_in as f64 => Err(SemanticsError::DivergentSeries {
            norm,
            required: max_in,
        }),
        Some(norm) => Ok(Some(norm)),
        None => Ok(Some(max_in as f64)),
    }
}

/// Solves `(I + αM/N) v = 1`. Unattacked arguments are pinned to 1 and
/// eliminated, so they come out exact.
fn counting_solve(attackers: &[Vec<usize>], spec: &SemanticsSpec) -> Result<Vec<f64>, SemanticsError> {
    let n = attackers.len();
    let mut v = vec![1.0; n];
    let Some(norm) = normalization(attackers, spec)? else {
        return Ok(v);
    };
    let factor = spec.counting.damping / norm;
    let attacked: Vec<usize> = (0..n).filter(|&i| !attackers[i].is_empty()).collect();
    let mut slot = vec![usize::MAX; n];
    for (k, &i) in attacked.iter().enumerate() {
        slot[i] = k;
    }
    let m = attacked.len();
    let mut lhs = DMatrix::<f64>::identity(m, m);
    let mut rhs = DVector::<f64>::from_element(m, 1.0);
    for (row, &i) in attacked.iter().enumerate() {
        for &j in &attackers[i] {
            if slot[j] == usize::MAX {
                rhs[row] -= factor;
            } else {
                lhs[(row, slot[j])] += factor;
            }
        }
    }
    let solution = lhs.lu().solve(&rhs).ok_or(SemanticsError::DivergentSeries {
        norm,
        required: attackers.iter().map(Vec::len).max().unwrap_or(0),
    })?;
    for (row, &i) in attacked.iter().enumerate() {
        v[i] = solution[row];
    }
    Ok(v)
}

/// Witnesses for semantics-level property checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "property", rename_all = "kebab-case")]
pub enum PropertyWitness {
    Independence {
        framework: ArgumentationFramework,
        other: ArgumentationFramework,
        argument: String,
        alone: f64,
        combined: f64,
    },
    Directionality {
        framework: ArgumentationFramework,
        added: Attack,
        argument: String,
        before: f64,
        after: f64,
    },
    AttackRemovalMonotonicity {
        framework: ArgumentationFramework,
        argument: String,
        removed: Vec<Attack>,
        with_attacks: f64,
        without_attacks: f64,
    },
}

pub type PropertyVerdict = Verdict<PropertyWitness>;

/// Searches disjoint pairs for an argument whose degree changes when the
/// second framework is added alongside the first.
pub fn check_independence(
    spec: &SemanticsSpec,
    corpus: &[(ArgumentationFramework, ArgumentationFramework)],
) -> Result<PropertyVerdict, SemanticsError> {
    let mut trials = 0;
    for (first, second) in corpus {
        if first.arguments().intersection(second.arguments()).next().is_some() {
            return Err(SemanticsError::InvalidSpec(
                "independence pairs must have disjoint arguments".into(),
            ));
        }
        let alone = degrees(first, spec)?;
        let combined = degrees(&first.union(second), spec)?;
        for (y, d) in alone.iter() {
            trials += 1;
            let c = combined.degree(y)?;
            if (d - c).abs() > PROPERTY_TOLERANCE {
                return Ok(Verdict::Counterexample {
                    trials,
                    witness: PropertyWitness::Independence {
                        framework: first.clone(),
                        other: second.clone(),
                        argument: y.clone(),
                        alone: d,
                        combined: c,
                    },
                });
            }
        }
    }
    Ok(Verdict::NoCounterexample { trials })
}

/// Searches attack additions `(b, x)` for an argument unreachable from `x`
/// whose degree changes.
pub fn check_directionality(
    spec: &SemanticsSpec,
    corpus: &[(ArgumentationFramework, Attack)],
) -> Result<PropertyVerdict, SemanticsError> {
    let mut trials = 0;
    for (af, added) in corpus {
        let extended = af.with_attack(added.clone())?;
        let before = degrees(af, spec)?;
        let after = degrees(&extended, spec)?;
        for y in af.arguments() {
            if y == &added.target || extended.has_path(&added.target, y)? {
                continue;
            }
            trials += 1;
            let (b, a) = (before.degree(y)?, after.degree(y)?);
            if (b - a).abs() > PROPERTY_TOLERANCE {
                return Ok(Verdict::Counterexample {
                    trials,
                    witness: PropertyWitness::Directionality {
                        framework: af.clone(),
                        added: added.clone(),
                        argument: y.clone(),
                        before: b,
                        after: a,
                    },
                });
            }
        }
    }
    Ok(Verdict::NoCounterexample { trials })
}

/// Searches every non-empty set of at most `max_removed` attacks on each
/// argument for a removal that lowers the argument's degree.
pub fn check_attack_removal_monotonicity(
    spec: &SemanticsSpec,
    corpus: &[ArgumentationFramework],
    max_removed: usize,
) -> Result<PropertyVerdict, SemanticsError> {
    let mut trials = 0;
    for af in corpus {
        let base = degrees(af, spec)?;
        for a in af.arguments() {
            let incoming: Vec<Attack> = af.attacks().iter().filter(|t| &t.target == a).cloned().collect();
            for removed in subsets_up_to(&incoming, max_removed) {
                trials += 1;
                let set: BTreeSet<Attack> = removed.iter().cloned().collect();
                let reduced = degrees(&af.delete_attacks(&set)?, spec)?.degree(a)?;
                let with = base.degree(a)?;
                if with > reduced + PROPERTY_TOLERANCE {
                    return Ok(Verdict::Counterexample {
                        trials,
                        witness: PropertyWitness::AttackRemovalMonotonicity {
                            framework: af.clone(),
                            argument: a.clone(),
                            removed,
                            with_attacks: with,
                            without_attacks: reduced,
                        },
                    });
                }
            }
        }
    }
    Ok(Verdict::NoCounterexample { trials })
}

/// Non-empty subsets of size at most `k`, in increasing size then
/// lexicographic position order.
fn subsets_up_to<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    let n = items.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n.min(63)) {
        if (mask.count_ones() as usize) <= k {
            out.push((0..n).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()).collect());
        }
    }
    out.sort_by_key(|s: &Vec<T>| s.len());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use approx::assert_abs_diff_eq;

    #[test]
    fn h_categoriser_on_running_example() {
        let w = degrees(&fixtures::running_example(), &SemanticsSpec::hbs()).unwrap();
        for (arg, expected) in [("a4", 0.390), ("a3", 0.447), ("a5", 0.5), ("a8", 0.618), ("a6", 1.0)] {
            assert_abs_diff_eq!(w.degree(arg).unwrap(), expected, epsilon = 5e-4);
        }
    }

    #[test]
    fn self_attack_is_golden_ratio_conjugate() {
        let w = degrees(&fixtures::self_attack(), &SemanticsSpec::hbs()).unwrap();
        assert_abs_diff_eq!(w.degree("a").unwrap(), (5f64.sqrt() - 1.0) / 2.0, epsilon = 1e-11);
    }

    #[test]
    fn counting_pair_degrees() {
        let (without, with) = fixtures::counting_pair();
        let spec = SemanticsSpec::cs();
        let w1 = degrees(&without, &spec).unwrap();
        let w2 = degrees(&with, &spec).unwrap();
        for (arg, e1, e2) in [("a1", 1.0, 1.0), ("a2", 0.02, 0.51), ("a3", 0.02, 0.2601)] {
            assert_abs_diff_eq!(w1.degree(arg).unwrap(), e1, epsilon = 1e-12);
            assert_abs_diff_eq!(w2.degree(arg).unwrap(), e2, epsilon = 1e-12);
        }
    }

    #[test]
    fn card_and_max_closed_forms() {
        let af = ArgumentationFramework::new(["a", "b"], [("b", "a")]).unwrap();
        let w = degrees(&af, &SemanticsSpec::car()).unwrap();
        assert_abs_diff_eq!(w.degree("a").unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        assert_eq!(w.degree("b").unwrap(), 1.0);

        let af = ArgumentationFramework::new(["a", "b", "c"], [("b", "a"), ("c", "a")]).unwrap();
        let w = degrees(&af, &SemanticsSpec::max()).unwrap();
        assert_abs_diff_eq!(w.degree("a").unwrap(), 0.5, epsilon = 1e-12);
        assert_eq!(w.degree("b").unwrap(), 1.0);
    }

    #[test]
    fn unattacked_arguments_are_exactly_one() {
        let af = fixtures::running_example();
        for spec in SemanticsKind::ALL.map(SemanticsSpec::new) {
            let w = degrees(&af, &spec).unwrap();
            assert_eq!(w.degree("a6").unwrap(), 1.0, "{}", spec.kind);
            assert_eq!(w.degree("a11").unwrap(), 1.0, "{}", spec.kind);
        }
    }

    #[test]
    fn invalid_override_is_divergent() {
        let af = fixtures::running_example();
        let spec = SemanticsSpec::cs().with_norm(Some(2.0));
        assert!(matches!(
            degrees(&af, &spec),
            Err(SemanticsError::DivergentSeries { required: 3, .. })
        ));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let mut spec = SemanticsSpec::hbs();
        spec.max_iterations = 3;
        assert_eq!(
            degrees(&fixtures::self_attack(), &spec),
            Err(SemanticsError::NonConvergence { max_iterations: 3 })
        );
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let af = fixtures::self_attack();
        assert!(degrees(&af, &SemanticsSpec::cs().with_damping(1.0)).is_err());
        let mut spec = SemanticsSpec::hbs();
        spec.tolerance = 0.0;
        assert!(matches!(degrees(&af, &spec), Err(SemanticsError::InvalidSpec(_))));
    }

    #[test]
    fn counting_violates_independence_on_disjoint_pair() {
        let spec = SemanticsSpec::cs();
        let pair = fixtures::disjoint_counting_pair();
        let verdict = check_independence(&spec, &[pair]).unwrap();
        match verdict.witness() {
            Some(PropertyWitness::Independence { argument, alone, combined, .. }) => {
                assert_eq!(argument, "a");
                assert_abs_diff_eq!(*alone, 0.02, epsilon = 1e-12);
                assert_abs_diff_eq!(*combined, 0.51, epsilon = 1e-12);
            }
            other => panic!("expected independence witness, got {other:?}"),
        }
        assert!(!check_independence(&spec, &[]).unwrap().is_counterexample());
    }

    #[test]
    fn counting_violates_directionality() {
        let spec = SemanticsSpec::cs();
        let entry = fixtures::counting_direction_addition();
        assert!(check_directionality(&spec, std::slice::from_ref(&entry)).unwrap().is_counterexample());
        assert!(!check_directionality(&SemanticsSpec::hbs(), &[entry]).unwrap().is_counterexample());
    }

    #[test]
    fn counting_violates_attack_removal_monotonicity() {
        let (_, with) = fixtures::counting_pair();
        let verdict = check_attack_removal_monotonicity(&SemanticsSpec::cs(), std::slice::from_ref(&with), 3).unwrap();
        match verdict.witness() {
            Some(PropertyWitness::AttackRemovalMonotonicity { argument, removed, .. }) => {
                assert_eq!(argument, "a3");
                assert_eq!(removed, &vec![Attack::new("a2", "a3")]);
            }
            other => panic!("expected monotonicity witness, got {other:?}"),
        }
        let hbs = check_attack_removal_monotonicity(&SemanticsSpec::hbs(), &[with], 3).unwrap();
        assert!(!hbs.is_counterexample());
    }

    #[test]
    fn subsets_are_ordered_by_size() {
        let s = subsets_up_to(&[1, 2, 3], 2);
        assert_eq!(s.len(), 6);
        assert!(s[..3].iter().all(|x| x.len() == 1));
    }
}
