//! Impact of a set of arguments on a target argument: the degree-difference
//! measure (revised and original deletion variants) and the walk-based
//! measure built on Shapley attack intensities.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::af::{AfError, ArgumentSet, ArgumentationFramework};
use crate::attribution::{self, AttributionError, ShapleyConfig, ShapleyMeasure};
use crate::semantics::{self, SemanticsError, SemanticsKind, SemanticsSpec};

/// Values within this distance of zero are neutral.
pub const POLARITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Dv,
    DvOriginal,
    Si,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Dv => "dv",
            Measure::DvOriginal => "dv_original",
            Measure::Si => "si",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dv" => Ok(Measure::Dv),
            "dv-original" | "dv_original" => Ok(Measure::DvOriginal),
            "si" => Ok(Measure::Si),
            other => Err(format!("unknown measure `{other}` (expected dv, dv-original or si)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Negative,
    Neutral,
    Positive,
}

impl Polarity {
    pub fn of(value: f64) -> Self {
        if value > POLARITY_TOLERANCE {
            Polarity::Positive
        } else if value < -POLARITY_TOLERANCE {
            Polarity::Negative
        } else {
            Polarity::Neutral
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactValue {
    pub value: f64,
    pub converged: bool,
    pub polarity: Polarity,
}

impl ImpactValue {
    fn converged(value: f64) -> Self {
        ImpactValue {
            value,
            converged: true,
            polarity: Polarity::of(value),
        }
    }
}

/// Truncation and safety limits for the walk series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig {
    pub truncation_tolerance: f64,
    pub max_walk_length: usize,
    pub divergence_guard: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        SeriesConfig {
            truncation_tolerance: 1e-12,
            max_walk_length: 100_000,
            divergence_guard: 1e3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImpactError {
    #[error(transparent)]
    Af(#[from] AfError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Attribution(#[from] AttributionError),
    #[error("walk series diverged after {walk_length} steps (partial value {partial})")]
    Divergence { partial: f64, walk_length: usize },
}

/// One impact evaluation request.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpactQuery {
    pub subject: ArgumentSet,
    pub target: String,
    pub measure: Measure,
    pub spec: SemanticsSpec,
    pub shapley: ShapleyConfig,
    pub series: SeriesConfig,
}

impl ImpactQuery {
    pub fn new(measure: Measure, spec: SemanticsSpec, subject: ArgumentSet, target: impl Into<String>) -> Self {
        ImpactQuery {
            subject,
            target: target.into(),
            measure,
            spec,
            shapley: ShapleyConfig::default(),
            series: SeriesConfig::default(),
        }
    }

    pub fn evaluate(&self, af: &ArgumentationFramework) -> Result<ImpactValue, ImpactError> {
        match self.measure {
            Measure::Dv => imp_dv(af, &self.spec, &self.subject, &self.target),
            Measure::DvOriginal => imp_dv_original(af, &self.spec, &self.subject, &self.target),
            Measure::Si => imp_si(af, &self.spec, &self.subject, &self.target, &self.shapley, &self.series),
        }
    }

    /// `{"measure","semantics","subject","target","value","converged","polarity"}`
    pub fn to_json(&self, value: &ImpactValue) -> serde_json::Value {
        json!({
            "measure": self.measure,
            "semantics": self.spec.kind,
            "subject": self.subject,
            "target": self.target,
            "value": value.value,
            "converged": value.converged,
            "polarity": value.polarity,
        })
    }
}

fn check_query(af: &ArgumentationFramework, subject: &ArgumentSet, target: &str) -> Result<(), AfError> {
    for x in subject.iter().map(String::as_str).chain([target]) {
        if !af.contains(x) {
            return Err(AfError::UnknownArgument(x.to_string()));
        }
    }
    Ok(())
}

/// Counting degrees inside the degree-difference measures share the parent
/// framework's normalization.
fn shared_norm_spec(af: &ArgumentationFramework, spec: &SemanticsSpec) -> SemanticsSpec {
    let mut spec = *spec;
    if spec.kind == SemanticsKind::Cs && spec.counting.norm_override.is_none() {
        let max_in = af.max_in_degree();
        if max_in > 0 {
            spec.counting.norm_override = Some(max_in as f64);
        }
    }
    spec
}

fn degree_of(af: &ArgumentationFramework, spec: &SemanticsSpec, y: &str) -> Result<f64, ImpactError> {
    Ok(semantics::degrees(af, spec)?.degree(y)?)
}

/// `σ_{AS ⊖att Att⁻(X)}(y) − σ_{AS ⊖arg_y X}(y)`
pub fn imp_dv(
    af: &ArgumentationFramework,
    spec: &SemanticsSpec,
    subject: &ArgumentSet,
    target: &str,
) -> Result<ImpactValue, ImpactError> {
    check_query(af, subject, target)?;
    let spec = shared_norm_spec(af, spec);
    let strongest = af.delete_attacks(&af.external_attacks(subject)?)?;
    let deleted = af.delete_arguments(subject, target)?;
    Ok(ImpactValue::converged(
        degree_of(&strongest, &spec, target)? - degree_of(&deleted, &spec, target)?,
    ))
}

/// The earlier variant: external attackers are deleted instead of their
/// attacks, and deletion keeps every attack between remaining arguments
/// (so a retained target keeps its self-attack).
pub fn imp_dv_original(
    af: &ArgumentationFramework,
    spec: &SemanticsSpec,
    subject: &ArgumentSet,
    target: &str,
) -> Result<ImpactValue, ImpactError> {
    check_query(af, subject, target)?;
    let spec = shared_norm_spec(af, spec);
    let delete = |set: &ArgumentSet| -> Result<ArgumentationFramework, AfError> {
        let kept: ArgumentSet = af
            .arguments()
            .iter()
            .filter(|a| !set.contains(*a) || a.as_str() == target)
            .cloned()
            .collect();
        af.restrict(&kept)
    };
    let strongest = delete(&af.external_attackers(subject)?)?;
    let deleted = delete(subject)?;
    Ok(ImpactValue::converged(
        degree_of(&strongest, &spec, target)? - degree_of(&deleted, &spec, target)?,
    ))
}

/// Matrix `S` with `S[i][j]` the intensity of the attack from argument j on
/// argument i (positions in lexicographic order).
pub fn intensity_matrix(af: &ArgumentationFramework, shapley: &ShapleyMeasure) -> DMatrix<f64> {
    let index = af.index_map();
    let n = af.len();
    let mut s = DMatrix::zeros(n, n);
    for (attack, v) in shapley.iter() {
        if let (Some(&i), Some(&j)) = (index.get(attack.target.as_str()), index.get(attack.source.as_str())) {
            s[(i, j)] = v;
        }
    }
    s
}

/// Sum over walks from `x` to `y` of the product of traversed intensities,
/// negated for odd-length walks.
pub fn imp_si_single(
    af: &ArgumentationFramework,
    x: &str,
    y: &str,
    shapley: &ShapleyMeasure,
    series: &SeriesConfig,
) -> Result<ImpactValue, ImpactError> {
    let index = af.index_map();
    let (&xi, &yi) = match (index.get(x), index.get(y)) {
        (Some(a), Some(b)) => (a, b),
        (None, _) => return Err(AfError::UnknownArgument(x.to_string()).into()),
        (_, None) => return Err(AfError::UnknownArgument(y.to_string()).into()),
    };
    walk_series(&intensity_matrix(af, shapley), xi, yi, series)
}

fn walk_series(s: &DMatrix<f64>, x: usize, y: usize, series: &SeriesConfig) -> Result<ImpactValue, ImpactError> {
    let n = s.nrows();
    let mut walks = nalgebra::DVector::<f64>::zeros(n);
    walks[x] = 1.0;
    let mut total = 0.0;
    for length in 1..=series.max_walk_length {
        walks = -(s * &walks);
        total += walks[y];
        let size = walks.amax();
        if !total.is_finite() || total.abs() > series.divergence_guard || size > series.divergence_guard {
            return Err(ImpactError::Divergence {
                partial: total,
                walk_length: length,
            });
        }
        if size < series.truncation_tolerance {
            return Ok(ImpactValue::converged(total));
        }
    }
    Ok(ImpactValue {
        value: total,
        converged: false,
        polarity: Polarity::of(total),
    })
}

/// Walk-based impact of a set, reusing one precomputed intensity measure.
pub fn imp_si_with(
    af: &ArgumentationFramework,
    subject: &ArgumentSet,
    target: &str,
    shapley: &ShapleyMeasure,
    series: &SeriesConfig,
) -> Result<ImpactValue, ImpactError> {
    check_query(af, subject, target)?;
    let s = intensity_matrix(af, shapley);
    let index = af.index_map();
    let yi = index[target];
    let mut value = 0.0;
    let mut converged = true;
    for x in subject {
        let single = walk_series(&s, index[x.as_str()], yi, series)?;
        value += single.value;
        converged &= single.converged;
    }
    Ok(ImpactValue {
        value,
        converged,
        polarity: Polarity::of(value),
    })
}

/// Sum of singleton walk impacts; computes the intensity measure once.
pub fn imp_si(
    af: &ArgumentationFramework,
    spec: &SemanticsSpec,
    subject: &ArgumentSet,
    target: &str,
    shapley_cfg: &ShapleyConfig,
    series: &SeriesConfig,
) -> Result<ImpactValue, ImpactError> {
    check_query(af, subject, target)?;
    let shapley = attribution::shapley_all(af, spec, shapley_cfg)?;
    imp_si_with(af, subject, target, &shapley, series)
}
