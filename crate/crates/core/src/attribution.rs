//! Per-attack intensities: the Shapley value of each attack in the game
//! whose players are the attacks on its target and whose payoff is the
//! target's degree gain when a coalition of them is removed.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::af::{AfError, ArgumentationFramework, Attack};
use crate::semantics::{self, SemanticsError, SemanticsSpec};
use crate::verdict::Verdict;

/// Absolute tolerance for the bounded-loss comparison.
pub const BOUNDED_LOSS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapleyConfig {
    /// Targets with more incoming attacks than this are sampled.
    pub exact_indegree_cap: usize,
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for ShapleyConfig {
    fn default() -> Self {
        ShapleyConfig {
            exact_indegree_cap: 12,
            sample_count: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapleyMode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttributionError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Af(#[from] AfError),
    #[error("argument `{target}` has {in_degree} attackers, above the exact enumeration cap {cap}")]
    ExactModeRequired {
        target: String,
        in_degree: usize,
        cap: usize,
    },
}

/// Intensity of every attack of a framework.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapleyMeasure {
    values: BTreeMap<Attack, f64>,
    mode: ShapleyMode,
}

impl ShapleyMeasure {
    /// Wraps externally supplied intensities; every key must be an attack of `af`.
    pub fn from_values(af: &ArgumentationFramework, values: BTreeMap<Attack, f64>) -> Result<Self, AfError> {
        if let Some(a) = values.keys().find(|a| !af.has_attack(&a.source, &a.target)) {
            return Err(AfError::UnknownAttack(a.clone()));
        }
        Ok(ShapleyMeasure {
            values,
            mode: ShapleyMode::Exact,
        })
    }

    pub fn get(&self, attack: &Attack) -> Option<f64> {
        self.values.get(attack).copied()
    }

    pub fn value(&self, source: &str, target: &str) -> Option<f64> {
        self.get(&Attack::new(source, target))
    }

    pub fn mode(&self) -> ShapleyMode {
        self.mode
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Attack, f64)> {
        self.values.iter().map(|(a, v)| (a, *v))
    }

    pub fn as_map(&self) -> &BTreeMap<Attack, f64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `{"semantics":..,"mode":..,"values":[{"source","target","s"}..]}`
    /// with values sorted by (target, source).
    pub fn to_json(&self, spec: &SemanticsSpec) -> serde_json::Value {
        let mut rows: Vec<(&Attack, f64)> = self.iter().collect();
        rows.sort_by(|(a, _), (b, _)| (&a.target, &a.source).cmp(&(&b.target, &b.source)));
        json!({
            "semantics": spec.kind.as_str(),
            "mode": self.mode,
            "values": rows
                .into_iter()
                .map(|(a, s)| json!({"source": a.source, "target": a.target, "s": s}))
                .collect::<Vec<_>>(),
        })
    }
}

/// A single attack's intensity and how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapleyEstimate {
    pub value: f64,
    pub mode: ShapleyMode,
}

/// Coalition payoff: target degree with a subset of its incoming attacks
/// removed, memoized by the subset.
struct TargetGame<'a> {
    attackers: &'a [Vec<usize>],
    target: usize,
    spec: &'a SemanticsSpec,
    memo: HashMap<Vec<bool>, f64>,
}

impl<'a> TargetGame<'a> {
    fn new(attackers: &'a [Vec<usize>], target: usize, spec: &'a SemanticsSpec) -> Self {
        TargetGame {
            attackers,
            target,
            spec,
            memo: HashMap::new(),
        }
    }

    fn players(&self) -> usize {
        self.attackers[self.target].len()
    }

    fn payoff(&mut self, removed: &[bool]) -> Result<f64, SemanticsError> {
        if let Some(v) = self.memo.get(removed) {
            return Ok(*v);
        }
        let mut reduced = self.attackers.to_vec();
        reduced[self.target] = self.attackers[self.target]
            .iter()
            .zip(removed)
            .filter(|(_, &gone)| !gone)
            .map(|(&j, _)| j)
            .collect();
        let v = semantics::solve(&reduced, self.spec)?[self.target];
        self.memo.insert(removed.to_vec(), v);
        Ok(v)
    }

    fn exact(&mut self) -> Result<Vec<f64>, SemanticsError> {
        let n = self.players();
        // weight[k] = k! (n-k-1)! / n!
        let weight: Vec<f64> = (0..n)
            .map(|k| {
                let mut w = 1.0 / n as f64;
                for i in 0..k {
                    w *= (k - i) as f64 / (n - 1 - i) as f64;
                }
                w
            })
            .collect();
        let mut values = vec![0.0; n];
        let mut mask = vec![false; n];
        for bits in 0u64..(1u64 << n) {
            for (i, m) in mask.iter_mut().enumerate() {
                *m = bits >> i & 1 == 1;
            }
            let size = bits.count_ones() as usize;
            let base = self.payoff(&mask)?;
            for i in 0..n {
                if mask[i] {
                    continue;
                }
                mask[i] = true;
                let gained = self.payoff(&mask)?;
                mask[i] = false;
                values[i] += weight[size] * (gained - base);
            }
        }
        Ok(values)
    }

    fn sampled(&mut self, samples: usize, seed: u64) -> Result<Vec<f64>, SemanticsError> {
        let n = self.players();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        let mut totals = vec![0.0; n];
        for _ in 0..samples {
            order.shuffle(&mut rng);
            let mut mask = vec![false; n];
            let mut prev = self.payoff(&mask)?;
            for &i in &order {
                mask[i] = true;
                let next = self.payoff(&mask)?;
                totals[i] += next - prev;
                prev = next;
            }
        }
        Ok(totals.into_iter().map(|t| t / samples as f64).collect())
    }
}

/// Intensities of every attack on the argument at position `target`.
fn target_values(
    attackers: &[Vec<usize>],
    target: usize,
    spec: &SemanticsSpec,
    cfg: &ShapleyConfig,
) -> Result<(Vec<f64>, ShapleyMode), SemanticsError> {
    let mut game = TargetGame::new(attackers, target, spec);
    if game.players() <= cfg.exact_indegree_cap {
        Ok((game.exact()?, ShapleyMode::Exact))
    } else {
        let seed = cfg.seed ^ (target as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        Ok((game.sampled(cfg.sample_count.max(1), seed)?, ShapleyMode::Sampled))
    }
}

/// Intensity of one attack.
pub fn shapley_attack(
    af: &ArgumentationFramework,
    spec: &SemanticsSpec,
    attack: &Attack,
    cfg: &ShapleyConfig,
) -> Result<ShapleyEstimate, AttributionError> {
    if !af.attacks().contains(attack) {
        return Err(AfError::UnknownAttack(attack.clone()).into());
    }
    let index = af.index_map();
    let attackers = af.attacker_lists();
    let target = index[attack.target.as_str()];
    let source = index[attack.source.as_str()];
    let (values, mode) = target_values(&attackers, target, spec, cfg)?;
    let slot = attackers[target]
        .iter()
        .position(|&j| j == source)
        .expect("attack is present");
    Ok(ShapleyEstimate {
        value: values[slot],
        mode,
    })
}

/// Intensity of every attack; `Sampled` if any target needed sampling.
pub fn shapley_all(
    af: &ArgumentationFramework,
    spec: &SemanticsSpec,
    cfg: &ShapleyConfig,
) -> Result<ShapleyMeasure, AttributionError> {
    let names: Vec<&String> = af.arguments().iter().collect();
    let attackers = af.attacker_lists();
    let mut values = BTreeMap::new();
    let mut mode = ShapleyMode::Exact;
    for (target, atts) in attackers.iter().enumerate() {
        if atts.is_empty() {
            continue;
        }
        let (vals, m) = target_values(&attackers, target, spec, cfg)?;
        if m == ShapleyMode::Sampled {
            mode = ShapleyMode::Sampled;
        }
        for (&source, v) in atts.iter().zip(vals) {
            values.insert(Attack::new(names[source].clone(), names[target].clone()), v);
        }
    }
    Ok(ShapleyMeasure { values, mode })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedLossWitness {
    pub framework: ArgumentationFramework,
    pub attack: Attack,
    pub intensity: f64,
    pub source_degree: f64,
}

/// Looks for an attack whose intensity magnitude exceeds its source's degree.
pub fn check_bounded_loss(
    af: &ArgumentationFramework,
    spec: &SemanticsSpec,
    cfg: &ShapleyConfig,
) -> Result<Verdict<BoundedLossWitness>, AttributionError> {
    for x in af.arguments() {
        let d = af.in_degree(x)?;
        if d > cfg.exact_indegree_cap {
            return Err(AttributionError::ExactModeRequired {
                target: x.clone(),
                in_degree: d,
                cap: cfg.exact_indegree_cap,
            });
        }
    }
    let measure = shapley_all(af, spec, cfg)?;
    let degrees = semantics::degrees(af, spec)?;
    let mut trials = 0;
    for (attack, s) in measure.iter() {
        trials += 1;
        let source_degree = degrees.degree(&attack.source)?;
        if s.abs() > source_degree + BOUNDED_LOSS_TOLERANCE {
            return Ok(Verdict::Counterexample {
                trials,
                witness: BoundedLossWitness {
                    framework: af.clone(),
                    attack: attack.clone(),
                    intensity: s,
                    source_degree,
                },
            });
        }
    }
    Ok(Verdict::NoCounterexample { trials })
}
