//! The nine impact principles, checked by bounded falsification search over
//! a corpus of frameworks, and an audit producing the satisfaction matrix
//! over (measure × semantics).
//!
//! A principle is "satisfied" here only in the sense that no counterexample
//! was found. Every reported witness can be replayed from its serialized
//! form with [`replay`].
//!
//! Connectivity follows attack structures: an argument is always connected
//! to itself, so `x` has "no path" to `a` only when `x ≠ a` and no directed
//! path leads from `x` to `a`.

mod corpus;
mod report;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::af::{find_automorphisms_limited, ArgumentSet, ArgumentationFramework, Attack, Mapping, AUTOMORPHISM_CAP};
use crate::attribution::{self, ShapleyConfig, ShapleyMeasure};
use crate::impact::{self, Measure, SeriesConfig};
use crate::semantics::{self, SemanticsKind, SemanticsSpec, Weighting};
use crate::verdict::Verdict;

pub use corpus::{Corpus, CorpusConfig, Instance};
pub use report::{crosscheck_implications, reference_expectation, AuditReport, Expectation, Inconsistency};

/// Equality tolerance for impact comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-7;

/// Frameworks up to this size are checked against every subject set.
const EXHAUSTIVE_LIMIT: usize = 5;
const RANDOM_SUBSETS: usize = 8;
const AUTOMORPHISMS_PER_PAIR: usize = 2;

/// Name of the graph class on which existence is checked separately.
pub const MULTI_MAX_INDEGREE_CLASS: &str = "at-least-two-max-in-degree";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PrincipleId {
    Anonymity,
    Independence,
    Balanced,
    Void,
    Directionality,
    Minimisation,
    Zero,
    Symmetry,
    Existence,
}

impl PrincipleId {
    pub const ALL: [PrincipleId; 9] = [
        PrincipleId::Anonymity,
        PrincipleId::Independence,
        PrincipleId::Balanced,
        PrincipleId::Void,
        PrincipleId::Directionality,
        PrincipleId::Minimisation,
        PrincipleId::Zero,
        PrincipleId::Symmetry,
        PrincipleId::Existence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PrincipleId::Anonymity => "anonymity",
            PrincipleId::Independence => "independence",
            PrincipleId::Balanced => "balanced",
            PrincipleId::Void => "void",
            PrincipleId::Directionality => "directionality",
            PrincipleId::Minimisation => "minimisation",
            PrincipleId::Zero => "zero",
            PrincipleId::Symmetry => "symmetry",
            PrincipleId::Existence => "existence",
        }
    }
}

impl fmt::Display for PrincipleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PrincipleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PrincipleId::ALL
            .into_iter()
            .find(|p| p.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown principle `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrincipleError {
    #[error("{principle} cannot be checked on a `{shape}` instance")]
    UnsupportedInstance { principle: PrincipleId, shape: String },
    #[error("invalid audit configuration: {0}")]
    InvalidConfig(String),
    #[error("matrix has no {principle} cell for {measure} x {semantics}")]
    IncompleteMatrix {
        principle: PrincipleId,
        measure: Measure,
        semantics: SemanticsKind,
    },
    #[error("witness cannot be replayed: {0}")]
    Replay(String),
}

/// Numerical settings shared by every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    pub tolerance: f64,
    pub shapley: ShapleyConfig,
    pub series: SeriesConfig,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tolerance: DEFAULT_TOLERANCE,
            shapley: ShapleyConfig::default(),
            series: SeriesConfig::default(),
        }
    }
}

/// A concrete violation. Which fields are used depends on the principle;
/// see [`replay`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub frameworks: Vec<ArgumentationFramework>,
    #[serde(default)]
    pub subject_sets: Vec<ArgumentSet>,
    pub arguments: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping: Option<Mapping>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<Attack>,
    pub lhs: f64,
    pub rhs: f64,
}

impl Witness {
    fn new(frameworks: Vec<ArgumentationFramework>, sets: Vec<ArgumentSet>, arguments: Vec<&str>, lhs: f64, rhs: f64) -> Self {
        Witness {
            frameworks,
            subject_sets: sets,
            arguments: arguments.into_iter().map(str::to_string).collect(),
            mapping: None,
            attack: None,
            lhs,
            rhs,
        }
    }
}

/// Verdict restricted to a graph class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassVerdict {
    pub class: String,
    pub instances: usize,
    #[serde(flatten)]
    pub outcome: Verdict<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipleVerdict {
    pub principle: PrincipleId,
    pub measure: Measure,
    pub semantics: SemanticsKind,
    pub tolerance: f64,
    /// Corpus entries used; for symmetry, automorphism instances found.
    pub instances: usize,
    /// Comparisons abandoned because an impact could not be evaluated.
    pub skipped: usize,
    #[serde(flatten)]
    pub outcome: Verdict<Witness>,
    /// Existence only: the same search restricted to graphs with at least
    /// two arguments of maximum in-degree.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restricted: Option<ClassVerdict>,
}

impl PrincipleVerdict {
    pub fn witness(&self) -> Option<&Witness> {
        self.outcome.witness()
    }

    pub fn holds(&self) -> bool {
        !self.outcome.is_counterexample()
    }
}

/// Memoized impacts and degrees of one framework.
struct Evaluator {
    shapley: Option<Option<ShapleyMeasure>>,
    degrees: Option<Option<Weighting>>,
    singles: HashMap<(String, String), Option<f64>>,
    sets: HashMap<(ArgumentSet, String), Option<f64>>,
}

/// Evaluators for one (measure, semantics) cell, keyed by framework.
struct Session<'c> {
    measure: Measure,
    spec: SemanticsSpec,
    cfg: &'c CheckConfig,
    evaluators: HashMap<ArgumentationFramework, Evaluator>,
}

impl<'c> Session<'c> {
    fn new(measure: Measure, spec: SemanticsSpec, cfg: &'c CheckConfig) -> Self {
        Session {
            measure,
            spec,
            cfg,
            evaluators: HashMap::new(),
        }
    }

    fn evaluator(&mut self, af: &ArgumentationFramework) -> &mut Evaluator {
        if !self.evaluators.contains_key(af) {
            self.evaluators.insert(
                af.clone(),
                Evaluator {
                    shapley: None,
                    degrees: None,
                    singles: HashMap::new(),
                    sets: HashMap::new(),
                },
            );
        }
        self.evaluators.get_mut(af).expect("just inserted")
    }

    fn degree(&mut self, af: &ArgumentationFramework, a: &str) -> Option<f64> {
        let spec = self.spec;
        let ev = self.evaluator(af);
        ev.degrees
            .get_or_insert_with(|| semantics::degrees(af, &spec).ok())
            .as_ref()
            .and_then(|w| w.get(a))
    }

    /// `None` when the impact cannot be evaluated (solver failure, series
    /// divergence or truncation).
    fn imp(&mut self, af: &ArgumentationFramework, x: &ArgumentSet, a: &str) -> Option<f64> {
        let (measure, spec, cfg) = (self.measure, self.spec, *self.cfg);
        let key = (x.clone(), a.to_string());
        if let Some(v) = self.evaluator(af).sets.get(&key) {
            return *v;
        }
        let value = match measure {
            Measure::Dv => impact::imp_dv(af, &spec, x, a).ok().map(|v| v.value),
            Measure::DvOriginal => impact::imp_dv_original(af, &spec, x, a).ok().map(|v| v.value),
            Measure::Si => {
                let Evaluator { shapley, singles, .. } = self.evaluator(af);
                let shapley = shapley.get_or_insert_with(|| attribution::shapley_all(af, &spec, &cfg.shapley).ok());
                match shapley {
                    None => None,
                    Some(s) => {
                        let mut total = Some(0.0);
                        for xi in x {
                            let single = *singles.entry((xi.clone(), a.to_string())).or_insert_with(|| {
                                impact::imp_si_single(af, xi, a, s, &cfg.series)
                                    .ok()
                                    .filter(|v| v.converged)
                                    .map(|v| v.value)
                            });
                            total = total.zip(single).map(|(t, v)| t + v);
                        }
                        total
                    }
                }
            }
        };
        self.evaluator(af).sets.insert(key, value);
        value
    }
}

/// First-witness search state.
struct Search {
    tolerance: f64,
    trials: usize,
    skipped: usize,
    witness: Option<Witness>,
}

impl Search {
    fn new(tolerance: f64) -> Self {
        Search {
            tolerance,
            trials: 0,
            skipped: 0,
            witness: None,
        }
    }

    fn done(&self) -> bool {
        self.witness.is_some()
    }

    fn compare(&mut self, lhs: Option<f64>, rhs: Option<f64>, make: impl FnOnce(f64, f64) -> Witness) {
        match (lhs, rhs) {
            (Some(l), Some(r)) => {
                self.trials += 1;
                if (l - r).abs() > self.tolerance {
                    self.witness = Some(make(l, r));
                }
            }
            _ => self.skipped += 1,
        }
    }

    fn outcome(self) -> Verdict<Witness> {
        match self.witness {
            Some(witness) => Verdict::Counterexample {
                trials: self.trials,
                witness,
            },
            None => Verdict::NoCounterexample { trials: self.trials },
        }
    }
}

fn connected(af: &ArgumentationFramework, x: &str, a: &str) -> bool {
    x == a || af.has_path(x, a).unwrap_or(false)
}

fn map_set(mapping: &Mapping, set: &ArgumentSet) -> ArgumentSet {
    set.iter().filter_map(|x| mapping.get(x).cloned()).collect()
}

fn with(set: &ArgumentSet, x: &str) -> ArgumentSet {
    let mut s = set.clone();
    s.insert(x.to_string());
    s
}

fn without(set: &ArgumentSet, x: &str) -> ArgumentSet {
    let mut s = set.clone();
    s.remove(x);
    s
}

fn all_subsets(af: &ArgumentationFramework) -> Vec<ArgumentSet> {
    let args: Vec<&String> = af.arguments().iter().collect();
    (0u64..1 << args.len())
        .map(|bits| {
            args.iter()
                .enumerate()
                .filter(|(i, _)| bits >> i & 1 == 1)
                .map(|(_, a)| (*a).clone())
                .collect()
        })
        .collect()
}

fn sorted_unique(mut sets: Vec<ArgumentSet>) -> Vec<ArgumentSet> {
    sets.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    sets.dedup();
    sets
}

/// Subject sets quantified over: every subset of a small framework, else
/// the empty set, singletons, attackers and attack structures of each
/// argument, the whole set and a few seeded random subsets.
pub fn subject_family(af: &ArgumentationFramework, seed: u64) -> Vec<ArgumentSet> {
    if af.len() <= EXHAUSTIVE_LIMIT {
        return sorted_unique(all_subsets(af));
    }
    let mut sets = vec![ArgumentSet::new(), af.arguments().clone()];
    for a in af.arguments() {
        sets.push(ArgumentSet::from([a.clone()]));
        sets.push(af.attackers(a).expect("member"));
        let s = af.attack_structure(a).expect("member");
        sets.push(without(&s, a));
        sets.push(s);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_SUBSETS {
        sets.push(af.arguments().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect());
    }
    sorted_unique(sets)
}

/// Candidate explanations for existence.
fn existence_candidates(af: &ArgumentationFramework, a: &str) -> Vec<ArgumentSet> {
    if af.len() <= EXHAUSTIVE_LIMIT {
        return sorted_unique(all_subsets(af)).into_iter().filter(|s| !s.is_empty()).collect();
    }
    let s = af.attack_structure(a).expect("member");
    let mut sets = vec![af.arguments().clone(), af.attackers(a).expect("member"), without(&s, a)];
    sets.extend(af.arguments().iter().map(|x| ArgumentSet::from([x.clone()])));
    sorted_unique(sets).into_iter().filter(|s| !s.is_empty()).collect()
}

/// `(1 − σ(a), the candidate impact of largest magnitude)`; `None` when some
/// candidate fails and none is clearly nonzero.
fn existence_sides(session: &mut Session, af: &ArgumentationFramework, a: &str, candidates: &[ArgumentSet]) -> Option<(f64, f64)> {
    let gap = 1.0 - session.degree(af, a)?;
    let tol = session.cfg.tolerance;
    let mut best: f64 = 0.0;
    let mut failed = false;
    for x in candidates {
        match session.imp(af, x, a) {
            Some(v) if v.abs() > best.abs() => {
                best = v;
                if best.abs() > tol {
                    break;
                }
            }
            Some(_) => {}
            None => failed = true,
        }
    }
    if failed && best.abs() <= tol {
        None
    } else {
        Some((gap, best))
    }
}

fn existence_violated(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs.abs() > tol && rhs.abs() <= tol
}

struct ExistenceSearch {
    main: Search,
    class: Search,
    class_instances: usize,
}

fn check_existence(session: &mut Session, af: &ArgumentationFramework, state: &mut ExistenceSearch) {
    let tol = session.cfg.tolerance;
    let in_class = af.max_in_degree_count() >= 2;
    if in_class {
        state.class_instances += 1;
    }
    for a in af.arguments() {
        let main_open = !state.main.done();
        let class_open = in_class && !state.class.done();
        if !main_open && !class_open {
            return;
        }
        let Some(sigma) = session.degree(af, a) else {
            state.main.skipped += 1;
            continue;
        };
        if (1.0 - sigma).abs() <= tol {
            continue;
        }
        let candidates = existence_candidates(af, a);
        let sides = existence_sides(session, af, a, &candidates);
        let record = |search: &mut Search| match sides {
            None => search.skipped += 1,
            Some((lhs, rhs)) => {
                search.trials += 1;
                if existence_violated(lhs, rhs, tol) {
                    search.witness = Some(Witness::new(vec![af.clone()], candidates.clone(), vec![a], lhs, rhs));
                }
            }
        };
        if main_open {
            record(&mut state.main);
        }
        if class_open {
            record(&mut state.class);
        }
    }
}

fn check_single(p: PrincipleId, session: &mut Session, af: &ArgumentationFramework, seed: u64, search: &mut Search, instances: &mut usize) {
    let args: Vec<String> = af.arguments().iter().cloned().collect();
    let family = || subject_family(af, seed);
    let one = |x: &String| ArgumentSet::from([x.clone()]);
    match p {
        PrincipleId::Void => {
            for a in &args {
                if search.done() {
                    return;
                }
                let empty = ArgumentSet::new();
                let lhs = session.imp(af, &empty, a);
                search.compare(lhs, Some(0.0), |l, r| Witness::new(vec![af.clone()], vec![empty.clone()], vec![a], l, r));
            }
        }
        PrincipleId::Zero => {
            for a in &args {
                for x in args.iter().filter(|x| !connected(af, x, a)) {
                    if search.done() {
                        return;
                    }
                    let lhs = session.imp(af, &one(x), a);
                    search.compare(lhs, Some(0.0), |l, r| Witness::new(vec![af.clone()], vec![one(x)], vec![a], l, r));
                }
            }
        }
        PrincipleId::Balanced => {
            for set in family() {
                for a in &args {
                    for x in args.iter().filter(|x| !set.contains(*x)) {
                        if search.done() {
                            return;
                        }
                        let lhs = session.imp(af, &set, a).zip(session.imp(af, &one(x), a)).map(|(u, v)| u + v);
                        let rhs = session.imp(af, &with(&set, x), a);
                        search.compare(lhs, rhs, |l, r| Witness::new(vec![af.clone()], vec![set.clone()], vec![x, a], l, r));
                    }
                }
            }
        }
        PrincipleId::Minimisation => {
            for set in family() {
                for a in &args {
                    for x in set.iter().filter(|x| !connected(af, x, a)) {
                        if search.done() {
                            return;
                        }
                        let lhs = session.imp(af, &set, a);
                        let rhs = session.imp(af, &without(&set, x), a);
                        search.compare(lhs, rhs, |l, r| Witness::new(vec![af.clone()], vec![set.clone()], vec![x, a], l, r));
                    }
                }
            }
        }
        PrincipleId::Symmetry => {
            for (i, a) in args.iter().enumerate() {
                for b in &args[i + 1..] {
                    let s_a = af.attack_structure(a).expect("member");
                    let s: ArgumentSet = s_a.union(&af.attack_structure(b).expect("member")).cloned().collect();
                    if s.len() > AUTOMORPHISM_CAP {
                        continue;
                    }
                    let fixing = [(a.clone(), b.clone()), (b.clone(), a.clone())];
                    let maps = find_automorphisms_limited(af, &s, &fixing, AUTOMORPHISMS_PER_PAIR).expect("within cap");
                    for f in maps {
                        *instances += 1;
                        for set in family() {
                            if search.done() {
                                return;
                            }
                            let image = map_set(&f, &set);
                            let lhs = session.imp(af, &set, a);
                            let rhs = session.imp(af, &image, b);
                            search.compare(lhs, rhs, |l, r| Witness {
                                mapping: Some(f.clone()),
                                ..Witness::new(vec![af.clone()], vec![set.clone()], vec![a, b], l, r)
                            });
                        }
                    }
                }
            }
        }
        PrincipleId::Anonymity | PrincipleId::Independence | PrincipleId::Directionality | PrincipleId::Existence => {
            unreachable!("handled by the instance-specific checkers")
        }
    }
}

fn check_pairwise(p: PrincipleId, session: &mut Session, instance: &Instance, seed: u64, search: &mut Search) {
    match (p, instance) {
        (PrincipleId::Anonymity, Instance::Renamed { original, image, mapping }) => {
            for set in subject_family(original, seed) {
                for a in original.arguments() {
                    if search.done() {
                        return;
                    }
                    let lhs = session.imp(original, &set, a);
                    let rhs = session.imp(image, &map_set(mapping, &set), &mapping[a]);
                    search.compare(lhs, rhs, |l, r| Witness {
                        mapping: Some(mapping.clone()),
                        ..Witness::new(vec![original.clone(), image.clone()], vec![set.clone()], vec![a], l, r)
                    });
                }
            }
        }
        (PrincipleId::Independence, Instance::Disjoint { left, right }) => {
            let joined = left.union(right);
            for set in subject_family(left, seed) {
                for a in left.arguments() {
                    if search.done() {
                        return;
                    }
                    let lhs = session.imp(left, &set, a);
                    let rhs = session.imp(&joined, &set, a);
                    search.compare(lhs, rhs, |l, r| {
                        Witness::new(vec![left.clone(), right.clone()], vec![set.clone()], vec![a], l, r)
                    });
                }
            }
        }
        (PrincipleId::Directionality, Instance::Addition { base, attack }) => {
            let after = base.with_attack(attack.clone()).expect("endpoints are members");
            let targets: Vec<&String> = base
                .arguments()
                .iter()
                .filter(|a| !connected(base, &attack.target, a))
                .collect();
            for set in subject_family(base, seed) {
                for a in &targets {
                    if search.done() {
                        return;
                    }
                    let lhs = session.imp(base, &set, a);
                    let rhs = session.imp(&after, &set, a);
                    search.compare(lhs, rhs, |l, r| Witness {
                        attack: Some(attack.clone()),
                        ..Witness::new(vec![base.clone(), after.clone()], vec![set.clone()], vec![a.as_str()], l, r)
                    });
                }
            }
        }
        _ => unreachable!("shape checked by the caller"),
    }
}

fn instance_seed(corpus_seed: u64, index: usize) -> u64 {
    corpus_seed ^ (index as u64 + 1).wrapping_mul(0xA24B_AED4_963E_E407)
}

fn run_check(p: PrincipleId, session: &mut Session, corpus: &Corpus) -> PrincipleVerdict {
    let tol = session.cfg.tolerance;
    let mut instances = 0;
    let mut search = Search::new(tol);
    let mut restricted = None;
    if p == PrincipleId::Existence {
        let mut state = ExistenceSearch {
            main: Search::new(tol),
            class: Search::new(tol),
            class_instances: 0,
        };
        for inst in &corpus.instances {
            if let Instance::Single(af) = inst {
                instances += 1;
                check_existence(session, af, &mut state);
            }
        }
        search = state.main;
        restricted = Some(ClassVerdict {
            class: MULTI_MAX_INDEGREE_CLASS.to_string(),
            instances: state.class_instances,
            outcome: state.class.outcome(),
        });
    } else {
        for (i, inst) in corpus.instances.iter().enumerate() {
            if search.done() {
                break;
            }
            if !inst.supports(p) {
                continue;
            }
            let seed = instance_seed(corpus.seed, i);
            match inst {
                Instance::Single(af) => {
                    if p != PrincipleId::Symmetry {
                        instances += 1;
                    }
                    check_single(p, session, af, seed, &mut search, &mut instances);
                }
                other => {
                    instances += 1;
                    check_pairwise(p, session, other, seed, &mut search);
                }
            }
        }
    }
    let skipped = search.skipped;
    PrincipleVerdict {
        principle: p,
        measure: session.measure,
        semantics: session.spec.kind,
        tolerance: tol,
        instances,
        skipped,
        outcome: search.outcome(),
        restricted,
    }
}

/// Searches `corpus` for a violation of `p` by `measure` under `spec`.
/// Entries whose shape the principle does not quantify over are ignored.
pub fn check_principle(
    p: PrincipleId,
    measure: Measure,
    spec: &SemanticsSpec,
    corpus: &Corpus,
    cfg: &CheckConfig,
) -> PrincipleVerdict {
    let mut session = Session::new(measure, *spec, cfg);
    run_check(p, &mut session, corpus)
}

/// Checks a single corpus entry, which must have the shape `p` needs.
pub fn check_instance(
    p: PrincipleId,
    measure: Measure,
    spec: &SemanticsSpec,
    instance: &Instance,
    cfg: &CheckConfig,
) -> Result<PrincipleVerdict, PrincipleError> {
    if !instance.supports(p) {
        return Err(PrincipleError::UnsupportedInstance {
            principle: p,
            shape: instance.shape().to_string(),
        });
    }
    Ok(check_principle(p, measure, spec, &Corpus::new(vec![instance.clone()], 0), cfg))
}

fn need<T>(v: Option<T>, what: &str) -> Result<T, PrincipleError> {
    v.ok_or_else(|| PrincipleError::Replay(format!("missing or unevaluable {what}")))
}

/// Recomputes `(lhs, rhs)` of a witness from scratch.
pub fn replay(
    p: PrincipleId,
    measure: Measure,
    spec: &SemanticsSpec,
    w: &Witness,
    cfg: &CheckConfig,
) -> Result<(f64, f64), PrincipleError> {
    let mut s = Session::new(measure, *spec, cfg);
    let af = need(w.frameworks.first(), "framework")?;
    let arg = |i: usize| need(w.arguments.get(i).map(String::as_str), "argument");
    let set = |i: usize| need(w.subject_sets.get(i), "subject set");
    let imp = |s: &mut Session, af: &ArgumentationFramework, x: &ArgumentSet, a: &str| need(s.imp(af, x, a), "impact");
    Ok(match p {
        PrincipleId::Anonymity => {
            let image = need(w.frameworks.get(1), "image framework")?;
            let f = need(w.mapping.as_ref(), "mapping")?;
            let a = arg(0)?;
            let fa = need(f.get(a), "image argument")?;
            (imp(&mut s, af, set(0)?, a)?, imp(&mut s, image, &map_set(f, set(0)?), fa)?)
        }
        PrincipleId::Independence => {
            let joined = af.union(need(w.frameworks.get(1), "second framework")?);
            (imp(&mut s, af, set(0)?, arg(0)?)?, imp(&mut s, &joined, set(0)?, arg(0)?)?)
        }
        PrincipleId::Balanced => {
            let (x, a) = (arg(0)?, arg(1)?);
            let lhs = imp(&mut s, af, set(0)?, a)? + imp(&mut s, af, &ArgumentSet::from([x.to_string()]), a)?;
            (lhs, imp(&mut s, af, &with(set(0)?, x), a)?)
        }
        PrincipleId::Void => (imp(&mut s, af, &ArgumentSet::new(), arg(0)?)?, 0.0),
        PrincipleId::Directionality => {
            let attack = need(w.attack.clone(), "added attack")?;
            let after = af.with_attack(attack).map_err(|e| PrincipleError::Replay(e.to_string()))?;
            (imp(&mut s, af, set(0)?, arg(0)?)?, imp(&mut s, &after, set(0)?, arg(0)?)?)
        }
        PrincipleId::Minimisation => {
            let (x, a) = (arg(0)?, arg(1)?);
            (imp(&mut s, af, set(0)?, a)?, imp(&mut s, af, &without(set(0)?, x), a)?)
        }
        PrincipleId::Zero => (imp(&mut s, af, set(0)?, arg(0)?)?, 0.0),
        PrincipleId::Symmetry => {
            let f = need(w.mapping.as_ref(), "mapping")?;
            (imp(&mut s, af, set(0)?, arg(0)?)?, imp(&mut s, af, &map_set(f, set(0)?), arg(1)?)?)
        }
        PrincipleId::Existence => need(existence_sides(&mut s, af, arg(0)?, &w.subject_sets), "existence sides")?,
    })
}

/// Whether replayed sides violate `p` at `tolerance`.
pub fn violates(p: PrincipleId, lhs: f64, rhs: f64, tolerance: f64) -> bool {
    match p {
        PrincipleId::Existence => existence_violated(lhs, rhs, tolerance),
        _ => (lhs - rhs).abs() > tolerance,
    }
}

/// Everything an audit run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub corpus: CorpusConfig,
    pub fixtures: bool,
    pub measures: Vec<Measure>,
    pub semantics: Vec<SemanticsKind>,
    pub check: CheckConfig,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            corpus: CorpusConfig::default(),
            fixtures: true,
            measures: vec![Measure::Dv, Measure::Si],
            semantics: SemanticsKind::ALL.to_vec(),
            check: CheckConfig::default(),
        }
    }
}

/// Runs every principle for every selected (measure, semantics) cell.
/// Rows are ordered by principle, then measure, then semantics.
pub fn audit(cfg: &AuditConfig) -> Result<AuditReport, PrincipleError> {
    if !(cfg.check.tolerance >= 0.0 && cfg.check.tolerance.is_finite()) {
        return Err(PrincipleError::InvalidConfig(format!("tolerance {} must be a finite non-negative number", cfg.check.tolerance)));
    }
    let corpus = Corpus::generate(&cfg.corpus, cfg.fixtures)?;
    let mut measures = cfg.measures.clone();
    measures.sort();
    measures.dedup();
    let mut kinds = cfg.semantics.clone();
    kinds.sort();
    kinds.dedup();
    let mut matrix = Vec::new();
    for &measure in &measures {
        for &kind in &kinds {
            let mut session = Session::new(measure, SemanticsSpec::new(kind), &cfg.check);
            for p in PrincipleId::ALL {
                matrix.push(run_check(p, &mut session, &corpus));
            }
        }
    }
    matrix.sort_by_key(|v| (v.principle, v.measure, v.semantics));
    Ok(AuditReport {
        config: cfg.clone(),
        corpus_size: corpus.len(),
        matrix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::argset;
    use crate::fixtures;

    fn single(af: ArgumentationFramework) -> Instance {
        Instance::Single(af)
    }

    fn check(p: PrincipleId, m: Measure, spec: SemanticsSpec, inst: Instance) -> PrincipleVerdict {
        check_instance(p, m, &spec, &inst, &CheckConfig::default()).unwrap()
    }

    #[test]
    fn balanced_fails_for_dv_on_running_example() {
        let v = check(PrincipleId::Balanced, Measure::Dv, SemanticsSpec::hbs(), single(fixtures::running_example()));
        let w = v.witness().expect("dv is not additive");
        let (l, r) = replay(PrincipleId::Balanced, Measure::Dv, &SemanticsSpec::hbs(), w, &CheckConfig::default()).unwrap();
        assert!(violates(PrincipleId::Balanced, l, r, DEFAULT_TOLERANCE));
        assert_eq!((l, r), (w.lhs, w.rhs));
    }

    #[test]
    fn running_example_balanced_pair_is_a_witness() {
        let af = fixtures::running_example();
        let w = Witness::new(vec![af], vec![argset(["a8"])], vec!["a10", "a4"], 0.0, 0.0);
        let (l, r) = replay(PrincipleId::Balanced, Measure::Dv, &SemanticsSpec::hbs(), &w, &CheckConfig::default()).unwrap();
        assert!((l - (-0.174 - 0.026)).abs() < 2e-3);
        assert!((r - -0.174).abs() < 1e-3);
    }

    #[test]
    fn walk_impact_is_balanced_and_zero_on_running_example() {
        for p in [PrincipleId::Balanced, PrincipleId::Zero, PrincipleId::Void, PrincipleId::Minimisation, PrincipleId::Existence] {
            let v = check(p, Measure::Si, SemanticsSpec::hbs(), single(fixtures::running_example()));
            assert!(v.holds(), "{p}: {:?}", v.witness());
            assert!(v.outcome.trials() > 0, "{p}");
        }
    }

    #[test]
    fn counting_independence_fixture_fails_for_both_measures() {
        let (left, right) = fixtures::disjoint_counting_pair();
        for m in [Measure::Dv, Measure::Si] {
            let v = check(
                PrincipleId::Independence,
                m,
                SemanticsSpec::cs(),
                Instance::Disjoint {
                    left: left.clone(),
                    right: right.clone(),
                },
            );
            assert!(v.outcome.is_counterexample(), "{m}");
            let hbs = check(
                PrincipleId::Independence,
                m,
                SemanticsSpec::hbs(),
                Instance::Disjoint {
                    left: left.clone(),
                    right: right.clone(),
                },
            );
            assert!(hbs.holds());
        }
    }

    #[test]
    fn counting_directionality_fixture_fails_for_both_measures() {
        let (base, attack) = fixtures::counting_direction_addition();
        for m in [Measure::Dv, Measure::Si] {
            let inst = Instance::Addition {
                base: base.clone(),
                attack: attack.clone(),
            };
            let v = check(PrincipleId::Directionality, m, SemanticsSpec::cs(), inst.clone());
            let w = v.witness().expect("counting is not directional");
            let (l, r) = replay(PrincipleId::Directionality, m, &SemanticsSpec::cs(), w, &CheckConfig::default()).unwrap();
            assert!(violates(PrincipleId::Directionality, l, r, DEFAULT_TOLERANCE));
            assert!(check(PrincipleId::Directionality, m, SemanticsSpec::max(), inst).holds());
        }
    }

    #[test]
    fn mirrored_targets_have_symmetric_impacts() {
        let v = check(PrincipleId::Symmetry, Measure::Dv, SemanticsSpec::hbs(), single(fixtures::mirrored_targets()));
        assert!(v.holds());
        assert!(v.instances >= 1);
        let af = fixtures::mirrored_targets();
        let cfg = CheckConfig::default();
        let mut s = Session::new(Measure::Si, SemanticsSpec::hbs(), &cfg);
        let lhs = s.imp(&af, &argset(["x", "y"]), "a").unwrap();
        let rhs = s.imp(&af, &argset(["y", "z"]), "b").unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let err = check_instance(
            PrincipleId::Anonymity,
            Measure::Dv,
            &SemanticsSpec::hbs(),
            &single(fixtures::self_attack()),
            &CheckConfig::default(),
        )
        .unwrap_err();
        assert!(matches!(err, PrincipleError::UnsupportedInstance { .. }));
    }

    #[test]
    fn existence_reports_the_class_verdict() {
        let v = check(PrincipleId::Existence, Measure::Dv, SemanticsSpec::hbs(), single(fixtures::self_attack()));
        assert!(v.holds());
        let class = v.restricted.expect("existence carries a class verdict");
        assert_eq!(class.instances, 0);
    }

    #[test]
    fn small_frameworks_use_every_subset() {
        let af = fixtures::counting_pair().1;
        assert_eq!(subject_family(&af, 0).len(), 8);
        let big = fixtures::running_example();
        let fam = subject_family(&big, 3);
        assert_eq!(fam, subject_family(&big, 3));
        assert!(fam.contains(&argset(["a8"])) && fam.contains(&ArgumentSet::new()));
    }

    #[test]
    fn principle_names_round_trip() {
        for p in PrincipleId::ALL {
            assert_eq!(p.as_str().parse::<PrincipleId>().unwrap(), p);
        }
    }
}
