use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{PrincipleError, PrincipleId};
use crate::af::{random_af, ArgumentationFramework, Attack, GeneratorConfig, Mapping};
use crate::fixtures;

/// Schedule of random frameworks for an audit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusConfig {
    pub count: usize,
    pub min_arguments: usize,
    pub max_arguments: usize,
    pub min_probability: f64,
    pub max_probability: f64,
    pub allow_self_attacks: bool,
    /// Attack additions drawn per graph for the directionality check.
    pub additions_per_graph: usize,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            count: 500,
            min_arguments: 2,
            max_arguments: 7,
            min_probability: 0.3,
            max_probability: 0.3,
            allow_self_attacks: true,
            additions_per_graph: 3,
            seed: 42,
        }
    }
}

impl CorpusConfig {
    pub fn validate(&self) -> Result<(), PrincipleError> {
        let bad = |m: String| Err(PrincipleError::InvalidConfig(m));
        if self.min_arguments == 0 || self.min_arguments > self.max_arguments {
            return bad(format!(
                "argument range {}..{} is empty or starts at zero",
                self.min_arguments, self.max_arguments
            ));
        }
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if !unit(self.min_probability) || !unit(self.max_probability) || self.min_probability > self.max_probability {
            return bad(format!(
                "probability range {}..{} is not inside [0, 1]",
                self.min_probability, self.max_probability
            ));
        }
        Ok(())
    }
}

/// One corpus entry, shaped for the principles that quantify over it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Instance {
    Single(ArgumentationFramework),
    /// `image` is `original` renamed through `mapping`.
    Renamed {
        original: ArgumentationFramework,
        image: ArgumentationFramework,
        mapping: Mapping,
    },
    /// Frameworks with disjoint argument sets.
    Disjoint {
        left: ArgumentationFramework,
        right: ArgumentationFramework,
    },
    Addition {
        base: ArgumentationFramework,
        attack: Attack,
    },
}

impl Instance {
    pub fn shape(&self) -> &'static str {
        match self {
            Instance::Single(_) => "single",
            Instance::Renamed { .. } => "renamed",
            Instance::Disjoint { .. } => "disjoint",
            Instance::Addition { .. } => "addition",
        }
    }

    pub fn supports(&self, p: PrincipleId) -> bool {
        matches!(
            (p, self),
            (PrincipleId::Anonymity, Instance::Renamed { .. })
                | (PrincipleId::Independence, Instance::Disjoint { .. })
                | (PrincipleId::Directionality, Instance::Addition { .. })
                | (
                    PrincipleId::Balanced
                        | PrincipleId::Void
                        | PrincipleId::Minimisation
                        | PrincipleId::Zero
                        | PrincipleId::Symmetry
                        | PrincipleId::Existence,
                    Instance::Single(_)
                )
        )
    }
}

/// Instances plus the seed used for the random part of each subject-set family.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Corpus {
    pub instances: Vec<Instance>,
    pub seed: u64,
}

impl Corpus {
    pub fn new(instances: Vec<Instance>, seed: u64) -> Self {
        Corpus { instances, seed }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Generated graphs with their derived instances, preceded by the
    /// shipped counterexample fixtures when `with_fixtures` is set.
    pub fn generate(cfg: &CorpusConfig, with_fixtures: bool) -> Result<Corpus, PrincipleError> {
        cfg.validate()?;
        let mut instances = if with_fixtures { fixture_instances() } else { Vec::new() };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let graphs: Vec<ArgumentationFramework> = (0..cfg.count)
            .map(|_| {
                let argument_count = rng.gen_range(cfg.min_arguments..=cfg.max_arguments);
                let attack_probability = if cfg.max_probability > cfg.min_probability {
                    rng.gen_range(cfg.min_probability..=cfg.max_probability)
                } else {
                    cfg.min_probability
                };
                random_af(&GeneratorConfig {
                    argument_count,
                    attack_probability,
                    allow_self_attacks: cfg.allow_self_attacks,
                    seed: rng.gen(),
                })
            })
            .collect();
        for (i, g) in graphs.iter().enumerate() {
            instances.push(Instance::Single(g.clone()));
            instances.push(renamed(g, &mut rng));
            let partner = &graphs[(i + 1) % graphs.len()];
            instances.push(Instance::Disjoint {
                left: g.clone(),
                right: suffixed(partner, "~"),
            });
            for attack in additions(g, cfg.additions_per_graph, cfg.allow_self_attacks, &mut rng) {
                instances.push(Instance::Addition {
                    base: g.clone(),
                    attack,
                });
            }
        }
        Ok(Corpus::new(instances, cfg.seed))
    }
}

fn fixture_instances() -> Vec<Instance> {
    let running = fixtures::running_example();
    let (without, with) = fixtures::counting_pair();
    let (left, right) = fixtures::disjoint_counting_pair();
    let (base, attack) = fixtures::counting_direction_addition();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    vec![
        Instance::Single(running.clone()),
        Instance::Single(fixtures::self_attack()),
        Instance::Single(fixtures::mirrored_targets()),
        Instance::Single(without),
        Instance::Single(with),
        Instance::Disjoint { left, right },
        Instance::Addition { base, attack },
        renamed(&running, &mut rng),
    ]
}

/// Renames onto `n1..nk` in a shuffled order, so the lexicographic order of
/// the image differs from the original's.
fn renamed(af: &ArgumentationFramework, rng: &mut ChaCha8Rng) -> Instance {
    let mut images: Vec<String> = (1..=af.len()).map(|i| format!("n{i}")).collect();
    images.shuffle(rng);
    let mapping: Mapping = af.arguments().iter().cloned().zip(images).collect();
    let image = af.rename(&mapping).expect("a bijective renaming of a valid framework is valid");
    Instance::Renamed {
        original: af.clone(),
        image,
        mapping,
    }
}

fn suffixed(af: &ArgumentationFramework, suffix: &str) -> ArgumentationFramework {
    let mapping: Mapping = af
        .arguments()
        .iter()
        .map(|a| (a.clone(), format!("{a}{suffix}")))
        .collect();
    af.rename(&mapping).expect("suffixing keeps names distinct and valid")
}

fn additions(af: &ArgumentationFramework, k: usize, self_attacks: bool, rng: &mut ChaCha8Rng) -> Vec<Attack> {
    let mut candidates: Vec<Attack> = af
        .arguments()
        .iter()
        .flat_map(|s| af.arguments().iter().map(move |t| Attack::new(s.clone(), t.clone())))
        .filter(|a| (self_attacks || a.source != a.target) && !af.attacks().contains(a))
        .collect();
    candidates.shuffle(rng);
    candidates.truncate(k);
    candidates
}
