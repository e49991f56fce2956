use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ArgumentationFramework, Attack, ArgumentSet};
use std::collections::BTreeSet;

/// Erdős–Rényi style random framework over `a1..an`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub argument_count: usize,
    pub attack_probability: f64,
    pub allow_self_attacks: bool,
    pub seed: u64,
}

/// Every ordered pair (self-loops only if allowed) is drawn independently
/// with `attack_probability`, in a fixed pair order, so equal configs give
/// equal frameworks.
pub fn random_af(cfg: &GeneratorConfig) -> ArgumentationFramework {
    let p = cfg.attack_probability.clamp(0.0, 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let names: Vec<String> = (1..=cfg.argument_count).map(|i| format!("a{i}")).collect();
    let mut attacks = BTreeSet::new();
    for (i, src) in names.iter().enumerate() {
        for (j, dst) in names.iter().enumerate() {
            if i == j && !cfg.allow_self_attacks {
                continue;
            }
            if rng.gen_bool(p) {
                attacks.insert(Attack::new(src.clone(), dst.clone()));
            }
        }
    }
    let arguments: ArgumentSet = names.into_iter().collect();
    ArgumentationFramework::from_sets_unchecked(arguments, attacks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::{serialize, Format};
    use proptest::prelude::*;

    fn cfg(n: usize, p: f64, self_attacks: bool, seed: u64) -> GeneratorConfig {
        GeneratorConfig {
            argument_count: n,
            attack_probability: p,
            allow_self_attacks: self_attacks,
            seed,
        }
    }

    #[test]
    fn extreme_probabilities() {
        let none = random_af(&cfg(3, 0.0, true, 7));
        assert_eq!(none.len(), 3);
        assert!(none.attacks().is_empty());
        let full = random_af(&cfg(2, 1.0, true, 1));
        assert_eq!(full.attacks().len(), 4);
        let no_loops = random_af(&cfg(3, 1.0, false, 1));
        assert_eq!(no_loops.attacks().len(), 6);
    }

    proptest! {
        #[test]
        fn equal_configs_serialize_identically(n in 1usize..9, p in 0.0f64..1.0, seed: u64, s: bool) {
            let a = serialize(&random_af(&cfg(n, p, s, seed)), Format::Tgf, None).unwrap();
            let b = serialize(&random_af(&cfg(n, p, s, seed)), Format::Tgf, None).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
