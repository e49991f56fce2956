//! Argumentation frameworks: arguments, attacks and the structural
//! operators the semantics and impact measures are built from.

mod automorphism;
mod formats;
mod generator;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use automorphism::{find_automorphisms, find_automorphisms_limited, Mapping, AUTOMORPHISM_CAP};
pub use formats::{parse_apx, parse_json, parse_tgf, serialize, Annotations, Format};
pub use generator::{random_af, GeneratorConfig};

/// Set of argument identifiers, always iterated in lexicographic order.
pub type ArgumentSet = BTreeSet<String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AfError {
    #[error("missing `#` separator line")]
    MissingSeparator,
    #[error("attack endpoint `{0}` is not a declared argument")]
    UnknownEndpoint(String),
    #[error("duplicate attack {0}")]
    DuplicateAttack(Attack),
    #[error("duplicate argument `{0}`")]
    DuplicateArgument(String),
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown argument `{0}`")]
    UnknownArgument(String),
    #[error("unknown attack {0}")]
    UnknownAttack(Attack),
    #[error("invalid argument identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("{size} arguments exceed the brute-force cap of {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("annotation inconsistent with framework: {0}")]
    InconsistentAnnotation(String),
}

/// A directed attack `source -> target`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Attack {
    pub source: String,
    pub target: String,
}

impl Attack {
    pub fn new(source: impl Into<String>, target: impl Into<String>) -> Self {
        Attack {
            source: source.into(),
            target: target.into(),
        }
    }
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.source, self.target)
    }
}

/// Identifiers must survive both TGF (whitespace separated) and APX
/// (`arg(..)` / `att(..,..)`) round trips.
pub fn is_valid_identifier(id: &str) -> bool {
    !id.is_empty()
        && id != "#"
        && !id
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | '%' | '"'))
}

/// An abstract argumentation framework `(A, C)`.
///
/// Immutable once built: every operator returns a new value.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ArgumentationFramework {
    arguments: ArgumentSet,
    attacks: BTreeSet<Attack>,
}

impl ArgumentationFramework {
    /// Builds a framework, rejecting duplicate declarations, invalid
    /// identifiers and attacks whose endpoints are not arguments.
    pub fn new<S, T, U>(
        arguments: impl IntoIterator<Item = S>,
        attacks: impl IntoIterator<Item = (T, U)>,
    ) -> Result<Self, AfError>
    where
        S: Into<String>,
        T: Into<String>,
        U: Into<String>,
    {
        let mut args = ArgumentSet::new();
        for a in arguments {
            let a = a.into();
            if !is_valid_identifier(&a) {
                return Err(AfError::InvalidIdentifier(a));
            }
            if !args.insert(a.clone()) {
                return Err(AfError::DuplicateArgument(a));
            }
        }
        let mut atts = BTreeSet::new();
        for (s, t) in attacks {
            let attack = Attack::new(s, t);
            for end in [&attack.source, &attack.target] {
                if !args.contains(end) {
                    return Err(AfError::UnknownEndpoint(end.clone()));
                }
            }
            if atts.contains(&attack) {
                return Err(AfError::DuplicateAttack(attack));
            }
            atts.insert(attack);
        }
        Ok(ArgumentationFramework {
            arguments: args,
            attacks: atts,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub(crate) fn from_sets_unchecked(arguments: ArgumentSet, attacks: BTreeSet<Attack>) -> Self {
        debug_assert!(attacks
            .iter()
            .all(|a| arguments.contains(&a.source) && arguments.contains(&a.target)));
        ArgumentationFramework { arguments, attacks }
    }

    pub fn arguments(&self) -> &ArgumentSet {
        &self.arguments
    }

    pub fn attacks(&self) -> &BTreeSet<Attack> {
        &self.attacks
    }

    pub fn len(&self) -> usize {
        self.arguments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arguments.is_empty()
    }

    pub fn contains(&self, x: &str) -> bool {
        self.arguments.contains(x)
    }

    pub fn has_attack(&self, source: &str, target: &str) -> bool {
        self.attacks.contains(&Attack::new(source, target))
    }

    fn require(&self, x: &str) -> Result<(), AfError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(AfError::UnknownArgument(x.to_string()))
        }
    }

    fn require_all<'a>(&self, xs: impl IntoIterator<Item = &'a String>) -> Result<(), AfError> {
        xs.into_iter().try_for_each(|x| self.require(x))
    }

    /// `Att(x)`: the direct attackers of `x`.
    pub fn attackers(&self, x: &str) -> Result<ArgumentSet, AfError> {
        self.require(x)?;
        Ok(self
            .attacks
            .iter()
            .filter(|a| a.target == x)
            .map(|a| a.source.clone())
            .collect())
    }

    pub fn in_degree(&self, x: &str) -> Result<usize, AfError> {
        self.require(x)?;
        Ok(self.attacks.iter().filter(|a| a.target == x).count())
    }

    pub fn max_in_degree(&self) -> usize {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for a in &self.attacks {
            *counts.entry(a.target.as_str()).or_default() += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// Arguments reaching the maximum in-degree.
    pub fn max_in_degree_count(&self) -> usize {
        let max = self.max_in_degree();
        self.arguments
            .iter()
            .filter(|x| self.attacks.iter().filter(|a| &a.target == *x).count() == max)
            .count()
    }

    /// `Arg⁻(X)`: arguments outside `X` attacking some member of `X`.
    pub fn external_attackers(&self, set: &ArgumentSet) -> Result<ArgumentSet, AfError> {
        self.require_all(set)?;
        Ok(self
            .attacks
            .iter()
            .filter(|a| set.contains(&a.target) && !set.contains(&a.source))
            .map(|a| a.source.clone())
            .collect())
    }

    /// `Att⁻(X)`: attacks from `Arg⁻(X)` into `X`.
    pub fn external_attacks(&self, set: &ArgumentSet) -> Result<BTreeSet<Attack>, AfError> {
        self.require_all(set)?;
        Ok(self
            .attacks
            .iter()
            .filter(|a| set.contains(&a.target) && !set.contains(&a.source))
            .cloned()
            .collect())
    }

    /// Arguments with a directed path of length at least one to `x`.
    fn ancestors(&self, x: &str) -> ArgumentSet {
        let mut seen = ArgumentSet::new();
        let mut queue = VecDeque::from([x.to_string()]);
        while let Some(cur) = queue.pop_front() {
            for a in self.attacks.iter().filter(|a| a.target == cur) {
                if seen.insert(a.source.clone()) {
                    queue.push_back(a.source.clone());
                }
            }
        }
        seen
    }

    /// `Str(x)`: `x` together with every argument that has a path to it.
    pub fn attack_structure(&self, x: &str) -> Result<ArgumentSet, AfError> {
        self.require(x)?;
        let mut s = self.ancestors(x);
        s.insert(x.to_string());
        Ok(s)
    }

    /// True iff a directed path of length at least one leads from `from` to `to`.
    pub fn has_path(&self, from: &str, to: &str) -> Result<bool, AfError> {
        self.require(from)?;
        self.require(to)?;
        Ok(self.ancestors(to).contains(from))
    }

    /// `AS ⊕ AS'`.
    pub fn union(&self, other: &ArgumentationFramework) -> ArgumentationFramework {
        ArgumentationFramework {
            arguments: self.arguments.union(&other.arguments).cloned().collect(),
            attacks: self.attacks.union(&other.attacks).cloned().collect(),
        }
    }

    /// `AS|X`: the sub-framework induced by `X`.
    pub fn restrict(&self, set: &ArgumentSet) -> Result<ArgumentationFramework, AfError> {
        self.require_all(set)?;
        Ok(ArgumentationFramework {
            arguments: set.clone(),
            attacks: self
                .attacks
                .iter()
                .filter(|a| set.contains(&a.source) && set.contains(&a.target))
                .cloned()
                .collect(),
        })
    }

    /// `AS ⊖arg_y X`. `y` is never removed, but every attack with an
    /// endpoint in `X` is, including those touching `y` when `y ∈ X`.
    pub fn delete_arguments(
        &self,
        set: &ArgumentSet,
        keep: &str,
    ) -> Result<ArgumentationFramework, AfError> {
        self.require_all(set)?;
        self.require(keep)?;
        Ok(ArgumentationFramework {
            arguments: self
                .arguments
                .iter()
                .filter(|a| !set.contains(*a) || a.as_str() == keep)
                .cloned()
                .collect(),
            attacks: self
                .attacks
                .iter()
                .filter(|a| !set.contains(&a.source) && !set.contains(&a.target))
                .cloned()
                .collect(),
        })
    }

    /// `AS ⊖att R`.
    pub fn delete_attacks(
        &self,
        removed: &BTreeSet<Attack>,
    ) -> Result<ArgumentationFramework, AfError> {
        if let Some(a) = removed.iter().find(|a| !self.attacks.contains(*a)) {
            return Err(AfError::UnknownAttack((*a).clone()));
        }
        Ok(ArgumentationFramework {
            arguments: self.arguments.clone(),
            attacks: self.attacks.difference(removed).cloned().collect(),
        })
    }

    /// `(A, C ∪ {attack})`; adding an existing attack is a no-op.
    pub fn with_attack(&self, attack: Attack) -> Result<ArgumentationFramework, AfError> {
        self.require(&attack.source)?;
        self.require(&attack.target)?;
        let mut next = self.clone();
        next.attacks.insert(attack);
        Ok(next)
    }

    /// Applies a bijective renaming. Every argument must be mapped.
    pub fn rename(&self, mapping: &BTreeMap<String, String>) -> Result<ArgumentationFramework, AfError> {
        let image = |x: &String| {
            mapping
                .get(x)
                .cloned()
                .ok_or_else(|| AfError::UnknownArgument(x.clone()))
        };
        let arguments = self
            .arguments
            .iter()
            .map(image)
            .collect::<Result<Vec<_>, _>>()?;
        let attacks = self
            .attacks
            .iter()
            .map(|a| Ok((image(&a.source)?, image(&a.target)?)))
            .collect::<Result<Vec<_>, AfError>>()?;
        ArgumentationFramework::new(arguments, attacks)
    }

    /// Position of each argument in the lexicographic order.
    pub(crate) fn index_map(&self) -> BTreeMap<&str, usize> {
        self.arguments
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), i))
            .collect()
    }

    /// Attackers of each argument as positions in the lexicographic order.
    pub(crate) fn attacker_lists(&self) -> Vec<Vec<usize>> {
        let idx = self.index_map();
        let mut lists = vec![Vec::new(); self.len()];
        for a in &self.attacks {
            lists[idx[a.target.as_str()]].push(idx[a.source.as_str()]);
        }
        lists
    }
}

impl fmt::Display for ArgumentationFramework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<&str> = self.arguments.iter().map(String::as_str).collect();
        let atts: Vec<String> = self.attacks.iter().map(Attack::to_string).collect();
        write!(f, "({{{}}}, {{{}}})", args.join(","), atts.join(","))
    }
}

/// Convenience for building argument sets from literals.
pub fn argset<I, S>(items: I) -> ArgumentSet
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(Into::into).collect()
}
