use std::collections::BTreeMap;

use super::{AfError, ArgumentSet, ArgumentationFramework};

/// Largest restriction the exhaustive search accepts.
pub const AUTOMORPHISM_CAP: usize = 9;

/// A bijection between argument identifiers.
pub type Mapping = BTreeMap<String, String>;

/// Every automorphism of `af|restricted_to` that satisfies the required
/// `(argument, image)` pairs.
pub fn find_automorphisms(
    af: &ArgumentationFramework,
    restricted_to: &ArgumentSet,
    fixing: &[(String, String)],
) -> Result<Vec<Mapping>, AfError> {
    find_automorphisms_limited(af, restricted_to, fixing, usize::MAX)
}

/// As [`find_automorphisms`], stopping after `limit` results.
///
/// Exhaustive backtracking over permutations; partial assignments are
/// pruned as soon as an attack (or non-attack) between two assigned
/// arguments is not preserved, or in/out degrees disagree.
pub fn find_automorphisms_limited(
    af: &ArgumentationFramework,
    restricted_to: &ArgumentSet,
    fixing: &[(String, String)],
    limit: usize,
) -> Result<Vec<Mapping>, AfError> {
    if restricted_to.len() > AUTOMORPHISM_CAP {
        return Err(AfError::TooLarge {
            size: restricted_to.len(),
            cap: AUTOMORPHISM_CAP,
        });
    }
    let sub = af.restrict(restricted_to)?;
    let names: Vec<&String> = sub.arguments().iter().collect();
    let n = names.len();
    let pos = |x: &str| names.iter().position(|a| a.as_str() == x);

    let mut adj = vec![vec![false; n]; n];
    for a in sub.attacks() {
        adj[pos(&a.source).unwrap()][pos(&a.target).unwrap()] = true;
    }
    let indeg: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| adj[i][j]).count()).collect();
    let outdeg: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| adj[i][j]).count()).collect();

    let mut forced: Vec<Option<usize>> = vec![None; n];
    for (from, to) in fixing {
        let (Some(i), Some(j)) = (pos(from), pos(to)) else {
            return Ok(Vec::new());
        };
        match forced[i] {
            Some(prev) if prev != j => return Ok(Vec::new()),
            _ => forced[i] = Some(j),
        }
    }

    let mut search = Search {
        adj: &adj,
        indeg: &indeg,
        outdeg: &outdeg,
        forced: &forced,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
        limit,
    };
    search.extend(0);

    Ok(search
        .found
        .into_iter()
        .map(|img| {
            img.iter()
                .enumerate()
                .map(|(i, &j)| (names[i].clone(), names[j].clone()))
                .collect()
        })
        .collect())
}

struct Search<'a> {
    adj: &'a [Vec<bool>],
    indeg: &'a [usize],
    outdeg: &'a [usize],
    forced: &'a [Option<usize>],
    image: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl Search<'_> {
    fn consistent(&self, i: usize, j: usize) -> bool {
        if self.indeg[i] != self.indeg[j] || self.outdeg[i] != self.outdeg[j] {
            return false;
        }
        if self.adj[i][i] != self.adj[j][j] {
            return false;
        }
        (0..i).all(|k| {
            let fk = self.image[k];
            self.adj[i][k] == self.adj[j][fk] && self.adj[k][i] == self.adj[fk][j]
        })
    }

    fn extend(&mut self, i: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        let n = self.image.len();
        if i == n {
            self.found.push(self.image.clone());
            return;
        }
        let candidates: Vec<usize> = match self.forced[i] {
            Some(j) => vec![j],
            None => (0..n).collect(),
        };
        for j in candidates {
            if self.used[j] || !self.consistent(i, j) {
                continue;
            }
            self.image[i] = j;
            self.used[j] = true;
            self.extend(i + 1);
            self.used[j] = false;
            self.image[i] = usize::MAX;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::af::argset;
    use crate::fixtures;

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn symmetry_illustration_swaps_x_and_z() {
        let af = fixtures::mirrored_targets();
        let all = argset(["x", "y", "z", "a", "b"]);
        let found = find_automorphisms(&af, &all, &[pair("a", "b"), pair("b", "a")]).unwrap();
        assert!(found
            .iter()
            .any(|f| f["y"] == "y" && f["x"] == "z" && f["z"] == "x"));
    }

    #[test]
    fn attack_free_pair_has_both_permutations() {
        let af = ArgumentationFramework::new(["a", "b"], Vec::<(String, String)>::new()).unwrap();
        let found = find_automorphisms(&af, af.arguments(), &[]).unwrap();
        assert_eq!(found.len(), 2);
    }

    #[test]
    fn asymmetric_edge_has_no_swap() {
        let af = ArgumentationFramework::new(["a", "b"], [("a", "b")]).unwrap();
        let found = find_automorphisms(&af, af.arguments(), &[pair("a", "b"), pair("b", "a")]).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let af = fixtures::running_example();
        assert_eq!(
            find_automorphisms(&af, af.arguments(), &[]),
            Err(AfError::TooLarge { size: 11, cap: 9 })
        );
    }

    #[test]
    fn every_result_preserves_attacks() {
        let af = ArgumentationFramework::new(
            ["p", "q", "r", "s"],
            [("p", "q"), ("q", "r"), ("r", "s"), ("s", "p")],
        )
        .unwrap();
        let found = find_automorphisms(&af, af.arguments(), &[]).unwrap();
        // the directed 4-cycle has exactly its four rotations
        assert_eq!(found.len(), 4);
        for f in &found {
            for a in af.attacks() {
                assert!(af.has_attack(&f[&a.source], &f[&a.target]));
            }
        }
    }
}
