//! Small hand-built frameworks used as golden inputs and as the audit's
//! always-included counterexample fixtures.

use crate::af::{ArgumentationFramework, Attack};

fn build(args: &[&str], attacks: &[(&str, &str)]) -> ArgumentationFramework {
    ArgumentationFramework::new(args.iter().copied(), attacks.iter().copied())
        .expect("fixture frameworks are well formed")
}

/// Eleven arguments `a1..a11` with twelve attacks, including the mutual
/// attacks a1↔a2 and a9↔a10 and the isolated a11.
pub fn running_example() -> ArgumentationFramework {
    build(
        &["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8", "a9", "a10", "a11"],
        &[
            ("a1", "a2"),
            ("a2", "a1"),
            ("a1", "a3"),
            ("a2", "a3"),
            ("a3", "a4"),
            ("a5", "a4"),
            ("a6", "a5"),
            ("a8", "a4"),
            ("a8", "a7"),
            ("a9", "a8"),
            ("a9", "a10"),
            ("a10", "a9"),
        ],
    )
}

/// `(without, with)`: a1 attacks a2 and a3; the second framework adds
/// a2→a3, which raises a3's counting degree.
pub fn counting_pair() -> (ArgumentationFramework, ArgumentationFramework) {
    let without = build(&["a1", "a2", "a3"], &[("a1", "a2"), ("a1", "a3")]);
    let with = build(&["a1", "a2", "a3"], &[("a1", "a2"), ("a1", "a3"), ("a2", "a3")]);
    (without, with)
}

/// A single self-attacking argument `a`.
pub fn self_attack() -> ArgumentationFramework {
    build(&["a"], &[("a", "a")])
}

/// `x → a ← y → b ← z`: swapping a/b and x/z is an automorphism.
pub fn mirrored_targets() -> ArgumentationFramework {
    build(
        &["a", "b", "x", "y", "z"],
        &[("x", "a"), ("y", "a"), ("y", "b"), ("z", "b")],
    )
}

/// Two disjoint frameworks whose union doubles the maximum in-degree, so
/// counting degrees in the first one change.
pub fn disjoint_counting_pair() -> (ArgumentationFramework, ArgumentationFramework) {
    (
        build(&["a", "b"], &[("b", "a")]),
        build(&["c", "d", "e"], &[("c", "d"), ("e", "d")]),
    )
}

/// Adding `e → d` raises the maximum in-degree from 1 to 2 and so moves
/// the counting degree of `a`, which `d` cannot reach.
pub fn counting_direction_addition() -> (ArgumentationFramework, Attack) {
    (
        build(&["a", "b", "c", "d", "e"], &[("b", "a"), ("c", "d")]),
        Attack::new("e", "d"),
    )
}
