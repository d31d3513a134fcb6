//! The table below names every user-facing library operation and the
//! subcommand that exposes it.  The test walks the real clap tree, so a
//! renamed or dropped subcommand fails here, as does a leaf subcommand no
//! operation claims.

use std::collections::BTreeSet;

const OPERATIONS: &[(&str, &str)] = &[
    ("series addition", "series add"),
    ("series multiplication", "series mul"),
    ("series inverse", "series inverse"),
    ("series derivative", "series derivative"),
    ("substitution t^r -> z", "series to-z"),
    ("substitution z -> t^r", "series from-z"),
    ("mu_r weight of a series", "series weight"),
    ("root-system listing", "rootsys info"),
    ("Lie bracket", "rootsys bracket"),
    ("parahoric membership", "parahoric check"),
    ("residue condition, projection route", "parahoric check"),
    ("residue condition, pole-order route", "parahoric check"),
    ("weight-zero basis", "parahoric check"),
    ("homogeneous weight", "parahoric check"),
    ("mu_r-invariance of a form", "equiv check"),
    ("gauge to the coarse disc", "equiv to-logahoric"),
    ("lift from the coarse disc", "equiv from-logahoric"),
    ("local type of a coweight", "equiv local-type"),
    ("matrix equivariance", "parab check"),
    ("matrix pushforward", "parab push"),
    ("closed-form residue", "parab residue"),
    ("parabolic residue condition", "parab check"),
    ("matrix pullback", "parab pull"),
    ("connection morphism check", "parab morphism"),
    ("parabolic degree", "degree pardeg"),
    ("line-bundle existence", "degree criterion"),
    ("split-bundle existence criterion", "degree criterion"),
    ("decomposition enumeration", "degree criterion"),
];

fn leaves() -> BTreeSet<String> {
    let tree = orbidisc_cli::command();
    let mut out = BTreeSet::new();
    for group in tree.get_subcommands() {
        let subs: Vec<_> = group.get_subcommands().collect();
        assert!(
            !subs.is_empty(),
            "group '{}' has no subcommands",
            group.get_name()
        );
        for sub in subs {
            out.insert(format!("{} {}", group.get_name(), sub.get_name()));
        }
    }
    out
}

#[test]
fn every_operation_is_reachable() {
    let leaves = leaves();
    for (op, target) in OPERATIONS {
        assert!(
            leaves.contains(*target),
            "operation '{op}' points at missing subcommand '{target}'"
        );
    }
}

#[test]
fn every_subcommand_does_something() {
    let claimed: BTreeSet<&str> = OPERATIONS.iter().map(|(_, t)| *t).collect();
    for leaf in leaves() {
        assert!(
            claimed.contains(leaf.as_str()),
            "subcommand '{leaf}' is not claimed by any operation"
        );
    }
}

#[test]
fn the_tree_parses_its_own_help() {
    // clap validates argument definitions lazily; force it
    orbidisc_cli::command().debug_assert();
}
