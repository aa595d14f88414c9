//! Independent oracles and a seeded schema generator shared by the
//! integration suites.

#![allow(dead_code)]

use std::collections::BTreeSet;

use normcomp::{AttributeSet, FunctionalDependency, RelationSchema, Schema};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sweeps every dependency until a full pass adds nothing.
pub fn naive_closure(start: &BTreeSet<String>, fds: &[(BTreeSet<String>, BTreeSet<String>)]) -> BTreeSet<String> {
    let mut result = start.clone();
    loop {
        let mut changed = false;
        for (lhs, rhs) in fds {
            if lhs.is_subset(&result) {
                for a in rhs {
                    changed |= result.insert(a.clone());
                }
            }
        }
        if !changed {
            return result;
        }
    }
}

pub fn plain(set: &AttributeSet) -> BTreeSet<String> {
    set.iter().map(|a| a.as_str().to_string()).collect()
}

pub fn plain_fds(fds: &[FunctionalDependency]) -> Vec<(BTreeSet<String>, BTreeSet<String>)> {
    fds.iter()
        .map(|fd| (plain(fd.determinant()), plain(fd.dependents())))
        .collect()
}

/// Every subset of `attrs`, as sorted vectors.
pub fn all_subsets(attrs: &[String]) -> Vec<BTreeSet<String>> {
    (0u32..(1 << attrs.len()))
        .map(|mask| {
            attrs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect()
}

/// Minimal superkeys by exhaustive enumeration: keep every superkey none of
/// whose proper subsets is a superkey.
pub fn brute_force_keys(attrs: &[String], fds: &[(BTreeSet<String>, BTreeSet<String>)]) -> BTreeSet<BTreeSet<String>> {
    let full: BTreeSet<String> = attrs.iter().cloned().collect();
    let superkeys: Vec<BTreeSet<String>> = all_subsets(attrs)
        .into_iter()
        .filter(|s| naive_closure(s, fds).is_superset(&full))
        .collect();
    superkeys
        .iter()
        .filter(|s| !superkeys.iter().any(|t| t.len() < s.len() && t.is_subset(s)))
        .cloned()
        .collect()
}

/// Syntactic projection, restated.
pub fn naive_project(fds: &[(BTreeSet<String>, BTreeSet<String>)], attrs: &BTreeSet<String>) -> Vec<(BTreeSet<String>, BTreeSet<String>)> {
    fds.iter()
        .filter(|(l, r)| l.is_subset(attrs) && r.is_subset(attrs))
        .cloned()
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random single-relation schema with `2..=max_attrs` attributes and at
/// most `max_fds` singleton, non-trivial dependencies. The primary key is
/// the first candidate key found by brute force, so it is always minimal.
pub fn random_schema(rng: &mut ChaCha8Rng, max_attrs: usize, max_fds: usize) -> Schema {
    let width = rng.gen_range(2..=max_attrs);
    let attrs: Vec<String> = (0..width).map(|i| format!("a{i}")).collect();
    let fd_count = rng.gen_range(0..=max_fds);
    let mut fds = Vec::new();
    for i in 0..fd_count {
        let lhs_size = rng.gen_range(1..=width.saturating_sub(1).clamp(1, 3));
        let lhs: Vec<&String> = attrs.choose_multiple(rng, lhs_size).collect();
        let rest: Vec<&String> = attrs.iter().filter(|a| !lhs.contains(a)).collect();
        let Some(rhs) = rest.choose(rng) else { continue };
        let lhs: Vec<&str> = lhs.iter().map(|s| s.as_str()).collect();
        fds.push(FunctionalDependency::of(&format!("F{}", i + 1), &lhs, &[rhs.as_str()]));
    }
    let keys = brute_force_keys(&attrs, &plain_fds(&fds));
    let mut ordered: Vec<&BTreeSet<String>> = keys.iter().collect();
    ordered.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let pk: Vec<&str> = ordered[0].iter().map(String::as_str).collect();
    let names: Vec<&str> = attrs.iter().map(String::as_str).collect();
    Schema::new("generated", vec![RelationSchema::of("R", &names, &pk)], fds)
}

/// `count` schemas from a fixed seed.
pub fn corpus(seed: u64, count: usize, max_attrs: usize, max_fds: usize) -> Vec<Schema> {
    let mut rng = rng(seed);
    (0..count).map(|_| random_schema(&mut rng, max_attrs, max_fds)).collect()
}
