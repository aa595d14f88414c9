//! Functional-dependency algebra: attribute closure, superkeys, candidate
//! keys, prime attributes and syntactic projection.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{AttributeName, AttributeSet, FunctionalDependency, RelationSchema};

/// Default ceiling on relation width for candidate-key search.
pub const DEFAULT_KEY_CAP: usize = 20;

/// Hard ceiling imposed by the bitmask representation.
pub const MAX_KEY_CAP: usize = 63;

/// Attribute closure of `start` under `fds`.
///
/// Linear in the total size of `fds`: each dependency keeps a count of
/// determinant attributes not yet derived and fires when it reaches zero.
pub fn closure(start: &AttributeSet, fds: &[FunctionalDependency]) -> AttributeSet {
    let mut missing: Vec<usize> = fds.iter().map(|fd| fd.determinant().len()).collect();
    let mut waiting: HashMap<&AttributeName, Vec<usize>> = HashMap::new();
    for (i, fd) in fds.iter().enumerate() {
        for attr in fd.determinant() {
            waiting.entry(attr).or_default().push(i);
        }
    }

    let mut result = start.clone();
    let mut queue: Vec<AttributeName> = start.iter().cloned().collect();

    let fire = |i: usize, result: &mut AttributeSet, queue: &mut Vec<AttributeName>| {
        for dep in fds[i].dependents() {
            if result.insert(dep.clone()) {
                queue.push(dep.clone());
            }
        }
    };

    for i in 0..fds.len() {
        if missing[i] == 0 {
            fire(i, &mut result, &mut queue);
        }
    }
    while let Some(attr) = queue.pop() {
        let Some(ids) = waiting.get(&attr) else { continue };
        for &i in ids {
            missing[i] -= 1;
            if missing[i] == 0 {
                fire(i, &mut result, &mut queue);
            }
        }
    }
    result
}

/// `fds` must already be projected onto `relation`.
pub fn is_superkey(candidate: &AttributeSet, relation: &RelationSchema, fds: &[FunctionalDependency]) -> Result<bool> {
    let attrs = relation.attribute_set();
    if let Some(foreign) = candidate.iter().find(|a| !attrs.contains(a)) {
        return Err(Error::ForeignAttribute {
            relation: relation.name().to_string(),
            attribute: foreign.to_string(),
        });
    }
    Ok(closure(candidate, fds).is_superset(&attrs))
}

/// Keeps, in order, the dependencies whose attributes all lie in `attrs`.
pub fn project_fds(fds: &[FunctionalDependency], attrs: &AttributeSet) -> Vec<FunctionalDependency> {
    fds.iter()
        .filter(|fd| fd.determinant().is_subset(attrs) && fd.dependents().is_subset(attrs))
        .cloned()
        .collect()
}

/// Minimal superkeys, ordered by size then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CandidateKeySet {
    keys: Vec<AttributeSet>,
}

impl CandidateKeySet {
    pub fn keys(&self) -> &[AttributeSet] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, key: &AttributeSet) -> bool {
        self.keys.contains(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AttributeSet> + '_ {
        self.keys.iter()
    }

    pub fn prime_attributes(&self) -> AttributeSet {
        self.keys.iter().fold(AttributeSet::new(), |acc, k| acc.union(k))
    }
}

/// Orders attribute sets by size, then by their sorted member lists.
pub fn key_order(a: &AttributeSet, b: &AttributeSet) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().cmp(b.iter()))
}

/// Relation attributes and FDs mapped onto bit positions.
struct Indexed {
    names: Vec<AttributeName>,
    fds: Vec<(u64, u64)>,
}

impl Indexed {
    fn new(attrs: &AttributeSet, fds: &[FunctionalDependency]) -> Self {
        let names: Vec<AttributeName> = attrs.iter().cloned().collect();
        let bit = |a: &AttributeName| names.binary_search(a).map(|i| 1u64 << i).unwrap_or(0);
        let mask = |set: &AttributeSet| set.iter().fold(0u64, |m, a| m | bit(a));
        let fds = fds
            .iter()
            .map(|fd| (mask(fd.determinant()), mask(fd.dependents())))
            .collect();
        Indexed { names, fds }
    }

    fn closure(&self, mut set: u64) -> u64 {
        loop {
            let before = set;
            for &(lhs, rhs) in &self.fds {
                if lhs & set == lhs {
                    set |= rhs;
                }
            }
            if set == before {
                return set;
            }
        }
    }

    fn to_set(&self, mask: u64) -> AttributeSet {
        self.names
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    }
}

/// Next larger integer with the same popcount.
fn next_combination(x: u64) -> u64 {
    let smallest = x & x.wrapping_neg();
    let ripple = x + smallest;
    let ones = ((x ^ ripple) >> 2) / smallest;
    ripple | ones
}

/// Enumerates candidate keys level by level, skipping supersets of keys
/// already found. Fails with [`Error::Capacity`] past `cap` attributes.
pub fn candidate_keys(relation: &RelationSchema, fds: &[FunctionalDependency], cap: usize) -> Result<CandidateKeySet> {
    let attrs = relation.attribute_set();
    let n = attrs.len();
    let cap = cap.min(MAX_KEY_CAP);
    if n > cap {
        return Err(Error::Capacity {
            relation: relation.name().to_string(),
            attributes: n,
            cap,
        });
    }

    let projected = project_fds(fds, &attrs);
    let index = Indexed::new(&attrs, &projected);
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };

    let mut found: Vec<u64> = Vec::new();
    for size in 0..=n {
        let mut mask: u64 = if size == 0 { 0 } else { (1u64 << size) - 1 };
        loop {
            if !found.iter().any(|k| k & mask == *k) && index.closure(mask) == full {
                found.push(mask);
            }
            if size == 0 || size == n {
                break;
            }
            mask = next_combination(mask);
            if mask > full {
                break;
            }
        }
    }

    let mut keys: Vec<AttributeSet> = found.into_iter().map(|m| index.to_set(m)).collect();
    keys.sort_by(key_order);
    Ok(CandidateKeySet { keys })
}

pub fn prime_attributes(relation: &RelationSchema, fds: &[FunctionalDependency], cap: usize) -> Result<AttributeSet> {
    Ok(candidate_keys(relation, fds, cap)?.prime_attributes())
}
