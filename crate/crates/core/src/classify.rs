//! Normal-form classification and the preventing/non-preventing split.
//!
//! Levels are checked cumulatively: atomicity, then partial dependencies,
//! then transitive dependencies, then superkey determinants. The first check
//! that fails fixes the level.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::Result;
use crate::fd::{self, closure, project_fds};
use crate::model::{AttributeSet, FunctionalDependency, NormalForm, RelationSchema};

/// Which definitions of partial and transitive dependency to use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassificationMode {
    /// Measured against the designated primary key.
    #[default]
    Paper,
    /// Measured against every candidate key and prime attributes.
    Strict,
}

impl ClassificationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassificationMode::Paper => "paper",
            ClassificationMode::Strict => "strict",
        }
    }
}

impl fmt::Display for ClassificationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassificationMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(ClassificationMode::Paper),
            "strict" => Ok(ClassificationMode::Strict),
            other => Err(format!("unknown mode `{other}` (expected paper or strict)")),
        }
    }
}

/// Classifies with the default key-search cap.
pub fn classify_nf(relation: &RelationSchema, fds: &[FunctionalDependency], mode: ClassificationMode) -> Result<NormalForm> {
    classify_nf_with_cap(relation, fds, mode, fd::DEFAULT_KEY_CAP)
}

/// `key_cap` only matters in strict mode, which enumerates candidate keys.
pub fn classify_nf_with_cap(
    relation: &RelationSchema,
    fds: &[FunctionalDependency],
    mode: ClassificationMode,
    key_cap: usize,
) -> Result<NormalForm> {
    if relation.first_non_atomic().is_some() {
        return Ok(NormalForm::Unnormalized);
    }
    let attrs = relation.attribute_set();
    let fds = project_fds(fds, &attrs);
    let superkey = |x: &AttributeSet| closure(x, &fds).is_superset(&attrs);

    let basis = match mode {
        ClassificationMode::Paper => KeyBasis::Primary(relation.primary_key()),
        ClassificationMode::Strict => {
            let keys = fd::candidate_keys(relation, &fds, key_cap)?;
            let prime = keys.prime_attributes();
            KeyBasis::Candidates { keys, prime }
        }
    };

    let partial = |fd: &FunctionalDependency| {
        let x = fd.determinant();
        match &basis {
            KeyBasis::Primary(pk) => {
                !x.is_empty() && x.is_subset(pk) && x.len() < pk.len() && !fd.dependents().is_subset(pk) && !superkey(x)
            }
            KeyBasis::Candidates { keys, prime } => {
                keys.iter().any(|k| x.is_subset(k) && x.len() < k.len()) && !fd.dependents().is_subset(prime)
            }
        }
    };
    let transitive = |fd: &FunctionalDependency| {
        let x = fd.determinant();
        match &basis {
            KeyBasis::Primary(pk) => x.is_disjoint(pk) && !fd.dependents().is_subset(pk) && !superkey(x),
            KeyBasis::Candidates { prime, .. } => !superkey(x) && !fd.dependents().is_subset(prime),
        }
    };

    if fds.iter().any(|fd| partial(fd)) {
        return Ok(NormalForm::First);
    }
    if fds.iter().any(|fd| transitive(fd)) {
        return Ok(NormalForm::Second);
    }
    if fds.iter().any(|fd| !superkey(fd.determinant())) {
        return Ok(NormalForm::Third);
    }
    Ok(NormalForm::Bcnf)
}

enum KeyBasis<'a> {
    Primary(&'a AttributeSet),
    Candidates { keys: fd::CandidateKeySet, prime: AttributeSet },
}

/// A relation's projected dependencies split by whether their determinant
/// is a superkey.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FdPartition {
    pub preventing: Vec<FunctionalDependency>,
    pub non_preventing: Vec<FunctionalDependency>,
    /// Attributes of the non-preventing dependencies (c).
    pub completeness_attrs: AttributeSet,
    /// Attributes of the preventing dependencies (p).
    pub preventing_attrs: AttributeSet,
    /// Width of the relation (n).
    pub total_attrs: usize,
}

impl FdPartition {
    pub fn preventing_labels(&self) -> Vec<&str> {
        self.preventing.iter().map(FunctionalDependency::label).collect()
    }

    pub fn non_preventing_labels(&self) -> Vec<&str> {
        self.non_preventing.iter().map(FunctionalDependency::label).collect()
    }

    pub fn completeness_count(&self) -> usize {
        self.completeness_attrs.len()
    }

    pub fn preventing_count(&self) -> usize {
        self.preventing_attrs.len()
    }
}

pub fn partition_preventing(relation: &RelationSchema, fds: &[FunctionalDependency]) -> FdPartition {
    let attrs = relation.attribute_set();
    let projected = project_fds(fds, &attrs);
    let (non_preventing, preventing): (Vec<_>, Vec<_>) = projected
        .iter()
        .cloned()
        .partition(|fd| closure(fd.determinant(), &projected).is_superset(&attrs));
    let union = |list: &[FunctionalDependency]| {
        list.iter().fold(AttributeSet::new(), |acc, fd| acc.union(&fd.attributes()))
    };
    FdPartition {
        completeness_attrs: union(&non_preventing),
        preventing_attrs: union(&preventing),
        preventing,
        non_preventing,
        total_attrs: attrs.len(),
    }
}
