//! Normal-form classification and normalization-completeness (NC) scoring
//! for relational schemas.
//!
//! A schema is a set of relations plus a global, labeled list of functional
//! dependencies. For each relation the crate determines its normal form
//! (UNF through BCNF), splits its dependencies into those whose determinant
//! is a superkey and those that are not ("preventing"), and scores
//! `NC = N + x` where `x = ((c / n) + (1 - p / n)) / 2` over the attribute
//! counts of the two groups. BCNF relations score exactly 4.
//!
//! ```
//! use normcomp::{fixtures, schema_nc, ClassificationMode};
//!
//! let nc = schema_nc(&fixtures::case_study(), ClassificationMode::Paper).unwrap();
//! assert_eq!(nc.total_display, "1.62");
//! ```

pub mod classify;
pub mod cli;
pub mod completeness;
pub mod dsl;
pub mod error;
pub mod fd;
pub mod fixtures;
pub mod model;
pub mod report;
pub mod transform;

pub use classify::{classify_nf, partition_preventing, ClassificationMode, FdPartition};
pub use completeness::{fuzzy_membership, relation_nc, schema_nc, FuzzyMembership, Rational, RelationNc, SchemaNc};
pub use dsl::{emit_schema, parse_schema, Diagnostic, SourceDocument};
pub use error::{Error, Result};
pub use fd::{candidate_keys, closure, is_superkey, prime_attributes, project_fds, CandidateKeySet};
pub use model::{
    validate_schema, AttributeName, AttributeSet, AttributeSpec, FunctionalDependency, NormalForm, RelationSchema,
    Schema, ValidationReport,
};
pub use report::{emit_report, Format, Report};
pub use transform::{decompose_step, normalize_to_bcnf, SplitNames, TransformOptions, TransformStep, TransformTrace};
