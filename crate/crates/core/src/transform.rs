//! Step-wise decomposition towards BCNF.
//!
//! Each step takes the first preventing dependency of a relation (in schema
//! FD order), gathers every other preventing dependency with the same
//! determinant, and moves determinant plus dependents into a new relation
//! keyed by that determinant. The source keeps its key and loses the moved
//! dependents.

use std::collections::BTreeMap;

use crate::classify::{classify_nf_with_cap, partition_preventing, ClassificationMode};
use crate::completeness::{schema_nc_with_cap, SchemaNc};
use crate::dsl::Diagnostic;
use crate::error::{Error, Result};
use crate::fd::{project_fds, DEFAULT_KEY_CAP};
use crate::model::{is_identifier, AttributeSet, AttributeSpec, NormalForm, RelationSchema, Schema};

/// Caller-chosen relation names, keyed by the label of the dependency that
/// leads a split.
///
/// Text form, one entry per line:
///
/// ```text
/// # lead FD = new relation [, renamed source]
/// FD6 = Property, StaffInspection
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitNames {
    entries: BTreeMap<String, (String, Option<String>)>,
}

impl SplitNames {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, lead_fd: impl Into<String>, new_relation: impl Into<String>, reduced: Option<String>) {
        self.entries.insert(lead_fd.into(), (new_relation.into(), reduced));
    }

    pub fn get(&self, lead_fd: &str) -> Option<(&str, Option<&str>)> {
        self.entries
            .get(lead_fd)
            .map(|(new, reduced)| (new.as_str(), reduced.as_deref()))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(text: &str) -> std::result::Result<Self, Vec<Diagnostic>> {
        let mut names = SplitNames::new();
        let mut diagnostics = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let column_of = |needle: &str| raw.find(needle).map_or(1, |c| c + 1);
            let Some((label, rest)) = line.split_once('=') else {
                diagnostics.push(Diagnostic::error(line_no, column_of(line.trim()), "expected `FD = Relation[, Relation]`"));
                continue;
            };
            let label = label.trim();
            let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
            if label.is_empty() || parts.len() > 2 || parts.iter().any(|p| !is_identifier(p)) {
                diagnostics.push(Diagnostic::error(line_no, column_of(rest.trim()), "expected one or two relation names"));
                continue;
            }
            if names.entries.contains_key(label) {
                diagnostics.push(Diagnostic::error(line_no, column_of(label), format!("duplicate entry for `{label}`")));
                continue;
            }
            names.insert(label, parts[0], parts.get(1).map(|s| s.to_string()));
        }
        if diagnostics.is_empty() {
            Ok(names)
        } else {
            Err(diagnostics)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformOptions {
    pub mode: ClassificationMode,
    pub key_cap: usize,
    pub names: SplitNames,
}

impl Default for TransformOptions {
    fn default() -> Self {
        Self {
            mode: ClassificationMode::Paper,
            key_cap: DEFAULT_KEY_CAP,
            names: SplitNames::new(),
        }
    }
}

impl TransformOptions {
    pub fn with_names(names: SplitNames) -> Self {
        Self {
            names,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformStep {
    pub source_relation: String,
    pub moved_fd_labels: Vec<String>,
    /// The shared attributes between `new_relation` and `reduced_relation`.
    pub determinant: AttributeSet,
    pub new_relation: RelationSchema,
    pub reduced_relation: RelationSchema,
    /// Whether the split-off relation is itself in BCNF; when it is not,
    /// a later step decomposes it further.
    pub new_relation_bcnf: bool,
    pub nc_before: SchemaNc,
    pub nc_after: SchemaNc,
    pub schema_after: Schema,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformTrace {
    pub initial: Schema,
    pub steps: Vec<TransformStep>,
    pub final_schema: Schema,
    /// Labels of global dependencies that no longer fit inside any single
    /// relation of the final schema.
    pub lost_dependencies: Vec<String>,
}

impl TransformTrace {
    pub fn initial_nc(&self, opts: &TransformOptions) -> Result<SchemaNc> {
        match self.steps.first() {
            Some(step) => Ok(step.nc_before.clone()),
            None => schema_nc_with_cap(&self.initial, opts.mode, opts.key_cap),
        }
    }
}

fn first_non_atomic(schema: &Schema) -> Option<(&RelationSchema, &AttributeSpec)> {
    schema
        .relations()
        .iter()
        .find_map(|r| r.first_non_atomic().map(|a| (r, a)))
}

fn unique_name(base: String, taken: &[&str]) -> String {
    if !taken.contains(&base.as_str()) {
        return base;
    }
    (2..)
        .map(|i| format!("{base}_{i}"))
        .find(|candidate| !taken.contains(&candidate.as_str()))
        .expect("unbounded suffix search")
}

pub fn decompose_step(schema: &Schema, relation_name: &str, opts: &TransformOptions) -> Result<TransformStep> {
    let (index, source) = schema
        .relations()
        .iter()
        .enumerate()
        .find(|(_, r)| r.name() == relation_name)
        .ok_or_else(|| Error::UnknownRelation(relation_name.to_string()))?;
    if let Some(attr) = source.first_non_atomic() {
        return Err(Error::NonAtomic {
            relation: source.name().to_string(),
            attribute: attr.name.to_string(),
        });
    }

    let partition = partition_preventing(source, schema.fds());
    if partition.preventing.is_empty() {
        return Err(Error::AlreadyBcnf(source.name().to_string()));
    }
    let pk = source.primary_key();
    let movable = |fd: &&crate::model::FunctionalDependency| fd.dependents().is_disjoint(pk);
    let Some(lead) = partition.preventing.iter().find(movable) else {
        let attribute = partition.preventing[0]
            .dependents()
            .intersection(pk)
            .iter()
            .next()
            .map(|a| a.to_string())
            .unwrap_or_default();
        return Err(Error::KeyDependent {
            relation: source.name().to_string(),
            attribute,
        });
    };

    let determinant = lead.determinant().clone();
    let group: Vec<_> = partition
        .preventing
        .iter()
        .filter(movable)
        .filter(|fd| fd.determinant() == &determinant)
        .collect();
    let moved = group
        .iter()
        .fold(AttributeSet::new(), |acc, fd| acc.union(fd.dependents()));
    let new_attrs = determinant.union(&moved);

    let (new_name, reduced_name) = match opts.names.get(lead.label()) {
        Some((new, reduced)) => (new.to_string(), reduced.unwrap_or(source.name()).to_string()),
        None => {
            let taken: Vec<&str> = schema.relations().iter().map(RelationSchema::name).collect();
            let default = format!("{}_{}", source.name(), determinant.join("_"));
            (unique_name(default, &taken), source.name().to_string())
        }
    };

    let new_relation = RelationSchema::new(
        new_name,
        source
            .attributes()
            .iter()
            .filter(|a| new_attrs.contains(&a.name))
            .cloned()
            .collect(),
        determinant.clone(),
    );
    let reduced_relation = RelationSchema::new(
        reduced_name,
        source
            .attributes()
            .iter()
            .filter(|a| !moved.contains(&a.name))
            .cloned()
            .collect(),
        pk.clone(),
    );

    let mut relations = schema.relations().to_vec();
    relations[index] = reduced_relation.clone();
    relations.push(new_relation.clone());
    let schema_after = schema.with_relations(relations);

    let new_relation_bcnf =
        classify_nf_with_cap(&new_relation, schema.fds(), opts.mode, opts.key_cap)? == NormalForm::Bcnf;

    Ok(TransformStep {
        source_relation: source.name().to_string(),
        moved_fd_labels: group.iter().map(|fd| fd.label().to_string()).collect(),
        determinant,
        new_relation,
        reduced_relation,
        new_relation_bcnf,
        nc_before: schema_nc_with_cap(schema, opts.mode, opts.key_cap)?,
        nc_after: schema_nc_with_cap(&schema_after, opts.mode, opts.key_cap)?,
        schema_after,
    })
}

/// Decomposes the first relation that still has a preventing dependency,
/// repeatedly, until none is left.
pub fn normalize_to_bcnf(schema: &Schema, opts: &TransformOptions) -> Result<TransformTrace> {
    if let Some((relation, attr)) = first_non_atomic(schema) {
        return Err(Error::NonAtomic {
            relation: relation.name().to_string(),
            attribute: attr.name.to_string(),
        });
    }

    let mut current = schema.clone();
    let mut steps = Vec::new();
    while let Some(target) = current
        .relations()
        .iter()
        .find(|r| !partition_preventing(r, current.fds()).preventing.is_empty())
    {
        let step = decompose_step(&current, &target.name().to_string(), opts)?;
        current = step.schema_after.clone();
        steps.push(step);
    }

    let lost_dependencies = current
        .fds()
        .iter()
        .filter(|fd| {
            !current
                .relations()
                .iter()
                .any(|r| !project_fds(std::slice::from_ref(*fd), &r.attribute_set()).is_empty())
        })
        .map(|fd| fd.label().to_string())
        .collect();

    Ok(TransformTrace {
        initial: schema.clone(),
        steps,
        final_schema: current,
        lost_dependencies,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::FunctionalDependency;

    #[test]
    fn names_file_parses() {
        let names = SplitNames::parse("# comment\nFD6 = Property, StaffInspection\n\nFD7=Staff # trailing\n").unwrap();
        assert_eq!(names.get("FD6"), Some(("Property", Some("StaffInspection"))));
        assert_eq!(names.get("FD7"), Some(("Staff", None)));
        assert_eq!(names.get("FD8"), None);
    }

    #[test]
    fn names_file_reports_positions() {
        let errs = SplitNames::parse("FD6 = Property\nbogus\nFD7 = a b\nFD6 = X\n").unwrap_err();
        let lines: Vec<usize> = errs.iter().map(|d| d.line).collect();
        assert_eq!(lines, vec![2, 3, 4]);
        assert_eq!(errs[1].column, 7);
    }

    #[test]
    fn unknown_relation() {
        let err = decompose_step(&fixtures::case_study(), "Nope", &TransformOptions::default()).unwrap_err();
        assert_eq!(err, Error::UnknownRelation("Nope".into()));
    }

    #[test]
    fn already_bcnf() {
        let err = decompose_step(&fixtures::case_study_first(), "Property", &TransformOptions::default()).unwrap_err();
        assert_eq!(err, Error::AlreadyBcnf("Property".into()));
    }

    #[test]
    fn default_names_join_the_determinant() {
        let step = decompose_step(&fixtures::case_study(), "StaffPropertyInspection", &TransformOptions::default()).unwrap();
        assert_eq!(step.new_relation.name(), "StaffPropertyInspection_propertyNo");
        assert_eq!(step.reduced_relation.name(), "StaffPropertyInspection");
    }

    #[test]
    fn default_names_avoid_collisions() {
        assert_eq!(unique_name("R_a".into(), &["R", "R_a"]), "R_a_2");
        assert_eq!(unique_name("R_a".into(), &["R", "R_a", "R_a_2"]), "R_a_3");
        assert_eq!(unique_name("R_b".into(), &["R", "R_a"]), "R_b");
    }

    #[test]
    fn groups_preventing_fds_with_the_same_determinant() {
        let schema = Schema::new(
            "s",
            vec![RelationSchema::of("R", &["a", "b", "c", "d"], &["a"])],
            vec![
                FunctionalDependency::of("F1", &["a"], &["b", "c", "d"]),
                FunctionalDependency::of("F2", &["b"], &["c"]),
                FunctionalDependency::of("F3", &["c"], &["d"]),
                FunctionalDependency::of("F4", &["b"], &["d"]),
            ],
        );
        let step = decompose_step(&schema, "R", &TransformOptions::default()).unwrap();
        assert_eq!(step.moved_fd_labels, vec!["F2", "F4"]);
        assert_eq!(step.new_relation.to_string(), "R_b(b, c, d)");
        assert_eq!(step.reduced_relation.to_string(), "R(a, b)");
        // c -> d still violates inside the new relation.
        assert!(!step.new_relation_bcnf);

        let trace = normalize_to_bcnf(&schema, &TransformOptions::default()).unwrap();
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.steps[1].source_relation, "R_b");
    }

    #[test]
    fn refuses_to_move_key_attributes() {
        let schema = Schema::new(
            "s",
            vec![RelationSchema::of("R", &["a", "b", "c"], &["a", "b"])],
            vec![
                FunctionalDependency::of("F1", &["a", "b"], &["c"]),
                FunctionalDependency::of("F2", &["c"], &["b"]),
            ],
        );
        let err = decompose_step(&schema, "R", &TransformOptions::default()).unwrap_err();
        assert_eq!(
            err,
            Error::KeyDependent {
                relation: "R".into(),
                attribute: "b".into()
            }
        );
    }

    #[test]
    fn refuses_non_atomic_schemas() {
        let schema = Schema::new(
            "s",
            vec![RelationSchema::new(
                "R",
                vec![AttributeSpec::atomic("a"), AttributeSpec::non_atomic("b")],
                ["a"].into_iter().collect(),
            )],
            vec![],
        );
        assert!(matches!(
            normalize_to_bcnf(&schema, &TransformOptions::default()),
            Err(Error::NonAtomic { .. })
        ));
    }

    #[test]
    fn all_bcnf_schema_is_a_fixpoint() {
        let schema = Schema::new("s", vec![fixtures::property(), fixtures::staff()], fixtures::case_study_fds()[5..7].to_vec());
        let trace = normalize_to_bcnf(&schema, &TransformOptions::default()).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(trace.final_schema, schema);
    }

    #[test]
    fn reports_lost_dependencies() {
        let trace = normalize_to_bcnf(&fixtures::case_study(), &TransformOptions::with_names(fixtures::case_study_names())).unwrap();
        // pAddress, sName and finally carReg leave the wide relation.
        assert_eq!(
            trace.lost_dependencies,
            vec!["FD4", "FD5", "FD9", "FD10", "FD11", "FD12", "FD13", "FD15"]
        );
    }
}
