//! Schema and functional-dependency data model plus structural validation.
//!
//! Every value here is immutable once built. Multi-attribute right-hand sides
//! are split into singleton dependencies when a [`Schema`] is constructed, so
//! downstream code only ever sees `X -> A` shaped dependencies.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::fd;

/// A case-sensitive attribute identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct AttributeName(String);

impl AttributeName {
    pub fn new(name: impl Into<String>) -> Self {
        Self(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for AttributeName {
    fn from(name: &str) -> Self {
        Self::new(name)
    }
}

impl fmt::Display for AttributeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Dependency labels are identifiers optionally joined by dots (`FD2.a`).
pub fn is_label(s: &str) -> bool {
    s.split('.').all(is_identifier)
}

/// A set of attribute names with sorted iteration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct AttributeSet(BTreeSet<AttributeName>);

impl AttributeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, name: &AttributeName) -> bool {
        self.0.contains(name)
    }

    pub fn insert(&mut self, name: AttributeName) -> bool {
        self.0.insert(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &AttributeName> + '_ {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &AttributeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_superset(&self, other: &AttributeSet) -> bool {
        self.0.is_superset(&other.0)
    }

    pub fn is_disjoint(&self, other: &AttributeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &AttributeSet) -> AttributeSet {
        Self(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &AttributeSet) -> AttributeSet {
        Self(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &AttributeSet) -> AttributeSet {
        Self(self.0.difference(&other.0).cloned().collect())
    }

    /// Attribute names joined by `sep`, in sorted order.
    pub fn join(&self, sep: &str) -> String {
        self.0
            .iter()
            .map(AttributeName::as_str)
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl FromIterator<AttributeName> for AttributeSet {
    fn from_iter<I: IntoIterator<Item = AttributeName>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a str> for AttributeSet {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        Self(iter.into_iter().map(AttributeName::from).collect())
    }
}

impl<'a> IntoIterator for &'a AttributeSet {
    type Item = &'a AttributeName;
    type IntoIter = std::collections::btree_set::Iter<'a, AttributeName>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct AttributeSpec {
    pub name: AttributeName,
    /// `false` marks a composite or multivalued attribute.
    pub atomic: bool,
}

impl AttributeSpec {
    pub fn atomic(name: impl Into<String>) -> Self {
        Self {
            name: AttributeName::new(name),
            atomic: true,
        }
    }

    pub fn non_atomic(name: impl Into<String>) -> Self {
        Self {
            name: AttributeName::new(name),
            atomic: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FunctionalDependency {
    label: String,
    determinant: AttributeSet,
    dependents: AttributeSet,
}

impl FunctionalDependency {
    pub fn new(label: impl Into<String>, determinant: AttributeSet, dependents: AttributeSet) -> Self {
        Self {
            label: label.into(),
            determinant,
            dependents,
        }
    }

    /// Shorthand used heavily in tests: `FunctionalDependency::of("FD1", &["a", "b"], &["c"])`.
    pub fn of(label: &str, determinant: &[&str], dependents: &[&str]) -> Self {
        Self::new(
            label,
            determinant.iter().copied().collect(),
            dependents.iter().copied().collect(),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn determinant(&self) -> &AttributeSet {
        &self.determinant
    }

    pub fn dependents(&self) -> &AttributeSet {
        &self.dependents
    }

    /// Determinant and dependents together.
    pub fn attributes(&self) -> AttributeSet {
        self.determinant.union(&self.dependents)
    }

    pub fn is_trivial(&self) -> bool {
        !self.determinant.is_disjoint(&self.dependents)
    }

    /// Splits into one dependency per dependent attribute. Labels gain a
    /// `.a`, `.b`, ... suffix in sorted dependent order; a dependency that
    /// already has at most one dependent is returned unchanged.
    pub fn split(&self) -> Vec<FunctionalDependency> {
        if self.dependents.len() <= 1 {
            return vec![self.clone()];
        }
        self.dependents
            .iter()
            .enumerate()
            .map(|(i, dep)| FunctionalDependency {
                label: format!("{}.{}", self.label, alpha_suffix(i)),
                determinant: self.determinant.clone(),
                dependents: std::iter::once(dep.clone()).collect(),
            })
            .collect()
    }
}

impl fmt::Display for FunctionalDependency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {}",
            self.label,
            self.determinant.join(", "),
            self.dependents.join(", ")
        )
    }
}

/// a, b, ..., z, aa, ab, ...
fn alpha_suffix(mut i: usize) -> String {
    let mut out = Vec::new();
    loop {
        out.push(b'a' + (i % 26) as u8);
        if i < 26 {
            break;
        }
        i = i / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RelationSchema {
    name: String,
    attributes: Vec<AttributeSpec>,
    primary_key: AttributeSet,
}

impl RelationSchema {
    pub fn new(name: impl Into<String>, attributes: Vec<AttributeSpec>, primary_key: AttributeSet) -> Self {
        Self {
            name: name.into(),
            attributes,
            primary_key,
        }
    }

    /// All-atomic relation from plain names.
    pub fn of(name: &str, attributes: &[&str], primary_key: &[&str]) -> Self {
        Self::new(
            name,
            attributes.iter().map(|a| AttributeSpec::atomic(*a)).collect(),
            primary_key.iter().copied().collect(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn attributes(&self) -> &[AttributeSpec] {
        &self.attributes
    }

    pub fn primary_key(&self) -> &AttributeSet {
        &self.primary_key
    }

    pub fn attribute_set(&self) -> AttributeSet {
        self.attributes.iter().map(|a| a.name.clone()).collect()
    }

    pub fn has_attribute(&self, name: &AttributeName) -> bool {
        self.attributes.iter().any(|a| &a.name == name)
    }

    pub fn first_non_atomic(&self) -> Option<&AttributeSpec> {
        self.attributes.iter().find(|a| !a.atomic)
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..self.clone()
        }
    }
}

impl fmt::Display for RelationSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let attrs: Vec<&str> = self.attributes.iter().map(|a| a.name.as_str()).collect();
        write!(f, "{}({})", self.name, attrs.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Schema {
    name: String,
    relations: Vec<RelationSchema>,
    fds: Vec<FunctionalDependency>,
}

impl Schema {
    /// Builds a schema, splitting multi-dependent FDs into singletons.
    pub fn new(name: impl Into<String>, relations: Vec<RelationSchema>, fds: Vec<FunctionalDependency>) -> Self {
        Self {
            name: name.into(),
            relations,
            fds: fds.iter().flat_map(FunctionalDependency::split).collect(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn relations(&self) -> &[RelationSchema] {
        &self.relations
    }

    pub fn fds(&self) -> &[FunctionalDependency] {
        &self.fds
    }

    pub fn relation(&self, name: &str) -> Option<&RelationSchema> {
        self.relations.iter().find(|r| r.name == name)
    }

    /// Same name and FDs, different relations.
    pub fn with_relations(&self, relations: Vec<RelationSchema>) -> Schema {
        Schema {
            name: self.name.clone(),
            relations,
            fds: self.fds.clone(),
        }
    }

    /// Union of every relation's attributes.
    pub fn attribute_set(&self) -> AttributeSet {
        self.relations
            .iter()
            .flat_map(|r| r.attributes.iter().map(|a| a.name.clone()))
            .collect()
    }
}

/// The five normal-form levels, ordered. [`NormalForm::level`] is the N of
/// the completeness score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NormalForm {
    #[serde(rename = "UNF")]
    Unnormalized = 0,
    #[serde(rename = "1NF")]
    First = 1,
    #[serde(rename = "2NF")]
    Second = 2,
    #[serde(rename = "3NF")]
    Third = 3,
    #[serde(rename = "BCNF")]
    Bcnf = 4,
}

impl NormalForm {
    pub const ALL: [NormalForm; 5] = [
        NormalForm::Unnormalized,
        NormalForm::First,
        NormalForm::Second,
        NormalForm::Third,
        NormalForm::Bcnf,
    ];

    pub fn level(self) -> u8 {
        self as u8
    }

    pub fn short_name(self) -> &'static str {
        match self {
            NormalForm::Unnormalized => "UNF",
            NormalForm::First => "1NF",
            NormalForm::Second => "2NF",
            NormalForm::Third => "3NF",
            NormalForm::Bcnf => "BCNF",
        }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    InvalidName,
    EmptyRelation,
    DuplicateAttribute,
    EmptyPrimaryKey,
    UnknownKeyAttribute,
    DuplicateRelation,
    EmptyDeterminant,
    EmptyDependents,
    TrivialFd,
    DuplicateFdLabel,
    UnknownFdAttribute,
    PrimaryKeyNotSuperkey,
    PrimaryKeyNotMinimal,
}

impl Rule {
    pub fn severity(self) -> Severity {
        match self {
            Rule::PrimaryKeyNotSuperkey | Rule::PrimaryKeyNotMinimal => Severity::Warning,
            _ => Severity::Error,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Rule::InvalidName => "invalid name",
            Rule::EmptyRelation => "empty relation",
            Rule::DuplicateAttribute => "duplicate attribute",
            Rule::EmptyPrimaryKey => "empty primary key",
            Rule::UnknownKeyAttribute => "primary key attribute not in relation",
            Rule::DuplicateRelation => "duplicate relation",
            Rule::EmptyDeterminant => "empty determinant",
            Rule::EmptyDependents => "empty dependent list",
            Rule::TrivialFd => "trivial FD",
            Rule::DuplicateFdLabel => "duplicate FD label",
            Rule::UnknownFdAttribute => "FD attribute not in any relation",
            Rule::PrimaryKeyNotSuperkey => "primary key is not a superkey",
            Rule::PrimaryKeyNotMinimal => "primary key is not minimal",
        }
    }
}

/// One broken rule, naming the element it was found on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Violation {
    pub severity: Severity,
    pub rule: Rule,
    /// `relation R`, `attribute R.a`, `fd FD6`, ...
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.severity, self.subject, self.rule.description())?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Sorted, deduplicated.
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    /// No error-severity violations. Warnings do not fail validation.
    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> + '_ {
        self.violations.iter().filter(|v| v.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Violation> + '_ {
        self.violations.iter().filter(|v| v.severity == Severity::Warning)
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

struct Collector(BTreeSet<Violation>);

impl Collector {
    fn push(&mut self, rule: Rule, subject: String, detail: impl Into<String>) {
        self.0.insert(Violation {
            severity: rule.severity(),
            rule,
            subject,
            detail: detail.into(),
        });
    }
}

pub fn validate_schema(schema: &Schema) -> ValidationReport {
    let mut out = Collector(BTreeSet::new());

    if !is_identifier(&schema.name) {
        out.push(Rule::InvalidName, format!("schema {}", schema.name), "");
    }

    let mut relation_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for relation in &schema.relations {
        *relation_counts.entry(relation.name.as_str()).or_default() += 1;
    }
    for (name, count) in &relation_counts {
        if *count > 1 {
            out.push(Rule::DuplicateRelation, format!("relation {name}"), format!("declared {count} times"));
        }
    }

    for relation in &schema.relations {
        validate_relation(relation, schema.fds(), &mut out);
    }

    let known = schema.attribute_set();
    let mut label_counts: BTreeMap<&str, usize> = BTreeMap::new();
    for fd in &schema.fds {
        *label_counts.entry(fd.label.as_str()).or_default() += 1;
        let subject = format!("fd {}", fd.label);
        if !is_label(&fd.label) {
            out.push(Rule::InvalidName, subject.clone(), "");
        }
        if fd.determinant.is_empty() {
            out.push(Rule::EmptyDeterminant, subject.clone(), "");
        }
        if fd.dependents.is_empty() {
            out.push(Rule::EmptyDependents, subject.clone(), "");
        }
        if fd.is_trivial() {
            let overlap = fd.determinant.intersection(&fd.dependents);
            out.push(Rule::TrivialFd, subject.clone(), format!("{} on both sides", overlap.join(", ")));
        }
        for attr in fd.attributes().iter().filter(|a| !known.contains(a)) {
            out.push(Rule::UnknownFdAttribute, subject.clone(), attr.as_str());
        }
    }
    for (label, count) in &label_counts {
        if *count > 1 {
            out.push(Rule::DuplicateFdLabel, format!("fd {label}"), format!("declared {count} times"));
        }
    }

    ValidationReport {
        violations: out.0.into_iter().collect(),
    }
}

fn validate_relation(relation: &RelationSchema, fds: &[FunctionalDependency], out: &mut Collector) {
    let subject = format!("relation {}", relation.name);
    if !is_identifier(&relation.name) {
        out.push(Rule::InvalidName, subject.clone(), "");
    }
    if relation.attributes.is_empty() {
        out.push(Rule::EmptyRelation, subject.clone(), "");
    }

    let mut seen = BTreeMap::<&AttributeName, usize>::new();
    for attr in &relation.attributes {
        *seen.entry(&attr.name).or_default() += 1;
        if !is_identifier(attr.name.as_str()) {
            out.push(
                Rule::InvalidName,
                format!("attribute {}.{}", relation.name, attr.name),
                "",
            );
        }
    }
    for (name, count) in seen {
        if count > 1 {
            out.push(
                Rule::DuplicateAttribute,
                format!("attribute {}.{}", relation.name, name),
                format!("declared {count} times"),
            );
        }
    }

    let attrs = relation.attribute_set();
    if relation.primary_key.is_empty() {
        out.push(Rule::EmptyPrimaryKey, subject.clone(), "");
        return;
    }
    let unknown = relation.primary_key.difference(&attrs);
    if !unknown.is_empty() {
        out.push(Rule::UnknownKeyAttribute, subject, unknown.join(", "));
        return;
    }

    let projected = fd::project_fds(fds, &attrs);
    if !fd::closure(&relation.primary_key, &projected).is_superset(&attrs) {
        out.push(
            Rule::PrimaryKeyNotSuperkey,
            subject,
            format!("key {} does not determine every attribute", relation.primary_key),
        );
    } else if let Some(attr) = relation.primary_key.iter().find(|a| {
        let smaller: AttributeSet = relation.primary_key.iter().filter(|b| b != a).cloned().collect();
        !smaller.is_empty() && fd::closure(&smaller, &projected).is_superset(&attrs)
    }) {
        out.push(
            Rule::PrimaryKeyNotMinimal,
            subject,
            format!("key {} stays a superkey without {}", relation.primary_key, attr),
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(rel: RelationSchema, fds: Vec<FunctionalDependency>) -> Schema {
        Schema::new("s", vec![rel], fds)
    }

    #[test]
    fn splits_multi_dependent_fds() {
        let fd = FunctionalDependency::of("FD2", &["a"], &["c", "b"]);
        let parts = fd.split();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].label(), "FD2.a");
        assert_eq!(parts[0].dependents(), &["b"].into_iter().collect());
        assert_eq!(parts[1].label(), "FD2.b");
        assert_eq!(parts[1].dependents(), &["c"].into_iter().collect());
    }

    #[test]
    fn alpha_suffix_rolls_over() {
        assert_eq!(alpha_suffix(0), "a");
        assert_eq!(alpha_suffix(25), "z");
        assert_eq!(alpha_suffix(26), "aa");
        assert_eq!(alpha_suffix(27), "ab");
        assert_eq!(alpha_suffix(26 + 26 * 26), "aaa");
    }

    #[test]
    fn trivial_fd_is_a_violation() {
        let s = single(
            RelationSchema::of("R", &["a", "b"], &["a"]),
            vec![FunctionalDependency::of("F", &["a"], &["a"])],
        );
        let report = validate_schema(&s);
        assert!(!report.is_ok());
        assert!(report.has(Rule::TrivialFd));
        assert_eq!(report.errors().next().unwrap().rule.description(), "trivial FD");
    }

    #[test]
    fn empty_relation_is_a_violation() {
        let s = single(RelationSchema::of("R", &[], &["a"]), vec![]);
        let report = validate_schema(&s);
        assert!(report.has(Rule::EmptyRelation));
        assert!(report.has(Rule::UnknownKeyAttribute));
    }

    #[test]
    fn structural_violations_are_named() {
        let s = Schema::new(
            "s",
            vec![
                RelationSchema::of("R", &["a", "a", "b c"], &[]),
                RelationSchema::of("R", &["x"], &["x"]),
            ],
            vec![
                FunctionalDependency::of("F", &["a"], &["zz"]),
                FunctionalDependency::of("F", &[], &["a"]),
            ],
        );
        let report = validate_schema(&s);
        for rule in [
            Rule::DuplicateRelation,
            Rule::DuplicateAttribute,
            Rule::InvalidName,
            Rule::EmptyPrimaryKey,
            Rule::UnknownFdAttribute,
            Rule::DuplicateFdLabel,
            Rule::EmptyDeterminant,
        ] {
            assert!(report.has(rule), "missing {rule:?}");
        }
        let unknown = report
            .violations
            .iter()
            .find(|v| v.rule == Rule::UnknownFdAttribute)
            .unwrap();
        assert_eq!(unknown.subject, "fd F");
        assert_eq!(unknown.detail, "zz");
    }

    #[test]
    fn weak_primary_keys_only_warn() {
        let not_superkey = single(
            RelationSchema::of("R", &["a", "b"], &["a"]),
            vec![],
        );
        let report = validate_schema(&not_superkey);
        assert!(report.is_ok());
        assert!(report.has(Rule::PrimaryKeyNotSuperkey));

        let not_minimal = single(
            RelationSchema::of("R", &["a", "b"], &["a", "b"]),
            vec![FunctionalDependency::of("F", &["a"], &["b"])],
        );
        let report = validate_schema(&not_minimal);
        assert!(report.is_ok());
        assert!(report.has(Rule::PrimaryKeyNotMinimal));
    }

    #[test]
    fn normal_form_levels() {
        let levels: Vec<u8> = NormalForm::ALL.iter().map(|nf| nf.level()).collect();
        assert_eq!(levels, vec![0, 1, 2, 3, 4]);
        assert!(NormalForm::Third < NormalForm::Bcnf);
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("propertyNo"));
        assert!(is_identifier("_x9"));
        assert!(!is_identifier("9x"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("a b"));
        assert!(is_label("FD2.a"));
        assert!(!is_label("FD2."));
    }
}
