//! Text and structured (JSON) rendering of analysis results.
//!
//! Structured output goes through `serde_json::Value`, whose object maps keep
//! keys sorted, so identical input gives byte-identical output. Exact
//! rationals are written as `{"num", "den", "display"}` objects.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{ClassificationMode, FdPartition};
use crate::completeness::{ExactValue, RelationNc, SchemaNc};
use crate::dsl::emit_schema;
use crate::fd::CandidateKeySet;
use crate::model::{FunctionalDependency, RelationSchema, Schema, ValidationReport};
use crate::transform::{TransformStep, TransformTrace};

/// Identifies the structured layout; bumped on incompatible changes.
pub const FORMAT_VERSION: &str = "normcomp/1";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Structured,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "structured" | "json" => Ok(Format::Structured),
            other => Err(format!("unknown format `{other}` (expected text or structured)")),
        }
    }
}

/// Anything the tool can print.
#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Nc {
        schema: &'a Schema,
        mode: ClassificationMode,
        nc: &'a SchemaNc,
    },
    Trace {
        mode: ClassificationMode,
        trace: &'a TransformTrace,
        /// Include every intermediate schema in DSL form.
        show_schemas: bool,
    },
    Partition {
        relation: &'a str,
        partition: &'a FdPartition,
    },
    Keys {
        schema: &'a Schema,
        keys: &'a [(String, CandidateKeySet)],
    },
    Check {
        schema: &'a Schema,
        validation: &'a ValidationReport,
    },
}

pub fn emit_report(report: Report<'_>, format: Format) -> String {
    match format {
        Format::Text => text(report),
        Format::Structured => {
            let mut out = serde_json::to_string_pretty(&structured(report)).expect("json values always serialize");
            out.push('\n');
            out
        }
    }
}

fn labels(fds: &[FunctionalDependency]) -> Vec<&str> {
    fds.iter().map(FunctionalDependency::label).collect()
}

fn label_list(fds: &[FunctionalDependency]) -> String {
    if fds.is_empty() {
        "(none)".into()
    } else {
        labels(fds).join(", ")
    }
}

fn heading(relation: &RelationSchema) -> String {
    format!("{} key({})", relation, relation.primary_key().join(", "))
}

fn text(report: Report<'_>) -> String {
    let mut out = String::new();
    match report {
        Report::Nc { schema, mode, nc } => {
            writeln!(out, "schema {} (mode: {mode})", schema.name()).unwrap();
            for (relation, rnc) in schema.relations().iter().zip(&nc.per_relation) {
                out.push('\n');
                relation_text(&mut out, relation, rnc);
            }
            writeln!(out, "\nschema NC = {}", nc.sum_line()).unwrap();
        }
        Report::Trace { mode, trace, show_schemas } => trace_text(&mut out, mode, trace, show_schemas),
        Report::Partition { relation, partition } => {
            writeln!(out, "relation {relation}").unwrap();
            partition_text(&mut out, partition);
        }
        Report::Keys { schema, keys } => {
            writeln!(out, "schema {}", schema.name()).unwrap();
            for (name, set) in keys {
                writeln!(out, "relation {name}: {} candidate key(s)", set.len()).unwrap();
                for key in set.iter() {
                    writeln!(out, "  {key}").unwrap();
                }
            }
        }
        Report::Check { schema, validation } => {
            for v in &validation.violations {
                writeln!(out, "{v}").unwrap();
            }
            let errors = validation.errors().count();
            let warnings = validation.warnings().count();
            let verdict = if validation.is_ok() { "ok" } else { "invalid" };
            writeln!(
                out,
                "schema {}: {verdict} ({} relation(s), {} dependencies, {errors} error(s), {warnings} warning(s))",
                schema.name(),
                schema.relations().len(),
                schema.fds().len()
            )
            .unwrap();
        }
    }
    out
}

fn partition_text(out: &mut String, p: &FdPartition) {
    writeln!(out, "  preventing: {}", label_list(&p.preventing)).unwrap();
    writeln!(out, "  non-preventing: {}", label_list(&p.non_preventing)).unwrap();
    writeln!(out, "  completeness attributes c = {}", p.completeness_count()).unwrap();
    writeln!(out, "  preventing attributes p = {}", p.preventing_count()).unwrap();
    writeln!(out, "  total attributes n = {}", p.total_attrs).unwrap();
}

fn relation_text(out: &mut String, relation: &RelationSchema, r: &RelationNc) {
    writeln!(out, "relation {}", heading(relation)).unwrap();
    writeln!(out, "  normal form: {} (N = {})", r.normal_form, r.n()).unwrap();
    partition_text(out, &r.partition);
    if r.normal_form == crate::model::NormalForm::Bcnf {
        writeln!(out, "  x = 1 (BCNF)").unwrap();
    } else {
        let p = &r.partition;
        let x = r.membership.value();
        writeln!(
            out,
            "  x = ((c / n) + (1 - (p / n))) / 2 = (({} / {n}) + (1 - ({} / {n}))) / 2 = {x} ~ {}",
            p.completeness_count(),
            p.preventing_count(),
            crate::completeness::truncate_2dp(x),
            n = p.total_attrs,
        )
        .unwrap();
    }
    writeln!(out, "  NC = {}", r.nc_display).unwrap();
}

fn trace_text(out: &mut String, mode: ClassificationMode, trace: &TransformTrace, show_schemas: bool) {
    writeln!(out, "schema {} (mode: {mode})", trace.initial.name()).unwrap();
    if show_schemas {
        writeln!(out, "\n-- initial schema").unwrap();
        out.push_str(&emit_schema(&trace.initial));
    }
    if let Some(first) = trace.steps.first() {
        writeln!(out, "\ninitial NC = {}", first.nc_before.sum_line()).unwrap();
    }
    for (i, step) in trace.steps.iter().enumerate() {
        step_text(out, i + 1, step);
        if show_schemas {
            writeln!(out, "\n-- schema after step {}", i + 1).unwrap();
            out.push_str(&emit_schema(&step.schema_after));
        }
    }
    let totals: Vec<&str> = trace
        .steps
        .first()
        .map(|s| s.nc_before.total_display.as_str())
        .into_iter()
        .chain(trace.steps.iter().map(|s| s.nc_after.total_display.as_str()))
        .collect();
    writeln!(out).unwrap();
    if totals.is_empty() {
        writeln!(out, "no decomposition needed: every relation is in BCNF").unwrap();
    } else {
        writeln!(out, "NC progression: {}", totals.join(" -> ")).unwrap();
    }
    let final_names: Vec<String> = trace.final_schema.relations().iter().map(|r| r.to_string()).collect();
    writeln!(out, "final relations: {}", final_names.join(", ")).unwrap();
    if !trace.lost_dependencies.is_empty() {
        writeln!(
            out,
            "warning: dependencies not preserved by any single relation: {}",
            trace.lost_dependencies.join(", ")
        )
        .unwrap();
    }
}

fn step_text(out: &mut String, index: usize, step: &TransformStep) {
    writeln!(
        out,
        "\nstep {index}: split {} on {} (moved {})",
        step.source_relation,
        step.determinant,
        step.moved_fd_labels.join(", ")
    )
    .unwrap();
    writeln!(out, "  new relation: {}", heading(&step.new_relation)).unwrap();
    if !step.new_relation_bcnf {
        writeln!(out, "  note: {} is not yet in BCNF", step.new_relation.name()).unwrap();
    }
    writeln!(out, "  reduced relation: {}", heading(&step.reduced_relation)).unwrap();
    writeln!(out, "  NC before = {}", step.nc_before.sum_line()).unwrap();
    writeln!(out, "  NC after = {}", step.nc_after.sum_line()).unwrap();
}

fn to_value<T: Serialize>(v: T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn partition_value(p: &FdPartition) -> Value {
    json!({
        "preventing": labels(&p.preventing),
        "non_preventing": labels(&p.non_preventing),
        "completeness_attrs": to_value(&p.completeness_attrs),
        "preventing_attrs": to_value(&p.preventing_attrs),
        "c": p.completeness_count(),
        "p": p.preventing_count(),
        "n": p.total_attrs,
    })
}

fn relation_value(relation: &RelationSchema) -> Value {
    json!({
        "name": relation.name(),
        "attributes": relation.attributes().iter().map(|a| json!({"name": a.name, "atomic": a.atomic})).collect::<Vec<_>>(),
        "primary_key": to_value(relation.primary_key()),
    })
}

fn relation_nc_value(r: &RelationNc) -> Value {
    json!({
        "relation": r.relation_name,
        "normal_form": r.normal_form,
        "n": r.n(),
        "partition": partition_value(&r.partition),
        "membership": ExactValue::from(r.membership.value()),
        "nc": ExactValue::from(r.nc),
    })
}

fn schema_nc_value(nc: &SchemaNc) -> Value {
    json!({
        "relations": nc.per_relation.iter().map(relation_nc_value).collect::<Vec<_>>(),
        "total": ExactValue::from(nc.total),
        "sum": nc.sum_line(),
    })
}

fn schema_value(schema: &Schema) -> Value {
    json!({
        "name": schema.name(),
        "relations": schema.relations().iter().map(relation_value).collect::<Vec<_>>(),
        "fds": schema.fds().iter().map(|fd| json!({
            "label": fd.label(),
            "determinant": to_value(fd.determinant()),
            "dependents": to_value(fd.dependents()),
        })).collect::<Vec<_>>(),
    })
}

fn structured(report: Report<'_>) -> Value {
    let (kind, body) = match report {
        Report::Nc { schema, mode, nc } => (
            "nc",
            json!({ "schema": schema.name(), "mode": mode, "nc": schema_nc_value(nc) }),
        ),
        Report::Trace { mode, trace, show_schemas } => {
            let steps: Vec<Value> = trace
                .steps
                .iter()
                .map(|s| {
                    let mut v = json!({
                        "source_relation": s.source_relation,
                        "moved": s.moved_fd_labels,
                        "determinant": to_value(&s.determinant),
                        "new_relation": relation_value(&s.new_relation),
                        "new_relation_bcnf": s.new_relation_bcnf,
                        "reduced_relation": relation_value(&s.reduced_relation),
                        "nc_before": schema_nc_value(&s.nc_before),
                        "nc_after": schema_nc_value(&s.nc_after),
                    });
                    if show_schemas {
                        v["schema_after"] = schema_value(&s.schema_after);
                    }
                    v
                })
                .collect();
            (
                "trace",
                json!({
                    "mode": mode,
                    "initial": schema_value(&trace.initial),
                    "steps": steps,
                    "final": schema_value(&trace.final_schema),
                    "lost_dependencies": trace.lost_dependencies,
                }),
            )
        }
        Report::Partition { relation, partition } => (
            "partition",
            json!({ "relation": relation, "partition": partition_value(partition) }),
        ),
        Report::Keys { schema, keys } => (
            "keys",
            json!({
                "schema": schema.name(),
                "relations": keys.iter().map(|(name, set)| json!({
                    "relation": name,
                    "candidate_keys": to_value(set),
                    "prime_attributes": to_value(set.prime_attributes()),
                })).collect::<Vec<_>>(),
            }),
        ),
        Report::Check { schema, validation } => (
            "check",
            json!({
                "schema": schema.name(),
                "ok": validation.is_ok(),
                "violations": to_value(&validation.violations),
            }),
        ),
    };
    json!({ "format": FORMAT_VERSION, "kind": kind, "report": body })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completeness::schema_nc;

    #[test]
    fn empty_schema_report() {
        let schema = Schema::new("empty", vec![], vec![]);
        let nc = schema_nc(&schema, ClassificationMode::Paper).unwrap();
        let report = Report::Nc {
            schema: &schema,
            mode: ClassificationMode::Paper,
            nc: &nc,
        };
        assert!(emit_report(report, Format::Text).contains("schema NC = 0.00"));
        let v: Value = serde_json::from_str(&emit_report(report, Format::Structured)).unwrap();
        assert_eq!(v["report"]["nc"]["total"], json!({"num": 0, "den": 1, "display": "0.00"}));
    }

    #[test]
    fn format_parses() {
        assert_eq!("text".parse::<Format>().unwrap(), Format::Text);
        assert_eq!("structured".parse::<Format>().unwrap(), Format::Structured);
        assert!("xml".parse::<Format>().is_err());
    }
}
