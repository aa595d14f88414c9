//! The staff/property inspection walkthrough, step by step.

mod support;

use std::collections::BTreeSet;

use normcomp::completeness::Rational;
use normcomp::fd::DEFAULT_KEY_CAP;
use normcomp::fixtures::{self, INSPECTION, STAFF_INSPECTION, STAFF_PROPERTY_INSPECTION};
use normcomp::{
    candidate_keys, classify_nf, closure, decompose_step, is_superkey, normalize_to_bcnf, parse_schema,
    partition_preventing, prime_attributes, project_fds, relation_nc, schema_nc, validate_schema, AttributeSet,
    ClassificationMode, NormalForm, SourceDocument, TransformOptions,
};
use support::{brute_force_keys, naive_closure, naive_project, plain, plain_fds};

const PAPER: ClassificationMode = ClassificationMode::Paper;

fn set(names: &[&str]) -> AttributeSet {
    names.iter().copied().collect()
}

fn strings(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn labels(fds: &[normcomp::FunctionalDependency]) -> Vec<&str> {
    fds.iter().map(|f| f.label()).collect()
}

#[test]
fn fixture_file_matches_the_in_code_schema() {
    let parsed = parse_schema(&SourceDocument::new(fixtures::CASE_STUDY_DSL, "case_study.nls")).unwrap();
    assert_eq!(parsed, fixtures::case_study());
    assert_eq!(parsed.relations().len(), 1);
    assert_eq!(parsed.fds().len(), 16);
    let report = validate_schema(&parsed);
    assert!(report.is_ok(), "{:?}", report.violations);
    assert!(report.violations.is_empty());
}

#[test]
fn closures_agree_with_the_naive_fixpoint() {
    let fds = fixtures::case_study_fds();
    let oracle = plain_fds(&fds);

    let key = set(&["propertyNo", "iDate"]);
    assert_eq!(plain(&closure(&key, &fds)), naive_closure(&strings(&["propertyNo", "iDate"]), &oracle));
    assert_eq!(closure(&key, &fds), set(&STAFF_PROPERTY_INSPECTION));

    let staff = set(&["staffNo"]);
    assert_eq!(plain(&closure(&staff, &fds)), naive_closure(&strings(&["staffNo"]), &oracle));
    assert_eq!(closure(&staff, &fds), set(&["staffNo", "sName"]));

    assert_eq!(closure(&set(&["propertyNo"]), &fds), set(&["propertyNo", "pAddress"]));
}

#[test]
fn superkeys_of_the_wide_relation() {
    let rel = fixtures::staff_property_inspection();
    let fds = project_fds(&fixtures::case_study_fds(), &rel.attribute_set());
    assert!(is_superkey(&set(&["propertyNo", "iDate"]), &rel, &fds).unwrap());
    assert!(!is_superkey(&set(&["propertyNo"]), &rel, &fds).unwrap());
    assert!(is_superkey(&rel.attribute_set(), &rel, &fds).unwrap());
}

#[test]
fn candidate_keys_match_brute_force() {
    let fds = fixtures::case_study_fds();
    for rel in [
        fixtures::staff_property_inspection(),
        fixtures::staff_inspection(),
        fixtures::inspection(),
        fixtures::property(),
        fixtures::staff(),
    ] {
        let names: Vec<String> = rel.attributes().iter().map(|a| a.name.to_string()).collect();
        let oracle = brute_force_keys(&names, &naive_project(&plain_fds(&fds), &plain(&rel.attribute_set())));
        let keys = candidate_keys(&rel, &fds, DEFAULT_KEY_CAP).unwrap();
        let got: BTreeSet<BTreeSet<String>> = keys.iter().map(plain).collect();
        assert_eq!(got, oracle, "{}", rel.name());
    }

    let keys = candidate_keys(&fixtures::staff_property_inspection(), &fds, DEFAULT_KEY_CAP).unwrap();
    assert_eq!(
        keys.keys(),
        &[
            set(&["propertyNo", "iDate"]),
            set(&["carReg", "iDate", "iTime"]),
            set(&["staffNo", "iDate", "iTime"]),
        ]
    );
    assert_eq!(
        prime_attributes(&fixtures::staff_property_inspection(), &fds, DEFAULT_KEY_CAP).unwrap(),
        set(&["propertyNo", "iDate", "carReg", "iTime", "staffNo"])
    );
    assert_eq!(
        candidate_keys(&fixtures::property(), &fds, DEFAULT_KEY_CAP).unwrap().keys(),
        &[set(&["propertyNo"])]
    );
    assert_eq!(
        prime_attributes(&fixtures::property(), &fds, DEFAULT_KEY_CAP).unwrap(),
        set(&["propertyNo"])
    );
}

#[test]
fn projections_drop_dependencies_on_removed_attributes() {
    let fds = fixtures::case_study_fds();
    assert_eq!(
        labels(&project_fds(&fds, &set(&STAFF_INSPECTION))),
        vec!["FD1", "FD2", "FD3", "FD4", "FD5", "FD7", "FD8", "FD9", "FD11", "FD12", "FD13", "FD14", "FD16"]
    );
    // FD5 (propertyNo, iDate -> carReg) mentions neither pAddress nor sName,
    // so it survives alongside FD1-FD3.
    let inspection = project_fds(&fds, &set(&INSPECTION));
    assert_eq!(
        labels(&inspection),
        vec!["FD1", "FD2", "FD3", "FD5", "FD8", "FD9", "FD11", "FD12", "FD14", "FD16"]
    );
    assert_eq!(
        inspection.len(),
        naive_project(&plain_fds(&fds), &strings(&INSPECTION)).len()
    );
    let everything = fds.iter().fold(AttributeSet::new(), |acc, fd| acc.union(&fd.attributes()));
    assert_eq!(project_fds(&fds, &everything), fds);
}

#[test]
fn step_one_wide_relation() {
    let fds = fixtures::case_study_fds();
    let rel = fixtures::staff_property_inspection();
    assert_eq!(classify_nf(&rel, &fds, PAPER).unwrap(), NormalForm::First);

    let part = partition_preventing(&rel, &fds);
    assert_eq!(part.preventing_labels(), vec!["FD6", "FD7", "FD8"]);
    assert_eq!(
        part.non_preventing_labels(),
        vec!["FD1", "FD2", "FD3", "FD4", "FD5", "FD9", "FD10", "FD11", "FD12", "FD13", "FD14", "FD15", "FD16"]
    );
    assert_eq!((part.completeness_count(), part.preventing_count(), part.total_attrs), (8, 6, 8));
    // staffNo sits in both unions.
    assert!(part.completeness_attrs.contains(&"staffNo".into()));
    assert!(part.preventing_attrs.contains(&"staffNo".into()));

    let nc = relation_nc(&rel, &fds, PAPER).unwrap();
    assert_eq!(nc.membership.value(), Rational::new(5, 8));
    assert_eq!(nc.nc, Rational::new(13, 8));
    assert_eq!(nc.nc_display, "1.62");
}

#[test]
fn step_two_after_first_split() {
    let fds = fixtures::case_study_fds();
    let rel = fixtures::staff_inspection();
    assert_eq!(classify_nf(&rel, &fds, PAPER).unwrap(), NormalForm::Second);

    let part = partition_preventing(&rel, &fds);
    assert_eq!(part.preventing_labels(), vec!["FD7", "FD8"]);
    assert_eq!(
        part.non_preventing_labels(),
        vec!["FD1", "FD2", "FD3", "FD4", "FD5", "FD9", "FD11", "FD12", "FD13", "FD14", "FD16"]
    );
    assert_eq!((part.completeness_count(), part.preventing_count(), part.total_attrs), (7, 4, 7));

    let nc = relation_nc(&rel, &fds, PAPER).unwrap();
    assert_eq!(nc.nc, Rational::from_integer(2) + Rational::new(5, 7));
    assert_eq!(nc.nc_display, "2.71");

    let total = schema_nc(&fixtures::case_study_first(), PAPER).unwrap();
    assert_eq!(total.total, Rational::from_integer(6) + Rational::new(5, 7));
    assert_eq!(total.total_display, "6.71");
    assert_eq!(total.sum_line(), "2.71 + 4 = 6.71");
}

#[test]
fn step_three_after_second_split() {
    let fds = fixtures::case_study_fds();
    let rel = fixtures::inspection();
    assert_eq!(classify_nf(&rel, &fds, PAPER).unwrap(), NormalForm::Third);

    let part = partition_preventing(&rel, &fds);
    assert_eq!(part.preventing_labels(), vec!["FD8"]);
    assert_eq!((part.completeness_count(), part.preventing_count(), part.total_attrs), (6, 3, 6));

    let nc = relation_nc(&rel, &fds, PAPER).unwrap();
    assert_eq!(nc.nc, Rational::new(15, 4));
    assert_eq!(nc.nc_display, "3.75");

    for bcnf in [fixtures::property(), fixtures::staff()] {
        let r = relation_nc(&bcnf, &fds, PAPER).unwrap();
        assert_eq!(r.normal_form, NormalForm::Bcnf);
        assert_eq!(r.nc, Rational::from_integer(4));
        assert_eq!(r.nc_display, "4.00");
    }

    let total = schema_nc(&fixtures::case_study_second(), PAPER).unwrap();
    assert_eq!(total.total, Rational::new(47, 4));
    assert_eq!(total.total_display, "11.75");
    assert_eq!(total.sum_line(), "3.75 + 4 + 4 = 11.75");
}

#[test]
fn decomposition_reproduces_the_intermediate_schemas() {
    let opts = TransformOptions::with_names(fixtures::case_study_names());

    let first = decompose_step(&fixtures::case_study(), "StaffPropertyInspection", &opts).unwrap();
    assert_eq!(first.moved_fd_labels, vec!["FD6"]);
    assert_eq!(first.new_relation, fixtures::property());
    assert_eq!(first.reduced_relation, fixtures::staff_inspection());
    assert_eq!(first.schema_after, fixtures::case_study_first());

    let second = decompose_step(&first.schema_after, "StaffInspection", &opts).unwrap();
    assert_eq!(second.moved_fd_labels, vec!["FD7"]);
    assert_eq!(second.new_relation, fixtures::staff());
    assert_eq!(second.reduced_relation, fixtures::inspection());
    assert_eq!(second.schema_after, fixtures::case_study_second());

    let third = decompose_step(&second.schema_after, "Inspection", &opts).unwrap();
    assert_eq!(third.moved_fd_labels, vec!["FD8"]);
    assert_eq!(third.new_relation.to_string(), "Inspection_iDate_staffNo(iDate, staffNo, carReg)");
    assert_eq!(third.new_relation.primary_key(), &set(&["staffNo", "iDate"]));
    assert_eq!(
        third.reduced_relation.to_string(),
        "Inspection(propertyNo, iDate, iTime, comments, staffNo)"
    );
    for rel in third.schema_after.relations() {
        assert_eq!(
            classify_nf(rel, third.schema_after.fds(), PAPER).unwrap(),
            NormalForm::Bcnf,
            "{}",
            rel.name()
        );
    }
}

#[test]
fn full_normalization_trace() {
    let trace = normalize_to_bcnf(
        &fixtures::case_study(),
        &TransformOptions::with_names(fixtures::case_study_names()),
    )
    .unwrap();
    assert_eq!(trace.steps.len(), 3);
    let totals: Vec<&str> = std::iter::once(trace.steps[0].nc_before.total_display.as_str())
        .chain(trace.steps.iter().map(|s| s.nc_after.total_display.as_str()))
        .collect();
    assert_eq!(totals, vec!["1.62", "6.71", "11.75", "16.00"]);
    assert_eq!(trace.final_schema.relations().len(), 4);
    assert_eq!(
        schema_nc(&trace.final_schema, PAPER).unwrap().total,
        Rational::from_integer(16)
    );
}

#[test]
fn strict_mode_is_labelled_and_separate() {
    let nc = schema_nc(&fixtures::case_study_first(), ClassificationMode::Strict).unwrap();
    // StaffInspection drops to 1NF under all-candidate-key definitions.
    assert_eq!(nc.per_relation[0].normal_form, NormalForm::First);
    assert_eq!(nc.per_relation[0].nc_display, "1.71");
    // Paper-mode values are unaffected.
    assert_eq!(schema_nc(&fixtures::case_study_first(), PAPER).unwrap().total_display, "6.71");
}
