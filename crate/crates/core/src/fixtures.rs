//! The staff/property inspection example, built in code.
//!
//! `fixtures/case_study.nls` holds the same schema in DSL form; a test keeps
//! the two in sync.

use crate::model::{FunctionalDependency, RelationSchema, Schema};
use crate::transform::SplitNames;

pub const CASE_STUDY_DSL: &str = include_str!("../fixtures/case_study.nls");
pub const CASE_STUDY_NAMES: &str = include_str!("../fixtures/case_study.names");

pub const STAFF_PROPERTY_INSPECTION: [&str; 8] = [
    "propertyNo",
    "iDate",
    "iTime",
    "pAddress",
    "comments",
    "staffNo",
    "sName",
    "carReg",
];

pub const STAFF_INSPECTION: [&str; 7] = [
    "propertyNo",
    "iDate",
    "iTime",
    "comments",
    "staffNo",
    "sName",
    "carReg",
];

pub const INSPECTION: [&str; 6] = ["propertyNo", "iDate", "iTime", "comments", "staffNo", "carReg"];

pub const PRIMARY_KEY: [&str; 2] = ["propertyNo", "iDate"];

pub fn case_study_fds() -> Vec<FunctionalDependency> {
    let pk = &["propertyNo", "iDate"][..];
    let car = &["carReg", "iDate", "iTime"][..];
    let staff = &["staffNo", "iDate", "iTime"][..];
    vec![
        FunctionalDependency::of("FD1", pk, &["iTime"]),
        FunctionalDependency::of("FD2", pk, &["comments"]),
        FunctionalDependency::of("FD3", pk, &["staffNo"]),
        FunctionalDependency::of("FD4", pk, &["sName"]),
        FunctionalDependency::of("FD5", pk, &["carReg"]),
        FunctionalDependency::of("FD6", &["propertyNo"], &["pAddress"]),
        FunctionalDependency::of("FD7", &["staffNo"], &["sName"]),
        FunctionalDependency::of("FD8", &["staffNo", "iDate"], &["carReg"]),
        FunctionalDependency::of("FD9", car, &["propertyNo"]),
        FunctionalDependency::of("FD10", car, &["pAddress"]),
        FunctionalDependency::of("FD11", car, &["comments"]),
        FunctionalDependency::of("FD12", car, &["staffNo"]),
        FunctionalDependency::of("FD13", car, &["sName"]),
        FunctionalDependency::of("FD14", staff, &["propertyNo"]),
        FunctionalDependency::of("FD15", staff, &["pAddress"]),
        FunctionalDependency::of("FD16", staff, &["comments"]),
    ]
}

pub fn staff_property_inspection() -> RelationSchema {
    RelationSchema::of("StaffPropertyInspection", &STAFF_PROPERTY_INSPECTION, &PRIMARY_KEY)
}

pub fn staff_inspection() -> RelationSchema {
    RelationSchema::of("StaffInspection", &STAFF_INSPECTION, &PRIMARY_KEY)
}

pub fn inspection() -> RelationSchema {
    RelationSchema::of("Inspection", &INSPECTION, &PRIMARY_KEY)
}

pub fn property() -> RelationSchema {
    RelationSchema::of("Property", &["propertyNo", "pAddress"], &["propertyNo"])
}

pub fn staff() -> RelationSchema {
    RelationSchema::of("Staff", &["staffNo", "sName"], &["staffNo"])
}

/// Initial schema: one relation, sixteen dependencies.
pub fn case_study() -> Schema {
    Schema::new("case_study", vec![staff_property_inspection()], case_study_fds())
}

/// After the first split.
pub fn case_study_first() -> Schema {
    Schema::new(
        "case_study",
        vec![staff_inspection(), property()],
        case_study_fds(),
    )
}

/// After the second split.
pub fn case_study_second() -> Schema {
    Schema::new(
        "case_study",
        vec![inspection(), property(), staff()],
        case_study_fds(),
    )
}

/// Relation names used for the case-study decomposition.
pub fn case_study_names() -> SplitNames {
    SplitNames::parse(CASE_STUDY_NAMES).expect("bundled names file parses")
}
