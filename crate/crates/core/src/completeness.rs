//! Fuzzy membership and normalization-completeness scores.
//!
//! All arithmetic is exact. Two-decimal truncation happens only when a
//! display string is produced.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::classify::{classify_nf_with_cap, partition_preventing, ClassificationMode, FdPartition};
use crate::error::{Error, Result};
use crate::fd::DEFAULT_KEY_CAP;
use crate::model::{FunctionalDependency, NormalForm, RelationSchema, Schema};

pub type Rational = Ratio<i64>;

/// Floor of `value` to two decimals, e.g. `5/8 -> "0.62"`.
pub fn truncate_2dp(value: Rational) -> String {
    let hundredths = (value * Rational::from_integer(100)).floor().to_integer();
    let sign = if hundredths < 0 { "-" } else { "" };
    let abs = hundredths.unsigned_abs();
    format!("{sign}{}.{:02}", abs / 100, abs % 100)
}

/// A membership degree in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FuzzyMembership(Rational);

impl FuzzyMembership {
    pub const FULL: FuzzyMembership = FuzzyMembership(Ratio::new_raw(1, 1));
    pub const NONE: FuzzyMembership = FuzzyMembership(Ratio::new_raw(0, 1));

    pub fn new(value: Rational) -> Option<Self> {
        (value >= Rational::zero() && value <= Rational::from_integer(1)).then_some(Self(value))
    }

    pub fn value(self) -> Rational {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// `((c / n) + (1 - p / n)) / 2`, i.e. `(c + n - p) / 2n`.
pub fn fuzzy_membership(c: usize, p: usize, n: usize) -> Result<FuzzyMembership> {
    if n == 0 || c > n || p > n {
        return Err(Error::MembershipRange { c, p, n });
    }
    let (c, p, n) = (c as i64, p as i64, n as i64);
    let value = (Rational::new(c, n) + (Rational::from_integer(1) - Rational::new(p, n))) / 2;
    Ok(FuzzyMembership::new(value).expect("membership within [0, 1] for admissible counts"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationNc {
    pub relation_name: String,
    pub normal_form: NormalForm,
    pub partition: FdPartition,
    /// Reported as 1 for BCNF relations.
    pub membership: FuzzyMembership,
    pub nc: Rational,
    pub nc_display: String,
}

impl RelationNc {
    pub fn n(&self) -> u8 {
        self.normal_form.level()
    }
}

pub fn relation_nc(relation: &RelationSchema, fds: &[FunctionalDependency], mode: ClassificationMode) -> Result<RelationNc> {
    relation_nc_with_cap(relation, fds, mode, DEFAULT_KEY_CAP)
}

pub fn relation_nc_with_cap(
    relation: &RelationSchema,
    fds: &[FunctionalDependency],
    mode: ClassificationMode,
    key_cap: usize,
) -> Result<RelationNc> {
    let normal_form = classify_nf_with_cap(relation, fds, mode, key_cap)?;
    let partition = partition_preventing(relation, fds);
    let level = Rational::from_integer(i64::from(normal_form.level()));
    let (membership, nc) = if normal_form == NormalForm::Bcnf {
        (FuzzyMembership::FULL, level)
    } else {
        let x = fuzzy_membership(
            partition.completeness_count(),
            partition.preventing_count(),
            partition.total_attrs,
        )?;
        (x, level + x.value())
    };
    Ok(RelationNc {
        relation_name: relation.name().to_string(),
        normal_form,
        partition,
        membership,
        nc,
        nc_display: truncate_2dp(nc),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaNc {
    pub per_relation: Vec<RelationNc>,
    pub total: Rational,
    pub total_display: String,
}

impl SchemaNc {
    pub fn relation(&self, name: &str) -> Option<&RelationNc> {
        self.per_relation.iter().find(|r| r.relation_name == name)
    }

    /// `2.71 + 4 = 6.71`; a lone relation renders as just its score.
    pub fn sum_line(&self) -> String {
        let terms: Vec<String> = self
            .per_relation
            .iter()
            .map(|r| {
                if r.nc.is_integer() {
                    r.nc.to_integer().to_string()
                } else {
                    r.nc_display.clone()
                }
            })
            .collect();
        match terms.len() {
            0 | 1 => self.total_display.clone(),
            _ => format!("{} = {}", terms.join(" + "), self.total_display),
        }
    }
}

pub fn schema_nc(schema: &Schema, mode: ClassificationMode) -> Result<SchemaNc> {
    schema_nc_with_cap(schema, mode, DEFAULT_KEY_CAP)
}

pub fn schema_nc_with_cap(schema: &Schema, mode: ClassificationMode, key_cap: usize) -> Result<SchemaNc> {
    let per_relation = schema
        .relations()
        .iter()
        .map(|r| relation_nc_with_cap(r, schema.fds(), mode, key_cap))
        .collect::<Result<Vec<_>>>()?;
    let total = per_relation.iter().fold(Rational::zero(), |acc, r| acc + r.nc);
    Ok(SchemaNc {
        per_relation,
        total,
        total_display: truncate_2dp(total),
    })
}

/// Exact value plus its display string, for structured output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactValue {
    pub num: i64,
    pub den: i64,
    pub display: String,
}

impl From<Rational> for ExactValue {
    fn from(value: Rational) -> Self {
        ExactValue {
            num: *value.numer(),
            den: *value.denom(),
            display: truncate_2dp(value),
        }
    }
}
