use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("attribute `{attribute}` is not part of relation `{relation}`")]
    ForeignAttribute { relation: String, attribute: String },

    #[error("relation `{relation}` has {attributes} attributes, key search is capped at {cap}")]
    Capacity {
        relation: String,
        attributes: usize,
        cap: usize,
    },

    #[error("membership counts out of range: c={c}, p={p}, n={n}")]
    MembershipRange { c: usize, p: usize, n: usize },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("relation `{0}` is already in BCNF")]
    AlreadyBcnf(String),

    #[error("relation `{relation}` has non-atomic attribute `{attribute}`; decomposition cannot repair 1NF")]
    NonAtomic { relation: String, attribute: String },

    #[error("every preventing dependency of `{relation}` moves a primary-key attribute (`{attribute}`)")]
    KeyDependent { relation: String, attribute: String },
}
